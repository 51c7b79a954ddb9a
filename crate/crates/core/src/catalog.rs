//! The five model families D1, D2, D3, D5 and D11 of closed five-dimensional
//! unimodular solvable contact Lie groups.
//!
//! Each family is given by its brackets in a reference basis `X₁…X₅`, the
//! parameterized brackets after a lower-unitriangular change of basis
//! `Y = Λ·X`, the parameter values under which a diagonal metric stays
//! diagonal, and the conserved quantities and asymptotic exponents claimed for
//! the resulting flows. The families D4 and D6–D10 of the full classification
//! are not part of the catalog.

mod printed;

pub use printed::{printed_ricci_diagonal, printed_system};

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::invariants::{InvariantMonomial, SpecialInvariant};
use crate::lie::{LieError, StructureConstants};

pub const DIM: usize = 5;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown model `{0}` (expected one of D1, D2, D3, D5, D11)")]
    UnknownModel(String),
    #[error("parameter `{name}` does not belong to model {model}")]
    UnknownParameter { model: ModelId, name: String },
    #[error("parameters were built for {found} but model {expected} was requested")]
    ParamModelMismatch { expected: ModelId, found: ModelId },
    #[error("case `{case}` is not defined for model {model}")]
    UnknownCase { model: ModelId, case: String },
    #[error("malformed parameter assignment `{0}`")]
    BadParamSyntax(String),
    #[error("initial data must be five finite positive reals, got {0:?}")]
    InvalidInitialData(Vec<f64>),
    #[error(transparent)]
    Lie(#[from] LieError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ModelId {
    D1,
    D2,
    D3,
    D5,
    D11,
}

impl ModelId {
    pub const ALL: [ModelId; 5] = [ModelId::D1, ModelId::D2, ModelId::D3, ModelId::D5, ModelId::D11];

    pub fn name(self) -> &'static str {
        match self {
            ModelId::D1 => "D1",
            ModelId::D2 => "D2",
            ModelId::D3 => "D3",
            ModelId::D5 => "D5",
            ModelId::D11 => "D11",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            ModelId::D1 => "2-step nilpotent, center spanned by X1; [X2,X4] = [X3,X5] = X1",
            ModelId::D2 => "3-step nilpotent; [X2,X5] = [X3,X4] = X1, [X3,X5] = X2",
            ModelId::D3 => "4-step nilpotent (filiform); adds [X4,X5] = X3 to D2",
            ModelId::D5 => "solvable, hyperbolic action of X5 on (X2, X3); [X2,X5] = X2, [X3,X5] = -X3",
            ModelId::D11 => "solvable, rotational action of X5 on (X2, X3); [X4,X5] = ±X1",
        }
    }

    pub fn param_names(self) -> &'static [ParamName] {
        use ParamName::*;
        match self {
            ModelId::D1 | ModelId::D2 | ModelId::D3 => &[Alpha, Beta, Gamma],
            ModelId::D5 => &[Alpha, Beta, Gamma, Delta, Eta, Mu, Rho],
            ModelId::D11 => &[Alpha, Beta, Gamma, Delta, Eta, Kappa, Rho, Sigma],
        }
    }

    pub fn cases(self) -> &'static [CaseLabel] {
        use CaseLabel::*;
        match self {
            ModelId::D1 | ModelId::D2 | ModelId::D11 => &[Case1, Case2],
            ModelId::D3 => &[SelfSimilar, Generic],
            ModelId::D5 => &[Exact],
        }
    }
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ModelId {
    type Err = CatalogError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "D1" => Ok(ModelId::D1),
            "D2" => Ok(ModelId::D2),
            "D3" => Ok(ModelId::D3),
            "D5" => Ok(ModelId::D5),
            "D11" => Ok(ModelId::D11),
            _ => Err(CatalogError::UnknownModel(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ParamName {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Eta,
    Mu,
    Rho,
    Kappa,
    Sigma,
}

impl ParamName {
    pub fn as_str(self) -> &'static str {
        match self {
            ParamName::Alpha => "alpha",
            ParamName::Beta => "beta",
            ParamName::Gamma => "gamma",
            ParamName::Delta => "delta",
            ParamName::Eta => "eta",
            ParamName::Mu => "mu",
            ParamName::Rho => "rho",
            ParamName::Kappa => "kappa",
            ParamName::Sigma => "sigma",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        use ParamName::*;
        Some(match s.trim().to_ascii_lowercase().as_str() {
            "alpha" | "α" => Alpha,
            "beta" | "β" => Beta,
            "gamma" | "γ" => Gamma,
            "delta" | "δ" => Delta,
            "eta" | "η" => Eta,
            "mu" | "μ" => Mu,
            "rho" | "ρ" => Rho,
            "kappa" | "κ" => Kappa,
            "sigma" | "σ" => Sigma,
            _ => return None,
        })
    }
}

/// The sign `ε = ±1` in D11's reference bracket `[X₄, X₅] = εX₁`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Sign {
    #[default]
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// Named real parameters of one model's Y-basis bracket table.
///
/// Unset parameters read as zero. D11 additionally carries the sign `ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    model: ModelId,
    values: BTreeMap<ParamName, f64>,
    #[serde(default)]
    epsilon: Sign,
}

impl ModelParams {
    pub fn zero(model: ModelId) -> Self {
        Self {
            model,
            values: BTreeMap::new(),
            epsilon: Sign::Plus,
        }
    }

    pub fn new(model: ModelId, values: &[(ParamName, f64)]) -> Result<Self, CatalogError> {
        let mut p = Self::zero(model);
        for &(name, v) in values {
            p.set(name, v)?;
        }
        Ok(p)
    }

    /// Parses `alpha=0.5,beta=-1` style assignments. `eps=-1` sets the D11 sign.
    pub fn parse(model: ModelId, spec: &str) -> Result<Self, CatalogError> {
        let mut p = Self::zero(model);
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (name, value) = item
                .split_once('=')
                .ok_or_else(|| CatalogError::BadParamSyntax(item.to_string()))?;
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| CatalogError::BadParamSyntax(item.to_string()))?;
            let name = name.trim();
            if matches!(name, "eps" | "epsilon" | "ε") {
                if model != ModelId::D11 {
                    return Err(CatalogError::UnknownParameter {
                        model,
                        name: name.to_string(),
                    });
                }
                p.epsilon = if value < 0.0 { Sign::Minus } else { Sign::Plus };
                continue;
            }
            let param = ParamName::parse(name).ok_or_else(|| CatalogError::UnknownParameter {
                model,
                name: name.to_string(),
            })?;
            p.set(param, value)?;
        }
        Ok(p)
    }

    pub fn with_epsilon(mut self, epsilon: Sign) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn set(&mut self, name: ParamName, value: f64) -> Result<(), CatalogError> {
        if !self.model.param_names().contains(&name) {
            return Err(CatalogError::UnknownParameter {
                model: self.model,
                name: name.as_str().to_string(),
            });
        }
        self.values.insert(name, value);
        Ok(())
    }

    pub fn model(&self) -> ModelId {
        self.model
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn get(&self, name: ParamName) -> f64 {
        self.values.get(&name).copied().unwrap_or(0.0)
    }

    /// All of the model's parameters in declaration order, unset ones as zero.
    pub fn entries(&self) -> Vec<(ParamName, f64)> {
        self.model.param_names().iter().map(|&n| (n, self.get(n))).collect()
    }

    /// Parameters produced by the change of basis with strictly-lower entries
    /// `a₁…a₁₀` (see [`crate::lie::BasisChange::from_entries`]).
    pub fn from_basis_entries(model: ModelId, a: [f64; 10], epsilon: Sign) -> Self {
        use ParamName::*;
        let [a1, a2, _a3, _a4, a5, a6, a7, a8, a9, a10] = a;
        let eps = epsilon.value();
        let values: Vec<(ParamName, f64)> = match model {
            ModelId::D1 => vec![(Alpha, a10), (Beta, a5), (Gamma, a6 * a10 - a7 + a8)],
            ModelId::D2 => vec![
                (Alpha, a10 + a5 - a1),
                (Beta, a8 * a10 - a9 + a6 - a1 * a8),
                (Gamma, a8),
            ],
            ModelId::D3 => vec![
                (Alpha, a10 + a5 - a1),
                (Beta, a8 * a10 - a9 + a6 - a1 * a8 - a2 + a1 * a5),
                (Gamma, a8 - a5),
            ],
            ModelId::D5 => vec![
                (Alpha, a8),
                (Beta, a9 - a1),
                (Gamma, a5 * a8 - a6),
                (Delta, -2.0 * a1 * a5 + a2 + a5 * a9 - a7),
                (Eta, 2.0 * a5),
                (Mu, a6 * a9 - a7 * a8 + 1.0 - a1 * a6 + a2 * a8 - a1 * a5 * a8),
                (Rho, a6 + a5 * a8),
            ],
            ModelId::D11 => vec![
                (Alpha, a8),
                (Beta, a1 * a5 - a2 + a9),
                (Gamma, -a5),
                (Delta, a5 * a8 - a6),
                (Eta, a1 + a1 * a5 * a5 - a2 * a5 + a5 * a9 - a7),
                (Kappa, a1 * a8 + a1 * a5 * a6 - a2 * a6 + a6 * a9 - a7 * a8 + eps),
                (Rho, -a5 * a6 - a8),
                (Sigma, a6),
            ],
        };
        Self::new(model, &values)
            .expect("names come from the model's own list")
            .with_epsilon(epsilon)
    }
}

/// Which solution regime of a model's flow is meant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseLabel {
    Case1,
    Case2,
    SelfSimilar,
    Generic,
    Exact,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseLabel::Case1 => "case1",
            CaseLabel::Case2 => "case2",
            CaseLabel::SelfSimilar => "self-similar",
            CaseLabel::Generic => "generic",
            CaseLabel::Exact => "exact",
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "case1" | "1" => Ok(CaseLabel::Case1),
            "case2" | "2" => Ok(CaseLabel::Case2),
            "self-similar" | "selfsimilar" => Ok(CaseLabel::SelfSimilar),
            "generic" => Ok(CaseLabel::Generic),
            "exact" => Ok(CaseLabel::Exact),
            other => Err(other.to_string()),
        }
    }
}

/// Initial metric coefficients `λ₁…λ₅`, all strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialData(pub [f64; DIM]);

impl InitialData {
    pub fn new(lambda: [f64; DIM]) -> Result<Self, CatalogError> {
        if lambda.iter().all(|l| l.is_finite() && *l > 0.0) {
            Ok(Self(lambda))
        } else {
            Err(CatalogError::InvalidInitialData(lambda.to_vec()))
        }
    }

    pub fn from_slice(lambda: &[f64]) -> Result<Self, CatalogError> {
        let arr: [f64; DIM] = lambda
            .try_into()
            .map_err(|_| CatalogError::InvalidInitialData(lambda.to_vec()))?;
        Self::new(arr)
    }

    pub fn unit() -> Self {
        Self([1.0; DIM])
    }

    pub fn values(&self) -> [f64; DIM] {
        self.0
    }
}

/// An exact rational exponent such as `-4/11`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ratio {
    pub num: i64,
    pub den: i64,
}

impl Ratio {
    pub const fn new(num: i64, den: i64) -> Self {
        Self { num, den }
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl fmt::Display for Ratio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 || self.num == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// Expected large-time exponents `(p_A, …, p_E)` with `g_i ∼ t^{p_i}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentTable(pub [Ratio; DIM]);

impl ExponentTable {
    pub fn as_f64(&self) -> [f64; DIM] {
        self.0.map(Ratio::to_f64)
    }
}

impl fmt::Display for ExponentTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|r| r.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Brackets in the reference basis `X₁…X₅`.
pub fn x_basis(model: ModelId, epsilon: Sign) -> StructureConstants {
    let eps = epsilon.value();
    let brackets: Vec<(usize, usize, Vec<(usize, f64)>)> = match model {
        ModelId::D1 => vec![(1, 3, vec![(0, 1.0)]), (2, 4, vec![(0, 1.0)])],
        ModelId::D2 => vec![(1, 4, vec![(0, 1.0)]), (2, 3, vec![(0, 1.0)]), (2, 4, vec![(1, 1.0)])],
        ModelId::D3 => vec![
            (1, 4, vec![(0, 1.0)]),
            (2, 3, vec![(0, 1.0)]),
            (2, 4, vec![(1, 1.0)]),
            (3, 4, vec![(2, 1.0)]),
        ],
        ModelId::D5 => vec![
            (1, 2, vec![(0, 1.0)]),
            (1, 4, vec![(1, 1.0)]),
            (2, 4, vec![(2, -1.0)]),
            (3, 4, vec![(0, 1.0)]),
        ],
        ModelId::D11 => vec![
            (1, 2, vec![(0, 1.0)]),
            (1, 4, vec![(2, 1.0)]),
            (2, 4, vec![(1, -1.0)]),
            (3, 4, vec![(0, eps)]),
        ],
    };
    table(&brackets)
}

fn table(brackets: &[(usize, usize, Vec<(usize, f64)>)]) -> StructureConstants {
    let mut sc = StructureConstants::zeros(DIM);
    for (i, j, terms) in brackets {
        for &(k, v) in terms {
            if v != 0.0 {
                sc.add_bracket_term(*i, *j, k, v).expect("indices below DIM");
            }
        }
    }
    sc
}

/// Y-basis structure constants of `model` for the given parameter values.
pub fn build_model(model: ModelId, params: &ModelParams) -> Result<StructureConstants, CatalogError> {
    use ParamName::*;
    if params.model != model {
        return Err(CatalogError::ParamModelMismatch {
            expected: model,
            found: params.model,
        });
    }
    let p = |n| params.get(n);
    let (al, be, ga) = (p(Alpha), p(Beta), p(Gamma));
    let brackets: Vec<(usize, usize, Vec<(usize, f64)>)> = match model {
        ModelId::D1 => vec![
            (1, 3, vec![(0, 1.0)]),
            (1, 4, vec![(0, al)]),
            (2, 3, vec![(0, be)]),
            (2, 4, vec![(0, al * be + 1.0)]),
            (3, 4, vec![(0, ga)]),
        ],
        ModelId::D2 => vec![
            (1, 4, vec![(0, 1.0)]),
            (2, 3, vec![(0, 1.0)]),
            (2, 4, vec![(0, al), (1, 1.0)]),
            (3, 4, vec![(0, be), (1, ga)]),
        ],
        ModelId::D3 => vec![
            (1, 4, vec![(0, 1.0)]),
            (2, 3, vec![(0, 1.0)]),
            (2, 4, vec![(0, al), (1, 1.0)]),
            (3, 4, vec![(0, be), (1, ga), (2, 1.0)]),
        ],
        ModelId::D5 => vec![
            (1, 2, vec![(0, 1.0)]),
            (1, 3, vec![(0, al)]),
            (1, 4, vec![(0, be), (1, 1.0)]),
            (2, 3, vec![(0, ga)]),
            (2, 4, vec![(0, p(Delta)), (1, p(Eta)), (2, -1.0)]),
            (3, 4, vec![(0, p(Mu)), (1, p(Rho)), (2, -al)]),
        ],
        ModelId::D11 => vec![
            (1, 2, vec![(0, 1.0)]),
            (1, 3, vec![(0, al)]),
            (1, 4, vec![(0, be), (1, ga), (2, 1.0)]),
            (2, 3, vec![(0, p(Delta))]),
            (2, 4, vec![(0, p(Eta)), (1, -1.0 - ga * ga), (2, -ga)]),
            (3, 4, vec![(0, p(Kappa)), (1, p(Rho)), (2, p(Sigma))]),
        ],
    };
    Ok(table(&brackets))
}

/// The parameter values under which the Ricci tensor of every diagonal metric
/// is diagonal. For D11, `κ = ε` and every other parameter vanishes.
pub fn constrained_params(model: ModelId) -> ModelParams {
    constrained_params_with_sign(model, Sign::Plus)
}

pub fn constrained_params_with_sign(model: ModelId, epsilon: Sign) -> ModelParams {
    let p = ModelParams::zero(model).with_epsilon(epsilon);
    match model {
        ModelId::D11 => {
            let mut p = p;
            p.set(ParamName::Kappa, epsilon.value()).expect("kappa is a D11 parameter");
            p
        }
        _ => p,
    }
}

/// Conserved quantities claimed for the diagonal flow of a model.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModelInvariants {
    pub monomials: Vec<InvariantMonomial>,
    pub special: Vec<SpecialInvariant>,
}

pub fn model_invariants(model: ModelId) -> ModelInvariants {
    let m = |e: [i32; DIM]| InvariantMonomial::new(e).expect("nonzero exponent vector");
    let (monomials, special) = match model {
        ModelId::D1 => (
            vec![m([1, 1, 1, 0, 0]), m([1, 1, 0, 0, 1]), m([1, 0, 1, 1, 0]), m([1, 0, 0, 1, 1])],
            vec![],
        ),
        ModelId::D2 => (vec![m([1, 1, 1, 0, 0]), m([2, 1, 0, 2, 1])], vec![]),
        ModelId::D3 => (vec![m([5, 4, 3, 2, 1])], vec![]),
        ModelId::D5 => (vec![m([1, 1, 0, 0, 0]), m([1, 0, 1, 0, 0])], vec![]),
        ModelId::D11 => (
            vec![m([2, 1, 1, 2, 0])],
            vec![SpecialInvariant::RotationEnergy, SpecialInvariant::SplittingRatio],
        ),
    };
    ModelInvariants { monomials, special }
}

/// Claimed large-time exponents for `(model, case)`.
pub fn model_asymptotics(model: ModelId, case: CaseLabel) -> Result<ExponentTable, CatalogError> {
    if !model.cases().contains(&case) {
        return Err(CatalogError::UnknownCase {
            model,
            case: case.to_string(),
        });
    }
    let r = Ratio::new;
    Ok(ExponentTable(match model {
        ModelId::D1 => [r(-1, 2), r(1, 4), r(1, 4), r(1, 4), r(1, 4)],
        ModelId::D2 => [r(-3, 7), r(0, 1), r(3, 7), r(1, 7), r(4, 7)],
        ModelId::D3 => [r(-4, 11), r(-1, 11), r(2, 11), r(5, 11), r(8, 11)],
        // A·B and A·C are conserved, so B and C grow while A decays.
        ModelId::D5 => [r(-1, 3), r(1, 3), r(1, 3), r(0, 1), r(1, 1)],
        // E is bounded between two linear functions of t.
        ModelId::D11 => [r(-1, 3), r(1, 3), r(1, 3), r(0, 1), r(1, 1)],
    }))
}

fn rel_eq(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

/// Relative tolerance used when deciding which case an initial condition is in.
pub const CASE_TOL: f64 = 1e-12;

/// Picks the solution regime that `lambda` falls into.
pub fn classify_case(model: ModelId, lambda: &InitialData) -> CaseLabel {
    let [l1, l2, l3, l4, l5] = lambda.0;
    match model {
        ModelId::D1 if rel_eq(l2 * l4, l3 * l5, CASE_TOL) => CaseLabel::Case1,
        ModelId::D1 => CaseLabel::Case2,
        ModelId::D2 if rel_eq(l2 * l2, l1 * l3, CASE_TOL) => CaseLabel::Case1,
        ModelId::D2 => CaseLabel::Case2,
        ModelId::D3 if d3_self_similar(lambda) => CaseLabel::SelfSimilar,
        ModelId::D3 => CaseLabel::Generic,
        ModelId::D5 => CaseLabel::Exact,
        ModelId::D11 if rel_eq(l2, l3, CASE_TOL) => CaseLabel::Case1,
        ModelId::D11 => CaseLabel::Case2,
    }
}

/// `λ₂λ₅ = λ₃λ₄`, `λ₂λ₄ = λ₃²` and `3λ₁λ₅ = 2λ₃²`.
pub fn d3_self_similar(lambda: &InitialData) -> bool {
    let [l1, l2, l3, l4, l5] = lambda.0;
    rel_eq(l2 * l5, l3 * l4, CASE_TOL)
        && rel_eq(l2 * l4, l3 * l3, CASE_TOL)
        && rel_eq(3.0 * l1 * l5, 2.0 * l3 * l3, CASE_TOL)
}

/// Exact or implicit solution families known for a model.
pub fn closed_forms(model: ModelId) -> Vec<(CaseLabel, &'static str)> {
    match model {
        ModelId::D1 => vec![
            (CaseLabel::Case1, "explicit quartic-root solution"),
            (CaseLabel::Case2, "implicit logarithmic relations for B, C, D, E"),
        ],
        ModelId::D2 => vec![(CaseLabel::Case1, "Bernoulli relation 1/A = (l/2) D^3 + K D")],
        ModelId::D3 => vec![(CaseLabel::SelfSimilar, "pure powers of (t + c)")],
        ModelId::D5 => vec![(CaseLabel::Exact, "explicit cube-root solution, D = l4, E = 4t + l5")],
        ModelId::D11 => vec![],
    }
}

/// Human-readable Y-basis bracket table (nonzero brackets only).
pub fn y_table_text(model: ModelId) -> &'static [&'static str] {
    match model {
        ModelId::D1 => &[
            "[Y2,Y4] = Y1",
            "[Y2,Y5] = alpha Y1",
            "[Y3,Y4] = beta Y1",
            "[Y3,Y5] = (alpha beta + 1) Y1",
            "[Y4,Y5] = gamma Y1",
        ],
        ModelId::D2 => &[
            "[Y2,Y5] = Y1",
            "[Y3,Y4] = Y1",
            "[Y3,Y5] = alpha Y1 + Y2",
            "[Y4,Y5] = beta Y1 + gamma Y2",
        ],
        ModelId::D3 => &[
            "[Y2,Y5] = Y1",
            "[Y3,Y4] = Y1",
            "[Y3,Y5] = alpha Y1 + Y2",
            "[Y4,Y5] = beta Y1 + gamma Y2 + Y3",
        ],
        ModelId::D5 => &[
            "[Y2,Y3] = Y1",
            "[Y2,Y4] = alpha Y1",
            "[Y2,Y5] = beta Y1 + Y2",
            "[Y3,Y4] = gamma Y1",
            "[Y3,Y5] = delta Y1 + eta Y2 - Y3",
            "[Y4,Y5] = mu Y1 + rho Y2 - alpha Y3",
        ],
        ModelId::D11 => &[
            "[Y2,Y3] = Y1",
            "[Y2,Y4] = alpha Y1",
            "[Y2,Y5] = beta Y1 + gamma Y2 + Y3",
            "[Y3,Y4] = delta Y1",
            "[Y3,Y5] = eta Y1 + (-1 - gamma^2) Y2 - gamma Y3",
            "[Y4,Y5] = kappa Y1 + rho Y2 + sigma Y3",
        ],
    }
}

/// Everything the catalog knows about one model, in exportable form.
#[derive(Debug, Clone, Serialize)]
pub struct ModelSpec {
    pub id: ModelId,
    pub description: &'static str,
    pub y_brackets: Vec<&'static str>,
    pub parameters: Vec<ParamName>,
    pub constrained_params: Vec<(ParamName, f64)>,
    pub constrained_brackets: Vec<String>,
    pub invariants: ModelInvariants,
    pub asymptotics: Vec<(CaseLabel, ExponentTable)>,
    pub closed_forms: Vec<(CaseLabel, &'static str)>,
}

impl ModelSpec {
    pub fn for_model(id: ModelId) -> Self {
        let constrained = constrained_params(id);
        let sc = build_model(id, &constrained).expect("constrained params match their model");
        Self {
            id,
            description: id.description(),
            y_brackets: y_table_text(id).to_vec(),
            parameters: id.param_names().to_vec(),
            constrained_params: constrained.entries(),
            constrained_brackets: format_brackets(&sc, "Y"),
            invariants: model_invariants(id),
            asymptotics: id
                .cases()
                .iter()
                .map(|&c| (c, model_asymptotics(id, c).expect("case listed by the model")))
                .collect(),
            closed_forms: closed_forms(id),
        }
    }
}

/// Renders nonzero brackets as `[Y2,Y4] = Y1` style strings.
pub fn format_brackets(sc: &StructureConstants, letter: &str) -> Vec<String> {
    sc.nonzero_brackets()
        .into_iter()
        .map(|(i, j, v)| {
            let mut rhs = String::new();
            for (k, c) in v.iter().enumerate().filter(|(_, c)| **c != 0.0) {
                let mag = c.abs();
                let sign = if *c < 0.0 {
                    if rhs.is_empty() { "-" } else { " - " }
                } else if rhs.is_empty() {
                    ""
                } else {
                    " + "
                };
                let coef = if mag == 1.0 { String::new() } else { format!("{mag} ") };
                rhs.push_str(&format!("{sign}{coef}{letter}{}", k + 1));
            }
            format!("[{letter}{},{letter}{}] = {rhs}", i + 1, j + 1)
        })
        .collect()
}
