//! Ricci diagonals and flow systems as they appear in the published tables,
//! evaluated at the constrained parameters. Kept separate from the curvature
//! computation so the two can be compared.

use super::ModelId;

/// Published `Ric(Ŷᵢ, Ŷᵢ)` for the diagonal metric `g = (A, B, C, D, E)`.
pub fn printed_ricci_diagonal(model: ModelId, g: &[f64; 5]) -> [f64; 5] {
    let [a, b, c, d, e] = *g;
    match model {
        ModelId::D1 => [
            a / (2.0 * b * d) + a / (2.0 * c * e),
            -a / (2.0 * b * d),
            -a / (2.0 * c * e),
            -a / (2.0 * b * d),
            -a / (2.0 * c * e),
        ],
        ModelId::D2 => [
            a / (2.0 * b * e) + a / (2.0 * c * d),
            b / (2.0 * c * e) - a / (2.0 * b * e),
            -a / (2.0 * c * d) - b / (2.0 * c * e),
            -a / (2.0 * c * d),
            -a / (2.0 * b * e) - b / (2.0 * c * e),
        ],
        ModelId::D3 => [
            a / (2.0 * b * e) + a / (2.0 * c * d),
            b / (2.0 * c * e) - a / (2.0 * b * e),
            c / (2.0 * d * e) - a / (2.0 * c * d) - b / (2.0 * c * e),
            -a / (2.0 * c * d) - c / (2.0 * d * e),
            -a / (2.0 * b * e) - b / (2.0 * c * e) - c / (2.0 * d * e),
        ],
        ModelId::D5 => [
            a / (2.0 * b * c),
            -a / (2.0 * b * c),
            -a / (2.0 * b * c),
            0.0,
            -2.0 / e,
        ],
        ModelId::D11 => [
            a / (2.0 * b * c) + a / (2.0 * d * e),
            b / (2.0 * c * e) - a / (2.0 * b * c) - c / (2.0 * b * e),
            c / (2.0 * b * e) - a / (2.0 * b * c) - b / (2.0 * c * e),
            -a / (2.0 * d * e),
            -c / (2.0 * b * e) - b / (2.0 * c * e) - a / (2.0 * d * e),
        ],
    }
}

/// Published right-hand sides `d/dt (A, B, C, D, E)`.
pub fn printed_system(model: ModelId, g: &[f64; 5]) -> [f64; 5] {
    let [a, b, c, d, e] = *g;
    match model {
        ModelId::D1 => [
            -a * a / (b * d) - a * a / (c * e),
            a / d,
            a / e,
            a / b,
            a / c,
        ],
        ModelId::D2 => [
            -a * a / (b * e) - a * a / (c * d),
            -b * b / (c * e) + a / e,
            a / d + b / e,
            a / c,
            a / b + b / c,
        ],
        ModelId::D3 => [
            -a * a / (b * e) - a * a / (c * d),
            -b * b / (c * e) + a / e,
            -c * c / (d * e) + a / d + b / e,
            a / c + c / e,
            a / b + b / c + c / d,
        ],
        ModelId::D5 => [-a * a / (b * c), a / c, a / b, 0.0, 4.0],
        ModelId::D11 => [
            -a * a / (b * c) - a * a / (d * e),
            -b * b / (c * e) + a / c + c / e,
            -c * c / (b * e) + a / b + b / e,
            a / e,
            c / b + b / c + a / d,
        ],
    }
}
