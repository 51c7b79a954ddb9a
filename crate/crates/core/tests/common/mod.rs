#![allow(dead_code)]

use solvflow_core::curvature::{DiagonalMetric, N};
use solvflow_core::lie::StructureConstants;

/// Ricci tensor in the orthonormal frame from the Levi-Civita connection,
/// built with the Koszul formula and the curvature operator directly.
pub fn koszul_ricci(sc: &StructureConstants, g: &DiagonalMetric) -> [[f64; N]; N] {
    let s: Vec<f64> = g.coeffs().iter().map(|v| v.sqrt()).collect();
    let c = |i: usize, j: usize, k: usize| sc.get(i, j, k) * s[k] / (s[i] * s[j]);
    // gamma[i][j][k] = <nabla_{e_i} e_j, e_k>
    let mut gamma = [[[0.0; N]; N]; N];
    for i in 0..N {
        for j in 0..N {
            for k in 0..N {
                gamma[i][j][k] = 0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
            }
        }
    }
    // nabla_X Y for X, Y given in frame coordinates
    let nabla = |x: &[f64; N], y: &[f64; N]| -> [f64; N] {
        let mut out = [0.0; N];
        for i in 0..N {
            for j in 0..N {
                if x[i] * y[j] == 0.0 {
                    continue;
                }
                for k in 0..N {
                    out[k] += x[i] * y[j] * gamma[i][j][k];
                }
            }
        }
        out
    };
    let unit = |i: usize| -> [f64; N] {
        let mut e = [0.0; N];
        e[i] = 1.0;
        e
    };
    let mut ric = [[0.0; N]; N];
    for b in 0..N {
        for cc in 0..N {
            let mut sum = 0.0;
            for a in 0..N {
                let (ea, eb, ec) = (unit(a), unit(b), unit(cc));
                let ab: [f64; N] = std::array::from_fn(|k| c(a, b, k));
                let t1 = nabla(&ea, &nabla(&eb, &ec));
                let t2 = nabla(&eb, &nabla(&ea, &ec));
                let t3 = nabla(&ab, &ec);
                sum += t1[a] - t2[a] - t3[a];
            }
            ric[b][cc] = sum;
        }
    }
    ric
}

pub fn max_abs(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}
