//! Ricci flow of diagonal left-invariant metrics on five closed
//! five-dimensional unimodular solvable contact Lie groups.
//!
//! * [`lie`]: structure constants, brackets, Jacobi and unimodularity checks,
//!   unitriangular changes of basis.
//! * [`catalog`]: the D1, D2, D3, D5 and D11 families.
//! * [`curvature`]: Ricci tensor in the orthonormal frame and the flow field.
//! * [`flow`]: adaptive Dormand–Prince integration with log-spaced output.
//! * [`invariants`]: conserved monomials, drift and ratio diagnostics.
//! * [`asymptotics`]: closed forms, implicit relations, power-law fits.
//! * [`verify`]: end-to-end checks and the verification report.

pub mod asymptotics;
pub mod catalog;
pub mod curvature;
pub mod flow;
pub mod invariants;
pub mod io;
pub mod lie;
pub mod verify;
