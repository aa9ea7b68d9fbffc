//! Worked systems and numeric matrices used by tests, the CLI and the README.

use crate::cli_io::parse_document;
use crate::error::Result;
use crate::solver::FlexSystem;

pub const WORKED: &str = include_str!("../fixtures/worked.flex");
/// Microhalo system.
pub const MICROHALO: &str = include_str!("../fixtures/microhalo.flex");
/// Non-uniform system.
pub const NONUNIFORM: &str = include_str!("../fixtures/nonuniform.flex");
/// `(1+⊘)x ⊆ 1+ε£`, which has no solution.
pub const INFEASIBLE: &str = include_str!("../fixtures/infeasible.flex");
/// `Δ = ε` absorbs `B = ⊘`; the Gauss-Jordan output is not admissible.
pub const ABSORBED_BLOWUP: &str = include_str!("../fixtures/absorbed_blowup.flex");
/// `Δ = ε` absorbs `B = ⊘`, yet the Gauss-Jordan output is the solution.
pub const ABSORBED_SOLVABLE: &str = include_str!("../fixtures/absorbed_solvable.flex");
/// `WORKED` with every coefficient neutrix widened to `ε²⊘`.
pub const WORKED_WIDE: &str = include_str!("../fixtures/worked_wide.flex");
pub const FOUR_UNKNOWNS: &str = include_str!("../fixtures/four_unknowns.flex");
/// `FOUR_UNKNOWNS` with the real matrix `Q` as coefficients.
pub const FOUR_UNKNOWNS_REAL: &str = include_str!("../fixtures/four_unknowns_real.flex");

pub const ALL: [(&str, &str); 9] = [
    ("worked", WORKED),
    ("microhalo", MICROHALO),
    ("nonuniform", NONUNIFORM),
    ("infeasible", INFEASIBLE),
    ("absorbed_blowup", ABSORBED_BLOWUP),
    ("absorbed_solvable", ABSORBED_SOLVABLE),
    ("worked_wide", WORKED_WIDE),
    ("four_unknowns", FOUR_UNKNOWNS),
    ("four_unknowns_real", FOUR_UNKNOWNS_REAL),
];

pub fn system(text: &str) -> Result<FlexSystem> {
    parse_document(text)?.system()
}

pub fn by_name(name: &str) -> Option<&'static str> {
    ALL.iter().find(|(n, _)| *n == name).map(|(_, t)| *t)
}

/// Right-hand side of the three-unknown system at `ε = 1/100`.
pub const B3: [f64; 3] = [1.0, -2.0, 0.01];
/// Its exact solution.
pub const X3_EXACT: [f64; 3] = [-1.0, 3.97, -1.97];

/// Perturbed coefficient matrix, entries as printed.
pub const A_PRIME_PRINTED: [[f64; 3]; 3] = [
    [1.00001, 0.99999, 1.000002],
    [0.999998, -0.50001, -0.5],
    [0.00499999, 0.5, 1.00001],
];
/// `A_PRIME_PRINTED` with entry (1,2) = 1; this is the matrix whose solution matches the printed one.
pub const A_PRIME: [[f64; 3]; 3] = [
    [1.00001, 1.0, 1.000002],
    [0.999998, -0.50001, -0.5],
    [0.00499999, 0.5, 1.00001],
];
pub const X_PRIME_PRINTED: [f64; 3] = [-0.999970, 3.969929, -1.969945];

/// Perturbation of every coefficient, entries as printed.
pub const A_SECOND_PRINTED: [[f64; 3]; 3] = [
    [1.00001, 0.99999, 1.00001],
    [0.99999, -0.50001, -0.49999],
    [0.004999, 0.49999, 1.00001],
];
/// `A_SECOND_PRINTED` with entry (3,1) = 0.00499.
pub const A_SECOND: [[f64; 3]; 3] = [
    [1.00001, 0.99999, 1.00001],
    [0.99999, -0.50001, -0.49999],
    [0.00499, 0.49999, 1.00001],
];
pub const X_SECOND_PRINTED: [f64; 3] = [-0.999943, 3.969928, -1.969915];

/// Numeric representative of the four-unknown system.
pub const P_PRIME: [[f64; 4]; 4] = [
    [1.0, 0.99, 0.5002, 0.5],
    [-0.97, 1.0, 0.5001, 0.5],
    [0.0, 1.0, -0.5, 0.9997],
    [0.51, 0.0, 1.0, 1.0],
];
pub const X_P_PRIME_PRINTED: [f64; 4] = [-0.5159373, -1.632099, 0.7537178, 1.509410];
pub const B4: [f64; 4] = [-1.0, 0.0, -0.5, 2.0];
pub const X4_EXACT: [f64; 4] = [-0.5, -1.625, 0.75, 1.5];

pub fn grid<const N: usize>(m: &[[f64; N]; N]) -> Vec<Vec<f64>> {
    m.iter().map(|r| r.to_vec()).collect()
}
