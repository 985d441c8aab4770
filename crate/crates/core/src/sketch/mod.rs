//! Linear-algebra sketching: JL-projected incidence columns and the
//! preconditioned Laplacian solver.

pub mod jl;
pub mod solver;

/// Median of a slice; the usual amplification combiner for independent
/// sketch copies (use an odd count).
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    values[values.len() / 2]
}
