//! Approximate minimum cut: recursive-contraction candidate enumeration plus
//! sketched or exact candidate evaluation.

mod contract;
mod pipeline;

pub use contract::{contract_edge, enumerate_approx_min_cuts, ContractError, ContractionState};
pub use pipeline::{approx_min_cut_graph, approx_min_cut_stream, MinCutOutput};

use crate::bitset::VertexSet;
use std::collections::HashMap;

/// Deduplicated family of vertex bipartitions with their best-known values.
///
/// Keys are canonical sides (the side containing vertex 0); the same cut
/// reached through different contraction leaves must not inflate the family.
#[derive(Clone, Debug)]
pub struct CutFamily {
    n: usize,
    alpha: f64,
    cuts: HashMap<VertexSet, f64>,
    min_value: f64,
    /// Largest observed `||col_a + col_b||` relative residual when a sketch
    /// was attached during enumeration; diagnostics for the column-negation
    /// invariant.
    pub max_negation_residual: f64,
}

impl CutFamily {
    pub fn new(n: usize, alpha: f64) -> Self {
        CutFamily { n, alpha, cuts: HashMap::new(), min_value: f64::INFINITY, max_negation_residual: 0.0 }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn min_value(&self) -> f64 {
        self.min_value
    }

    /// Records a cut, keeping the smallest value seen for it.
    pub fn insert(&mut self, side: &VertexSet, value: f64) {
        let canon = side.canonical();
        self.min_value = self.min_value.min(value);
        self.cuts
            .entry(canon)
            .and_modify(|v| {
                if value < *v {
                    *v = value;
                }
            })
            .or_insert(value);
    }

    pub fn value_of(&self, side: &VertexSet) -> Option<f64> {
        self.cuts.get(&side.canonical()).copied()
    }

    pub fn contains(&self, side: &VertexSet) -> bool {
        self.cuts.contains_key(&side.canonical())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VertexSet, f64)> + '_ {
        self.cuts.iter().map(|(k, &v)| (k, v))
    }

    /// Drops every cut with value above `alpha * min_value`.
    pub fn retain_within_alpha(&mut self) {
        let bound = self.alpha * self.min_value + 1e-9;
        self.cuts.retain(|_, v| *v <= bound);
    }

    /// The argmin cut(s); several when the minimum is tied.
    pub fn argmin(&self) -> Vec<(VertexSet, f64)> {
        let eps = 1e-9 * self.min_value.abs().max(1.0);
        self.cuts
            .iter()
            .filter(|(_, &v)| (v - self.min_value).abs() <= eps)
            .map(|(k, &v)| (k.clone(), v))
            .collect()
    }

    /// Reporting hook: family size against the polynomial bound `n^floor(2a)`.
    pub fn size_bound_report(&self) -> (usize, usize) {
        let exp = (2.0 * self.alpha).floor() as u32;
        (self.len(), (self.n as u64).pow(exp).min(usize::MAX as u64) as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dedup_keeps_best_value() {
        let mut fam = CutFamily::new(4, 1.5);
        let side = VertexSet::from_members(4, [1, 2]);
        fam.insert(&side, 5.0);
        fam.insert(&side.complement(), 4.0); // same cut, better value
        assert_eq!(fam.len(), 1);
        assert_eq!(fam.value_of(&side), Some(4.0));
        assert_eq!(fam.min_value(), 4.0);
    }

    #[test]
    fn retain_filters_to_radius() {
        let mut fam = CutFamily::new(6, 1.2);
        fam.insert(&VertexSet::singleton(6, 1), 10.0);
        fam.insert(&VertexSet::singleton(6, 2), 13.0);
        fam.insert(&VertexSet::singleton(6, 3), 11.9);
        fam.retain_within_alpha();
        assert_eq!(fam.len(), 2);
        assert!(fam.iter().all(|(_, v)| v <= 12.0 + 1e-9));
    }
}
