//! Offline sparsification: leverage-score for-all sampling, degree-preserving
//! short-cycle decomposition, and the iterative-halving for-each sketch.

mod cycles;
mod forall;
mod foreach;

pub use cycles::{check_decomposition, cycle_sample_round, short_cycle_decompose, CycleDecomposition};
pub use forall::forall_sparsify;
pub use foreach::spectral_sketch;

use crate::graph::WeightedGraph;
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SparsifierKind {
    ForAll,
    ForEach,
}

/// Reweighted subgraph tagged with its guarantee.
///
/// Every edge is an input edge; its weight is the original weight divided by
/// the probability with which it survived, so weights only grow.
#[derive(Clone, Debug)]
pub struct Sparsifier {
    pub graph: WeightedGraph<f64>,
    pub kind: SparsifierKind,
    pub eps: f64,
    pub seed: u64,
    /// Original input edge id behind each surviving edge.
    pub source_edge_ids: Vec<usize>,
    /// Set when the round cap forced the leverage-sampling tail.
    pub fallback: bool,
    /// Nominal multiplicative accuracy factors of each reduction applied,
    /// innermost first (merge-and-reduce appends per-level factors here).
    pub accuracy_chain: Vec<f64>,
}

impl Sparsifier {
    /// Wraps a graph untouched (accuracy factor 1).
    pub fn identity(graph: WeightedGraph<f64>, kind: SparsifierKind, eps: f64, seed: u64) -> Self {
        let m = graph.m();
        Sparsifier {
            graph,
            kind,
            eps,
            seed,
            source_edge_ids: (0..m).collect(),
            fallback: false,
            accuracy_chain: Vec::new(),
        }
    }

    /// JSON sidecar accompanying the graph text format.
    pub fn sidecar(&self) -> SparsifierSidecar {
        SparsifierSidecar {
            kind: self.kind,
            eps: self.eps,
            seed: self.seed,
            fallback: self.fallback,
            source_edge_ids: self.source_edge_ids.clone(),
            accuracy_chain: self.accuracy_chain.clone(),
        }
    }

    /// Nominal accuracy: product of the chain factors.
    pub fn nominal_factor(&self) -> f64 {
        self.accuracy_chain.iter().product::<f64>().max(1.0)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SparsifierSidecar {
    pub kind: SparsifierKind,
    pub eps: f64,
    pub seed: u64,
    pub fallback: bool,
    pub source_edge_ids: Vec<usize>,
    pub accuracy_chain: Vec<f64>,
}

/// Checks the reweighted-subgraph property against the input graph: ids map
/// into the input, endpoints match, and weights never shrink.
pub fn assert_reweighted_subgraph(input: &WeightedGraph<f64>, sp: &Sparsifier) {
    assert_eq!(sp.graph.m(), sp.source_edge_ids.len());
    for (edge, &src) in sp.graph.edges().iter().zip(&sp.source_edge_ids) {
        let orig = input.edge(src);
        let same = (orig.u, orig.v) == (edge.u, edge.v) || (orig.u, orig.v) == (edge.v, edge.u);
        assert!(same, "edge {src} endpoints changed");
        assert!(edge.w >= orig.w - 1e-12, "weight shrank: {} -> {}", orig.w, edge.w);
    }
}
