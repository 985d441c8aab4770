//! All-pairs effective-resistance sketch built from a for-each sparsifier.
//!
//! Each copy stacks `Z = Q W^(1/2) B_H L_H^+` (k JL rows solved through the
//! sparsifier's Laplacian); a pair query is `||Z(:,u) - Z(:,v)||^2` per copy,
//! median over copies. Queries are answered on the sparsifier, validated
//! end-to-end against the original graph's dense oracle.

use crate::config::Config;
use crate::graph::WeightedGraph;
use crate::hashing::splitmix64;
use crate::leverage::ResistanceEstimator;
use crate::sketch::median;
use crate::sketch::solver::SolveError;
use crate::sparsify::Sparsifier;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ErError {
    #[error("sparsifier graph is disconnected; component containing vertex {0} is separated")]
    Disconnected(usize),
    #[error("solver failure while building the sketch: {0}")]
    Solver(#[from] SolveError),
    #[error("query endpoints must differ")]
    SamePair,
    #[error("vertex {0} out of range")]
    BadVertex(usize),
}

/// Median-amplified effective-resistance sketch.
pub struct ErSketch {
    n: usize,
    copies: Vec<ResistanceEstimator>,
    pub rows_per_copy: usize,
}

/// Builds the sketch over a for-each sparsifier at accuracy eps with
/// `cfg.amplify_reps` independent copies.
pub fn build_er_sketch(h: &Sparsifier, eps: f64, seed: u64, cfg: &Config) -> Result<ErSketch, ErError> {
    build_er_sketch_graph(&h.graph, eps, seed, cfg)
}

pub fn build_er_sketch_graph(g: &WeightedGraph<f64>, eps: f64, seed: u64, cfg: &Config) -> Result<ErSketch, ErError> {
    if !g.is_connected() {
        let comp = &g.components()[1];
        return Err(ErError::Disconnected(comp[0]));
    }
    let k = cfg.jl_rows(g.n(), eps);
    let copies: Result<Vec<ResistanceEstimator>, SolveError> = (0..cfg.amplify_reps)
        .map(|rep| ResistanceEstimator::build_with_rows(g, k, splitmix64(seed ^ (rep as u64 + 7)), cfg))
        .collect();
    Ok(ErSketch { n: g.n(), copies: copies?, rows_per_copy: k })
}

impl ErSketch {
    pub fn n(&self) -> usize {
        self.n
    }

    /// Median-of-copies estimate of the effective resistance.
    pub fn query(&self, u: usize, v: usize) -> Result<f64, ErError> {
        if u >= self.n {
            return Err(ErError::BadVertex(u));
        }
        if v >= self.n {
            return Err(ErError::BadVertex(v));
        }
        if u == v {
            return Err(ErError::SamePair);
        }
        let mut vals: Vec<f64> = self.copies.iter().map(|c| c.resistance(u, v)).collect();
        Ok(median(&mut vals))
    }
}
