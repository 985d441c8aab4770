//! One-pass approximate minimum cut: a for-all sparsifier supplies the
//! candidate cuts, a for-each sparsifier plus median-of-sketches supplies
//! their values.

use super::contract::enumerate_approx_min_cuts;
use crate::bitset::VertexSet;
use crate::config::Config;
use crate::graph::Edge;
use crate::hashing::splitmix64;
use crate::sketch::jl::JlIncidenceSketch;
use crate::sketch::median;
use crate::stream::{EdgeStream, Reducer, StreamEngine};
use serde::Serialize;

/// Result of the streaming approximate-min-cut pipeline.
#[derive(Clone, Debug)]
pub struct MinCutOutput {
    pub value: f64,
    pub side: VertexSet,
    /// Crossing edges as witnessed by the retained sparsifiers.
    pub crossing_edges: Vec<(u32, u32)>,
    pub space_words_peak: usize,
    pub family_size: usize,
    pub disconnected: bool,
    /// Largest column-negation residual observed (sketch diagnostics).
    pub max_negation_residual: f64,
}

impl MinCutOutput {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out<'a> {
            value: f64,
            side: Vec<usize>,
            crossing_edges: &'a [(u32, u32)],
            space_words_peak: usize,
            family_size: usize,
            disconnected: bool,
        }
        serde_json::to_value(Out {
            value: self.value,
            side: self.side.iter().collect(),
            crossing_edges: &self.crossing_edges,
            space_words_peak: self.space_words_peak,
            family_size: self.family_size,
            disconnected: self.disconnected,
        })
        .unwrap()
    }
}

/// Single pass, two engines: for-all at eps' = 1/log2(n) for candidates,
/// for-each at eps/2 for values; post-processing enumerates candidates at
/// `alpha = 1 + c_alpha/log2(n)` and evaluates each by the median of
/// `amplify_reps` JL sketches over the for-each sparsifier's edges.
pub fn approx_min_cut_stream(stream: EdgeStream, eps: f64, seed: u64, cfg: &Config) -> MinCutOutput {
    let n = stream.n();
    assert!(n >= 2, "min cut needs at least two vertices");
    let log2n = (n.max(4) as f64).log2();
    let eps_forall = (1.0 / log2n).min(0.5);
    let eps_each = eps / 2.0;

    let mut engine_k = StreamEngine::new(n, eps_forall, Reducer::ForAll, splitmix64(seed ^ 0xca11), 1.0, cfg);
    let mut engine_h = StreamEngine::new(n, eps_each, Reducer::ForEach, splitmix64(seed ^ 0x4eac), 1.0, cfg);
    for e in stream.into_iter_counted() {
        engine_k.push(e);
        engine_h.push(e);
    }
    let out_k = engine_k.finish();
    let out_h = engine_h.finish();
    let peak = out_k.meter.peak_words() + out_h.meter.peak_words();

    let k_graph = &out_k.sparsifier.graph;
    let h_graph = &out_h.sparsifier.graph;

    // Disconnected input: report a separating component with value 0.
    if !k_graph.is_connected() {
        let comp = &k_graph.components()[0];
        let side = VertexSet::from_members(n, comp.iter().copied());
        return MinCutOutput {
            value: 0.0,
            side,
            crossing_edges: Vec::new(),
            space_words_peak: peak,
            family_size: 0,
            disconnected: true,
            max_negation_residual: 0.0,
        };
    }

    // Candidate enumeration on the for-all sparsifier, exact leaf values.
    let alpha = 1.0 + cfg.c_alpha / log2n;
    let reps = cfg.tree_reps_for(n);
    let family = enumerate_approx_min_cuts(k_graph, alpha, reps, splitmix64(seed ^ 0x3ee), None);

    // Median-of-R sketched values over the for-each sparsifier.
    let sketches: Vec<JlIncidenceSketch<f64>> = (0..cfg.amplify_reps)
        .map(|rep| {
            let mut sk = JlIncidenceSketch::new(n, eps_each, splitmix64(seed ^ (rep as u64 + 101)), cfg);
            for (id, e) in h_graph.edges().iter().enumerate() {
                sk.absorb_edge(id as u64, e.u as usize, e.v as usize, e.w).unwrap();
            }
            sk
        })
        .collect();

    let mut best: Option<(f64, VertexSet)> = None;
    for (side, _k_value) in family.iter() {
        let small: Vec<usize> = if side.count() * 2 <= n {
            side.iter().collect()
        } else {
            side.complement().iter().collect()
        };
        let mut vals: Vec<f64> = sketches.iter().map(|sk| sk.side_estimate(small.iter().copied())).collect();
        let est = median(&mut vals);
        if best.as_ref().map_or(true, |(b, _)| est < *b) {
            best = Some((est, side.clone()));
        }
    }
    let (value, side) = best.expect("family is never empty on connected graphs");

    // Crossing edges as witnessed by the two sparsifiers.
    let mut crossing: Vec<(u32, u32)> = k_graph
        .edges()
        .iter()
        .chain(h_graph.edges().iter())
        .filter(|e| side.contains(e.u as usize) != side.contains(e.v as usize))
        .map(|e| (e.u.min(e.v), e.u.max(e.v)))
        .collect();
    crossing.sort_unstable();
    crossing.dedup();

    MinCutOutput {
        value,
        side,
        crossing_edges: crossing,
        space_words_peak: peak,
        family_size: family.len(),
        disconnected: false,
        max_negation_residual: family.max_negation_residual,
    }
}

/// Convenience entry: stream a graph's edges in a given order and push both
/// engines manually (used by tests that need a custom shared pass).
pub fn approx_min_cut_graph(g: &crate::graph::WeightedGraph<f64>, eps: f64, seed: u64, cfg: &Config) -> MinCutOutput {
    let edges: Vec<Edge<f64>> = g.edges().to_vec();
    approx_min_cut_stream(EdgeStream::new(g.n(), edges), eps, seed, cfg)
}
