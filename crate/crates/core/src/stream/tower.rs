//! Merge-and-reduce block tower over sampled stream edges.
//!
//! Sampled edges accumulate in block 0; when it fills, blocks 0..i are merged
//! and reduced into the first empty block i at per-level accuracy
//! `eps_blk = ln(1+eps) / ceil(log2(n/eps))`, which telescopes to at most
//! (1+eps) across every level. One tower implementation serves both
//! guarantee kinds, parameterized by the reducer.

use super::online::OnlineSampler;
use super::EdgeStream;
use crate::config::Config;
use crate::graph::{Edge, WeightedGraph};
use crate::meter::{SpaceMeter, WORDS_PER_EDGE};
use crate::sparsify::{forall_sparsify, spectral_sketch, Sparsifier, SparsifierKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reducer {
    ForEach,
    ForAll,
}

type Entry = (Edge<f64>, u64); // reweighted edge, arrival index in the stream

/// Blocks B_0..B_i of reweighted edges; at most one non-empty block per index.
pub struct BlockTower {
    n: usize,
    eps: f64,
    eps_blk: f64,
    m_space: usize,
    reducer: Reducer,
    seed: u64,
    blocks: Vec<Vec<Entry>>,
    cascades: u64,
    max_level: usize,
    fallback: bool,
    cfg: Config,
}

impl BlockTower {
    pub fn new(n: usize, eps: f64, reducer: Reducer, seed: u64, cfg: &Config) -> Self {
        let levels = ((n as f64 / eps).max(2.0)).log2().ceil();
        BlockTower {
            n,
            eps,
            eps_blk: (1.0 + eps).ln() / levels,
            m_space: cfg.mspace(n, eps),
            reducer,
            seed,
            blocks: vec![Vec::new()],
            cascades: 0,
            max_level: 0,
            fallback: false,
            cfg: cfg.clone(),
        }
    }

    pub fn m_space(&self) -> usize {
        self.m_space
    }

    pub fn cascades(&self) -> u64 {
        self.cascades
    }

    pub fn max_level(&self) -> usize {
        self.max_level
    }

    pub fn per_level_factor(&self) -> f64 {
        1.0 + self.eps_blk
    }

    pub fn push(&mut self, edge: Edge<f64>, arrival: u64, meter: &mut SpaceMeter) {
        if self.blocks[0].len() < self.m_space {
            self.blocks[0].push((edge, arrival));
            meter.alloc("tower", WORDS_PER_EDGE);
            return;
        }
        // Find the minimal empty index i > 0, merge blocks 0..i into it.
        let mut i = 1;
        while i < self.blocks.len() && !self.blocks[i].is_empty() {
            i += 1;
        }
        if i == self.blocks.len() {
            self.blocks.push(Vec::new());
        }
        let mut merged: Vec<Entry> = Vec::new();
        for j in 0..i {
            merged.append(&mut self.blocks[j]);
        }
        let merged_words = merged.len() * WORDS_PER_EDGE;
        let reduced = self.reduce(merged, self.eps_blk, meter);
        meter.free("tower", merged_words);
        meter.alloc("tower", reduced.len() * WORDS_PER_EDGE);
        self.blocks[i] = reduced;
        self.max_level = self.max_level.max(i);
        self.cascades += 1;
        self.blocks[0].push((edge, arrival));
        meter.alloc("tower", WORDS_PER_EDGE);
    }

    fn reduce(&mut self, merged: Vec<Entry>, eps: f64, meter: &mut SpaceMeter) -> Vec<Entry> {
        let len_before = merged.len();
        meter.alloc("reduce", len_before * WORDS_PER_EDGE);
        let (edges, arrivals): (Vec<Edge<f64>>, Vec<u64>) = merged.into_iter().unzip();
        let g = WeightedGraph::new_multi(self.n, edges).expect("tower edges stay valid");
        let seed = crate::hashing::splitmix64(self.seed ^ self.cascades.wrapping_mul(0x2545));
        let sp = match self.reducer {
            Reducer::ForEach => spectral_sketch(&g, eps, seed, &self.cfg),
            Reducer::ForAll => forall_sparsify(&g, eps, seed, 1.0, &self.cfg),
        };
        self.fallback |= sp.fallback;
        let out: Vec<Entry> = sp
            .graph
            .edges()
            .iter()
            .zip(&sp.source_edge_ids)
            .map(|(e, &src)| (*e, arrivals[src]))
            .collect();
        meter.free("reduce", len_before * WORDS_PER_EDGE);
        out
    }

    /// All currently held entries, oldest blocks last.
    pub fn union(&self) -> Vec<Entry> {
        let mut out = Vec::new();
        for b in self.blocks.iter().rev() {
            out.extend_from_slice(b);
        }
        out
    }

    /// Final reduction over the union at full accuracy; leaves the tower
    /// usable for further pushes (the checkpoint path clones the union).
    pub fn finalize_sparsifier(&mut self, meter: &mut SpaceMeter) -> Sparsifier {
        let union = self.union();
        let reduced = self.reduce(union, self.eps, meter);
        let (edges, arrivals): (Vec<Edge<f64>>, Vec<u64>) = reduced.into_iter().unzip();
        let kind = match self.reducer {
            Reducer::ForEach => SparsifierKind::ForEach,
            Reducer::ForAll => SparsifierKind::ForAll,
        };
        let graph = WeightedGraph::new_multi(self.n, edges).unwrap();
        let mut chain: Vec<f64> = std::iter::repeat(self.per_level_factor()).take(self.max_level).collect();
        chain.push(1.0 + self.eps);
        Sparsifier {
            graph,
            kind,
            eps: self.eps,
            seed: self.seed,
            source_edge_ids: arrivals.into_iter().map(|a| a as usize).collect(),
            fallback: self.fallback,
            accuracy_chain: chain,
        }
    }
}

/// One single-pass engine: online sampler feeding a block tower.
pub struct StreamEngine {
    pub sampler: OnlineSampler,
    pub tower: BlockTower,
    pub meter: SpaceMeter,
    arrival: u64,
    /// Raw kept (original-weight) edges with arrival indices; retained when
    /// `keep_raw` is set so min-cut crossing edges can be emitted verbatim.
    raw_kept: Vec<(u64, Edge<f64>)>,
    keep_raw: bool,
}

impl StreamEngine {
    pub fn new(n: usize, eps: f64, reducer: Reducer, seed: u64, prob_multiplier: f64, cfg: &Config) -> Self {
        StreamEngine {
            sampler: OnlineSampler::new(n, eps, prob_multiplier, seed ^ 0x0a11, cfg),
            tower: BlockTower::new(n, eps, reducer, seed ^ 0x70e3, cfg),
            meter: SpaceMeter::new(),
            arrival: 0,
            raw_kept: Vec::new(),
            keep_raw: false,
        }
    }

    pub fn with_space_log(mut self) -> Self {
        self.meter = SpaceMeter::with_log();
        self
    }

    /// Retain raw kept edges (the oversampled store).
    pub fn with_raw_store(mut self) -> Self {
        self.keep_raw = true;
        self
    }

    pub fn arrival(&self) -> u64 {
        self.arrival
    }

    pub fn push(&mut self, e: Edge<f64>) {
        let idx = self.arrival;
        self.arrival += 1;
        let decision = self.sampler.absorb(e, &mut self.meter);
        if decision.kept {
            if self.keep_raw {
                self.raw_kept.push((idx, e));
                self.meter.alloc("raw-store", WORDS_PER_EDGE);
            }
            self.tower.push(Edge { u: e.u, v: e.v, w: decision.weight }, idx, &mut self.meter);
        }
    }

    pub fn raw_kept(&self) -> &[(u64, Edge<f64>)] {
        &self.raw_kept
    }

    /// Sparsifier of everything seen so far; usable mid-stream (checkpoints).
    pub fn current_sparsifier(&mut self) -> Sparsifier {
        self.tower.finalize_sparsifier(&mut self.meter)
    }

    pub fn finish(mut self) -> StreamOutput {
        let sparsifier = self.tower.finalize_sparsifier(&mut self.meter);
        StreamOutput {
            sparsifier,
            peak_words: self.meter.peak_words(),
            meter: self.meter,
            sampler_kept: self.sampler.kept_count(),
            solver_failures: self.sampler.solver_failures,
            cascades: self.tower.cascades,
            raw_kept: self.raw_kept,
        }
    }
}

/// Result of a full single-pass run.
pub struct StreamOutput {
    pub sparsifier: Sparsifier,
    pub meter: SpaceMeter,
    pub peak_words: usize,
    pub sampler_kept: usize,
    pub solver_failures: u64,
    pub cascades: u64,
    pub raw_kept: Vec<(u64, Edge<f64>)>,
}

/// Single-pass for-each spectral sparsifier of the stream.
pub fn stream_foreach_sparsifier(stream: EdgeStream, eps: f64, seed: u64, cfg: &Config) -> StreamOutput {
    let mut engine = StreamEngine::new(stream.n(), eps, Reducer::ForEach, seed, 1.0, cfg);
    for e in stream.into_iter_counted() {
        engine.push(e);
    }
    engine.finish()
}

/// Single-pass for-all sparsifier of the stream.
pub fn stream_forall_sparsifier(stream: EdgeStream, eps: f64, seed: u64, cfg: &Config) -> StreamOutput {
    let mut engine = StreamEngine::new(stream.n(), eps, Reducer::ForAll, seed, 1.0, cfg);
    for e in stream.into_iter_counted() {
        engine.push(e);
    }
    engine.finish()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;

    #[test]
    fn short_stream_never_cascades() {
        let g = gen::gnp(30, 0.3, 5);
        let cfg = Config::default();
        let out = stream_foreach_sparsifier(EdgeStream::from_graph(&g), 0.5, 1, &cfg);
        assert_eq!(out.cascades, 0);
        assert_eq!(out.sparsifier.graph.m(), g.m(), "identity at this scale");
    }

    #[test]
    fn exactly_two_mspace_of_edges_cascades_once() {
        let g = gen::complete(12); // 66 edges
        let mut cfg = Config::default();
        cfg.mspace_log_pow = 0;
        cfg.mspace_mult = 0.5; // m_space = 0.5 * 12 / 0.2 = 30
        let eps = 0.2;
        let m_space = cfg.mspace(12, eps);
        assert_eq!(m_space, 30);
        let mut engine = StreamEngine::new(12, eps, Reducer::ForEach, 3, 1.0, &cfg);
        let edges: Vec<_> = g.edges().to_vec();
        for e in edges.iter().take(2 * m_space) {
            engine.push(*e);
        }
        // Arrival 2*m_space: block 0 filled twice, exactly one cascade into B_1.
        assert_eq!(engine.tower.cascades(), 1);
        assert_eq!(engine.tower.max_level(), 1);
        let out = engine.finish();
        assert!(out.sparsifier.graph.m() <= 2 * m_space);
    }

    #[test]
    fn tree_streams_exactly_reproduce_the_tree() {
        let g = gen::path(40);
        let cfg = Config::default().lean_foreach();
        let out = stream_forall_sparsifier(EdgeStream::from_graph(&g), 0.3, 9, &cfg);
        assert_eq!(out.sparsifier.graph.m(), 39, "leverage-1 edges survive every reduction");
        for (e, orig) in out.sparsifier.graph.edges().iter().zip(g.edges()) {
            assert_eq!((e.u, e.v, e.w), (orig.u, orig.v, orig.w));
        }
    }

    #[test]
    fn telescoping_chain_stays_within_budget() {
        let g = gen::gnp(64, 0.5, 8);
        let mut cfg = Config::default().lean_foreach();
        cfg.mspace_mult = 0.25; // force several cascades
        let eps = 0.5;
        let out = stream_foreach_sparsifier(EdgeStream::from_graph(&g), eps, 4, &cfg);
        assert!(out.cascades > 0);
        let chain = &out.sparsifier.accuracy_chain;
        assert!(chain.len() >= 2);
        let tower_product: f64 = chain[..chain.len() - 1].iter().product();
        assert!(
            tower_product <= 1.0 + eps + 1e-9,
            "per-level factors {tower_product} exceed 1+eps"
        );
    }

    #[test]
    fn single_pass_discipline_visit_counter() {
        let g = gen::gnp(20, 0.4, 2);
        let m = g.m() as u64;
        let cfg = Config::default();
        let mut engine = StreamEngine::new(20, 0.5, Reducer::ForAll, 1, 1.0, &cfg);
        let mut counted = EdgeStream::from_graph(&g).into_iter_counted();
        for e in counted.by_ref() {
            engine.push(e);
        }
        assert_eq!(counted.visits(), m, "each element visited exactly once");
        engine.finish();
    }

    #[test]
    fn outputs_are_reweighted_substreams() {
        let g = gen::gnp(48, 0.4, 13);
        let mut cfg = Config::default().lean_foreach();
        cfg.mspace_mult = 0.5;
        let stream = EdgeStream::from_graph(&g);
        let out = stream_foreach_sparsifier(stream, 0.5, 21, &cfg);
        for (e, &src) in out.sparsifier.graph.edges().iter().zip(&out.sparsifier.source_edge_ids) {
            let orig = g.edge(src);
            let same = (orig.u, orig.v) == (e.u, e.v) || (orig.u, orig.v) == (e.v, e.u);
            assert!(same, "source id {src} does not match");
            assert!(e.w >= orig.w - 1e-12);
        }
    }

    #[test]
    fn k16_streamed_forall_exhaustive_cut_check() {
        let g = gen::complete(16);
        let cfg = Config::default().lean_forall(0.6).lean_foreach();
        let eps = 0.3;
        let want = crate::oracle::all_cut_values_gray(&g);
        let mut good = 0;
        for seed in 0..40 {
            let out = stream_forall_sparsifier(EdgeStream::from_graph(&g).shuffled(seed), eps, seed, &cfg);
            let got = crate::oracle::all_cut_values_gray(&out.sparsifier.graph);
            let ok = want.iter().zip(&got).all(|(&a, &b)| {
                a.is_nan() || (b >= (1.0 - eps) * a - 1e-9 && b <= (1.0 + eps) * a + 1e-9)
            });
            if ok {
                good += 1;
            }
        }
        assert!(good * 100 >= 40 * 95, "{good}/40 seeds passed");
    }

    #[test]
    fn dumbbell_stream_preserves_bridge_min_cut() {
        let g = gen::dumbbell(12);
        let cfg = Config::default().lean_forall(0.7).lean_foreach();
        for seed in 0..10 {
            let out = stream_forall_sparsifier(EdgeStream::from_graph(&g).shuffled(seed), 0.3, seed, &cfg);
            let (mc, _) = crate::oracle::stoer_wagner_min_cut(&out.sparsifier.graph);
            assert_eq!(mc, 1.0, "seed {seed}");
        }
    }
}
