//! Online leverage-score sampling: keep-or-drop decisions at arrival time,
//! never revoked.

use crate::config::Config;
use crate::graph::{Edge, WeightedGraph};
use crate::meter::{SpaceMeter, WORDS_PER_EDGE};
use crate::sketch::solver::LaplacianSolver;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Decision record for one arrived edge.
#[derive(Clone, Copy, Debug)]
pub struct SampleDecision {
    pub kept: bool,
    pub probability: f64,
    /// Reweighted weight (w / p) when kept.
    pub weight: f64,
}

/// Ridge-regularized online sampler.
///
/// Keeps edge `e` with `p_e = min(1, c * w_e * r_e * log2(n)^2 / eps^2)`
/// where `r_e` is the effective resistance between the endpoints in the
/// *kept* graph under ridge `lambda` (so early arrivals and fresh components
/// saturate at p = 1). Kept edges are reweighted by `1/p` and immediately
/// join the substrate. A Nash-Williams star bound certifies `p = 1` without
/// solving in the common case; solver failures keep the edge and are logged.
pub struct OnlineSampler {
    n: usize,
    eps: f64,
    lambda: f64,
    oversample: f64,
    rng: ChaCha8Rng,
    kept_adj: Vec<Vec<(u32, f64)>>,
    kept_edges: Vec<Edge<f64>>,
    kept_weighted_degree: Vec<f64>,
    arrived: u64,
    pub solver_failures: u64,
    cfg: Config,
}

impl OnlineSampler {
    pub fn new(n: usize, eps: f64, prob_multiplier: f64, seed: u64, cfg: &Config) -> Self {
        let log2n = (n.max(2) as f64).log2();
        OnlineSampler {
            n,
            eps,
            lambda: 1.0 / cfg.weight_cap(n),
            oversample: cfg.c_online * log2n * log2n / (eps * eps) * prob_multiplier,
            rng: ChaCha8Rng::seed_from_u64(seed),
            kept_adj: vec![Vec::new(); n],
            kept_edges: Vec::new(),
            kept_weighted_degree: vec![0.0; n],
            arrived: 0,
            solver_failures: 0,
            cfg: cfg.clone(),
        }
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn kept_count(&self) -> usize {
        self.kept_edges.len()
    }

    pub fn kept_edges(&self) -> &[Edge<f64>] {
        &self.kept_edges
    }

    pub fn arrived(&self) -> u64 {
        self.arrived
    }

    /// Processes one arrival; returns the decision (with reweighted weight).
    pub fn absorb(&mut self, e: Edge<f64>, meter: &mut SpaceMeter) -> SampleDecision {
        self.arrived += 1;
        let (u, v) = (e.u as usize, e.v as usize);
        // Star-cut lower bound on the kept-graph resistance: the lighter
        // endpoint star is a cut separating the pair, so r >= 1/(deg+lambda).
        let deg_floor = self.kept_weighted_degree[u].min(self.kept_weighted_degree[v]) + self.lambda;
        let r_lower = 1.0 / deg_floor;
        let p = if self.oversample * e.w * r_lower >= 1.0 {
            1.0
        } else {
            let r = self.kept_resistance(u, v);
            (self.oversample * e.w * r).min(1.0)
        };
        let kept = p >= 1.0 || self.rng.gen_bool(p);
        if kept {
            let w_eff = e.w / p;
            self.kept_adj[u].push((e.v, w_eff));
            self.kept_adj[v].push((e.u, w_eff));
            self.kept_weighted_degree[u] += w_eff;
            self.kept_weighted_degree[v] += w_eff;
            self.kept_edges.push(Edge { u: e.u, v: e.v, w: w_eff });
            meter.alloc("sampler", WORDS_PER_EDGE);
            SampleDecision { kept: true, probability: p, weight: w_eff }
        } else {
            SampleDecision { kept: false, probability: p, weight: 0.0 }
        }
    }

    /// Ridge-regularized resistance in the kept graph; on solver failure the
    /// edge is kept unconditionally (resistance reported as saturating).
    fn kept_resistance(&mut self, u: usize, v: usize) -> f64 {
        let kept = match WeightedGraph::new_multi(self.n, self.kept_edges.clone()) {
            Ok(g) => g,
            Err(_) => {
                self.solver_failures += 1;
                return f64::INFINITY;
            }
        };
        let solver = LaplacianSolver::with_params(
            &kept,
            self.cfg.cg_tol.max(1e-6),
            self.cfg.cg_max_iters_mult * self.n.max(8),
            self.lambda,
        );
        match solver.effective_resistance(u, v) {
            Ok(r) => r.max(0.0),
            Err(_) => {
                self.solver_failures += 1;
                f64::INFINITY
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::stream::EdgeStream;

    #[test]
    fn first_edge_is_always_kept_with_p_one() {
        let cfg = Config::default();
        let mut meter = SpaceMeter::new();
        let mut s = OnlineSampler::new(10, 0.5, 1.0, 1, &cfg);
        let d = s.absorb(Edge::new(0, 1, 1.0), &mut meter);
        assert!(d.kept);
        assert_eq!(d.probability, 1.0);
        assert_eq!(d.weight, 1.0);
    }

    #[test]
    fn bridging_disconnected_components_is_kept() {
        let cfg = Config::default();
        let mut meter = SpaceMeter::new();
        let mut s = OnlineSampler::new(6, 0.5, 1.0, 1, &cfg);
        for e in [Edge::new(0, 1, 1.0), Edge::new(3, 4, 1.0)] {
            s.absorb(e, &mut meter);
        }
        let d = s.absorb(Edge::new(1, 3, 1.0), &mut meter);
        assert!(d.kept && d.probability == 1.0, "cross-component resistance saturates p");
    }

    #[test]
    fn k50_random_order_kept_count_bounded_and_small_prefix_exact() {
        let cfg = Config::default();
        let eps = 0.5;
        let g = gen::complete(50);
        let stream = EdgeStream::from_graph(&g).shuffled(99);
        let mut meter = SpaceMeter::new();
        let mut s = OnlineSampler::new(50, eps, 1.0, 42, &cfg);
        for e in stream.into_iter_counted() {
            s.absorb(e, &mut meter);
        }
        let log2n = 50f64.log2();
        let bound = (cfg.c_online * 50.0 * log2n * log2n / (eps * eps) * 2.0).ceil() as usize;
        assert!(s.kept_count() <= bound, "{} > {bound}", s.kept_count());
        assert_eq!(s.solver_failures, 0);

        // n=14 sub-experiment: every cut of the kept graph matches the
        // original exactly when all probabilities saturate at 1.
        let g14 = gen::complete(14);
        let mut s14 = OnlineSampler::new(14, eps, 1.0, 7, &cfg);
        for e in EdgeStream::from_graph(&g14).shuffled(3).into_iter_counted() {
            s14.absorb(e, &mut meter);
        }
        let kept = WeightedGraph::new_multi(14, s14.kept_edges().to_vec()).unwrap();
        for code in 1u32..(1 << 13) {
            let side = crate::bitset::VertexSet::from_members(
                14,
                (0..14).filter(|&v| v == 0 || (code >> (v - 1)) & 1 == 1),
            );
            if !side.is_proper_nonempty() {
                continue;
            }
            let a = g14.cut_value(&side).unwrap();
            let b = kept.cut_value(&side).unwrap();
            assert!(b >= (1.0 - eps) * a - 1e-9 && b <= (1.0 + eps) * a + 1e-9);
        }
    }

    #[test]
    fn lean_constant_forces_real_decisions() {
        let mut cfg = Config::default();
        cfg.c_online = 0.02;
        let g = gen::complete(40);
        let mut meter = SpaceMeter::new();
        let mut s = OnlineSampler::new(40, 0.5, 1.0, 5, &cfg);
        for e in EdgeStream::from_graph(&g).shuffled(11).into_iter_counted() {
            s.absorb(e, &mut meter);
        }
        assert!(s.kept_count() < g.m(), "sampler should drop edges at this constant");
        // Decisions are never revoked: kept edges form a subset with growing weights.
        for e in s.kept_edges() {
            assert!(e.w >= 1.0 - 1e-12);
        }
    }
}
