//! For-all spectral sparsification by independent leverage-score sampling.

use super::{Sparsifier, SparsifierKind};
use crate::config::Config;
use crate::graph::{Edge, WeightedGraph};
use crate::leverage::ResistanceEstimator;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Samples each edge independently with `p_e = min(1, c_all * w_e * r_e *
/// ln(n) / eps^2)` and reweights survivors by `1/p_e`. Disconnected inputs
/// are handled per component (resistances are intra-component). Bridges have
/// leverage 1 and are never dropped.
///
/// `prob_multiplier` scales every probability (the oversampling hook used for
/// min-cut edge recovery); pass 1.0 otherwise.
pub fn forall_sparsify(
    g: &WeightedGraph<f64>,
    eps: f64,
    seed: u64,
    prob_multiplier: f64,
    cfg: &Config,
) -> Sparsifier {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0,1)");
    let n = g.n();
    if g.m() == 0 {
        return Sparsifier::identity(g.clone(), SparsifierKind::ForAll, eps, seed);
    }
    let oversample = cfg.c_all * (n.max(2) as f64).ln() / (eps * eps) * prob_multiplier;
    // Star-cut lower bound r_e >= 1/min(wdeg_u, wdeg_v): edges whose bound
    // already saturates p = 1 never need a resistance estimate, and at tight
    // accuracies that is all of them.
    let wdeg: Vec<f64> = (0..n).map(|v| g.weighted_degree(v)).collect();
    let saturated = |e: &Edge<f64>| {
        let bound = e.w / wdeg[e.u as usize].min(wdeg[e.v as usize]);
        oversample * bound >= 1.0
    };
    let estimator = if g.edges().iter().all(saturated) {
        None
    } else {
        Some(ResistanceEstimator::build(g, seed ^ 0x5eed, cfg))
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    let mut source = Vec::new();
    match estimator {
        None => {
            edges = g.edges().to_vec();
            source = (0..g.m()).collect();
        }
        Some(Ok(est)) => {
            for (id, e) in g.edges().iter().enumerate() {
                let lev = if saturated(e) {
                    1.0
                } else {
                    (e.w * est.resistance(e.u as usize, e.v as usize)).clamp(1e-12, 1.0)
                };
                let p = (oversample * lev).min(1.0);
                if p >= 1.0 || rng.gen_bool(p) {
                    edges.push(Edge { u: e.u, v: e.v, w: e.w / p });
                    source.push(id);
                }
            }
        }
        Some(Err(_)) => {
            // Solver trouble: keep everything. Correctness over space.
            edges = g.edges().to_vec();
            source = (0..g.m()).collect();
        }
    }
    let graph = WeightedGraph::new_multi(n, edges).unwrap();
    Sparsifier {
        graph,
        kind: SparsifierKind::ForAll,
        eps,
        seed,
        source_edge_ids: source,
        fallback: false,
        accuracy_chain: vec![1.0 + eps],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::VertexSet;
    use crate::gen;
    use crate::oracle;
    use crate::sparsify::assert_reweighted_subgraph;

    #[test]
    fn trees_pass_through_exactly() {
        let g = gen::path(12);
        let cfg = Config::default();
        let sp = forall_sparsify(&g, 0.5, 3, 1.0, &cfg);
        assert_eq!(sp.graph.m(), 11, "every tree edge has leverage 1");
        for (a, b) in sp.graph.edges().iter().zip(g.edges()) {
            assert_eq!((a.u, a.v, a.w), (b.u, b.v, b.w));
        }
        assert_reweighted_subgraph(&g, &sp);
    }

    #[test]
    fn k20_exhaustive_cut_check() {
        // With the lean oversampling constant the sampler genuinely drops
        // edges; all 2^19 - 1 cuts must stay within (1 +/- 0.5) for at least
        // 95% of seeds.
        let g = gen::complete(20);
        let cfg = Config::default().lean_forall(0.6);
        let eps = 0.5;
        let want = crate::oracle::all_cut_values_gray(&g);
        let mut good_seeds = 0;
        let total_seeds = 100;
        for seed in 0..total_seeds {
            let sp = forall_sparsify(&g, eps, seed, 1.0, &cfg);
            assert_reweighted_subgraph(&g, &sp);
            assert!(sp.graph.m() < g.m(), "seed {seed} dropped nothing");
            if exhaustive_within(&want, &sp.graph, eps) {
                good_seeds += 1;
            }
        }
        assert!(good_seeds >= 95, "only {good_seeds}/100 seeds passed the exhaustive check");
    }

    fn exhaustive_within(want: &[f64], h: &WeightedGraph<f64>, eps: f64) -> bool {
        let got = crate::oracle::all_cut_values_gray(h);
        want.iter().zip(&got).all(|(&a, &b)| {
            a.is_nan() || (b >= (1.0 - eps) * a - 1e-9 && b <= (1.0 + eps) * a + 1e-9)
        })
    }

    #[test]
    fn dumbbell_bridge_always_survives() {
        let g = gen::dumbbell(15);
        let cfg = Config::default().lean_forall(0.5);
        for seed in 0..50 {
            let sp = forall_sparsify(&g, 0.3, seed, 1.0, &cfg);
            let bridge_present = sp
                .graph
                .edges()
                .iter()
                .any(|e| (e.u as usize, e.v as usize) == (0, 15) || (e.v as usize, e.u as usize) == (0, 15));
            assert!(bridge_present, "seed {seed} dropped the bridge");
            let (min_cut, _) = oracle::stoer_wagner_min_cut(&sp.graph);
            assert_eq!(min_cut, 1.0, "bridge weight must stay exactly 1");
        }
    }

    #[test]
    fn disconnected_inputs_are_sparsified_per_component() {
        let g = crate::graph::parse_graph_text("6 6\n0 1\n1 2\n2 0\n3 4\n4 5\n5 3\n").unwrap();
        let cfg = Config::default();
        let sp = forall_sparsify(&g, 0.5, 1, 1.0, &cfg);
        assert_eq!(sp.graph.m(), 6, "probabilities saturate on triangles");
    }
}
