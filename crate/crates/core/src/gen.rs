//! Deterministic instance generators: random families and the two
//! communication-gadget constructions used as adversarial ground truth.

use crate::graph::{Edge, WeightedGraph};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GenError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("block size 1/(4*eps) = {0} is not an integer; snap eps first")]
    NonIntegralBlocks(f64),
    #[error("degenerate instance: deg(a)+deg(b) = {0} leaves no legal attachment for c")]
    DegenerateDegrees(usize),
}

pub fn complete(n: usize) -> WeightedGraph<f64> {
    let mut edges = Vec::with_capacity(n * (n - 1) / 2);
    for u in 0..n {
        for v in u + 1..n {
            edges.push(Edge::new(u, v, 1.0));
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

pub fn cycle(n: usize) -> WeightedGraph<f64> {
    let edges = (0..n).map(|v| Edge::new(v, (v + 1) % n, 1.0)).collect();
    WeightedGraph::new(n, edges).unwrap()
}

pub fn path(n: usize) -> WeightedGraph<f64> {
    let edges = (0..n - 1).map(|v| Edge::new(v, v + 1, 1.0)).collect();
    WeightedGraph::new(n, edges).unwrap()
}

/// Erdos-Renyi G(n, p), unit weights.
pub fn gnp(n: usize, p: f64, seed: u64) -> WeightedGraph<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge::new(u, v, 1.0));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// G(n, p) with uniform random weights in [0.5, 4).
pub fn gnp_weighted(n: usize, p: f64, seed: u64) -> WeightedGraph<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9).wrapping_add(0x57));
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push(Edge::new(u, v, rng.gen_range(0.5..4.0)));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// First G(n,p) draw (bumping the seed) that comes out connected.
pub fn connected_gnp(n: usize, p: f64, seed: u64) -> WeightedGraph<f64> {
    for bump in 0..64 {
        let g = gnp(n, p, seed.wrapping_add(bump * 0x9e37));
        if g.is_connected() {
            return g;
        }
    }
    panic!("no connected G({n},{p}) draw within 64 attempts; raise p");
}

/// Two k-cliques joined by a single bridge; the unique minimum cut is the bridge.
pub fn dumbbell(k: usize) -> WeightedGraph<f64> {
    let n = 2 * k;
    let mut edges = Vec::new();
    for u in 0..k {
        for v in u + 1..k {
            edges.push(Edge::new(u, v, 1.0));
            edges.push(Edge::new(k + u, k + v, 1.0));
        }
    }
    edges.push(Edge::new(0, k, 1.0));
    WeightedGraph::new(n, edges).unwrap()
}

/// Two equal blocks with Bernoulli(p_in) internal edges and exactly
/// `cross` planted crossing edges.
pub fn planted_bisection(n: usize, p_in: f64, cross: usize, seed: u64) -> WeightedGraph<f64> {
    assert!(n % 2 == 0 && n >= 4);
    let half = n / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for block in 0..2 {
        let base = block * half;
        for u in 0..half {
            for v in u + 1..half {
                if rng.gen_bool(p_in) {
                    edges.push(Edge::new(base + u, base + v, 1.0));
                }
            }
        }
    }
    let mut cross_pairs: Vec<(usize, usize)> = Vec::with_capacity(cross);
    let mut used = std::collections::HashSet::new();
    while cross_pairs.len() < cross {
        let u = rng.gen_range(0..half);
        let v = half + rng.gen_range(0..half);
        if used.insert((u, v)) {
            cross_pairs.push((u, v));
        }
    }
    cross_pairs.sort_unstable();
    for (u, v) in cross_pairs {
        edges.push(Edge::new(u, v, 1.0));
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// Chain of cliques with exactly `k` edges between consecutive layers;
/// the minimum cut is k for `width > k`.
pub fn kedge_layered(layers: usize, width: usize, k: usize) -> WeightedGraph<f64> {
    assert!(width > k && layers >= 2, "need width > k for the layer boundary to be minimal");
    let n = layers * width;
    let mut edges = Vec::new();
    for l in 0..layers {
        let base = l * width;
        for u in 0..width {
            for v in u + 1..width {
                edges.push(Edge::new(base + u, base + v, 1.0));
            }
        }
        if l + 1 < layers {
            for j in 0..k {
                edges.push(Edge::new(base + j, base + width + j, 1.0));
            }
        }
    }
    WeightedGraph::new(n, edges).unwrap()
}

/// Seeded line-order shuffle used by the `--shuffle` flag.
pub fn shuffled_edges(g: &WeightedGraph<f64>, seed: u64) -> Vec<Edge<f64>> {
    let mut edges = g.edges().to_vec();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    edges
}

// ---------------------------------------------------------------------------
// Hard instances
// ---------------------------------------------------------------------------

/// Exact-min-cut gadget: encodes one bit of the upper-triangle adjacency of a
/// base graph into which of two planted cuts is minimum.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HardInstanceExact {
    pub base_n: usize,
    pub index: usize,
    /// The probed pair (a, b).
    pub pair: (usize, usize),
    pub bit: bool,
    pub deg_a: usize,
    pub deg_b: usize,
    /// Ground-truth minimum cut value of the emitted graph.
    pub min_cut: usize,
}

/// Upper-triangle pair for bit index `i` over `n` vertices.
pub fn pair_for_index(n: usize, mut i: usize) -> (usize, usize) {
    for a in 0..n {
        let row = n - a - 1;
        if i < row {
            return (a, a + 1 + i);
        }
        i -= row;
    }
    panic!("index out of range");
}

pub fn bits_len_exact(n: usize) -> usize {
    n * (n - 1) / 2
}

/// Builds the exact-gadget graph on `7n+1` vertices.
///
/// Layout: `0..n` base graph, `n..4n` clique S, `4n..7n` clique T, vertex
/// `7n` is c. S joins {a,b} completely, T joins the rest of the base graph,
/// and c attaches to `deg(a)+deg(b)-1` vertices picked lowest-id-first from
/// the base graph minus {a,b}, overflowing into T when the base graph is too
/// small.
pub fn hard_exact(n: usize, bits: &[bool], index: usize) -> Result<(WeightedGraph<f64>, HardInstanceExact), GenError> {
    if bits.len() != bits_len_exact(n) {
        return Err(GenError::InvalidParams(format!(
            "bits length {} != (n^2-n)/2 = {}",
            bits.len(),
            bits_len_exact(n)
        )));
    }
    if index >= bits.len() {
        return Err(GenError::InvalidParams("index out of range".into()));
    }
    let (a, b) = pair_for_index(n, index);
    let mut edges = Vec::new();
    let mut deg = vec![0usize; n];
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k] {
                edges.push(Edge::new(u, v, 1.0));
                deg[u] += 1;
                deg[v] += 1;
            }
            k += 1;
        }
    }
    let deg_sum = deg[a] + deg[b];
    if deg_sum <= 1 {
        return Err(GenError::DegenerateDegrees(deg_sum));
    }
    let s0 = n;
    let t0 = 4 * n;
    let c = 7 * n;
    let total = 7 * n + 1;
    for i in 0..3 * n {
        for j in i + 1..3 * n {
            edges.push(Edge::new(s0 + i, s0 + j, 1.0));
            edges.push(Edge::new(t0 + i, t0 + j, 1.0));
        }
    }
    for i in 0..3 * n {
        edges.push(Edge::new(s0 + i, a, 1.0));
        edges.push(Edge::new(s0 + i, b, 1.0));
    }
    for v in 0..n {
        if v != a && v != b {
            for i in 0..3 * n {
                edges.push(Edge::new(t0 + i, v, 1.0));
            }
        }
    }
    let mut attach: Vec<usize> = (0..n).filter(|&v| v != a && v != b).collect();
    attach.extend(t0..t0 + 3 * n);
    for &v in attach.iter().take(deg_sum - 1) {
        edges.push(Edge::new(c, v, 1.0));
    }
    let bit = bits[index];
    let min_cut = if bit { deg_sum - 2 } else { deg_sum - 1 };
    let g = WeightedGraph::new(total, edges).unwrap();
    Ok((g, HardInstanceExact { base_n: n, index, pair: (a, b), bit, deg_a: deg[a], deg_b: deg[b], min_cut }))
}

/// Approximate-min-cut gadget metadata.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct HardInstanceApprox {
    pub eps: f64,
    pub blocks: usize,
    pub block_size: usize,
    pub index: usize,
    pub pair: (usize, usize),
    pub bit: bool,
    /// (C1, C2) planted cut values; they differ by one.
    pub cut_pair: (usize, usize),
    pub min_cut: usize,
    /// Every other cut has at least this value.
    pub floor: usize,
}

/// Snaps eps downward to the nearest value making 1/(4 eps) integral.
pub fn admissible_eps(eps: f64) -> f64 {
    let s = (1.0 / (4.0 * eps)).ceil().max(1.0);
    1.0 / (4.0 * s)
}

pub fn bits_len_approx(blocks: usize, block_size: usize) -> usize {
    blocks * block_size * (block_size - 1) / 2
}

/// Builds the approximate-gadget graph: `blocks` disjoint base blocks of
/// `1/(4 eps)` vertices, cliques S and T of `3/(4 eps)`, non-target blocks
/// fully joined to S or T alternately, and the probed block wired as in the
/// exact gadget.
pub fn hard_approx(
    eps: f64,
    blocks: usize,
    bits: &[bool],
    index: usize,
) -> Result<(WeightedGraph<f64>, HardInstanceApprox), GenError> {
    let s_f = 1.0 / (4.0 * eps);
    if (s_f - s_f.round()).abs() > 1e-9 {
        return Err(GenError::NonIntegralBlocks(s_f));
    }
    let s = s_f.round() as usize;
    if s < 2 || blocks == 0 {
        return Err(GenError::InvalidParams("need block size >= 2 and at least one block".into()));
    }
    if bits.len() != bits_len_approx(blocks, s) {
        return Err(GenError::InvalidParams(format!(
            "bits length {} != blocks * C(s,2) = {}",
            bits.len(),
            bits_len_approx(blocks, s)
        )));
    }
    let per_block = s * (s - 1) / 2;
    if index >= bits.len() {
        return Err(GenError::InvalidParams("index out of range".into()));
    }
    let target_block = index / per_block;
    let (la, lb) = pair_for_index(s, index % per_block);
    let a = target_block * s + la;
    let b = target_block * s + lb;

    let base = blocks * s;
    let s0 = base;
    let t0 = base + 3 * s;
    let c = base + 6 * s;
    let total = base + 6 * s + 1;

    let mut edges = Vec::new();
    let mut deg = vec![0usize; base];
    for blk in 0..blocks {
        let off = blk * s;
        let mut k = blk * per_block;
        for u in 0..s {
            for v in u + 1..s {
                if bits[k] {
                    edges.push(Edge::new(off + u, off + v, 1.0));
                    deg[off + u] += 1;
                    deg[off + v] += 1;
                }
                k += 1;
            }
        }
    }
    let deg_sum = deg[a] + deg[b];
    if deg_sum <= 1 {
        return Err(GenError::DegenerateDegrees(deg_sum));
    }
    for i in 0..3 * s {
        for j in i + 1..3 * s {
            edges.push(Edge::new(s0 + i, s0 + j, 1.0));
            edges.push(Edge::new(t0 + i, t0 + j, 1.0));
        }
    }
    // Target block: S joins {a,b}, T joins the block's other vertices.
    for i in 0..3 * s {
        edges.push(Edge::new(s0 + i, a, 1.0));
        edges.push(Edge::new(s0 + i, b, 1.0));
    }
    for v in target_block * s..(target_block + 1) * s {
        if v != a && v != b {
            for i in 0..3 * s {
                edges.push(Edge::new(t0 + i, v, 1.0));
            }
        }
    }
    // Remaining blocks alternate between S and T, lowest block id first.
    let mut rank = 0usize;
    for blk in 0..blocks {
        if blk == target_block {
            continue;
        }
        let clique0 = if rank % 2 == 0 { s0 } else { t0 };
        for v in blk * s..(blk + 1) * s {
            for i in 0..3 * s {
                edges.push(Edge::new(clique0 + i, v, 1.0));
            }
        }
        rank += 1;
    }
    let mut attach: Vec<usize> =
        (target_block * s..(target_block + 1) * s).filter(|&v| v != a && v != b).collect();
    attach.extend(t0..t0 + 3 * s);
    for &v in attach.iter().take(deg_sum - 1) {
        edges.push(Edge::new(c, v, 1.0));
    }

    let bit = bits[index];
    let c1 = deg_sum - 2 * usize::from(bit);
    let c2 = deg_sum - 1;
    let info = HardInstanceApprox {
        eps,
        blocks,
        block_size: s,
        index,
        pair: (a, b),
        bit,
        cut_pair: (c1, c2),
        min_cut: c1.min(c2),
        floor: 3 * s - 1,
    };
    let g = WeightedGraph::new(total, edges).unwrap();
    Ok((g, info))
}

/// Manifest describing how a corpus file was produced.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CorpusManifest {
    pub kind: String,
    pub params: serde_json::Value,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitset::VertexSet;

    #[test]
    fn generators_are_deterministic() {
        let a = gnp(20, 0.5, 7);
        let b = gnp(20, 0.5, 7);
        assert_eq!(crate::graph::write_graph_text(&a), crate::graph::write_graph_text(&b));
        let c = planted_bisection(32, 0.4, 10, 3);
        let d = planted_bisection(32, 0.4, 10, 3);
        assert_eq!(crate::graph::write_graph_text(&c), crate::graph::write_graph_text(&d));
    }

    #[test]
    fn dumbbell_bridge_is_min_cut() {
        let g = dumbbell(15);
        let side = VertexSet::from_members(30, 0..15);
        assert_eq!(g.cut_value(&side).unwrap(), 1.0);
        // Non-bridge clique vertices have degree 14.
        assert_eq!(g.min_degree_cut().value.unwrap(), 14.0);
    }

    #[test]
    fn planted_bisection_has_exact_cross_count() {
        let g = planted_bisection(64, 0.3, 17, 9);
        let side = VertexSet::from_members(64, 0..32);
        assert_eq!(g.cut_value(&side).unwrap(), 17.0);
    }

    #[test]
    fn planted_cut_is_the_oracle_minimum_on_most_seeds() {
        // Cross count ~ 3 log2(n) with inner density high enough that
        // degrees stay clear of the planted value.
        let n = 128;
        let cross = 21; // 3 * log2(128)
        let mut hits = 0;
        for seed in 0..10 {
            let g = planted_bisection(n, 0.65, cross, 800 + seed);
            let (w, _) = crate::oracle::stoer_wagner_min_cut(&g);
            if w == cross as f64 {
                hits += 1;
            }
        }
        assert!(hits >= 9, "planted cut minimal in {hits}/10 seeds");
    }

    #[test]
    fn kedge_layered_boundary() {
        let g = kedge_layered(3, 6, 4);
        let side = VertexSet::from_members(18, 0..6);
        assert_eq!(g.cut_value(&side).unwrap(), 4.0);
        assert!(g.min_degree_cut().value.unwrap() > 4.0);
    }

    #[test]
    fn pair_index_covers_upper_triangle() {
        let n = 6;
        let mut seen = std::collections::HashSet::new();
        for i in 0..bits_len_exact(n) {
            let (a, b) = pair_for_index(n, i);
            assert!(a < b && b < n);
            assert!(seen.insert((a, b)));
        }
        assert_eq!(seen.len(), 15);
    }

    #[test]
    fn hard_exact_structure() {
        let n = 4;
        let bits = vec![true; bits_len_exact(n)];
        let (g, info) = hard_exact(n, &bits, 0).unwrap();
        assert_eq!(g.n(), 7 * n + 1);
        // All-ones bits: every base degree is 3, the probed bit is set.
        assert_eq!(info.deg_a + info.deg_b, 6);
        assert_eq!(info.min_cut, 4);
        assert!(info.bit);
    }

    #[test]
    fn hard_exact_rejects_degenerate() {
        let n = 4;
        let bits = vec![false; bits_len_exact(n)];
        assert!(matches!(hard_exact(n, &bits, 0), Err(GenError::DegenerateDegrees(0))));
    }

    #[test]
    fn admissible_eps_snaps_down() {
        assert_eq!(admissible_eps(1.0 / 8.0), 1.0 / 8.0);
        assert_eq!(admissible_eps(0.1), 1.0 / 12.0);
        assert!(admissible_eps(0.09) <= 0.09);
    }

    #[test]
    fn hard_approx_structure() {
        let eps = 1.0 / 12.0;
        let s = 3;
        let blocks = 2;
        let mut bits = vec![false; bits_len_approx(blocks, s)];
        bits[0] = true; // edge (0,1) in block 0
        bits[1] = true; // edge (0,2) in block 0
        let (g, info) = hard_approx(eps, blocks, &bits, 0).unwrap();
        assert_eq!(info.block_size, 3);
        assert_eq!(g.n(), blocks * s + 6 * s + 1);
        assert_eq!(info.pair, (0, 1));
        // deg(0)=2, deg(1)=1, bit=1 -> C1 = 1, C2 = 2.
        assert_eq!(info.cut_pair, (1, 2));
        assert_eq!(info.min_cut, 1);
        assert_eq!(info.floor, 8);
    }
}
