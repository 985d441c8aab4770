//! Recursive contraction with two-way branching: enumerate all
//! alpha-approximate minimum cuts with high probability.
//!
//! Each tree contracts weight-proportional random edges from N supernodes
//! down to `ceil(N / 2^(1/(2 alpha))) + 1`, recurses twice on the contracted
//! state, and finishes by exhaustive bipartition enumeration below
//! `2 ceil(2 alpha)` supernodes. Leaves are valued exactly from the
//! contracted multigraph, or by the median of attached incidence-column
//! sketches (columns merge along every contraction and unmerge on backtrack).

use super::CutFamily;
use crate::bitset::VertexSet;
use crate::graph::WeightedGraph;
use crate::hashing::splitmix64;
use crate::sketch::jl::JlIncidenceSketch;
use rayon::prelude::*;
use thiserror::Error;

/// Minimal counter-based RNG for the hot contraction loop.
struct NanoRng(u64);

impl NanoRng {
    fn new(seed: u64) -> Self {
        NanoRng(splitmix64(seed))
    }

    #[inline]
    fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e37_79b9_7f4a_7c15);
        splitmix64(self.0)
    }

    /// Uniform in [0, bound).
    #[inline]
    fn next_f64(&mut self, bound: f64) -> f64 {
        ((self.next_u64() >> 11) as f64) * (1.0 / (1u64 << 53) as f64) * bound
    }
}

#[derive(Debug, Error)]
pub enum ContractError {
    #[error("edge endpoints lie in the same supernode")]
    SelfLoopContraction,
}

/// Union-find with rollback (no path compression, union by size).
///
/// Each root carries an XOR fingerprint of its member vertices, kept in sync
/// under unions and rollbacks; a bipartition of roots then has an O(base)
/// canonical fingerprint, which lets the enumerator dedup cuts without
/// materializing vertex sets.
struct RollbackUf {
    parent: Vec<u32>,
    size: Vec<u32>,
    log: Vec<(u32, u32)>, // (child root, its recorded live_roots position)
    live_roots: Vec<u32>,
    pos: Vec<u32>,
    fp: Vec<u64>,
    all_fp: u64,
}

impl RollbackUf {
    fn new(n: usize) -> Self {
        let fp: Vec<u64> = (0..n as u64).map(|v| splitmix64(v.wrapping_mul(0xa076_1d64_78bd_642f) ^ 0x51)).collect();
        let all_fp = fp.iter().fold(0, |a, &b| a ^ b);
        RollbackUf {
            parent: (0..n as u32).collect(),
            size: vec![1; n],
            log: Vec::new(),
            live_roots: (0..n as u32).collect(),
            pos: (0..n as u32).collect(),
            fp,
            all_fp,
        }
    }

    fn find(&self, mut v: u32) -> u32 {
        while self.parent[v as usize] != v {
            v = self.parent[v as usize];
        }
        v
    }

    /// Merges the two roots; returns (kept, absorbed).
    fn union_roots(&mut self, a: u32, b: u32) -> (u32, u32) {
        debug_assert!(a != b && self.parent[a as usize] == a && self.parent[b as usize] == b);
        let (kept, child) = if self.size[a as usize] >= self.size[b as usize] { (a, b) } else { (b, a) };
        self.parent[child as usize] = kept;
        self.size[kept as usize] += self.size[child as usize];
        self.fp[kept as usize] ^= self.fp[child as usize];
        // Remove child from the live-root list, remembering where it sat.
        let idx = self.pos[child as usize];
        self.log.push((child, idx));
        let last = self.live_roots.len() - 1;
        self.live_roots.swap(idx as usize, last);
        let moved = self.live_roots[idx as usize];
        self.pos[moved as usize] = idx;
        self.live_roots.pop();
        (kept, child)
    }

    fn mark(&self) -> usize {
        self.log.len()
    }

    fn rollback(&mut self, mark: usize) {
        while self.log.len() > mark {
            let (child, idx) = self.log.pop().unwrap();
            let kept = self.parent[child as usize];
            self.parent[child as usize] = child;
            self.size[kept as usize] -= self.size[child as usize];
            self.fp[kept as usize] ^= self.fp[child as usize];
            // Reverse the swap_remove: reinsert child at idx.
            self.live_roots.push(child);
            let last = self.live_roots.len() - 1;
            self.live_roots.swap(idx as usize, last);
            let moved = self.live_roots[last];
            self.pos[moved as usize] = last as u32;
            self.pos[child as usize] = idx;
        }
    }

    fn live_count(&self) -> usize {
        self.live_roots.len()
    }
}

/// Multigraph under contraction with optionally attached column sketches.
///
/// Exposed for single-step use; the enumerator drives the same machinery
/// internally with rollback.
pub struct ContractionState {
    n: usize,
    uf: RollbackUf,
    /// Current multigraph edges between supernodes (compacted on demand).
    edges: Vec<(u32, u32, f64)>,
    sketches: Vec<JlIncidenceSketch<f64>>,
}

impl ContractionState {
    pub fn new(g: &WeightedGraph<f64>, sketches: Vec<JlIncidenceSketch<f64>>) -> Self {
        ContractionState {
            n: g.n(),
            uf: RollbackUf::new(g.n()),
            edges: g.edges().iter().map(|e| (e.u, e.v, e.w)).collect(),
            sketches,
        }
    }

    pub fn supernode_count(&self) -> usize {
        self.uf.live_count()
    }

    pub fn sketches(&self) -> &[JlIncidenceSketch<f64>] {
        &self.sketches
    }

    /// Merges the supernodes containing u and v; parallel edges accumulate
    /// and self-loops drop at the next compaction.
    pub fn contract_edge(&mut self, u: usize, v: usize) -> Result<(), ContractError> {
        let (ru, rv) = (self.uf.find(u as u32), self.uf.find(v as u32));
        if ru == rv {
            return Err(ContractError::SelfLoopContraction);
        }
        let (kept, child) = self.uf.union_roots(ru, rv);
        for sk in &mut self.sketches {
            sk.merge_columns(kept as usize, child as usize).expect("roots are live columns");
        }
        Ok(())
    }

    /// Compacted supernode edge list: root endpoints, parallel weights
    /// summed, self-loops dropped.
    pub fn compacted_edges(&self) -> Vec<(u32, u32, f64)> {
        compact(&self.uf, &self.edges)
    }

    /// Total weight between the two remaining supernodes.
    pub fn boundary_weight(&self) -> f64 {
        assert_eq!(self.supernode_count(), 2);
        self.compacted_edges().iter().map(|&(_, _, w)| w).sum()
    }

    /// Vertex side of the first remaining supernode.
    pub fn side(&self) -> VertexSet {
        assert_eq!(self.supernode_count(), 2);
        let root = self.uf.live_roots[0];
        VertexSet::from_members(self.n, (0..self.n).filter(|&v| self.uf.find(v as u32) == root))
    }

    /// Median sketched boundary estimate over the attached sketches.
    pub fn sketched_boundary(&self) -> Option<f64> {
        if self.sketches.is_empty() {
            return None;
        }
        let mut vals: Vec<f64> = self
            .sketches
            .iter()
            .map(|sk| sk.cut_estimate().expect("two live columns at a leaf"))
            .collect();
        Some(crate::sketch::median(&mut vals))
    }
}

/// Single contraction step on a state (the module-level operation).
pub fn contract_edge(st: &mut ContractionState, u: usize, v: usize) -> Result<(), ContractError> {
    st.contract_edge(u, v)
}

fn compact(uf: &RollbackUf, edges: &[(u32, u32, f64)]) -> Vec<(u32, u32, f64)> {
    let mut out = Vec::new();
    compact_into(uf, edges, &mut out);
    out
}

/// Compaction of the raw input under the identity partition (dedups parallel
/// input edges once per tree).
fn compact_base(edges: &[(u32, u32, f64)]) -> Vec<(u32, u32, f64)> {
    let mut out: Vec<(u32, u32, f64)> = edges.iter().map(|&(u, v, w)| (u.min(v), u.max(v), w)).collect();
    out.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut write = 0usize;
    for read in 0..out.len() {
        if write > 0 && out[write - 1].0 == out[read].0 && out[write - 1].1 == out[read].1 {
            out[write - 1].2 += out[read].2;
        } else {
            out[write] = out[read];
            write += 1;
        }
    }
    out.truncate(write);
    out
}

/// Root-maps `edges`, drops self-loops, merges parallels; writes into `out`.
fn compact_into(uf: &RollbackUf, edges: &[(u32, u32, f64)], out: &mut Vec<(u32, u32, f64)>) {
    out.clear();
    for &(u, v, w) in edges {
        let (ru, rv) = (uf.find(u), uf.find(v));
        if ru != rv {
            out.push((ru.min(rv), ru.max(rv), w));
        }
    }
    out.sort_unstable_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let mut write = 0usize;
    for read in 0..out.len() {
        if write > 0 && out[write - 1].0 == out[read].0 && out[write - 1].1 == out[read].1 {
            out[write - 1].2 += out[read].2;
        } else {
            out[write] = out[read];
            write += 1;
        }
    }
    out.truncate(write);
}

struct TreeCtx<'a> {
    n: usize,
    alpha: f64,
    base: usize,
    reduction: f64,
    uf: RollbackUf,
    sketches: Vec<JlIncidenceSketch<f64>>,
    sketch_undo: Vec<(u32, u32, Vec<Vec<f64>>)>,
    /// Canonical side fingerprint -> (best value, side). Sides materialize
    /// only on first encounter; later hits just update the value.
    collected: std::collections::HashMap<u64, (f64, VertexSet)>,
    running_min: f64,
    max_resid: f64,
    /// Per-depth compacted edge lists, reused across siblings.
    levels: Vec<Vec<(u32, u32, f64)>>,
    prefix_scratch: Vec<f64>,
    _marker: std::marker::PhantomData<&'a ()>,
}

impl<'a> TreeCtx<'a> {
    fn contract_roots(&mut self, ru: u32, rv: u32) {
        let (kept, child) = self.uf.union_roots(ru, rv);
        if !self.sketches.is_empty() {
            let saved: Vec<Vec<f64>> = self.sketches.iter().map(|sk| sk.column(child as usize).to_vec()).collect();
            for sk in &mut self.sketches {
                sk.merge_columns(kept as usize, child as usize).expect("live roots");
            }
            self.sketch_undo.push((kept, child, saved));
        }
    }

    fn rollback(&mut self, uf_mark: usize, sketch_mark: usize) {
        while self.sketch_undo.len() > sketch_mark {
            let (kept, child, saved) = self.sketch_undo.pop().unwrap();
            for (sk, col) in self.sketches.iter_mut().zip(saved) {
                sk.unmerge_columns(kept as usize, child as usize, &col);
            }
        }
        self.uf.rollback(uf_mark);
    }

    fn leaf(&mut self, edges: &[(u32, u32, f64)]) {
        let r = self.uf.live_roots.len();
        if r < 2 {
            return;
        }
        let mut roots = [0u32; 16];
        roots[..r].copy_from_slice(&self.uf.live_roots);
        let roots = &roots[..r];
        let local = |root: u32| roots.iter().position(|&x| x == root).unwrap() as u32;
        let mut local_edges = [(0u32, 0u32, 0.0f64); 128];
        let mut le = 0;
        for &(u, v, w) in edges {
            local_edges[le] = (local(u), local(v), w);
            le += 1;
        }
        let local_edges = &local_edges[..le];
        let masks = 1u32 << (r - 1);
        for mask in 0..masks - 1 {
            // Side A = roots[0] plus the subset of roots[1..] selected by
            // mask; bit i of side_bits marks roots[i].
            let side_bits: u32 = (mask << 1) | 1;
            let in_a = |i: usize| (side_bits >> i) & 1 == 1;
            let mut value = 0.0;
            for &(u, v, w) in local_edges {
                let crossing = ((side_bits >> u) ^ (side_bits >> v)) & 1;
                value += w * crossing as f64;
            }
            let value = if self.sketches.is_empty() {
                value
            } else {
                let side_roots: Vec<usize> =
                    (0..r).filter(|&i| in_a(i)).map(|i| roots[i] as usize).collect();
                let other: Vec<usize> = (0..r).filter(|&i| !in_a(i)).map(|i| roots[i] as usize).collect();
                let (small, big) = if side_roots.len() <= other.len() { (&side_roots, &other) } else { (&other, &side_roots) };
                let mut vals: Vec<f64> = Vec::with_capacity(self.sketches.len());
                for sk in &self.sketches {
                    let est = sk.side_estimate(small.iter().copied());
                    let est_other = sk.side_estimate(big.iter().copied());
                    // Column-negation diagnostic: the two side sums cancel.
                    let resid = {
                        let denom = est.sqrt().max(1e-9);
                        // ||sum_A + sum_B|| == ||sum over all live columns||
                        let mut acc = 0.0f64;
                        for row in 0..sk.rows() {
                            let mut s = 0.0;
                            for &c in side_roots.iter().chain(other.iter()) {
                                s += sk.column(c)[row];
                            }
                            acc += s * s;
                        }
                        acc.sqrt() / denom
                    };
                    self.max_resid = self.max_resid.max(resid);
                    vals.push(0.5 * (est + est_other));
                }
                crate::sketch::median(&mut vals)
            };
            self.running_min = self.running_min.min(value);
            if value <= self.alpha * self.running_min + 1e-9 {
                let fp_a = (0..r)
                    .filter(|&i| in_a(i))
                    .fold(0u64, |acc, i| acc ^ self.uf.fp[roots[i] as usize]);
                let root0 = self.uf.find(0);
                let canon_fp = if (0..r).any(|i| in_a(i) && roots[i] == root0) {
                    fp_a
                } else {
                    self.uf.all_fp ^ fp_a
                };
                match self.collected.entry(canon_fp) {
                    std::collections::hash_map::Entry::Occupied(mut e) => {
                        if value < e.get().0 {
                            e.get_mut().0 = value;
                        }
                    }
                    std::collections::hash_map::Entry::Vacant(slot) => {
                        let a_roots: std::collections::HashSet<u32> =
                            (0..r).filter(|&i| in_a(i)).map(|i| roots[i]).collect();
                        let side = VertexSet::from_members(
                            self.n,
                            (0..self.n).filter(|&v| a_roots.contains(&self.uf.find(v as u32))),
                        );
                        if side.is_proper_nonempty() {
                            slot.insert((value, side.canonical()));
                        }
                    }
                }
            }
        }
    }

    /// `levels[depth]` holds this node's compacted edges (written by the
    /// caller under the entry union-find state). Both children receive the
    /// identical post-contraction compaction in `levels[depth+1]`, so each
    /// node compacts exactly once.
    fn recurse(&mut self, depth: usize, seed: u64) {
        let n_live = self.uf.live_count();
        if n_live <= self.base {
            let edges = std::mem::take(&mut self.levels[depth]);
            self.leaf(&edges);
            self.levels[depth] = edges;
            return;
        }
        if self.levels[depth].is_empty() {
            return;
        }
        let mut target = ((n_live as f64 / self.reduction).ceil() as usize + 1).min(n_live - 1);
        if target < 2 {
            target = 2;
        }
        let uf_mark = self.uf.mark();
        let sketch_mark = self.sketch_undo.len();
        // Weight-proportional edge draws by prefix-sum + binary search.
        // Draws landing on edges whose endpoints already merged are rejected;
        // once rejections dominate, a working copy is recompacted so the
        // self-loop mass disappears and progress is guaranteed on connected
        // graphs.
        let edges = std::mem::take(&mut self.levels[depth]);
        {
            let mut prefix = std::mem::take(&mut self.prefix_scratch);
            prefix.clear();
            let mut acc = 0.0;
            for &(_, _, w) in &edges {
                acc += w;
                prefix.push(acc);
            }
            let mut rng = NanoRng::new(seed);
            let mut rejections = 0usize;
            let mut work: Option<Vec<(u32, u32, f64)>> = None;
            loop {
                if self.uf.live_count() <= target {
                    break;
                }
                let list: &[(u32, u32, f64)] = work.as_deref().unwrap_or(&edges);
                if list.is_empty() {
                    break;
                }
                let t = rng.next_f64(acc);
                let idx = prefix.partition_point(|&p| p <= t).min(list.len() - 1);
                let (u, v, _) = list[idx];
                let (ru, rv) = (self.uf.find(u), self.uf.find(v));
                if ru == rv {
                    rejections += 1;
                    if rejections > list.len() / 2 + 32 {
                        let fresh = compact(&self.uf, list);
                        prefix.clear();
                        acc = 0.0;
                        for &(_, _, w) in &fresh {
                            acc += w;
                            prefix.push(acc);
                        }
                        work = Some(fresh);
                        rejections = 0;
                    }
                    continue;
                }
                self.contract_roots(ru, rv);
            }
            self.prefix_scratch = prefix;
        }
        // Compact once for both children.
        if self.levels.len() <= depth + 1 {
            self.levels.push(Vec::new());
        }
        let mut child = std::mem::take(&mut self.levels[depth + 1]);
        compact_into(&self.uf, &edges, &mut child);
        self.levels[depth + 1] = child;
        self.levels[depth] = edges;
        let s1 = splitmix64(seed ^ 0x1111_1111);
        let s2 = splitmix64(seed ^ 0x2222_2222);
        self.recurse(depth + 1, s1);
        self.recurse(depth + 1, s2);
        self.rollback(uf_mark, sketch_mark);
    }
}

/// Runs `reps` independent contraction trees and returns the deduplicated
/// family filtered to `value <= alpha * min_value`.
///
/// With `sketches` attached, leaf values are the median sketched estimates
/// and the column-negation residual is tracked; otherwise leaf values are
/// exact multigraph boundary weights.
pub fn enumerate_approx_min_cuts(
    g: &WeightedGraph<f64>,
    alpha: f64,
    reps: usize,
    seed: u64,
    sketches: Option<&[JlIncidenceSketch<f64>]>,
    ) -> CutFamily {
    assert!(alpha >= 1.0, "alpha must be at least 1");
    assert!((1.0..=3.5).contains(&alpha), "leaf enumeration supports base <= 16 supernodes");
    assert!(g.n() >= 2);
    let base = 2 * (2.0 * alpha).ceil() as usize;
    let reduction = 2f64.powf(1.0 / (2.0 * alpha));
    let base_edges: Vec<(u32, u32, f64)> = g.edges().iter().map(|e| (e.u, e.v, e.w)).collect();

    let per_tree: Vec<(std::collections::HashMap<u64, (f64, VertexSet)>, f64)> = (0..reps)
        .into_par_iter()
        .map(|rep| {
            let mut ctx = TreeCtx {
                n: g.n(),
                alpha,
                base,
                reduction,
                uf: RollbackUf::new(g.n()),
                sketches: sketches.map(|s| s.to_vec()).unwrap_or_default(),
                sketch_undo: Vec::new(),
                collected: std::collections::HashMap::new(),
                running_min: f64::INFINITY,
                max_resid: 0.0,
                levels: vec![compact_base(&base_edges)],
                prefix_scratch: Vec::new(),
                _marker: std::marker::PhantomData,
            };
            ctx.recurse(0, splitmix64(seed ^ (rep as u64).wrapping_mul(0x517c_c1b7)));
            (ctx.collected, ctx.max_resid)
        })
        .collect();

    let mut family = CutFamily::new(g.n(), alpha);
    for (collected, resid) in per_tree {
        family.max_negation_residual = family.max_negation_residual.max(resid);
        for (_, (value, side)) in collected {
            family.insert(&side, value);
        }
    }
    family.retain_within_alpha();
    family
}
