//! Exact minimum cut of simple unweighted graphs from one random-order pass.
//!
//! Phase 1 grows a high-accuracy for-all sparsifier of the stream prefix,
//! checkpointing at powers of two, and freezes once the prefix min cut
//! clears `c_thresh * log2(n)`. Phase 2 enumerates the non-singleton
//! candidate family of the frozen prefix once and counts each suffix edge
//! against it; exact degree counters cover singleton cuts throughout.
//! Crossing edges are recovered from the oversampled prefix store, the
//! suffix store T, and per-vertex suffix adjacency kept for degree-light
//! vertices.

use crate::bitset::VertexSet;
use crate::config::Config;
use crate::graph::{Edge, WeightedGraph};
use crate::hashing::splitmix64;
use crate::meter::WORDS_PER_EDGE;
use crate::mincut::enumerate_approx_min_cuts;
use crate::oracle::stoer_wagner_min_cut;
use crate::stream::{EdgeStream, Reducer, StreamEngine};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RandomOrderError {
    #[error("input is not simple: {0}")]
    NotSimple(String),
    #[error("rounding unsound: sparsified cut value {value} at nominal accuracy {eps} cannot be rounded")]
    RoundingUnsound { value: f64, eps: f64 },
}

/// One reported minimum cut with its crossing edges.
#[derive(Clone, Debug, Serialize)]
pub struct MinCutReport {
    pub side: Vec<usize>,
    pub crossing_edges: Vec<(u32, u32)>,
}

#[derive(Clone, Debug)]
pub struct RandomOrderResult {
    pub value: u64,
    pub cuts: Vec<(VertexSet, Vec<(u32, u32)>)>,
    pub t_size: usize,
    pub space_words_peak: usize,
    pub froze_at: Option<u64>,
    /// Set when a reported singleton's suffix adjacency had been pruned.
    pub singleton_edges_partial: bool,
}

impl RandomOrderResult {
    pub fn to_json(&self) -> serde_json::Value {
        #[derive(Serialize)]
        struct Out {
            value: u64,
            cuts: Vec<MinCutReport>,
            t_size: usize,
            space_words_peak: usize,
            froze_at: Option<u64>,
            singleton_edges_partial: bool,
        }
        serde_json::to_value(Out {
            value: self.value,
            cuts: self
                .cuts
                .iter()
                .map(|(side, edges)| MinCutReport { side: side.iter().collect(), crossing_edges: edges.clone() })
                .collect(),
            t_size: self.t_size,
            space_words_peak: self.space_words_peak,
            froze_at: self.froze_at,
            singleton_edges_partial: self.singleton_edges_partial,
        })
        .unwrap()
    }
}

fn validate_simple(stream: &EdgeStream, edges: &[Edge<f64>]) -> Result<(), RandomOrderError> {
    let mut seen = std::collections::HashSet::with_capacity(edges.len());
    for e in edges {
        if e.w != 1.0 {
            return Err(RandomOrderError::NotSimple(format!("edge ({},{}) has weight {}", e.u, e.v, e.w)));
        }
        if e.u == e.v || e.u as usize >= stream.n() || e.v as usize >= stream.n() {
            return Err(RandomOrderError::NotSimple(format!("bad endpoints ({},{})", e.u, e.v)));
        }
        if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
            return Err(RandomOrderError::NotSimple(format!("duplicate pair ({},{})", e.u, e.v)));
        }
    }
    Ok(())
}

/// An H1 whose edges all kept unit weight is bit-exact (nothing was sampled
/// away or reweighted), so its cut values are exact integers.
fn is_exact_prefix(h: &WeightedGraph<f64>, prefix_len: u64) -> bool {
    h.m() as u64 == prefix_len && h.edges().iter().all(|e| e.w == 1.0)
}

fn rounded_value(v: f64, exact: bool, eps1: f64) -> Result<u64, RandomOrderError> {
    let r = v.round();
    if !exact && eps1 * v >= 0.5 - 1e-12 {
        return Err(RandomOrderError::RoundingUnsound { value: v, eps: eps1 });
    }
    if !exact && (v - r).abs() >= 0.5 - 1e-9 {
        return Err(RandomOrderError::RoundingUnsound { value: v, eps: eps1 });
    }
    Ok(r as u64)
}

pub fn exact_min_cut_random_order(
    stream: EdgeStream,
    seed: u64,
    cfg: &Config,
) -> Result<RandomOrderResult, RandomOrderError> {
    let n = stream.n();
    assert!(n >= 2);
    let log2n = (n.max(2) as f64).log2();
    let eps1 = (1.0 / (log2n * log2n)).min(0.5);
    let threshold = cfg.c_thresh * log2n;

    {
        // Up-front simplicity validation; the engine then consumes the
        // counted forward-only iterator as usual.
        let probe = stream.clone();
        let edges: Vec<Edge<f64>> = probe.into_iter_counted().collect();
        validate_simple(&stream, &edges)?;
    }

    let mut engine = StreamEngine::new(n, eps1, Reducer::ForAll, splitmix64(seed ^ 0x0a1b), cfg.oversample_mult, cfg)
        .with_raw_store();
    let mut degrees = vec![0u64; n];
    let mut extra_words = 0usize; // phase-2 state outside the engine meter
    let mut extra_peak = 0usize;

    // Phase-2 state, populated at freeze time.
    let mut frozen: Option<FrozenState> = None;
    let mut arrival: u64 = 0;

    struct FrozenState {
        froze_at: u64,
        family: Vec<(VertexSet, f64, u64)>, // side, prefix value in H1, suffix count
        t_store: Vec<(u32, u32)>,
        singleton_store: Vec<Option<Vec<(u32, u32)>>>,
        exact_prefix: bool,
    }

    for e in stream.into_iter_counted() {
        arrival += 1;
        degrees[e.u as usize] += 1;
        degrees[e.v as usize] += 1;
        if let Some(fs) = frozen.as_mut() {
            // Suffix phase: membership-test against the family, word-parallel
            // over canonical bitsets; never touches stored stream history.
            let (u, v) = (e.u as usize, e.v as usize);
            let mut crosses_any = false;
            for (side, _, count) in fs.family.iter_mut() {
                if side.contains(u) != side.contains(v) {
                    *count += 1;
                    crosses_any = true;
                }
            }
            if crosses_any {
                fs.t_store.push((e.u, e.v));
                extra_words += WORDS_PER_EDGE;
                extra_peak = extra_peak.max(extra_words);
            }
            // Per-vertex suffix adjacency for potential singleton minima.
            let min_deg = *degrees.iter().min().unwrap();
            for (a, b) in [(u, v), (v, u)] {
                let keep = degrees[a]
                    <= (cfg.singleton_prune_factor * min_deg as f64) as u64 + cfg.singleton_prune_slack as u64;
                if let Some(store) = fs.singleton_store[a].as_mut() {
                    if keep {
                        store.push((a as u32, b as u32));
                        extra_words += WORDS_PER_EDGE;
                        extra_peak = extra_peak.max(extra_words);
                    } else {
                        extra_words = extra_words.saturating_sub(store.len() * WORDS_PER_EDGE);
                        fs.singleton_store[a] = None;
                    }
                }
            }
            continue;
        }

        engine.push(e);
        if arrival.is_power_of_two() {
            // Cheap gate first: the prefix min cut is at most its min degree.
            let sp = engine.current_sparsifier();
            if sp.graph.m() == 0 || !sp.graph.is_connected() {
                continue;
            }
            let min_deg = (0..n)
                .map(|v| sp.graph.weighted_degree(v))
                .fold(f64::INFINITY, f64::min);
            if min_deg <= threshold {
                continue;
            }
            let (mc, _) = stoer_wagner_min_cut(&sp.graph);
            if mc > threshold {
                // Freeze: enumerate the non-singleton candidate family once.
                let exact_prefix = is_exact_prefix(&sp.graph, arrival);
                let reps = cfg.phase2_reps_for(n);
                let fam = enumerate_approx_min_cuts(
                    &sp.graph,
                    cfg.phase2_radius,
                    reps,
                    splitmix64(seed ^ 0xfa)
                    ,
                    None,
                );
                let family: Vec<(VertexSet, f64, u64)> = fam
                    .iter()
                    .filter(|(side, _)| {
                        let c = side.count();
                        c >= 2 && c <= n - 2
                    })
                    .map(|(side, v)| (side.canonical(), v, 0u64))
                    .collect();
                extra_words += family.iter().map(|(s, _, _)| s.word_count() + 2).sum::<usize>();
                extra_peak = extra_peak.max(extra_words);
                frozen = Some(FrozenState {
                    froze_at: arrival,
                    family,
                    t_store: Vec::new(),
                    singleton_store: (0..n).map(|_| Some(Vec::new())).collect(),
                    exact_prefix,
                });
            }
        }
    }

    let total_arrivals = arrival;
    debug_assert_eq!(
        degrees.iter().sum::<u64>(),
        2 * total_arrivals,
        "degree table must count every endpoint exactly once"
    );

    let raw_kept: Vec<(u64, Edge<f64>)> = engine.raw_kept().to_vec();
    let prefix_crossing = |side: &VertexSet| -> Vec<(u32, u32)> {
        raw_kept
            .iter()
            .filter(|(_, e)| side.contains(e.u as usize) != side.contains(e.v as usize))
            .map(|(_, e)| (e.u.min(e.v), e.u.max(e.v)))
            .collect()
    };

    if let Some(fs) = frozen {
        let min_deg_pair = degrees
            .iter()
            .enumerate()
            .min_by_key(|&(v, &d)| (d, v))
            .map(|(v, &d)| (v, d))
            .unwrap();
        let mut best: u64 = min_deg_pair.1;
        let mut family_values: Vec<(VertexSet, u64)> = Vec::new();
        for (side, prefix_v, suffix) in &fs.family {
            let v_s = rounded_value(*prefix_v, fs.exact_prefix, eps1)? + suffix;
            family_values.push((side.clone(), v_s));
            best = best.min(v_s);
        }
        let mut cuts: Vec<(VertexSet, Vec<(u32, u32)>)> = Vec::new();
        let mut partial = false;
        let mut seen = std::collections::HashSet::new();
        for (side, v_s) in &family_values {
            if *v_s == best && seen.insert(side.canonical()) {
                let mut edges = prefix_crossing(side);
                edges.extend(
                    fs.t_store
                        .iter()
                        .filter(|(u, v)| side.contains(*u as usize) != side.contains(*v as usize))
                        .map(|&(u, v)| (u.min(v), u.max(v))),
                );
                edges.sort_unstable();
                edges.dedup();
                cuts.push((side.canonical(), edges));
            }
        }
        for (v, &d) in degrees.iter().enumerate() {
            if d == best {
                let side = VertexSet::singleton(n, v);
                if !seen.insert(side.canonical()) {
                    continue;
                }
                let mut edges = prefix_crossing(&side);
                match &fs.singleton_store[v] {
                    Some(store) => edges.extend(store.iter().map(|&(a, b)| (a.min(b), a.max(b)))),
                    None => partial = true,
                }
                edges.sort_unstable();
                edges.dedup();
                cuts.push((side, edges));
            }
        }
        let engine_out = engine.finish();
        return Ok(RandomOrderResult {
            value: best,
            cuts,
            t_size: fs.t_store.len(),
            space_words_peak: engine_out.meter.peak_words() + extra_peak,
            froze_at: Some(fs.froze_at),
            singleton_edges_partial: partial,
        });
    }

    // Unfrozen path: the sparsifier covers the whole stream.
    let out = engine.finish();
    let h1 = &out.sparsifier.graph;
    if h1.m() == 0 || !h1.is_connected() {
        // Minimum cut 0; report one separating component.
        let side = if h1.m() == 0 {
            VertexSet::singleton(n, 0)
        } else {
            VertexSet::from_members(n, h1.components()[0].iter().copied())
        };
        return Ok(RandomOrderResult {
            value: 0,
            cuts: vec![(side.canonical(), Vec::new())],
            t_size: 0,
            space_words_peak: out.meter.peak_words() + extra_peak,
            froze_at: None,
            singleton_edges_partial: false,
        });
    }
    let exact = is_exact_prefix(h1, total_arrivals);
    let reps = cfg.phase2_reps_for(n);
    let fam = enumerate_approx_min_cuts(h1, 1.0, reps, splitmix64(seed ^ 0xfb), None);
    let mut best = u64::MAX;
    for (_, v) in fam.iter() {
        best = best.min(rounded_value(v, exact, eps1)?);
    }
    for &d in &degrees {
        best = best.min(d);
    }
    let mut cuts: Vec<(VertexSet, Vec<(u32, u32)>)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for (side, v) in fam.iter() {
        if rounded_value(v, exact, eps1)? == best && seen.insert(side.canonical()) {
            let mut edges = prefix_crossing(side);
            edges.sort_unstable();
            edges.dedup();
            cuts.push((side.canonical(), edges));
        }
    }
    for (v, &d) in degrees.iter().enumerate() {
        if d == best {
            let side = VertexSet::singleton(n, v);
            if seen.insert(side.canonical()) {
                let mut edges = prefix_crossing(&side);
                edges.sort_unstable();
                edges.dedup();
                cuts.push((side.canonical(), edges));
            }
        }
    }
    Ok(RandomOrderResult {
        value: best,
        cuts,
        t_size: 0,
        space_words_peak: out.meter.peak_words() + extra_peak,
        froze_at: None,
        singleton_edges_partial: false,
    })
}

/// Empirical deviation table for prefix-sampling concentration.
#[derive(Clone, Debug, Serialize)]
pub struct ProbeRow {
    pub ell_nominal: f64,
    pub ell_realized: f64,
    pub prefix_len: usize,
    pub trials: u64,
    pub failure_rate: f64,
}

/// For each target expected crossing count `ell`, draws random prefixes of
/// size `m * ell / w(S)` (clamped to the stream) across the given cuts and
/// reports the fraction of trials deviating from the realized expectation by
/// more than 10%.
pub fn prefix_concentration_probe(
    g: &WeightedGraph<f64>,
    cuts: &[VertexSet],
    ells: &[f64],
    trials: u64,
    seed: u64,
) -> Vec<ProbeRow> {
    assert!(!cuts.is_empty());
    let m = g.m();
    let crossing_masks: Vec<Vec<bool>> = cuts
        .iter()
        .map(|side| {
            g.edges()
                .iter()
                .map(|e| side.contains(e.u as usize) != side.contains(e.v as usize))
                .collect()
        })
        .collect();
    let cut_weights: Vec<f64> = cuts.iter().map(|side| g.cut_value(side).unwrap()).collect();
    let mut rows = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut indices: Vec<usize> = (0..m).collect();
    for &ell in ells {
        let mut failures = 0u64;
        let mut total = 0u64;
        let mut realized_sum = 0.0;
        let mut prefix_len_last = 0;
        let per_cut = (trials / cuts.len() as u64).max(1);
        for (ci, mask) in crossing_masks.iter().enumerate() {
            let w = cut_weights[ci];
            let h = ((m as f64 * ell / w).round() as usize).clamp(1, m);
            let ell_real = h as f64 * w / m as f64;
            realized_sum += ell_real;
            prefix_len_last = h;
            for _ in 0..per_cut {
                // Partial Fisher-Yates: the first h entries are a uniform
                // h-subset, i.e. a random-order prefix.
                for i in 0..h {
                    let j = rng.gen_range(i..m);
                    indices.swap(i, j);
                }
                let x = indices[..h].iter().filter(|&&i| mask[i]).count() as f64;
                if (x - ell_real).abs() > 0.1 * ell_real {
                    failures += 1;
                }
                total += 1;
            }
        }
        rows.push(ProbeRow {
            ell_nominal: ell,
            ell_realized: realized_sum / cuts.len() as f64,
            prefix_len: prefix_len_last,
            trials: total,
            failure_rate: failures as f64 / total as f64,
        });
    }
    rows
}

/// Closed-form check for a single-edge cut: the probability the edge misses
/// a prefix of length h is (m-h)/m.
pub fn single_edge_miss_probability(m: usize, h: usize) -> f64 {
    (m - h) as f64 / m as f64
}
