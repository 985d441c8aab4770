//! Mergeable JL sketch of weighted incidence columns.
//!
//! Absorbing edge `e = (u,v,w)` draws a column `t_e` of k Rademacher entries
//! (+-1/sqrt(k)), derived deterministically from `(seed, edge id)` by a
//! counter-based hash, and adds `sqrt(w) t_e` to column u and subtracts it
//! from column v. The projection matrix is never stored. Contracting a vertex
//! pair merges the two columns by summation; once two live columns remain,
//! the squared norm of either is the sketched cut value.

use crate::hashing::accumulate_signed;
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SketchError {
    #[error("column {0} is retired")]
    RetiredColumn(usize),
    #[error("cut estimate requires exactly 2 live columns, have {0}")]
    LiveCountNot2(usize),
    #[error("column index {idx} out of range 0..{n}")]
    ColumnOutOfRange { idx: usize, n: usize },
}

/// k x n sketched incidence accumulator with mergeable columns.
#[derive(Clone, Debug)]
pub struct JlIncidenceSketch<S> {
    k: usize,
    n: usize,
    seed: u64,
    /// Column-major k-vectors, one per original vertex slot.
    cols: Vec<S>,
    live: Vec<bool>,
    live_count: usize,
    edge_counter: u64,
}

impl<S: Scalar> JlIncidenceSketch<S> {
    /// `k = ceil(c_jl * ln(n_logical) / eps^2)` rows, per the config.
    pub fn new(n: usize, eps: f64, seed: u64, cfg: &crate::config::Config) -> Self {
        Self::with_rows(n, cfg.jl_rows(n, eps), seed)
    }

    pub fn with_rows(n: usize, k: usize, seed: u64) -> Self {
        let k = k.max(1);
        JlIncidenceSketch {
            k,
            n,
            seed,
            cols: vec![S::zero(); k * n],
            live: vec![true; n],
            live_count: n,
            edge_counter: 0,
        }
    }

    pub fn rows(&self) -> usize {
        self.k
    }

    pub fn columns(&self) -> usize {
        self.n
    }

    pub fn live_count(&self) -> usize {
        self.live_count
    }

    pub fn is_live(&self, col: usize) -> bool {
        self.live[col]
    }

    pub fn edges_absorbed(&self) -> u64 {
        self.edge_counter
    }

    pub fn column(&self, col: usize) -> &[S] {
        &self.cols[col * self.k..(col + 1) * self.k]
    }

    /// Adds `sqrt(w) t_e` into column u and `-sqrt(w) t_e` into column v,
    /// where `t_e` is keyed by `(seed, edge_id)`. Absorbing the same edge id
    /// twice reuses the same `t_e`.
    pub fn absorb_edge(&mut self, edge_id: u64, u: usize, v: usize, w: S) -> Result<(), SketchError> {
        if u >= self.n || v >= self.n {
            return Err(SketchError::ColumnOutOfRange { idx: u.max(v), n: self.n });
        }
        let scale = w.sqrt() / S::from_f64_lossy(self.k as f64).sqrt();
        let (k, seed) = (self.k, self.seed);
        accumulate_signed(&mut self.cols[u * k..(u + 1) * k], seed, edge_id, scale, false);
        accumulate_signed(&mut self.cols[v * k..(v + 1) * k], seed, edge_id, scale, true);
        self.edge_counter += 1;
        Ok(())
    }

    /// Column a becomes the columnwise sum; column b is retired.
    pub fn merge_columns(&mut self, a: usize, b: usize) -> Result<(), SketchError> {
        if a >= self.n || b >= self.n {
            return Err(SketchError::ColumnOutOfRange { idx: a.max(b), n: self.n });
        }
        if !self.live[a] {
            return Err(SketchError::RetiredColumn(a));
        }
        if !self.live[b] || a == b {
            return Err(SketchError::RetiredColumn(b));
        }
        let (k,) = (self.k,);
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let (head, tail) = self.cols.split_at_mut(hi * k);
        let lo_slice = &mut head[lo * k..(lo + 1) * k];
        let hi_slice = &mut tail[..k];
        if a < b {
            for i in 0..k {
                lo_slice[i] = lo_slice[i] + hi_slice[i];
            }
        } else {
            for i in 0..k {
                hi_slice[i] = hi_slice[i] + lo_slice[i];
            }
        }
        self.live[b] = false;
        self.live_count -= 1;
        Ok(())
    }

    /// Undoes a merge recorded by the caller (used by the contraction tree's
    /// depth-first undo log): restores column b and subtracts it from a.
    pub fn unmerge_columns(&mut self, a: usize, b: usize, saved_b: &[S]) {
        debug_assert_eq!(saved_b.len(), self.k);
        let k = self.k;
        for i in 0..k {
            self.cols[a * k + i] = self.cols[a * k + i] - saved_b[i];
            self.cols[b * k + i] = saved_b[i];
        }
        self.live[b] = true;
        self.live_count += 1;
    }

    /// Squared norm of one of the two surviving columns; the sketched value
    /// of the bipartition realized by the merge history. O(k).
    pub fn cut_estimate(&self) -> Result<S, SketchError> {
        if self.live_count != 2 {
            return Err(SketchError::LiveCountNot2(self.live_count));
        }
        let first = self.live.iter().position(|&l| l).unwrap();
        Ok(self.norm_sq(first))
    }

    /// `||col_a + col_b||` over `max(||col_a||, epsilon)`: the column-negation
    /// diagnostic. Rows sum to zero, so live columns sum to the zero vector.
    pub fn negation_residual(&self) -> Result<f64, SketchError> {
        if self.live_count != 2 {
            return Err(SketchError::LiveCountNot2(self.live_count));
        }
        let mut it = (0..self.n).filter(|&c| self.live[c]);
        let a = it.next().unwrap();
        let b = it.next().unwrap();
        let mut sum_sq = S::zero();
        for i in 0..self.k {
            let s = self.cols[a * self.k + i] + self.cols[b * self.k + i];
            sum_sq = sum_sq + s * s;
        }
        let denom = self.norm_sq(a).sqrt().to_f64_lossy().max(1e-12);
        Ok(sum_sq.sqrt().to_f64_lossy() / denom)
    }

    /// Squared norm of the sum of a set of live columns: the sketched value
    /// of an arbitrary bipartition of the live columns.
    pub fn side_estimate<I: IntoIterator<Item = usize>>(&self, side: I) -> S {
        let mut acc = vec![S::zero(); self.k];
        for c in side {
            debug_assert!(self.live[c], "side must consist of live columns");
            for i in 0..self.k {
                acc[i] = acc[i] + self.cols[c * self.k + i];
            }
        }
        acc.iter().fold(S::zero(), |s, &x| s + x * x)
    }

    fn norm_sq(&self, col: usize) -> S {
        self.column(col).iter().fold(S::zero(), |s, &x| s + x * x)
    }

    /// Words of state (space accounting): the accumulator plus liveness.
    pub fn words(&self) -> usize {
        self.cols.len() + self.live.len() / 64 + 3
    }
}

/// Applies a seeded Rademacher JL projection to a fixed dense vector;
/// test helper for the norm-preservation property.
pub fn project_dense<S: Scalar>(x: &[S], k: usize, seed: u64) -> Vec<S> {
    let inv_sqrt_k = S::one() / S::from_f64_lossy(k as f64).sqrt();
    let mut out = vec![S::zero(); k];
    let mut contrib = vec![S::zero(); k];
    for (j, &xj) in x.iter().enumerate() {
        if xj == S::zero() {
            continue;
        }
        contrib.fill(S::zero());
        accumulate_signed(&mut contrib, seed, j as u64, xj * inv_sqrt_k, false);
        for i in 0..k {
            out[i] = out[i] + contrib[i];
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::gen;

    fn col_vec(sk: &JlIncidenceSketch<f64>, c: usize) -> Vec<f64> {
        sk.column(c).to_vec()
    }

    #[test]
    fn single_edge_columns_are_negatives() {
        let mut sk = JlIncidenceSketch::<f64>::with_rows(4, 16, 7);
        sk.absorb_edge(0, 0, 1, 1.0).unwrap();
        let c0 = col_vec(&sk, 0);
        let c1 = col_vec(&sk, 1);
        for i in 0..16 {
            assert_eq!(c0[i], -c1[i]);
            assert!((c0[i].abs() - 0.25).abs() < 1e-12, "entries are +-1/sqrt(k)");
        }
        assert!(col_vec(&sk, 2).iter().all(|&x| x == 0.0));
    }

    #[test]
    fn repeated_edge_id_reuses_the_column() {
        let mut sk = JlIncidenceSketch::<f64>::with_rows(3, 32, 11);
        sk.absorb_edge(5, 0, 1, 1.0).unwrap();
        let once = col_vec(&sk, 0);
        sk.absorb_edge(5, 0, 1, 1.0).unwrap();
        let twice = col_vec(&sk, 0);
        for i in 0..32 {
            assert!((twice[i] - 2.0 * once[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn k4_singleton_cut_monte_carlo() {
        // k = 64 ln 4 / eps^2 at eps = 0.5; the sketched degree of v0 in K4
        // must land in 3(1 +/- 0.5) for at least 2/3 of seeds.
        let eps = 0.5;
        let k = ((64.0 * 4.0_f64.ln()) / (eps * eps)).ceil() as usize;
        let g = gen::complete(4);
        let mut hits = 0;
        let trials = 1000;
        for seed in 0..trials {
            let mut sk = JlIncidenceSketch::<f64>::with_rows(4, k, seed);
            for (id, e) in g.edges().iter().enumerate() {
                sk.absorb_edge(id as u64, e.u as usize, e.v as usize, e.w).unwrap();
            }
            let est: f64 = sk.column(0).iter().map(|x| x * x).sum();
            if est >= 3.0 * (1.0 - eps) && est <= 3.0 * (1.0 + eps) {
                hits += 1;
            }
        }
        assert!(hits * 3 >= trials * 2, "only {hits}/{trials} within (1 +/- eps)");
    }

    #[test]
    fn merge_after_single_edge_gives_zero_column() {
        let mut sk = JlIncidenceSketch::<f64>::with_rows(2, 24, 3);
        sk.absorb_edge(0, 0, 1, 1.0).unwrap();
        sk.merge_columns(0, 1).unwrap();
        assert!(col_vec(&sk, 0).iter().all(|&x| x.abs() < 1e-12));
        assert_eq!(sk.live_count(), 1);
    }

    #[test]
    fn k3_contracted_to_two_columns_are_exact_negatives() {
        let g = gen::complete(3);
        let mut sk = JlIncidenceSketch::<f64>::with_rows(3, 20, 9);
        for (id, e) in g.edges().iter().enumerate() {
            sk.absorb_edge(id as u64, e.u as usize, e.v as usize, e.w).unwrap();
        }
        sk.merge_columns(0, 1).unwrap();
        let c0 = col_vec(&sk, 0);
        let c2 = col_vec(&sk, 2);
        for i in 0..20 {
            assert!((c0[i] + c2[i]).abs() < 1e-12);
        }
        assert!(sk.negation_residual().unwrap() < 1e-9);
    }

    #[test]
    fn random_contraction_tracks_cut_value() {
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let cfg = Config::default();
        let eps = 0.5;
        let n = 12;
        let g = gen::gnp(n, 0.5, 42);
        let mut hits = 0;
        let trials = 400;
        for seed in 0..trials {
            let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let mut sk = JlIncidenceSketch::<f64>::new(n, eps, seed, &cfg);
            for (id, e) in g.edges().iter().enumerate() {
                sk.absorb_edge(id as u64, e.u as usize, e.v as usize, e.w).unwrap();
            }
            // Random contraction sequence down to 2 supernodes, tracking
            // which root each vertex belongs to.
            let mut root_of: Vec<usize> = (0..n).collect();
            let mut roots: Vec<usize> = (0..n).collect();
            while roots.len() > 2 {
                let bi = rng.gen_range(1..roots.len());
                let b = roots.swap_remove(bi);
                let a = roots[rng.gen_range(0..roots.len())];
                sk.merge_columns(a, b).unwrap();
                for r in root_of.iter_mut() {
                    if *r == b {
                        *r = a;
                    }
                }
            }
            let side = crate::bitset::VertexSet::from_members(
                n,
                (0..n).filter(|&v| root_of[v] == roots[0]),
            );
            if !side.is_proper_nonempty() {
                continue;
            }
            let exact = g.cut_value(&side).unwrap();
            let est = sk.cut_estimate().unwrap();
            assert!(sk.negation_residual().unwrap() < 1e-6);
            if exact == 0.0 {
                if est.abs() < 1e-9 {
                    hits += 1;
                }
            } else if est >= (1.0 - eps) * exact && est <= (1.0 + eps) * exact {
                hits += 1;
            }
        }
        assert!(hits * 3 >= trials * 2, "{hits}/{trials}");
    }

    #[test]
    fn cut_estimate_contract_violations() {
        let mut sk = JlIncidenceSketch::<f64>::with_rows(3, 8, 0);
        assert!(matches!(sk.cut_estimate(), Err(SketchError::LiveCountNot2(3))));
        sk.merge_columns(0, 1).unwrap();
        assert!(matches!(sk.merge_columns(2, 1), Err(SketchError::RetiredColumn(1))));
        // Two live columns over an empty edge set: estimate 0.
        assert_eq!(sk.cut_estimate().unwrap(), 0.0);
    }

    #[test]
    fn path3_contracted_estimates_unit_cut() {
        let g = gen::path(3);
        let eps = 0.5;
        let k = ((64.0 * 3.0_f64.ln()) / (eps * eps)).ceil() as usize;
        let mut hits = 0;
        let trials = 500;
        for seed in 0..trials {
            let mut sk = JlIncidenceSketch::<f64>::with_rows(3, k, seed);
            for (id, e) in g.edges().iter().enumerate() {
                sk.absorb_edge(id as u64, e.u as usize, e.v as usize, e.w).unwrap();
            }
            sk.merge_columns(0, 1).unwrap();
            let est = sk.cut_estimate().unwrap();
            if est >= 1.0 - eps && est <= 1.0 + eps {
                hits += 1;
            }
        }
        assert!(hits * 3 >= trials * 2);
    }

    #[test]
    fn jl_norm_preservation_rate() {
        // k = ceil(8 ln(2/delta) / eps^2) with eps=0.5, delta=1/3; empirical
        // failure rate over 1e4 seeded projections of a fixed vector must stay
        // within delta + 2%.
        use rand::prelude::*;
        use rand_chacha::ChaCha8Rng;
        let (eps, delta): (f64, f64) = (0.5, 1.0 / 3.0);
        let k = ((8.0 * (2.0 / delta).ln()) / (eps * eps)).ceil() as usize;
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let x: Vec<f64> = (0..40).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let norm_sq: f64 = x.iter().map(|v| v * v).sum();
        let trials = 10_000;
        let mut failures = 0;
        for seed in 0..trials {
            let y = project_dense(&x, k, seed);
            let got: f64 = y.iter().map(|v| v * v).sum();
            if got < (1.0 - eps) * norm_sq || got > (1.0 + eps) * norm_sq {
                failures += 1;
            }
        }
        let rate = failures as f64 / trials as f64;
        assert!(rate <= delta + 0.02, "failure rate {rate}");
    }

    #[test]
    fn generic_over_f32() {
        let mut sk = JlIncidenceSketch::<f32>::with_rows(2, 64, 1);
        sk.absorb_edge(0, 0, 1, 1.0f32).unwrap();
        let est: f32 = sk.column(0).iter().map(|x| x * x).sum();
        assert!((est - 1.0).abs() < 1e-4);
    }
}
