//! Effective-resistance estimation backends: exact dense solves on small
//! graphs, JL-compressed incidence plus Laplacian solves above the cutoff.
//!
//! The sketch backend stacks `Z = Q W^(1/2) B L+` (k rows), after which any
//! pair resistance is `||Z(:,u) - Z(:,v)||^2` in O(k); the same object backs
//! leverage-score sampling and the all-pairs effective-resistance sketch.

use crate::config::Config;
use crate::graph::WeightedGraph;
use crate::hashing::accumulate_signed;
use crate::sketch::solver::{LaplacianSolver, SolveError};
use rayon::prelude::*;

enum Backend {
    /// Per-component dense pseudoinverse resistances (exact).
    Dense { r: Vec<nalgebra::DMatrix<f64>> },
    /// k x n row-major Z matrix; zero columns outside each row's component.
    Sketch { z: Vec<f64>, k: usize },
}

/// Resistance oracle over a fixed graph, valid for any vertex pair within a
/// connected component (cross-component pairs report infinity).
pub struct ResistanceEstimator {
    n: usize,
    comp_of: Vec<u32>,
    /// Local index of each vertex inside its component (dense backend).
    local: Vec<u32>,
    backend: Backend,
}

impl ResistanceEstimator {
    /// Constant-accuracy estimator for sampling decisions (relaxed solver
    /// tolerance).
    pub fn build(h: &WeightedGraph<f64>, seed: u64, cfg: &Config) -> Result<Self, SolveError> {
        let m = h.m().max(2);
        let k = ((cfg.c_lev * (m as f64).ln()) / (cfg.delta_lev * cfg.delta_lev)).ceil() as usize;
        Self::build_inner(h, k, seed, cfg, h.n() <= cfg.dense_leverage_cutoff, cfg.lev_cg_tol)
    }

    /// Estimator with an explicit row count at full solver accuracy (the ER
    /// sketch path).
    pub fn build_with_rows(h: &WeightedGraph<f64>, k: usize, seed: u64, cfg: &Config) -> Result<Self, SolveError> {
        Self::build_inner(h, k, seed, cfg, false, cfg.cg_tol)
    }

    fn build_inner(h: &WeightedGraph<f64>, k: usize, seed: u64, cfg: &Config, dense: bool, tol: f64) -> Result<Self, SolveError> {
        let n = h.n();
        let comps = h.components();
        let mut comp_of = vec![0u32; n];
        let mut local = vec![0u32; n];
        for (ci, comp) in comps.iter().enumerate() {
            for (li, &v) in comp.iter().enumerate() {
                comp_of[v] = ci as u32;
                local[v] = li as u32;
            }
        }
        let subgraphs: Vec<WeightedGraph<f64>> = comps
            .iter()
            .map(|comp| {
                let mut edges = Vec::new();
                for e in h.edges() {
                    let (u, v) = (e.u as usize, e.v as usize);
                    if comp_of[u] as usize == comp_of[v] as usize && comps[comp_of[u] as usize][0] == comp[0] {
                        edges.push(crate::graph::Edge::new(local[u] as usize, local[v] as usize, e.w));
                    }
                }
                WeightedGraph::new_multi(comp.len(), edges).unwrap()
            })
            .collect();

        if dense {
            let mut mats = Vec::with_capacity(subgraphs.len());
            for sub in &subgraphs {
                if sub.n() == 1 {
                    mats.push(nalgebra::DMatrix::zeros(1, 1));
                } else {
                    let r = crate::oracle::dense_er_matrix(sub, usize::MAX)
                        .expect("component subgraph is connected");
                    mats.push(r);
                }
            }
            return Ok(ResistanceEstimator { n, comp_of, local, backend: Backend::Dense { r: mats } });
        }

        let k = k.max(1);
        let mut z = vec![0.0f64; k * n];
        for (ci, sub) in subgraphs.iter().enumerate() {
            if sub.n() <= 1 {
                continue;
            }
            // Y = Q W^(1/2) B over the component, one k-vector per local vertex.
            let nc = sub.n();
            let mut y = vec![0.0f64; k * nc];
            for (eid, e) in sub.edges().iter().enumerate() {
                let scale = e.w.sqrt() / (k as f64).sqrt();
                let (u, v) = (e.u as usize, e.v as usize);
                let key = (ci as u64) << 40 | eid as u64;
                accumulate_signed(&mut y[u * k..(u + 1) * k], seed, key, scale, false);
                accumulate_signed(&mut y[v * k..(v + 1) * k], seed, key, scale, true);
            }
            let solver = LaplacianSolver::with_params(sub, tol, cfg.cg_max_iters_mult * sub.n().max(8), 0.0);
            let rows: Result<Vec<Vec<f64>>, SolveError> = (0..k)
                .into_par_iter()
                .map(|row| {
                    let b: Vec<f64> = (0..nc).map(|v| y[v * k + row]).collect();
                    solver.solve(&b)
                })
                .collect();
            let rows = rows?;
            let comp_members: Vec<usize> = (0..n).filter(|&v| comp_of[v] as usize == ci).collect();
            for &v in &comp_members {
                let lv = local[v] as usize;
                for row in 0..k {
                    z[row * n + v] = rows[row][lv];
                }
            }
        }
        Ok(ResistanceEstimator { n, comp_of, local, backend: Backend::Sketch { z, k } })
    }

    pub fn same_component(&self, u: usize, v: usize) -> bool {
        self.comp_of[u] == self.comp_of[v]
    }

    /// Approximate (or exact, dense backend) effective resistance.
    pub fn resistance(&self, u: usize, v: usize) -> f64 {
        assert!(u < self.n && v < self.n && u != v);
        if !self.same_component(u, v) {
            return f64::INFINITY;
        }
        match &self.backend {
            Backend::Dense { r } => {
                let m = &r[self.comp_of[u] as usize];
                m[(self.local[u] as usize, self.local[v] as usize)]
            }
            Backend::Sketch { z, k } => {
                let mut acc = 0.0;
                for row in 0..*k {
                    let d = z[row * self.n + u] - z[row * self.n + v];
                    acc += d * d;
                }
                acc
            }
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.backend, Backend::Dense { .. })
    }
}

/// Approximate leverage scores `min(1, w_e * r_e)` of each edge of `g`,
/// measured on `g` itself.
pub fn approx_leverage_scores(g: &WeightedGraph<f64>, seed: u64, cfg: &Config) -> Result<Vec<f64>, SolveError> {
    let est = ResistanceEstimator::build(g, seed, cfg)?;
    Ok(g.edges()
        .iter()
        .map(|e| (e.w * est.resistance(e.u as usize, e.v as usize)).min(1.0).max(1e-12))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::oracle;

    #[test]
    fn dense_backend_is_exact() {
        let g = gen::connected_gnp(30, 0.3, 2);
        let cfg = Config::default();
        let est = ResistanceEstimator::build(&g, 0, &cfg).unwrap();
        assert!(est.is_exact());
        let oracle_r = oracle::dense_er_matrix(&g, 500).unwrap();
        for (u, v) in [(0usize, 1usize), (5, 20), (10, 29)] {
            assert!((est.resistance(u, v) - oracle_r[(u, v)]).abs() < 1e-8);
        }
    }

    #[test]
    fn sketch_backend_within_constant_accuracy() {
        let g = gen::connected_gnp(60, 0.2, 9);
        let cfg = Config::default();
        let est = ResistanceEstimator::build_with_rows(&g, 600, 5, &cfg).unwrap();
        let oracle_r = oracle::dense_er_matrix(&g, 500).unwrap();
        let mut ok = 0;
        let mut total = 0;
        for u in (0..60).step_by(7) {
            for v in (1..60).step_by(11) {
                if u == v {
                    continue;
                }
                total += 1;
                let got = est.resistance(u, v);
                let want = oracle_r[(u, v)];
                if (got - want).abs() <= 0.35 * want {
                    ok += 1;
                }
            }
        }
        assert!(ok * 10 >= total * 9, "{ok}/{total} within 35%");
    }

    #[test]
    fn leverage_scores_track_exact_values() {
        let g = gen::connected_gnp(40, 0.25, 4);
        let cfg = Config::default();
        let approx = approx_leverage_scores(&g, 3, &cfg).unwrap();
        let exact = oracle::exact_leverage_scores(&g, 500).unwrap();
        for (a, e) in approx.iter().zip(exact.iter()) {
            // Dense cutoff covers n=40, so these are exact up to the clamp.
            assert!((a - e.min(1.0)).abs() < 1e-8);
        }
    }

    #[test]
    fn disconnected_pairs_are_infinite() {
        let g = crate::graph::parse_graph_text("4 2\n0 1\n2 3\n").unwrap();
        let est = ResistanceEstimator::build(&g, 0, &Config::default()).unwrap();
        assert_eq!(est.resistance(0, 2), f64::INFINITY);
        assert!((est.resistance(0, 1) - 1.0).abs() < 1e-8);
    }
}
