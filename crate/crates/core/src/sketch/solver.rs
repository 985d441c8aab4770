//! Laplacian linear systems by Jacobi-preconditioned conjugate gradients,
//! restricted to the subspace orthogonal to the all-ones vector.

use crate::graph::WeightedGraph;
use crate::scalar::Scalar;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolveError {
    #[error("CG did not converge in {iters} iterations, relative residual {residual}")]
    NotConverged { iters: usize, residual: f64 },
    #[error("graph is disconnected; component containing vertex {0} is separated from vertex 0")]
    Disconnected(usize),
    #[error("right-hand side length {got} != n = {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("query endpoints must differ")]
    SamePair,
}

/// CG solver over an immutable graph; reentrant and safe to share across
/// threads.
pub struct LaplacianSolver<'g, S> {
    graph: &'g WeightedGraph<S>,
    pub tolerance: f64,
    pub max_iters: usize,
    inv_degree: Vec<S>,
    /// Ridge term; zero solves the singular Laplacian on the zero-mean
    /// subspace, positive values solve `(L + lambda I) x = b` exactly.
    lambda: S,
}

impl<'g, S: Scalar> LaplacianSolver<'g, S> {
    pub fn new(graph: &'g WeightedGraph<S>, cfg: &crate::config::Config) -> Self {
        Self::with_params(graph, cfg.cg_tol, cfg.cg_max_iters_mult * graph.n().max(8), S::zero())
    }

    pub fn with_ridge(graph: &'g WeightedGraph<S>, cfg: &crate::config::Config, lambda: S) -> Self {
        Self::with_params(graph, cfg.cg_tol, cfg.cg_max_iters_mult * graph.n().max(8), lambda)
    }

    pub fn with_params(graph: &'g WeightedGraph<S>, tolerance: f64, max_iters: usize, lambda: S) -> Self {
        let n = graph.n();
        let mut inv_degree = vec![S::zero(); n];
        for v in 0..n {
            let d = graph.weighted_degree(v) + lambda;
            inv_degree[v] = if d > S::zero() { S::one() / d } else { S::one() };
        }
        LaplacianSolver { graph, tolerance, max_iters, inv_degree, lambda }
    }

    fn check_connected(&self) -> Result<(), SolveError> {
        if self.lambda > S::zero() {
            return Ok(()); // ridge-regularized system is positive definite
        }
        let comps = self.graph.components();
        if comps.len() > 1 {
            return Err(SolveError::Disconnected(comps[1][0]));
        }
        Ok(())
    }

    fn project_zero_mean(x: &mut [S]) {
        let n = S::from_f64_lossy(x.len() as f64);
        let mean = x.iter().fold(S::zero(), |a, &b| a + b) / n;
        for v in x.iter_mut() {
            *v = *v - mean;
        }
    }

    fn apply(&self, x: &[S], out: &mut [S]) {
        self.graph.laplacian_matvec(x, out);
        if self.lambda > S::zero() {
            for (o, &xi) in out.iter_mut().zip(x.iter()) {
                *o = *o + self.lambda * xi;
            }
        }
    }

    /// Solves `L x = b` for zero-mean `b` (the input is projected); the
    /// result is zero-mean with relative residual below the tolerance.
    pub fn solve(&self, b: &[S]) -> Result<Vec<S>, SolveError> {
        let n = self.graph.n();
        if b.len() != n {
            return Err(SolveError::DimensionMismatch { got: b.len(), want: n });
        }
        self.check_connected()?;
        let mut rhs = b.to_vec();
        if self.lambda == S::zero() {
            Self::project_zero_mean(&mut rhs);
        }
        let b_norm = rhs.iter().fold(S::zero(), |a, &v| a + v * v).sqrt();
        if b_norm.to_f64_lossy() == 0.0 {
            return Ok(vec![S::zero(); n]);
        }
        let mut x = vec![S::zero(); n];
        let mut r = rhs.clone();
        let mut z: Vec<S> = r.iter().zip(&self.inv_degree).map(|(&ri, &d)| ri * d).collect();
        let mut p = z.clone();
        let mut rz = dot(&r, &z);
        let mut ap = vec![S::zero(); n];
        let tol = S::from_f64_lossy(self.tolerance) * b_norm;
        let mut final_res = S::zero();
        for iter in 0..self.max_iters {
            self.apply(&p, &mut ap);
            let pap = dot(&p, &ap);
            if pap <= S::zero() {
                break;
            }
            let alpha = rz / pap;
            for i in 0..n {
                x[i] = x[i] + alpha * p[i];
                r[i] = r[i] - alpha * ap[i];
            }
            let res = r.iter().fold(S::zero(), |a, &v| a + v * v).sqrt();
            final_res = res;
            if res <= tol {
                if self.lambda == S::zero() {
                    Self::project_zero_mean(&mut x);
                }
                return Ok(x);
            }
            if iter % 64 == 63 && self.lambda == S::zero() {
                Self::project_zero_mean(&mut r);
            }
            for i in 0..n {
                z[i] = r[i] * self.inv_degree[i];
            }
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        Err(SolveError::NotConverged {
            iters: self.max_iters,
            residual: (final_res / b_norm).to_f64_lossy(),
        })
    }

    /// `chi' L+ chi` for `chi = 1_u - 1_v`: the effective resistance up to
    /// solver tolerance.
    pub fn effective_resistance(&self, u: usize, v: usize) -> Result<S, SolveError> {
        if u == v {
            return Err(SolveError::SamePair);
        }
        let n = self.graph.n();
        let mut b = vec![S::zero(); n];
        b[u] = S::one();
        b[v] = -S::one();
        let x = self.solve(&b)?;
        Ok(x[u] - x[v])
    }
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter().zip(b.iter()).fold(S::zero(), |acc, (&x, &y)| acc + x * y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Config;
    use crate::gen;
    use crate::oracle;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_rhs_gives_zero() {
        let g = gen::path(5);
        let solver = LaplacianSolver::new(&g, &Config::default());
        let x = solver.solve(&vec![0.0; 5]).unwrap();
        assert!(x.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn single_resistor() {
        let g = gen::path(2);
        let solver = LaplacianSolver::new(&g, &Config::default());
        let x = solver.solve(&[1.0, -1.0]).unwrap();
        assert!((x[0] - 0.5).abs() < 1e-8);
        assert!((x[1] + 0.5).abs() < 1e-8);
        assert!((solver.effective_resistance(0, 1).unwrap() - 1.0).abs() < 1e-8);
    }

    #[test]
    fn matches_dense_pseudoinverse() {
        let g = gen::connected_gnp(24, 0.3, 5);
        let cfg = Config::default();
        let solver = LaplacianSolver::new(&g, &cfg);
        let pinv = oracle::laplacian_pseudoinverse(&g, 500).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let mut b: Vec<f64> = (0..24).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mean = b.iter().sum::<f64>() / 24.0;
            b.iter_mut().for_each(|v| *v -= mean);
            let x = solver.solve(&b).unwrap();
            for u in 0..24 {
                let expect: f64 = (0..24).map(|v| pinv[(u, v)] * b[v]).sum();
                assert!((x[u] - expect).abs() < 1e-6, "{} vs {expect}", x[u]);
            }
        }
    }

    #[test]
    fn left_inverse_quadratic_form_check() {
        // x = L+ b implies x' L x = b' x.
        let g = gen::connected_gnp(30, 0.25, 8);
        let cfg = Config::default();
        let solver = LaplacianSolver::new(&g, &cfg);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..5 {
            let mut b: Vec<f64> = (0..30).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let mean = b.iter().sum::<f64>() / 30.0;
            b.iter_mut().for_each(|v| *v -= mean);
            let x = solver.solve(&b).unwrap();
            let qf = g.quadratic_form(&x).unwrap();
            let bx: f64 = b.iter().zip(&x).map(|(a, c)| a * c).sum();
            assert!((qf - bx).abs() <= 2.0 * cfg.cg_tol * bx.abs().max(1.0));
        }
    }

    #[test]
    fn effective_resistance_known_values() {
        let cfg = Config::default();
        let c4 = gen::cycle(4);
        let solver = LaplacianSolver::new(&c4, &cfg);
        assert!((solver.effective_resistance(0, 1).unwrap() - 0.75).abs() < 1e-7);

        let g = gen::connected_gnp(30, 0.3, 21);
        let solver = LaplacianSolver::new(&g, &cfg);
        let oracle_r = oracle::dense_er_matrix(&g, 500).unwrap();
        for (u, v) in [(0usize, 5usize), (3, 17), (8, 29), (1, 2)] {
            let got = solver.effective_resistance(u, v).unwrap();
            assert!((got - oracle_r[(u, v)]).abs() < 1e-5);
        }
    }

    #[test]
    fn disconnected_names_component() {
        let g = crate::graph::parse_graph_text("5 3\n0 1\n1 2\n3 4\n").unwrap();
        let solver = LaplacianSolver::new(&g, &Config::default());
        match solver.solve(&[1.0, 0.0, 0.0, -1.0, 0.0]) {
            Err(SolveError::Disconnected(v)) => assert!(v == 3 || v == 4),
            other => panic!("expected Disconnected, got {other:?}"),
        }
    }

    #[test]
    fn non_convergence_reports_residual() {
        let g = gen::connected_gnp(40, 0.2, 3);
        let solver = LaplacianSolver::with_params(&g, 1e-14, 2, 0.0);
        let mut b = vec![0.0; 40];
        b[0] = 1.0;
        b[39] = -1.0;
        match solver.solve(&b) {
            Err(SolveError::NotConverged { iters, residual }) => {
                assert_eq!(iters, 2);
                assert!(residual > 0.0);
            }
            other => panic!("expected NotConverged, got {other:?}"),
        }
    }

    #[test]
    fn ridge_handles_disconnected_input() {
        let g = crate::graph::parse_graph_text("4 2\n0 1\n2 3\n").unwrap();
        let solver = LaplacianSolver::with_params(&g, 1e-10, 400, 1e-3);
        // chi across components: finite but large resistance ~ 2/lambda.
        let r = solver.effective_resistance(0, 2).unwrap();
        assert!(r > 100.0);
    }

    #[test]
    fn f32_instantiation_solves_small_systems() {
        let edges = vec![crate::graph::Edge::new(0usize, 1usize, 1.0f32)];
        let g = crate::graph::WeightedGraph::<f32>::new(2, edges).unwrap();
        let solver = LaplacianSolver::with_params(&g, 1e-5, 100, 0.0f32);
        let r = solver.effective_resistance(0, 1).unwrap();
        assert!((r - 1.0).abs() < 1e-4);
    }
}
