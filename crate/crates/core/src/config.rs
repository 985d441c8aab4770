//! Tunable constants shared across the toolkit.
//!
//! Defaults follow the theory-faithful settings; at bench scale several of
//! them make the samplers keep everything (probabilities saturate at 1).
//! Tests that need the machinery to actually drop edges use the `lean_*`
//! constructors and say so in their output metadata.

/// Global knob set, passed by reference into every randomized component.
#[derive(Clone, Debug)]
pub struct Config {
    /// JL row-count constant: `k = ceil(c_jl * ln(n) / eps^2)`.
    pub c_jl: f64,
    /// Independent sketch copies for median amplification.
    pub amplify_reps: usize,

    /// Conjugate-gradient relative residual target.
    pub cg_tol: f64,
    /// Looser residual target for sampling-grade resistance estimates.
    pub lev_cg_tol: f64,
    /// CG iteration cap as a multiple of n.
    pub cg_max_iters_mult: usize,

    /// Leverage-estimate JL constant (rows = `c_lev * ln(m) / delta_lev^2`).
    pub c_lev: f64,
    /// Relative accuracy of leverage estimates used for sampling.
    pub delta_lev: f64,
    /// Below this vertex count leverage scores are computed densely (exact).
    pub dense_leverage_cutoff: usize,

    /// For-all oversampling constant: `p_e = min(1, c_all * w*r * ln(n) / eps^2)`.
    pub c_all: f64,

    /// Online-sampling constant: `p_e = min(1, c_online * w*r * log2(n)^2 / eps^2)`.
    pub c_online: f64,

    /// For-each sparsifier target: `c_each * n * log2(n)^foreach_log_pow / eps` edges.
    pub c_each: f64,
    pub foreach_log_pow: u32,
    /// Heavy-edge threshold divisor: `tau = eps / (heavy_div * L_max)`.
    pub heavy_div: f64,
    /// Extra halving rounds past `ceil(log2 m)` before the fallback kicks in.
    pub round_cap_extra: usize,

    /// Block size: `mspace_mult * n * log2(n)^mspace_log_pow / eps` edges.
    pub mspace_mult: f64,
    pub mspace_log_pow: u32,

    /// Recursive-contraction repetitions; `None` means `ceil(8 * log2(n)^2)`.
    pub tree_reps: Option<usize>,
    /// Candidate radius in the streaming pipeline: `alpha = 1 + c_alpha / log2(n)`.
    pub c_alpha: f64,

    /// Random-order freeze threshold: freeze once min cut of the prefix
    /// sparsifier exceeds `c_thresh * log2(n)`.
    pub c_thresh: f64,
    /// Constant-factor oversampling for min-cut edge recovery.
    pub oversample_mult: f64,
    /// Candidate family radius for the suffix phase (1.1^2 absorbs prefix noise).
    pub phase2_radius: f64,
    /// Phase-2 contraction repetitions; `None` means `ceil(2 * log2(n)^2)`.
    pub phase2_reps: Option<usize>,
    /// Per-vertex suffix adjacency is dropped once the vertex's exact degree
    /// exceeds `factor * (current min degree) + slack`.
    pub singleton_prune_factor: f64,
    pub singleton_prune_slack: u32,

    /// Dense oracle refusal threshold.
    pub dense_oracle_cap: usize,

    /// Weight cap exponent: weights must stay below `max(1e6, n^exp)`.
    pub weight_cap_exp: u32,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            c_jl: 4.0,
            amplify_reps: 9,
            cg_tol: 1e-8,
            lev_cg_tol: 1e-5,
            cg_max_iters_mult: 10,
            c_lev: 4.0,
            delta_lev: 0.5,
            dense_leverage_cutoff: 120,
            c_all: 1.0,
            c_online: 1.0,
            c_each: 4.0,
            foreach_log_pow: 3,
            heavy_div: 4.0,
            round_cap_extra: 8,
            mspace_mult: 1.0,
            mspace_log_pow: 3,
            tree_reps: None,
            c_alpha: 1.0,
            c_thresh: 20.0,
            oversample_mult: 4.0,
            phase2_radius: 1.21,
            phase2_reps: None,
            singleton_prune_factor: 1.5,
            singleton_prune_slack: 8,
            dense_oracle_cap: 500,
            weight_cap_exp: 4,
        }
    }
}

impl Config {
    /// Settings that force actual edge-dropping at bench sizes: the for-each
    /// target and block size lose their polylog slack.
    pub fn lean_foreach(mut self) -> Self {
        self.foreach_log_pow = 0;
        self.mspace_log_pow = 0;
        self
    }

    /// Additionally shrinks the for-all oversampling constant so the
    /// leverage-score sampler drops edges on small dense graphs.
    pub fn lean_forall(mut self, c_all: f64) -> Self {
        self.c_all = c_all;
        self
    }

    pub fn weight_cap(&self, n: usize) -> f64 {
        1e6_f64.max((n.max(2) as f64).powi(self.weight_cap_exp as i32))
    }

    /// `k` for a JL sketch over a logical universe of `n` items.
    pub fn jl_rows(&self, n: usize, eps: f64) -> usize {
        ((self.c_jl * (n.max(2) as f64).ln()) / (eps * eps)).ceil() as usize
    }

    pub fn tree_reps_for(&self, n: usize) -> usize {
        self.tree_reps.unwrap_or_else(|| {
            let l = (n.max(2) as f64).log2();
            (8.0 * l * l).ceil() as usize
        })
    }

    pub fn phase2_reps_for(&self, n: usize) -> usize {
        self.phase2_reps.unwrap_or_else(|| {
            let l = (n.max(2) as f64).log2();
            (2.0 * l * l).ceil() as usize
        })
    }

    pub fn foreach_target(&self, n: usize, eps: f64) -> usize {
        let lg = (n.max(2) as f64).log2().powi(self.foreach_log_pow as i32);
        (self.c_each * n as f64 * lg / eps).ceil() as usize
    }

    pub fn mspace(&self, n: usize, eps: f64) -> usize {
        let lg = (n.max(2) as f64).log2().powi(self.mspace_log_pow as i32);
        ((self.mspace_mult * n as f64 * lg / eps).ceil() as usize).max(4)
    }
}
