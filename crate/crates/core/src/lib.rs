//! Single-pass graph-streaming toolkit.
//!
//! Maintains spectral sparsifiers under a strict space budget over
//! insertion-only edge streams and answers:
//!
//! - (1+eps)-approximate minimum cut on arbitrary-order streams,
//! - exact minimum cut (with all minimum cuts and their crossing edges) on
//!   random-order streams of simple graphs,
//! - (1 +/- eps) all-pairs effective resistances,
//!
//! with exact brute-force oracles backing every estimator.
//!
//! The numeric core (graphs, quadratic forms, incidence sketches, the
//! Laplacian solver) is generic over [`scalar::Scalar`]; pipelines use the
//! `f64` aliases below.

pub mod bitset;
pub mod config;
pub mod effres;
pub mod gen;
pub mod graph;
pub mod hashing;
pub mod leverage;
pub mod meter;
pub mod mincut;
pub mod oracle;
pub mod random_order;
pub mod scalar;
pub mod sketch;
pub mod sparsify;
pub mod stream;

pub use bitset::VertexSet;
pub use config::Config;
pub use meter::SpaceMeter;

/// Concrete graph used by the pipelines.
pub type Graph = graph::WeightedGraph<f64>;
/// Concrete cut with `f64` value.
pub type GCut = graph::Cut<f64>;
/// Concrete incidence-column sketch.
pub type JlSketch = sketch::jl::JlIncidenceSketch<f64>;
/// Concrete preconditioned CG solver.
pub type Solver<'g> = sketch::solver::LaplacianSolver<'g, f64>;
