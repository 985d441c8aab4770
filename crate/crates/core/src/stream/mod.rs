//! Single-pass insertion-only stream processing.

mod online;
mod tower;

pub use online::{OnlineSampler, SampleDecision};
pub use tower::{
    stream_forall_sparsifier, stream_foreach_sparsifier, BlockTower, Reducer, StreamEngine, StreamOutput,
};

use crate::graph::Edge;

/// Ordered sequence of weighted edge insertions over a known vertex universe.
///
/// The iterator is forward-only; consumers get each element exactly once.
/// `visits()` exposes the instrumentation counter used to enforce the
/// single-pass discipline in tests.
#[derive(Clone, Debug)]
pub struct EdgeStream {
    n: usize,
    edges: Vec<Edge<f64>>,
}

impl EdgeStream {
    pub fn new(n: usize, edges: Vec<Edge<f64>>) -> Self {
        EdgeStream { n, edges }
    }

    pub fn from_graph(g: &crate::graph::WeightedGraph<f64>) -> Self {
        EdgeStream { n: g.n(), edges: g.edges().to_vec() }
    }

    /// Same elements in a seeded uniformly random order (the random-order model).
    pub fn shuffled(&self, seed: u64) -> Self {
        use rand::seq::SliceRandom;
        let mut edges = self.edges.clone();
        edges.shuffle(&mut <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(seed));
        EdgeStream { n: self.n, edges }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Consumes the stream into a counting forward-only iterator.
    pub fn into_iter_counted(self) -> CountedStream {
        CountedStream { inner: self.edges.into_iter(), visits: 0 }
    }
}

/// Forward-only iterator with a visit counter.
pub struct CountedStream {
    inner: std::vec::IntoIter<Edge<f64>>,
    visits: u64,
}

impl CountedStream {
    pub fn visits(&self) -> u64 {
        self.visits
    }
}

impl Iterator for CountedStream {
    type Item = Edge<f64>;

    fn next(&mut self) -> Option<Edge<f64>> {
        let item = self.inner.next();
        if item.is_some() {
            self.visits += 1;
        }
        item
    }
}
