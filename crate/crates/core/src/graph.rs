//! Weighted undirected graphs, cuts, and Laplacian quadratic forms.

use crate::bitset::VertexSet;
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("edge ({u},{v}) has endpoint outside 0..{n}")]
    VertexOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("edge ({u},{v}) has non-positive weight {w}")]
    NonPositiveWeight { u: usize, v: usize, w: f64 },
    #[error("edge ({u},{v}) weight {w} exceeds the poly(n) cap {cap}")]
    WeightCapExceeded { u: usize, v: usize, w: f64, cap: f64 },
    #[error("duplicate edge ({u},{v}) in simple graph")]
    DuplicateEdge { u: usize, v: usize },
    #[error("simple graph requires unit weights, edge ({u},{v}) has {w}")]
    NonUnitWeight { u: usize, v: usize, w: f64 },
    #[error("vector length {got} does not match vertex count {want}")]
    DimensionMismatch { got: usize, want: usize },
    #[error("cut side must be a proper nonempty subset")]
    EmptyOrFullSide,
    #[error("graph text parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// One undirected weighted edge.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge<S> {
    pub u: u32,
    pub v: u32,
    pub w: S,
}

impl<S: Scalar> Edge<S> {
    pub fn new(u: usize, v: usize, w: S) -> Self {
        Edge { u: u as u32, v: v as u32, w }
    }
}

/// Vertex bipartition, optionally tagged with its evaluated weight.
#[derive(Clone, Debug)]
pub struct Cut<S> {
    pub side: VertexSet,
    pub value: Option<S>,
}

impl<S: Scalar> Cut<S> {
    pub fn new(side: VertexSet) -> Self {
        Cut { side, value: None }
    }

    pub fn with_value(side: VertexSet, value: S) -> Self {
        Cut { side, value: Some(value) }
    }
}

/// Immutable weighted graph with an adjacency index.
///
/// Parallel edges are permitted when `multi` is set (contraction produces
/// multigraphs); `simple` marks unit-weight duplicate-free graphs, which the
/// random-order pipeline requires.
#[derive(Clone, Debug)]
pub struct WeightedGraph<S> {
    n: usize,
    edges: Vec<Edge<S>>,
    adj_start: Vec<u32>,
    // (neighbor, edge id), grouped by endpoint.
    adj: Vec<(u32, u32)>,
    simple: bool,
    multi: bool,
}

impl<S: Scalar> WeightedGraph<S> {
    /// Validating constructor for ordinary (non-multi) graphs.
    pub fn new(n: usize, edges: Vec<Edge<S>>) -> Result<Self, GraphError> {
        Self::build(n, edges, false, f64::INFINITY)
    }

    /// Multigraph constructor: duplicate pairs allowed.
    pub fn new_multi(n: usize, edges: Vec<Edge<S>>) -> Result<Self, GraphError> {
        Self::build(n, edges, true, f64::INFINITY)
    }

    /// Constructor enforcing a poly(n) weight cap.
    pub fn with_weight_cap(n: usize, edges: Vec<Edge<S>>, cap: f64) -> Result<Self, GraphError> {
        Self::build(n, edges, false, cap)
    }

    fn build(n: usize, edges: Vec<Edge<S>>, multi: bool, cap: f64) -> Result<Self, GraphError> {
        let mut seen = std::collections::HashSet::new();
        let mut simple = true;
        for e in &edges {
            let (u, v) = (e.u as usize, e.v as usize);
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let w = e.w.to_f64_lossy();
            if !(w > 0.0) {
                return Err(GraphError::NonPositiveWeight { u, v, w });
            }
            if w > cap {
                return Err(GraphError::WeightCapExceeded { u, v, w, cap });
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                if !multi {
                    return Err(GraphError::DuplicateEdge { u, v });
                }
                simple = false;
            }
            if w != 1.0 {
                simple = false;
            }
        }
        let mut deg = vec![0u32; n];
        for e in &edges {
            deg[e.u as usize] += 1;
            deg[e.v as usize] += 1;
        }
        let mut adj_start = vec![0u32; n + 1];
        for v in 0..n {
            adj_start[v + 1] = adj_start[v] + deg[v];
        }
        let mut cursor = adj_start.clone();
        let mut adj = vec![(0u32, 0u32); 2 * edges.len()];
        for (id, e) in edges.iter().enumerate() {
            adj[cursor[e.u as usize] as usize] = (e.v, id as u32);
            cursor[e.u as usize] += 1;
            adj[cursor[e.v as usize] as usize] = (e.u, id as u32);
            cursor[e.v as usize] += 1;
        }
        Ok(WeightedGraph { n, edges, adj_start, adj, simple, multi })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<S>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge<S> {
        self.edges[id]
    }

    pub fn is_simple(&self) -> bool {
        self.simple
    }

    pub fn is_multi(&self) -> bool {
        self.multi
    }

    /// `(neighbor, edge id)` pairs of `v`.
    pub fn neighbors(&self, v: usize) -> &[(u32, u32)] {
        &self.adj[self.adj_start[v] as usize..self.adj_start[v + 1] as usize]
    }

    pub fn weighted_degree(&self, v: usize) -> S {
        self.neighbors(v).iter().fold(S::zero(), |acc, &(_, id)| acc + self.edges[id as usize].w)
    }

    /// Connected components as vertex sets (singletons included).
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut comp = vec![usize::MAX; self.n];
        let mut out = Vec::new();
        for s in 0..self.n {
            if comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![s];
            comp[s] = id;
            let mut queue = std::collections::VecDeque::from([s]);
            while let Some(x) = queue.pop_front() {
                for &(y, _) in self.neighbors(x) {
                    if comp[y as usize] == usize::MAX {
                        comp[y as usize] = id;
                        members.push(y as usize);
                        queue.push_back(y as usize);
                    }
                }
            }
            out.push(members);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.components().len() == 1
    }

    /// Total edge weight crossing the bipartition.
    pub fn cut_value(&self, cut: &VertexSet) -> Result<S, GraphError> {
        if !cut.is_proper_nonempty() || cut.len_universe() != self.n {
            return Err(GraphError::EmptyOrFullSide);
        }
        let mut total = S::zero();
        for e in &self.edges {
            if cut.contains(e.u as usize) != cut.contains(e.v as usize) {
                total = total + e.w;
            }
        }
        Ok(total)
    }

    /// Laplacian quadratic form `x' L x = sum_e w_e (x_u - x_v)^2`.
    pub fn quadratic_form(&self, x: &[S]) -> Result<S, GraphError> {
        if x.len() != self.n {
            return Err(GraphError::DimensionMismatch { got: x.len(), want: self.n });
        }
        let mut total = S::zero();
        for e in &self.edges {
            let d = x[e.u as usize] - x[e.v as usize];
            total = total + e.w * d * d;
        }
        Ok(total)
    }

    /// Singleton cut of minimum weighted degree, ties to the lowest vertex id.
    pub fn min_degree_cut(&self) -> Cut<S> {
        debug_assert!(self.n >= 2);
        let mut best = 0;
        let mut best_deg = self.weighted_degree(0);
        for v in 1..self.n {
            let d = self.weighted_degree(v);
            if d < best_deg {
                best = v;
                best_deg = d;
            }
        }
        Cut::with_value(VertexSet::singleton(self.n, best), best_deg)
    }

    /// Dense Laplacian (row-major n*n); test and oracle helper.
    pub fn dense_laplacian(&self) -> Vec<S> {
        let mut l = vec![S::zero(); self.n * self.n];
        for e in &self.edges {
            let (u, v) = (e.u as usize, e.v as usize);
            l[u * self.n + u] = l[u * self.n + u] + e.w;
            l[v * self.n + v] = l[v * self.n + v] + e.w;
            l[u * self.n + v] = l[u * self.n + v] - e.w;
            l[v * self.n + u] = l[v * self.n + u] - e.w;
        }
        l
    }

    /// Laplacian matrix-vector product without materializing L.
    pub fn laplacian_matvec(&self, x: &[S], out: &mut [S]) {
        debug_assert_eq!(x.len(), self.n);
        out.fill(S::zero());
        for e in &self.edges {
            let (u, v) = (e.u as usize, e.v as usize);
            let d = e.w * (x[u] - x[v]);
            out[u] = out[u] + d;
            out[v] = out[v] - d;
        }
    }
}

/// Row view of the weighted incidence matrix: entry `+sqrt(w)` at `u`,
/// `-sqrt(w)` at `v`, zero elsewhere.
#[derive(Clone, Copy, Debug)]
pub struct IncidenceRow<S> {
    pub u: usize,
    pub v: usize,
    pub sqrt_w: S,
}

impl<S: Scalar> IncidenceRow<S> {
    /// Row entries sum to zero by construction.
    pub fn entry(&self, col: usize) -> S {
        if col == self.u {
            self.sqrt_w
        } else if col == self.v {
            -self.sqrt_w
        } else {
            S::zero()
        }
    }

    /// `b_e . x = sqrt(w) (x_u - x_v)`.
    pub fn dot(&self, x: &[S]) -> S {
        self.sqrt_w * (x[self.u] - x[self.v])
    }
}

/// Incidence-matrix view of a graph; `B' B = L`.
pub struct IncidenceView<'g, S> {
    graph: &'g WeightedGraph<S>,
}

impl<'g, S: Scalar> IncidenceView<'g, S> {
    pub fn new(graph: &'g WeightedGraph<S>) -> Self {
        IncidenceView { graph }
    }

    pub fn rows(&self) -> impl Iterator<Item = IncidenceRow<S>> + 'g {
        self.graph.edges().iter().map(|e| IncidenceRow {
            u: e.u as usize,
            v: e.v as usize,
            sqrt_w: e.w.sqrt(),
        })
    }
}

/// Parses the graph text format: first line `n m`, then `m` lines `u v [w]`
/// with 0-indexed endpoints; omitted `w` means 1. Line order is arrival order.
pub fn parse_graph_text(text: &str) -> Result<WeightedGraph<f64>, GraphError> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (ln, header) = lines.next().ok_or(GraphError::Parse { line: 0, msg: "empty input".into() })?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(GraphError::Parse { line: ln + 1, msg: "expected vertex count".into() })?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or(GraphError::Parse { line: ln + 1, msg: "expected edge count".into() })?;
    let mut edges = Vec::with_capacity(m);
    for _ in 0..m {
        let (ln, line) = lines.next().ok_or(GraphError::Parse { line: 0, msg: "missing edge lines".into() })?;
        let mut it = line.split_whitespace();
        let u: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(GraphError::Parse { line: ln + 1, msg: "expected endpoint".into() })?;
        let v: usize = it
            .next()
            .and_then(|t| t.parse().ok())
            .ok_or(GraphError::Parse { line: ln + 1, msg: "expected endpoint".into() })?;
        let w: f64 = match it.next() {
            Some(t) => t.parse().map_err(|_| GraphError::Parse { line: ln + 1, msg: "bad weight".into() })?,
            None => 1.0,
        };
        edges.push(Edge::new(u, v, w));
    }
    WeightedGraph::new_multi(n, edges).map(|g| WeightedGraph {
        multi: false,
        ..g
    })
}

/// Serializes in the same text format, preserving edge order.
pub fn write_graph_text(g: &WeightedGraph<f64>) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        if e.w == 1.0 {
            out.push_str(&format!("{} {}\n", e.u, e.v));
        } else {
            out.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
        }
    }
    out
}
