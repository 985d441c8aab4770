//! Degree-preserving short-cycle decomposition.
//!
//! Peels degree-<=1 vertices into the leftover, then repeatedly extracts an
//! even closed walk of distinct edges through the lowest-id live edge. Even
//! walks are found directly by a parity-layered BFS (a walk in the bipartite
//! double cover), which keeps the alternation classes well-defined: around an
//! even closed walk every visit to a vertex uses one odd- and one
//! even-indexed edge, so sampling one class at doubled weight preserves
//! weighted degrees exactly. When no even walk of capped length exists the
//! pivot edge moves to the leftover (the parity fix).

use rand::Rng;

/// Edge-disjoint even cycles (closed walks of distinct edges) plus leftover.
#[derive(Clone, Debug)]
pub struct CycleDecomposition {
    /// Edge ids in walk order; consecutive edges share an endpoint and the
    /// walk closes.
    pub cycles: Vec<Vec<usize>>,
    pub leftover: Vec<usize>,
    /// Pivot edges moved to the leftover because only odd or over-long walks
    /// closed through them.
    pub parity_fixed: usize,
}

impl CycleDecomposition {
    /// Maximum admissible cycle length for an n-vertex graph (even).
    pub fn length_cap(n: usize) -> usize {
        2 * (n.max(2) as f64).log2().ceil() as usize + 2
    }
}

struct DecompState<'a> {
    edges: &'a [(u32, u32)],
    adj: Vec<Vec<(u32, u32)>>,
    alive: Vec<bool>,
    degree: Vec<u32>,
    alive_count: usize,
    peel_queue: Vec<usize>,
    leftover: Vec<usize>,
}

impl<'a> DecompState<'a> {
    fn kill(&mut self, id: usize) {
        debug_assert!(self.alive[id]);
        self.alive[id] = false;
        let (u, v) = self.edges[id];
        self.degree[u as usize] -= 1;
        self.degree[v as usize] -= 1;
        self.alive_count -= 1;
        for end in [u as usize, v as usize] {
            if self.degree[end] == 1 {
                self.peel_queue.push(end);
            }
        }
    }

    /// Deletes every vertex of degree <= 1, moving its edge to the leftover.
    fn peel(&mut self) {
        while let Some(v) = self.peel_queue.pop() {
            if self.degree[v] != 1 {
                continue;
            }
            let id = self.adj[v]
                .iter()
                .find(|&&(_, id)| self.alive[id as usize])
                .map(|&(_, id)| id as usize)
                .unwrap();
            self.leftover.push(id);
            self.kill(id);
        }
    }
}

/// Decomposes an unweighted multigraph view given as an edge list.
pub fn short_cycle_decompose(n: usize, edges: &[(u32, u32)]) -> CycleDecomposition {
    let m = edges.len();
    let cap_walk = CycleDecomposition::length_cap(n) - 1; // walk part, odd
    let mut adj: Vec<Vec<(u32, u32)>> = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u as usize].push((v, id as u32));
        adj[v as usize].push((u, id as u32));
    }
    let mut degree = vec![0u32; n];
    for &(u, v) in edges {
        degree[u as usize] += 1;
        degree[v as usize] += 1;
    }
    let peel_queue: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    let mut st = DecompState {
        edges,
        adj,
        alive: vec![true; m],
        degree,
        alive_count: m,
        peel_queue,
        leftover: Vec::new(),
    };
    st.peel();

    let mut cycles = Vec::new();
    let mut parity_fixed = 0usize;
    let mut cursor = 0usize;
    // BFS state per (vertex, parity); stamped to avoid clearing.
    let mut visited = vec![u32::MAX; 2 * n];
    let mut parent: Vec<(u32, u32)> = vec![(u32::MAX, u32::MAX); 2 * n];
    let mut stamp = 0u32;
    let mut queue: Vec<(u32, u32)> = Vec::new(); // (state, depth)

    while st.alive_count > 0 {
        while cursor < m && !st.alive[cursor] {
            cursor += 1;
        }
        if cursor >= m {
            break;
        }
        let pivot = cursor;
        let (pu, pv) = (edges[pivot].0 as usize, edges[pivot].1 as usize);

        // Shortest odd-length walk pu -> pv avoiding the pivot edge.
        stamp += 1;
        queue.clear();
        let start = (pu * 2) as u32;
        visited[start as usize] = stamp;
        queue.push((start, 0));
        let target = (pv * 2 + 1) as u32;
        let mut found = false;
        let mut qi = 0;
        while qi < queue.len() {
            let (state, depth) = queue[qi];
            qi += 1;
            if state == target {
                found = true;
                break;
            }
            if depth as usize >= cap_walk {
                continue;
            }
            let v = (state / 2) as usize;
            let parity = state % 2;
            for &(nbr, id) in &st.adj[v] {
                if !st.alive[id as usize] || id as usize == pivot {
                    continue;
                }
                let next = nbr * 2 + (1 - parity);
                if visited[next as usize] != stamp {
                    visited[next as usize] = stamp;
                    parent[next as usize] = (state, id);
                    queue.push((next, depth + 1));
                }
            }
        }

        let mut extracted = false;
        if found {
            // Reconstruct the walk and confirm edge distinctness.
            let mut walk = Vec::new();
            let mut state = target;
            while state != start {
                let (prev, id) = parent[state as usize];
                walk.push(id as usize);
                state = prev;
            }
            walk.reverse();
            let mut distinct = std::collections::HashSet::with_capacity(walk.len() + 1);
            distinct.insert(pivot);
            if walk.iter().all(|&id| distinct.insert(id)) {
                // Closed even walk: pu -> ... -> pv, then pivot back to pu.
                walk.push(pivot);
                for &id in &walk {
                    st.kill(id);
                }
                cycles.push(walk);
                extracted = true;
            }
        }
        if !extracted {
            // Parity fix: no admissible even walk closes through the pivot.
            st.leftover.push(pivot);
            st.kill(pivot);
            parity_fixed += 1;
        }
        st.peel();
    }

    CycleDecomposition { cycles, leftover: st.leftover, parity_fixed }
}

/// One degree-preserving sampling round over a decomposed bucket: leftover
/// edges survive at weight factor 1; each cycle flips a fair coin and keeps
/// its odd- or even-indexed edges at factor 2.
pub fn cycle_sample_round<R: Rng>(decomp: &CycleDecomposition, rng: &mut R) -> Vec<(usize, f64)> {
    let mut kept: Vec<(usize, f64)> = decomp.leftover.iter().map(|&id| (id, 1.0)).collect();
    for cycle in &decomp.cycles {
        debug_assert!(cycle.len() % 2 == 0);
        let keep_odd = rng.gen_bool(0.5);
        for (pos, &id) in cycle.iter().enumerate() {
            if (pos % 2 == 1) == keep_odd {
                kept.push((id, 2.0));
            }
        }
    }
    kept
}

/// Structural checker used by tests and the acceptance suite. Panics with a
/// description on the first violated invariant.
pub fn check_decomposition(n: usize, edges: &[(u32, u32)], d: &CycleDecomposition) {
    let cap = CycleDecomposition::length_cap(n);
    let mut seen = vec![false; edges.len()];
    let mut mark = |id: usize| {
        assert!(id < edges.len(), "edge id out of range");
        assert!(!seen[id], "edge {id} appears twice in the decomposition");
        seen[id] = true;
    };
    for cycle in &d.cycles {
        assert!(cycle.len() % 2 == 0, "odd cycle of length {}", cycle.len());
        assert!(cycle.len() >= 2 && cycle.len() <= cap, "cycle length {} beyond cap {cap}", cycle.len());
        for &id in cycle {
            mark(id);
        }
        // Closed-walk check: thread endpoints through consecutive edges,
        // trying both orientations of the first edge.
        let (first_u, first_v) = edges[cycle[0]];
        let closes = [first_u, first_v].iter().any(|&start| {
            let mut at = start;
            for &id in cycle {
                let (a, b) = edges[id];
                if a == at {
                    at = b;
                } else if b == at {
                    at = a;
                } else {
                    return false;
                }
            }
            at == start
        });
        assert!(closes, "cycle does not form a closed walk: {cycle:?}");
    }
    for &id in &d.leftover {
        mark(id);
    }
    assert!(seen.iter().all(|&s| s), "edge multiset is not exactly partitioned");
    assert!(
        d.leftover.len() <= 2 * n + d.parity_fixed,
        "leftover {} exceeds 2n + parity_fixed = {}",
        d.leftover.len(),
        2 * n + d.parity_fixed
    );
}
