//! Simple undirected graphs, the Max-Cut instances everything else works on.
//!
//! Vertices are `0..n`. Edges are stored as `(u, v)` with `u < v`, sorted
//! lexicographically; the position of an edge in that list is its canonical
//! index, used by the tying maps, the simulator and the CSV output.

mod enumerate;
mod graph6;

pub use enumerate::{all_graphs, canonical_form, connected_graphs, MAX_ENUMERATION_VERTICES};
pub use graph6::{
    encode_graph6, parse_corpus, parse_graph6, read_corpus, CorpusEntry, Graph6Error, MAX_GRAPH6_VERTICES,
};

use thiserror::Error;

/// Largest vertex count the bitmask adjacency supports.
pub const MAX_VERTICES: usize = 64;

/// Largest vertex count `exact_max_cut` will enumerate (2^n assignments).
pub const MAX_CUT_VERTEX_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph has {n} vertices, limit is {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("family {kind} needs at least {min} vertices, got {n}")]
    FamilyTooSmall { kind: &'static str, n: usize, min: usize },
}

/// Immutable simple undirected graph with canonical edge ordering.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an arbitrary edge list. Endpoints may be given in
    /// either order; the stored list is normalized and sorted.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        if n > MAX_VERTICES {
            return Err(GraphError::TooManyVertices { n, limit: MAX_VERTICES });
        }
        let mut adj = vec![0u64; n];
        let mut list = Vec::new();
        for (a, b) in edges {
            if a >= n || b >= n {
                return Err(GraphError::EndpointOutOfRange { u: a, v: b, n });
            }
            if a == b {
                return Err(GraphError::SelfLoop(a));
            }
            let (u, v) = if a < b { (a, b) } else { (b, a) };
            if adj[u] >> v & 1 == 1 {
                return Err(GraphError::DuplicateEdge(u, v));
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
            list.push((u, v));
        }
        list.sort_unstable();
        Ok(Graph { n, edges: list, adj })
    }

    /// Builds a graph from adjacency bitmasks (row `v` has bit `u` set iff
    /// `uv` is an edge). Rows must be symmetric with empty diagonal.
    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Self {
        let n = adj.len();
        let mut edges = Vec::new();
        for u in 0..n {
            debug_assert_eq!(adj[u] >> u & 1, 0);
            for v in (u + 1)..n {
                if adj[u] >> v & 1 == 1 {
                    debug_assert_eq!(adj[v] >> u & 1, 1);
                    edges.push((u, v));
                }
            }
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (lexicographic) order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] >> v & 1 == 1
    }

    /// Neighbourhood of `v` as a bitmask.
    pub fn neighbors_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    /// Canonical index of edge `{u, v}`, if present.
    pub fn edge_index(&self, u: usize, v: usize) -> Option<usize> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok()
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let all = if self.n == 64 { u64::MAX } else { (1u64 << self.n) - 1 };
        let mut seen = 1u64;
        let mut frontier = 1u64;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let v = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= self.adj[v];
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & all == all
    }

    /// Number of edges cut by `assignment` (bit `v` = side of vertex `v`).
    pub fn cut_value(&self, assignment: u64) -> usize {
        self.edges.iter().filter(|&&(u, v)| (assignment >> u ^ assignment >> v) & 1 == 1).count()
    }
}

/// A cut and the assignment that realizes it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CutValue {
    pub value: usize,
    pub assignment: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Star,
    Cycle,
    Path,
    Complete,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Star => "star",
            Family::Cycle => "cycle",
            Family::Path => "path",
            Family::Complete => "complete",
        }
    }
}

/// Named graph families. `star(n)` has center 0; `cycle(n)` has edges
/// `(i, i+1 mod n)` (for `n = 2` that is the single edge).
pub fn make_family(kind: Family, n: usize) -> Result<Graph, GraphError> {
    if n < 2 {
        return Err(GraphError::FamilyTooSmall { kind: kind.name(), n, min: 2 });
    }
    match kind {
        Family::Star => Graph::new(n, (1..n).map(|v| (0, v))),
        Family::Path => Graph::new(n, (1..n).map(|v| (v - 1, v))),
        Family::Cycle if n == 2 => Graph::new(2, [(0, 1)]),
        Family::Cycle => Graph::new(n, (0..n).map(|v| (v, (v + 1) % n))),
        Family::Complete => Graph::new(n, (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v)))),
    }
}

pub fn star(n: usize) -> Result<Graph, GraphError> {
    make_family(Family::Star, n)
}

pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    make_family(Family::Cycle, n)
}

pub fn path(n: usize) -> Result<Graph, GraphError> {
    make_family(Family::Path, n)
}

pub fn complete(n: usize) -> Result<Graph, GraphError> {
    make_family(Family::Complete, n)
}

/// Maximum cut by exhaustive enumeration. The witness is the numerically
/// smallest maximizing assignment.
pub fn exact_max_cut(g: &Graph) -> Result<CutValue, GraphError> {
    let n = g.n();
    if n > MAX_CUT_VERTEX_LIMIT {
        return Err(GraphError::TooManyVertices { n, limit: MAX_CUT_VERTEX_LIMIT });
    }
    let mask = (1u64 << n) - 1;
    let mut best = CutValue { value: 0, assignment: 0 };
    for x in 0..(1u64 << n) {
        // each cut edge counted once, from its endpoint inside x
        let mut value = 0u32;
        let mut inside = x;
        while inside != 0 {
            let v = inside.trailing_zeros() as usize;
            inside &= inside - 1;
            value += (g.adj[v] & !x & mask).count_ones();
        }
        if value as usize > best.value {
            best = CutValue { value: value as usize, assignment: x };
        }
    }
    Ok(best)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::new(3, [(1, 1)]), Err(GraphError::SelfLoop(1)));
        assert_eq!(Graph::new(3, [(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert!(matches!(Graph::new(3, [(0, 3)]), Err(GraphError::EndpointOutOfRange { .. })));
    }

    #[test]
    fn edges_are_canonical() {
        let g = Graph::new(4, [(3, 2), (1, 0), (0, 3), (2, 1)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(g.edge_index(3, 0), Some(1));
        assert_eq!(g.edge_index(0, 2), None);
    }

    #[test]
    fn families() {
        assert_eq!(star(4).unwrap().edges(), &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(cycle(4).unwrap().edges(), &[(0, 1), (0, 3), (1, 2), (2, 3)]);
        assert_eq!(complete(3).unwrap().edges(), &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(path(3).unwrap().edges(), &[(0, 1), (1, 2)]);
        assert!(matches!(star(1), Err(GraphError::FamilyTooSmall { .. })));
    }

    #[test]
    fn max_cut_examples() {
        assert_eq!(exact_max_cut(&complete(3).unwrap()).unwrap().value, 2);
        let s = exact_max_cut(&star(5).unwrap()).unwrap();
        assert_eq!(s.value, 4);
        // lowest maximizer: only the center on side 1
        assert_eq!(s.assignment, 0b00001);
        assert_eq!(exact_max_cut(&cycle(5).unwrap()).unwrap().value, 4);
        assert_eq!(exact_max_cut(&Graph::new(3, []).unwrap()).unwrap(), CutValue { value: 0, assignment: 0 });
    }

    #[test]
    fn max_cut_refuses_large() {
        let g = Graph::new(25, []).unwrap();
        assert_eq!(exact_max_cut(&g), Err(GraphError::TooManyVertices { n: 25, limit: MAX_CUT_VERTEX_LIMIT }));
    }

    #[test]
    fn connectivity() {
        assert!(path(5).unwrap().is_connected());
        assert!(!Graph::new(3, [(0, 1)]).unwrap().is_connected());
    }

    pub(crate) fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (2..=max_n).prop_flat_map(|n| {
            let pairs = n * (n - 1) / 2;
            proptest::collection::vec(any::<bool>(), pairs).prop_map(move |bits| {
                let mut edges = Vec::new();
                let mut k = 0;
                for u in 0..n {
                    for v in (u + 1)..n {
                        if bits[k] {
                            edges.push((u, v));
                        }
                        k += 1;
                    }
                }
                Graph::new(n, edges).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn max_cut_lower_bound_and_witness(g in arb_graph(10)) {
            let best = exact_max_cut(&g).unwrap();
            prop_assert!(2 * best.value >= g.num_edges());
            prop_assert_eq!(g.cut_value(best.assignment), best.value);
            // no strictly better or smaller tied assignment
            for x in 0..(1u64 << g.n()) {
                let c = g.cut_value(x);
                prop_assert!(c <= best.value);
                if c == best.value { prop_assert!(x >= best.assignment); }
            }
        }
    }
}
