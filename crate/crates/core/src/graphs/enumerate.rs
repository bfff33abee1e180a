//! Exhaustive generation of non-isomorphic graphs on few vertices.
//!
//! Every graph on `n` vertices arises from a graph on `n - 1` vertices by
//! adding one vertex with some neighbourhood, so the classes on `n` vertices
//! are obtained by extending each class representative on `n - 1` vertices
//! in all `2^(n-1)` ways and deduplicating by canonical form.
//!
//! The canonical form is the lexicographically largest upper-triangle bit
//! string (graph6 pair order) over all vertex orders compatible with the
//! stable colour-refinement partition.

use std::collections::HashSet;

use super::{Graph, GraphError};

pub const MAX_ENUMERATION_VERTICES: usize = 9;

/// Stable colour refinement; colours are canonical ranks (isomorphism
/// invariant), starting from degrees.
fn refine(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    let mut colour: Vec<usize> = adj.iter().map(|r| r.count_ones() as usize).collect();
    let mut classes = usize::MAX;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| colour[u]).collect();
                nb.sort_unstable();
                (colour[v], nb)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        let next: Vec<usize> = sigs.iter().map(|s| distinct.binary_search(s).unwrap()).collect();
        let count = distinct.len();
        colour = next;
        if count == classes {
            return colour;
        }
        classes = count;
    }
}

struct Search<'a> {
    adj: &'a [u64],
    n: usize,
    total_bits: usize,
    /// allowed vertices at each position (mask of the position's cell)
    cell_at: Vec<u64>,
    perm: Vec<usize>,
    used: u64,
    best: Option<(u64, Vec<usize>)>,
}

impl Search<'_> {
    fn run(&mut self, pos: usize, prefix: u64) {
        if pos == self.n {
            if self.best.as_ref().is_none_or(|(b, _)| prefix > *b) {
                self.best = Some((prefix, self.perm.clone()));
            }
            return;
        }
        let mut candidates = self.cell_at[pos] & !self.used;
        while candidates != 0 {
            let w = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let mut code = prefix;
            for i in 0..pos {
                code = code << 1 | (self.adj[self.perm[i]] >> w & 1);
            }
            let len = pos * (pos + 1) / 2;
            if let Some((b, _)) = &self.best {
                if code < b >> (self.total_bits - len) {
                    continue;
                }
            }
            self.perm[pos] = w;
            self.used |= 1 << w;
            self.run(pos + 1, code);
            self.used &= !(1 << w);
        }
    }
}

/// Canonical relabeling of `g` and its code. Isomorphic graphs get equal
/// codes. Returns the relabeled graph (`new vertex i` = `old perm[i]`).
pub fn canonical_form(g: &Graph) -> (Graph, u64) {
    let n = g.n();
    assert!(n <= 11, "canonical code needs n(n-1)/2 <= 64 bits");
    let adj: Vec<u64> = (0..n).map(|v| g.neighbors_mask(v)).collect();
    let (code, perm) = canonical_code(&adj);
    let mut inv = vec![0; n];
    for (i, &v) in perm.iter().enumerate() {
        inv[v] = i;
    }
    let mut relabeled = vec![0u64; n];
    for u in 0..n {
        let mut row = adj[u];
        while row != 0 {
            let v = row.trailing_zeros() as usize;
            row &= row - 1;
            relabeled[inv[u]] |= 1 << inv[v];
        }
    }
    (Graph::from_adjacency(relabeled), code)
}

fn canonical_code(adj: &[u64]) -> (u64, Vec<usize>) {
    let n = adj.len();
    let colour = refine(adj);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| colour[v]);
    let cell_at: Vec<u64> =
        order.iter().map(|&v| (0..n).filter(|&u| colour[u] == colour[v]).fold(0u64, |m, u| m | 1 << u)).collect();
    let mut search =
        Search { adj, n, total_bits: n * n.saturating_sub(1) / 2, cell_at, perm: vec![0; n], used: 0, best: None };
    search.run(0, 0);
    search.best.expect("at least one ordering")
}

/// All graphs on `n` vertices up to isomorphism, each in canonical labeling,
/// sorted by edge count then canonical code.
pub fn all_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    if n > MAX_ENUMERATION_VERTICES {
        return Err(GraphError::TooManyVertices { n, limit: MAX_ENUMERATION_VERTICES });
    }
    let mut level: Vec<Vec<u64>> = vec![Vec::new()];
    for k in 1..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for base in &level {
            for nbhd in 0..(1u64 << (k - 1)) {
                let mut adj = base.clone();
                adj.push(nbhd);
                for (u, row) in adj.iter_mut().enumerate().take(k - 1) {
                    *row |= (nbhd >> u & 1) << (k - 1);
                }
                let g = Graph::from_adjacency(adj);
                let (canon, code) = canonical_form(&g);
                if seen.insert(code) {
                    next.push((canon.num_edges(), code, canon));
                }
            }
        }
        next.sort_by_key(|(m, code, _)| (*m, *code));
        level = next.into_iter().map(|(_, _, g)| (0..k).map(|v| g.neighbors_mask(v)).collect()).collect();
    }
    Ok(level.into_iter().map(Graph::from_adjacency).collect())
}

/// Connected graphs on `n` vertices up to isomorphism.
pub fn connected_graphs(n: usize) -> Result<Vec<Graph>, GraphError> {
    Ok(all_graphs(n)?.into_iter().filter(Graph::is_connected).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{cycle, path, star};

    #[test]
    fn known_counts() {
        // OEIS A000088 and A001349
        let all = [1, 1, 2, 4, 11, 34, 156, 1044];
        let connected = [1, 1, 1, 2, 6, 21, 112, 853];
        for n in 0..=7 {
            let graphs = all_graphs(n).unwrap();
            assert_eq!(graphs.len(), all[n], "n={n}");
            assert_eq!(graphs.iter().filter(|g| g.is_connected()).count(), connected[n], "n={n}");
        }
    }

    #[test]
    fn canonical_form_is_labeling_invariant() {
        // path 0-1-2-3 and a relabeled copy 2-0-3-1
        let a = path(4).unwrap();
        let b = Graph::new(4, [(2, 0), (0, 3), (3, 1)]).unwrap();
        assert_eq!(canonical_form(&a).1, canonical_form(&b).1);
        assert_ne!(canonical_form(&a).1, canonical_form(&star(4).unwrap()).1);
        let c = cycle(6).unwrap();
        let (canon, code) = canonical_form(&c);
        assert_eq!(canon.num_edges(), 6);
        assert_eq!(canonical_form(&canon).1, code);
    }

    #[test]
    fn rejects_large_n() {
        assert!(all_graphs(10).is_err());
    }
}
