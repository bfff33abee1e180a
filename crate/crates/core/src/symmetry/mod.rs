//! Graph automorphisms: brute-force group enumeration, generator sets and
//! the orbit partitions they induce on vertices and edges.

mod orbits;
mod union_find;

pub(crate) use orbits::partitions_of_elements;
pub use orbits::{conjugacy_representatives, distinct_orbit_partitions, orbits_of, OrbitPartition};

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::graphs::Graph;

/// Largest vertex count for exhaustive automorphism search.
pub const MAX_AUTOMORPHISM_VERTICES: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("permutation has length {got}, graph has {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("mapping is not a bijection on 0..{0}")]
    NotBijection(usize),
    #[error("graph has {n} vertices, automorphism search limit is {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("empty group")]
    EmptyGroup,
    #[error("permutation {0} is not an automorphism")]
    NotAutomorphism(Permutation),
}

/// A bijection on `0..n`; `mapping[v]` is the image of `v`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn new(mapping: Vec<usize>) -> Result<Self, SymmetryError> {
        let n = mapping.len();
        let mut seen = vec![false; n];
        for &v in &mapping {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(SymmetryError::NotBijection(n));
            }
        }
        Ok(Permutation(mapping))
    }

    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mapping(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, v: usize) -> usize {
        self.0[v]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &v)| i == v)
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&v| self.0[v]).collect())
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &v) in self.0.iter().enumerate() {
            inv[v] = i;
        }
        Permutation(inv)
    }

    /// Disjoint-cycle notation, fixed points omitted; `()` for the identity.
    pub fn cycle_notation(&self) -> String {
        let n = self.0.len();
        let mut seen = vec![false; n];
        let mut out = String::new();
        for start in 0..n {
            if seen[start] || self.0[start] == start {
                continue;
            }
            let mut cyc = vec![start];
            seen[start] = true;
            let mut v = self.0[start];
            while v != start {
                seen[v] = true;
                cyc.push(v);
                v = self.0[v];
            }
            let parts: Vec<String> = cyc.iter().map(|v| v.to_string()).collect();
            out.push('(');
            out.push_str(&parts.join(" "));
            out.push(')');
        }
        if out.is_empty() {
            out.push_str("()");
        }
        out
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.cycle_notation())
    }
}

pub fn is_automorphism(g: &Graph, sigma: &Permutation) -> Result<bool, SymmetryError> {
    if sigma.len() != g.n() {
        return Err(SymmetryError::LengthMismatch { expected: g.n(), got: sigma.len() });
    }
    // σ is a bijection, so edges mapping to edges is enough for "iff"
    Ok(g.edges().iter().all(|&(u, v)| g.has_edge(sigma.apply(u), sigma.apply(v))))
}

/// All automorphisms of `g` in lexicographic order of their mappings.
///
/// Backtracking assigns images of `0, 1, ...` in turn; a candidate image must
/// be unused, have the same degree, and agree on adjacency with every vertex
/// already placed.
pub fn automorphism_group(g: &Graph) -> Result<Vec<Permutation>, SymmetryError> {
    let n = g.n();
    if n > MAX_AUTOMORPHISM_VERTICES {
        return Err(SymmetryError::TooLarge { n, limit: MAX_AUTOMORPHISM_VERTICES });
    }
    let mut out = Vec::new();
    let mut mapping = vec![0usize; n];
    extend(g, 0, 0, &mut mapping, &mut out);
    Ok(out)
}

fn extend(g: &Graph, v: usize, used: u64, mapping: &mut [usize], out: &mut Vec<Permutation>) {
    let n = g.n();
    if v == n {
        out.push(Permutation(mapping.to_vec()));
        return;
    }
    for w in 0..n {
        if used >> w & 1 == 1 || g.degree(w) != g.degree(v) {
            continue;
        }
        let consistent = (0..v).all(|u| g.has_edge(u, v) == g.has_edge(mapping[u], w));
        if !consistent {
            continue;
        }
        mapping[v] = w;
        extend(g, v + 1, used | 1 << w, mapping, out);
    }
}

/// The subgroup generated by `gens` (as a set of mappings).
pub fn closure(gens: &[Permutation], n: usize) -> HashSet<Permutation> {
    let id = Permutation::identity(n);
    let mut seen: HashSet<Permutation> = HashSet::from([id.clone()]);
    let mut frontier = vec![id];
    while let Some(p) = frontier.pop() {
        for s in gens {
            let q = s.compose(&p);
            if !seen.contains(&q) {
                seen.insert(q.clone());
                frontier.push(q);
            }
        }
    }
    seen
}

/// Greedy generator set: scan the group in lexicographic order and keep
/// every element not yet in the closure of those kept. The identity is
/// returned only for the trivial group.
pub fn generator_set(group: &[Permutation]) -> Result<Vec<Permutation>, SymmetryError> {
    let first = group.first().ok_or(SymmetryError::EmptyGroup)?;
    let n = first.len();
    let mut sorted: Vec<&Permutation> = group.iter().collect();
    sorted.sort();
    let mut gens: Vec<Permutation> = Vec::new();
    let mut span = closure(&gens, n);
    for p in sorted {
        if p.is_identity() || span.contains(p) {
            continue;
        }
        gens.push(p.clone());
        span = closure(&gens, n);
        if span.len() == group.len() {
            break;
        }
    }
    if gens.is_empty() {
        gens.push(Permutation::identity(n));
    }
    Ok(gens)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete, cycle, path, star, Graph};

    fn perm(v: &[usize]) -> Permutation {
        Permutation::new(v.to_vec()).unwrap()
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::new(vec![0, 0]).is_err());
        assert!(Permutation::new(vec![0, 2]).is_err());
        assert!(perm(&[1, 2, 0]).compose(&perm(&[1, 2, 0]).inverse()).is_identity());
        assert_eq!(perm(&[1, 2, 0, 3, 5, 4]).to_string(), "(0 1 2)(4 5)");
        assert_eq!(Permutation::identity(3).to_string(), "()");
    }

    #[test]
    fn automorphism_checks() {
        let k3 = complete(3).unwrap();
        assert!(is_automorphism(&k3, &perm(&[1, 2, 0])).unwrap());
        let p3 = path(3).unwrap();
        assert!(is_automorphism(&p3, &perm(&[2, 1, 0])).unwrap());
        assert!(!is_automorphism(&p3, &perm(&[1, 0, 2])).unwrap());
        assert_eq!(is_automorphism(&p3, &perm(&[1, 0])), Err(SymmetryError::LengthMismatch { expected: 3, got: 2 }));
    }

    #[test]
    fn group_orders() {
        assert_eq!(automorphism_group(&complete(4).unwrap()).unwrap().len(), 24);
        assert_eq!(automorphism_group(&cycle(5).unwrap()).unwrap().len(), 10);
        let p3 = automorphism_group(&path(3).unwrap()).unwrap();
        assert_eq!(p3, vec![perm(&[0, 1, 2]), perm(&[2, 1, 0])]);
        assert_eq!(automorphism_group(&star(6).unwrap()).unwrap().len(), 120);
        assert!(matches!(automorphism_group(&Graph::new(13, []).unwrap()), Err(SymmetryError::TooLarge { .. })));
    }

    #[test]
    fn group_is_sorted_and_valid() {
        let g = cycle(6).unwrap();
        let group = automorphism_group(&g).unwrap();
        assert!(group.windows(2).all(|w| w[0] < w[1]));
        assert!(group[0].is_identity());
        for p in &group {
            assert!(is_automorphism(&g, p).unwrap());
        }
    }

    #[test]
    fn generators() {
        let p3 = automorphism_group(&path(3).unwrap()).unwrap();
        assert_eq!(generator_set(&p3).unwrap(), vec![perm(&[2, 1, 0])]);
        let trivial = vec![Permutation::identity(4)];
        assert_eq!(generator_set(&trivial).unwrap(), trivial);
        assert_eq!(generator_set(&[]), Err(SymmetryError::EmptyGroup));

        let c4 = automorphism_group(&cycle(4).unwrap()).unwrap();
        assert_eq!(c4.len(), 8);
        let gens = generator_set(&c4).unwrap();
        assert!(gens.len() <= 3);
        assert_eq!(brute_force_closure_size(&gens), 8);
    }

    /// Independent of `closure`: repeatedly multiply all pairs until stable.
    fn brute_force_closure_size(gens: &[Permutation]) -> usize {
        let mut set: HashSet<Permutation> = gens.iter().cloned().collect();
        set.insert(Permutation::identity(gens[0].len()));
        loop {
            let mut grown = set.clone();
            for a in &set {
                for b in &set {
                    grown.insert(a.compose(b));
                }
            }
            if grown.len() == set.len() {
                return set.len();
            }
            set = grown;
        }
    }

    #[test]
    fn generator_closure_equals_group_on_small_graphs() {
        for g in crate::graphs::all_graphs(6).unwrap() {
            let group = automorphism_group(&g).unwrap();
            let gens = generator_set(&group).unwrap();
            assert_eq!(brute_force_closure_size(&gens), group.len());
            let span = closure(&gens, g.n());
            assert!(group.iter().all(|p| span.contains(p)));
        }
    }
}
