use std::collections::HashSet;

use super::union_find::DisjointSet;
use super::{automorphism_group, is_automorphism, Permutation, SymmetryError};
use crate::graphs::Graph;

/// Vertex and edge orbits of a set of automorphisms.
///
/// Orbit ids are `0..k`, numbered by smallest member, so the orbit holding
/// vertex 0 (edge 0) is always orbit 0. Edge ids follow the graph's
/// canonical edge order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbitPartition {
    pub vertex_orbit: Vec<usize>,
    pub edge_orbit: Vec<usize>,
    pub num_vertex_orbits: usize,
    pub num_edge_orbits: usize,
}

impl OrbitPartition {
    /// Every vertex and every edge in its own orbit.
    pub fn discrete(g: &Graph) -> Self {
        OrbitPartition {
            vertex_orbit: (0..g.n()).collect(),
            edge_orbit: (0..g.num_edges()).collect(),
            num_vertex_orbits: g.n(),
            num_edge_orbits: g.num_edges(),
        }
    }

    pub fn is_discrete(&self) -> bool {
        self.num_vertex_orbits == self.vertex_orbit.len() && self.num_edge_orbits == self.edge_orbit.len()
    }

    /// Parameters per layer when angles are shared along these orbits.
    pub fn num_classes(&self) -> usize {
        self.num_vertex_orbits + self.num_edge_orbits
    }

    /// Image of this partition under the automorphism `tau`: vertex `tau(v)`
    /// takes the orbit of `v`, likewise for edges. Labels are renormalized.
    pub fn relabeled(&self, g: &Graph, tau: &Permutation) -> OrbitPartition {
        let mut vertex = vec![0; g.n()];
        for (v, &o) in self.vertex_orbit.iter().enumerate() {
            vertex[tau.apply(v)] = o;
        }
        let mut edge = vec![0; g.num_edges()];
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let image = g.edge_index(tau.apply(u), tau.apply(v)).expect("tau is an automorphism");
            edge[image] = self.edge_orbit[e];
        }
        let (vertex_orbit, num_vertex_orbits) = normalize(&vertex);
        let (edge_orbit, num_edge_orbits) = normalize(&edge);
        OrbitPartition { vertex_orbit, edge_orbit, num_vertex_orbits, num_edge_orbits }
    }
}

fn normalize(labels: &[usize]) -> (Vec<usize>, usize) {
    let mut map = std::collections::HashMap::new();
    let out = labels
        .iter()
        .map(|l| {
            let next = map.len();
            *map.entry(*l).or_insert(next)
        })
        .collect();
    (out, map.len())
}

/// Orbits of the group generated by `sigmas`: union `v` with `σ(v)` and
/// edge `uv` with `σ(u)σ(v)` for every σ, then take the classes.
pub fn orbits_of(g: &Graph, sigmas: &[Permutation]) -> Result<OrbitPartition, SymmetryError> {
    for s in sigmas {
        if !is_automorphism(g, s)? {
            return Err(SymmetryError::NotAutomorphism(s.clone()));
        }
    }
    let mut vertices = DisjointSet::new(g.n());
    let mut edges = DisjointSet::new(g.num_edges());
    for s in sigmas {
        for v in 0..g.n() {
            vertices.union(v, s.apply(v));
        }
        for (e, &(u, v)) in g.edges().iter().enumerate() {
            let image = g.edge_index(s.apply(u), s.apply(v)).expect("checked automorphism");
            edges.union(e, image);
        }
    }
    let (vertex_orbit, num_vertex_orbits) = vertices.labels();
    let (edge_orbit, num_edge_orbits) = edges.labels();
    Ok(OrbitPartition { vertex_orbit, edge_orbit, num_vertex_orbits, num_edge_orbits })
}

/// One partition per single automorphism, deduplicated, in order of first
/// appearance along the lexicographically sorted group. The first entry is
/// the discrete partition induced by the identity.
pub fn distinct_orbit_partitions(g: &Graph) -> Result<Vec<OrbitPartition>, SymmetryError> {
    let group = automorphism_group(g)?;
    partitions_of_elements(g, &group)
}

pub(crate) fn partitions_of_elements(g: &Graph, group: &[Permutation]) -> Result<Vec<OrbitPartition>, SymmetryError> {
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for sigma in group {
        let p = orbits_of(g, std::slice::from_ref(sigma))?;
        if seen.insert(p.clone()) {
            out.push(p);
        }
    }
    Ok(out)
}

/// Groups `partitions` into classes related by an automorphism in `group`
/// and returns the first member of each class with its class size (among
/// `partitions`). Partitions in one class give relabeled copies of the same
/// optimization landscape.
pub fn conjugacy_representatives(
    g: &Graph,
    group: &[Permutation],
    partitions: &[OrbitPartition],
) -> Vec<(OrbitPartition, usize)> {
    let mut class_of: std::collections::HashMap<OrbitPartition, usize> = Default::default();
    let mut reps: Vec<(OrbitPartition, usize)> = Vec::new();
    for p in partitions {
        if let Some(&c) = class_of.get(p) {
            reps[c].1 += 1;
            continue;
        }
        let c = reps.len();
        for tau in group {
            class_of.entry(p.relabeled(g, tau)).or_insert(c);
        }
        reps.push((p.clone(), 1));
    }
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete, cycle, path, star, Graph};
    use crate::symmetry::generator_set;
    use proptest::prelude::*;

    #[test]
    fn star_and_cycle_orbits() {
        let s4 = star(4).unwrap();
        let gens = generator_set(&automorphism_group(&s4).unwrap()).unwrap();
        let p = orbits_of(&s4, &gens).unwrap();
        assert_eq!((p.num_vertex_orbits, p.num_edge_orbits), (2, 1));
        assert_eq!(p.vertex_orbit, vec![0, 1, 1, 1]);

        let c4 = cycle(4).unwrap();
        let gens = generator_set(&automorphism_group(&c4).unwrap()).unwrap();
        let p = orbits_of(&c4, &gens).unwrap();
        assert_eq!((p.num_vertex_orbits, p.num_edge_orbits), (1, 1));
    }

    #[test]
    fn identity_gives_discrete() {
        let g = cycle(5).unwrap();
        let p = orbits_of(&g, &[Permutation::identity(5)]).unwrap();
        assert!(p.is_discrete());
        assert_eq!(p, OrbitPartition::discrete(&g));
        assert_eq!(orbits_of(&g, &[]).unwrap(), OrbitPartition::discrete(&g));
    }

    #[test]
    fn rejects_non_automorphism() {
        let g = path(3).unwrap();
        let bad = Permutation::new(vec![1, 0, 2]).unwrap();
        assert!(matches!(orbits_of(&g, &[bad]), Err(SymmetryError::NotAutomorphism(_))));
    }

    #[test]
    fn path_partitions() {
        let parts = distinct_orbit_partitions(&path(3).unwrap()).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].is_discrete());
        assert_eq!(parts[1].vertex_orbit, vec![0, 1, 0]);
        assert_eq!(parts[1].edge_orbit, vec![0, 0]);
    }

    #[test]
    fn asymmetric_graph_has_one_partition() {
        // smallest asymmetric graphs have 6 vertices
        let g = Graph::new(6, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4), (1, 5), (4, 5)]).unwrap();
        assert_eq!(automorphism_group(&g).unwrap().len(), 1);
        let parts = distinct_orbit_partitions(&g).unwrap();
        assert_eq!(parts.len(), 1);
        assert!(parts[0].is_discrete());
    }

    #[test]
    fn triangle_partitions_match_enumeration() {
        let k3 = complete(3).unwrap();
        let parts = distinct_orbit_partitions(&k3).unwrap();
        // enumerate all 6 permutations by hand: identity, 3 transpositions
        // (each its own labeling), two 3-cycles (same labeling)
        let mut expected = HashSet::new();
        for m in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let sigma = Permutation::new(m.to_vec()).unwrap();
            expected.insert(orbits_of(&k3, &[sigma]).unwrap());
        }
        assert_eq!(parts.len(), expected.len());
        assert_eq!(parts.len(), 5);
        let counts: Vec<_> = parts.iter().map(|p| (p.num_vertex_orbits, p.num_edge_orbits)).collect();
        assert!(counts.contains(&(3, 3)));
        assert!(counts.contains(&(2, 2)));
        assert!(counts.contains(&(1, 1)));
        // transpositions are conjugate: three classes up to symmetry
        let group = automorphism_group(&k3).unwrap();
        let reps = conjugacy_representatives(&k3, &group, &parts);
        let sizes: Vec<_> = reps.iter().map(|(p, c)| (p.num_vertex_orbits, *c)).collect();
        assert_eq!(sizes, vec![(3, 1), (2, 3), (1, 1)]);
    }

    #[test]
    fn full_group_and_generators_agree() {
        for g in crate::graphs::all_graphs(6).unwrap() {
            let group = automorphism_group(&g).unwrap();
            let gens = generator_set(&group).unwrap();
            let a = orbits_of(&g, &group).unwrap();
            let b = orbits_of(&g, &gens).unwrap();
            assert_eq!(a, b);
            assert_eq!(group.len() == 1, a.is_discrete());
        }
    }

    #[test]
    fn non_identity_moves_a_vertex() {
        for g in crate::graphs::all_graphs(5).unwrap() {
            for sigma in automorphism_group(&g).unwrap().iter().filter(|s| !s.is_identity()) {
                let p = orbits_of(&g, std::slice::from_ref(sigma)).unwrap();
                assert!(p.num_vertex_orbits < g.n());
            }
        }
    }

    proptest! {
        #[test]
        fn order_of_inducing_list_is_irrelevant(seed in any::<u64>()) {
            let graphs = crate::graphs::all_graphs(6).unwrap();
            let g = &graphs[(seed % graphs.len() as u64) as usize];
            let mut group = automorphism_group(g).unwrap();
            let a = orbits_of(g, &group).unwrap();
            let k = group.len();
            group.rotate_left((seed as usize / 7) % k);
            group.reverse();
            prop_assert_eq!(a, orbits_of(g, &group).unwrap());
        }
    }
}
