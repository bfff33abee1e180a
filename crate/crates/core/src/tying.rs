//! Parameter tying: which compact parameter drives each edge's γ and each
//! vertex's β.
//!
//! Compact vectors are layer-major; within a layer the `num_gamma` edge
//! parameters come first, then the `num_beta` vertex parameters.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graphs::Graph;
use crate::symmetry::OrbitPartition;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TyingError {
    #[error("compact vector has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("{which} indices are not contiguous from 0")]
    NonContiguous { which: &'static str },
    #[error("tying has {got} entries for {which}, graph has {expected}")]
    WrongShape { which: &'static str, expected: usize, got: usize },
    #[error("infeasible grouping: {target} groups for {items} {which}")]
    InfeasibleTarget { which: &'static str, target: usize, items: usize },
    #[error("angles differ inside one {which} group")]
    NotConstantOnGroups { which: &'static str },
    #[error("unknown scheme {0:?}")]
    UnknownScheme(String),
}

/// The algorithm variants compared in a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "qaoa")]
    Qaoa,
    #[serde(rename = "max-sym")]
    MaxSym,
    #[serde(rename = "best-1sym")]
    Best1Sym,
    #[serde(rename = "rand-group")]
    RandGroup,
    #[serde(rename = "ma")]
    Ma,
}

impl Scheme {
    pub const ALL: [Scheme; 5] = [Scheme::Qaoa, Scheme::MaxSym, Scheme::Best1Sym, Scheme::RandGroup, Scheme::Ma];

    pub fn as_str(self) -> &'static str {
        match self {
            Scheme::Qaoa => "qaoa",
            Scheme::Ma => "ma",
            Scheme::MaxSym => "max-sym",
            Scheme::Best1Sym => "best-1sym",
            Scheme::RandGroup => "rand-group",
        }
    }

    /// Schemes between plain QAOA and ma-QAOA.
    pub fn is_reduced(self) -> bool {
        matches!(self, Scheme::MaxSym | Scheme::Best1Sym | Scheme::RandGroup)
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Scheme {
    type Err = TyingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "qaoa" | "plain-qaoa" => Ok(Scheme::Qaoa),
            "ma" => Ok(Scheme::Ma),
            "max-sym" => Ok(Scheme::MaxSym),
            "best-1sym" | "one-sym" => Ok(Scheme::Best1Sym),
            "rand-group" => Ok(Scheme::RandGroup),
            other => Err(TyingError::UnknownScheme(other.to_string())),
        }
    }
}

/// Per-edge and per-vertex angles of one circuit layer.
#[derive(Debug, Clone, PartialEq)]
pub struct LayerAngles {
    pub gamma: Vec<f64>,
    pub beta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ParameterTying {
    pub scheme: Scheme,
    pub gamma_index: Vec<usize>,
    pub beta_index: Vec<usize>,
    pub num_gamma: usize,
    pub num_beta: usize,
}

fn count_contiguous(index: &[usize], which: &'static str) -> Result<usize, TyingError> {
    let k = index.iter().max().map_or(0, |m| m + 1);
    let mut used = vec![false; k];
    for &i in index {
        used[i] = true;
    }
    if used.iter().all(|&u| u) {
        Ok(k)
    } else {
        Err(TyingError::NonContiguous { which })
    }
}

impl ParameterTying {
    pub fn new(scheme: Scheme, gamma_index: Vec<usize>, beta_index: Vec<usize>) -> Result<Self, TyingError> {
        let num_gamma = count_contiguous(&gamma_index, "gamma")?;
        let num_beta = count_contiguous(&beta_index, "beta")?;
        Ok(ParameterTying { scheme, gamma_index, beta_index, num_gamma, num_beta })
    }

    /// One γ and one β shared by everything.
    pub fn plain_qaoa(g: &Graph) -> Self {
        ParameterTying {
            scheme: Scheme::Qaoa,
            gamma_index: vec![0; g.num_edges()],
            beta_index: vec![0; g.n()],
            num_gamma: usize::from(g.num_edges() > 0),
            num_beta: usize::from(g.n() > 0),
        }
    }

    /// Every edge and vertex independent.
    pub fn ma(g: &Graph) -> Self {
        ParameterTying {
            scheme: Scheme::Ma,
            gamma_index: (0..g.num_edges()).collect(),
            beta_index: (0..g.n()).collect(),
            num_gamma: g.num_edges(),
            num_beta: g.n(),
        }
    }

    /// Share angles along the orbits of `p`.
    pub fn from_partition(p: &OrbitPartition, scheme: Scheme) -> Self {
        ParameterTying {
            scheme,
            gamma_index: p.edge_orbit.clone(),
            beta_index: p.vertex_orbit.clone(),
            num_gamma: p.num_edge_orbits,
            num_beta: p.num_vertex_orbits,
        }
    }

    /// Uniformly random surjective grouping of the vertices into `target_v`
    /// groups and of the edges into `target_e` groups.
    pub fn random(g: &Graph, target_v: usize, target_e: usize, seed: u64) -> Result<Self, TyingError> {
        if target_v < 1 || target_v > g.n() {
            return Err(TyingError::InfeasibleTarget { which: "vertices", target: target_v, items: g.n() });
        }
        if target_e < 1 || target_e > g.num_edges() {
            return Err(TyingError::InfeasibleTarget { which: "edges", target: target_e, items: g.num_edges() });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let beta_index = random_surjection(g.n(), target_v, &mut rng);
        let gamma_index = random_surjection(g.num_edges(), target_e, &mut rng);
        Ok(ParameterTying {
            scheme: Scheme::RandGroup,
            gamma_index,
            beta_index,
            num_gamma: target_e,
            num_beta: target_v,
        })
    }

    pub fn per_layer(&self) -> usize {
        self.num_gamma + self.num_beta
    }

    pub fn num_params(&self, p: usize) -> usize {
        p * self.per_layer()
    }

    pub fn num_edges(&self) -> usize {
        self.gamma_index.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.beta_index.len()
    }

    /// Checks the tying has one entry per edge and per vertex of `g`.
    pub fn check_shape(&self, g: &Graph) -> Result<(), TyingError> {
        if self.gamma_index.len() != g.num_edges() {
            return Err(TyingError::WrongShape {
                which: "edges",
                expected: g.num_edges(),
                got: self.gamma_index.len(),
            });
        }
        if self.beta_index.len() != g.n() {
            return Err(TyingError::WrongShape { which: "vertices", expected: g.n(), got: self.beta_index.len() });
        }
        Ok(())
    }

    /// Multistart sampling box: `[0, 2π)` for γ parameters, `[0, π)` for β.
    pub fn sampling_box(&self, p: usize) -> Vec<(f64, f64)> {
        use std::f64::consts::PI;
        let layer =
            std::iter::repeat_n((0.0, 2.0 * PI), self.num_gamma).chain(std::iter::repeat_n((0.0, PI), self.num_beta));
        layer.cycle().take(self.num_params(p)).collect()
    }

    pub fn expand(&self, compact: &[f64], p: usize) -> Result<Vec<LayerAngles>, TyingError> {
        let mut out = vec![LayerAngles { gamma: vec![0.0; self.num_edges()], beta: vec![0.0; self.num_vertices()] }; p];
        self.expand_into(compact, &mut out)?;
        Ok(out)
    }

    /// Allocation-free `expand`; the layer count is `out.len()`.
    pub fn expand_into(&self, compact: &[f64], out: &mut [LayerAngles]) -> Result<(), TyingError> {
        let expected = self.num_params(out.len());
        if compact.len() != expected {
            return Err(TyingError::LengthMismatch { expected, got: compact.len() });
        }
        for (block, layer) in compact.chunks_exact(self.per_layer().max(1)).zip(out.iter_mut()) {
            let (gammas, betas) = block.split_at(self.num_gamma);
            for (g, &i) in layer.gamma.iter_mut().zip(&self.gamma_index) {
                *g = gammas[i];
            }
            for (b, &i) in layer.beta.iter_mut().zip(&self.beta_index) {
                *b = betas[i];
            }
        }
        Ok(())
    }

    /// Inverse of `expand` for angle arrays that are constant on every group
    /// (exact equality), e.g. an expanded optimum of a coarser tying.
    pub fn compress(&self, layers: &[LayerAngles]) -> Result<Vec<f64>, TyingError> {
        let mut out = Vec::with_capacity(self.num_params(layers.len()));
        for layer in layers {
            out.extend(gather(&layer.gamma, &self.gamma_index, self.num_gamma, "gamma")?);
            out.extend(gather(&layer.beta, &self.beta_index, self.num_beta, "beta")?);
        }
        Ok(out)
    }

    /// Re-expresses a compact vector of `coarser` in this tying. Requires
    /// that every group of `self` lies inside a group of `coarser`.
    pub fn lift_from(&self, coarser: &ParameterTying, compact: &[f64], p: usize) -> Result<Vec<f64>, TyingError> {
        self.compress(&coarser.expand(compact, p)?)
    }
}

fn gather(values: &[f64], index: &[usize], k: usize, which: &'static str) -> Result<Vec<f64>, TyingError> {
    let mut out: Vec<Option<f64>> = vec![None; k];
    for (&v, &i) in values.iter().zip(index) {
        match out[i] {
            None => out[i] = Some(v),
            Some(w) if w.to_bits() == v.to_bits() => {}
            Some(_) => return Err(TyingError::NotConstantOnGroups { which }),
        }
    }
    Ok(out.into_iter().map(|v| v.expect("contiguous groups")).collect())
}

/// Uniform draw from the labelled surjections `0..items -> 0..groups`.
///
/// Items are assigned in order. With `j` groups already hit and `r` items
/// left, the number of completions that hit every group is `f(r, j)`, where
/// `f(r, j) = j f(r-1, j) + (groups-j) f(r-1, j+1)` and `f(0, j) = [j = groups]`.
/// Choosing "reuse a hit group" with probability `j f(r-1, j) / f(r, j)` and
/// then a uniform label within the chosen kind yields the uniform law.
fn random_surjection<R: Rng>(items: usize, groups: usize, rng: &mut R) -> Vec<usize> {
    // ways[r][j], kept in f64: only ratios are used
    let mut ways = vec![vec![0f64; groups + 1]; items + 1];
    ways[0][groups] = 1.0;
    for r in 1..=items {
        for j in 0..=groups {
            let reuse = j as f64 * ways[r - 1][j];
            let fresh = if j < groups { (groups - j) as f64 * ways[r - 1][j + 1] } else { 0.0 };
            ways[r][j] = reuse + fresh;
        }
        // rescale the row to avoid overflow; ratios within a row are what matter
        let scale = ways[r].iter().cloned().fold(0.0, f64::max);
        if scale > 0.0 {
            ways[r].iter_mut().for_each(|w| *w /= scale);
        }
    }
    let mut labels = Vec::with_capacity(items);
    let mut hit: Vec<usize> = Vec::new();
    let mut unhit: Vec<usize> = (0..groups).collect();
    for r in (1..=items).rev() {
        let j = hit.len();
        let reuse = j as f64 * ways[r - 1][j];
        let fresh = if j < groups { (groups - j) as f64 * ways[r - 1][j + 1] } else { 0.0 };
        let label = if rng.random::<f64>() * (reuse + fresh) < reuse {
            hit[rng.random_range(0..j)]
        } else {
            let pick = rng.random_range(0..unhit.len());
            let l = unhit.swap_remove(pick);
            hit.push(l);
            l
        };
        labels.push(label);
    }
    labels
}
