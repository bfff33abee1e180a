//! Evaluation quantities: approximation ratio `r`, objective-gap ratio `k`,
//! parameter-reduction ratio `l`, and per-scheme corpus aggregates.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::harness::{RunRecord, FLAG_DEGENERATE, FLAG_NO_REDUCTION};
use crate::tying::Scheme;

/// Objective differences at or below this count as equal (`k = 0`).
pub const K_ZERO_TOL: f64 = 1e-6;
/// `|f_ma − f_qaoa|` below this leaves `k` undefined.
pub const DEGENERATE_TOL: f64 = 1e-9;
pub const HISTOGRAM_BIN_WIDTH: f64 = 0.05;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("approximation ratio undefined for a graph with maximum cut 0")]
    ZeroMaxCut,
    #[error("l ratio undefined for |E| + |V| = {0}")]
    DegenerateL(usize),
    #[error("orbit counts ({orbits}) exceed graph counts ({items})")]
    TooManyOrbits { orbits: usize, items: usize },
}

pub fn approx_ratio(found: f64, exact: usize) -> Result<f64, MetricsError> {
    if exact == 0 {
        return Err(MetricsError::ZeroMaxCut);
    }
    Ok(found / exact as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KRatio {
    Value(f64),
    Degenerate,
}

impl KRatio {
    pub fn value(self) -> Option<f64> {
        match self {
            KRatio::Value(k) => Some(k),
            KRatio::Degenerate => None,
        }
    }
}

/// `(f_ma − f_variant) / (f_ma − f_qaoa)`; 0 when the numerator is within
/// [`K_ZERO_TOL`].
pub fn k_ratio(f_ma: f64, f_variant: f64, f_qaoa: f64) -> KRatio {
    let den = f_ma - f_qaoa;
    if den.abs() < DEGENERATE_TOL {
        return KRatio::Degenerate;
    }
    let num = f_ma - f_variant;
    if num.abs() <= K_ZERO_TOL {
        KRatio::Value(0.0)
    } else {
        KRatio::Value(num / den)
    }
}

/// `(|E| + |V| − (|O_e| + |O_v|)) / (|E| + |V| − 2)`.
pub fn l_ratio(
    num_edges: usize,
    num_vertices: usize,
    edge_orbits: usize,
    vertex_orbits: usize,
) -> Result<f64, MetricsError> {
    let items = num_edges + num_vertices;
    if items <= 2 {
        return Err(MetricsError::DegenerateL(items));
    }
    let orbits = edge_orbits + vertex_orbits;
    if orbits > items {
        return Err(MetricsError::TooManyOrbits { orbits, items });
    }
    Ok((items - orbits) as f64 / (items - 2) as f64)
}

/// Sparse histogram with fixed-width bins `[i·w, (i+1)·w)`.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Histogram {
    pub counts: BTreeMap<i64, usize>,
}

impl Histogram {
    pub fn add(&mut self, x: f64) {
        // nudge so values like 0.15 are not pushed down by representation error
        let bin = (x / HISTOGRAM_BIN_WIDTH + 1e-9).floor() as i64;
        *self.counts.entry(bin).or_default() += 1;
    }

    pub fn total(&self) -> usize {
        self.counts.values().sum()
    }

    /// `(lo, hi, count)` per nonempty bin, ascending.
    pub fn bins(&self) -> impl Iterator<Item = (f64, f64, usize)> + '_ {
        self.counts.iter().map(|(&i, &c)| (i as f64 * HISTOGRAM_BIN_WIDTH, (i + 1) as f64 * HISTOGRAM_BIN_WIDTH, c))
    }
}

/// Corpus statistics for one scheme.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchemeSummary {
    pub scheme: Scheme,
    pub records: usize,
    /// Records with a defined `k`.
    pub k_defined: usize,
    pub frac_k_zero: f64,
    pub k_positive: usize,
    pub mean_k_positive: f64,
    pub mean_l: f64,
    /// Mean `l` over records with `k > 0`.
    pub mean_l_k_positive: f64,
    /// Mean `(f_ma − f)/f_ma` over records with `k > 0`.
    pub mean_rel_decrease_k_positive: f64,
    pub mean_r: f64,
    pub degenerate: usize,
    pub no_reduction: usize,
    /// Records using fewer parameters than ma on the same graph.
    pub fewer_params_than_ma: usize,
    #[serde(skip)]
    pub k_histogram: Histogram,
    /// Histogram of `r_ma − r`.
    #[serde(skip)]
    pub r_diff_histogram: Histogram,
}

fn mean(xs: &[f64]) -> f64 {
    if xs.is_empty() {
        f64::NAN
    } else {
        xs.iter().sum::<f64>() / xs.len() as f64
    }
}

/// Per-scheme summaries in [`Scheme::ALL`] order. Input order does not
/// matter: records are sorted by `(graph_id, scheme)` first.
pub fn aggregate(records: &[RunRecord]) -> Vec<SchemeSummary> {
    let mut sorted: Vec<&RunRecord> = records.iter().collect();
    sorted.sort_by_key(|r| (r.graph_id, r.scheme));
    let ma: BTreeMap<usize, &RunRecord> =
        sorted.iter().filter(|r| r.scheme == Scheme::Ma).map(|r| (r.graph_id, *r)).collect();

    let mut out = Vec::new();
    for scheme in Scheme::ALL {
        let rows: Vec<&RunRecord> = sorted.iter().filter(|r| r.scheme == scheme).copied().collect();
        if rows.is_empty() {
            continue;
        }
        let ks: Vec<f64> = rows.iter().filter_map(|r| r.k).collect();
        let positive: Vec<&RunRecord> = rows.iter().filter(|r| r.k.is_some_and(|k| k > 0.0)).copied().collect();
        let ls: Vec<f64> = rows.iter().filter_map(|r| r.l).collect();
        let mut k_histogram = Histogram::default();
        ks.iter().for_each(|&k| k_histogram.add(k));
        let mut r_diff_histogram = Histogram::default();
        let mut decrease = Vec::new();
        let mut fewer = 0;
        for r in &rows {
            if let Some(m) = ma.get(&r.graph_id) {
                r_diff_histogram.add(m.r - r.r);
                fewer += usize::from(r.num_params < m.num_params);
            }
        }
        for r in &positive {
            if let Some(m) = ma.get(&r.graph_id) {
                decrease.push((m.best_expectation - r.best_expectation) / m.best_expectation);
            }
        }
        out.push(SchemeSummary {
            scheme,
            records: rows.len(),
            k_defined: ks.len(),
            frac_k_zero: ks.iter().filter(|&&k| k == 0.0).count() as f64 / ks.len() as f64,
            k_positive: positive.len(),
            mean_k_positive: mean(&positive.iter().filter_map(|r| r.k).collect::<Vec<_>>()),
            mean_l: mean(&ls),
            mean_l_k_positive: mean(&positive.iter().filter_map(|r| r.l).collect::<Vec<_>>()),
            mean_rel_decrease_k_positive: mean(&decrease),
            mean_r: mean(&rows.iter().map(|r| r.r).collect::<Vec<_>>()),
            degenerate: rows.iter().filter(|r| r.has_flag(FLAG_DEGENERATE)).count(),
            no_reduction: rows.iter().filter(|r| r.has_flag(FLAG_NO_REDUCTION)).count(),
            fewer_params_than_ma: fewer,
            k_histogram,
            r_diff_histogram,
        });
    }
    out
}
