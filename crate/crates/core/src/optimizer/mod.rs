//! Derivative-free maximization with seeded multistart.
//!
//! Local searches use Nelder–Mead. Random starts are drawn uniformly from the
//! objective's box; each restart has its own RNG seeded by [`restart_seed`], so
//! a run is reproducible from one base seed.

mod nelder_mead;

pub use nelder_mead::{nelder_mead, LocalResult, INITIAL_STEP};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

pub const DEFAULT_RESTARTS: usize = 10;
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default per-start evaluation budget is this times the dimension.
pub const DEFAULT_EVALS_PER_DIM: usize = 1000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptError {
    #[error("objective has no parameters")]
    EmptyDomain,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("at least one restart is required")]
    NoRestarts,
    #[error("objective returned {value} at {x:?}")]
    NonFinite { x: Vec<f64>, value: f64 },
    #[error("start point has length {got}, objective has dimension {expected}")]
    StartLength { expected: usize, got: usize },
    #[error("all {0} starts aborted; last error: {1}")]
    AllAborted(usize, Box<OptError>),
}

/// A deterministic objective with a sampling box for random starts.
pub struct ObjectiveSpec<F> {
    /// Half-open `[lo, hi)` interval per parameter.
    pub bounds: Vec<(f64, f64)>,
    pub evaluate: F,
}

impl<F: FnMut(&[f64]) -> f64> ObjectiveSpec<F> {
    pub fn new(bounds: Vec<(f64, f64)>, evaluate: F) -> Self {
        ObjectiveSpec { bounds, evaluate }
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultistartConfig {
    pub restarts: usize,
    pub seed: u64,
    pub tol: f64,
    /// `None` means `DEFAULT_EVALS_PER_DIM * dim`.
    pub max_evals_per_start: Option<usize>,
}

impl Default for MultistartConfig {
    fn default() -> Self {
        MultistartConfig { restarts: DEFAULT_RESTARTS, seed: 0, tol: DEFAULT_TOL, max_evals_per_start: None }
    }
}

impl MultistartConfig {
    pub fn budget(&self, dim: usize) -> usize {
        self.max_evals_per_start.unwrap_or(DEFAULT_EVALS_PER_DIM * dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StartKind {
    Random,
    Warm,
}

/// Outcome of one local search.
#[derive(Debug, Clone, PartialEq)]
pub struct StartRecord {
    pub kind: StartKind,
    pub x0: Vec<f64>,
    pub result: Result<LocalResult, OptError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    /// Objective calls over all starts, including the final re-evaluation.
    pub evaluations: usize,
    /// Starts that ran (random and warm), aborted ones included.
    pub restarts_used: usize,
    pub starts: Vec<StartRecord>,
}

/// Runs Nelder–Mead from `cfg.restarts` uniform random starts, then from each
/// warm start, and returns the best point. The best value is re-evaluated at
/// the returned parameters. Ties keep the earliest start.
pub fn multistart_optimize<F>(
    obj: &mut ObjectiveSpec<F>,
    cfg: &MultistartConfig,
    warm_starts: &[Vec<f64>],
) -> Result<OptResult, OptError>
where
    F: FnMut(&[f64]) -> f64,
{
    let dim = obj.dim();
    if dim == 0 {
        return Err(OptError::EmptyDomain);
    }
    if cfg.restarts == 0 {
        return Err(OptError::NoRestarts);
    }
    for w in warm_starts {
        if w.len() != dim {
            return Err(OptError::StartLength { expected: dim, got: w.len() });
        }
    }
    let budget = cfg.budget(dim);
    let mut starts = Vec::with_capacity(cfg.restarts + warm_starts.len());
    let random = (0..cfg.restarts).map(|i| (StartKind::Random, sample_start(&obj.bounds, restart_seed(cfg.seed, i))));
    let warm = warm_starts.iter().map(|w| (StartKind::Warm, w.clone()));
    let mut evaluations = 0;
    let mut best: Option<LocalResult> = None;
    for (kind, x0) in random.chain(warm).collect::<Vec<_>>() {
        let result = nelder_mead(&mut obj.evaluate, &x0, cfg.tol, budget);
        match &result {
            Ok(r) => {
                evaluations += r.evaluations;
                if best.as_ref().is_none_or(|b| r.value > b.value) {
                    best = Some(r.clone());
                }
            }
            Err(e) => log::warn!("start {} aborted: {e}", starts.len()),
        }
        starts.push(StartRecord { kind, x0, result });
    }
    let Some(best) = best else {
        let last = starts.last().and_then(|s| s.result.clone().err()).expect("every start failed");
        return Err(OptError::AllAborted(starts.len(), Box::new(last)));
    };
    let best_value = (obj.evaluate)(&best.x);
    Ok(OptResult { best_params: best.x, best_value, evaluations: evaluations + 1, restarts_used: starts.len(), starts })
}

fn sample_start(bounds: &[(f64, f64)], seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    bounds.iter().map(|&(lo, hi)| rng.random_range(lo..hi)).collect()
}

/// SplitMix64 finalizer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// 64-bit FNV-1a.
pub fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Seed of one (graph, label) stream: `splitmix64(splitmix64(splitmix64(master)
/// ^ fnv1a(graph6)) ^ fnv1a(label))`.
pub fn stream_seed(master: u64, graph6: &str, label: &str) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ fnv1a(graph6.as_bytes())) ^ fnv1a(label.as_bytes()))
}

/// Seed of restart `i` within a stream: `splitmix64(stream ^ i)`.
pub fn restart_seed(stream: u64, i: usize) -> u64 {
    splitmix64(stream ^ i as u64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{complete, star};
    use crate::simulator::CircuitEvaluator;
    use crate::tying::ParameterTying;
    use std::f64::consts::PI;

    fn circuit_objective(
        g: &crate::graphs::Graph,
        t: ParameterTying,
        p: usize,
    ) -> ObjectiveSpec<impl FnMut(&[f64]) -> f64> {
        let bounds = t.sampling_box(p);
        let mut ev = CircuitEvaluator::new(g, t, p).unwrap();
        ObjectiveSpec::new(bounds, move |x: &[f64]| ev.evaluate(x).unwrap())
    }

    #[test]
    fn seed_helpers() {
        // reference values of the published algorithms
        assert_eq!(fnv1a(b""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a(b"a"), 0xaf63_dc4c_8601_ec8c);
        assert_eq!(splitmix64(0), 0xe220_a839_7b1d_cdaf);
        assert_ne!(stream_seed(1, "A_", "ma"), stream_seed(1, "A_", "qaoa"));
        assert_ne!(restart_seed(5, 0), restart_seed(5, 1));
    }

    #[test]
    fn k2_reaches_one_from_any_start() {
        let k2 = complete(2).unwrap();
        let mut obj = circuit_objective(&k2, ParameterTying::plain_qaoa(&k2), 1);
        for seed in 0..20 {
            let cfg = MultistartConfig { restarts: 1, seed, ..Default::default() };
            let r = multistart_optimize(&mut obj, &cfg, &[]).unwrap();
            assert!((r.best_value - 1.0).abs() < 1e-6, "seed {seed}: {}", r.best_value);
            let (g, b) = (r.best_params[0], r.best_params[1]);
            assert!((0.5 + 0.5 * (4.0 * b).sin() * g.sin() - r.best_value).abs() < 1e-12);
        }
    }

    #[test]
    fn single_restart_is_nelder_mead_from_seeded_start() {
        let k2 = complete(2).unwrap();
        let mut obj = circuit_objective(&k2, ParameterTying::plain_qaoa(&k2), 1);
        let cfg = MultistartConfig { restarts: 1, seed: 9, ..Default::default() };
        let r = multistart_optimize(&mut obj, &cfg, &[]).unwrap();
        let x0 = sample_start(&obj.bounds, restart_seed(9, 0));
        assert_eq!(r.starts[0].x0, x0);
        let local = nelder_mead(&mut obj.evaluate, &x0, cfg.tol, cfg.budget(2)).unwrap();
        assert_eq!(local.x, r.best_params);
        assert_eq!(local.value.to_bits(), r.best_value.to_bits());
    }

    #[test]
    fn deterministic_and_monotone() {
        let g = star(5).unwrap();
        let run = || {
            let mut obj = circuit_objective(&g, ParameterTying::ma(&g), 1);
            multistart_optimize(&mut obj, &MultistartConfig { restarts: 4, seed: 77, ..Default::default() }, &[])
                .unwrap()
        };
        let (a, b) = (run(), run());
        assert_eq!(a, b);
        for s in &a.starts {
            assert!(s.result.as_ref().unwrap().value <= a.best_value);
        }
        assert_eq!(a.restarts_used, 4);
    }

    #[test]
    fn star5_ma_is_exact() {
        let g = star(5).unwrap();
        let mut obj = circuit_objective(&g, ParameterTying::ma(&g), 1);
        let r = multistart_optimize(&mut obj, &MultistartConfig { seed: 1, ..Default::default() }, &[]).unwrap();
        assert!((r.best_value - 4.0).abs() < 1e-3, "{}", r.best_value);
        assert_eq!(r.restarts_used, DEFAULT_RESTARTS);
    }

    #[test]
    fn shift_invariance_of_optimum() {
        let g = star(4).unwrap();
        let t = ParameterTying::ma(&g);
        let (ng, nb) = (t.num_gamma, t.num_beta);
        let mut obj = circuit_objective(&g, t, 2);
        let r = multistart_optimize(&mut obj, &MultistartConfig { restarts: 2, seed: 4, ..Default::default() }, &[])
            .unwrap();
        for i in 0..r.best_params.len() {
            let mut x = r.best_params.clone();
            x[i] += if i % (ng + nb) < ng { 2.0 * PI } else { PI };
            assert!(((obj.evaluate)(&x) - r.best_value).abs() < 1e-9);
        }
    }

    #[test]
    fn warm_start_dominates_embedded_optimum() {
        let g = star(6).unwrap();
        let q = ParameterTying::plain_qaoa(&g);
        let ma = ParameterTying::ma(&g);
        let mut tied = circuit_objective(&g, q.clone(), 1);
        let cfg = MultistartConfig { restarts: 3, seed: 2, ..Default::default() };
        let rq = multistart_optimize(&mut tied, &cfg, &[]).unwrap();
        let lifted = ma.lift_from(&q, &rq.best_params, 1).unwrap();
        let mut obj = circuit_objective(&g, ma, 1);
        let cfg = MultistartConfig { restarts: 1, seed: 3, ..Default::default() };
        let r = multistart_optimize(&mut obj, &cfg, &[lifted]).unwrap();
        assert!(r.best_value >= rq.best_value - 1e-9);
        assert_eq!(r.starts[1].kind, StartKind::Warm);
    }

    #[test]
    fn total_failure_is_an_error() {
        let mut obj = ObjectiveSpec::new(vec![(0.0, 1.0)], |_: &[f64]| f64::INFINITY);
        let err = multistart_optimize(&mut obj, &MultistartConfig { restarts: 2, ..Default::default() }, &[]);
        assert!(matches!(err, Err(OptError::AllAborted(2, _))));
        let mut obj = ObjectiveSpec::new(vec![(0.0, 1.0)], |x: &[f64]| -x[0] * x[0]);
        let cfg = MultistartConfig { restarts: 0, ..Default::default() };
        assert_eq!(multistart_optimize(&mut obj, &cfg, &[]), Err(OptError::NoRestarts));
    }
}
