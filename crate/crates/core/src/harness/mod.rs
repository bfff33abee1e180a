//! Corpus sweeps: build every scheme's tying for each graph, optimize it,
//! derive `r`, `k` and `l`, and persist the results.

mod record;
mod report;

pub use record::{
    read_records, write_records, write_timings, RunRecord, FLAG_DEGENERATE, FLAG_NO_REDUCTION, RESULTS_HEADER,
};
pub use report::{format_summary, write_histograms, write_summary_csv};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::graphs::{exact_max_cut, read_corpus, CorpusEntry, CutValue, Graph6Error, GraphError};
use crate::metrics::{self, approx_ratio, k_ratio, KRatio, MetricsError, K_ZERO_TOL};
use crate::optimizer::{
    multistart_optimize, stream_seed, MultistartConfig, ObjectiveSpec, OptError, OptResult, StartKind,
    DEFAULT_RESTARTS, DEFAULT_TOL,
};
use crate::simulator::{CircuitEvaluator, SimError};
use crate::symmetry::{
    automorphism_group, conjugacy_representatives, generator_set, orbits_of, partitions_of_elements, OrbitPartition,
    Permutation, SymmetryError,
};
use crate::tying::{ParameterTying, Scheme, TyingError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {message}")]
    Csv { path: String, message: String },
    #[error("{path}: expected header {RESULTS_HEADER:?}, found {found:?}")]
    BadHeader { path: String, found: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Corpus(#[from] Graph6Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error(transparent)]
    Tying(#[from] TyingError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, e: std::io::Error) -> Self {
        HarnessError::Io { path: path.display().to_string(), message: e.to_string() }
    }

    pub(crate) fn csv(path: &Path, e: csv::Error) -> Self {
        HarnessError::Csv { path: path.display().to_string(), message: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GraphFilter {
    #[default]
    All,
    /// Only graphs with a nontrivial automorphism group.
    NontrivialSym,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub corpus: PathBuf,
    /// Reduced schemes to run; `qaoa` and `ma` always run.
    pub schemes: Vec<Scheme>,
    pub p: usize,
    pub restarts: usize,
    pub tol: f64,
    /// Per-start evaluation budget; `None` is 1000 × dimension.
    pub max_evals: Option<usize>,
    pub seed: u64,
    pub workers: usize,
    pub out: PathBuf,
    pub filter: GraphFilter,
    pub warm_start: bool,
    /// Per-start JSON lines for debugging.
    pub debug: Option<PathBuf>,
    pub histograms: Option<PathBuf>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            corpus: PathBuf::new(),
            schemes: vec![Scheme::MaxSym],
            p: 1,
            restarts: DEFAULT_RESTARTS,
            tol: DEFAULT_TOL,
            max_evals: None,
            seed: 42,
            workers: 1,
            out: PathBuf::from("results.csv"),
            filter: GraphFilter::All,
            warm_start: true,
            debug: None,
            histograms: None,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.schemes.is_empty() {
            return Err(HarnessError::Config("no schemes given".into()));
        }
        if self.p == 0 {
            return Err(HarnessError::Config("p must be at least 1".into()));
        }
        if self.restarts == 0 {
            return Err(HarnessError::Config("restarts must be at least 1".into()));
        }
        if self.tol.is_nan() || self.tol <= 0.0 {
            return Err(HarnessError::Config(format!("tolerance must be positive, got {}", self.tol)));
        }
        if self.workers == 0 {
            return Err(HarnessError::Config("workers must be at least 1".into()));
        }
        Ok(())
    }

    /// Requested reduced schemes in canonical order, without duplicates.
    pub fn reduced_schemes(&self) -> Vec<Scheme> {
        Scheme::ALL.into_iter().filter(|s| s.is_reduced() && self.schemes.contains(s)).collect()
    }

    fn multistart(&self, seed: u64) -> MultistartConfig {
        MultistartConfig { restarts: self.restarts, seed, tol: self.tol, max_evals_per_start: self.max_evals }
    }
}

/// Everything about one graph that does not depend on optimization.
#[derive(Debug, Clone)]
pub struct GraphContext {
    pub entry: CorpusEntry,
    pub exact: CutValue,
    pub group: Vec<Permutation>,
    pub generators: Vec<Permutation>,
    pub max_sym: OrbitPartition,
}

impl GraphContext {
    pub fn new(entry: CorpusEntry) -> Result<Self, HarnessError> {
        let exact = exact_max_cut(&entry.graph)?;
        let group = automorphism_group(&entry.graph)?;
        let generators = generator_set(&group)?;
        let max_sym = orbits_of(&entry.graph, &generators)?;
        Ok(GraphContext { entry, exact, group, generators, max_sym })
    }

    pub fn group_order(&self) -> usize {
        self.group.len()
    }

    pub fn is_symmetric(&self) -> bool {
        self.group.len() > 1
    }
}

/// One optimized tying plus its provenance.
#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub tying: ParameterTying,
    pub result: OptResult,
    pub seed: u64,
    pub wall_ms: u64,
}

#[derive(Debug, Serialize)]
struct DebugLine<'a> {
    graph_id: usize,
    label: &'a str,
    start: usize,
    warm: bool,
    x0: &'a [f64],
    x: Option<&'a [f64]>,
    value: Option<f64>,
    evals: Option<usize>,
    error: Option<String>,
}

/// Per-graph runner; collects debug lines when requested.
struct Runner<'a> {
    ctx: &'a GraphContext,
    cfg: &'a SweepConfig,
    debug: Option<Vec<String>>,
}

impl Runner<'_> {
    fn optimize(&mut self, tying: ParameterTying, label: &str, warm: Vec<Vec<f64>>) -> Result<SchemeRun, HarnessError> {
        let start = Instant::now();
        let g = &self.ctx.entry.graph;
        let seed = stream_seed(self.cfg.seed, &self.ctx.entry.graph6, label);
        let mut ev = CircuitEvaluator::new(g, tying.clone(), self.cfg.p)?;
        let mut obj =
            ObjectiveSpec::new(tying.sampling_box(self.cfg.p), |x: &[f64]| ev.evaluate(x).unwrap_or(f64::NAN));
        let result = multistart_optimize(&mut obj, &self.cfg.multistart(seed), &warm)?;
        if let Some(lines) = &mut self.debug {
            for (i, s) in result.starts.iter().enumerate() {
                let ok = s.result.as_ref().ok();
                let line = DebugLine {
                    graph_id: self.ctx.entry.graph_id,
                    label,
                    start: i,
                    warm: s.kind == StartKind::Warm,
                    x0: &s.x0,
                    x: ok.map(|r| r.x.as_slice()),
                    value: ok.map(|r| r.value),
                    evals: ok.map(|r| r.evaluations),
                    error: s.result.as_ref().err().map(|e| e.to_string()),
                };
                lines.push(serde_json::to_string(&line).expect("debug line serializes"));
            }
        }
        Ok(SchemeRun { tying, result, seed, wall_ms: start.elapsed().as_millis() as u64 })
    }

    fn lift(&self, to: &ParameterTying, from: &SchemeRun) -> Result<Vec<f64>, HarnessError> {
        Ok(to.lift_from(&from.tying, &from.result.best_params, self.cfg.p)?)
    }

    fn warm_from(&self, to: &ParameterTying, from: &SchemeRun) -> Result<Vec<Vec<f64>>, HarnessError> {
        if self.cfg.warm_start {
            Ok(vec![self.lift(to, from)?])
        } else {
            Ok(Vec::new())
        }
    }

    fn run_qaoa(&mut self) -> Result<SchemeRun, HarnessError> {
        let t = ParameterTying::plain_qaoa(&self.ctx.entry.graph);
        self.optimize(t, Scheme::Qaoa.as_str(), Vec::new())
    }

    /// `None` when the tying coincides with ma (trivial group).
    fn run_max_sym(&mut self, qaoa: &SchemeRun) -> Result<Option<SchemeRun>, HarnessError> {
        if self.ctx.max_sym.is_discrete() {
            return Ok(None);
        }
        let t = ParameterTying::from_partition(&self.ctx.max_sym, Scheme::MaxSym);
        let warm = self.warm_from(&t, qaoa)?;
        self.optimize(t, Scheme::MaxSym.as_str(), warm).map(Some)
    }

    /// Optimizes one representative per conjugacy class of single-automorphism
    /// partitions and keeps the best (within the k = 0 tolerance, fewer
    /// parameters wins, then earlier). `None` if no automorphism reduces.
    fn run_best_1sym(&mut self, qaoa: &SchemeRun) -> Result<Option<SchemeRun>, HarnessError> {
        let g = &self.ctx.entry.graph;
        let candidates: Vec<OrbitPartition> =
            partitions_of_elements(g, &self.ctx.group)?.into_iter().filter(|p| !p.is_discrete()).collect();
        let reps = conjugacy_representatives(g, &self.ctx.group, &candidates);
        let mut best: Option<SchemeRun> = None;
        let (mut restarts, mut evals, start) = (0, 0, Instant::now());
        for (j, (part, _)) in reps.iter().enumerate() {
            let t = ParameterTying::from_partition(part, Scheme::Best1Sym);
            let warm = self.warm_from(&t, qaoa)?;
            let run = self.optimize(t, &format!("{}#{j}", Scheme::Best1Sym.as_str()), warm)?;
            restarts += run.result.restarts_used;
            evals += run.result.evaluations;
            let better = match &best {
                None => true,
                Some(b) => {
                    let (v, bv) = (run.result.best_value, b.result.best_value);
                    v > bv + K_ZERO_TOL || ((v - bv).abs() <= K_ZERO_TOL && run.tying.per_layer() < b.tying.per_layer())
                }
            };
            if better {
                best = Some(run);
            }
        }
        Ok(best.map(|mut b| {
            b.result.restarts_used = restarts;
            b.result.evaluations = evals;
            b.wall_ms = start.elapsed().as_millis() as u64;
            b
        }))
    }

    fn run_rand_group(&mut self, qaoa: &SchemeRun) -> Result<SchemeRun, HarnessError> {
        let ctx = self.ctx;
        let tying_seed = stream_seed(self.cfg.seed, &ctx.entry.graph6, "rand-group/tying");
        let t = ParameterTying::random(
            &ctx.entry.graph,
            ctx.max_sym.num_vertex_orbits,
            ctx.max_sym.num_edge_orbits,
            tying_seed,
        )?;
        let warm = self.warm_from(&t, qaoa)?;
        self.optimize(t, Scheme::RandGroup.as_str(), warm)
    }

    fn run_ma(&mut self, qaoa: &SchemeRun, tied: &[&SchemeRun]) -> Result<SchemeRun, HarnessError> {
        let t = ParameterTying::ma(&self.ctx.entry.graph);
        let mut warm = self.warm_from(&t, qaoa)?;
        if self.cfg.warm_start {
            for run in tied {
                warm.push(self.lift(&t, run)?);
            }
        }
        self.optimize(t, Scheme::Ma.as_str(), warm)
    }

    fn record(&self, scheme: Scheme, run: &SchemeRun) -> Result<RunRecord, HarnessError> {
        let g = &self.ctx.entry.graph;
        let value = run.result.best_value;
        Ok(RunRecord {
            graph_id: self.ctx.entry.graph_id,
            graph6: self.ctx.entry.graph6.clone(),
            n: g.n(),
            m: g.num_edges(),
            scheme,
            p: self.cfg.p,
            num_params: run.tying.num_params(self.cfg.p),
            best_expectation: value,
            exact_maxcut: self.ctx.exact.value,
            r: approx_ratio(value, self.ctx.exact.value)?,
            k: None,
            l: metrics::l_ratio(g.num_edges(), g.n(), run.tying.num_gamma, run.tying.num_beta).ok(),
            group_order: self.ctx.group_order(),
            num_vertex_orbits: run.tying.num_beta,
            num_edge_orbits: run.tying.num_gamma,
            restarts: run.result.restarts_used,
            evals: run.result.evaluations,
            seed: run.seed,
            flags: String::new(),
            wall_ms: run.wall_ms,
        })
    }
}

/// Runs `qaoa`, every requested reduced scheme and `ma` on one graph and
/// returns their records in [`Scheme::ALL`] order with `k` filled in.
/// Schemes whose tying coincides with ma reuse the ma result and carry
/// [`FLAG_NO_REDUCTION`].
pub fn run_graph(ctx: &GraphContext, cfg: &SweepConfig) -> Result<Vec<RunRecord>, HarnessError> {
    run_graph_with_debug(ctx, cfg).map(|(r, _)| r)
}

fn run_graph_with_debug(ctx: &GraphContext, cfg: &SweepConfig) -> Result<(Vec<RunRecord>, Vec<String>), HarnessError> {
    let mut runner = Runner { ctx, cfg, debug: cfg.debug.as_ref().map(|_| Vec::new()) };
    let qaoa = runner.run_qaoa()?;
    let mut tied: Vec<(Scheme, Option<SchemeRun>)> = Vec::new();
    for scheme in cfg.reduced_schemes() {
        let run = match scheme {
            Scheme::MaxSym => runner.run_max_sym(&qaoa)?,
            Scheme::Best1Sym => runner.run_best_1sym(&qaoa)?,
            Scheme::RandGroup => Some(runner.run_rand_group(&qaoa)?),
            Scheme::Qaoa | Scheme::Ma => unreachable!("not a reduced scheme"),
        };
        tied.push((scheme, run));
    }
    let warm_sources: Vec<&SchemeRun> = tied.iter().filter_map(|(_, r)| r.as_ref()).collect();
    let ma = runner.run_ma(&qaoa, &warm_sources)?;

    let mut records = vec![runner.record(Scheme::Qaoa, &qaoa)?];
    for (scheme, run) in &tied {
        let rec = match run {
            Some(run) => runner.record(*scheme, run)?,
            None => {
                let mut rec = runner.record(*scheme, &ma)?;
                rec.add_flag(FLAG_NO_REDUCTION);
                rec
            }
        };
        records.push(rec);
    }
    records.push(runner.record(Scheme::Ma, &ma)?);
    let (f_qaoa, f_ma) = (qaoa.result.best_value, ma.result.best_value);
    for rec in &mut records {
        match k_ratio(f_ma, rec.best_expectation, f_qaoa) {
            KRatio::Value(k) => rec.k = Some(k),
            KRatio::Degenerate => rec.add_flag(FLAG_DEGENERATE),
        }
    }
    Ok((records, runner.debug.unwrap_or_default()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraphFailure {
    pub graph_id: usize,
    pub graph6: String,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct SweepOutcome {
    /// Sorted by `(graph_id, scheme)`.
    pub records: Vec<RunRecord>,
    pub failures: Vec<GraphFailure>,
    pub graphs_selected: usize,
    pub debug_lines: Vec<String>,
}

/// Contexts of the entries passing `filter`; entries whose context cannot
/// be built are returned as failures.
pub fn select_graphs(entries: Vec<CorpusEntry>, filter: GraphFilter) -> (Vec<GraphContext>, Vec<GraphFailure>) {
    let mut selected = Vec::new();
    let mut failures = Vec::new();
    for entry in entries {
        let (graph_id, graph6) = (entry.graph_id, entry.graph6.clone());
        match GraphContext::new(entry) {
            Ok(ctx) if filter == GraphFilter::All || ctx.is_symmetric() => selected.push(ctx),
            Ok(_) => {}
            Err(e) => failures.push(GraphFailure { graph_id, graph6, error: e.to_string() }),
        }
    }
    (selected, failures)
}

/// Runs every graph on a pool of `cfg.workers` threads. Output does not
/// depend on the worker count.
pub fn sweep_graphs(graphs: &[GraphContext], cfg: &SweepConfig) -> Result<SweepOutcome, HarnessError> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| HarnessError::Config(e.to_string()))?;
    let results: Vec<_> = pool.install(|| graphs.par_iter().map(|ctx| run_graph_with_debug(ctx, cfg)).collect());
    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut debug_lines = Vec::new();
    for (ctx, res) in graphs.iter().zip(results) {
        match res {
            Ok((recs, lines)) => {
                records.extend(recs);
                debug_lines.extend(lines);
            }
            Err(e) => {
                log::error!("graph {} ({}): {e}", ctx.entry.graph_id, ctx.entry.graph6);
                failures.push(GraphFailure {
                    graph_id: ctx.entry.graph_id,
                    graph6: ctx.entry.graph6.clone(),
                    error: e.to_string(),
                });
            }
        }
    }
    records.sort_by_key(|r| (r.graph_id, r.scheme));
    Ok(SweepOutcome { records, failures, graphs_selected: graphs.len(), debug_lines })
}

/// Sidecar path next to the results file, e.g. `results.timing.csv`.
pub fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}.{suffix}"))
}

/// Reads the corpus, sweeps it and writes results, timings, summary and
/// (optionally) histograms and debug lines.
pub fn sweep(cfg: &SweepConfig) -> Result<SweepOutcome, HarnessError> {
    cfg.validate()?;
    let entries = read_corpus(&cfg.corpus)?;
    let (graphs, mut failures) = select_graphs(entries, cfg.filter);
    log::info!("{} graphs selected from {}", graphs.len(), cfg.corpus.display());
    let mut outcome = sweep_graphs(&graphs, cfg)?;
    failures.append(&mut outcome.failures);
    failures.sort_by_key(|f| f.graph_id);
    outcome.failures = failures;

    write_records(&cfg.out, &outcome.records)?;
    write_timings(&sidecar_path(&cfg.out, "timing.csv"), &outcome.records)?;
    let summaries = metrics::aggregate(&outcome.records);
    write_summary_csv(&sidecar_path(&cfg.out, "summary.csv"), &summaries)?;
    if let Some(dir) = &cfg.histograms {
        write_histograms(dir, &summaries)?;
    }
    if let Some(path) = &cfg.debug {
        let io = |e| HarnessError::io(path, e);
        let mut w = BufWriter::new(File::create(path).map_err(io)?);
        for line in &outcome.debug_lines {
            writeln!(w, "{line}").map_err(io)?;
        }
        w.flush().map_err(io)?;
    }
    Ok(outcome)
}

/// One row of the symmetry census.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CensusRow {
    pub graph_id: usize,
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub group_order: usize,
    pub num_generators: usize,
    pub num_vertex_orbits: usize,
    pub num_edge_orbits: usize,
    pub num_partitions: usize,
    /// Generators in cycle notation, `;`-separated.
    pub generators: String,
}

pub fn census_row(ctx: &GraphContext) -> Result<CensusRow, HarnessError> {
    let g = &ctx.entry.graph;
    let partitions = partitions_of_elements(g, &ctx.group)?;
    let trivial_gens = ctx.generators.iter().all(Permutation::is_identity);
    Ok(CensusRow {
        graph_id: ctx.entry.graph_id,
        graph6: ctx.entry.graph6.clone(),
        n: g.n(),
        m: g.num_edges(),
        group_order: ctx.group_order(),
        num_generators: if trivial_gens { 0 } else { ctx.generators.len() },
        num_vertex_orbits: ctx.max_sym.num_vertex_orbits,
        num_edge_orbits: ctx.max_sym.num_edge_orbits,
        num_partitions: partitions.len(),
        generators: ctx.generators.iter().map(|p| p.cycle_notation()).collect::<Vec<_>>().join(";"),
    })
}
