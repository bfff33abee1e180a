use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use symqaoa::graphs::{all_graphs, connected_graphs, encode_graph6, exact_max_cut, read_corpus};
use symqaoa::harness::{
    census_row, format_summary, read_records, select_graphs, sweep, write_histograms, write_summary_csv, GraphFilter,
    SweepConfig,
};
use symqaoa::metrics::aggregate;
use symqaoa::optimizer::{DEFAULT_RESTARTS, DEFAULT_TOL};
use symqaoa::tying::Scheme;

#[derive(Parser)]
#[command(name = "symqaoa", version, about = "Symmetry-tied multi-angle QAOA for Max-Cut")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FilterArg {
    All,
    NontrivialSym,
}

#[derive(Subcommand)]
enum Command {
    /// Optimize every scheme on every corpus graph and write one CSV row per (graph, scheme).
    Sweep {
        #[arg(long)]
        graphs: PathBuf,
        /// Comma-separated: max-sym, best-1sym, rand-group (qaoa and ma always run).
        #[arg(long, value_delimiter = ',', default_value = "max-sym")]
        schemes: Vec<Scheme>,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = DEFAULT_RESTARTS)]
        restarts: usize,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
        /// Evaluation budget per start (default 1000 x parameter count).
        #[arg(long)]
        max_evals: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = default_workers())]
        workers: usize,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "all")]
        filter: FilterArg,
        #[arg(long)]
        no_warm_start: bool,
        /// Write per-start details as JSON lines.
        #[arg(long)]
        debug: Option<PathBuf>,
        #[arg(long)]
        histograms: Option<PathBuf>,
    },
    /// Automorphism census: group order, generators and orbit counts per graph.
    Symmetry {
        #[arg(long)]
        graphs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact Max-Cut of every graph, as CSV on stdout.
    Maxcut {
        #[arg(long)]
        graphs: PathBuf,
    },
    /// Summarize a results CSV.
    Aggregate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        histograms: Option<PathBuf>,
    },
    /// Write all non-isomorphic graphs on n vertices in graph6.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        connected: bool,
        #[arg(long)]
        out: PathBuf,
    },
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match Cli::parse().command {
        Command::Sweep {
            graphs,
            schemes,
            p,
            restarts,
            tol,
            max_evals,
            seed,
            workers,
            out,
            filter,
            no_warm_start,
            debug,
            histograms,
        } => {
            let cfg = SweepConfig {
                corpus: graphs,
                schemes,
                p,
                restarts,
                tol,
                max_evals,
                seed,
                workers,
                out,
                filter: match filter {
                    FilterArg::All => GraphFilter::All,
                    FilterArg::NontrivialSym => GraphFilter::NontrivialSym,
                },
                warm_start: !no_warm_start,
                debug,
                histograms,
            };
            let outcome = sweep(&cfg)?;
            print!("{}", format_summary(&aggregate(&outcome.records)));
            println!(
                "{} graphs, {} records, {} failures -> {}",
                outcome.graphs_selected,
                outcome.records.len(),
                outcome.failures.len(),
                cfg.out.display()
            );
            for f in &outcome.failures {
                eprintln!("failed: graph {} ({}): {}", f.graph_id, f.graph6, f.error);
            }
        }
        Command::Symmetry { graphs, out } => {
            let entries = read_corpus(&graphs)?;
            let (contexts, failures) = select_graphs(entries, GraphFilter::All);
            if let Some(f) = failures.first() {
                bail!("graph {} ({}): {}", f.graph_id, f.graph6, f.error);
            }
            let mut w = csv::Writer::from_path(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut trivial = 0;
            for ctx in &contexts {
                w.serialize(census_row(ctx)?)?;
                trivial += usize::from(!ctx.is_symmetric());
            }
            w.flush()?;
            println!("{} graphs: {} trivial group, {} nontrivial", contexts.len(), trivial, contexts.len() - trivial);
        }
        Command::Maxcut { graphs } => {
            let stdout = io::stdout();
            let mut w = csv::Writer::from_writer(stdout.lock());
            w.write_record(["graph_id", "graph6", "maxcut", "assignment"])?;
            for e in read_corpus(&graphs)? {
                let cut = exact_max_cut(&e.graph)?;
                let bits: String =
                    (0..e.graph.n()).map(|v| if cut.assignment >> v & 1 == 1 { '1' } else { '0' }).collect();
                w.write_record([e.graph_id.to_string(), e.graph6, cut.value.to_string(), bits])?;
            }
            w.flush()?;
        }
        Command::Aggregate { input, out, histograms } => {
            let records = read_records(&input)?;
            let summaries = aggregate(&records);
            write_summary_csv(&out, &summaries)?;
            if let Some(dir) = histograms {
                write_histograms(&dir, &summaries)?;
            }
            print!("{}", format_summary(&summaries));
        }
        Command::Generate { n, connected, out } => {
            let graphs = if connected { connected_graphs(n)? } else { all_graphs(n)? };
            let mut w = BufWriter::new(File::create(&out).with_context(|| format!("creating {}", out.display()))?);
            for g in &graphs {
                writeln!(w, "{}", encode_graph6(g)?)?;
            }
            w.flush()?;
            println!("{} graphs -> {}", graphs.len(), out.display());
        }
    }
    Ok(())
}
