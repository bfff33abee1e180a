use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::tying::Scheme;

/// First line of every results CSV; bump when columns change.
pub const RESULTS_HEADER: &str = "# symqaoa results v1";

/// Record flag: the scheme's tying coincides with ma, so the ma result is reused.
pub const FLAG_NO_REDUCTION: &str = "no-reduction";
/// Record flag: `f_ma` and `f_qaoa` agree to 1e-9, so `k` is undefined.
pub const FLAG_DEGENERATE: &str = "degenerate-denominator";

/// One optimized (graph, scheme) pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub graph_id: usize,
    pub graph6: String,
    pub n: usize,
    pub m: usize,
    pub scheme: Scheme,
    pub p: usize,
    pub num_params: usize,
    pub best_expectation: f64,
    pub exact_maxcut: usize,
    pub r: f64,
    pub k: Option<f64>,
    pub l: Option<f64>,
    pub group_order: usize,
    pub num_vertex_orbits: usize,
    pub num_edge_orbits: usize,
    pub restarts: usize,
    pub evals: usize,
    pub seed: u64,
    /// Empty, [`FLAG_NO_REDUCTION`] or [`FLAG_DEGENERATE`] (joined by `;`).
    pub flags: String,
    #[serde(skip)]
    pub wall_ms: u64,
}

impl RunRecord {
    pub fn has_flag(&self, flag: &str) -> bool {
        self.flags.split(';').any(|f| f == flag)
    }

    pub(crate) fn add_flag(&mut self, flag: &str) {
        if !self.has_flag(flag) {
            if !self.flags.is_empty() {
                self.flags.push(';');
            }
            self.flags.push_str(flag);
        }
    }
}

pub fn write_records(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::io(path, e);
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "{RESULTS_HEADER}").map_err(io)?;
    let mut w = csv::Writer::from_writer(out);
    for r in records {
        w.serialize(r).map_err(|e| HarnessError::csv(path, e))?;
    }
    w.flush().map_err(io)
}

pub fn read_records(path: &Path) -> Result<Vec<RunRecord>, HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut reader = BufReader::new(file);
    let mut first = String::new();
    reader.read_line(&mut first).map_err(|e| HarnessError::io(path, e))?;
    if first.trim_end() != RESULTS_HEADER {
        return Err(HarnessError::BadHeader { path: path.display().to_string(), found: first.trim_end().to_string() });
    }
    let mut rdr = csv::Reader::from_reader(reader);
    rdr.deserialize().map(|r| r.map_err(|e| HarnessError::csv(path, e))).collect()
}

/// Wall-clock times live beside the results so the main CSV stays reproducible.
pub fn write_timings(path: &Path, records: &[RunRecord]) -> Result<(), HarnessError> {
    let io = |e: std::io::Error| HarnessError::io(path, e);
    let mut w = csv::Writer::from_writer(BufWriter::new(File::create(path).map_err(io)?));
    w.write_record(["graph_id", "scheme", "wall_ms"]).map_err(|e| HarnessError::csv(path, e))?;
    for r in records {
        w.write_record([r.graph_id.to_string(), r.scheme.to_string(), r.wall_ms.to_string()])
            .map_err(|e| HarnessError::csv(path, e))?;
    }
    w.flush().map_err(io)
}
