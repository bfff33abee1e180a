//! graph6 short form (n <= 62).
//!
//! One header byte `n + 63`, then the upper triangle in column-major pair
//! order `(0,1),(0,2),(1,2),(0,3),...`, six bits per byte, each byte offset
//! by 63, most significant bit first. The last byte is zero-padded.

use std::fs;
use std::path::Path;

use thiserror::Error;

use super::Graph;

pub const MAX_GRAPH6_VERTICES: usize = 62;
const HEADER: &str = ">>graph6<<";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("empty graph6 record")]
    Empty,
    #[error("byte offset {offset}: malformed header byte {byte:#04x}")]
    BadHeader { offset: usize, byte: u8 },
    #[error("byte offset {offset}: long-form graph6 (n > 62) is not supported")]
    LongForm { offset: usize },
    #[error("byte offset {offset}: payload truncated, expected {expected} bytes")]
    Truncated { offset: usize, expected: usize },
    #[error("byte offset {offset}: byte {byte:#04x} is not a graph6 data byte")]
    BadByte { offset: usize, byte: u8 },
    #[error("byte offset {offset}: non-zero padding bits")]
    NonZeroPadding { offset: usize },
    #[error("byte offset {offset}: trailing garbage after payload")]
    TrailingGarbage { offset: usize },
    #[error("graph has {0} vertices, graph6 short form supports at most 62")]
    TooManyVertices(usize),
    #[error("line {line}: {source}")]
    AtLine { line: usize, source: Box<Graph6Error> },
    #[error("reading {path}: {message}")]
    Io { path: String, message: String },
}

fn payload_len(n: usize) -> usize {
    (n * n.saturating_sub(1) / 2).div_ceil(6)
}

/// Decodes one graph6 record. Surrounding line terminators are the caller's
/// business; any other extra byte is an error.
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.as_bytes();
    let &head = bytes.first().ok_or(Graph6Error::Empty)?;
    if head == 126 {
        return Err(Graph6Error::LongForm { offset: 0 });
    }
    if !(63..=125).contains(&head) {
        return Err(Graph6Error::BadHeader { offset: 0, byte: head });
    }
    let n = (head - 63) as usize;
    let len = payload_len(n);
    if bytes.len() < 1 + len {
        return Err(Graph6Error::Truncated { offset: bytes.len(), expected: len });
    }
    if bytes.len() > 1 + len {
        return Err(Graph6Error::TrailingGarbage { offset: 1 + len });
    }
    let mut adj = vec![0u64; n];
    let total = n * n.saturating_sub(1) / 2;
    let mut k = 0usize;
    for (i, &b) in bytes[1..].iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Graph6Error::BadByte { offset: 1 + i, byte: b });
        }
        let bits = b - 63;
        for shift in (0..6).rev() {
            let set = bits >> shift & 1 == 1;
            if k >= total {
                if set {
                    return Err(Graph6Error::NonZeroPadding { offset: 1 + i });
                }
                continue;
            }
            if set {
                let (u, v) = pair_of_index(k);
                adj[u] |= 1 << v;
                adj[v] |= 1 << u;
            }
            k += 1;
        }
    }
    Ok(Graph::from_adjacency(adj))
}

/// Inverse of the column-major pair order: bit `k` belongs to pair `(i, j)`
/// with `k = j(j-1)/2 + i`, `i < j`.
fn pair_of_index(k: usize) -> (usize, usize) {
    let mut j = 1;
    while j * (j + 1) / 2 <= k {
        j += 1;
    }
    (k - j * (j - 1) / 2, j)
}

pub fn encode_graph6(g: &Graph) -> Result<String, Graph6Error> {
    let n = g.n();
    if n > MAX_GRAPH6_VERTICES {
        return Err(Graph6Error::TooManyVertices(n));
    }
    let mut out = Vec::with_capacity(1 + payload_len(n));
    out.push(n as u8 + 63);
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    Ok(String::from_utf8(out).expect("graph6 bytes are ASCII"))
}

/// A graph read from a corpus file; `graph_id` is the 1-based line number.
#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub graph_id: usize,
    pub graph6: String,
    pub graph: Graph,
}

impl CorpusEntry {
    pub fn from_graph(graph_id: usize, graph: Graph) -> Result<Self, Graph6Error> {
        Ok(CorpusEntry { graph_id, graph6: encode_graph6(&graph)?, graph })
    }
}

/// Reads a newline-separated graph6 file. A `>>graph6<<` header (on its own
/// line or glued to the first record) and blank lines are skipped.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<CorpusEntry>, Graph6Error> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)
        .map_err(|e| Graph6Error::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_corpus(&text)
}

pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>, Graph6Error> {
    let mut entries = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let mut line = raw.trim_end_matches('\r');
        if i == 0 {
            line = line.strip_prefix(HEADER).unwrap_or(line);
        }
        if line.is_empty() {
            continue;
        }
        let graph = parse_graph6(line).map_err(|e| Graph6Error::AtLine { line: i + 1, source: Box::new(e) })?;
        entries.push(CorpusEntry { graph_id: i + 1, graph6: line.to_string(), graph });
    }
    Ok(entries)
}
