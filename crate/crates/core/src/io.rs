//! Edge-list and MatrixMarket reading and writing, multiplex manifests and
//! dataset lookup.
//!
//! Edge lists hold one edge per line as `i j [w]` with 1-based indices and
//! weight 1 when omitted. `#` starts a comment. An optional `n <count>` line
//! before the first edge fixes the node count; otherwise it is the largest
//! index seen.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};
use crate::multiplex::MultiplexNetwork;

/// Environment variable naming the directory that holds downloaded datasets.
pub const DATA_DIR_ENV: &str = "PFNET_DATA_DIR";

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_index(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("'{tok}' is not a node index")))
}

fn parse_weight(tok: &str, line: usize) -> Result<f64> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("'{tok}' is not a number")))
}

/// Accumulates edges with per-line validation so errors carry line numbers.
struct EdgeCollector {
    n: Option<usize>,
    max_index: usize,
    seen: HashMap<EdgeRef, usize>,
    edges: Vec<(usize, usize, f64)>,
}

impl EdgeCollector {
    fn new(n: Option<usize>) -> Self {
        EdgeCollector {
            n,
            max_index: 0,
            seen: HashMap::new(),
            edges: Vec::new(),
        }
    }

    fn push(&mut self, a: usize, b: usize, w: f64, line: usize) -> Result<()> {
        let limit = self.n.unwrap_or(usize::MAX);
        for index in [a, b] {
            if index == 0 || index > limit {
                return Err(Error::IndexOutOfRange {
                    index,
                    n: self.n.unwrap_or(self.max_index),
                }
                .at_line(line));
            }
        }
        // single-edge graph reuses the construction checks
        Graph::new(a.max(b), &[(a, b, w)]).map_err(|e| e.at_line(line))?;
        let e = EdgeRef::new(a, b);
        if self.seen.insert(e, line).is_some() {
            return Err(Error::DuplicateEdge { i: e.i, j: e.j }.at_line(line));
        }
        self.max_index = self.max_index.max(a).max(b);
        self.edges.push((a, b, w));
        Ok(())
    }

    fn finish(self) -> Result<Graph> {
        let n = self.n.unwrap_or(self.max_index);
        Graph::new(n, &self.edges)
    }
}

/// Parses an edge list.
pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut header: Option<usize> = None;
    let mut acc: Option<EdgeCollector> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks[0] == "n" {
            if acc.is_some() || header.is_some() {
                return Err(parse_err(line, "node count must come once, before the first edge"));
            }
            if toks.len() != 2 {
                return Err(parse_err(line, "expected 'n <count>'"));
            }
            let n = parse_index(toks[1], line)?;
            if n == 0 {
                return Err(Error::EmptyNodeSet.at_line(line));
            }
            header = Some(n);
            continue;
        }
        if !(2..=3).contains(&toks.len()) {
            return Err(parse_err(
                line,
                format!("expected 'i j [w]', found {} fields", toks.len()),
            ));
        }
        let a = parse_index(toks[0], line)?;
        let b = parse_index(toks[1], line)?;
        let w = match toks.get(2) {
            Some(t) => parse_weight(t, line)?,
            None => 1.0,
        };
        acc.get_or_insert_with(|| EdgeCollector::new(header))
            .push(a, b, w, line)?;
    }
    match acc {
        Some(c) => c.finish(),
        None => Graph::new(header.unwrap_or(0), &[]),
    }
}

/// Writes `g` as an edge list with an `n` header. Weights use the shortest
/// representation that parses back to the same `f64`.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("n {}\n", g.node_count());
    for (e, w) in g.edges() {
        writeln!(out, "{} {} {}", e.i, e.j, w).expect("writing to a String cannot fail");
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum MmField {
    Real,
    Integer,
    Pattern,
}

/// Parses a MatrixMarket `coordinate` file with `real`, `integer` or
/// `pattern` entries and `symmetric` or `general` symmetry. Symmetric files
/// may store either triangle; general files must list both `(i,j)` and
/// `(j,i)` with equal values. Pattern entries get weight 1 and explicit
/// zeros are dropped.
pub fn parse_matrix_market(text: &str) -> Result<Graph> {
    let mut lines = text.lines().enumerate();
    let (_, head) = lines
        .next()
        .ok_or_else(|| Error::UnsupportedHeader("empty input".into()))?;
    let toks: Vec<String> = head.split_whitespace().map(str::to_lowercase).collect();
    let unsupported = || Error::UnsupportedHeader(head.trim().to_string());
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" || toks[2] != "coordinate" {
        return Err(unsupported());
    }
    let field = match toks[3].as_str() {
        "real" => MmField::Real,
        "integer" => MmField::Integer,
        "pattern" => MmField::Pattern,
        _ => return Err(unsupported()),
    };
    let symmetric = match toks[4].as_str() {
        "symmetric" => true,
        "general" => false,
        _ => return Err(unsupported()),
    };

    let mut size: Option<(usize, usize)> = None;
    let mut acc = EdgeCollector::new(None);
    let mut general: HashMap<(usize, usize), (f64, usize)> = HashMap::new();
    let mut count = 0usize;
    for (k, raw) in lines {
        let line = k + 1;
        let content = raw.trim();
        if content.is_empty() || content.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = content.split_whitespace().collect();
        let Some((n, nnz)) = size else {
            if toks.len() != 3 {
                return Err(parse_err(line, "expected 'rows cols entries'"));
            }
            let rows = parse_index(toks[0], line)?;
            let cols = parse_index(toks[1], line)?;
            if rows != cols {
                return Err(parse_err(line, format!("matrix is {rows}x{cols}, not square")));
            }
            size = Some((rows, parse_index(toks[2], line)?));
            acc.n = Some(rows);
            continue;
        };
        let want = if field == MmField::Pattern { 2 } else { 3 };
        if toks.len() != want {
            return Err(parse_err(line, format!("expected {want} fields, found {}", toks.len())));
        }
        count += 1;
        if count > nnz {
            return Err(parse_err(line, format!("more than the declared {nnz} entries")));
        }
        let r = parse_index(toks[0], line)?;
        let c = parse_index(toks[1], line)?;
        let w = match field {
            MmField::Pattern => 1.0,
            MmField::Integer => toks[2]
                .parse::<i64>()
                .map_err(|_| parse_err(line, format!("'{}' is not an integer", toks[2])))?
                as f64,
            MmField::Real => parse_weight(toks[2], line)?,
        };
        if r == c && r >= 1 && r <= n {
            return Err(Error::DiagonalEntry { line, index: r });
        }
        if w == 0.0 {
            continue;
        }
        if symmetric {
            acc.push(r, c, w, line)?;
        } else if let Some((v, first)) = general.remove(&(c, r)) {
            if v != w {
                return Err(Error::AsymmetricGeneralMatrix {
                    i: r.max(c),
                    j: r.min(c),
                });
            }
            acc.push(r, c, w, first.min(line))?;
        } else if general.insert((r, c), (w, line)).is_some() {
            return Err(Error::DuplicateEdge {
                i: r.max(c),
                j: r.min(c),
            }
            .at_line(line));
        }
    }
    let Some((n, nnz)) = size else {
        return Err(parse_err(text.lines().count().max(1), "missing size line"));
    };
    if let Some((&(r, c), _)) = general.iter().min_by_key(|(_, (_, line))| *line) {
        return Err(Error::AsymmetricGeneralMatrix {
            i: r.max(c),
            j: r.min(c),
        });
    }
    if count != nnz {
        return Err(parse_err(
            text.lines().count(),
            format!("declared {nnz} entries, found {count}"),
        ));
    }
    if n == 0 {
        return Err(Error::EmptyNodeSet);
    }
    acc.finish()
}

/// Writes `g` as a `real symmetric` MatrixMarket file (lower triangle).
pub fn write_matrix_market(g: &Graph) -> String {
    let n = g.node_count();
    let mut out = format!(
        "%%MatrixMarket matrix coordinate real symmetric\n{n} {n} {}\n",
        g.edge_count()
    );
    for (e, w) in g.edges() {
        writeln!(out, "{} {} {}", e.i, e.j, w).expect("writing to a String cannot fail");
    }
    out
}

/// Parses either format, telling them apart by the MatrixMarket banner.
pub fn parse_graph(text: &str) -> Result<Graph> {
    if text.trim_start().starts_with("%%MatrixMarket") {
        parse_matrix_market(text)
    } else {
        parse_edge_list(text)
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn load_graph(path: &Path) -> Result<Graph> {
    parse_graph(&read(path)?)
}

/// Contents of a multiplex manifest: a `gamma <value>` line followed by one
/// layer file per line, relative to the manifest's directory.
#[derive(Debug, Clone, PartialEq)]
pub struct Manifest {
    pub gamma: f64,
    pub layers: Vec<PathBuf>,
}

pub fn parse_manifest(text: &str, base: &Path) -> Result<Manifest> {
    let mut gamma = None;
    let mut layers = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        if gamma.is_none() {
            let toks: Vec<&str> = content.split_whitespace().collect();
            if toks.len() != 2 || toks[0] != "gamma" {
                return Err(parse_err(line, "manifest must start with 'gamma <value>'"));
            }
            gamma = Some(parse_weight(toks[1], line)?);
            continue;
        }
        layers.push(base.join(content));
    }
    let gamma = gamma.ok_or_else(|| parse_err(1, "manifest is empty"))?;
    Ok(Manifest { gamma, layers })
}

/// Reads a manifest file, resolving layer paths against its directory.
pub fn load_manifest_layers(path: &Path) -> Result<Manifest> {
    let base = path.parent().unwrap_or(Path::new("."));
    parse_manifest(&read(path)?, base)
}

/// Loads a multiplex network; `gamma` overrides the manifest's coupling.
/// Layers without an `n` header are padded to the largest node count.
pub fn load_multiplex(path: &Path, gamma: Option<f64>) -> Result<MultiplexNetwork> {
    let m = load_manifest_layers(path)?;
    let graphs = m
        .layers
        .iter()
        .map(|p| load_graph(p).map_err(|e| with_path(e, p)))
        .collect::<Result<Vec<_>>>()?;
    let n = graphs.iter().map(Graph::node_count).max().unwrap_or(0);
    let layers = graphs.into_iter().map(|g| pad(&g, n)).collect::<Result<Vec<_>>>()?;
    MultiplexNetwork::new(layers, gamma.unwrap_or(m.gamma))
}

fn with_path(e: Error, p: &Path) -> Error {
    match e {
        e @ Error::Io { .. } => e,
        e => Error::Io {
            path: p.display().to_string(),
            message: e.to_string(),
        },
    }
}

fn pad(g: &Graph, n: usize) -> Result<Graph> {
    if g.node_count() == n {
        return Ok(g.clone());
    }
    let edges: Vec<_> = g.edges().map(|(e, w)| (e.i, e.j, w)).collect();
    Graph::new(n, &edges)
}

/// Location of a dataset file under `$PFNET_DATA_DIR`, if present.
pub fn dataset_path(relative: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(DATA_DIR_ENV)?;
    let p = Path::new(&dir).join(relative);
    p.exists().then_some(p)
}
