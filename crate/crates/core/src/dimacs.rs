//! DIMACS edge-format parsing and rendering, newline-delimited weight
//! files, and the JSON dump of a computed separator.
//!
//! Files carry 1-based vertex ids; everything in memory is 0-based. The
//! separator dump keeps the file convention so its ids can be read against
//! the DIMACS instance it came from.

use crate::graph::Graph;
use crate::separator::{
    verify_separator, EvenSetSeparator, IteratedEvenSet, SeparatorBranch, SeparatorComponent,
};
use crate::vset::VertexSet;
use crate::weights::{parse_ratio, ratio_string};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Failures while reading instance files or dumps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// Malformed line, with its 1-based number.
    #[error("line {line}: {detail}")]
    Syntax { line: usize, detail: String },
    /// A self-loop or a repeated edge.
    #[error("line {line}: self-loop or repeated edge")]
    LoopOrMultiEdge { line: usize },
    /// The header promised a different number of records.
    #[error("header declares {declared} records but the file has {found}")]
    CountMismatch { declared: usize, found: usize },
    /// No "p edge" header before the first edge.
    #[error("missing 'p edge <n> <m>' header")]
    MissingHeader,
    /// A structurally invalid separator dump.
    #[error("invalid separator dump: {detail}")]
    Dump { detail: String },
}

fn syntax(line: usize, detail: impl Into<String>) -> ParseError {
    ParseError::Syntax {
        line,
        detail: detail.into(),
    }
}

/// Parse DIMACS edge format: comments 'c ...', one 'p edge n m' header,
/// then m lines 'e u v' with 1-based endpoints. Self-loops and duplicate
/// edges are rejected.
pub fn parse_dimacs(text: &str) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut seen = std::collections::BTreeSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let fields: Vec<&str> = raw.split_whitespace().collect();
        match fields.first() {
            None | Some(&"c") => continue,
            Some(&"p") => {
                if header.is_some() {
                    return Err(syntax(line, "repeated header"));
                }
                if fields.len() != 4 || fields[1] != "edge" {
                    return Err(syntax(line, "expected 'p edge <n> <m>'"));
                }
                let n: usize = fields[2]
                    .parse()
                    .map_err(|_| syntax(line, "vertex count is not a number"))?;
                let m: usize = fields[3]
                    .parse()
                    .map_err(|_| syntax(line, "edge count is not a number"))?;
                header = Some((n, m));
            }
            Some(&"e") => {
                let Some((n, _)) = header else {
                    return Err(ParseError::MissingHeader);
                };
                if fields.len() != 3 {
                    return Err(syntax(line, "expected 'e <u> <v>'"));
                }
                let u: usize = fields[1]
                    .parse()
                    .map_err(|_| syntax(line, "endpoint is not a number"))?;
                let v: usize = fields[2]
                    .parse()
                    .map_err(|_| syntax(line, "endpoint is not a number"))?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(syntax(line, format!("endpoint outside 1..={n}")));
                }
                if u == v || !seen.insert((u.min(v), u.max(v))) {
                    return Err(ParseError::LoopOrMultiEdge { line });
                }
                edges.push((u - 1, v - 1));
            }
            Some(other) => {
                return Err(syntax(line, format!("unknown record type '{other}'")));
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(ParseError::MissingHeader);
    };
    if edges.len() != m {
        return Err(ParseError::CountMismatch {
            declared: m,
            found: edges.len(),
        });
    }
    Graph::from_edges(n, &edges).map_err(|e| syntax(0, e.to_string()))
}

/// Render a graph in DIMACS edge format, edges ascending, ids 1-based.
pub fn render_dimacs(g: &Graph) -> String {
    let edges = g.edges();
    let mut out = format!("p edge {} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

/// Parse a weight file: one nonnegative integer per line, line i giving
/// the weight of vertex i. Blank lines and 'c' comments are skipped.
pub fn parse_weights(text: &str, n: usize) -> Result<Vec<i64>, ParseError> {
    let mut out = Vec::with_capacity(n);
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        let w: i64 = trimmed
            .parse()
            .map_err(|_| syntax(line, "weight is not an integer"))?;
        if w < 0 {
            return Err(syntax(line, "weight is negative"));
        }
        out.push(w);
    }
    if out.len() != n {
        return Err(ParseError::CountMismatch {
            declared: n,
            found: out.len(),
        });
    }
    Ok(out)
}

/// Render a weight file.
pub fn render_weights(wts: &[i64]) -> String {
    let mut out = String::new();
    for w in wts {
        out.push_str(&format!("{w}\n"));
    }
    out
}

/// One residual component in a dump, ids 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpComponent {
    pub vertices: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

/// The audit outcome embedded in a dump.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DumpAudits {
    pub violations: Vec<String>,
    pub truncated: bool,
}

/// JSON-facing form of a separator: branch, layer count, balance as an
/// exact fraction, fringe bound, layers and components with 1-based ids,
/// and the polynomial audit report computed at dump time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatorDump {
    pub branch: String,
    pub k: usize,
    pub c: String,
    pub d: usize,
    pub layers: Vec<Vec<usize>>,
    pub components: Vec<DumpComponent>,
    pub audits: DumpAudits,
}

fn one_based(s: &VertexSet) -> Vec<usize> {
    s.iter().map(|v| v + 1).collect()
}

fn zero_based(ids: &[usize], n: usize, what: &str) -> Result<VertexSet, ParseError> {
    let mut out = VertexSet::new(n);
    for &id in ids {
        if id == 0 || id > n {
            return Err(ParseError::Dump {
                detail: format!("{what} id {id} outside 1..={n}"),
            });
        }
        out.insert(id - 1);
    }
    Ok(out)
}

impl SeparatorDump {
    /// Dump a separator, running the polynomial audits as it goes.
    pub fn from_separator(g: &Graph, sep: &EvenSetSeparator) -> SeparatorDump {
        let report = verify_separator(g, sep, false);
        SeparatorDump {
            branch: match sep.branch {
                SeparatorBranch::Ball => "ball".to_string(),
                SeparatorBranch::Core => "core".to_string(),
            },
            k: sep.k,
            c: ratio_string(&sep.c),
            d: sep.d,
            layers: sep.iterated.layers.iter().map(one_based).collect(),
            components: sep
                .components
                .iter()
                .map(|sc| DumpComponent {
                    vertices: one_based(&sc.vertices),
                    neighborhood: one_based(&sc.neighborhood),
                })
                .collect(),
            audits: DumpAudits {
                violations: report.violations.clone(),
                truncated: report.truncated,
            },
        }
    }

    /// Rebuild the in-memory separator for a graph on `n` vertices.
    pub fn to_separator(&self, n: usize) -> Result<EvenSetSeparator, ParseError> {
        let branch = match self.branch.as_str() {
            "ball" => SeparatorBranch::Ball,
            "core" => SeparatorBranch::Core,
            other => {
                return Err(ParseError::Dump {
                    detail: format!("unknown branch '{other}'"),
                })
            }
        };
        let c = parse_ratio(&self.c).ok_or_else(|| ParseError::Dump {
            detail: format!("balance '{}' is not a fraction", self.c),
        })?;
        let mut layers = Vec::with_capacity(self.layers.len());
        for ids in &self.layers {
            layers.push(zero_based(ids, n, "layer")?);
        }
        let mut components = Vec::with_capacity(self.components.len());
        for comp in &self.components {
            components.push(SeparatorComponent {
                vertices: zero_based(&comp.vertices, n, "component")?,
                neighborhood: zero_based(&comp.neighborhood, n, "neighborhood")?,
            });
        }
        Ok(EvenSetSeparator {
            iterated: IteratedEvenSet { layers },
            k: self.k,
            c,
            d: self.d,
            branch,
            components,
        })
    }
}
