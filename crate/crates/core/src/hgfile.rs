//! Reader and writer for the `.hg` text format.
//!
//! ```text
//! # comment
//! p hg <n> <k>
//! e <v1> <v2> ...      (k lines, 1-based labels)
//! ```

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError};

#[derive(Debug, Error)]
pub enum HgParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Invalid {
        line: usize,
        #[source]
        source: HypergraphError,
    },
    #[error("missing 'p hg <n> <k>' header")]
    MissingHeader,
    #[error("header declares {declared} edges but {found} were given")]
    EdgeCountMismatch { declared: usize, found: usize },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn syntax(line: usize, message: impl Into<String>) -> HgParseError {
    HgParseError::Syntax { line, message: message.into() }
}

pub fn parse_hg(text: &str) -> Result<Hypergraph, HgParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges: Vec<Vec<usize>> = Vec::new();
    let mut seen: BTreeSet<Vec<usize>> = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tok = content.split_whitespace();
        match tok.next() {
            Some("p") => {
                if header.is_some() {
                    return Err(syntax(line, "duplicate header"));
                }
                if tok.next() != Some("hg") {
                    return Err(syntax(line, "expected 'p hg <n> <k>'"));
                }
                let n = parse_count(tok.next(), line, "vertex count")?;
                let k = parse_count(tok.next(), line, "edge count")?;
                if tok.next().is_some() {
                    return Err(syntax(line, "trailing tokens after header"));
                }
                if n == 0 {
                    return Err(HgParseError::Invalid { line, source: HypergraphError::NoVertices });
                }
                header = Some((n, k));
            }
            Some("e") => {
                let (n, k) = header.ok_or_else(|| syntax(line, "edge line before header"))?;
                if edges.len() == k {
                    return Err(syntax(line, format!("more than the declared {k} edges")));
                }
                let mut edge = Vec::new();
                let mut members = BTreeSet::new();
                for t in tok {
                    let label: usize =
                        t.parse().map_err(|_| syntax(line, format!("bad vertex label '{t}'")))?;
                    if label == 0 || label > n {
                        return Err(HgParseError::Invalid {
                            line,
                            source: HypergraphError::VertexOutOfRange {
                                vertex: label.wrapping_sub(1),
                                n,
                            },
                        });
                    }
                    if !members.insert(label - 1) {
                        return Err(syntax(line, format!("vertex {label} repeated within edge")));
                    }
                    edge.push(label - 1);
                }
                if edge.len() < 2 {
                    return Err(HgParseError::Invalid {
                        line,
                        source: HypergraphError::EdgeTooSmall { edge: edges.len(), size: edge.len() },
                    });
                }
                edge.sort_unstable();
                if !seen.insert(edge.clone()) {
                    return Err(HgParseError::Invalid {
                        line,
                        source: HypergraphError::DuplicateEdge { edge: edges.len() },
                    });
                }
                edges.push(edge);
            }
            Some(other) => return Err(syntax(line, format!("unknown line type '{other}'"))),
            None => unreachable!(),
        }
    }

    let (n, k) = header.ok_or(HgParseError::MissingHeader)?;
    if edges.len() != k {
        return Err(HgParseError::EdgeCountMismatch { declared: k, found: edges.len() });
    }
    Hypergraph::new(n, edges).map_err(|source| HgParseError::Invalid { line: 0, source })
}

fn parse_count(tok: Option<&str>, line: usize, what: &str) -> Result<usize, HgParseError> {
    let t = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    t.parse().map_err(|_| syntax(line, format!("bad {what} '{t}'")))
}

pub fn read_hg(path: impl AsRef<Path>) -> Result<Hypergraph, HgParseError> {
    parse_hg(&std::fs::read_to_string(path)?)
}

/// Canonical rendering: header plus sorted edges, no comments.
pub fn write_hg(g: &Hypergraph) -> String {
    let mut out = format!("p hg {} {}\n", g.n(), g.edge_count());
    for e in g.edges() {
        out.push('e');
        for v in e {
            let _ = write!(out, " {}", v + 1);
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families;

    #[test]
    fn round_trip() {
        let f = families::fano_plane();
        let text = write_hg(&f);
        assert!(text.starts_with("p hg 7 7\ne 1 2 3\n"));
        assert_eq!(parse_hg(&text).unwrap(), f);
    }

    #[test]
    fn comments_and_order() {
        let text = "# bowtie\np hg 5 2\ne 5 4 3 # second\n\ne 1 2 3\n";
        assert_eq!(parse_hg(text).unwrap(), families::bowtie());
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_hg("p hg 3 1\ne 1\n").unwrap_err();
        assert_eq!(err.to_string(), "line 2: edge 0 has 1 distinct vertices; edges need at least 2");
        let err = parse_hg("p hg 3 2\ne 1 2\n# x\ne 2 1\n").unwrap_err();
        assert!(matches!(err, HgParseError::Invalid { line: 4, source: HypergraphError::DuplicateEdge { .. } }));
        let err = parse_hg("p hg 3 1\ne 1 4\n").unwrap_err();
        assert!(matches!(err, HgParseError::Invalid { line: 2, .. }));
        let err = parse_hg("p hg 3 1\ne 1 1 2\n").unwrap_err();
        assert!(matches!(err, HgParseError::Syntax { line: 2, .. }));
        assert!(matches!(parse_hg("e 1 2\n"), Err(HgParseError::Syntax { line: 1, .. })));
        assert!(matches!(parse_hg("# nothing\n"), Err(HgParseError::MissingHeader)));
        assert!(matches!(
            parse_hg("p hg 3 2\ne 1 2\n"),
            Err(HgParseError::EdgeCountMismatch { declared: 2, found: 1 })
        ));
        assert!(matches!(parse_hg("p hg 3 1\nx 1 2\n"), Err(HgParseError::Syntax { line: 2, .. })));
    }
}
