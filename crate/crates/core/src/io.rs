//! Reading and writing hypergraphs.
//!
//! Text format (UTF-8, LF line endings):
//!
//! ```text
//! <n> <r>
//! v1 v2 ... vr      # one edge per line, vertices strictly increasing
//! ```
//!
//! Lines starting with `#` are comments; text after `#` on an edge line is
//! ignored; blank lines are skipped. Serialization always emits edges sorted
//! lexicographically, so `serialize(parse(s)) == s` for canonical inputs and
//! `parse(serialize(g)) == g` for every graph.
//!
//! The JSON mirror is `{"n": .., "r": .., "edges": [[..], ..]}` with the same
//! sorted-edge convention.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hypergraph::{Hypergraph, HypergraphError};

/// Errors raised while reading a hypergraph description.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    /// The input has no header line.
    #[error("input is empty; expected a \"<n> <r>\" header line")]
    MissingHeader,
    /// The header line is not two integers.
    #[error("line {line}: malformed header {text:?}; expected \"<n> <r>\"")]
    BadHeader { line: usize, text: String },
    /// An edge line has the wrong number of vertices.
    #[error("line {line}: edge has {got} vertices, expected {expected}")]
    WrongEdgeArity { line: usize, got: usize, expected: u32 },
    /// A token is not a positive integer.
    #[error("line {line}: {token:?} is not a vertex number")]
    BadToken { line: usize, token: String },
    /// A vertex lies outside the declared ground set.
    #[error("line {line}: vertex {vertex} outside 1..={n}")]
    VertexOutOfRange { line: usize, vertex: u32, n: u32 },
    /// An edge line is not strictly increasing.
    #[error("line {line}: vertices must be strictly increasing")]
    NotIncreasing { line: usize },
    /// The same edge appears twice.
    #[error("line {line}: duplicate edge")]
    DuplicateEdge { line: usize },
    /// JSON-level failure (malformed document or schema mismatch).
    #[error("invalid JSON hypergraph: {message}")]
    Json { message: String },
    /// Constraint violation surfaced while assembling the graph.
    #[error("invalid hypergraph: {0}")]
    Graph(#[from] HypergraphError),
}

fn content_of(line: &str) -> &str {
    match line.find('#') {
        Some(pos) => &line[..pos],
        None => line,
    }
    .trim()
}

/// Parses the text format described in the module docs.
pub fn parse_hypergraph(text: &str) -> Result<Hypergraph, ParseError> {
    let mut header: Option<(u32, u32)> = None;
    let mut edges: Vec<Vec<u32>> = Vec::new();
    let mut seen: std::collections::HashSet<Vec<u32>> = std::collections::HashSet::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = content_of(raw);
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match header {
            None => {
                if tokens.len() != 2 {
                    return Err(ParseError::BadHeader { line: line_no, text: line.to_string() });
                }
                let n = tokens[0].parse::<u32>().map_err(|_| ParseError::BadHeader {
                    line: line_no,
                    text: line.to_string(),
                })?;
                let r = tokens[1].parse::<u32>().map_err(|_| ParseError::BadHeader {
                    line: line_no,
                    text: line.to_string(),
                })?;
                header = Some((n, r));
            }
            Some((n, r)) => {
                if tokens.len() != r as usize {
                    return Err(ParseError::WrongEdgeArity {
                        line: line_no,
                        got: tokens.len(),
                        expected: r,
                    });
                }
                let mut edge = Vec::with_capacity(tokens.len());
                for t in tokens {
                    let v = t.parse::<u32>().map_err(|_| ParseError::BadToken {
                        line: line_no,
                        token: t.to_string(),
                    })?;
                    if v < 1 || v > n {
                        return Err(ParseError::VertexOutOfRange { line: line_no, vertex: v, n });
                    }
                    edge.push(v);
                }
                if !edge.windows(2).all(|w| w[0] < w[1]) {
                    return Err(ParseError::NotIncreasing { line: line_no });
                }
                if !seen.insert(edge.clone()) {
                    return Err(ParseError::DuplicateEdge { line: line_no });
                }
                edges.push(edge);
            }
        }
    }
    let (n, r) = header.ok_or(ParseError::MissingHeader)?;
    Ok(Hypergraph::new(n, r, edges)?)
}

/// Serializes to the canonical text form (sorted edges, LF endings).
pub fn serialize_hypergraph(g: &Hypergraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.r());
    for e in g.edges() {
        let words: Vec<String> = e.iter().map(|v| v.to_string()).collect();
        out.push_str(&words.join(" "));
        out.push('\n');
    }
    out
}

#[derive(Serialize, Deserialize)]
struct HypergraphJson {
    n: u32,
    r: u32,
    edges: Vec<Vec<u32>>,
}

/// Serializes to the JSON mirror (sorted edges).
pub fn hypergraph_to_json(g: &Hypergraph) -> String {
    let doc = HypergraphJson { n: g.n(), r: g.r(), edges: g.edges_vec() };
    serde_json::to_string(&doc).expect("hypergraph JSON serialization cannot fail")
}

/// Parses the JSON mirror, enforcing the same constraints as the text format.
pub fn hypergraph_from_json(text: &str) -> Result<Hypergraph, ParseError> {
    let doc: HypergraphJson =
        serde_json::from_str(text).map_err(|e| ParseError::Json { message: e.to_string() })?;
    let mut seen = std::collections::HashSet::new();
    for edge in &doc.edges {
        let mut sorted = edge.clone();
        sorted.sort_unstable();
        if !seen.insert(sorted) {
            return Err(ParseError::Json { message: format!("duplicate edge {edge:?}") });
        }
    }
    Ok(Hypergraph::new(doc.n, doc.r, doc.edges)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip_on_complete_graph() {
        let g = Hypergraph::complete(5, 3);
        let text = serialize_hypergraph(&g);
        assert_eq!(parse_hypergraph(&text).unwrap(), g);
        assert_eq!(serialize_hypergraph(&parse_hypergraph(&text).unwrap()), text);
    }

    #[test]
    fn parse_skips_comments_and_blank_lines() {
        let text = "# a comment\n\n5 3\n1 2 3  # trailing note\n\n# another\n2 3 4\n";
        let g = parse_hypergraph(text).unwrap();
        assert_eq!(g.edge_count(), 2);
        assert!(g.contains_edge(&[1, 2, 3]));
        assert!(g.contains_edge(&[2, 3, 4]));
    }

    #[test]
    fn parse_reports_line_numbers_for_errors() {
        assert_eq!(parse_hypergraph(""), Err(ParseError::MissingHeader));
        assert_eq!(
            parse_hypergraph("5\n"),
            Err(ParseError::BadHeader { line: 1, text: "5".into() })
        );
        assert_eq!(
            parse_hypergraph("5 3\n1 2\n"),
            Err(ParseError::WrongEdgeArity { line: 2, got: 2, expected: 3 })
        );
        assert_eq!(
            parse_hypergraph("5 3\n1 2 x\n"),
            Err(ParseError::BadToken { line: 2, token: "x".into() })
        );
        assert_eq!(
            parse_hypergraph("5 3\n# c\n1 2 9\n"),
            Err(ParseError::VertexOutOfRange { line: 3, vertex: 9, n: 5 })
        );
        assert_eq!(
            parse_hypergraph("5 3\n3 2 1\n"),
            Err(ParseError::NotIncreasing { line: 2 })
        );
        assert_eq!(
            parse_hypergraph("5 3\n1 2 3\n1 2 3\n"),
            Err(ParseError::DuplicateEdge { line: 3 })
        );
    }

    #[test]
    fn json_round_trip_and_duplicate_detection() {
        let g = Hypergraph::complete(4, 3);
        let json = hypergraph_to_json(&g);
        assert_eq!(hypergraph_from_json(&json).unwrap(), g);
        assert!(json.starts_with("{\"n\":4,\"r\":3,\"edges\":[[1,2,3],"));
        let dup = r#"{"n":4,"r":3,"edges":[[1,2,3],[3,2,1]]}"#;
        assert!(matches!(hypergraph_from_json(dup), Err(ParseError::Json { .. })));
    }

    #[test]
    fn json_rejects_malformed_documents() {
        assert!(matches!(
            hypergraph_from_json("{\"n\": 3}"),
            Err(ParseError::Json { .. })
        ));
        assert!(matches!(
            hypergraph_from_json("{\"n\":4,\"r\":3,\"edges\":[[1,2]]}"),
            Err(ParseError::Graph(_))
        ));
    }
}
