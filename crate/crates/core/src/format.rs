//! Line-oriented graph documents and `name=value` divisor literals.
//!
//! ```text
//! graph
//! vertex v1 weight 0
//! vertex v2 weight 3
//! edge v1 v2 x3      # multiplicity suffix xK, default 1
//! loop v2 x2
//! ```

use std::collections::HashMap;
use std::fmt;

use crate::divisor::Divisor;
use crate::error::Error;
use crate::graph::WeightedMultigraph;

/// A parse failure with a 1-based source position. Line 0 means the error
/// concerns the document as a whole.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.line == 0 {
            write!(f, "{}", self.message)
        } else {
            write!(f, "{}:{}: {}", self.line, self.column, self.message)
        }
    }
}

impl std::error::Error for ParseError {}

/// A parsed graph plus where each vertex was declared.
#[derive(Debug, Clone)]
pub struct GraphDocument {
    pub graph: WeightedMultigraph,
    /// Vertex name -> (line, column) of its declaration.
    pub declarations: HashMap<String, (usize, usize)>,
}

struct Token<'a> {
    text: &'a str,
    column: usize,
}

fn tokens(line: &str) -> Vec<Token<'_>> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, c) in line.char_indices().chain(std::iter::once((line.len(), ' '))) {
        match (c.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push(Token {
                    text: &line[s..i],
                    column: line[..s].chars().count() + 1,
                });
                start = None;
            }
            _ => {}
        }
    }
    out
}

fn multiplicity(token: Option<&Token<'_>>, line: usize) -> Result<usize, ParseError> {
    let Some(t) = token else { return Ok(1) };
    let count = t
        .text
        .strip_prefix('x')
        .and_then(|k| k.parse::<usize>().ok())
        .ok_or_else(|| ParseError::at(line, t.column, format!("expected multiplicity `xK`, found `{}`", t.text)))?;
    if count == 0 {
        return Err(ParseError::at(line, t.column, "multiplicity must be at least 1"));
    }
    Ok(count)
}

pub fn parse_graph(text: &str) -> Result<GraphDocument, ParseError> {
    let mut header_seen = false;
    let mut names = Vec::new();
    let mut weights = Vec::new();
    let mut declarations: HashMap<String, (usize, usize)> = HashMap::new();
    // (endpoint names, positions, count)
    let mut pending: Vec<([String; 2], [(usize, usize); 2], usize)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks = tokens(content);
        let Some(head) = toks.first() else { continue };
        if !header_seen {
            if head.text != "graph" || toks.len() != 1 {
                return Err(ParseError::at(line, head.column, "document must start with `graph`"));
            }
            header_seen = true;
            continue;
        }
        let extra = |at: usize| -> Result<(), ParseError> {
            match toks.get(at) {
                Some(t) => Err(ParseError::at(line, t.column, format!("unexpected `{}`", t.text))),
                None => Ok(()),
            }
        };
        match head.text {
            "vertex" => {
                let name = toks
                    .get(1)
                    .ok_or_else(|| ParseError::at(line, head.column, "`vertex` needs a name"))?;
                let weight = match toks.get(2) {
                    None => 0,
                    Some(kw) if kw.text == "weight" => {
                        let w = toks
                            .get(3)
                            .ok_or_else(|| ParseError::at(line, kw.column, "`weight` needs a value"))?;
                        let value: i64 = w
                            .text
                            .parse()
                            .map_err(|_| ParseError::at(line, w.column, format!("invalid weight `{}`", w.text)))?;
                        if value < 0 {
                            return Err(ParseError::at(line, w.column, format!("negative weight {value}")));
                        }
                        extra(4)?;
                        value
                    }
                    Some(t) => return Err(ParseError::at(line, t.column, format!("expected `weight`, found `{}`", t.text))),
                };
                if let Some(&(l, _)) = declarations.get(name.text) {
                    return Err(ParseError::at(
                        line,
                        name.column,
                        format!("duplicate vertex `{}` (first declared on line {l})", name.text),
                    ));
                }
                declarations.insert(name.text.to_string(), (line, name.column));
                names.push(name.text.to_string());
                weights.push(weight);
            }
            "edge" => {
                let (Some(a), Some(b)) = (toks.get(1), toks.get(2)) else {
                    return Err(ParseError::at(line, head.column, "`edge` needs two endpoints"));
                };
                let count = multiplicity(toks.get(3), line)?;
                extra(4)?;
                pending.push((
                    [a.text.to_string(), b.text.to_string()],
                    [(line, a.column), (line, b.column)],
                    count,
                ));
            }
            "loop" => {
                let a = toks
                    .get(1)
                    .ok_or_else(|| ParseError::at(line, head.column, "`loop` needs a vertex"))?;
                let count = multiplicity(toks.get(2), line)?;
                extra(3)?;
                pending.push((
                    [a.text.to_string(), a.text.to_string()],
                    [(line, a.column), (line, a.column)],
                    count,
                ));
            }
            "graph" => return Err(ParseError::at(line, head.column, "repeated `graph` header")),
            other => return Err(ParseError::at(line, head.column, format!("unknown directive `{other}`"))),
        }
    }
    if !header_seen {
        return Err(ParseError::at(1, 1, "document must start with `graph`"));
    }
    if names.is_empty() {
        return Err(ParseError::at(0, 0, "no vertices"));
    }
    let index: HashMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut edges = Vec::new();
    for (ends, positions, count) in &pending {
        let mut resolved = [0usize; 2];
        for k in 0..2 {
            resolved[k] = *index.get(ends[k].as_str()).ok_or_else(|| {
                ParseError::at(positions[k].0, positions[k].1, format!("unknown vertex `{}`", ends[k]))
            })?;
        }
        for _ in 0..*count {
            edges.push((resolved[0], resolved[1]));
        }
    }
    let graph = WeightedMultigraph::from_parts(names, weights, edges).map_err(|e| match e {
        Error::Disconnected(..) => ParseError::at(0, 0, format!("graph is disconnected: {e}")),
        other => ParseError::at(0, 0, other.to_string()),
    })?;
    Ok(GraphDocument { graph, declarations })
}

/// Canonical text for a graph: vertices in declaration order, then one line
/// per distinct edge with its multiplicity, then loops.
pub fn serialize_graph(g: &WeightedMultigraph) -> String {
    let mut out = String::from("graph\n");
    for v in g.vertices() {
        out.push_str(&format!("vertex {} weight {}\n", g.name(v), g.weight(v)));
    }
    for a in g.vertices() {
        for b in a + 1..g.vertex_count() {
            match g.multiplicity(a, b) {
                0 => {}
                1 => out.push_str(&format!("edge {} {}\n", g.name(a), g.name(b))),
                k => out.push_str(&format!("edge {} {} x{k}\n", g.name(a), g.name(b))),
            }
        }
    }
    for v in g.vertices() {
        match g.loops_at(v) {
            0 => {}
            1 => out.push_str(&format!("loop {}\n", g.name(v))),
            k => out.push_str(&format!("loop {} x{k}\n", g.name(v))),
        }
    }
    out
}

/// Parses `v1=3,v2=-1`; omitted vertices are zero and the bare literal `0`
/// is the zero divisor. Columns in errors are 1-based within the literal.
pub fn parse_divisor(g: &WeightedMultigraph, literal: &str) -> Result<Divisor, ParseError> {
    let mut values = vec![0i64; g.vertex_count()];
    let trimmed = literal.trim();
    if trimmed.is_empty() || trimmed == "0" {
        return Ok(Divisor::new(values));
    }
    let mut seen = vec![false; g.vertex_count()];
    let mut offset = 0usize;
    for entry in literal.split(',') {
        let column = literal[..offset].chars().count() + 1;
        offset += entry.len() + 1;
        let Some((name, value)) = entry.split_once('=') else {
            return Err(ParseError::at(1, column, format!("expected `vertex=value`, found `{}`", entry.trim())));
        };
        let name = name.trim();
        let v = g
            .vertex(name)
            .map_err(|_| ParseError::at(1, column, format!("unknown vertex `{name}`")))?;
        if seen[v] {
            return Err(ParseError::at(1, column, format!("vertex `{name}` given twice")));
        }
        seen[v] = true;
        let value_column = column + entry.split('=').next().map_or(0, |s| s.chars().count()) + 1;
        values[v] = value
            .trim()
            .parse()
            .map_err(|_| ParseError::at(1, value_column, format!("invalid integer `{}`", value.trim())))?;
    }
    Ok(Divisor::new(values))
}

/// Inverse of [`parse_divisor`], listing every vertex.
pub fn format_divisor(g: &WeightedMultigraph, d: &Divisor) -> String {
    d.display(g).to_string()
}

/// Parses a comma-separated list of vertex names.
pub fn parse_vertex_list(g: &WeightedMultigraph, literal: &str) -> Result<Vec<usize>, ParseError> {
    let mut out = Vec::new();
    let mut offset = 0usize;
    for part in literal.split(',') {
        let column = literal[..offset].chars().count() + 1;
        offset += part.len() + 1;
        let name = part.trim();
        out.push(
            g.vertex(name)
                .map_err(|_| ParseError::at(1, column, format!("unknown vertex `{name}`")))?,
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use proptest::prelude::*;

    #[test]
    fn parses_figure3_document() {
        let doc = parse_graph(fixtures::FIGURE3_DOCUMENT).unwrap();
        let g = &doc.graph;
        assert_eq!(g.vertex_count(), 3);
        assert_eq!(g.edge_count(), 4);
        assert_eq!(g.weights(), &[0, 3, 1]);
        assert_eq!(doc.declarations["v2"], (3, 8));
    }

    #[test]
    fn comments_loops_and_blank_lines() {
        let text = "# leading comment\n\ngraph\nvertex a weight 2 # heavy\nvertex b\nedge a b\nloop b x2\n";
        let g = parse_graph(text).unwrap().graph;
        assert_eq!(g.loops_at(1), 2);
        assert_eq!(g.weight(1), 0);
        assert_eq!(g.genus(), 4);
    }

    #[test]
    fn parse_errors() {
        let err = parse_graph("graph\n").unwrap_err();
        assert_eq!(err.message, "no vertices");
        let err = parse_graph("graph\nvertex a weight 0\nedge a zed\n").unwrap_err();
        assert_eq!((err.line, err.column), (3, 8));
        assert!(err.message.contains("zed"));
        let err = parse_graph("graph\nvertex a weight -2\n").unwrap_err();
        assert!(err.message.contains("negative weight"));
        assert_eq!((err.line, err.column), (2, 17));
        let err = parse_graph("graph\nvertex a\nvertex a\n").unwrap_err();
        assert!(err.message.contains("duplicate"));
        assert_eq!(err.line, 3);
        let err = parse_graph("graph\nvertex a\nvertex b\n").unwrap_err();
        assert!(err.message.contains("disconnected"));
        let err = parse_graph("vertex a\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = parse_graph("graph\nvertex a\nedge a a x0\n").unwrap_err();
        assert!(err.message.contains("at least 1"));
        let err = parse_graph("graph\nvertex a\nfrobnicate\n").unwrap_err();
        assert!(err.message.contains("frobnicate"));
    }

    #[test]
    fn divisor_literals() {
        let g = fixtures::figure3();
        assert_eq!(parse_divisor(&g, "v1=0,v2=3,v3=2").unwrap().values(), &[0, 3, 2]);
        assert_eq!(parse_divisor(&g, "v3=-1").unwrap().values(), &[0, 0, -1]);
        assert_eq!(parse_divisor(&g, "0").unwrap().values(), &[0, 0, 0]);
        let err = parse_divisor(&g, "v1=0,v2=3,v2=1").unwrap_err();
        assert_eq!(err.column, 11);
        let err = parse_divisor(&g, "v1=0,v2=x").unwrap_err();
        assert_eq!(err.column, 9);
        let err = parse_divisor(&g, "v1=0,v9=1").unwrap_err();
        assert!(err.message.contains("v9"));
        assert!(parse_divisor(&g, "v1").is_err());
        let d = parse_divisor(&g, "v2=5,v1=-2").unwrap();
        assert_eq!(parse_divisor(&g, &format_divisor(&g, &d)).unwrap(), d);
    }

    fn arb_graph() -> impl Strategy<Value = WeightedMultigraph> {
        (1usize..6)
            .prop_flat_map(|n| {
                (
                    Just(n),
                    proptest::collection::vec(0i64..3, n),
                    proptest::collection::vec((0..n, 0..n), 0..8),
                )
            })
            .prop_map(|(n, weights, extra)| {
                let names = (0..n).map(|i| format!("n{i}")).collect();
                // spanning path keeps it connected
                let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
                edges.extend(extra);
                WeightedMultigraph::from_parts(names, weights, edges).unwrap()
            })
    }

    proptest! {
        #[test]
        fn serialize_then_parse_is_identity(g in arb_graph()) {
            let back = parse_graph(&serialize_graph(&g)).unwrap().graph;
            prop_assert_eq!(back.names(), g.names());
            prop_assert_eq!(back.weights(), g.weights());
            let mut a = back.edges().to_vec();
            let mut b = g.edges().to_vec();
            a.sort();
            b.sort();
            prop_assert_eq!(a, b);
        }
    }
}
