//! The instance file format.
//!
//! DIMACS-style lines, vertices numbered from 1:
//!
//! ```text
//! c optional comments
//! p sqroot <n> <m>
//! e <u> <v>      one line per edge, m lines total
//! r <u> <v>      forced root edge (must also appear as an e line)
//! b <u> <v>      forbidden root edge (must also appear as an e line)
//! ```

use sqroot::{Edge, Graph, LabeledInstance};
use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.msg)
    }
}

impl std::error::Error for ParseError {}

/// Tokens of a line with their 1-based starting columns.
fn tokens(line: &str) -> Vec<(usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push((s + 1, &line[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out
}

pub fn parse_instance(text: &str) -> Result<LabeledInstance, ParseError> {
    let err = |line: usize, col: usize, msg: String| ParseError { line, col, msg };
    let mut header: Option<(usize, usize)> = None;
    let mut header_line = 0;
    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    let mut labels: Vec<(char, Edge, usize, usize)> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let toks = tokens(raw);
        let Some(&(_, kind)) = toks.first() else {
            continue;
        };
        if kind == "c" {
            continue;
        }
        if kind == "p" {
            if header.is_some() {
                return Err(err(lineno, 1, "duplicate p line".into()));
            }
            if toks.len() != 4 || toks[1].1 != "sqroot" {
                return Err(err(lineno, 1, "expected 'p sqroot <n> <m>'".into()));
            }
            let n: usize = toks[2]
                .1
                .parse()
                .map_err(|_| err(lineno, toks[2].0, format!("bad vertex count '{}'", toks[2].1)))?;
            let m: usize = toks[3]
                .1
                .parse()
                .map_err(|_| err(lineno, toks[3].0, format!("bad edge count '{}'", toks[3].1)))?;
            header = Some((n, m));
            header_line = lineno;
            continue;
        }
        if !matches!(kind, "e" | "r" | "b") {
            return Err(err(lineno, toks[0].0, format!("unknown line type '{kind}'")));
        }
        let Some((n, _)) = header else {
            return Err(err(lineno, toks[0].0, "edge line before the p line".into()));
        };
        if toks.len() != 3 {
            return Err(err(lineno, toks[0].0, format!("expected '{kind} <u> <v>'")));
        }
        let mut ends = [0usize; 2];
        for (slot, &(col, tok)) in toks[1..].iter().enumerate() {
            let v: usize = tok
                .parse()
                .map_err(|_| err(lineno, col, format!("bad vertex '{tok}'")))?;
            if v < 1 || v > n {
                return Err(err(lineno, col, format!("vertex {v} out of range 1..={n}")));
            }
            ends[slot] = v - 1;
        }
        if ends[0] == ends[1] {
            return Err(err(lineno, toks[1].0, "self-loops are not allowed".into()));
        }
        let e = Edge::new(ends[0], ends[1]);
        match kind {
            "e" => {
                if !edges.insert(e) {
                    return Err(err(
                        lineno,
                        toks[0].0,
                        format!("duplicate edge {}-{}", e.u() + 1, e.v() + 1),
                    ));
                }
            }
            _ => labels.push((kind.chars().next().unwrap(), e, lineno, toks[0].0)),
        }
    }

    let Some((n, m)) = header else {
        return Err(err(1, 1, "missing 'p sqroot <n> <m>' line".into()));
    };
    if edges.len() != m {
        return Err(err(
            header_line,
            1,
            format!("p line declares {m} edges but {} e lines follow", edges.len()),
        ));
    }
    let mut forced = BTreeSet::new();
    let mut forbidden = BTreeSet::new();
    for (kind, e, lineno, col) in labels {
        if !edges.contains(&e) {
            return Err(err(
                lineno,
                col,
                format!("label on {}-{} which is not an e line", e.u() + 1, e.v() + 1),
            ));
        }
        match kind {
            'r' => forced.insert(e),
            _ => forbidden.insert(e),
        };
    }
    let graph = Graph::from_edges(n, edges.iter().map(|e| e.endpoints()));
    Ok(LabeledInstance::new(graph, forced, forbidden))
}

pub fn print_instance(inst: &LabeledInstance) -> String {
    let mut out = format!(
        "p sqroot {} {}\n",
        inst.graph.vertex_count(),
        inst.graph.edge_count()
    );
    for e in inst.graph.edges() {
        out.push_str(&format!("e {} {}\n", e.u() + 1, e.v() + 1));
    }
    for e in &inst.forced {
        out.push_str(&format!("r {} {}\n", e.u() + 1, e.v() + 1));
    }
    for e in &inst.forbidden {
        out.push_str(&format!("b {} {}\n", e.u() + 1, e.v() + 1));
    }
    out
}

pub fn print_graph(g: &Graph) -> String {
    print_instance(&LabeledInstance::unlabeled(g.clone()))
}

/// Graphviz text, for looking at instances; no layout semantics.
pub fn to_dot(g: &Graph) -> String {
    let mut out = String::from("graph G {\n");
    for v in g.vertices() {
        if g.degree(v) == 0 {
            out.push_str(&format!("  {};\n", v + 1));
        }
    }
    for e in g.edges() {
        out.push_str(&format!("  {} -- {};\n", e.u() + 1, e.v() + 1));
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let text = "c a triangle with labels\np sqroot 3 3\ne 1 2\ne 2 3\ne 1 3\nr 1 2\nb 1 3\n";
        let inst = parse_instance(text).unwrap();
        assert_eq!(inst.graph.vertex_count(), 3);
        assert_eq!(inst.forced.len(), 1);
        assert_eq!(inst.forbidden.len(), 1);
        let printed = print_instance(&inst);
        let back = parse_instance(&printed).unwrap();
        assert_eq!(back, inst);
    }

    #[test]
    fn diagnostics_carry_line_and_column() {
        let e = parse_instance("p sqroot 3 1\ne 1 9\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 5));
        let e = parse_instance("p sqroot 3 1\ne 1 1\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 3));
        let e = parse_instance("p sqroot 2 1\ne 1 2\nx 1 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_instance("p sqroot 2 1\ne 1 2\ne 1 2\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_instance("p sqroot 2 1\ne 1 2\nr 2 1\nb 1 2\n").map(|_| ());
        assert_eq!(e, Ok(())); // r/b may cite either endpoint order
        let e = parse_instance("p sqroot 3 1\ne 1 2\nb 1 3\n").unwrap_err();
        assert_eq!(e.line, 3);
        let e = parse_instance("p sqroot 2 2\ne 1 2\n").unwrap_err();
        assert_eq!(e.line, 1);
    }

    #[test]
    fn empty_graph_parses() {
        let inst = parse_instance("p sqroot 0 0\n").unwrap();
        assert_eq!(inst.graph.vertex_count(), 0);
    }

    #[test]
    fn corpus_round_trips() {
        for n in 1..=5 {
            for g in sqroot::oracle::small_graphs(n) {
                let text = print_graph(&g);
                let back = parse_instance(&text).unwrap();
                assert_eq!(back.graph, g);
            }
        }
    }
}
