//! Line-oriented graph file format:
//!
//! ```text
//! p bipartite <|X|> <|Y|>
//! v <label> <X|Y>
//! e <label> <label> [-]
//! ```
//!
//! Vertex lines appear in insertion order, edge lines in normalized sorted
//! order; a trailing `-` marks a negative edge. Lines starting with `#` are
//! comments. Parsing then writing reproduces the file byte for byte.

use super::{BipartiteGraph, GraphError, Side, Sign};

pub fn write_graph(g: &BipartiteGraph) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "p bipartite {} {}\n",
        g.x_vertices().len(),
        g.y_vertices().len()
    ));
    for v in 0..g.vertex_count() {
        out.push_str(&format!("v {} {}\n", g.label(v), g.side(v).letter()));
    }
    for (u, v) in g.edges() {
        match g.sign(u, v) {
            Sign::Plus => out.push_str(&format!("e {} {}\n", g.label(u), g.label(v))),
            Sign::Minus => out.push_str(&format!("e {} {} -\n", g.label(u), g.label(v))),
        }
    }
    out
}

pub fn parse_graph(text: &str) -> Result<BipartiteGraph, GraphError> {
    let mut g = BipartiteGraph::new();
    let mut saw_header = false;
    let mut declared = (0usize, 0usize);
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let fail = |msg: String| GraphError::File { line: line_no, msg };
        match fields[0] {
            "p" => {
                if saw_header {
                    return Err(fail("duplicate header".into()));
                }
                if fields.len() != 4 || fields[1] != "bipartite" {
                    return Err(fail("expected: p bipartite <|X|> <|Y|>".into()));
                }
                let x = fields[2].parse().map_err(|_| fail("bad |X|".into()))?;
                let y = fields[3].parse().map_err(|_| fail("bad |Y|".into()))?;
                declared = (x, y);
                saw_header = true;
            }
            "v" => {
                if !saw_header {
                    return Err(fail("vertex before header".into()));
                }
                if fields.len() != 3 {
                    return Err(fail("expected: v <label> <X|Y>".into()));
                }
                let side = match fields[2] {
                    "X" => Side::X,
                    "Y" => Side::Y,
                    other => return Err(fail(format!("bad side {other:?}"))),
                };
                g.add_vertex(fields[1], side)
                    .map_err(|e| fail(e.to_string()))?;
            }
            "e" => {
                if !saw_header {
                    return Err(fail("edge before header".into()));
                }
                if fields.len() != 3 && fields.len() != 4 {
                    return Err(fail("expected: e <label> <label> [-]".into()));
                }
                let sign = match fields.get(3) {
                    None => Sign::Plus,
                    Some(&"-") => Sign::Minus,
                    Some(&"+") => Sign::Plus,
                    Some(other) => return Err(fail(format!("bad sign {other:?}"))),
                };
                let u = g
                    .index_of(fields[1])
                    .ok_or_else(|| fail(format!("unknown vertex {:?}", fields[1])))?;
                let v = g
                    .index_of(fields[2])
                    .ok_or_else(|| fail(format!("unknown vertex {:?}", fields[2])))?;
                g.add_signed_edge(u, v, sign)
                    .map_err(|e| fail(e.to_string()))?;
            }
            other => return Err(fail(format!("unknown record {other:?}"))),
        }
    }
    if !saw_header {
        return Err(GraphError::File {
            line: 0,
            msg: "missing header".into(),
        });
    }
    let actual = (g.x_vertices().len(), g.y_vertices().len());
    if actual != declared {
        return Err(GraphError::File {
            line: 0,
            msg: format!(
                "header declares sides {}/{} but file has {}/{}",
                declared.0, declared.1, actual.0, actual.1
            ),
        });
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::super::{cycle, s14};
    use super::*;

    #[test]
    fn round_trip_is_lossless() {
        for g in [s14(), cycle(6).unwrap()] {
            let text = write_graph(&g);
            let back = parse_graph(&text).unwrap();
            assert!(back.adjacency_eq(&g));
            assert_eq!(write_graph(&back), text);
            for (u, v) in g.edges() {
                assert_eq!(g.sign(u, v), back.sign(u, v));
            }
        }
    }

    #[test]
    fn malformed_files_are_rejected() {
        assert!(parse_graph("").is_err());
        assert!(parse_graph("p bipartite 1 1\nv a X\nv b Y\ne a c\n").is_err());
        assert!(parse_graph("p bipartite 2 1\nv a X\nv b Y\ne a b\n").is_err());
        assert!(parse_graph("v a X\n").is_err());
    }
}
