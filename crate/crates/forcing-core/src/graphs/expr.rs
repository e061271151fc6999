//! Family expression grammar used by the CLI and the report documents.
//!
//! ```text
//! expr  := "K2" | "C:" n | "P:" n | "Kmn:" m "," n | "star:" n | "Q:" d
//!        | "FQ:" d | "blowup:" n | "bcp:" n | "s14" | "gprime"
//!        | "prod(" expr ";" sexpr ")" | "bd(" sexpr ")"
//!        | "union(" expr ";" expr { ";" expr } ")"
//! sexpr := "C:" n | "K:" n | expr
//! ```
//!
//! `union` prefixes each part's Y-side labels with `u<i>.` before merging,
//! so equal X labels denote a shared vertex while leaf labels stay disjoint.

use std::fmt;

use super::{
    bcp, bipartite_double, blowup_cycle, cartesian_product, complete_bipartite, complete_simple,
    cycle, folded_hypercube, g_prime, hypercube, k2, path, s14, simple_cycle, star, union_graph,
    BipartiteGraph, GraphError, Side, SimpleGraph,
};

/// Argument of `bd(...)` or the second factor of `prod(...)`: a graph that
/// only needs to be simple, not bipartite by construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SimpleExpr {
    Cycle(usize),
    Complete(usize),
    Bipartite(Box<FamilyExpr>),
}

impl SimpleExpr {
    pub fn build(&self) -> Result<SimpleGraph, GraphError> {
        match self {
            SimpleExpr::Cycle(m) => simple_cycle(*m),
            SimpleExpr::Complete(n) => Ok(complete_simple(*n)),
            SimpleExpr::Bipartite(e) => Ok(e.build()?.to_simple()),
        }
    }
}

impl fmt::Display for SimpleExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimpleExpr::Cycle(m) => write!(f, "C:{m}"),
            SimpleExpr::Complete(n) => write!(f, "K:{n}"),
            SimpleExpr::Bipartite(e) => write!(f, "{e}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FamilyExpr {
    K2,
    Cycle(usize),
    Path(usize),
    Kmn(usize, usize),
    Star(usize),
    Hypercube(u32),
    FoldedHypercube(u32),
    BlowupCycle(usize),
    Bcp(usize),
    S14,
    GPrime,
    Prod(Box<FamilyExpr>, Box<SimpleExpr>),
    Bd(Box<SimpleExpr>),
    Union(Vec<FamilyExpr>),
}

impl FamilyExpr {
    pub fn parse(input: &str) -> Result<FamilyExpr, GraphError> {
        parse_expr(input)
    }

    pub fn build(&self) -> Result<BipartiteGraph, GraphError> {
        match self {
            FamilyExpr::K2 => Ok(k2()),
            FamilyExpr::Cycle(m) => cycle(*m),
            FamilyExpr::Path(n) => path(*n),
            FamilyExpr::Kmn(m, n) => complete_bipartite(*m, *n),
            FamilyExpr::Star(n) => star(*n),
            FamilyExpr::Hypercube(d) => hypercube(*d),
            FamilyExpr::FoldedHypercube(d) => folded_hypercube(*d),
            FamilyExpr::BlowupCycle(n) => blowup_cycle(*n),
            FamilyExpr::Bcp(n) => bcp(*n),
            FamilyExpr::S14 => Ok(s14()),
            FamilyExpr::GPrime => Ok(g_prime()),
            FamilyExpr::Prod(g, h) => cartesian_product(&g.build()?, &h.build()?),
            FamilyExpr::Bd(s) => Ok(bipartite_double(&s.build()?)),
            FamilyExpr::Union(parts) => {
                let built: Vec<BipartiteGraph> = parts
                    .iter()
                    .enumerate()
                    .map(|(i, e)| Ok(prefix_y_labels(&e.build()?, &format!("u{}.", i + 1))))
                    .collect::<Result<_, GraphError>>()?;
                union_graph(&built.iter().collect::<Vec<_>>())
            }
        }
    }
}

impl fmt::Display for FamilyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyExpr::K2 => write!(f, "K2"),
            FamilyExpr::Cycle(m) => write!(f, "C:{m}"),
            FamilyExpr::Path(n) => write!(f, "P:{n}"),
            FamilyExpr::Kmn(m, n) => write!(f, "Kmn:{m},{n}"),
            FamilyExpr::Star(n) => write!(f, "star:{n}"),
            FamilyExpr::Hypercube(d) => write!(f, "Q:{d}"),
            FamilyExpr::FoldedHypercube(d) => write!(f, "FQ:{d}"),
            FamilyExpr::BlowupCycle(n) => write!(f, "blowup:{n}"),
            FamilyExpr::Bcp(n) => write!(f, "bcp:{n}"),
            FamilyExpr::S14 => write!(f, "s14"),
            FamilyExpr::GPrime => write!(f, "gprime"),
            FamilyExpr::Prod(g, h) => write!(f, "prod({g};{h})"),
            FamilyExpr::Bd(s) => write!(f, "bd({s})"),
            FamilyExpr::Union(parts) => {
                write!(f, "union(")?;
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, ";")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// Copy of `g` with every Y-side label prefixed; X labels are untouched.
pub fn prefix_y_labels(g: &BipartiteGraph, prefix: &str) -> BipartiteGraph {
    let mut out = BipartiteGraph::new();
    for v in 0..g.vertex_count() {
        let label = match g.side(v) {
            Side::X => g.label(v).to_string(),
            Side::Y => format!("{prefix}{}", g.label(v)),
        };
        out.add_vertex(label, g.side(v)).expect("labels unique");
    }
    for (u, v) in g.edges() {
        out.add_signed_edge(u, v, g.sign(u, v)).expect("edge valid");
    }
    out
}

pub fn parse_expr(input: &str) -> Result<FamilyExpr, GraphError> {
    let mut p = Parser {
        text: input,
        pos: 0,
    };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.text.len() {
        return Err(p.error("trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn error(&self, msg: impl Into<String>) -> GraphError {
        GraphError::Parse {
            at: self.pos,
            msg: msg.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.rest().starts_with(' ') {
            self.pos += 1;
        }
    }

    fn rest(&self) -> &'a str {
        &self.text[self.pos..]
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), GraphError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected {token:?}")))
        }
    }

    fn number(&mut self) -> Result<usize, GraphError> {
        self.skip_ws();
        let digits: String = self.rest().chars().take_while(char::is_ascii_digit).collect();
        if digits.is_empty() {
            return Err(self.error("expected a number"));
        }
        self.pos += digits.len();
        digits
            .parse()
            .map_err(|_| self.error("number out of range"))
    }

    fn expr(&mut self) -> Result<FamilyExpr, GraphError> {
        self.skip_ws();
        if self.eat("prod(") {
            let g = self.expr()?;
            self.expect(";")?;
            let h = self.simple_expr()?;
            self.expect(")")?;
            return Ok(FamilyExpr::Prod(Box::new(g), Box::new(h)));
        }
        if self.eat("bd(") {
            let s = self.simple_expr()?;
            self.expect(")")?;
            return Ok(FamilyExpr::Bd(Box::new(s)));
        }
        if self.eat("union(") {
            let mut parts = vec![self.expr()?];
            while self.eat(";") {
                parts.push(self.expr()?);
            }
            self.expect(")")?;
            if parts.len() < 2 {
                return Err(self.error("union needs at least two parts"));
            }
            return Ok(FamilyExpr::Union(parts));
        }
        if self.eat("Kmn:") {
            let m = self.number()?;
            self.expect(",")?;
            let n = self.number()?;
            return Ok(FamilyExpr::Kmn(m, n));
        }
        if self.eat("K2") {
            return Ok(FamilyExpr::K2);
        }
        if self.eat("C:") {
            return Ok(FamilyExpr::Cycle(self.number()?));
        }
        if self.eat("P:") {
            return Ok(FamilyExpr::Path(self.number()?));
        }
        if self.eat("star:") {
            return Ok(FamilyExpr::Star(self.number()?));
        }
        if self.eat("Q:") {
            return Ok(FamilyExpr::Hypercube(self.number()? as u32));
        }
        if self.eat("FQ:") {
            return Ok(FamilyExpr::FoldedHypercube(self.number()? as u32));
        }
        if self.eat("blowup:") {
            return Ok(FamilyExpr::BlowupCycle(self.number()?));
        }
        if self.eat("bcp:") {
            return Ok(FamilyExpr::Bcp(self.number()?));
        }
        if self.eat("s14") {
            return Ok(FamilyExpr::S14);
        }
        if self.eat("gprime") {
            return Ok(FamilyExpr::GPrime);
        }
        Err(self.error("expected a family expression"))
    }

    fn simple_expr(&mut self) -> Result<SimpleExpr, GraphError> {
        self.skip_ws();
        if self.eat("K:") {
            return Ok(SimpleExpr::Complete(self.number()?));
        }
        // "C:n" could be an odd cycle here; try the simple reading first and
        // fall back to the bipartite grammar for everything else.
        let save = self.pos;
        if self.eat("C:") {
            let m = self.number()?;
            if m % 2 == 1 {
                return Ok(SimpleExpr::Cycle(m));
            }
            self.pos = save;
        }
        Ok(SimpleExpr::Bipartite(Box::new(self.expr()?)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_rebuilds_spec_examples() {
        for (text, vertices) in [
            ("Kmn:2,3", 5),
            ("Q:3", 8),
            ("C:6", 6),
            ("prod(Kmn:2,2;C:4)", 16),
            ("prod(Q:2;K2)", 8),
            ("s14", 14),
            ("bd(C:3)", 6),
            ("union(star:2;star:3)", 6),
            ("prod(Kmn:2,2;C:6)", 24),
        ] {
            let e = FamilyExpr::parse(text).unwrap();
            assert_eq!(e.to_string(), text, "display is canonical");
            let g = e.build().unwrap();
            assert_eq!(g.vertex_count(), vertices, "size of {text}");
            g.audit().unwrap();
        }
    }

    #[test]
    fn union_shares_centers_but_not_leaves() {
        let g = FamilyExpr::parse("union(star:2;star:3)").unwrap().build().unwrap();
        assert_eq!(g.x_vertices().len(), 1, "centers merge");
        assert_eq!(g.y_vertices().len(), 5, "leaves stay disjoint");
    }

    #[test]
    fn parse_errors_carry_positions() {
        for bad in ["", "Kmn:2", "prod(K2)", "C:x", "nosuch", "K2junk"] {
            match FamilyExpr::parse(bad) {
                Err(GraphError::Parse { .. }) => {}
                other => panic!("{bad:?} should be a parse error, got {other:?}"),
            }
        }
    }

    #[test]
    fn odd_cycle_allowed_only_in_simple_position() {
        assert!(FamilyExpr::parse("bd(C:3)").unwrap().build().is_ok());
        let e = FamilyExpr::parse("prod(K2;C:5)").unwrap();
        assert!(matches!(e.build(), Err(GraphError::NotBipartite(_))));
        assert!(FamilyExpr::parse("C:5").unwrap().build().is_err());
    }
}
