//! Certificate file format: a self-contained structured text document with
//! the host graph inline, the field descriptor, both vertex orders, and the
//! matrices in the field's scalar syntax (entries comma-separated).
//!
//! ```text
//! certificate v1 involutory
//! field GF(7)
//! graph {
//! p bipartite 2 2
//! ...
//! }
//! rows x0 x1
//! cols y0 y1
//! matrix B {
//! 1 mod 7, 1 mod 7
//! ...
//! }
//! matrix Binv { ... }
//! ```
//!
//! Pairs use `certificate v1 pair` with sections `B` and `C`. Parsing
//! re-runs the full certificate verification, and emitting a parsed
//! document reproduces it byte for byte.

use crate::fields::{Field, FieldError, PrimeField, QuadraticField, Rationals};
use crate::graphs::{parse_graph, write_graph, BipartiteGraph, GraphError};
use crate::matrix::Matrix;

use super::{CertError, InvolutoryCertificate, RowInversePair, WeightedBiAdjacency};

pub fn write_involutory<F: Field>(cert: &InvolutoryCertificate<F>) -> String {
    write_doc(
        "involutory",
        cert.b(),
        &[("B", cert.b().matrix()), ("Binv", cert.b_inv().matrix())],
    )
}

pub fn write_pair<F: Field>(pair: &RowInversePair<F>) -> String {
    write_doc(
        "pair",
        pair.b(),
        &[("B", pair.b().matrix()), ("C", pair.c().matrix())],
    )
}

fn write_doc<F: Field>(
    kind: &str,
    b: &WeightedBiAdjacency<F>,
    matrices: &[(&str, &Matrix<F>)],
) -> String {
    let host = b.host();
    let mut out = String::new();
    out.push_str(&format!("certificate v1 {kind}\n"));
    out.push_str(&format!("field {}\n", b.matrix().field().descriptor()));
    out.push_str("graph {\n");
    out.push_str(&write_graph(host));
    out.push_str("}\n");
    let labels = |vs: &[usize]| {
        vs.iter()
            .map(|&v| host.label(v).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    out.push_str(&format!("rows {}\n", labels(b.row_vertices())));
    out.push_str(&format!("cols {}\n", labels(b.col_vertices())));
    for (name, m) in matrices {
        out.push_str(&format!("matrix {name} {{\n"));
        for row in m.render_rows() {
            out.push_str(&row);
            out.push('\n');
        }
        out.push_str("}\n");
    }
    out
}

/// A certificate loaded from text; the field is only known at runtime.
pub enum ParsedCertificate {
    RationalInvolutory(InvolutoryCertificate<Rationals>),
    RationalPair(RowInversePair<Rationals>),
    PrimeInvolutory(InvolutoryCertificate<PrimeField>),
    PrimePair(RowInversePair<PrimeField>),
    QuadraticInvolutory(InvolutoryCertificate<QuadraticField>),
    QuadraticPair(RowInversePair<QuadraticField>),
}

impl ParsedCertificate {
    pub fn kind(&self) -> &'static str {
        match self {
            ParsedCertificate::RationalInvolutory(_)
            | ParsedCertificate::PrimeInvolutory(_)
            | ParsedCertificate::QuadraticInvolutory(_) => "involutory",
            _ => "pair",
        }
    }

    pub fn emit(&self) -> String {
        match self {
            ParsedCertificate::RationalInvolutory(c) => write_involutory(c),
            ParsedCertificate::RationalPair(p) => write_pair(p),
            ParsedCertificate::PrimeInvolutory(c) => write_involutory(c),
            ParsedCertificate::PrimePair(p) => write_pair(p),
            ParsedCertificate::QuadraticInvolutory(c) => write_involutory(c),
            ParsedCertificate::QuadraticPair(p) => write_pair(p),
        }
    }
}

struct RawDoc {
    kind: String,
    field: String,
    graph: BipartiteGraph,
    rows: Vec<String>,
    cols: Vec<String>,
    matrices: Vec<(String, Vec<String>)>,
}

fn file_err(line: usize, msg: impl Into<String>) -> CertError {
    CertError::Graph(GraphError::File {
        line,
        msg: msg.into(),
    })
}

fn split_raw(text: &str) -> Result<RawDoc, CertError> {
    let mut lines = text.lines().enumerate().peekable();
    let mut kind = None;
    let mut field = None;
    let mut graph = None;
    let mut rows = None;
    let mut cols = None;
    let mut matrices = Vec::new();
    while let Some((i, raw)) = lines.next() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("certificate ") {
            let mut parts = rest.split_whitespace();
            if parts.next() != Some("v1") {
                return Err(file_err(i + 1, "unsupported certificate version"));
            }
            kind = Some(
                parts
                    .next()
                    .ok_or_else(|| file_err(i + 1, "missing certificate kind"))?
                    .to_string(),
            );
        } else if let Some(rest) = line.strip_prefix("field ") {
            field = Some(rest.trim().to_string());
        } else if line == "graph {" {
            let mut body = String::new();
            loop {
                let (j, raw) = lines
                    .next()
                    .ok_or_else(|| file_err(i + 1, "unterminated graph block"))?;
                if raw.trim() == "}" {
                    break;
                }
                body.push_str(raw);
                body.push('\n');
                let _ = j;
            }
            graph = Some(parse_graph(&body)?);
        } else if let Some(rest) = line.strip_prefix("rows ") {
            rows = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = line.strip_prefix("cols ") {
            cols = Some(rest.split_whitespace().map(str::to_string).collect());
        } else if let Some(rest) = line.strip_prefix("matrix ") {
            let name = rest
                .strip_suffix('{')
                .ok_or_else(|| file_err(i + 1, "expected `matrix <name> {`"))?
                .trim()
                .to_string();
            let mut body = Vec::new();
            loop {
                let (_, raw) = lines
                    .next()
                    .ok_or_else(|| file_err(i + 1, "unterminated matrix block"))?;
                if raw.trim() == "}" {
                    break;
                }
                body.push(raw.to_string());
            }
            matrices.push((name, body));
        } else {
            return Err(file_err(i + 1, format!("unknown record {line:?}")));
        }
    }
    Ok(RawDoc {
        kind: kind.ok_or_else(|| file_err(0, "missing certificate header"))?,
        field: field.ok_or_else(|| file_err(0, "missing field line"))?,
        graph: graph.ok_or_else(|| file_err(0, "missing graph block"))?,
        rows: rows.ok_or_else(|| file_err(0, "missing rows line"))?,
        cols: cols.ok_or_else(|| file_err(0, "missing cols line"))?,
        matrices,
    })
}

fn parse_matrix<F: Field>(
    field: &F,
    rows: usize,
    cols: usize,
    body: &[String],
) -> Result<Matrix<F>, CertError> {
    if body.len() != rows {
        return Err(file_err(0, format!("matrix has {} rows, expected {rows}", body.len())));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for line in body {
        let entries: Vec<&str> = line.split(',').map(str::trim).collect();
        if entries.len() != cols {
            return Err(file_err(
                0,
                format!("matrix row has {} entries, expected {cols}", entries.len()),
            ));
        }
        for e in entries {
            data.push(field.parse(e)?);
        }
    }
    Ok(Matrix::new(field.clone(), rows, cols, data))
}

fn resolve_orders(
    graph: &BipartiteGraph,
    labels: &[String],
) -> Result<Vec<usize>, CertError> {
    labels
        .iter()
        .map(|l| {
            graph
                .index_of(l)
                .ok_or_else(|| CertError::Graph(GraphError::UnknownLabel(l.clone())))
        })
        .collect()
}

fn build_typed<F: Field>(field: F, raw: &RawDoc) -> Result<(F, RawParts<F>), CertError> {
    let rows = resolve_orders(&raw.graph, &raw.rows)?;
    let cols = resolve_orders(&raw.graph, &raw.cols)?;
    let mut first = None;
    let mut second = None;
    for (name, body) in &raw.matrices {
        let m = parse_matrix(&field, rows.len(), cols.len(), body)?;
        match name.as_str() {
            "B" => first = Some(m),
            "Binv" | "C" => {
                let m = if name == "Binv" {
                    // Binv is stored with rows indexed by the column side.
                    parse_matrix(&field, cols.len(), rows.len(), body)?
                } else {
                    m
                };
                second = Some(m);
            }
            other => return Err(file_err(0, format!("unknown matrix section {other:?}"))),
        }
    }
    let parts = RawParts {
        rows,
        cols,
        b: first.ok_or_else(|| file_err(0, "missing matrix B"))?,
        second: second.ok_or_else(|| file_err(0, "missing matrix Binv or C"))?,
    };
    Ok((field, parts))
}

struct RawParts<F: Field> {
    rows: Vec<usize>,
    cols: Vec<usize>,
    b: Matrix<F>,
    second: Matrix<F>,
}

pub fn parse_certificate(text: &str) -> Result<ParsedCertificate, CertError> {
    let raw = split_raw(text)?;
    let desc = raw.field.as_str();
    let is_pair = match raw.kind.as_str() {
        "involutory" => false,
        "pair" => true,
        other => return Err(file_err(0, format!("unknown certificate kind {other:?}"))),
    };
    if desc == "Q" {
        let (_, parts) = build_typed(Rationals, &raw)?;
        return finish(raw.graph, parts, is_pair, |c| {
            ParsedCertificate::RationalInvolutory(c)
        }, ParsedCertificate::RationalPair);
    }
    if let Some(p) = desc.strip_prefix("GF(").and_then(|s| s.strip_suffix(')')) {
        let p: u64 = p.parse().map_err(|_| file_err(0, "bad modulus"))?;
        let (_, parts) = build_typed(PrimeField::new(p)?, &raw)?;
        return finish(raw.graph, parts, is_pair, |c| {
            ParsedCertificate::PrimeInvolutory(c)
        }, ParsedCertificate::PrimePair);
    }
    if let Some(d) = desc
        .strip_prefix("Q(sqrt(")
        .and_then(|s| s.strip_suffix("))"))
    {
        let d: i64 = d.parse().map_err(|_| file_err(0, "bad radicand"))?;
        let (_, parts) = build_typed(QuadraticField::new(d)?, &raw)?;
        return finish(raw.graph, parts, is_pair, |c| {
            ParsedCertificate::QuadraticInvolutory(c)
        }, ParsedCertificate::QuadraticPair);
    }
    Err(CertError::Field(FieldError::Parse {
        input: desc.to_string(),
        field: "field descriptor".to_string(),
        reason: "expected Q, GF(p), or Q(sqrt(d))".to_string(),
    }))
}

fn finish<F: Field>(
    graph: BipartiteGraph,
    parts: RawParts<F>,
    is_pair: bool,
    wrap_inv: impl FnOnce(InvolutoryCertificate<F>) -> ParsedCertificate,
    wrap_pair: impl FnOnce(RowInversePair<F>) -> ParsedCertificate,
) -> Result<ParsedCertificate, CertError> {
    if is_pair {
        let pair = RowInversePair::assemble(graph, parts.rows, parts.cols, parts.b, parts.second)?;
        Ok(wrap_pair(pair))
    } else {
        let cert =
            InvolutoryCertificate::assemble(graph, parts.rows, parts.cols, parts.b, parts.second)?;
        Ok(wrap_inv(cert))
    }
}

/// Emit any certificate value as its canonical document.
pub fn write_certificate(cert: &ParsedCertificate) -> String {
    cert.emit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::certificates::{
        fourier_pair, gprime_certificate, knn_rational, s14_certificate,
    };

    #[test]
    fn round_trips_are_byte_identical() {
        let docs = vec![
            write_involutory(&knn_rational(2).unwrap()),
            write_involutory(&s14_certificate().unwrap()),
            write_involutory(&gprime_certificate().unwrap()),
            write_pair(&fourier_pair(3, 7).unwrap()),
        ];
        for doc in docs {
            let parsed = parse_certificate(&doc).unwrap();
            assert_eq!(parsed.emit(), doc);
        }
    }

    #[test]
    fn corrupted_documents_fail_verification() {
        let doc = write_involutory(&knn_rational(2).unwrap());
        // Flip a matrix entry: 2 -> 3 in the first B row.
        let corrupted = doc.replacen("2, 1", "3, 1", 1);
        assert_ne!(doc, corrupted);
        assert!(parse_certificate(&corrupted).is_err());
    }

    #[test]
    fn mixed_field_entries_are_rejected() {
        let doc = write_pair(&fourier_pair(2, 5).unwrap());
        let corrupted = doc.replace("mod 5", "mod 7");
        assert!(matches!(
            parse_certificate(&corrupted),
            Err(CertError::Field(FieldError::MixedField { .. }))
        ));
    }
}
