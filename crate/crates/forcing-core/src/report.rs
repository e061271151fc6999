//! Report documents: one structured, schema-versioned JSON text per run,
//! with stable key order (struct order) so diffs stay meaningful. Wall
//! clock readings live in a single `timings_ms` map so that two runs of
//! the same command differ in nothing else.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graphs::BipartiteGraph;
use crate::rank::RankCertificate;

pub const SCHEMA_VERSION: &str = "1";

pub fn tool_version() -> String {
    env!("CARGO_PKG_VERSION").to_string()
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct GraphDescriptor {
    pub expr: String,
    pub vertices: usize,
    pub edges: usize,
    pub x_size: usize,
    pub y_size: usize,
}

impl GraphDescriptor {
    pub fn new(expr: &str, g: &BipartiteGraph) -> Self {
        GraphDescriptor {
            expr: expr.to_string(),
            vertices: g.vertex_count(),
            edges: g.edge_count(),
            x_size: g.x_vertices().len(),
            y_size: g.y_vertices().len(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct StageRecord {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct RankCertificateDoc {
    pub label: String,
    pub field: String,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub corank: usize,
    pub pivot_cols: Vec<usize>,
}

impl RankCertificateDoc {
    pub fn new(label: &str, c: &RankCertificate) -> Self {
        RankCertificateDoc {
            label: label.to_string(),
            field: c.field.clone(),
            rows: c.rows,
            cols: c.cols,
            rank: c.rank,
            corank: c.corank,
            pivot_cols: c.pivot_cols.clone(),
        }
    }
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ResidualDoc {
    pub zero: bool,
    pub first_nonzero: Option<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct DependencyDoc {
    pub case: String,
    pub top: ResidualDoc,
    pub bottom: ResidualDoc,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct MatchingEntry {
    pub edges: Vec<String>,
    pub f: String,
}

#[derive(Serialize, Deserialize, Clone, Debug, Default, PartialEq, Eq)]
pub struct ForcingDoc {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lower_kind: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_bound: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub upper_matching: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub closure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matchings_seen: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<MatchingEntry>>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
pub struct ReportDocument {
    pub schema_version: String,
    pub tool_version: String,
    pub command: String,
    pub graph: Option<GraphDescriptor>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field: Option<String>,
    pub verdict: String,
    pub stages: Vec<StageRecord>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub rank_certificates: Vec<RankCertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dependency: Option<DependencyDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub forcing: Option<ForcingDoc>,
    pub timings_ms: BTreeMap<String, u128>,
}

impl ReportDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// The document with timings removed, for reproducibility comparison.
    pub fn stripped_of_timings(&self) -> ReportDocument {
        let mut doc = self.clone();
        doc.timings_ms = BTreeMap::new();
        doc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_order_is_stable() {
        let doc = ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            tool_version: tool_version(),
            command: "certify Kmn:2,2 --k 2".into(),
            graph: None,
            field: Some("Q".into()),
            verdict: "EXACT f = 4".into(),
            stages: vec![],
            rank_certificates: vec![],
            dependency: None,
            forcing: None,
            timings_ms: BTreeMap::new(),
        };
        let json = doc.to_json();
        let schema_at = json.find("schema_version").unwrap();
        let command_at = json.find("command").unwrap();
        let verdict_at = json.find("verdict").unwrap();
        assert!(schema_at < command_at && command_at < verdict_at);
        let back: ReportDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(back, doc);
    }
}
