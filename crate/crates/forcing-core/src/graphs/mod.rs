//! Bipartite graphs with an explicit side map, plus the graph operations the
//! certificates are built on: Cartesian products, bipartite doubles, X-side
//! deletion, and Y-disjoint unions.
//!
//! Graphs are immutable once constructed; every constructor validates that
//! each edge joins an X-vertex to a Y-vertex.

mod expr;
mod families;
mod io;

pub use expr::{parse_expr, prefix_y_labels, FamilyExpr, SimpleExpr};
pub use families::*;
pub use io::{parse_graph, write_graph};

use std::collections::{BTreeMap, BTreeSet, HashMap};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("duplicate vertex label {0:?}")]
    DuplicateLabel(String),
    #[error("unknown vertex label {0:?}")]
    UnknownLabel(String),
    #[error("edge {0:?} -- {1:?} joins two {2}-side vertices")]
    SameSideEdge(String, String, char),
    #[error("loop edge at {0:?}")]
    LoopEdge(String),
    #[error("duplicate edge {0:?} -- {1:?}")]
    DuplicateEdge(String, String),
    #[error("graph is not bipartite: {0}")]
    NotBipartite(String),
    #[error("cannot delete {0:?}: not an X-side vertex")]
    NonXDeletion(String),
    #[error("Y-side label collision across union parts: {0:?}")]
    YSideCollision(String),
    #[error("label {0:?} used on both sides across union parts")]
    SideConflict(String),
    #[error("invalid family: {0}")]
    BadFamily(String),
    #[error("parse error at {at}: {msg}")]
    Parse { at: usize, msg: String },
    #[error("graph file, line {line}: {msg}")]
    File { line: usize, msg: String },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, PartialOrd, Ord)]
pub enum Side {
    X,
    Y,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::X => Side::Y,
            Side::Y => Side::X,
        }
    }

    pub fn xor(self, other: Side) -> Side {
        if self == other {
            Side::X
        } else {
            Side::Y
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::X => 'X',
            Side::Y => 'Y',
        }
    }
}

/// Edge attribute consumed by the signed-matrix builders; everything else
/// treats edges as unsigned.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

/// Unlabeled-side simple graph, used where bipartiteness is not promised
/// (bipartite doubles take one, and Cartesian products 2-color one).
#[derive(Clone, Debug)]
pub struct SimpleGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    adj: Vec<BTreeSet<usize>>,
}

impl SimpleGraph {
    pub fn new() -> Self {
        SimpleGraph {
            labels: Vec::new(),
            index: HashMap::new(),
            adj: Vec::new(),
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>) -> Result<usize, GraphError> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(GraphError::DuplicateLabel(label));
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.adj.push(BTreeSet::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::LoopEdge(self.labels[u].clone()));
        }
        if self.adj[u].contains(&v) {
            return Err(GraphError::DuplicateEdge(
                self.labels[u].clone(),
                self.labels[v].clone(),
            ));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    /// BFS 2-coloring, component roots taken in index order and colored X.
    pub fn two_color(&self) -> Result<Vec<Side>, GraphError> {
        let n = self.vertex_count();
        let mut color: Vec<Option<Side>> = vec![None; n];
        for root in 0..n {
            if color[root].is_some() {
                continue;
            }
            color[root] = Some(Side::X);
            let mut queue = std::collections::VecDeque::from([root]);
            while let Some(u) = queue.pop_front() {
                let cu = color[u].unwrap();
                for v in self.neighbors(u) {
                    match color[v] {
                        None => {
                            color[v] = Some(cu.flip());
                            queue.push_back(v);
                        }
                        Some(cv) if cv == cu => {
                            return Err(GraphError::NotBipartite(format!(
                                "odd cycle through edge {} -- {}",
                                self.labels[u], self.labels[v]
                            )));
                        }
                        Some(_) => {}
                    }
                }
            }
        }
        Ok(color.into_iter().map(Option::unwrap).collect())
    }
}

impl Default for SimpleGraph {
    fn default() -> Self {
        SimpleGraph::new()
    }
}

/// Labeled bipartite graph with a stored side assignment.
///
/// Vertex ids follow insertion order; all derived orders (matrix rows,
/// matchings, file output) are stated in terms of that order, so every
/// constructor documents how it emits vertices.
#[derive(Clone, Debug)]
pub struct BipartiteGraph {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    side: Vec<Side>,
    adj: Vec<BTreeSet<usize>>,
    signs: BTreeMap<(usize, usize), Sign>,
}

impl BipartiteGraph {
    pub fn new() -> Self {
        BipartiteGraph {
            labels: Vec::new(),
            index: HashMap::new(),
            side: Vec::new(),
            adj: Vec::new(),
            signs: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, label: impl Into<String>, side: Side) -> Result<usize, GraphError> {
        let label = label.into();
        if self.index.contains_key(&label) {
            return Err(GraphError::DuplicateLabel(label));
        }
        let id = self.labels.len();
        self.index.insert(label.clone(), id);
        self.labels.push(label);
        self.side.push(side);
        self.adj.push(BTreeSet::new());
        Ok(id)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        self.add_signed_edge(u, v, Sign::Plus)
    }

    pub fn add_signed_edge(&mut self, u: usize, v: usize, sign: Sign) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::LoopEdge(self.labels[u].clone()));
        }
        if self.side[u] == self.side[v] {
            return Err(GraphError::SameSideEdge(
                self.labels[u].clone(),
                self.labels[v].clone(),
                self.side[u].letter(),
            ));
        }
        if self.adj[u].contains(&v) {
            return Err(GraphError::DuplicateEdge(
                self.labels[u].clone(),
                self.labels[v].clone(),
            ));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        self.signs.insert((u.min(v), u.max(v)), sign);
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.signs.len()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn side(&self, v: usize) -> Side {
        self.side[v]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn sign(&self, u: usize, v: usize) -> Sign {
        self.signs
            .get(&(u.min(v), u.max(v)))
            .copied()
            .unwrap_or(Sign::Plus)
    }

    pub fn has_signs(&self) -> bool {
        self.signs.values().any(|s| *s == Sign::Minus)
    }

    /// Edges as (smaller id, larger id), ascending.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.signs.keys().copied()
    }

    /// Vertex ids of one side, in insertion order.
    pub fn side_vertices(&self, s: Side) -> Vec<usize> {
        (0..self.vertex_count()).filter(|&v| self.side[v] == s).collect()
    }

    pub fn x_vertices(&self) -> Vec<usize> {
        self.side_vertices(Side::X)
    }

    pub fn y_vertices(&self) -> Vec<usize> {
        self.side_vertices(Side::Y)
    }

    pub fn is_balanced(&self) -> bool {
        self.x_vertices().len() == self.y_vertices().len()
    }

    /// Re-check every stored invariant; constructors already enforce these,
    /// tests call this as the bipartiteness audit.
    pub fn audit(&self) -> Result<(), GraphError> {
        for (u, v) in self.edges() {
            if self.side[u] == self.side[v] {
                return Err(GraphError::SameSideEdge(
                    self.labels[u].clone(),
                    self.labels[v].clone(),
                    self.side[u].letter(),
                ));
            }
            if !self.adj[u].contains(&v) || !self.adj[v].contains(&u) {
                return Err(GraphError::UnknownLabel(format!(
                    "adjacency out of sync at {} -- {}",
                    self.labels[u], self.labels[v]
                )));
            }
        }
        Ok(())
    }

    pub fn to_simple(&self) -> SimpleGraph {
        let mut g = SimpleGraph::new();
        for l in &self.labels {
            g.add_vertex(l.clone()).expect("labels unique");
        }
        for (u, v) in self.edges() {
            g.add_edge(u, v).expect("edges valid");
        }
        g
    }

    /// Induced subgraph after removing `remove`; remaining vertices keep
    /// their relative order and labels.
    pub fn induced_without(&self, remove: &BTreeSet<usize>) -> BipartiteGraph {
        let mut g = BipartiteGraph::new();
        let mut new_id = vec![usize::MAX; self.vertex_count()];
        for (v, slot) in new_id.iter_mut().enumerate() {
            if !remove.contains(&v) {
                *slot = g
                    .add_vertex(self.labels[v].clone(), self.side[v])
                    .expect("labels unique");
            }
        }
        for (u, v) in self.edges() {
            if new_id[u] != usize::MAX && new_id[v] != usize::MAX {
                g.add_signed_edge(new_id[u], new_id[v], self.sign(u, v))
                    .expect("edges valid");
            }
        }
        g
    }

    /// Same vertex set, sides, and edge set under the identity on indices.
    pub fn adjacency_eq(&self, other: &BipartiteGraph) -> bool {
        self.vertex_count() == other.vertex_count()
            && self.side == other.side
            && self.signs.keys().eq(other.signs.keys())
    }

    /// Sorted degree sequence, for product-commutativity checks.
    pub fn degree_multiset(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.vertex_count()).map(|v| self.degree(v)).collect();
        d.sort_unstable();
        d
    }
}

impl Default for BipartiteGraph {
    fn default() -> Self {
        BipartiteGraph::new()
    }
}

/// Cartesian product G □ H.
///
/// Vertices are emitted in row-major (g, h) order with labels `(g,h)`;
/// vertex (gi, hj) gets index `gi * |V(H)| + hj`. The side of (g, h) is
/// side_G(g) xor color_H(h), where H's 2-coloring roots each component at
/// its smallest index with color X. H containing an odd cycle is rejected.
pub fn cartesian_product(
    g: &BipartiteGraph,
    h: &SimpleGraph,
) -> Result<BipartiteGraph, GraphError> {
    let h_color = h.two_color()?;
    let hn = h.vertex_count();
    let mut p = BipartiteGraph::new();
    for gi in 0..g.vertex_count() {
        for (hj, &h_side) in h_color.iter().enumerate() {
            let label = format!("({},{})", g.label(gi), h.label(hj));
            let side = g.side(gi).xor(h_side);
            let id = p.add_vertex(label, side)?;
            debug_assert_eq!(id, gi * hn + hj);
        }
    }
    for (a, b) in g.edges() {
        for hj in 0..hn {
            p.add_edge(a * hn + hj, b * hn + hj)?;
        }
    }
    for gi in 0..g.vertex_count() {
        for c in 0..hn {
            for d in h.neighbors(c) {
                if c < d {
                    p.add_edge(gi * hn + c, gi * hn + d)?;
                }
            }
        }
    }
    Ok(p)
}

/// Bipartite double bd(G) = G × K₂: vertices (v, 0) and (v, 1) in row-major
/// order, edges (u,0) -- (v,1) for every edge uv of G, sides by the second
/// coordinate.
pub fn bipartite_double(g: &SimpleGraph) -> BipartiteGraph {
    let mut b = BipartiteGraph::new();
    for v in 0..g.vertex_count() {
        for t in 0..2 {
            let side = if t == 0 { Side::X } else { Side::Y };
            b.add_vertex(format!("({},{})", g.label(v), t), side)
                .expect("labels unique");
        }
    }
    for u in 0..g.vertex_count() {
        for v in g.neighbors(u) {
            if u < v {
                b.add_edge(2 * u, 2 * v + 1).expect("edge valid");
                b.add_edge(2 * v, 2 * u + 1).expect("edge valid");
            }
        }
    }
    b
}

/// Induced subgraph after deleting a set of X-side vertices.
pub fn delete_x_vertices(
    g: &BipartiteGraph,
    labels: &[&str],
) -> Result<BipartiteGraph, GraphError> {
    let mut remove = BTreeSet::new();
    for l in labels {
        let v = g
            .index_of(l)
            .ok_or_else(|| GraphError::UnknownLabel(l.to_string()))?;
        if g.side(v) != Side::X {
            return Err(GraphError::NonXDeletion(l.to_string()));
        }
        remove.insert(v);
    }
    Ok(g.induced_without(&remove))
}

/// Union of bipartite graphs whose Y-sides are pairwise disjoint; equal
/// X-side labels denote the same vertex. Vertices appear in part order,
/// first occurrence wins.
pub fn union_graph(parts: &[&BipartiteGraph]) -> Result<BipartiteGraph, GraphError> {
    let mut g = BipartiteGraph::new();
    let mut y_owner: HashMap<String, usize> = HashMap::new();
    for (pi, part) in parts.iter().enumerate() {
        for v in 0..part.vertex_count() {
            let label = part.label(v);
            match (g.index_of(label), part.side(v)) {
                (None, side) => {
                    if side == Side::Y {
                        y_owner.insert(label.to_string(), pi);
                    }
                    g.add_vertex(label.to_string(), side)?;
                }
                (Some(existing), Side::X) => {
                    if g.side(existing) != Side::X {
                        return Err(GraphError::SideConflict(label.to_string()));
                    }
                }
                (Some(existing), Side::Y) => {
                    if g.side(existing) != Side::Y {
                        return Err(GraphError::SideConflict(label.to_string()));
                    }
                    return Err(GraphError::YSideCollision(label.to_string()));
                }
            }
        }
    }
    for part in parts {
        for (u, v) in part.edges() {
            let gu = g.index_of(part.label(u)).expect("inserted above");
            let gv = g.index_of(part.label(v)).expect("inserted above");
            g.add_signed_edge(gu, gv, part.sign(u, v))?;
        }
    }
    Ok(g)
}
