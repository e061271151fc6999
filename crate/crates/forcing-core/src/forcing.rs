//! The combinatorial side: perfect matchings, unique-extendability by
//! degree-one peeling, forcing sets, and the brute-force oracle for minimum
//! forcing numbers.
//!
//! Peeling is exact for bipartite graphs: a bipartite graph with a unique
//! perfect matching always has a degree-one vertex, so the peel empties the
//! graph exactly when the perfect matching is unique. A maximum-matching
//! check distinguishes "two or more" from "none" when the peel stalls.

use std::collections::{BTreeSet, VecDeque};

use itertools::Itertools;
use thiserror::Error;

use crate::graphs::{BipartiteGraph, Side};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ForcingError {
    #[error("graph has no perfect matching")]
    NoPerfectMatching,
    #[error("edge set is not a matching of the host graph: {0}")]
    NotAMatching(String),
    #[error("matching is not perfect (covers {covered} of {total} vertices)")]
    NotPerfect { covered: usize, total: usize },
    #[error("forcing-set candidate contains an edge outside the matching")]
    SubsetNotOfMatching,
    #[error("canonical matching does not extend uniquely: {0}")]
    UniquenessNotVerified(String),
    #[error("product graph does not have the expected shape: {0}")]
    ProductShape(String),
}

/// A set of pairwise vertex-disjoint edges, stored as sorted (min, max)
/// index pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    edges: Vec<(usize, usize)>,
}

impl Matching {
    pub fn from_edges(mut edges: Vec<(usize, usize)>) -> Matching {
        for e in &mut edges {
            *e = ((e.0).min(e.1), (e.0).max(e.1));
        }
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn vertices(&self) -> BTreeSet<usize> {
        self.edges.iter().flat_map(|&(u, v)| [u, v]).collect()
    }

    pub fn contains(&self, e: (usize, usize)) -> bool {
        let e = (e.0.min(e.1), e.0.max(e.1));
        self.edges.binary_search(&e).is_ok()
    }

    /// Edge list in canonical label order, e.g. for reports.
    pub fn render(&self, g: &BipartiteGraph) -> Vec<String> {
        self.edges
            .iter()
            .map(|&(u, v)| format!("{} -- {}", g.label(u), g.label(v)))
            .collect()
    }

    /// Checks disjointness and edge membership against the host.
    pub fn validate(&self, g: &BipartiteGraph) -> Result<(), ForcingError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &self.edges {
            if !g.has_edge(u, v) {
                return Err(ForcingError::NotAMatching(format!(
                    "{} -- {} is not an edge",
                    g.label(u),
                    g.label(v)
                )));
            }
            if !seen.insert(u) || !seen.insert(v) {
                return Err(ForcingError::NotAMatching(format!(
                    "vertex {} covered twice",
                    g.label(u)
                )));
            }
        }
        Ok(())
    }

    pub fn is_perfect(&self, g: &BipartiteGraph) -> bool {
        self.validate(g).is_ok() && 2 * self.len() == g.vertex_count()
    }
}

/// Outcome of the uniqueness test.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PmStatus {
    /// No perfect matching at all.
    None,
    /// Exactly one perfect matching, returned explicitly.
    Unique(Matching),
    /// Two or more perfect matchings.
    Multiple,
}

/// All perfect matchings in deterministic lexicographic order (X-vertices
/// ascending, partners ascending), optionally capped.
pub struct Enumeration {
    pub matchings: Vec<Matching>,
    pub truncated: bool,
}

pub fn enumerate_perfect_matchings(g: &BipartiteGraph, cap: Option<usize>) -> Enumeration {
    let xs = g.x_vertices();
    let ys = g.y_vertices();
    let mut out = Enumeration {
        matchings: Vec::new(),
        truncated: false,
    };
    if xs.len() != ys.len() || !g.vertex_count().is_multiple_of(2) {
        return out;
    }
    let mut used = vec![false; g.vertex_count()];
    let mut chosen: Vec<(usize, usize)> = Vec::with_capacity(xs.len());
    backtrack(g, &xs, 0, &mut used, &mut chosen, cap, &mut out);
    out
}

fn backtrack(
    g: &BipartiteGraph,
    xs: &[usize],
    idx: usize,
    used: &mut Vec<bool>,
    chosen: &mut Vec<(usize, usize)>,
    cap: Option<usize>,
    out: &mut Enumeration,
) {
    if out.truncated {
        return;
    }
    if idx == xs.len() {
        if let Some(c) = cap {
            if out.matchings.len() >= c {
                out.truncated = true;
                return;
            }
        }
        out.matchings.push(Matching::from_edges(chosen.clone()));
        return;
    }
    let x = xs[idx];
    for y in g.neighbors(x) {
        if used[y] {
            continue;
        }
        used[y] = true;
        chosen.push((x, y));
        backtrack(g, xs, idx + 1, used, chosen, cap, out);
        chosen.pop();
        used[y] = false;
        if out.truncated {
            return;
        }
    }
}

/// Degree-one peeling on the subgraph induced by `alive`.
fn peel(g: &BipartiteGraph, mut alive: Vec<bool>) -> PmStatus {
    let n = g.vertex_count();
    let mut deg = vec![0usize; n];
    let mut remaining = 0usize;
    for v in 0..n {
        if alive[v] {
            remaining += 1;
            deg[v] = g.neighbors(v).filter(|&u| alive[u]).count();
        }
    }
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| alive[v] && deg[v] <= 1).collect();
    let mut committed = Vec::new();
    while remaining > 0 {
        let Some(v) = queue.pop_front() else {
            // Stalled with minimum degree 2: never a unique perfect matching.
            return if max_matching_is_perfect(g, &alive, remaining) {
                PmStatus::Multiple
            } else {
                PmStatus::None
            };
        };
        if !alive[v] || deg[v] > 1 {
            continue;
        }
        if deg[v] == 0 {
            return PmStatus::None;
        }
        let u = g
            .neighbors(v)
            .find(|&u| alive[u])
            .expect("degree-1 vertex has an alive neighbor");
        committed.push((v, u));
        alive[v] = false;
        alive[u] = false;
        remaining -= 2;
        for w in g.neighbors(u) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] <= 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    PmStatus::Unique(Matching::from_edges(committed))
}

fn max_matching_is_perfect(g: &BipartiteGraph, alive: &[bool], remaining: usize) -> bool {
    if !remaining.is_multiple_of(2) {
        return false;
    }
    let xs: Vec<usize> = (0..g.vertex_count())
        .filter(|&v| alive[v] && g.side(v) == Side::X)
        .collect();
    if 2 * xs.len() != remaining {
        return false;
    }
    let mut partner: Vec<Option<usize>> = vec![None; g.vertex_count()];
    let mut size = 0;
    for &x in &xs {
        let mut seen = vec![false; g.vertex_count()];
        if augment(g, alive, x, &mut seen, &mut partner) {
            size += 1;
        }
    }
    2 * size == remaining
}

fn augment(
    g: &BipartiteGraph,
    alive: &[bool],
    x: usize,
    seen: &mut Vec<bool>,
    partner: &mut Vec<Option<usize>>,
) -> bool {
    for y in g.neighbors(x) {
        if !alive[y] || seen[y] {
            continue;
        }
        seen[y] = true;
        let free = match partner[y] {
            None => true,
            Some(x2) => augment(g, alive, x2, seen, partner),
        };
        if free {
            partner[y] = Some(x);
            return true;
        }
    }
    false
}

/// Uniqueness of the perfect matching of `g`.
pub fn has_unique_pm(g: &BipartiteGraph) -> PmStatus {
    peel(g, vec![true; g.vertex_count()])
}

/// Is S a forcing set of M, i.e. is the perfect matching of G - V(S)
/// unique (it is then M minus S)?
pub fn is_forcing(
    g: &BipartiteGraph,
    m: &Matching,
    s: &Matching,
) -> Result<bool, ForcingError> {
    if !m.is_perfect(g) {
        m.validate(g)?;
        return Err(ForcingError::NotPerfect {
            covered: 2 * m.len(),
            total: g.vertex_count(),
        });
    }
    if !s.edges().iter().all(|&e| m.contains(e)) {
        return Err(ForcingError::SubsetNotOfMatching);
    }
    let mut alive = vec![true; g.vertex_count()];
    for v in s.vertices() {
        alive[v] = false;
    }
    Ok(matches!(peel(g, alive), PmStatus::Unique(_)))
}

/// Greedy packing of vertex-disjoint M-alternating cycles. Every forcing
/// set of M must pick an M-edge on each cycle of such a packing, so the
/// count is a valid lower bound for f(G, M).
pub fn alternating_cycle_bound(g: &BipartiteGraph, m: &Matching) -> usize {
    // Pair digraph: node per M-edge (x_p, y_p), arc p -> q iff x_p y_q is
    // an edge of G. Directed cycles correspond to M-alternating cycles.
    let pairs: Vec<(usize, usize)> = m
        .edges()
        .iter()
        .map(|&(u, v)| {
            if g.side(u) == Side::X {
                (u, v)
            } else {
                (v, u)
            }
        })
        .collect();
    let np = pairs.len();
    let arcs: Vec<Vec<usize>> = (0..np)
        .map(|p| {
            (0..np)
                .filter(|&q| q != p && g.has_edge(pairs[p].0, pairs[q].1))
                .collect()
        })
        .collect();
    let mut removed = vec![false; np];
    let mut count = 0;
    loop {
        match find_cycle(&arcs, &removed) {
            Some(cycle) => {
                for p in cycle {
                    removed[p] = true;
                }
                count += 1;
            }
            None => return count,
        }
    }
}

fn find_cycle(arcs: &[Vec<usize>], removed: &[bool]) -> Option<Vec<usize>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        White,
        Gray,
        Black,
    }
    let n = arcs.len();
    let mut mark = vec![Mark::White; n];
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for root in 0..n {
        if removed[root] || mark[root] != Mark::White {
            continue;
        }
        stack.push((root, 0));
        mark[root] = Mark::Gray;
        while let Some(&(v, next)) = stack.last() {
            let candidate = arcs[v][next..].iter().find(|&&w| !removed[w]).copied();
            match candidate {
                Some(w) => {
                    let consumed = arcs[v][next..]
                        .iter()
                        .position(|&x| x == w)
                        .expect("candidate present");
                    stack.last_mut().unwrap().1 = next + consumed + 1;
                    match mark[w] {
                        Mark::Gray => {
                            let start = stack.iter().position(|&(u, _)| u == w).unwrap();
                            return Some(stack[start..].iter().map(|&(u, _)| u).collect());
                        }
                        Mark::White => {
                            mark[w] = Mark::Gray;
                            stack.push((w, 0));
                        }
                        Mark::Black => {}
                    }
                }
                None => {
                    mark[v] = Mark::Black;
                    stack.pop();
                }
            }
        }
    }
    None
}

/// Result of a minimum-size search for one matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Exact { value: usize, witness: Matching },
    ExceedsCap { cap: usize },
}

/// Smallest forcing set of M, searching cardinalities in increasing order
/// and subsets lexicographically within each cardinality. The alternating
/// cycle bound prunes cardinalities that cannot win. With `size_cap`, the
/// search stops after cardinality `size_cap` and reports the excess.
pub fn forcing_number_of_matching(
    g: &BipartiteGraph,
    m: &Matching,
    size_cap: Option<usize>,
) -> Result<SearchOutcome, ForcingError> {
    let floor = alternating_cycle_bound(g, m);
    let ceil = size_cap.unwrap_or(m.len()).min(m.len());
    if floor > ceil {
        return Ok(SearchOutcome::ExceedsCap { cap: ceil });
    }
    for size in floor..=ceil {
        for combo in (0..m.len()).combinations(size) {
            let s = Matching::from_edges(combo.iter().map(|&i| m.edges()[i]).collect());
            if is_forcing(g, m, &s)? {
                return Ok(SearchOutcome::Exact {
                    value: size,
                    witness: s,
                });
            }
        }
    }
    Ok(SearchOutcome::ExceedsCap { cap: ceil })
}

/// How a minimum-forcing-number run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Closure {
    /// Every enumerated perfect matching was searched or pruned exactly.
    Exhausted,
    /// Stopped early: the running minimum met the supplied lower bound.
    MetKnownLower,
    /// The matching enumeration hit its cap; the value only bounds f from
    /// above.
    Truncated,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FValue {
    Exact(usize),
    AtLeast(usize),
}

#[derive(Clone, Debug)]
pub struct MatchingRecord {
    pub matching: Matching,
    pub f: FValue,
}

#[derive(Clone, Debug)]
pub struct OracleOutcome {
    pub value: usize,
    pub witness: Matching,
    pub closure: Closure,
    pub matchings_seen: usize,
    pub table: Vec<MatchingRecord>,
}

/// Brute-force minimum forcing number.
///
/// `known_lower` certifies an early exit: once some matching reaches it, no
/// matching can do better and the minimum is closed by the bound instead of
/// exhaustion. `pm_cap` bounds the enumeration; hitting it degrades the
/// result to an upper estimate, flagged via [`Closure::Truncated`].
pub fn minimum_forcing_number(
    g: &BipartiteGraph,
    known_lower: Option<usize>,
    pm_cap: Option<usize>,
) -> Result<OracleOutcome, ForcingError> {
    let enumeration = enumerate_perfect_matchings(g, pm_cap);
    if enumeration.matchings.is_empty() {
        return Err(ForcingError::NoPerfectMatching);
    }
    let mut best: Option<(usize, Matching)> = None;
    let mut table = Vec::new();
    let mut met_known_lower = false;
    let mut seen = 0usize;
    for m in &enumeration.matchings {
        seen += 1;
        let cap = best.as_ref().map(|(v, _)| v.saturating_sub(1));
        let outcome = forcing_number_of_matching(g, m, cap)?;
        match outcome {
            SearchOutcome::Exact { value, witness } => {
                table.push(MatchingRecord {
                    matching: m.clone(),
                    f: FValue::Exact(value),
                });
                best = Some((value, witness));
                if known_lower == Some(value) {
                    met_known_lower = true;
                    break;
                }
            }
            SearchOutcome::ExceedsCap { cap } => {
                table.push(MatchingRecord {
                    matching: m.clone(),
                    f: FValue::AtLeast(cap + 1),
                });
            }
        }
    }
    let (value, witness) = best.expect("first matching always yields an exact value");
    let closure = if met_known_lower {
        Closure::MetKnownLower
    } else if enumeration.truncated {
        Closure::Truncated
    } else {
        Closure::Exhausted
    };
    Ok(OracleOutcome {
        value,
        witness,
        closure,
        matchings_seen: seen,
        table,
    })
}

/// A matching verified to extend uniquely to a perfect matching; its size
/// is a certified upper bound for the minimum forcing number.
#[derive(Clone, Debug)]
pub struct UpperBoundCertificate {
    pub matching: Matching,
    pub bound: usize,
    pub extension: Matching,
}

/// Verify unique extendability by peeling G - V(M); the bound is withheld
/// (as an error) whenever verification fails.
pub fn certify_upper_matching(
    g: &BipartiteGraph,
    m: &Matching,
) -> Result<UpperBoundCertificate, ForcingError> {
    m.validate(g)?;
    let mut alive = vec![true; g.vertex_count()];
    for v in m.vertices() {
        alive[v] = false;
    }
    match peel(g, alive) {
        PmStatus::Unique(rest) => Ok(UpperBoundCertificate {
            bound: m.len(),
            matching: m.clone(),
            extension: rest,
        }),
        PmStatus::Multiple => Err(ForcingError::UniquenessNotVerified(
            "removal leaves two or more perfect matchings".into(),
        )),
        PmStatus::None => Err(ForcingError::UniquenessNotVerified(
            "removal leaves no perfect matching".into(),
        )),
    }
}

/// The circular upper-bound matching on G □ C_{2k}: X₁ matched into X₂ and
/// Y₁ matched into Y_{2k}. Requires the product built by
/// [`crate::graphs::cartesian_product`] from (base, cycle(2k)), whose
/// vertex (v, c) has index v·2k + c.
pub fn circular_upper_matching(
    base: &BipartiteGraph,
    product: &BipartiteGraph,
    two_k: usize,
) -> Result<Matching, ForcingError> {
    if product.vertex_count() != base.vertex_count() * two_k || two_k < 4 {
        return Err(ForcingError::ProductShape(format!(
            "expected |V| = {} x {}",
            base.vertex_count(),
            two_k
        )));
    }
    let mut edges = Vec::new();
    for x in base.x_vertices() {
        edges.push((x * two_k, x * two_k + 1));
    }
    for y in base.y_vertices() {
        edges.push((y * two_k, y * two_k + (two_k - 1)));
    }
    Ok(Matching::from_edges(edges))
}

/// The prism upper-bound matching on G □ K₂: X₁ matched into X₂.
pub fn prism_upper_matching(
    base: &BipartiteGraph,
    product: &BipartiteGraph,
) -> Result<Matching, ForcingError> {
    if product.vertex_count() != base.vertex_count() * 2 {
        return Err(ForcingError::ProductShape(format!(
            "expected |V| = {} x 2",
            base.vertex_count()
        )));
    }
    let edges = base.x_vertices().iter().map(|&x| (2 * x, 2 * x + 1)).collect();
    Ok(Matching::from_edges(edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{
        cartesian_product, complete_bipartite, cycle, hypercube, k2, path, star, FamilyExpr,
    };

    /// Independent counting oracle: permanent of the 0/1 bi-adjacency by
    /// row expansion.
    fn permanent(g: &BipartiteGraph) -> u64 {
        let xs = g.x_vertices();
        let ys = g.y_vertices();
        if xs.len() != ys.len() {
            return 0;
        }
        fn expand(g: &BipartiteGraph, xs: &[usize], ys: &[usize], row: usize, used: &mut Vec<bool>) -> u64 {
            if row == xs.len() {
                return 1;
            }
            let mut total = 0;
            for (j, &y) in ys.iter().enumerate() {
                if !used[j] && g.has_edge(xs[row], y) {
                    used[j] = true;
                    total += expand(g, xs, ys, row + 1, used);
                    used[j] = false;
                }
            }
            total
        }
        expand(g, &xs, &ys, 0, &mut vec![false; ys.len()])
    }

    #[test]
    fn enumeration_counts_match_the_permanent() {
        let cases = [
            ("C:4", 2u64),
            ("Kmn:3,3", 6),
            ("Q:3", 9),
            ("C:6", 2),
            ("P:4", 1),
        ];
        for (expr, expected) in cases {
            let g = FamilyExpr::parse(expr).unwrap().build().unwrap();
            let e = enumerate_perfect_matchings(&g, None);
            assert!(!e.truncated);
            assert_eq!(e.matchings.len() as u64, expected, "{expr}");
            assert_eq!(permanent(&g), expected, "permanent oracle for {expr}");
        }
    }

    #[test]
    fn enumeration_order_is_pinned() {
        // Lexicographic in (partner of x0, partner of x1, ...): on C6 the
        // matching through edge 0-1 precedes the one through 0-5.
        let e = enumerate_perfect_matchings(&cycle(6).unwrap(), None);
        assert_eq!(e.matchings[0].edges(), &[(0, 1), (2, 3), (4, 5)]);
        assert_eq!(e.matchings[1].edges(), &[(0, 5), (1, 2), (3, 4)]);
    }

    #[test]
    fn enumeration_cap_truncates() {
        let g = complete_bipartite(3, 3).unwrap();
        let e = enumerate_perfect_matchings(&g, Some(2));
        assert_eq!(e.matchings.len(), 2);
        assert!(e.truncated);
    }

    #[test]
    fn unbalanced_graphs_enumerate_to_nothing() {
        let g = complete_bipartite(2, 3).unwrap();
        let e = enumerate_perfect_matchings(&g, None);
        assert!(e.matchings.is_empty() && !e.truncated);
    }

    #[test]
    fn uniqueness_by_peeling() {
        assert!(matches!(has_unique_pm(&path(4).unwrap()), PmStatus::Unique(_)));
        assert_eq!(has_unique_pm(&cycle(6).unwrap()), PmStatus::Multiple);
        assert_eq!(has_unique_pm(&star(2).unwrap()), PmStatus::None);
        // Stall followed by a no-matching verdict: K23 has min degree 2.
        assert_eq!(has_unique_pm(&complete_bipartite(2, 3).unwrap()), PmStatus::None);
    }

    #[test]
    fn peeling_agrees_with_capped_enumeration() {
        for expr in ["P:4", "P:6", "C:4", "C:6", "Kmn:2,2", "Kmn:3,3", "Q:2", "Q:3", "star:3", "bcp:3"] {
            let g = FamilyExpr::parse(expr).unwrap().build().unwrap();
            let e = enumerate_perfect_matchings(&g, Some(2));
            let expected = match (e.matchings.len(), e.truncated) {
                (0, _) => PmStatus::None,
                (1, false) => PmStatus::Unique(e.matchings[0].clone()),
                _ => PmStatus::Multiple,
            };
            assert_eq!(has_unique_pm(&g), expected, "{expr}");
        }
    }

    #[test]
    fn forcing_on_c4() {
        let g = cycle(4).unwrap();
        let e = enumerate_perfect_matchings(&g, None);
        let m = &e.matchings[0];
        let single = Matching::from_edges(vec![m.edges()[0]]);
        assert!(is_forcing(&g, m, &single).unwrap());
        assert!(!is_forcing(&g, m, &Matching::from_edges(vec![])).unwrap());
        // An edge outside M is rejected.
        let other = &e.matchings[1];
        assert!(matches!(
            is_forcing(&g, m, &Matching::from_edges(vec![other.edges()[0]])),
            Err(ForcingError::SubsetNotOfMatching)
        ));
    }

    #[test]
    fn forcing_numbers_of_single_matchings() {
        let c4 = cycle(4).unwrap();
        for m in enumerate_perfect_matchings(&c4, None).matchings {
            match forcing_number_of_matching(&c4, &m, None).unwrap() {
                SearchOutcome::Exact { value, .. } => assert_eq!(value, 1),
                other => panic!("{other:?}"),
            }
        }
        let c6 = cycle(6).unwrap();
        for m in enumerate_perfect_matchings(&c6, None).matchings {
            match forcing_number_of_matching(&c6, &m, None).unwrap() {
                SearchOutcome::Exact { value, .. } => assert_eq!(value, 1),
                other => panic!("{other:?}"),
            }
        }
        // Every matching of Q3 forces at 2, none at 1.
        let q3 = hypercube(3).unwrap();
        for m in enumerate_perfect_matchings(&q3, None).matchings {
            match forcing_number_of_matching(&q3, &m, None).unwrap() {
                SearchOutcome::Exact { value, .. } => assert_eq!(value, 2),
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn cycle_bound_is_a_true_lower_bound() {
        for expr in ["C:4", "C:6", "Kmn:2,2", "Kmn:3,3", "Q:2", "Q:3"] {
            let g = FamilyExpr::parse(expr).unwrap().build().unwrap();
            for m in enumerate_perfect_matchings(&g, None).matchings {
                let bound = alternating_cycle_bound(&g, &m);
                let exact = match forcing_number_of_matching(&g, &m, None).unwrap() {
                    SearchOutcome::Exact { value, .. } => value,
                    _ => unreachable!(),
                };
                assert!(bound <= exact, "{expr}: bound {bound} vs exact {exact}");
            }
        }
    }

    #[test]
    fn oracle_on_q2() {
        let g = hypercube(2).unwrap();
        let out = minimum_forcing_number(&g, None, None).unwrap();
        assert_eq!(out.value, 1);
        assert_eq!(out.closure, Closure::Exhausted);
    }

    #[test]
    fn oracle_early_exit_with_known_lower() {
        let g = hypercube(3).unwrap();
        let out = minimum_forcing_number(&g, Some(2), None).unwrap();
        assert_eq!(out.value, 2);
        assert_eq!(out.closure, Closure::MetKnownLower);
        assert!(out.matchings_seen <= 9);
    }

    #[test]
    fn prism_halving_holds_for_small_balanced_hosts() {
        // f(G x K2) = |V(G)| / 2 for the small certificate-bearing hosts,
        // checked purely by exhaustion (Q3 x K2 is Q4 with 272 matchings).
        for (expr, half) in [
            ("prod(Kmn:2,2;K2)", 2usize),
            ("prod(Q:2;K2)", 2),
            ("prod(Kmn:3,3;K2)", 3),
            ("Q:4", 4),
        ] {
            let g = FamilyExpr::parse(expr).unwrap().build().unwrap();
            let out = minimum_forcing_number(&g, None, None).unwrap();
            assert_eq!(out.value, half, "{expr}");
            assert_eq!(out.closure, Closure::Exhausted);
        }
    }

    #[test]
    fn oracle_rejects_matchingless_graphs() {
        assert!(matches!(
            minimum_forcing_number(&star(2).unwrap(), None, None),
            Err(ForcingError::NoPerfectMatching)
        ));
    }

    #[test]
    fn circular_canonical_matching_verifies() {
        let base = complete_bipartite(2, 2).unwrap();
        let product = cartesian_product(&base, &cycle(6).unwrap().to_simple()).unwrap();
        let m = circular_upper_matching(&base, &product, 6).unwrap();
        assert_eq!(m.len(), 4);
        let cert = certify_upper_matching(&product, &m).unwrap();
        assert_eq!(cert.bound, 4);
    }

    #[test]
    fn prism_canonical_matching_verifies() {
        let base = complete_bipartite(2, 3).unwrap();
        let product = cartesian_product(&base, &k2().to_simple()).unwrap();
        let m = prism_upper_matching(&base, &product).unwrap();
        assert_eq!(m.len(), 2);
        let cert = certify_upper_matching(&product, &m).unwrap();
        assert_eq!(cert.bound, 2);
    }

    #[test]
    fn unverifiable_upper_matching_is_withheld() {
        // The empty matching on C4 leaves both perfect matchings alive.
        let g = cycle(4).unwrap();
        let empty = Matching::from_edges(vec![]);
        assert!(matches!(
            certify_upper_matching(&g, &empty),
            Err(ForcingError::UniquenessNotVerified(_))
        ));
    }

    #[test]
    fn forcing_monotone_under_supersets() {
        let g = hypercube(3).unwrap();
        let ms = enumerate_perfect_matchings(&g, None).matchings;
        let m = &ms[0];
        for size in 0..m.len() {
            for combo in (0..m.len()).combinations(size) {
                let s = Matching::from_edges(combo.iter().map(|&i| m.edges()[i]).collect());
                if is_forcing(&g, m, &s).unwrap() {
                    for extra in 0..m.len() {
                        let mut bigger: Vec<(usize, usize)> =
                            s.edges().to_vec();
                        if !s.contains(m.edges()[extra]) {
                            bigger.push(m.edges()[extra]);
                        }
                        let bigger = Matching::from_edges(bigger);
                        assert!(is_forcing(&g, m, &bigger).unwrap());
                    }
                }
            }
        }
    }
}
