//! Constructors for every named graph family, each with a documented
//! deterministic vertex order.

use super::{BipartiteGraph, GraphError, Side, Sign, SimpleGraph};

/// K₂: vertices `0` (X) and `1` (Y), one edge.
pub fn k2() -> BipartiteGraph {
    let mut g = BipartiteGraph::new();
    let a = g.add_vertex("0", Side::X).unwrap();
    let b = g.add_vertex("1", Side::Y).unwrap();
    g.add_edge(a, b).unwrap();
    g
}

/// Even cycle C_m: vertices `0..m-1` in cycle order, even indices on X.
pub fn cycle(m: usize) -> Result<BipartiteGraph, GraphError> {
    if m < 4 || !m.is_multiple_of(2) {
        return Err(GraphError::BadFamily(format!(
            "cycle length {m} must be even and at least 4"
        )));
    }
    let mut g = BipartiteGraph::new();
    for i in 0..m {
        let side = if i % 2 == 0 { Side::X } else { Side::Y };
        g.add_vertex(i.to_string(), side)?;
    }
    for i in 0..m {
        g.add_edge(i, (i + 1) % m)?;
    }
    Ok(g)
}

/// Cycle of any length m >= 3 as a simple graph (for bipartite doubles).
pub fn simple_cycle(m: usize) -> Result<SimpleGraph, GraphError> {
    if m < 3 {
        return Err(GraphError::BadFamily(format!(
            "cycle length {m} must be at least 3"
        )));
    }
    let mut g = SimpleGraph::new();
    for i in 0..m {
        g.add_vertex(i.to_string())?;
    }
    for i in 0..m {
        g.add_edge(i, (i + 1) % m)?;
    }
    Ok(g)
}

/// Complete graph K_n as a simple graph.
pub fn complete_simple(n: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new();
    for i in 0..n {
        g.add_vertex(i.to_string()).unwrap();
    }
    for i in 0..n {
        for j in i + 1..n {
            g.add_edge(i, j).unwrap();
        }
    }
    g
}

/// Path on n vertices `0..n-1`, even indices on X.
pub fn path(n: usize) -> Result<BipartiteGraph, GraphError> {
    if n == 0 {
        return Err(GraphError::BadFamily("path needs at least 1 vertex".into()));
    }
    let mut g = BipartiteGraph::new();
    for i in 0..n {
        let side = if i % 2 == 0 { Side::X } else { Side::Y };
        g.add_vertex(i.to_string(), side)?;
    }
    for i in 0..n - 1 {
        g.add_edge(i, i + 1)?;
    }
    Ok(g)
}

/// K_{m,n}: X-vertices `x0..x{m-1}` then Y-vertices `y0..y{n-1}`.
pub fn complete_bipartite(m: usize, n: usize) -> Result<BipartiteGraph, GraphError> {
    if m == 0 || n == 0 {
        return Err(GraphError::BadFamily(
            "complete bipartite sides must be positive".into(),
        ));
    }
    let mut g = BipartiteGraph::new();
    for i in 0..m {
        g.add_vertex(format!("x{i}"), Side::X)?;
    }
    for j in 0..n {
        g.add_vertex(format!("y{j}"), Side::Y)?;
    }
    for i in 0..m {
        for j in 0..n {
            g.add_edge(i, m + j)?;
        }
    }
    Ok(g)
}

/// Star K_{1,n} with its center `x0` on the X side.
pub fn star(n: usize) -> Result<BipartiteGraph, GraphError> {
    complete_bipartite(1, n)
}

/// d-hypercube: vertex v in binary counting order, label = d-bit binary
/// string of v, side = parity of popcount (even on X).
pub fn hypercube(d: u32) -> Result<BipartiteGraph, GraphError> {
    if d == 0 || d > 20 {
        return Err(GraphError::BadFamily(format!(
            "hypercube dimension {d} out of range 1..=20"
        )));
    }
    let n = 1usize << d;
    let mut g = BipartiteGraph::new();
    for v in 0..n {
        let side = if (v as u32).count_ones().is_multiple_of(2) {
            Side::X
        } else {
            Side::Y
        };
        g.add_vertex(format!("{v:0width$b}", width = d as usize), side)?;
    }
    for v in 0..n {
        for bit in 0..d {
            let w = v ^ (1usize << bit);
            if v < w {
                g.add_edge(v, w)?;
            }
        }
    }
    Ok(g)
}

/// Folded d-hypercube (Q_d plus antipodal edges); bipartite only for odd d,
/// and d = 1 would duplicate the lone edge of Q_1.
pub fn folded_hypercube(d: u32) -> Result<BipartiteGraph, GraphError> {
    if d.is_multiple_of(2) || d < 3 {
        return Err(GraphError::BadFamily(format!(
            "folded hypercube needs odd dimension >= 3, got {d}"
        )));
    }
    let mut g = hypercube(d)?;
    let n = 1usize << d;
    let mask = n - 1;
    for v in 0..n {
        let w = v ^ mask;
        if v < w {
            g.add_edge(v, w)?;
        }
    }
    Ok(g)
}

/// 2-blow-up of the even cycle C_{2n}: cycle class i duplicated into
/// vertices `i_0`, `i_1` (row-major in (i, copy)), consecutive classes
/// fully joined, classes keep the cycle parity as their side.
pub fn blowup_cycle(n: usize) -> Result<BipartiteGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadFamily(format!(
            "2-blow-up needs cycle length 2n >= 4, got n = {n}"
        )));
    }
    let classes = 2 * n;
    let mut g = BipartiteGraph::new();
    for i in 0..classes {
        let side = if i % 2 == 0 { Side::X } else { Side::Y };
        for t in 0..2 {
            g.add_vertex(format!("{i}_{t}"), side)?;
        }
    }
    for i in 0..classes {
        let j = (i + 1) % classes;
        for t in 0..2 {
            for u in 0..2 {
                g.add_edge(2 * i + t, 2 * j + u)?;
            }
        }
    }
    Ok(g)
}

/// Bipartite cocktail-party graph BCP(n): K_{n,n} minus the identity
/// matching x_i y_i.
pub fn bcp(n: usize) -> Result<BipartiteGraph, GraphError> {
    if n < 2 {
        return Err(GraphError::BadFamily(format!(
            "BCP(n) needs n >= 2, got {n}"
        )));
    }
    let mut g = BipartiteGraph::new();
    for i in 0..n {
        g.add_vertex(format!("x{i}"), Side::X)?;
    }
    for j in 0..n {
        g.add_vertex(format!("y{j}"), Side::Y)?;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j {
                g.add_edge(i, n + j)?;
            }
        }
    }
    Ok(g)
}

/// The signed 4-regular bipartite graph S₁₄ on x_0..x_6, y_0..y_6:
/// positive edges x_i y_i, x_i y_{i+1}, x_i y_{i+3} and a negative edge
/// x_i y_{i-1}, subscripts mod 7.
pub fn s14() -> BipartiteGraph {
    let mut g = BipartiteGraph::new();
    for i in 0..7 {
        g.add_vertex(format!("x{i}"), Side::X).unwrap();
    }
    for j in 0..7 {
        g.add_vertex(format!("y{j}"), Side::Y).unwrap();
    }
    for i in 0..7usize {
        for off in [0usize, 1, 3] {
            g.add_signed_edge(i, 7 + (i + off) % 7, Sign::Plus).unwrap();
        }
        g.add_signed_edge(i, 7 + (i + 6) % 7, Sign::Minus).unwrap();
    }
    g
}

/// Positions removed from K_{7,7} to form G′; these are exactly the zero
/// positions of its weighted bi-adjacency matrix.
pub const G_PRIME_REMOVED: [(usize, usize); 8] = [
    (0, 2),
    (0, 3),
    (1, 2),
    (1, 3),
    (2, 0),
    (2, 1),
    (3, 0),
    (3, 1),
];

/// G′: K_{7,7} minus the 8 edges in [`G_PRIME_REMOVED`].
pub fn g_prime() -> BipartiteGraph {
    let mut g = BipartiteGraph::new();
    for i in 0..7 {
        g.add_vertex(format!("x{i}"), Side::X).unwrap();
    }
    for j in 0..7 {
        g.add_vertex(format!("y{j}"), Side::Y).unwrap();
    }
    for i in 0..7 {
        for j in 0..7 {
            if !G_PRIME_REMOVED.contains(&(i, j)) {
                g.add_edge(i, 7 + j).unwrap();
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let g = complete_bipartite(2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (5, 6));

        let s = s14();
        assert_eq!((s.vertex_count(), s.edge_count()), (14, 28));
        assert!((0..14).all(|v| s.degree(v) == 4), "S14 is 4-regular");
        let negatives = s.edges().filter(|&(u, v)| s.sign(u, v) == Sign::Minus).count();
        assert_eq!(negatives, 7, "one negative edge per x vertex");

        let gp = g_prime();
        assert_eq!((gp.vertex_count(), gp.edge_count()), (14, 41));

        let q3 = hypercube(3).unwrap();
        assert_eq!((q3.vertex_count(), q3.edge_count()), (8, 12));

        let b = blowup_cycle(3).unwrap();
        assert_eq!((b.vertex_count(), b.edge_count()), (12, 24));
        assert!((0..12).all(|v| b.degree(v) == 4));

        let c = bcp(3).unwrap();
        assert_eq!((c.vertex_count(), c.edge_count()), (6, 6));
    }

    #[test]
    fn every_family_passes_the_bipartite_audit() {
        let graphs: Vec<BipartiteGraph> = vec![
            k2(),
            cycle(6).unwrap(),
            path(5).unwrap(),
            complete_bipartite(3, 4).unwrap(),
            star(4).unwrap(),
            hypercube(4).unwrap(),
            folded_hypercube(3).unwrap(),
            blowup_cycle(2).unwrap(),
            bcp(4).unwrap(),
            s14(),
            g_prime(),
        ];
        for g in graphs {
            g.audit().unwrap();
        }
    }

    #[test]
    fn bad_parameters_are_rejected() {
        assert!(cycle(5).is_err());
        assert!(cycle(2).is_err());
        assert!(folded_hypercube(2).is_err());
        assert!(folded_hypercube(1).is_err());
        assert!(complete_bipartite(0, 3).is_err());
        assert!(bcp(1).is_err());
    }

    #[test]
    fn folded_hypercube_is_regular() {
        let fq3 = folded_hypercube(3).unwrap();
        assert_eq!(fq3.vertex_count(), 8);
        assert!((0..8).all(|v| fq3.degree(v) == 4));
        fq3.audit().unwrap();
    }
}
