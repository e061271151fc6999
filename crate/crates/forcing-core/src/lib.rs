//! Exact certification of minimum forcing numbers of perfect matchings in
//! bipartite graphs and their Cartesian products.
//!
//! The library pairs two independent routes to a forcing number:
//!
//! * an algebraic lower bound — the corank of a weighted bi-adjacency matrix
//!   computed by exact Gaussian elimination over ℚ, GF(p) or ℚ(√d);
//! * a combinatorial upper bound — a matching verified to extend uniquely to
//!   a perfect matching by degree-one peeling.
//!
//! When the two meet, the forcing number is certified exactly. A brute-force
//! oracle (full perfect-matching enumeration) cross-checks both routes at
//! desk scale.

pub mod blocks;
pub mod certificates;
pub mod fields;
pub mod forcing;
pub mod graphs;
pub mod matrix;
pub mod pipeline;
pub mod rank;
pub mod report;
pub mod suite;
