//! Exact rank and corank by Gaussian elimination, the corank lower bound
//! for forcing numbers, verification of the explicit block-row dependency
//! identities, and cross-field rank comparison.

use num_traits::Zero;
use thiserror::Error;

use crate::blocks::{BlockKind, BlockMatrix, CircularCase};
use crate::certificates::{CertError, InvolutoryCertificate, WeightedBiAdjacency};
use crate::fields::{Field, PrimeField, Rationals};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RankError {
    #[error("lower bound needs a square matrix, got {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("support audit failed, refusing to emit a bound: {0}")]
    UnsoundSupport(CertError),
    #[error("the dependency identities are stated for circular grids, not {0:?}")]
    WrongGrid(String),
    #[error("grid case does not cover k = {0}")]
    CaseMismatch(usize),
}

/// Outcome of one exact elimination; corank = rows - rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RankCertificate {
    pub field: String,
    pub rows: usize,
    pub cols: usize,
    pub rank: usize,
    pub corank: usize,
    pub pivot_cols: Vec<usize>,
}

/// Plain exact Gaussian elimination: scan columns left to right, take the
/// first nonzero entry below the frontier as pivot (row swaps only),
/// eliminate downwards. Deterministic by construction.
pub fn exact_rank<F: Field>(m: &Matrix<F>) -> RankCertificate {
    let field = m.field().clone();
    let mut work = m.clone();
    let (rows, cols) = (work.rows(), work.cols());
    let mut pivot_cols = Vec::new();
    let mut pivot_row = 0usize;
    for col in 0..cols {
        if pivot_row == rows {
            break;
        }
        let Some(r) = (pivot_row..rows).find(|&r| !work.is_zero_entry(r, col)) else {
            continue;
        };
        work.swap_rows(r, pivot_row);
        let pivot = work[(pivot_row, col)].clone();
        let pivot_inv = field.inverse(&pivot).expect("pivot is nonzero");
        for below in pivot_row + 1..rows {
            if work.is_zero_entry(below, col) {
                continue;
            }
            let factor = field.mul(&work[(below, col)], &pivot_inv);
            work.sub_scaled_row(below, pivot_row, &factor);
        }
        pivot_cols.push(col);
        pivot_row += 1;
    }
    let rank = pivot_cols.len();
    RankCertificate {
        field: field.descriptor(),
        rows,
        cols,
        rank,
        corank: rows - rank,
        pivot_cols,
    }
}

#[derive(Clone, Debug)]
pub struct LowerBound {
    pub bound: usize,
    pub certificate: RankCertificate,
}

/// Corank of a square weighted bi-adjacency matrix as a certified lower
/// bound for the host's minimum forcing number. The support audit is
/// re-run first; an unsound support voids the bound.
pub fn forcing_lower_bound<F: Field>(
    wba: &WeightedBiAdjacency<F>,
) -> Result<LowerBound, RankError> {
    wba.support_audit().map_err(RankError::UnsoundSupport)?;
    let m = wba.matrix();
    if !m.is_square() {
        return Err(RankError::NotSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    let certificate = exact_rank(m);
    Ok(LowerBound {
        bound: certificate.corank,
        certificate,
    })
}

/// Exact residual of one block-row identity; all-zero residuals verify
/// the identity.
#[derive(Clone, Debug)]
pub struct DependencyResidual {
    pub case: CircularCase,
    pub identity: &'static str,
    pub zero: bool,
    /// (block index 1..2k, row, col, entry) of the first nonzero.
    pub first_nonzero: Option<(usize, usize, usize, String)>,
}

/// Verify both stated linear dependencies (the one expressing the first
/// block row and the one expressing the last) on the instantiated matrix.
/// Works on concrete blocks: a zero residual here checks the identity and
/// the wiring at once.
pub fn verify_case_dependency<F: Field>(
    r: &WeightedBiAdjacency<F>,
    cert: &InvolutoryCertificate<F>,
    bm: &BlockMatrix,
) -> Result<(DependencyResidual, DependencyResidual), RankError> {
    let BlockKind::Circular { k, case } = bm.kind() else {
        return Err(RankError::WrongGrid("prism".into()));
    };
    let two_k = 2 * k;
    let b = cert.block_size();
    let field = cert.field().clone();
    let block = |i: usize, j: usize| -> Matrix<F> {
        Matrix::from_fn(field.clone(), b, b, |ii, jj| {
            r.matrix()[(i * b + ii, j * b + jj)].clone()
        })
    };
    let row = |i: usize| -> Vec<Matrix<F>> { (0..two_k).map(|j| block(i, j)).collect() };
    let bmat = cert.b().matrix().clone();
    let binv = cert.b_inv().matrix().clone();

    // Accumulate coeff * (mult * row) into acc.
    let mut acc_top = zero_row(&field, two_k, b);
    let mut acc_bottom = zero_row(&field, two_k, b);
    {
        let mut add_top = |mult: Option<&Matrix<F>>, sign: i64, idx1: usize| {
            add_row(&mut acc_top, mult, sign, &row(idx1 - 1));
        };
        match case {
            CircularCase::K2 => {
                // R(1) = B R(2) + 2 R(3)
                add_top(Some(&bmat), 1, 2);
                add_top(None, 2, 3);
            }
            CircularCase::Mod0 => {
                // R(1) = B R(2) - B R(4) + R(5) + sum_{i=1}^{k/3-1}
                //        (-R(6i+1) + B R(6i+2) - B R(6i+4) + R(6i+5))
                add_top(Some(&bmat), 1, 2);
                add_top(Some(&bmat), -1, 4);
                add_top(None, 1, 5);
                for i in 1..k / 3 {
                    add_top(None, -1, 6 * i + 1);
                    add_top(Some(&bmat), 1, 6 * i + 2);
                    add_top(Some(&bmat), -1, 6 * i + 4);
                    add_top(None, 1, 6 * i + 5);
                }
            }
            CircularCase::Mod1 => {
                // R(1) = B R(2) + R(3) - B R(4) + sum_{i=1}^{(k-4)/3}
                //        (B R(6i) - R(6i+1) + R(6i+3) - B R(6i+4))
                //        + B R(2k-2) - R(2k-1)
                add_top(Some(&bmat), 1, 2);
                add_top(None, 1, 3);
                add_top(Some(&bmat), -1, 4);
                for i in 1..=(k - 4) / 3 {
                    add_top(Some(&bmat), 1, 6 * i);
                    add_top(None, -1, 6 * i + 1);
                    add_top(None, 1, 6 * i + 3);
                    add_top(Some(&bmat), -1, 6 * i + 4);
                }
                add_top(Some(&bmat), 1, two_k - 2);
                add_top(None, -1, two_k - 1);
            }
            CircularCase::Mod2 => {
                // R(1) = sum_{i=0}^{(k-5)/3} (B R(6i+2) - B R(6i+4)
                //        + R(6i+5) - R(6i+7)) + B R(2k-2) - R(2k-1)
                for i in 0..=(k - 5) / 3 {
                    add_top(Some(&bmat), 1, 6 * i + 2);
                    add_top(Some(&bmat), -1, 6 * i + 4);
                    add_top(None, 1, 6 * i + 5);
                    add_top(None, -1, 6 * i + 7);
                }
                add_top(Some(&bmat), 1, two_k - 2);
                add_top(None, -1, two_k - 1);
            }
        }
    }
    {
        let mut add_bottom = |mult: Option<&Matrix<F>>, sign: i64, idx1: usize| {
            add_row(&mut acc_bottom, mult, sign, &row(idx1 - 1));
        };
        match case {
            CircularCase::K2 => {
                // R(4) = B^-1 R(3) + R(2)
                add_bottom(Some(&binv), 1, 3);
                add_bottom(None, 1, 2);
            }
            CircularCase::Mod0 => {
                // R(2k) = B^-1 R(2k-1) - B^-1 R(2k-3) + R(2k-4) + sum
                //         (-R(2k-6i) + B^-1 R(2k-6i-1) - B^-1 R(2k-6i-3)
                //          + R(2k-6i-4))
                add_bottom(Some(&binv), 1, two_k - 1);
                add_bottom(Some(&binv), -1, two_k - 3);
                add_bottom(None, 1, two_k - 4);
                for i in 1..k / 3 {
                    add_bottom(None, -1, two_k - 6 * i);
                    add_bottom(Some(&binv), 1, two_k - 6 * i - 1);
                    add_bottom(Some(&binv), -1, two_k - 6 * i - 3);
                    add_bottom(None, 1, two_k - 6 * i - 4);
                }
            }
            CircularCase::Mod1 => {
                // R(2k) = B^-1 R(2k-1) + R(2k-2) - B^-1 R(2k-3) + sum
                //         (B^-1 R(2k-6i+1) - R(2k-6i) + R(2k-6i-2)
                //          - B^-1 R(2k-6i-3)) + B^-1 R(3) - R(2)
                add_bottom(Some(&binv), 1, two_k - 1);
                add_bottom(None, 1, two_k - 2);
                add_bottom(Some(&binv), -1, two_k - 3);
                for i in 1..=(k - 4) / 3 {
                    add_bottom(Some(&binv), 1, two_k - 6 * i + 1);
                    add_bottom(None, -1, two_k - 6 * i);
                    add_bottom(None, 1, two_k - 6 * i - 2);
                    add_bottom(Some(&binv), -1, two_k - 6 * i - 3);
                }
                add_bottom(Some(&binv), 1, 3);
                add_bottom(None, -1, 2);
            }
            CircularCase::Mod2 => {
                // R(2k) = sum_{i=0}^{(k-5)/3} (B^-1 R(2k-6i-1)
                //         - B^-1 R(2k-6i-3) + R(2k-6i-4) - R(2k-6i-6))
                //         + B^-1 R(3) - R(2)
                for i in 0..=(k - 5) / 3 {
                    add_bottom(Some(&binv), 1, two_k - 6 * i - 1);
                    add_bottom(Some(&binv), -1, two_k - 6 * i - 3);
                    add_bottom(None, 1, two_k - 6 * i - 4);
                    add_bottom(None, -1, two_k - 6 * i - 6);
                }
                add_bottom(Some(&binv), 1, 3);
                add_bottom(None, -1, 2);
            }
        }
    }
    let top_target = row(0);
    let bottom_target = row(two_k - 1);
    let top = residual(case, "top", &field, &top_target, &acc_top);
    let bottom = residual(case, "bottom", &field, &bottom_target, &acc_bottom);
    Ok((top, bottom))
}

fn zero_row<F: Field>(field: &F, blocks: usize, b: usize) -> Vec<Matrix<F>> {
    (0..blocks)
        .map(|_| Matrix::zeros(field.clone(), b, b))
        .collect()
}

fn add_row<F: Field>(
    acc: &mut [Matrix<F>],
    mult: Option<&Matrix<F>>,
    sign: i64,
    row: &[Matrix<F>],
) {
    let field = acc[0].field().clone();
    let coeff = field.int(sign);
    for (a, r) in acc.iter_mut().zip(row) {
        let term = match mult {
            Some(m) => m.mul(r),
            None => r.clone(),
        };
        *a = a.add(&term.scale(&coeff));
    }
}

fn residual<F: Field>(
    case: CircularCase,
    identity: &'static str,
    _field: &F,
    target: &[Matrix<F>],
    combo: &[Matrix<F>],
) -> DependencyResidual {
    for (j, (t, c)) in target.iter().zip(combo).enumerate() {
        let diff = t.sub(c);
        if let Some((r, col)) = diff.first_nonzero() {
            return DependencyResidual {
                case,
                identity,
                zero: false,
                first_nonzero: Some((j + 1, r, col, diff.render_entry(r, col))),
            };
        }
    }
    DependencyResidual {
        case,
        identity,
        zero: true,
        first_nonzero: None,
    }
}

/// Per-prime outcome of the cross-field comparison.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CrossFieldEntry {
    Skipped { p: u64, reason: String },
    Checked { p: u64, rank: usize, dropped: bool },
}

#[derive(Clone, Debug)]
pub struct CrossFieldReport {
    pub rational_rank: usize,
    pub entries: Vec<CrossFieldEntry>,
    /// Reduction mod p can only lower the rank; a raise would mean a bug.
    pub consistent: bool,
}

/// Compare the rank over ℚ with ranks over GF(p) for each listed prime.
/// Entries whose denominator vanishes mod p skip that prime.
pub fn cross_field_rank_check(m: &Matrix<Rationals>, primes: &[u64]) -> CrossFieldReport {
    let rational_rank = exact_rank(m).rank;
    let mut entries = Vec::new();
    let mut consistent = true;
    'primes: for &p in primes {
        let field = match PrimeField::new(p) {
            Ok(f) => f,
            Err(e) => {
                entries.push(CrossFieldEntry::Skipped {
                    p,
                    reason: e.to_string(),
                });
                continue;
            }
        };
        let mut data = Vec::with_capacity(m.rows() * m.cols());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                let v = &m[(i, j)];
                let denom = v.denom();
                if (denom % num_bigint::BigInt::from(p)).is_zero() {
                    entries.push(CrossFieldEntry::Skipped {
                        p,
                        reason: format!("denominator of entry ({i}, {j}) vanishes mod {p}"),
                    });
                    continue 'primes;
                }
                let num = bigint_mod(v.numer(), p);
                let den = bigint_mod(denom, p);
                let den_inv = field.inverse(&den).expect("nonzero denominator");
                data.push(field.mul(&num, &den_inv));
            }
        }
        let rank = exact_rank(&Matrix::new(field, m.rows(), m.cols(), data)).rank;
        if rank > rational_rank {
            consistent = false;
        }
        entries.push(CrossFieldEntry::Checked {
            p,
            rank,
            dropped: rank < rational_rank,
        });
    }
    CrossFieldReport {
        rational_rank,
        entries,
        consistent,
    }
}

fn bigint_mod(v: &num_bigint::BigInt, p: u64) -> u64 {
    use num_traits::ToPrimitive;
    let m = v % num_bigint::BigInt::from(p);
    let m = if m < num_bigint::BigInt::from(0) {
        m + num_bigint::BigInt::from(p)
    } else {
        m
    };
    m.to_u64().expect("reduced representative fits")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::{circular_block_matrix, instantiate_circular, instantiate_prism, prism_block_matrix};
    use crate::certificates::{delete_rows, fourier_pair, InvolutoryCertificate};
    use crate::graphs::complete_bipartite;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn hadamard_k22() -> InvolutoryCertificate<Rationals> {
        let host = complete_bipartite(2, 2).unwrap();
        let b = Matrix::from_int_rows(Rationals, &[vec![1, 1], vec![1, -1]]);
        InvolutoryCertificate::from_b(host.clone(), host.x_vertices(), host.y_vertices(), b)
            .unwrap()
    }

    #[test]
    fn identity_has_full_rank() {
        let cert = exact_rank(&Matrix::identity(Rationals, 4));
        assert_eq!((cert.rank, cert.corank), (4, 0));
        assert_eq!(cert.pivot_cols, vec![0, 1, 2, 3]);
    }

    #[test]
    fn case1_matrix_for_k22_has_corank_4() {
        let cert = hadamard_k22();
        let bm = circular_block_matrix(&cert, 2).unwrap();
        let inst = instantiate_circular(&bm, &cert).unwrap();
        let lb = forcing_lower_bound(&inst.r).unwrap();
        assert_eq!(lb.certificate.rank, 4);
        assert_eq!(lb.bound, 4);
    }

    #[test]
    fn matching_only_graph_gets_a_zero_bound() {
        // Three disjoint edges: the bi-adjacency is a full-rank identity,
        // so the corank bound degenerates to 0.
        let mut g = crate::graphs::BipartiteGraph::new();
        for i in 0..3 {
            let a = g.add_vertex(format!("a{i}"), crate::graphs::Side::X).unwrap();
            let b = g.add_vertex(format!("b{i}"), crate::graphs::Side::Y).unwrap();
            g.add_edge(a, b).unwrap();
        }
        let wba = crate::certificates::WeightedBiAdjacency::new(
            g.clone(),
            g.x_vertices(),
            g.y_vertices(),
            Matrix::identity(Rationals, 3),
        )
        .unwrap();
        assert_eq!(forcing_lower_bound(&wba).unwrap().bound, 0);
    }

    #[test]
    fn prism_matrix_for_k23_has_rank_3() {
        let pair = delete_rows(&fourier_pair(3, 7).unwrap(), &["x2"]).unwrap();
        let bm = prism_block_matrix(&pair);
        let inst = instantiate_prism(&bm, &pair).unwrap();
        let lb = forcing_lower_bound(&inst.r).unwrap();
        assert_eq!(lb.certificate.rank, 3);
        assert_eq!(lb.bound, 2);
    }

    #[test]
    fn rank_invariances_on_random_matrices() {
        let f = Rationals;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..40 {
            let rows = rng.gen_range(1..6);
            let cols = rng.gen_range(1..6);
            let m = Matrix::from_fn(f, rows, cols, |_, _| f.int(rng.gen_range(-2i64..=2)));
            let base = exact_rank(&m).rank;
            assert_eq!(base, exact_rank(&m.transpose()).rank, "rank(M) = rank(M^T)");

            let mut scaled = m.clone();
            let r = rng.gen_range(0..rows);
            scaled.scale_row(r, &f.int(*[2i64, -3, 5].get(rng.gen_range(0..3)).unwrap()));
            assert_eq!(base, exact_rank(&scaled).rank, "row scaling");

            let mut swapped = m.clone();
            swapped.swap_rows(rng.gen_range(0..rows), rng.gen_range(0..rows));
            assert_eq!(base, exact_rank(&swapped).rank, "row swap");
        }
    }

    #[test]
    fn dependencies_hold_for_k2_and_k3() {
        let cert = hadamard_k22();
        for k in [2usize, 3] {
            let bm = circular_block_matrix(&cert, k).unwrap();
            let inst = instantiate_circular(&bm, &cert).unwrap();
            let (top, bottom) = verify_case_dependency(&inst.r, &cert, &bm).unwrap();
            assert!(top.zero, "k={k} top: {:?}", top.first_nonzero);
            assert!(bottom.zero, "k={k} bottom: {:?}", bottom.first_nonzero);
        }
    }

    #[test]
    fn corrupted_block_yields_a_located_residual() {
        let cert = hadamard_k22();
        let bm = circular_block_matrix(&cert, 2).unwrap();
        let inst = instantiate_circular(&bm, &cert).unwrap();
        // Negate the (1,1) block by rebuilding the matrix directly.
        let b = cert.block_size();
        let broken = Matrix::from_fn(Rationals, 8, 8, |i, j| {
            let v = inst.r.matrix()[(i, j)].clone();
            if i < b && j < b {
                Rationals.neg(&v)
            } else {
                v
            }
        });
        let broken_wba = crate::certificates::WeightedBiAdjacency::new(
            inst.product.clone(),
            inst.r.row_vertices().to_vec(),
            inst.r.col_vertices().to_vec(),
            broken,
        )
        .unwrap();
        let (top, _) = verify_case_dependency(&broken_wba, &cert, &bm).unwrap();
        assert!(!top.zero);
        let (block_idx, _, _, _) = top.first_nonzero.unwrap();
        assert_eq!(block_idx, 1, "defect localized to the first block column");
    }

    #[test]
    fn dependency_rejects_prism_grids() {
        let pair = fourier_pair(2, 5).unwrap();
        let bm = prism_block_matrix(&pair);
        let inst = instantiate_prism(&bm, &pair).unwrap();
        let cert = crate::certificates::involutory_from_pair(&pair).unwrap();
        assert!(matches!(
            verify_case_dependency(&inst.r, &cert, &bm),
            Err(RankError::WrongGrid(_))
        ));
    }

    #[test]
    fn circular_corank_agrees_across_q_and_gf101() {
        // The k = 3 grid instantiated from a GF(101) hypercube certificate
        // and from the rational lift chain at d = 1: both coranks equal
        // n = 2.
        let q_cert = crate::certificates::hypercube_lift_chain(1).unwrap();
        let bm = circular_block_matrix(&q_cert, 3).unwrap();
        let inst = instantiate_circular(&bm, &q_cert).unwrap();
        assert_eq!(exact_rank(inst.r.matrix()).corank, 2);

        let p_cert =
            crate::certificates::hypercube_involutory(1, PrimeField::new(101).unwrap()).unwrap();
        let bm = circular_block_matrix(&p_cert, 3).unwrap();
        let inst = instantiate_circular(&bm, &p_cert).unwrap();
        assert_eq!(exact_rank(inst.r.matrix()).corank, 2);
    }

    #[test]
    fn cross_field_examples() {
        let id3 = Matrix::identity(Rationals, 3);
        let rep = cross_field_rank_check(&id3, &[5, 7]);
        assert_eq!(rep.rational_rank, 3);
        assert!(rep.consistent);
        assert!(rep
            .entries
            .iter()
            .all(|e| matches!(e, CrossFieldEntry::Checked { rank: 3, dropped: false, .. })));

        // Characteristic collapse: 2I has rank 0 mod 2.
        let twos = Matrix::from_int_rows(Rationals, &[vec![2, 0], vec![0, 2]]);
        let rep = cross_field_rank_check(&twos, &[2]);
        assert_eq!(
            rep.entries,
            vec![CrossFieldEntry::Checked {
                p: 2,
                rank: 0,
                dropped: true
            }]
        );
        assert!(rep.consistent, "a drop is expected, not an inconsistency");

        // Denominator divisible by p: that prime is skipped and reported.
        let fifth = Matrix::from_fn(Rationals, 1, 1, |_, _| Rationals.parse("1/5").unwrap());
        let rep = cross_field_rank_check(&fifth, &[5, 3]);
        assert!(matches!(rep.entries[0], CrossFieldEntry::Skipped { p: 5, .. }));
        assert!(matches!(rep.entries[1], CrossFieldEntry::Checked { p: 3, rank: 1, .. }));
    }
}
