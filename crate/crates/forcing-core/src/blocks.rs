//! Partitioned matrices over certificate blocks: the 2k x 2k circular
//! grids (one per congruence case of k) and the 2 x 2 prism grid, plus
//! their instantiation into audited weighted bi-adjacency matrices of the
//! product graphs.
//!
//! Vertex-order contract for the circular grids: block row i is X_i for
//! odd i and Y_i for even i; block column j is Y_j for odd j and X_j for
//! even j (1-based copies around the cycle). The prism grid has rows
//! (Y₁, X₂) and columns (Y₂, X₁).

use thiserror::Error;

use crate::certificates::{CertError, InvolutoryCertificate, RowInversePair};
use crate::fields::Field;
use crate::graphs::{cartesian_product, cycle, k2, BipartiteGraph, GraphError};
use crate::matrix::Matrix;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BlockError {
    #[error("k = {0} is out of range; circular grids need k >= 2")]
    BadK(usize),
    #[error("field has characteristic 2 but the grid needs the block {block} at {at}")]
    CharacteristicTwo { block: String, at: String },
    #[error("grid and certificate block sizes differ: {grid} vs {cert}")]
    BlockSizeMismatch { grid: usize, cert: usize },
    #[error("dependency identities are defined for circular grids, found {0}")]
    NotCircular(String),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Symbolic block: zero, c·I, c·B, c·B⁻¹, or Cᵀ, with c in {1, -1, 2}.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlockTag {
    Zero,
    Ident(i64),
    Base(i64),
    BaseInv(i64),
    CTrans,
}

impl BlockTag {
    pub fn is_zero(self) -> bool {
        self == BlockTag::Zero
    }

    fn describe(self) -> String {
        match self {
            BlockTag::Zero => "O".into(),
            BlockTag::Ident(c) => coeff_name(c, "I"),
            BlockTag::Base(c) => coeff_name(c, "B"),
            BlockTag::BaseInv(c) => coeff_name(c, "Binv"),
            BlockTag::CTrans => "C^T".into(),
        }
    }
}

fn coeff_name(c: i64, base: &str) -> String {
    match c {
        1 => base.to_string(),
        -1 => format!("-{base}"),
        c => format!("{c}{base}"),
    }
}

/// Which of the four circular constructions a grid follows.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CircularCase {
    /// k = 2
    K2,
    /// k ≡ 0 (mod 3)
    Mod0,
    /// k ≡ 1 (mod 3), k >= 4
    Mod1,
    /// k ≡ 2 (mod 3), k >= 5
    Mod2,
}

impl CircularCase {
    pub fn for_k(k: usize) -> Result<CircularCase, BlockError> {
        match k {
            0 | 1 => Err(BlockError::BadK(k)),
            2 => Ok(CircularCase::K2),
            _ => Ok(match k % 3 {
                0 => CircularCase::Mod0,
                1 => CircularCase::Mod1,
                _ => CircularCase::Mod2,
            }),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CircularCase::K2 => "case1 (k = 2)",
            CircularCase::Mod0 => "case2 (k = 0 mod 3)",
            CircularCase::Mod1 => "case3 (k = 1 mod 3)",
            CircularCase::Mod2 => "case4 (k = 2 mod 3)",
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum BlockKind {
    Circular { k: usize, case: CircularCase },
    Prism,
}

/// A partitioned matrix as a grid of symbolic blocks with per-block-row
/// and per-block-column dimensions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix {
    kind: BlockKind,
    grid: Vec<Vec<BlockTag>>,
    row_dims: Vec<usize>,
    col_dims: Vec<usize>,
}

impl BlockMatrix {
    pub fn kind(&self) -> BlockKind {
        self.kind
    }

    pub fn grid(&self) -> &[Vec<BlockTag>] {
        &self.grid
    }

    pub fn block_rows(&self) -> usize {
        self.grid.len()
    }

    pub fn nonzero_blocks_in_row(&self, i: usize) -> usize {
        self.grid[i].iter().filter(|t| !t.is_zero()).count()
    }

    pub fn nonzero_blocks_in_col(&self, j: usize) -> usize {
        self.grid.iter().filter(|row| !row[j].is_zero()).count()
    }

    #[cfg(test)]
    fn raw(kind: BlockKind, grid: Vec<Vec<BlockTag>>, dims: usize) -> BlockMatrix {
        let n = grid.len();
        BlockMatrix {
            kind,
            grid,
            row_dims: vec![dims; n],
            col_dims: vec![dims; n],
        }
    }
}

/// The 2k x 2k grid for G □ C_{2k}, in the case shape selected by k.
/// Rejected in characteristic 2 whenever the case uses a coefficient-2
/// block (every case except k ≡ 0 mod 3).
pub fn circular_block_matrix<F: Field>(
    cert: &InvolutoryCertificate<F>,
    k: usize,
) -> Result<BlockMatrix, BlockError> {
    let case = CircularCase::for_k(k)?;
    if cert.field().characteristic() == 2 {
        let offender = match case {
            CircularCase::K2 => Some(("2I", "(1,4)")),
            CircularCase::Mod0 => None,
            CircularCase::Mod1 => Some(("2I", "(1,2)")),
            CircularCase::Mod2 => Some(("2B", "(3,3)")),
        };
        if let Some((block, at)) = offender {
            return Err(BlockError::CharacteristicTwo {
                block: block.into(),
                at: at.into(),
            });
        }
    }
    let two_k = 2 * k;
    let mut grid = vec![vec![BlockTag::Zero; two_k]; two_k];
    if case == CircularCase::K2 {
        use BlockTag::{Base, BaseInv, Ident, Zero};
        grid = vec![
            vec![Base(1), Ident(1), Zero, Ident(2)],
            vec![Ident(1), BaseInv(-1), Ident(2), Zero],
            vec![Zero, Ident(1), Base(-1), Ident(1)],
            vec![Ident(1), Zero, Ident(1), BaseInv(1)],
        ];
    } else {
        // Shared base shape: B / B^-1 on the diagonal by parity, identity
        // blocks directly above and below each diagonal (cyclically).
        for (i, row) in grid.iter_mut().enumerate() {
            row[i] = if i % 2 == 0 {
                BlockTag::Base(1)
            } else {
                BlockTag::BaseInv(1)
            };
        }
        for j in 0..two_k {
            grid[(j + two_k - 1) % two_k][j] = BlockTag::Ident(1);
            grid[(j + 1) % two_k][j] = BlockTag::Ident(1);
        }
        match case {
            CircularCase::Mod0 => {}
            CircularCase::Mod1 => {
                grid[0][two_k - 1] = BlockTag::Ident(-1);
                grid[two_k - 1][0] = BlockTag::Ident(-1);
                grid[0][1] = BlockTag::Ident(2);
                grid[3][2] = BlockTag::Ident(2);
                grid[two_k - 1][two_k - 2] = BlockTag::Ident(2);
                grid[two_k - 4][two_k - 3] = BlockTag::Ident(2);
            }
            CircularCase::Mod2 => {
                grid[0][two_k - 1] = BlockTag::Ident(-1);
                grid[two_k - 1][0] = BlockTag::Ident(-1);
                grid[2][2] = BlockTag::Base(2);
                grid[two_k - 3][two_k - 3] = BlockTag::BaseInv(2);
            }
            CircularCase::K2 => unreachable!(),
        }
    }
    let b = cert.block_size();
    Ok(BlockMatrix {
        kind: BlockKind::Circular { k, case },
        grid,
        row_dims: vec![b; two_k],
        col_dims: vec![b; two_k],
    })
}

/// The 2 x 2 prism grid [[I_n, Cᵀ], [B, I_m]].
pub fn prism_block_matrix<F: Field>(pair: &RowInversePair<F>) -> BlockMatrix {
    let (m, n) = (pair.x_size(), pair.y_size());
    BlockMatrix {
        kind: BlockKind::Prism,
        grid: vec![
            vec![BlockTag::Ident(1), BlockTag::CTrans],
            vec![BlockTag::Base(1), BlockTag::Ident(1)],
        ],
        row_dims: vec![n, m],
        col_dims: vec![n, m],
    }
}

/// A concrete instantiation: the product graph together with the audited
/// weighted bi-adjacency matrix R.
pub struct Instantiated<F: Field> {
    pub product: BipartiteGraph,
    pub r: crate::certificates::WeightedBiAdjacency<F>,
}

/// Substitute the certificate blocks into a circular grid and audit the
/// result against G □ C_{2k}. Any support mismatch is a hard failure.
pub fn instantiate_circular<F: Field>(
    bm: &BlockMatrix,
    cert: &InvolutoryCertificate<F>,
) -> Result<Instantiated<F>, BlockError> {
    let BlockKind::Circular { .. } = bm.kind else {
        return Err(BlockError::NotCircular("prism".into()));
    };
    let b = cert.block_size();
    if bm.row_dims.iter().any(|&d| d != b) {
        return Err(BlockError::BlockSizeMismatch {
            grid: bm.row_dims[0],
            cert: b,
        });
    }
    let two_k = bm.block_rows();
    let field = cert.field().clone();
    let product = cartesian_product(cert.host(), &cycle(two_k)?.to_simple())?;
    let x_order = cert.b().row_vertices();
    let y_order = cert.b().col_vertices();
    // Copy c (0-based) holds X_{c+1} on rows when c is even, Y_{c+1} when
    // odd; columns the other way round. Product vertex (v, c) = v*2k + c.
    let row_vertices: Vec<usize> = (0..two_k)
        .flat_map(|c| {
            let side = if c % 2 == 0 { x_order } else { y_order };
            side.iter().map(move |&v| v * two_k + c)
        })
        .collect();
    let col_vertices: Vec<usize> = (0..two_k)
        .flat_map(|c| {
            let side = if c % 2 == 0 { y_order } else { x_order };
            side.iter().map(move |&v| v * two_k + c)
        })
        .collect();
    let bmat = cert.b().matrix();
    let binv = cert.b_inv().matrix();
    let order = two_k * b;
    let matrix = Matrix::from_fn(field.clone(), order, order, |i, j| {
        let (bi, ii) = (i / b, i % b);
        let (bj, jj) = (j / b, j % b);
        match bm.grid[bi][bj] {
            BlockTag::Zero => field.zero(),
            BlockTag::Ident(c) => {
                if ii == jj {
                    field.int(c)
                } else {
                    field.zero()
                }
            }
            BlockTag::Base(c) => field.mul(&field.int(c), &bmat[(ii, jj)]),
            BlockTag::BaseInv(c) => field.mul(&field.int(c), &binv[(ii, jj)]),
            BlockTag::CTrans => unreachable!("circular grids carry no C^T block"),
        }
    });
    let r = crate::certificates::WeightedBiAdjacency::new(
        product.clone(),
        row_vertices,
        col_vertices,
        matrix,
    )?;
    Ok(Instantiated { product, r })
}

/// Substitute a row-inverse pair into the prism grid and audit the result
/// against G □ K₂.
pub fn instantiate_prism<F: Field>(
    bm: &BlockMatrix,
    pair: &RowInversePair<F>,
) -> Result<Instantiated<F>, BlockError> {
    if bm.kind != BlockKind::Prism {
        return Err(BlockError::NotCircular("expected the prism grid".into()));
    }
    let (m, n) = (pair.x_size(), pair.y_size());
    if bm.row_dims != vec![n, m] {
        return Err(BlockError::BlockSizeMismatch {
            grid: bm.row_dims[0],
            cert: n,
        });
    }
    let field = pair.field().clone();
    let product = cartesian_product(pair.host(), &k2().to_simple())?;
    let x_order = pair.b().row_vertices();
    let y_order = pair.b().col_vertices();
    // Rows (Y₁, X₂), columns (Y₂, X₁); product vertex (v, t) = 2v + t.
    let row_vertices: Vec<usize> = y_order
        .iter()
        .map(|&v| 2 * v)
        .chain(x_order.iter().map(|&v| 2 * v + 1))
        .collect();
    let col_vertices: Vec<usize> = y_order
        .iter()
        .map(|&v| 2 * v + 1)
        .chain(x_order.iter().map(|&v| 2 * v))
        .collect();
    let bmat = pair.b().matrix();
    let cmat = pair.c().matrix();
    let matrix = Matrix::from_fn(field.clone(), n + m, n + m, |i, j| {
        match (i < n, j < n) {
            // (Y₁, Y₂): identity between corresponding Y copies.
            (true, true) => {
                if i == j {
                    field.one()
                } else {
                    field.zero()
                }
            }
            // (Y₁, X₁): C transposed.
            (true, false) => cmat[(j - n, i)].clone(),
            // (X₂, Y₂): B.
            (false, true) => bmat[(i - n, j)].clone(),
            // (X₂, X₁): identity.
            (false, false) => {
                if i == j {
                    field.one()
                } else {
                    field.zero()
                }
            }
        }
    });
    let r = crate::certificates::WeightedBiAdjacency::new(
        product.clone(),
        row_vertices,
        col_vertices,
        matrix,
    )?;
    Ok(Instantiated { product, r })
}

/// Human-readable grid, for reports and debugging.
pub fn render_grid(bm: &BlockMatrix) -> Vec<String> {
    bm.grid
        .iter()
        .map(|row| {
            row.iter()
                .map(|t| t.describe())
                .collect::<Vec<_>>()
                .join(" ")
        })
        .collect()
}
