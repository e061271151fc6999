//! Dense matrices over an exact [`Field`], row-major storage.
//!
//! Sizes here are desk scale (a few hundred rows at most), so the
//! representation favors clarity over sparsity.

use std::ops::{Index, IndexMut};

use crate::fields::Field;

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Self {
        assert_eq!(rows * cols, data.len(), "matrix data length mismatch");
        Matrix {
            field,
            rows,
            cols,
            data,
        }
    }

    pub fn zeros(field: F, rows: usize, cols: usize) -> Self {
        let data = vec![field.zero(); rows * cols];
        Matrix::new(field, rows, cols, data)
    }

    pub fn identity(field: F, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = m.field.one();
        }
        m
    }

    pub fn from_fn(field: F, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> F::Elem) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix::new(field, rows, cols, data)
    }

    /// Build from integer entries via the field's canonical embedding.
    pub fn from_int_rows(field: F, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.len(), c, "ragged integer matrix");
            for &v in row {
                data.push(field.int(v));
            }
        }
        Matrix::new(field, r, c, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero_entry(&self, i: usize, j: usize) -> bool {
        self.field.is_zero(&self[(i, j)])
    }

    pub fn transpose(&self) -> Matrix<F> {
        Matrix::from_fn(self.field.clone(), self.cols, self.rows, |i, j| {
            self[(j, i)].clone()
        })
    }

    pub fn mul(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(
            self.field, other.field,
            "matrix product across distinct field instances"
        );
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        Matrix::from_fn(self.field.clone(), self.rows, other.cols, |i, j| {
            let mut acc = self.field.zero();
            for k in 0..self.cols {
                if self.is_zero_entry(i, k) {
                    continue;
                }
                let term = self.field.mul(&self[(i, k)], &other[(k, j)]);
                acc = self.field.add(&acc, &term);
            }
            acc
        })
    }

    pub fn add(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.field, other.field);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.add(&self[(i, j)], &other[(i, j)])
        })
    }

    pub fn sub(&self, other: &Matrix<F>) -> Matrix<F> {
        assert_eq!(self.field, other.field);
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.sub(&self[(i, j)], &other[(i, j)])
        })
    }

    pub fn neg(&self) -> Matrix<F> {
        Matrix::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.neg(&self[(i, j)])
        })
    }

    pub fn scale(&self, c: &F::Elem) -> Matrix<F> {
        Matrix::from_fn(self.field.clone(), self.rows, self.cols, |i, j| {
            self.field.mul(c, &self[(i, j)])
        })
    }

    pub fn keep_rows(&self, keep: &[usize]) -> Matrix<F> {
        Matrix::from_fn(self.field.clone(), keep.len(), self.cols, |i, j| {
            self[(keep[i], j)].clone()
        })
    }

    /// First entry where the matrix differs from the identity, if any.
    pub fn identity_defect(&self) -> Option<(usize, usize)> {
        if !self.is_square() {
            return Some((0, 0));
        }
        for i in 0..self.rows {
            for j in 0..self.cols {
                let want = if i == j {
                    self.field.one()
                } else {
                    self.field.zero()
                };
                if self[(i, j)] != want {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_identity(&self) -> bool {
        self.identity_defect().is_none()
    }

    /// First nonzero entry in row-major order, if any.
    pub fn first_nonzero(&self) -> Option<(usize, usize)> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self.is_zero_entry(i, j) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    pub fn is_zero(&self) -> bool {
        self.first_nonzero().is_none()
    }

    /// Gauss-Jordan inverse; `None` when singular.
    pub fn inverse(&self) -> Option<Matrix<F>> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let f = self.field.clone();
        let mut a = self.clone();
        let mut inv = Matrix::identity(f.clone(), n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.is_zero_entry(r, col))?;
            if pivot != col {
                a.swap_rows(pivot, col);
                inv.swap_rows(pivot, col);
            }
            let p = f.inverse(&a[(col, col)]).expect("pivot nonzero");
            a.scale_row(col, &p);
            inv.scale_row(col, &p);
            for r in 0..n {
                if r != col && !a.is_zero_entry(r, col) {
                    let factor = a[(r, col)].clone();
                    a.sub_scaled_row(r, col, &factor);
                    inv.sub_scaled_row(r, col, &factor);
                }
            }
        }
        Some(inv)
    }

    pub fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    pub fn scale_row(&mut self, r: usize, c: &F::Elem) {
        for j in 0..self.cols {
            let v = self.field.mul(&self[(r, j)], c);
            self[(r, j)] = v;
        }
    }

    /// `row[target] -= factor * row[source]`
    pub fn sub_scaled_row(&mut self, target: usize, source: usize, factor: &F::Elem) {
        for j in 0..self.cols {
            let t = self.field.mul(factor, &self[(source, j)]);
            let v = self.field.sub(&self[(target, j)], &t);
            self[(target, j)] = v;
        }
    }

    pub fn render_entry(&self, i: usize, j: usize) -> String {
        self.field.render(&self[(i, j)])
    }

    /// Rows rendered in the field's scalar syntax, comma-separated.
    pub fn render_rows(&self) -> Vec<String> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols)
                    .map(|j| self.render_entry(i, j))
                    .collect::<Vec<_>>()
                    .join(", ")
            })
            .collect()
    }
}

impl<F: Field> Index<(usize, usize)> for Matrix<F> {
    type Output = F::Elem;
    fn index(&self, (i, j): (usize, usize)) -> &F::Elem {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

impl<F: Field> IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F::Elem {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{PrimeField, Rationals};

    #[test]
    fn multiply_and_invert_over_q() {
        let f = Rationals;
        let b = Matrix::from_int_rows(f, &[vec![1, 1], vec![1, -1]]);
        let inv = b.inverse().expect("nonsingular");
        assert!(b.mul(&inv).is_identity());
        let singular = Matrix::from_int_rows(f, &[vec![1, 1], vec![1, 1]]);
        assert!(singular.inverse().is_none());
    }

    #[test]
    fn inverse_over_gf() {
        let f = PrimeField::new(7).unwrap();
        let m = Matrix::from_int_rows(f, &[vec![2, 1], vec![1, 1]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
    }

    #[test]
    fn identity_defect_reports_first_bad_entry() {
        let f = Rationals;
        let mut m = Matrix::identity(f, 3);
        assert!(m.is_identity());
        m[(1, 2)] = Rationals.int(5);
        assert_eq!(m.identity_defect(), Some((1, 2)));
    }
}
