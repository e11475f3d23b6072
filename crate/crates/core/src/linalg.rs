//! Small dense exact matrices: inversion, null spaces, projectors.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::vector::{Rational, Vector};

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    rows: Vec<Vector>,
    cols: usize,
}

impl Matrix {
    /// Builds a matrix from row vectors. All rows must share `cols` entries.
    pub fn from_rows(rows: Vec<Vector>, cols: usize) -> Self {
        assert!(rows.iter().all(|r| r.dim() == cols), "ragged matrix rows");
        Matrix { rows, cols }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(rows.iter().map(|r| Vector::from_ints(r)).collect(), cols)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_rows((0..n).map(|i| Vector::unit(n, i)).collect(), n)
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Vector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.rows[i][j]
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new(self.rows.iter().map(|r| r[j].clone()).collect())
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_rows(self.columns(), self.nrows())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.nrows(), "incompatible matrix product");
        let other_cols = other.columns();
        let rows = self.rows.iter().map(|r| Vector::new(other_cols.iter().map(|c| r.dot(c)).collect())).collect();
        Matrix::from_rows(rows, other.cols)
    }

    pub fn apply(&self, v: &Vector) -> Vector {
        Vector::new(self.rows.iter().map(|r| r.dot(v)).collect())
    }

    /// Gauss-Jordan inverse; `None` when singular or non-square.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.nrows();
        if n != self.cols {
            return None;
        }
        let mut aug: Vec<Vec<Rational>> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| {
                let mut row = r.coords().to_vec();
                row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(col, pivot);
            let inv = aug[col][col].recip();
            for v in aug[col].iter_mut() {
                *v *= &inv;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let factor = aug[r][col].clone();
                    let pivot_row = aug[col].clone();
                    for (v, p) in aug[r].iter_mut().zip(&pivot_row) {
                        *v -= &factor * p;
                    }
                }
            }
        }
        let rows = aug.into_iter().map(|r| Vector::new(r[n..].to_vec())).collect();
        Some(Matrix::from_rows(rows, n))
    }

    /// Basis of {x : Mx = 0} from the reduced row echelon form.
    pub fn null_space(&self) -> Vec<Vector> {
        let n = self.cols;
        let mut m: Vec<Vec<Rational>> = self.rows.iter().map(|r| r.coords().to_vec()).collect();
        let mut pivot_cols = Vec::new();
        let mut row = 0;
        for col in 0..n {
            let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
                continue;
            };
            m.swap(row, p);
            let inv = m[row][col].recip();
            for v in m[row].iter_mut() {
                *v *= &inv;
            }
            for r in 0..m.len() {
                if r != row && !m[r][col].is_zero() {
                    let factor = m[r][col].clone();
                    let pivot_row = m[row].clone();
                    for (v, p) in m[r].iter_mut().zip(&pivot_row) {
                        *v -= &factor * p;
                    }
                }
            }
            pivot_cols.push(col);
            row += 1;
            if row == m.len() {
                break;
            }
        }
        (0..n)
            .filter(|c| !pivot_cols.contains(c))
            .map(|free| {
                let mut v = vec![Rational::zero(); n];
                v[free] = Rational::one();
                for (r, &pc) in pivot_cols.iter().enumerate() {
                    v[pc] = -m[r][free].clone();
                }
                Vector::new(v)
            })
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.nrows())
    }
}

/// Orthogonal projector onto the complement of span(`basis`):
/// P = I - N (N^T N)^{-1} N^T with the basis vectors as columns of N.
pub fn complement_projector(dim: usize, basis: &[Vector]) -> Matrix {
    if basis.is_empty() {
        return Matrix::identity(dim);
    }
    let nt = Matrix::from_rows(basis.to_vec(), dim);
    let gram_inv = nt.mul(&nt.transpose()).inverse().expect("basis vectors are linearly independent");
    let proj_span = nt.transpose().mul(&gram_inv).mul(&nt);
    let rows = (0..dim).map(|i| &Vector::unit(dim, i) - proj_span.row(i)).collect();
    Matrix::from_rows(rows, dim)
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.rows.iter()).finish()
    }
}

impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.rows.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vector::rat;

    #[test]
    fn inverse_round_trips() {
        let a = Matrix::from_int_rows(&[&[1, -1, 0], &[0, 1, -1], &[0, 1, 1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(inv.mul(&a).is_identity());
        assert_eq!(inv.get(1, 2), &rat(1, 2));
    }

    #[test]
    fn singular_has_no_inverse() {
        let a = Matrix::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(a.inverse().is_none());
    }

    #[test]
    fn null_space_of_difference_rows_is_ones() {
        let a = Matrix::from_int_rows(&[&[1, -1, 0, 0], &[0, 1, -1, 0], &[0, 0, 1, -1]]);
        let ns = a.null_space();
        assert_eq!(ns, vec![Vector::from_ints(&[1, 1, 1, 1])]);
    }

    #[test]
    fn projector_is_idempotent_and_symmetric() {
        let p = complement_projector(3, &[Vector::from_ints(&[1, 1, 1])]);
        assert_eq!(p.mul(&p), p);
        assert_eq!(p.transpose(), p);
        assert_eq!(p.apply(&Vector::from_ints(&[3, 0, 0])), Vector::from_ints(&[2, -1, -1]));
    }
}
