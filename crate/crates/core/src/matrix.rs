//! Skew-symmetric exchange matrices and the matrix form of FZ mutation.

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub type IntMatrix = DMatrix<i64>;

/// Integer skew-symmetric matrix; entry `(i, j)` is the net number of
/// arrows `i -> j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SkewMatrix {
    entries: IntMatrix,
}

impl SkewMatrix {
    pub fn new(entries: IntMatrix) -> Result<Self> {
        if !entries.is_square() {
            return Err(Error::DimensionMismatch {
                expected: entries.nrows(),
                found: entries.ncols(),
            });
        }
        if entries != -entries.transpose() {
            return Err(Error::NotSkewSymmetric);
        }
        Ok(Self { entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
        }
        Self::new(IntMatrix::from_fn(n, n, |i, j| rows[i][j]))
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            entries: IntMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[(i, j)]
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn into_entries(self) -> IntMatrix {
        self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.get(i, j)).collect())
            .collect()
    }

    /// Fomin-Zelevinsky mutation at index `k`.
    pub fn mutate(&self, k: usize) -> Result<Self> {
        let n = self.dim();
        if k >= n {
            return Err(Error::IndexOutOfRange { index: k, dim: n });
        }
        let m = &self.entries;
        let out = IntMatrix::from_fn(n, n, |i, j| {
            if i == k || j == k {
                -m[(i, j)]
            } else {
                let (a, b) = (m[(i, k)], m[(k, j)]);
                m[(i, j)] + (a.abs() * b + a * b.abs()) / 2
            }
        });
        Ok(Self { entries: out })
    }

    /// Conjugate by a permutation: entry `(i, j)` of the result is entry
    /// `(perm[i], perm[j])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.dim();
        Self {
            entries: IntMatrix::from_fn(n, n, |i, j| self.entries[(perm[i], perm[j])]),
        }
    }
}

pub fn fz_mutate_matrix(m: &SkewMatrix, k: usize) -> Result<SkewMatrix> {
    m.mutate(k)
}

/// The `l x l` cyclic permutation matrix with ones at `(i, i + 1 mod l)`.
pub fn cyclic_permutation(l: usize) -> IntMatrix {
    IntMatrix::from_fn(l, l, |i, j| i64::from((i + 1) % l == j))
}

/// Integer matrix power, `a^0 = I`.
pub fn power(a: &IntMatrix, e: usize) -> IntMatrix {
    let mut out = IntMatrix::identity(a.nrows(), a.ncols());
    for _ in 0..e {
        out = &out * a;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_sign_flip() {
        let m = SkewMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]).unwrap();
        assert_eq!(
            m.mutate(0).unwrap().to_rows(),
            vec![vec![0, -1], vec![1, 0]]
        );
    }

    #[test]
    fn linear_a3_at_middle() {
        let m = SkewMatrix::from_rows(&[vec![0, 1, 0], vec![-1, 0, 1], vec![0, -1, 0]]).unwrap();
        assert_eq!(
            m.mutate(1).unwrap().to_rows(),
            vec![vec![0, -1, 1], vec![1, 0, -1], vec![-1, 1, 0]]
        );
    }

    #[test]
    fn involution() {
        let m = SkewMatrix::from_rows(&[
            vec![0, 2, -1, 0],
            vec![-2, 0, 3, 1],
            vec![1, -3, 0, -2],
            vec![0, -1, 2, 0],
        ])
        .unwrap();
        for k in 0..4 {
            assert_eq!(m.mutate(k).unwrap().mutate(k).unwrap(), m);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(
            SkewMatrix::from_rows(&[vec![0, 1], vec![1, 0]]),
            Err(Error::NotSkewSymmetric)
        ));
        assert!(matches!(
            SkewMatrix::zeros(2).mutate(2),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn cyclic_permutation_order() {
        let a = cyclic_permutation(4);
        assert_eq!(power(&a, 4), IntMatrix::identity(4, 4));
        assert_ne!(power(&a, 2), IntMatrix::identity(4, 4));
        assert_eq!(a.transpose() * &a, IntMatrix::identity(4, 4));
    }
}
