//! Integer row bases: the universal lattice carrier.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};

/// Ordered list of integer row vectors sharing one ambient dimension.
///
/// Rows are the lattice generators. Linear independence is not enforced at
/// construction; operations that require it check and report the first
/// offending row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntBasis {
    rows: Vec<Vec<BigInt>>,
    ambient_dim: usize,
}

impl IntBasis {
    pub fn new(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let ambient_dim = match rows.first() {
            Some(r) => r.len(),
            None => {
                return Err(Error::Precondition(
                    "basis must have at least one row".into(),
                ))
            }
        };
        if ambient_dim == 0 {
            return Err(Error::Precondition(
                "ambient dimension must be positive".into(),
            ));
        }
        for row in &rows {
            if row.len() != ambient_dim {
                return Err(Error::DimensionMismatch {
                    expected: ambient_dim,
                    found: row.len(),
                });
            }
        }
        Ok(IntBasis { rows, ambient_dim })
    }

    /// Builds a basis from primitive integers, mainly for tests.
    pub fn from_i64(rows: &[&[i64]]) -> Result<Self> {
        Self::new(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![BigInt::zero(); n];
                row[i] = BigInt::from(1);
                row
            })
            .collect();
        IntBasis {
            rows,
            ambient_dim: n,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn into_rows(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    /// Exact squared Euclidean norm of row `i`.
    pub fn row_norm_sq(&self, i: usize) -> BigInt {
        dot(&self.rows[i], &self.rows[i])
    }
}

/// Integer inner product of two equal-length vectors.
pub fn dot(x: &[BigInt], y: &[BigInt]) -> BigInt {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_ragged_rows() {
        let err = IntBasis::from_i64(&[&[1, 2], &[3]]).unwrap_err();
        assert!(matches!(
            err,
            Error::DimensionMismatch {
                expected: 2,
                found: 1
            }
        ));
    }

    #[test]
    fn rejects_empty() {
        assert!(IntBasis::new(vec![]).is_err());
    }

    #[test]
    fn identity_shape() {
        let b = IntBasis::identity(3);
        assert_eq!(b.num_rows(), 3);
        assert_eq!(b.ambient_dim(), 3);
        assert_eq!(b.row_norm_sq(1), BigInt::from(1));
    }
}
