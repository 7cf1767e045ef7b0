//! Exact rational matrices: elimination, solve, inverse, rank, dual bases.
//!
//! `num_rational::BigRational` keeps every entry in canonical reduced form
//! (gcd 1, positive denominator) after each arithmetic operation, so equality
//! is structural.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::basis::IntBasis;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<BigRational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<BigRational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(RatMatrix {
            rows,
            cols,
            entries,
        })
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix {
            rows,
            cols,
            entries: vec![BigRational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n, n);
        for i in 0..n {
            *m.get_mut(i, i) = BigRational::one();
        }
        m
    }

    pub fn from_basis(basis: &IntBasis) -> Self {
        Self::from_int_rows(basis.rows())
    }

    pub fn from_int_rows(rows: &[Vec<BigInt>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let entries = rows
            .iter()
            .flat_map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())))
            .collect();
        RatMatrix {
            rows: r,
            cols: c,
            entries,
        }
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        &self.entries[i * self.cols + j]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut BigRational {
        &mut self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn reverse_rows(&mut self) {
        let c = self.cols;
        let half = self.rows / 2;
        for i in 0..half {
            let j = self.rows - 1 - i;
            for k in 0..c {
                self.entries.swap(i * c + k, j * c + k);
            }
        }
    }

    pub fn transpose(&self) -> RatMatrix {
        let mut t = Self::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                *t.get_mut(j, i) = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = BigRational::zero();
                for k in 0..self.cols {
                    acc += self.get(i, k) * other.get(k, j);
                }
                *out.get_mut(i, j) = acc;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Result<Vec<BigRational>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    if i == j {
                        self.get(i, j).is_one()
                    } else {
                        self.get(i, j).is_zero()
                    }
                })
            })
    }

    /// Exact rank over the rationals.
    pub fn rank(&self) -> usize {
        let mut work = self.clone();
        let mut rank = 0;
        for col in 0..work.cols {
            if rank == work.rows {
                break;
            }
            match pivot_row(&work, rank, col) {
                Some(p) => {
                    work.swap_rows(rank, p);
                    work.clear_below(rank, col);
                    rank += 1;
                }
                None => continue,
            }
        }
        rank
    }

    /// Exact solution `x` of `self * x = rhs` for square `self`.
    pub fn solve(&self, rhs: &[BigRational]) -> Result<Vec<BigRational>> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        if rhs.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.len(),
            });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut b = rhs.to_vec();
        for col in 0..n {
            let p = pivot_row(&work, col, col).ok_or(Error::SingularMatrix)?;
            work.swap_rows(col, p);
            b.swap(col, p);
            for i in col + 1..n {
                if work.get(i, col).is_zero() {
                    continue;
                }
                let factor = work.get(i, col) / work.get(col, col);
                for j in col..n {
                    let v = &factor * work.get(col, j);
                    *work.get_mut(i, j) -= v;
                }
                let v = &factor * &b[col];
                b[i] -= v;
            }
        }
        let mut x = vec![BigRational::zero(); n];
        for i in (0..n).rev() {
            let mut acc = b[i].clone();
            for (j, xj) in x.iter().enumerate().skip(i + 1) {
                acc -= work.get(i, j) * xj;
            }
            x[i] = acc / work.get(i, i);
        }
        Ok(x)
    }

    /// Exact inverse of a square matrix.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = pivot_row(&work, col, col).ok_or(Error::SingularMatrix)?;
            work.swap_rows(col, p);
            inv.swap_rows(col, p);
            let pivot = work.get(col, col).clone();
            for j in 0..n {
                *work.get_mut(col, j) /= &pivot;
                *inv.get_mut(col, j) /= &pivot;
            }
            for i in 0..n {
                if i == col || work.get(i, col).is_zero() {
                    continue;
                }
                let factor = work.get(i, col).clone();
                for j in 0..n {
                    let v = &factor * work.get(col, j);
                    *work.get_mut(i, j) -= v;
                    let v = &factor * inv.get(col, j);
                    *inv.get_mut(i, j) -= v;
                }
            }
        }
        Ok(inv)
    }

    /// Exact determinant of a square matrix.
    pub fn determinant(&self) -> Result<BigRational> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let n = self.rows;
        let mut work = self.clone();
        let mut det = BigRational::one();
        for col in 0..n {
            let p = match pivot_row(&work, col, col) {
                Some(p) => p,
                None => return Ok(BigRational::zero()),
            };
            if p != col {
                work.swap_rows(col, p);
                det = -det;
            }
            det *= work.get(col, col);
            work.clear_below(col, col);
        }
        Ok(det)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        for k in 0..c {
            self.entries.swap(a * c + k, b * c + k);
        }
    }

    fn clear_below(&mut self, pivot: usize, col: usize) {
        for i in pivot + 1..self.rows {
            if self.get(i, col).is_zero() {
                continue;
            }
            let factor = self.get(i, col) / self.get(pivot, col);
            for j in col..self.cols {
                let v = &factor * self.get(pivot, j);
                *self.get_mut(i, j) -= v;
            }
        }
    }
}

/// Pivot choice: among nonzero candidates in `col` at or below `start`, the
/// largest absolute numerator wins; ties go to the lowest row index.
fn pivot_row(m: &RatMatrix, start: usize, col: usize) -> Option<usize> {
    let mut best: Option<(usize, BigInt)> = None;
    for i in start..m.num_rows() {
        let e = m.get(i, col);
        if e.is_zero() {
            continue;
        }
        let mag = e.numer().abs();
        match &best {
            Some((_, cur)) if *cur >= mag => {}
            _ => best = Some((i, mag)),
        }
    }
    best.map(|(i, _)| i)
}

/// Exact rank of an integer basis over the rationals.
pub fn rational_rank(basis: &IntBasis) -> usize {
    RatMatrix::from_basis(basis).rank()
}

/// Dual basis `(B B^T)^{-1} B` of a full-rank row basis.
///
/// For square `B` this is the transposed inverse. With `reverse` the row
/// order is flipped, which pairs row `i` of the result with primal row
/// `m - i + 1` in the GSO duality relation.
pub fn dual_basis(basis: &IntBasis, reverse: bool) -> Result<RatMatrix> {
    let b = RatMatrix::from_basis(basis);
    let gram = b.mul(&b.transpose())?;
    let inv = gram.inverse()?;
    let mut dual = inv.mul(&b)?;
    if reverse {
        dual.reverse_rows();
    }
    Ok(dual)
}

/// Exact solution of `m * x = t`.
pub fn solve_rational(m: &RatMatrix, t: &[BigRational]) -> Result<Vec<BigRational>> {
    m.solve(t)
}
