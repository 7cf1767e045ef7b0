//! Exact Gram-Schmidt orthogonalization and lattice volume.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::basis::IntBasis;
use crate::error::{Error, Result};

/// Orthogonal vectors `b_i*`, coefficients `mu_{i,j}` and squared norms,
/// all exact rationals. This is the certificate substrate for every
/// reducedness and shortness claim in the crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GsoData {
    star: Vec<Vec<BigRational>>,
    /// `mu[i]` holds the coefficients against `b_0*..b_{i-1}*`.
    mu: Vec<Vec<BigRational>>,
    norms_sq: Vec<BigRational>,
}

impl GsoData {
    pub fn num_rows(&self) -> usize {
        self.star.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.star.first().map_or(0, |v| v.len())
    }

    pub fn star(&self, i: usize) -> &[BigRational] {
        &self.star[i]
    }

    pub fn mu(&self, i: usize, j: usize) -> &BigRational {
        &self.mu[i][j]
    }

    pub fn norm_sq(&self, i: usize) -> &BigRational {
        &self.norms_sq[i]
    }

    pub fn norms_sq(&self) -> &[BigRational] {
        &self.norms_sq
    }

    /// Rebuilds source row `i` as `b_i* + sum_{j<i} mu_{i,j} b_j*`.
    pub fn reconstruct_row(&self, i: usize) -> Vec<BigRational> {
        let mut out = self.star[i].clone();
        for j in 0..i {
            for (o, s) in out.iter_mut().zip(&self.star[j]) {
                *o += &self.mu[i][j] * s;
            }
        }
        out
    }
}

/// Exact GSO of an independent integer row basis.
///
/// Fails with the first dependent row index when the rows are not
/// linearly independent.
pub fn gram_schmidt(basis: &IntBasis) -> Result<GsoData> {
    let rows: Vec<Vec<BigRational>> = basis
        .rows()
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    gram_schmidt_rows(&rows)
}

/// Exact GSO of rational rows; used for dual bases.
pub fn gram_schmidt_rows(rows: &[Vec<BigRational>]) -> Result<GsoData> {
    let m = rows.len();
    let mut star: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut mu: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut norms_sq: Vec<BigRational> = Vec::with_capacity(m);

    for (i, row) in rows.iter().enumerate() {
        let mut v = row.clone();
        let mut coeffs = Vec::with_capacity(i);
        for j in 0..i {
            let c = rat_dot(row, &star[j]) / &norms_sq[j];
            for k in 0..v.len() {
                let t = &c * &star[j][k];
                v[k] -= t;
            }
            coeffs.push(c);
        }
        let n2 = rat_dot(&v, &v);
        if n2.is_zero() {
            return Err(Error::RankDeficient { row: i });
        }
        star.push(v);
        mu.push(coeffs);
        norms_sq.push(n2);
    }
    Ok(GsoData { star, mu, norms_sq })
}

/// Squared lattice volume with its exact square root when one exists.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Volume {
    sq: BigRational,
    exact: Option<BigRational>,
}

impl Volume {
    pub fn sq(&self) -> &BigRational {
        &self.sq
    }

    /// `Some` exactly when the volume itself is rational.
    pub fn exact(&self) -> Option<&BigRational> {
        self.exact.as_ref()
    }
}

/// Volume of the lattice as the product of GSO norms.
///
/// Comparisons should go through `Volume::sq`; the plain volume is only
/// materialized when its square is a perfect rational square.
pub fn lattice_volume(gso: &GsoData) -> Volume {
    let sq: BigRational = gso
        .norms_sq
        .iter()
        .fold(BigRational::from_integer(BigInt::from(1)), |acc, n| acc * n);
    let exact = match (sqrt_exact(sq.numer()), sqrt_exact(sq.denom())) {
        (Some(n), Some(d)) => Some(BigRational::new(n, d)),
        _ => None,
    };
    Volume { sq, exact }
}

/// Exact integer square root, `None` when `n` is negative or not a square.
pub fn sqrt_exact(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

pub(crate) fn rat_dot(x: &[BigRational], y: &[BigRational]) -> BigRational {
    debug_assert_eq!(x.len(), y.len());
    x.iter()
        .zip(y)
        .fold(BigRational::zero(), |acc, (a, b)| acc + a * b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn int(n: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(n))
    }

    #[test]
    fn identity_already_orthogonal() {
        let gso = gram_schmidt(&IntBasis::identity(3)).unwrap();
        let (one, zero) = (int(1), int(0));
        for i in 0..3 {
            assert_eq!(gso.norm_sq(i), &one);
            for j in 0..i {
                assert!(gso.mu(i, j).is_zero());
            }
            for (k, x) in gso.star(i).iter().enumerate() {
                assert_eq!(x, if k == i { &one } else { &zero });
            }
        }
    }

    #[test]
    fn two_dim_example() {
        let b = IntBasis::from_i64(&[&[1, 1], &[0, 2]]).unwrap();
        let gso = gram_schmidt(&b).unwrap();
        assert_eq!(gso.mu(1, 0), &int(1));
        assert_eq!(gso.star(1), &[int(-1), int(1)]);
    }

    #[test]
    fn half_coefficient_example() {
        let b = IntBasis::from_i64(&[&[2, 0], &[1, 3]]).unwrap();
        let gso = gram_schmidt(&b).unwrap();
        assert_eq!(gso.mu(1, 0), &rat(1, 2));
        assert_eq!(gso.star(1), &[int(0), int(3)]);
    }

    #[test]
    fn dependent_rows_name_offender() {
        let b = IntBasis::from_i64(&[&[1, 2], &[2, 4]]).unwrap();
        assert_eq!(
            gram_schmidt(&b).unwrap_err(),
            Error::RankDeficient { row: 1 }
        );
    }

    #[test]
    fn orthogonality_and_reconstruction() {
        let b = IntBasis::from_i64(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]).unwrap();
        let gso = gram_schmidt(&b).unwrap();
        for i in 0..3 {
            for j in 0..i {
                assert!(rat_dot(gso.star(i), gso.star(j)).is_zero());
            }
            assert_eq!(rat_dot(gso.star(i), gso.star(i)), *gso.norm_sq(i));
            let rec = gso.reconstruct_row(i);
            let orig: Vec<BigRational> = b
                .row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect();
            assert_eq!(rec, orig);
        }
    }

    #[test]
    fn volume_identity_and_diagonal() {
        let gso = gram_schmidt(&IntBasis::identity(4)).unwrap();
        let v = lattice_volume(&gso);
        assert!(v.sq().is_one());
        assert_eq!(v.exact(), Some(&int(1)));

        let b = IntBasis::from_i64(&[&[2, 0], &[0, 3]]).unwrap();
        let v = lattice_volume(&gram_schmidt(&b).unwrap());
        assert_eq!(v.sq(), &int(36));
        assert_eq!(v.exact(), Some(&int(6)));
    }

    #[test]
    fn volume_square_matches_determinant_square() {
        let b = IntBasis::from_i64(&[&[3, 1, 4], &[1, 5, 9], &[2, 6, 5]]).unwrap();
        let v = lattice_volume(&gram_schmidt(&b).unwrap());
        let det = crate::matrix::RatMatrix::from_basis(&b)
            .determinant()
            .unwrap();
        assert_eq!(v.sq(), &(&det * &det));
    }

    #[test]
    fn irrational_volume_flagged() {
        let b = IntBasis::from_i64(&[&[1, 1]]).unwrap();
        let v = lattice_volume(&gram_schmidt(&b).unwrap());
        assert_eq!(v.sq(), &int(2));
        assert_eq!(v.exact(), None);
    }
}
