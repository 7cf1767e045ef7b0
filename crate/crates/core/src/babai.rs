//! Nearest-plane rounding against a reduced basis.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::basis::IntBasis;
use crate::error::{Error, Result};
use crate::gso::{rat_dot, GsoData};
pub use crate::numutil::round_half_even;

/// Lattice point returned by [`nearest_plane`] together with its exact
/// residual projections `<q - r, b_i*>`.
///
/// The defining contract is `|<q - r, b_i*>| <= |b_i*|^2 / 2` for every
/// `i`; when all inequalities are strict the point is the unique one
/// satisfying them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NearestPlaneResult {
    /// The lattice point `sum coeffs_i * b_i`.
    pub point: Vec<BigInt>,
    /// Integer combination coefficients against the basis rows.
    pub coeffs: Vec<BigInt>,
    /// `<q - r, b_i*>` per row, exact.
    pub residual_projections: Vec<BigRational>,
}

/// Babai's nearest-plane walk: back to front, round the projection of the
/// remaining target onto each `b_i*` to the closest plane.
///
/// `gso` must be the orthogonalization of `basis`. Rounding is
/// half-to-even, which pins down the boundary case
/// `|<q - r, b_i*>| = |b_i*|^2 / 2` deterministically.
pub fn nearest_plane(
    basis: &IntBasis,
    gso: &GsoData,
    q: &[BigRational],
) -> Result<NearestPlaneResult> {
    let m = basis.num_rows();
    if gso.num_rows() != m || gso.ambient_dim() != basis.ambient_dim() {
        return Err(Error::InvalidParams(
            "gso does not match the basis shape".into(),
        ));
    }
    if q.len() != basis.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: basis.ambient_dim(),
            found: q.len(),
        });
    }

    let mut rest: Vec<BigRational> = q.to_vec();
    let mut coeffs = vec![BigInt::zero(); m];
    for i in (0..m).rev() {
        let c = round_half_even(&(rat_dot(&rest, gso.star(i)) / gso.norm_sq(i)));
        if !c.is_zero() {
            for (t, b) in rest.iter_mut().zip(basis.row(i)) {
                *t -= BigRational::from_integer(&c * b);
            }
        }
        coeffs[i] = c;
    }

    let mut point = vec![BigInt::zero(); basis.ambient_dim()];
    for (c, row) in coeffs.iter().zip(basis.rows()) {
        for (p, b) in point.iter_mut().zip(row) {
            *p += c * b;
        }
    }

    // rest == q - point by construction; project it for the certificate
    let residual_projections = (0..m).map(|i| rat_dot(&rest, gso.star(i))).collect();

    Ok(NearestPlaneResult {
        point,
        coeffs,
        residual_projections,
    })
}

/// Does a result satisfy `|<q - r, b_i*>| <= |b_i*|^2 / 2` everywhere?
pub fn contract_holds(result: &NearestPlaneResult, gso: &GsoData) -> bool {
    result
        .residual_projections
        .iter()
        .zip(gso.norms_sq())
        .all(|(proj, n2)| {
            let double = proj * BigRational::from_integer(BigInt::from(2));
            double.abs() <= *n2
        })
}
