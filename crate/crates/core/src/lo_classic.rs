//! Single-target subset-sum solving by reducing a scaled lattice and
//! scanning for a `{0,1}` certificate row.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};

use crate::basis::{dot, IntBasis};
use crate::error::{Error, Result};
use crate::reduction::{lll_reduce, ReductionParams};

/// Configuration for the scan solvers.
///
/// `scale` is the lattice scaling factor `K`; when absent it is derived as
/// `ceil(n * gamma^n)`, large enough that any row with a nonzero scaled
/// coordinate is longer than every candidate certificate.
#[derive(Debug, Clone)]
pub struct LoConfig {
    pub scale: Option<BigUint>,
    pub params: ReductionParams,
    pub try_complement: bool,
}

impl LoConfig {
    pub fn new(params: ReductionParams) -> Self {
        LoConfig {
            scale: None,
            params,
            try_complement: true,
        }
    }

    pub fn resolve_scale(&self, n: usize) -> BigUint {
        self.scale
            .clone()
            .unwrap_or_else(|| auto_scale(n, &self.params))
    }
}

impl Default for LoConfig {
    fn default() -> Self {
        Self::new(ReductionParams::default())
    }
}

/// `K = ceil(n * gamma^n)`, computed from exact `gamma^2` powers and
/// integer square-root bounds; no floating point.
pub fn auto_scale(n: usize, params: &ReductionParams) -> BigUint {
    // K is the least integer with K^2 >= n^2 * (gamma^2)^n
    let target = params.gamma_sq_pow(n as u64)
        * num_rational::BigRational::from_integer(BigInt::from(n * n));
    ceil_sqrt_rational(&target)
}

/// Least nonnegative integer `k` with `k^2 >= x`, for `x >= 0`.
pub(crate) fn ceil_sqrt_rational(x: &num_rational::BigRational) -> BigUint {
    let num = x.numer().magnitude().clone();
    let den = x.denom().magnitude().clone();
    let mut k = (&num / &den).sqrt();
    while &(&k * &k) * &den < num {
        k += 1u32;
    }
    k
}

/// The scaled `(n+1) x (n+1)` row lattice for weights `a` and target `t`:
/// row `i < n` is `e_i` with last coordinate `a_i * scale`, the final row
/// is `(0, ..., 0, t * scale)`.
pub fn build_lo_lattice(a: &[BigUint], target: &BigUint, scale: &BigUint) -> IntBasis {
    let n = a.len();
    let scale = BigInt::from(scale.clone());
    let mut rows = Vec::with_capacity(n + 1);
    for (i, w) in a.iter().enumerate() {
        let mut row = vec![BigInt::zero(); n + 1];
        row[i] = BigInt::one();
        row[n] = BigInt::from(w.clone()) * &scale;
        rows.push(row);
    }
    let mut last = vec![BigInt::zero(); n + 1];
    last[n] = BigInt::from(target.clone()) * &scale;
    rows.push(last);
    IntBasis::new(rows).expect("lattice rows are well formed")
}

/// Result of one classic solve, keeping the reduced primal basis around
/// for telemetry.
#[derive(Debug, Clone)]
pub struct ClassicOutcome {
    pub solution: Option<Vec<u8>>,
    pub used_complement: bool,
    /// Reduced basis of the primal lattice; `None` when the target was
    /// decided without any reduction.
    pub reduced: Option<IntBasis>,
}

/// Reduce, scan all rows for `+/-(e, 0)` with `e` in `{0,1}^n`, and
/// re-verify any hit arithmetically. Absence of a certificate is not a
/// proof of infeasibility.
pub fn solve_classic(a: &[BigUint], target: &BigInt, config: &LoConfig) -> Result<Option<Vec<u8>>> {
    Ok(solve_classic_detailed(a, target, config)?.solution)
}

pub fn solve_classic_detailed(
    a: &[BigUint],
    target: &BigInt,
    config: &LoConfig,
) -> Result<ClassicOutcome> {
    validate_weights(a)?;
    let n = a.len();
    let total = BigInt::from(a.iter().sum::<BigUint>());

    if target.is_negative() || target > &total {
        return Ok(ClassicOutcome {
            solution: None,
            used_complement: false,
            reduced: None,
        });
    }
    if target.is_zero() {
        return Ok(ClassicOutcome {
            solution: Some(vec![0; n]),
            used_complement: false,
            reduced: None,
        });
    }
    if target == &total {
        return Ok(ClassicOutcome {
            solution: Some(vec![1; n]),
            used_complement: true,
            reduced: None,
        });
    }

    let scale = config.resolve_scale(n);
    let t_mag = target.magnitude().clone();
    let reduced = lll_reduce(&build_lo_lattice(a, &t_mag, &scale), &config.params)?.basis;
    if let Some(e) = scan_rows(&reduced, a, target) {
        return Ok(ClassicOutcome {
            solution: Some(e),
            used_complement: false,
            reduced: Some(reduced),
        });
    }

    if config.try_complement {
        let complement_target: BigInt = &total - target;
        let ct_mag = complement_target.magnitude().clone();
        let co_reduced = lll_reduce(&build_lo_lattice(a, &ct_mag, &scale), &config.params)?.basis;
        if let Some(e) = scan_rows(&co_reduced, a, &complement_target) {
            let flipped: Vec<u8> = e.iter().map(|&b| 1 - b).collect();
            debug_assert_eq!(&weighted_sum(a, &flipped), target);
            return Ok(ClassicOutcome {
                solution: Some(flipped),
                used_complement: true,
                reduced: Some(reduced),
            });
        }
    }

    Ok(ClassicOutcome {
        solution: None,
        used_complement: false,
        reduced: Some(reduced),
    })
}

/// First row of the form `+/-(e, 0)`, `e` in `{0,1}^n`, that passes the
/// mandatory arithmetic re-verification.
fn scan_rows(reduced: &IntBasis, a: &[BigUint], target: &BigInt) -> Option<Vec<u8>> {
    let n = a.len();
    'rows: for row in reduced.rows() {
        if !row[n].is_zero() {
            continue;
        }
        let mut sign = 0i8;
        let mut e = vec![0u8; n];
        for (i, x) in row[..n].iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            let s = if x.is_one() {
                1
            } else if (-x).is_one() {
                -1
            } else {
                continue 'rows;
            };
            if sign == 0 {
                sign = s;
            } else if sign != s {
                continue 'rows;
            }
            e[i] = 1;
        }
        if sign == 0 {
            continue; // zero vector cannot occur in a basis, skip anyway
        }
        if &weighted_sum(a, &e) == target {
            return Some(e);
        }
    }
    None
}

pub(crate) fn weighted_sum(a: &[BigUint], e: &[u8]) -> BigInt {
    BigInt::from(
        a.iter()
            .zip(e)
            .filter(|(_, &b)| b == 1)
            .map(|(w, _)| w)
            .sum::<BigUint>(),
    )
}

pub(crate) fn validate_weights(a: &[BigUint]) -> Result<()> {
    if a.is_empty() {
        return Err(Error::Precondition("at least one weight required".into()));
    }
    if a.iter().any(|w| w.is_zero()) {
        return Err(Error::Precondition("weights must be positive".into()));
    }
    Ok(())
}

/// Rows shorter than the scale that are not integer multiples of the
/// embedded planted vector `(e, 0)`; the empirical count of spurious
/// short vectors.
pub fn count_spurious(reduced: &IntBasis, planted: &[u8], scale: &BigUint) -> usize {
    let n = planted.len();
    let scale_sq = {
        let s = BigInt::from(scale.clone());
        &s * &s
    };
    let e_bar: Vec<BigInt> = planted
        .iter()
        .map(|&b| BigInt::from(b))
        .chain(std::iter::once(BigInt::zero()))
        .collect();
    reduced
        .rows()
        .iter()
        .filter(|row| {
            let norm_sq = dot(row, row);
            norm_sq < scale_sq && !is_multiple_of(row, &e_bar, n)
        })
        .count()
}

fn is_multiple_of(row: &[BigInt], e_bar: &[BigInt], n: usize) -> bool {
    let Some(pivot) = (0..=n).find(|&i| !e_bar[i].is_zero()) else {
        return row.iter().all(|x| x.is_zero());
    };
    let (q, r) = num_integer::Integer::div_rem(&row[pivot], &e_bar[pivot]);
    if !r.is_zero() {
        return false;
    }
    row.iter().zip(e_bar).all(|(x, b)| x == &(&q * b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weights(xs: &[u64]) -> Vec<BigUint> {
        xs.iter().map(|&x| BigUint::from(x)).collect()
    }

    #[test]
    fn builds_spec_lattice() {
        let b = build_lo_lattice(
            &weights(&[3, 5]),
            &BigUint::from(8u32),
            &BigUint::from(4u32),
        );
        assert_eq!(
            b,
            IntBasis::from_i64(&[&[1, 0, 12], &[0, 1, 20], &[0, 0, 32]]).unwrap()
        );
    }

    #[test]
    fn planted_vector_is_short_combination() {
        // e = (1,1): row0 + row1 - row2 = (1,1,0)
        let b = build_lo_lattice(
            &weights(&[3, 5]),
            &BigUint::from(8u32),
            &BigUint::from(4u32),
        );
        let mut v = vec![BigInt::zero(); 3];
        for (k, x) in v.iter_mut().enumerate() {
            *x = &b.row(0)[k] + &b.row(1)[k] - &b.row(2)[k];
        }
        assert_eq!(v, vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)]);
        assert_eq!(dot(&v, &v), BigInt::from(2));
    }

    #[test]
    fn auto_scale_example() {
        // n = 3, gamma^2 = 2: ceil(3 * 2^{3/2}) = 9
        let params = ReductionParams::from_u64((3, 4), (1, 2)).unwrap();
        assert_eq!(auto_scale(3, &params), BigUint::from(9u32));
    }

    #[test]
    fn solves_small_instance() {
        let a = weights(&[3, 5, 7]);
        let e = solve_classic(&a, &BigInt::from(8), &LoConfig::default())
            .unwrap()
            .expect("solution exists");
        assert_eq!(e, vec![1, 1, 0]);
    }

    #[test]
    fn zero_and_full_targets_short_circuit() {
        let a = weights(&[3, 5, 7]);
        let cfg = LoConfig::default();
        let out = solve_classic_detailed(&a, &BigInt::zero(), &cfg).unwrap();
        assert_eq!(out.solution, Some(vec![0, 0, 0]));
        assert!(out.reduced.is_none());

        let out = solve_classic_detailed(&a, &BigInt::from(15), &cfg).unwrap();
        assert_eq!(out.solution, Some(vec![1, 1, 1]));
        assert!(out.reduced.is_none());
    }

    #[test]
    fn infeasible_target_returns_none() {
        let a = weights(&[3, 5, 7]);
        assert_eq!(
            solve_classic(&a, &BigInt::from(4), &LoConfig::default()).unwrap(),
            None
        );
        assert_eq!(
            solve_classic(&a, &BigInt::from(-2), &LoConfig::default()).unwrap(),
            None
        );
        assert_eq!(
            solve_classic(&a, &BigInt::from(99), &LoConfig::default()).unwrap(),
            None
        );
    }

    #[test]
    fn heavy_solutions_found_via_complement() {
        // unique solution {5,7,11} has weight 3 > n/2
        let a = weights(&[3, 5, 7, 11]);
        let e = solve_classic(&a, &BigInt::from(23), &LoConfig::default())
            .unwrap()
            .expect("solution exists");
        assert_eq!(weighted_sum(&a, &e), BigInt::from(23));
    }

    #[test]
    fn rejects_zero_weight() {
        let a = weights(&[3, 0, 7]);
        assert!(solve_classic(&a, &BigInt::from(3), &LoConfig::default()).is_err());
    }

    #[test]
    fn spurious_count_ignores_planted_multiples() {
        let rows = IntBasis::from_i64(&[
            &[1, 1, 0],   // planted itself
            &[-2, -2, 0], // multiple of planted
            &[1, 0, 0],   // short spurious row
            &[0, 0, 50],  // long row
        ])
        .unwrap();
        let count = count_spurious(&rows, &[1, 1], &BigUint::from(10u32));
        assert_eq!(count, 1);
    }
}
