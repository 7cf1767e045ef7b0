//! Small exact-arithmetic helpers shared across modules.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::One;

/// Nearest integer to `n / d` for `d > 0`, ties to the even integer.
pub fn div_round_half_even(n: &BigInt, d: &BigInt) -> BigInt {
    debug_assert!(d > &BigInt::ZERO);
    let (q, r) = n.div_mod_floor(d);
    let twice = &r * 2;
    if &twice < d {
        q
    } else if &twice > d {
        q + 1
    } else if q.is_even() {
        q
    } else {
        q + 1
    }
}

/// Nearest integer to a rational, ties to even.
pub fn round_half_even(x: &BigRational) -> BigInt {
    div_round_half_even(x.numer(), x.denom())
}

/// `base^exp` by binary exponentiation.
pub fn rat_pow(base: &BigRational, exp: u64) -> BigRational {
    let mut acc = BigRational::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc *= &sq;
        }
        e >>= 1;
        if e > 0 {
            sq = &sq * &sq;
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rounding_examples() {
        assert_eq!(round_half_even(&r(2, 5)), BigInt::from(0));
        assert_eq!(round_half_even(&r(3, 5)), BigInt::from(1));
        assert_eq!(round_half_even(&r(-3, 10)), BigInt::from(0));
        // ties go to even
        assert_eq!(round_half_even(&r(1, 2)), BigInt::from(0));
        assert_eq!(round_half_even(&r(3, 2)), BigInt::from(2));
        assert_eq!(round_half_even(&r(5, 2)), BigInt::from(2));
        assert_eq!(round_half_even(&r(-1, 2)), BigInt::from(0));
        assert_eq!(round_half_even(&r(-3, 2)), BigInt::from(-2));
    }

    #[test]
    fn pow_examples() {
        assert_eq!(rat_pow(&r(3, 2), 0), r(1, 1));
        assert_eq!(rat_pow(&r(3, 2), 3), r(27, 8));
    }
}
