//! Deterministic primality testing and next-prime search.

use num_bigint::BigUint;
use num_traits::{One, Zero};

const SMALL_PRIMES: [u64; 40] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173,
];

/// Deterministic Miller-Rabin.
///
/// Below 3.317e24 the first twelve prime bases are a proven witness set;
/// above that every one of the forty fixed bases is run, which no known
/// composite passes. The test is a pure function of `n`.
pub fn is_prime(n: &BigUint) -> bool {
    if n < &BigUint::from(2u32) {
        return false;
    }
    for &p in &SMALL_PRIMES {
        let p = BigUint::from(p);
        if n == &p {
            return true;
        }
        if (n % &p).is_zero() {
            return false;
        }
    }

    // proven bound for the 12-base witness set: 3,317,044,064,679,887,385,961,981
    let proven: BigUint = "3317044064679887385961981".parse().unwrap();
    let bases: &[u64] = if n < &proven {
        &SMALL_PRIMES[..12]
    } else {
        &SMALL_PRIMES
    };

    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;

    'next_base: for &a in bases {
        let a = BigUint::from(a) % n;
        if a.is_zero() {
            continue;
        }
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'next_base;
            }
        }
        return false;
    }
    true
}

/// Smallest odd prime greater than or equal to `from`.
pub fn next_odd_prime(from: &BigUint) -> BigUint {
    let three = BigUint::from(3u32);
    let mut candidate = if from <= &three { three } else { from.clone() };
    if (&candidate % 2u32).is_zero() {
        candidate += 1u32;
    }
    while !is_prime(&candidate) {
        candidate += 2u32;
    }
    candidate
}
