//! Exact brute-force subset-sum deciders, used as ground truth.
//!
//! Two independent routes: depth-first enumeration for `n <= 20` and a
//! sorted-halves meet-in-the-middle for `n <= 40`. Both return the
//! lexicographically least witness, so their answers are comparable
//! bit for bit.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use latsum::Error;

use crate::error::{HarnessError, Result};

pub const MAX_ENUM_N: usize = 20;
pub const MAX_MITM_N: usize = 40;

/// Meet-in-the-middle feasibility with the lexicographically least
/// witness; the half tables cap memory at `2^(n/2)` entries.
pub fn brute_force_oracle(a: &[BigUint], target: &BigInt) -> Result<Option<Vec<u8>>> {
    let n = a.len();
    if n > MAX_MITM_N {
        return Err(HarnessError::Core(Error::CapacityExceeded {
            n,
            max: MAX_MITM_N,
        }));
    }
    let total = BigInt::from(a.iter().sum::<BigUint>());
    if target.is_negative() || target > &total {
        return Ok(None);
    }

    let half = n / 2;
    let (left, right) = a.split_at(half);

    // sums of the right half, keyed to their lex-least mask (bit 0 of the
    // mask is the first right element, matching lex order on e)
    let right_sums = half_sums(right);
    let mut best_right: HashMap<BigInt, u64> = HashMap::with_capacity(right_sums.len());
    for (mask, sum) in right_sums {
        best_right.entry(sum).or_insert(mask);
    }

    // walk left parts in lex order; the first completion is lex-least
    for (mask, sum) in half_sums(left) {
        let need = target - &sum;
        if need.is_negative() {
            continue;
        }
        if let Some(&rmask) = best_right.get(&need) {
            let mut e = vec![0u8; n];
            unpack_mask(mask, &mut e[..half]);
            unpack_mask(rmask, &mut e[half..]);
            return Ok(Some(e));
        }
    }
    Ok(None)
}

/// Depth-first enumeration in lexicographic order with suffix-sum pruning;
/// returns the lex-least witness. Cross-checks the meet-in-the-middle
/// route in tests.
pub fn enumerate_oracle(a: &[BigUint], target: &BigInt) -> Result<Option<Vec<u8>>> {
    let n = a.len();
    if n > MAX_ENUM_N {
        return Err(HarnessError::Core(Error::CapacityExceeded {
            n,
            max: MAX_ENUM_N,
        }));
    }
    if target.is_negative() {
        return Ok(None);
    }
    // suffix[i] = sum of a[i..]
    let mut suffix = vec![BigInt::zero(); n + 1];
    for i in (0..n).rev() {
        suffix[i] = &suffix[i + 1] + BigInt::from(a[i].clone());
    }
    let mut e = vec![0u8; n];
    if dfs(a, &suffix, target.clone(), 0, &mut e) {
        Ok(Some(e))
    } else {
        Ok(None)
    }
}

fn dfs(a: &[BigUint], suffix: &[BigInt], remaining: BigInt, i: usize, e: &mut Vec<u8>) -> bool {
    if remaining.is_zero() {
        for slot in e.iter_mut().skip(i) {
            *slot = 0;
        }
        return true;
    }
    if i == a.len() || remaining.is_negative() || remaining > suffix[i] {
        return false;
    }
    e[i] = 0;
    if dfs(a, suffix, remaining.clone(), i + 1, e) {
        return true;
    }
    e[i] = 1;
    if dfs(a, suffix, remaining - BigInt::from(a[i].clone()), i + 1, e) {
        return true;
    }
    e[i] = 0;
    false
}

/// Every achievable sum of `a` (for `a.len() <= 20`) mapped to its
/// lex-least indicator mask (bit `i` set means `e_{i+1} = 1`).
pub fn all_subset_sums(a: &[BigUint]) -> Result<HashMap<BigInt, u64>> {
    let n = a.len();
    if n > MAX_ENUM_N {
        return Err(HarnessError::Core(Error::CapacityExceeded {
            n,
            max: MAX_ENUM_N,
        }));
    }
    let mut out = HashMap::with_capacity(1usize << n);
    for (mask, sum) in half_sums(a) {
        out.entry(sum).or_insert(mask);
    }
    Ok(out)
}

pub fn unpack_mask(mask: u64, e: &mut [u8]) {
    for (i, slot) in e.iter_mut().enumerate() {
        *slot = (mask >> i & 1) as u8;
    }
}

/// All `(mask, sum)` pairs in lexicographic order of the indicator vector
/// `(e_1, ..., e_k)`, where bit `i` of the mask is `e_{i+1}`.
fn half_sums(a: &[BigUint]) -> Vec<(u64, BigInt)> {
    let k = a.len();
    let mut out = Vec::with_capacity(1usize << k);
    out.push((0u64, BigInt::zero()));
    // extend lex order one element at a time: e_j = 0 branch first
    for (j, w) in a.iter().enumerate() {
        let w = BigInt::from(w.clone());
        let mut with_j = Vec::with_capacity(out.len());
        for (mask, sum) in &out {
            with_j.push((mask | 1 << j, sum + &w));
        }
        let mut merged = Vec::with_capacity(out.len() * 2);
        for (zero, one) in out.into_iter().zip(with_j) {
            merged.push(zero);
            merged.push(one);
        }
        out = merged;
    }
    out
}
