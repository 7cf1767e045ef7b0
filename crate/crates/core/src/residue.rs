//! Symmetric residues and modular inverses over arbitrary-precision integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// Representative of `a` modulo `b` inside `{-ceil(b/2)+1, ..., floor(b/2)}`.
///
/// For odd `b` the range is symmetric around zero; for even `b` the value
/// `b/2` is kept positive.
pub fn symmetric_residue(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if b < &BigInt::from(2) {
        return Err(Error::InvalidModulus(b.clone()));
    }
    let mut r = a.mod_floor(b);
    if &r * 2 > *b {
        r -= b;
    }
    Ok(r)
}

/// Inverse of `a` modulo `m`, as a residue in `[0, m)`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Result<BigInt> {
    if m < &BigInt::from(2) {
        return Err(Error::InvalidModulus(m.clone()));
    }
    let a = a.mod_floor(m);
    let ext = a.extended_gcd(m);
    if !ext.gcd.is_one() {
        return Err(Error::Precondition(format!(
            "no inverse: gcd({a}, {m}) = {}",
            ext.gcd
        )));
    }
    Ok(ext.x.mod_floor(m))
}

/// True when `x` lies in the symmetric coordinate box `{-floor(p/2), ..., floor(p/2)}`.
pub fn in_symmetric_box(x: &BigInt, p: &BigInt) -> bool {
    // |x| <= floor(p/2)  <=>  2|x| <= p for odd p; even p handled the same
    // way since 2*floor(p/2) = p.
    &x.abs() * 2 <= *p
}
