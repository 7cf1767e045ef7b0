//! Hermite normal form over the integers.
//!
//! The HNF is the canonical representative of a row lattice, so two
//! generating sets span the same lattice exactly when their forms match.
//! This is a test and verification utility, not part of the solver path.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use crate::basis::IntBasis;

/// Canonical Hermite normal form of the row lattice, zero rows dropped.
///
/// Pivots are positive, entries above each pivot are reduced into
/// `[0, pivot)`, and pivot columns strictly increase row by row.
pub fn hermite_normal_form(basis: &IntBasis) -> Vec<Vec<BigInt>> {
    let mut w: Vec<Vec<BigInt>> = basis.rows().to_vec();
    let m = w.len();
    let n = basis.ambient_dim();
    let mut pr = 0; // next pivot row

    for col in 0..n {
        if pr == m {
            break;
        }
        // Euclidean elimination below the pivot row.
        loop {
            let imin = (pr..m)
                .filter(|&i| !w[i][col].is_zero())
                .min_by(|&a, &b| w[a][col].abs().cmp(&w[b][col].abs()).then(a.cmp(&b)));
            let Some(imin) = imin else { break };
            w.swap(pr, imin);
            let mut all_clear = true;
            for i in pr + 1..m {
                if w[i][col].is_zero() {
                    continue;
                }
                let q = w[i][col].div_floor(&w[pr][col]);
                sub_scaled_row(&mut w, i, pr, &q);
                if !w[i][col].is_zero() {
                    all_clear = false;
                }
            }
            if all_clear {
                break;
            }
        }
        if w[pr][col].is_zero() {
            continue; // no pivot in this column
        }
        if w[pr][col].is_negative() {
            for x in &mut w[pr] {
                *x = -x.clone();
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..pr {
            let q = w[i][col].div_floor(&w[pr][col]);
            sub_scaled_row(&mut w, i, pr, &q);
        }
        pr += 1;
    }

    w.truncate(pr);
    w
}

/// `row dst -= q * row src`, a unimodular operation for any integer `q`.
fn sub_scaled_row(w: &mut [Vec<BigInt>], dst: usize, src: usize, q: &BigInt) {
    if q.is_zero() || dst == src {
        return;
    }
    let (lo, hi) = if dst < src {
        let (a, b) = w.split_at_mut(src);
        (&mut a[dst], &b[0])
    } else {
        let (a, b) = w.split_at_mut(dst);
        (&mut b[0], &a[src])
    };
    for (d, s) in lo.iter_mut().zip(hi) {
        *d -= q * s;
    }
}

/// Do two generating sets span the same lattice?
pub fn lattice_eq(a: &IntBasis, b: &IntBasis) -> bool {
    a.ambient_dim() == b.ambient_dim() && hermite_normal_form(a) == hermite_normal_form(b)
}
