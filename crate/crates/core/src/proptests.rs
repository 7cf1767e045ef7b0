//! Property tests for the exact-arithmetic invariants.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use crate::basis::IntBasis;
use crate::gso::{gram_schmidt, lattice_volume};
use crate::hnf::lattice_eq;
use crate::matrix::{rational_rank, RatMatrix};
use crate::reduction::{
    apply_transform, certify_gso, chain_inequality_holds, is_unimodular, lll_reduce,
    ReductionParams,
};
use crate::residue::symmetric_residue;

fn small_basis(dim: usize) -> impl Strategy<Value = IntBasis> {
    prop::collection::vec(prop::collection::vec(-50i64..50, dim), dim).prop_filter_map(
        "independent rows",
        move |rows| {
            let refs: Vec<Vec<BigInt>> = rows
                .iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect();
            let b = IntBasis::new(refs).ok()?;
            (rational_rank(&b) == dim).then_some(b)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn symmetric_residue_is_canonical(a in -10_000i64..10_000, b in 2i64..1000) {
        let r = symmetric_residue(&BigInt::from(a), &BigInt::from(b)).unwrap();
        let back = symmetric_residue(&r, &BigInt::from(b)).unwrap();
        prop_assert_eq!(&r, &back);
        prop_assert_eq!((BigInt::from(a) - &r) % b, BigInt::zero());
    }

    #[test]
    fn gso_reconstructs_and_is_orthogonal(b in small_basis(4)) {
        let gso = gram_schmidt(&b).unwrap();
        for i in 0..4 {
            let rec = gso.reconstruct_row(i);
            for (k, x) in rec.iter().enumerate() {
                prop_assert_eq!(x, &BigRational::from_integer(b.row(i)[k].clone()));
            }
            for j in 0..i {
                let d = gso.star(i).iter().zip(gso.star(j))
                    .fold(BigRational::zero(), |acc, (x, y)| acc + x * y);
                prop_assert!(d.is_zero());
            }
        }
    }

    #[test]
    fn volume_squared_equals_det_squared(b in small_basis(4)) {
        let vol = lattice_volume(&gram_schmidt(&b).unwrap());
        let det = RatMatrix::from_basis(&b).determinant().unwrap();
        prop_assert_eq!(vol.sq(), &(&det * &det));
    }

    #[test]
    fn lll_preserves_lattice_and_volume(b in small_basis(4)) {
        let params = ReductionParams::default();
        let red = lll_reduce(&b, &params).unwrap();

        prop_assert!(is_unimodular(&red.transform));
        prop_assert_eq!(&apply_transform(&red.transform, &b).unwrap(), &red.basis);
        prop_assert!(lattice_eq(&b, &red.basis));

        let gso = gram_schmidt(&red.basis).unwrap();
        prop_assert!(certify_gso(&gso, &params).is_reduced());
        prop_assert!(chain_inequality_holds(&gso, &params));

        let vol_in = lattice_volume(&gram_schmidt(&b).unwrap());
        let vol_out = lattice_volume(&gso);
        prop_assert_eq!(vol_in.sq(), vol_out.sq());
    }

    #[test]
    fn solve_round_trips(entries in prop::collection::vec(-40i64..40, 9),
                         rhs in prop::collection::vec(-40i64..40, 3)) {
        let m = RatMatrix::new(3, 3,
            entries.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect()
        ).unwrap();
        let t: Vec<BigRational> =
            rhs.iter().map(|&x| BigRational::from_integer(BigInt::from(x))).collect();
        if let Ok(x) = m.solve(&t) {
            prop_assert_eq!(m.mul_vec(&x).unwrap(), t);
        }
    }
}
