//! Property tests for the algebraic invariants that hold on every input:
//! ring laws, Möbius round trips, series inverses, and HNF canonicality.

use std::sync::Arc;

use proptest::prelude::*;

use equicount::group::{abelian_group, all_subgroups, SubgroupLattice};
use equicount::rep::fixtures;
use equicount::ring::{diagonal, from_diagonal, ring_mul, IsotropyElement};
use equicount::sublattice::hnf_from_rows;
use equicount::taubes::{class_weight, GrStyle};

fn lattices() -> Vec<Arc<SubgroupLattice>> {
    let mut out: Vec<Arc<SubgroupLattice>> =
        [vec![2usize], vec![4], vec![2, 2], vec![6], vec![2, 4]]
            .iter()
            .map(|f| all_subgroups(&abelian_group(f).unwrap()).unwrap())
            .collect();
    out.push(all_subgroups(&fixtures::s3().0).unwrap());
    out.push(all_subgroups(&fixtures::q8().0).unwrap());
    out
}

fn element_on(lat: &Arc<SubgroupLattice>, coeffs: &[i64]) -> IsotropyElement {
    IsotropyElement::from_coeffs(
        lat.clone(),
        coeffs.iter().enumerate().map(|(i, &c)| (i % lat.len(), c)),
    )
}

proptest! {
    #[test]
    fn ring_mul_commutes_and_associates(
        which in 0usize..7,
        a in prop::collection::vec(-9i64..=9, 1..12),
        b in prop::collection::vec(-9i64..=9, 1..12),
        c in prop::collection::vec(-9i64..=9, 1..12),
    ) {
        let lat = &lattices()[which];
        let x = element_on(lat, &a);
        let y = element_on(lat, &b);
        let z = element_on(lat, &c);
        prop_assert_eq!(ring_mul(&x, &y).unwrap(), ring_mul(&y, &x).unwrap());
        let xy_z = ring_mul(&ring_mul(&x, &y).unwrap(), &z).unwrap();
        let x_yz = ring_mul(&x, &ring_mul(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(xy_z, x_yz);
        // The full group is the multiplicative identity.
        let one = IsotropyElement::one(lat.clone());
        prop_assert_eq!(ring_mul(&one, &x).unwrap(), x);
    }

    #[test]
    fn mobius_inversion_round_trips(
        which in 0usize..7,
        coeffs in prop::collection::vec(-20i64..=20, 1..16),
    ) {
        let lat = &lattices()[which];
        let x = element_on(lat, &coeffs);
        let diag: Vec<i64> = (0..lat.len()).map(|h| diagonal(&x, h)).collect();
        prop_assert_eq!(from_diagonal(lat.clone(), &diag), x);
    }

    #[test]
    fn diagonal_of_product_factors(
        which in 0usize..7,
        a in prop::collection::vec(-5i64..=5, 1..12),
        b in prop::collection::vec(-5i64..=5, 1..12),
    ) {
        let lat = &lattices()[which];
        let x = element_on(lat, &a);
        let y = element_on(lat, &b);
        let xy = ring_mul(&x, &y).unwrap();
        for h in 0..lat.len() {
            prop_assert_eq!(diagonal(&xy, h), diagonal(&x, h) * diagonal(&y, h));
        }
    }

    #[test]
    fn binomial_weights_at_opposite_exponents_invert(n in 1i64..=8, cap in 4u32..=10) {
        for m in 0..=cap {
            let mut conv = 0i128;
            for k in 0..=m {
                conv += class_weight(GrStyle::Binomial, n, k)
                    * class_weight(GrStyle::Binomial, -n, m - k);
            }
            prop_assert_eq!(conv, i128::from(m == 0));
        }
        // Geometric against binomial of the opposite sign is the same
        // series: (1-x)^(-n) = sum C(n+m-1, m) x^m.
        for m in 0..=cap {
            prop_assert_eq!(
                class_weight(GrStyle::Geometric, n, m),
                (0..m as i64).fold(1i128, |acc, i| acc * (n as i128 + i as i128) / (i as i128 + 1))
            );
        }
    }

    #[test]
    fn hnf_is_invariant_under_row_moves(
        a in -6i64..=6, b in -6i64..=6, c in -6i64..=6, d in -6i64..=6,
        k in -3i64..=3,
    ) {
        prop_assume!(a * d - b * c != 0);
        let base = hnf_from_rows(&[[a, b], [c, d]]);
        prop_assert!(base.is_some());
        let base = base.unwrap();
        // Swapping rows, negating a row, and adding a multiple of one row
        // to the other leave the lattice (hence the HNF) unchanged.
        prop_assert_eq!(hnf_from_rows(&[[c, d], [a, b]]).unwrap(), base);
        prop_assert_eq!(hnf_from_rows(&[[-a, -b], [c, d]]).unwrap(), base);
        prop_assert_eq!(
            hnf_from_rows(&[[a + k * c, b + k * d], [c, d]]).unwrap(),
            base
        );
        prop_assert_eq!(base.index(), (a * d - b * c).abs());
        // Membership matches the explicit generator test.
        prop_assert!(base.contains([a, b]) && base.contains([c, d]));
    }

    #[test]
    fn quotient_projection_kernel_is_the_sublattice(aa in 1i64..=4, bb in 0i64..=3, dd in 1i64..=4) {
        prop_assume!(bb < dd);
        let k = equicount::sublattice::Sublattice2 { a: aa, b: bb, d: dd };
        let q = equicount::sublattice::quotient_z2(&k);
        for x in -6..=6 {
            for y in -6..=6 {
                prop_assert_eq!(
                    q.project([x, y]) == q.group.identity(),
                    k.contains([x, y])
                );
            }
        }
    }
}
