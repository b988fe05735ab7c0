//! Acceptance suite: one test per exit criterion, each printing a PASS
//! line with its runtime. Every comparison is exact integer or rational
//! equality; the stated time budgets are asserted.

use std::sync::Arc;
use std::time::{Duration, Instant};

use equicount::cyclotomic::rat;
use equicount::group::{
    abelian_group, abelian_group_bounded, all_subgroups, all_subgroups_bounded, FiniteGroup,
    Subgroup, SubgroupLattice,
};
use equicount::index::{chevalley_weil_free_inputs, index_class, index_free_smooth, invariant_dim};
use equicount::oracle::{verify_sigma, ReferenceMap, VerifyCase, WeightAction, C64};
use equicount::rep::{fixtures, CharacterTable};
use equicount::ring::{diagonal, from_diagonal, inner, ring_mul, IsotropyElement};
use equicount::sigma::{sigma_rho, torus_sign_kernels, torus_table, GroupContext, TorusCase};
use equicount::sublattice::{sublattices_of_index, Sublattice2};
use equicount::taubes::{
    class_weight, torus_weight_series, torus_weights_from_contributions, GrStyle,
};

fn pass(n: usize, label: &str, started: Instant, budget: Duration) {
    let elapsed = started.elapsed();
    println!("acceptance criterion {n} ({label}): PASS in {elapsed:?}");
    assert!(
        elapsed <= budget,
        "criterion {n} exceeded its {budget:?} budget: {elapsed:?}"
    );
}

/// All abelian groups of order at most `max`, one per nondecreasing cyclic
/// factorization (isomorphism duplicates are harmless).
fn abelian_types_up_to(max: usize) -> Vec<Vec<usize>> {
    fn factorizations(n: usize, min: usize) -> Vec<Vec<usize>> {
        let mut out = vec![];
        if n == 1 {
            out.push(vec![]);
            return out;
        }
        for d in min..=n {
            if n % d == 0 {
                for mut rest in factorizations(n / d, d) {
                    rest.insert(0, d);
                    out.push(rest);
                }
            }
        }
        out
    }
    let mut out = vec![vec![1]];
    for n in 2..=max {
        out.extend(factorizations(n, 2));
    }
    out
}

fn xorshift(state: &mut u64) -> u64 {
    *state ^= *state << 13;
    *state ^= *state >> 7;
    *state ^= *state << 17;
    *state
}

fn random_element(lat: &Arc<SubgroupLattice>, state: &mut u64) -> IsotropyElement {
    let n = lat.len();
    IsotropyElement::from_coeffs(
        lat.clone(),
        (0..n).map(|i| (i, (xorshift(state) % 15) as i64 - 7)),
    )
}

fn fixture_lattices() -> Vec<Arc<SubgroupLattice>> {
    let mut groups: Vec<FiniteGroup> = [
        vec![2usize],
        vec![4],
        vec![2, 2],
        vec![6],
        vec![8],
        vec![12],
        vec![2, 2, 2],
        vec![24],
    ]
    .iter()
    .map(|f| abelian_group(f).unwrap())
    .collect();
    groups.push(fixtures::s3().0);
    groups.push(fixtures::d4().0);
    groups.push(fixtures::q8().0);
    groups.iter().map(|g| all_subgroups(g).unwrap()).collect()
}

#[test]
fn criterion_1_torus_table() {
    let started = Instant::now();
    let kernels = torus_sign_kernels();
    let k12 = Sublattice2 { a: 2, b: 0, d: 2 };
    let full = Sublattice2 { a: 1, b: 0, d: 1 };
    for case in TorusCase::all() {
        let table = torus_table(&case, 8).unwrap();
        // Every sublattice of index <= 8 appears exactly once.
        let expected_len: usize = (1..=8).map(|n| sublattices_of_index(n).len()).sum();
        assert_eq!(table.len(), expected_len);
        for (k, c) in &table {
            let expected: i64 = if *k == full {
                case.sigma_rho0 as i64
            } else if let Some(i) = kernels.iter().position(|ki| ki == k) {
                if case.flags[i] {
                    0
                } else {
                    -(case.sigma_rho0 as i64)
                }
            } else if *k == k12 {
                let isotopic = case.flags.iter().filter(|&&f| f).count();
                if isotopic >= 2 {
                    0
                } else {
                    case.sigma_rho0 as i64
                }
            } else {
                0
            };
            assert!(c.asserted_integer, "case {case:?} at {k:?}");
            assert_eq!(c.value, rat(expected as i128, 1), "case {case:?} at {k:?}");
        }
    }
    pass(
        1,
        "torus table reproduces the cover bullets",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_2_sigma_squares_to_one() {
    let started = Instant::now();
    let mut contexts: Vec<GroupContext> = abelian_types_up_to(24)
        .iter()
        .map(|f| GroupContext::for_abelian(abelian_group(f).unwrap(), 64).unwrap())
        .collect();
    for (_, table) in [fixtures::s3(), fixtures::d4(), fixtures::q8()] {
        contexts.push(GroupContext::new(table, 64).unwrap());
    }
    let mut checked = 0usize;
    for ctx in &contexts {
        let one = IsotropyElement::one(ctx.lattice.clone());
        for rho in &ctx.irreps {
            for flag in [false, true] {
                let s = sigma_rho(rho, flag, &ctx.lattice).unwrap();
                assert_eq!(ring_mul(&s, &s).unwrap(), one);
                checked += 1;
            }
        }
    }
    assert!(
        checked > 100,
        "expected a substantive sweep, checked {checked}"
    );
    pass(
        2,
        "sigma squares to the identity",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_3_diagonal_multiplicativity() {
    let started = Instant::now();
    let mut state = 0x5eed_0003u64;
    for lat in fixture_lattices() {
        for _ in 0..1000 {
            let x = random_element(&lat, &mut state);
            let y = random_element(&lat, &mut state);
            let xy = ring_mul(&x, &y).unwrap();
            for h in 0..lat.len() {
                assert_eq!(diagonal(&xy, h), diagonal(&x, h) * diagonal(&y, h));
            }
        }
    }
    pass(
        3,
        "diagonal evaluation is multiplicative",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_4_mobius_round_trip() {
    let started = Instant::now();
    let mut state = 0x5eed_0004u64;
    for lat in fixture_lattices() {
        for _ in 0..1000 {
            let x = random_element(&lat, &mut state);
            let diag: Vec<i64> = (0..lat.len()).map(|h| diagonal(&x, h)).collect();
            assert_eq!(from_diagonal(lat.clone(), &diag), x);
        }
        // And the reverse composition on arbitrary prescribed diagonals.
        for _ in 0..50 {
            let vals: Vec<i64> = (0..lat.len())
                .map(|_| (xorshift(&mut state) % 15) as i64 - 7)
                .collect();
            let x = from_diagonal(lat.clone(), &vals);
            for h in 0..lat.len() {
                assert_eq!(diagonal(&x, h), vals[h]);
            }
        }
    }
    pass(
        4,
        "Möbius inversion round-trips",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_5_sublattice_census() {
    let started = Instant::now();
    for n in 1..=12i64 {
        let hnf = sublattices_of_index(n);
        let sigma1: i64 = (1..=n).filter(|d| n % d == 0).sum();
        assert_eq!(hnf.len() as i64, sigma1, "sigma_1({n})");
        // Independent brute force: index-n sublattices contain n*Z^2, so
        // they correspond to order-n subgroups of (Z/n)^2, enumerated by
        // generic subgroup closure.
        let grid = abelian_group_bounded(&[n as usize, n as usize], 600).unwrap();
        let lat = all_subgroups_bounded(&grid, 600).unwrap();
        let brute: Vec<&Subgroup> = lat
            .subgroups()
            .iter()
            .filter(|s| s.order() == n as usize)
            .collect();
        assert_eq!(brute.len(), hnf.len(), "brute-force census at index {n}");
        // The two enumerations agree as subgroups: reduce each HNF lattice
        // into (Z/n)^2 and find it among the brute subgroups.
        for k in &hnf {
            let gens = [
                ((k.a.rem_euclid(n)) * n + k.b.rem_euclid(n)) as u16,
                (k.d.rem_euclid(n)) as u16,
            ];
            let image = equicount::group::generated_subgroup(&grid, &gens);
            assert!(
                brute.iter().any(|s| **s == image),
                "HNF sublattice {k:?} missing from brute enumeration"
            );
        }
    }
    // The paper's three index-2 kernels are exactly the index-2 output.
    let two = sublattices_of_index(2);
    for (rows, expect) in [
        ([[2i64, 0], [0, 1]], Sublattice2 { a: 2, b: 0, d: 1 }),
        ([[1, 0], [0, 2]], Sublattice2 { a: 1, b: 0, d: 2 }),
        ([[1, 1], [1, -1]], Sublattice2 { a: 1, b: 1, d: 2 }),
    ] {
        let k = equicount::sublattice::hnf_from_rows(&rows).unwrap();
        assert_eq!(k, expect);
        assert!(two.contains(&k));
    }
    assert_eq!(two.len(), 3);
    pass(
        5,
        "sublattice census equals sigma_1",
        started,
        Duration::from_secs(10),
    );
}

#[test]
fn criterion_6_index_consistency() {
    let started = Instant::now();
    let trivial = CharacterTable::for_abelian(abelian_group(&[1]).unwrap()).unwrap();
    for g in 1..=4 {
        for n in 1..=4 {
            for c1 in -3..=3 {
                let idx = index_free_smooth(g, n, c1, &trivial).unwrap();
                assert_eq!(
                    invariant_dim(&idx, &trivial).unwrap(),
                    2 * (c1 + (n - 3) * (1 - g)),
                    "g={g} n={n} c1={c1}"
                );
            }
        }
    }
    for factors in abelian_types_up_to(12) {
        let table = CharacterTable::for_abelian(abelian_group(&factors).unwrap()).unwrap();
        for g in [2, 3] {
            for n in [1, 2, 3] {
                for c1 in -2..=2 {
                    let shortcut = index_free_smooth(g, n, c1, &table).unwrap();
                    let inputs = chevalley_weil_free_inputs(g, n, c1, &table).unwrap();
                    let full = index_class(&inputs, &table).unwrap();
                    assert_eq!(shortcut, full, "G={factors:?} g={g} n={n} c1={c1}");
                }
            }
        }
    }
    pass(
        6,
        "index formula consistency",
        started,
        Duration::from_secs(5),
    );
}

#[test]
fn criterion_7_taubes_weights() {
    let started = Instant::now();
    // n copies of a -1 curve count (-1)^n; a +1 curve counts 0 beyond 2 copies.
    for m in 0..=6u32 {
        assert_eq!(
            class_weight(GrStyle::Binomial, -1, m),
            if m % 2 == 0 { 1 } else { -1 }
        );
        assert_eq!(
            class_weight(GrStyle::Binomial, 1, m),
            match m {
                0 | 1 => 1,
                _ => 0,
            }
        );
        // Taubes' choice P(z) = (1-z)^(-1) weights every copy count 1.
        assert_eq!(class_weight(GrStyle::Geometric, 1, m), 1);
    }
    // Cross-module: the torus table for (sigma_rho0 = -1, all flags false)
    // yields the weight triple (-1, +1, -1).
    let case = TorusCase::new(-1, [false, false, false]);
    let table = torus_table(&case, 4).unwrap();
    assert_eq!(torus_weights_from_contributions(&table), Some((-1, 1, -1)));
    // And that triple's series agree between the two conventions' oracles.
    assert_eq!(
        torus_weight_series(-1, 1, -1, GrStyle::Binomial, 4),
        vec![1, -1, 2, -2, 1]
    );
    assert_eq!(
        torus_weight_series(1, 0, 0, GrStyle::Geometric, 6),
        vec![1; 7]
    );
    pass(
        7,
        "Taubes weight conventions",
        started,
        Duration::from_secs(1),
    );
}

#[test]
fn criterion_8_oracle_agreement() {
    let started = Instant::now();
    let min_box = 1.0 / (1u64 << 30) as f64;
    let seeds = vec![1u64, 2, 3];

    // (i) m = 1, complex scalar: sigma_hat = 1.
    let case = VerifyCase {
        action: WeightAction::new(1, 0, 0),
        reference: ReferenceMap::ComplexScalar(C64::new(1.0, 0.0)),
        max_degree: 3,
        cutoff: 1.0,
        outer: 2.0,
        min_box,
        quadrature_points: 8,
        seeds: seeds.clone(),
    };
    let out = verify_sigma(&case).unwrap();
    let lat = out.reports[0].lattice.clone();
    assert_eq!(out.sigma_predicted, IsotropyElement::one(lat));
    for r in &out.reports {
        assert_eq!(r.residual_winding, 0);
    }

    // (ii) m = 2 sign action, conjugation: sigma_hat = G - 2{1}.
    let case = VerifyCase {
        action: WeightAction::new(2, 1, 1),
        reference: ReferenceMap::Conjugation,
        max_degree: 4,
        cutoff: 1.0,
        outer: 2.0,
        min_box,
        quadrature_points: 8,
        seeds: seeds.clone(),
    };
    let out = verify_sigma(&case).unwrap();
    let lat = out.reports[0].lattice.clone();
    let expect = IsotropyElement::from_coeffs(
        lat.clone(),
        [(lat.full_index(), 1), (lat.trivial_index(), -2)],
    );
    assert_eq!(out.sigma_predicted, expect);
    for r in &out.reports {
        assert_eq!(r.sigma_hat, expect);
        assert_eq!(r.residual_winding, 0);
    }

    // (iii) m = 4 weights (2,2), conjugation: sigma_hat = Z/4 - 2{0,2}.
    let case = VerifyCase {
        action: WeightAction::new(4, 2, 2),
        reference: ReferenceMap::Conjugation,
        max_degree: 4,
        cutoff: 1.0,
        outer: 2.0,
        min_box,
        quadrature_points: 8,
        seeds,
    };
    let out = verify_sigma(&case).unwrap();
    let lat = out.reports[0].lattice.clone();
    let mid = (0..lat.len())
        .find(|&i| lat.subgroup(i).order() == 2)
        .unwrap();
    let expect = IsotropyElement::from_coeffs(lat.clone(), [(lat.full_index(), 1), (mid, -2)]);
    assert_eq!(out.sigma_predicted, expect);
    for r in &out.reports {
        assert_eq!(r.sigma_hat, expect);
        assert_eq!(r.residual_winding, 0);
        // Everything off the origin carries the kernel {0,2} as isotropy.
        for z in &r.zeros {
            let iso = lat.subgroup(z.isotropy_index).order();
            assert!(iso == 2 || iso == 4);
        }
    }

    pass(
        8,
        "oracle zero counts match sigma",
        started,
        Duration::from_secs(60),
    );
}

/// Inner-product and containment sanity used by the criteria above; kept
/// here so a failure names the acceptance context directly.
#[test]
fn acceptance_support_inner_product_basis() {
    let lat = all_subgroups(&abelian_group(&[2, 2]).unwrap()).unwrap();
    for i in 0..lat.len() {
        for j in 0..lat.len() {
            let a = IsotropyElement::basis(lat.clone(), i);
            let b = IsotropyElement::basis(lat.clone(), j);
            assert_eq!(inner(&a, &b).unwrap(), if i == j { 1 } else { 0 });
        }
    }
}
