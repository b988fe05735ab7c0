//! The equivariant K-theory index class of the complex-linearized operator:
//! the general curve formula, its free smooth-cover specialization, and the
//! invariant-part dimension used as a consistency check.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::cyclotomic::{rat, Cyc};
use crate::group::Subgroup;
use crate::rep::CharacterTable;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum IndexError {
    #[error("K-class is over a table with {got} irreducibles, expected {expected}")]
    GroupMismatch { got: usize, expected: usize },
    #[error("free smooth cover formula needs genus >= 1, got {got}")]
    InvalidGenus { got: i64 },
    #[error("class function does not decompose integrally over the character table")]
    NotACharacter,
}

/// A formal integer combination of complex irreducible characters: an
/// element of the representation ring, indexed against a character table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KClass {
    n_chars: usize,
    coeffs: BTreeMap<usize, i64>,
}

impl KClass {
    pub fn zero(table: &CharacterTable) -> KClass {
        KClass {
            n_chars: table.len(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_coeffs(
        table: &CharacterTable,
        coeffs: impl IntoIterator<Item = (usize, i64)>,
    ) -> KClass {
        let mut map = BTreeMap::new();
        for (i, c) in coeffs {
            assert!(i < table.len(), "irreducible index out of range");
            if c != 0 {
                *map.entry(i).or_insert(0) += c;
            }
        }
        map.retain(|_, c| *c != 0);
        KClass {
            n_chars: table.len(),
            coeffs: map,
        }
    }

    /// The trivial one-dimensional class.
    pub fn one(table: &CharacterTable) -> KClass {
        KClass::from_coeffs(table, [(table.trivial_index(), 1)])
    }

    /// The regular representation class: each irreducible with coefficient
    /// equal to its degree.
    pub fn regular(table: &CharacterTable) -> KClass {
        KClass::from_coeffs(
            table,
            (0..table.len()).map(|i| (i, table.chars()[i].degree(table.group()))),
        )
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> i64 {
        self.coeffs.get(&i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check(&self, table: &CharacterTable) -> Result<(), IndexError> {
        if self.n_chars != table.len() {
            return Err(IndexError::GroupMismatch {
                got: self.n_chars,
                expected: table.len(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &KClass) -> KClass {
        assert_eq!(self.n_chars, other.n_chars);
        let mut coeffs = self.coeffs.clone();
        for (&i, &c) in &other.coeffs {
            *coeffs.entry(i).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        KClass {
            n_chars: self.n_chars,
            coeffs,
        }
    }

    pub fn scale(&self, k: i64) -> KClass {
        if k == 0 {
            return KClass {
                n_chars: self.n_chars,
                coeffs: BTreeMap::new(),
            };
        }
        KClass {
            n_chars: self.n_chars,
            coeffs: self.coeffs.iter().map(|(&i, &c)| (i, k * c)).collect(),
        }
    }

    pub fn sub(&self, other: &KClass) -> KClass {
        self.add(&other.scale(-1))
    }

    /// Dual class: conjugate every constituent character.
    pub fn dual(&self, table: &CharacterTable) -> Result<KClass, IndexError> {
        self.check(table)?;
        let mut coeffs = BTreeMap::new();
        for (&i, &c) in &self.coeffs {
            *coeffs.entry(table.conj_index(i)).or_insert(0) += c;
        }
        coeffs.retain(|_, c: &mut i64| *c != 0);
        Ok(KClass {
            n_chars: self.n_chars,
            coeffs,
        })
    }

    /// Complex dimension: coefficient-weighted sum of degrees.
    pub fn dim(&self, table: &CharacterTable) -> i64 {
        self.coeffs
            .iter()
            .map(|(&i, &c)| c * table.chars()[i].degree(table.group()))
            .sum()
    }
}

/// The permutation class C[G/I] of the coset action, decomposed into
/// irreducibles. The value of its character at g is the number of cosets
/// fixed by g.
pub fn coset_permutation_class(
    table: &CharacterTable,
    stabilizer: &Subgroup,
) -> Result<KClass, IndexError> {
    let g = table.group();
    // Left cosets of the stabilizer.
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps: Vec<u16> = Vec::new();
    for a in g.elements() {
        if coset_of[a as usize] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(a);
        for &h in stabilizer.elements() {
            coset_of[g.mul(a, h) as usize] = idx;
        }
    }
    let values: Vec<Cyc> = g
        .elements()
        .map(|x| {
            let fixed = reps
                .iter()
                .enumerate()
                .filter(|&(i, &a)| coset_of[g.mul(x, a) as usize] == i)
                .count();
            Cyc::from_rat(1, rat(fixed as i128, 1))
        })
        .collect();
    let mut coeffs = BTreeMap::new();
    for i in 0..table.len() {
        let m = table
            .multiplicity_in(&values, i)
            .ok_or(IndexError::NotACharacter)?;
        if m != 0 {
            coeffs.insert(i, m);
        }
    }
    let k = KClass {
        n_chars: table.len(),
        coeffs,
    };
    debug_assert_eq!(k.dim(table) as usize, g.order() / stabilizer.order());
    Ok(k)
}

/// One orbit of components of the domain: its pointwise stabilizer and the
/// (integer) normalized first-Chern integral over it.
#[derive(Clone, Debug)]
pub struct OrbitData {
    pub stabilizer: Subgroup,
    pub c1_integral: i64,
}

/// Inputs to the index formula for one curve: the cohomology classes of
/// the domain as representation classes, the target half-dimension, and
/// the component-orbit data.
#[derive(Clone, Debug)]
pub struct CurveData {
    pub h0_tstar_ck: KClass,
    pub h0_tc: KClass,
    pub h0_k: KClass,
    pub n: i64,
    pub orbits: Vec<OrbitData>,
}

/// The index class
/// H0(T*C (x) K)* - H0(TC) + n(1 - H0(K)*) + sum_i c1_i C[G/I_i].
pub fn index_class(d: &CurveData, table: &CharacterTable) -> Result<KClass, IndexError> {
    d.h0_tstar_ck.check(table)?;
    d.h0_tc.check(table)?;
    d.h0_k.check(table)?;
    let mut acc = d.h0_tstar_ck.dual(table)?;
    acc = acc.sub(&d.h0_tc);
    let one = KClass::one(table);
    acc = acc.add(&one.sub(&d.h0_k.dual(table)?).scale(d.n));
    for orbit in &d.orbits {
        let perm = coset_permutation_class(table, &orbit.stabilizer)?;
        acc = acc.add(&perm.scale(orbit.c1_integral));
    }
    Ok(acc)
}

/// Free smooth-cover specialization: ((3-n)(g-1) + c1) copies of the
/// regular representation, with g the genus of the quotient curve.
pub fn index_free_smooth(
    genus: i64,
    n: i64,
    c1: i64,
    table: &CharacterTable,
) -> Result<KClass, IndexError> {
    if genus < 1 {
        return Err(IndexError::InvalidGenus { got: genus });
    }
    let scalar = (3 - n) * (genus - 1) + c1;
    Ok(KClass::regular(table).scale(scalar))
}

/// Real dimension of the invariant part: twice the multiplicity of the
/// trivial character.
pub fn invariant_dim(k: &KClass, table: &CharacterTable) -> Result<i64, IndexError> {
    k.check(table)?;
    Ok(2 * k.coeff(table.trivial_index()))
}

/// Invariant dimension for a curve in a family of targets: the base of the
/// family enters only as an additive real-dimension summand.
pub fn invariant_dim_over_base(
    k: &KClass,
    table: &CharacterTable,
    base_dim: i64,
) -> Result<i64, IndexError> {
    Ok(invariant_dim(k, table)? + base_dim)
}

/// The H0 classes of the free smooth cover per Chevalley-Weil:
/// `H0(K) = 1 + C[G]^(g-1)` and `H0(T*C (x) K) = C[G]^(3(g-1))`, with
/// `H0(TC) = 0` for genus at least 2.
pub fn chevalley_weil_free_inputs(
    genus: i64,
    n: i64,
    c1: i64,
    table: &CharacterTable,
) -> Result<CurveData, IndexError> {
    if genus < 2 {
        return Err(IndexError::InvalidGenus { got: genus });
    }
    let reg = KClass::regular(table);
    let trivial_stab =
        Subgroup::new(table.group(), &[table.group().identity()]).expect("trivial subgroup");
    Ok(CurveData {
        h0_tstar_ck: reg.scale(3 * (genus - 1)),
        h0_tc: KClass::zero(table),
        h0_k: KClass::one(table).add(&reg.scale(genus - 1)),
        n,
        orbits: vec![OrbitData {
            stabilizer: trivial_stab,
            c1_integral: c1,
        }],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::abelian_group;
    use crate::rep::fixtures;

    fn table(factors: &[usize]) -> CharacterTable {
        CharacterTable::for_abelian(abelian_group(factors).unwrap()).unwrap()
    }

    #[test]
    fn genus_zero_rigid_sphere_example() {
        // Trivial group, h0_TstarCK = 0, h0_TC = 3*1, h0_K = 1, n = 3:
        // index = (k - 3) * 1 for c1 = k.
        let t = table(&[1]);
        for k in -2..=5 {
            let d = CurveData {
                h0_tstar_ck: KClass::zero(&t),
                h0_tc: KClass::one(&t).scale(3),
                h0_k: KClass::one(&t),
                n: 3,
                orbits: vec![OrbitData {
                    stabilizer: Subgroup::new(t.group(), &[0]).unwrap(),
                    c1_integral: k,
                }],
            };
            let idx = index_class(&d, &t).unwrap();
            assert_eq!(idx, KClass::one(&t).scale(k - 3));
            assert_eq!(invariant_dim(&idx, &t).unwrap(), 2 * (k - 3));
        }
    }

    #[test]
    fn free_smooth_examples() {
        // Trivial G, g=1, n=3, c1=0: the rigid torus has index 0.
        let t = table(&[1]);
        assert!(index_free_smooth(1, 3, 0, &t).unwrap().is_zero());
        // G = Z/2 covers of the rigid torus keep index 0, as does g=2 with
        // n=3 where the genus term vanishes.
        let t2 = table(&[2]);
        assert!(index_free_smooth(1, 3, 0, &t2).unwrap().is_zero());
        assert!(index_free_smooth(2, 3, 0, &t2).unwrap().is_zero());
        // G = Z/2, g=1, n=2, c1=1: one copy of the regular rep.
        let idx = index_free_smooth(1, 2, 1, &t2).unwrap();
        assert_eq!(idx, KClass::regular(&t2));
        assert_eq!(idx.coeffs().len(), 2);
        assert_eq!(invariant_dim(&idx, &t2).unwrap(), 2);
        // Degenerate target n=0 leaves h0 terms only.
        let d = CurveData {
            h0_tstar_ck: KClass::regular(&t2),
            h0_tc: KClass::one(&t2),
            h0_k: KClass::regular(&t2).scale(7),
            n: 0,
            orbits: vec![],
        };
        let idx = index_class(&d, &t2).unwrap();
        assert_eq!(idx, KClass::regular(&t2).sub(&KClass::one(&t2)));
        // Genus 0 is rejected by the free smooth shortcut.
        assert_eq!(
            index_free_smooth(0, 3, 0, &t),
            Err(IndexError::InvalidGenus { got: 0 })
        );
    }

    #[test]
    fn classical_virtual_dimension_for_trivial_group() {
        let t = table(&[1]);
        for g in 1..=4 {
            for n in 1..=4 {
                for c1 in -3..=3 {
                    let idx = index_free_smooth(g, n, c1, &t).unwrap();
                    assert_eq!(
                        invariant_dim(&idx, &t).unwrap(),
                        2 * (c1 + (n - 3) * (1 - g))
                    );
                }
            }
        }
    }

    #[test]
    fn free_smooth_agrees_with_chevalley_weil_inputs() {
        for factors in [
            vec![2],
            vec![3],
            vec![4],
            vec![2, 2],
            vec![6],
            vec![2, 4],
            vec![12],
        ] {
            let t = table(&factors);
            for g in [2, 3] {
                for n in [1, 2, 3] {
                    for c1 in -2..=2 {
                        let shortcut = index_free_smooth(g, n, c1, &t).unwrap();
                        let d = chevalley_weil_free_inputs(g, n, c1, &t).unwrap();
                        let full = index_class(&d, &t).unwrap();
                        assert_eq!(shortcut, full, "G={factors:?} g={g} n={n} c1={c1}");
                    }
                }
            }
        }
    }

    #[test]
    fn permutation_class_degree_is_the_coset_count() {
        let (g, t) = fixtures::s3();
        let lat = crate::group::all_subgroups(&g).unwrap();
        for s in lat.subgroups() {
            let k = coset_permutation_class(&t, s).unwrap();
            assert_eq!(k.dim(&t) as usize, g.order() / s.order());
        }
        // Regular = cosets of the trivial subgroup.
        let trivial = lat.subgroup(lat.trivial_index());
        assert_eq!(
            coset_permutation_class(&t, trivial).unwrap(),
            KClass::regular(&t)
        );
        // Full group: the trivial class.
        let full = lat.subgroup(lat.full_index());
        assert_eq!(coset_permutation_class(&t, full).unwrap(), KClass::one(&t));
    }

    #[test]
    fn s3_coset_class_decomposes_as_trivial_plus_standard() {
        let (g, t) = fixtures::s3();
        let lat = crate::group::all_subgroups(&g).unwrap();
        // Cosets of an order-2 subgroup: the degree-3 permutation character
        // splits as trivial + the 2-dimensional irreducible.
        let order2 = lat.subgroups().iter().find(|s| s.order() == 2).unwrap();
        let k = coset_permutation_class(&t, order2).unwrap();
        let trivial = t.trivial_index();
        let two_dim = (0..t.len())
            .find(|&i| t.chars()[i].degree(&g) == 2)
            .unwrap();
        assert_eq!(k.coeff(trivial), 1);
        assert_eq!(k.coeff(two_dim), 1);
        assert_eq!(k.coeffs().len(), 2);
    }

    #[test]
    fn dual_of_regular_is_regular() {
        for factors in [vec![3], vec![4], vec![5]] {
            let t = table(&factors);
            let reg = KClass::regular(&t);
            assert_eq!(reg.dual(&t).unwrap(), reg);
            // Dual permutes nontrivial characters of Z/n.
            let i = (0..t.len()).find(|&i| i != t.trivial_index()).unwrap();
            let k = KClass::from_coeffs(&t, [(i, 1)]);
            let kd = k.dual(&t).unwrap();
            assert_eq!(kd.dual(&t).unwrap(), k);
        }
    }

    #[test]
    fn base_dimension_is_additive() {
        let t = table(&[2]);
        let k = KClass::regular(&t);
        assert_eq!(invariant_dim_over_base(&k, &t, 0).unwrap(), 2);
        assert_eq!(invariant_dim_over_base(&k, &t, 3).unwrap(), 5);
    }

    #[test]
    fn group_mismatch_detected() {
        let t2 = table(&[2]);
        let t3 = table(&[3]);
        let k = KClass::one(&t2);
        assert!(matches!(k.dual(&t3), Err(IndexError::GroupMismatch { .. })));
    }
}
