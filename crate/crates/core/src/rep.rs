//! Complex characters of finite groups (exact cyclotomic values), the
//! Frobenius-Schur indicator, and real irreducible representations with
//! their endomorphism-ring type R, C, or H.

use crate::cyclotomic::{rat, Cyc, Rat};
use crate::group::{generated_subgroup, FiniteGroup, Subgroup};
use num_traits::{One, Zero};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RepError {
    #[error("group is not abelian")]
    NotAbelian,
    #[error("character is not irreducible: <chi,chi> != 1")]
    NotIrreducible,
    #[error("Frobenius-Schur indicator is not in {{-1,0,1}}; character data is corrupt")]
    IndicatorOutOfRange,
    #[error("character table is incomplete or inconsistent: {reason}")]
    IncompleteTable { reason: String },
    #[error("character average over a subgroup is not a nonnegative integer")]
    NonIntegerAverage,
    #[error("character has wrong number of values: got {got}, group order {order}")]
    WrongLength { got: usize, order: usize },
}

/// A complex character: one exact cyclotomic value per group element.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexCharacter {
    values: Vec<Cyc>,
}

impl ComplexCharacter {
    pub fn new(g: &FiniteGroup, values: Vec<Cyc>) -> Result<ComplexCharacter, RepError> {
        if values.len() != g.order() {
            return Err(RepError::WrongLength {
                got: values.len(),
                order: g.order(),
            });
        }
        Ok(ComplexCharacter { values })
    }

    pub fn values(&self) -> &[Cyc] {
        &self.values
    }

    pub fn value(&self, e: u16) -> &Cyc {
        &self.values[e as usize]
    }

    /// Degree: the value at the identity, a positive integer.
    pub fn degree(&self, g: &FiniteGroup) -> i64 {
        self.values[g.identity() as usize]
            .as_rational()
            .and_then(|r| {
                if r.is_integer() {
                    Some(r.to_integer() as i64)
                } else {
                    None
                }
            })
            .expect("character degree must be a positive integer")
    }

    pub fn conj(&self) -> ComplexCharacter {
        ComplexCharacter {
            values: self.values.iter().map(Cyc::conj).collect(),
        }
    }

    /// Hermitian inner product (1/|G|) sum_g chi(g) conj(psi(g)), exact.
    pub fn inner(&self, other: &ComplexCharacter, g: &FiniteGroup) -> Option<Rat> {
        let mut s = Cyc::zero(1);
        for e in g.elements() {
            s = s.add(&self.values[e as usize].mul(&other.values[e as usize].conj()));
        }
        s.scale(rat(1, g.order() as i128)).as_rational()
    }
}

/// All |G| characters of an abelian group, found by enumerating consistent
/// homomorphisms to the roots of unity of the group exponent.
pub fn characters_abelian(g: &FiniteGroup) -> Result<Vec<ComplexCharacter>, RepError> {
    if !g.is_abelian() {
        return Err(RepError::NotAbelian);
    }
    let n = g.order();
    let e = g.exponent();

    // Greedy generating set: add any element outside the current span.
    let mut gens: Vec<u16> = Vec::new();
    let mut span = generated_subgroup(g, &[]);
    for a in g.elements() {
        if !span.contains(a) {
            gens.push(a);
            let mut gs = gens.clone();
            gs.push(a);
            span = generated_subgroup(g, &gs);
            if span.order() == n {
                break;
            }
        }
    }

    // A character assigns to each generator an exponent a_i with
    // ord(gen_i) * a_i = 0 mod e; propagate over the Cayley graph and keep
    // the consistent assignments.
    let orders: Vec<usize> = gens.iter().map(|&x| g.element_order(x)).collect();
    let mut found: Vec<Vec<usize>> = Vec::new();
    let mut choice = vec![0usize; gens.len()];
    enumerate_assignments(g, &gens, &orders, e, 0, &mut choice, &mut found);
    if found.len() != n {
        return Err(RepError::IncompleteTable {
            reason: format!(
                "expected {n} characters of an abelian group, found {}",
                found.len()
            ),
        });
    }
    found.sort();
    let table = found
        .into_iter()
        .map(|exps| ComplexCharacter {
            values: exps
                .into_iter()
                .map(|k| Cyc::root_of_unity(e, k as i64, Rat::one()))
                .collect(),
        })
        .collect();
    Ok(table)
}

fn enumerate_assignments(
    g: &FiniteGroup,
    gens: &[u16],
    orders: &[usize],
    e: usize,
    i: usize,
    choice: &mut Vec<usize>,
    found: &mut Vec<Vec<usize>>,
) {
    if i == gens.len() {
        if let Some(exps) = propagate(g, gens, choice, e) {
            found.push(exps);
        }
        return;
    }
    let step = e / orders[i];
    for k in 0..orders[i] {
        choice[i] = k * step;
        enumerate_assignments(g, gens, orders, e, i + 1, choice, found);
    }
}

/// Extend exponents on generators to the whole group along the Cayley
/// graph; `None` on any inconsistency.
fn propagate(g: &FiniteGroup, gens: &[u16], choice: &[usize], e: usize) -> Option<Vec<usize>> {
    let n = g.order();
    let mut exps: Vec<Option<usize>> = vec![None; n];
    exps[g.identity() as usize] = Some(0);
    let mut queue = vec![g.identity()];
    while let Some(x) = queue.pop() {
        let ex = exps[x as usize].unwrap();
        for (j, &gen) in gens.iter().enumerate() {
            let y = g.mul(x, gen);
            let ey = (ex + choice[j]) % e;
            match exps[y as usize] {
                None => {
                    exps[y as usize] = Some(ey);
                    queue.push(y);
                }
                Some(old) if old != ey => return None,
                _ => {}
            }
        }
    }
    exps.into_iter().collect()
}

/// Frobenius-Schur indicator (1/|G|) sum_g chi(g^2), exactly evaluated.
/// Requires chi irreducible.
pub fn frobenius_schur(chi: &ComplexCharacter, g: &FiniteGroup) -> Result<i8, RepError> {
    let norm = chi.inner(chi, g).ok_or(RepError::NotIrreducible)?;
    if norm != Rat::one() {
        return Err(RepError::NotIrreducible);
    }
    let mut s = Cyc::zero(1);
    for a in g.elements() {
        let sq = g.mul(a, a);
        s = s.add(chi.value(sq));
    }
    let v = s
        .scale(rat(1, g.order() as i128))
        .as_rational()
        .ok_or(RepError::IndicatorOutOfRange)?;
    if v == Rat::one() {
        Ok(1)
    } else if v.is_zero() {
        Ok(0)
    } else if v == -Rat::one() {
        Ok(-1)
    } else {
        Err(RepError::IndicatorOutOfRange)
    }
}

/// Endomorphism-ring type of a real irreducible representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum EndoType {
    R,
    C,
    H,
}

/// A real irreducible representation, described by its real character and
/// the complex constituents it realifies.
#[derive(Clone, Debug)]
pub struct RealIrrep {
    pub endo_type: EndoType,
    real_character: Vec<Cyc>,
    /// Indices into the complex character table: one entry for R, the
    /// conjugate pair for C, one entry (doubled) for H.
    pub constituents: Vec<usize>,
}

impl RealIrrep {
    pub fn real_character(&self) -> &[Cyc] {
        &self.real_character
    }

    pub fn real_degree(&self, g: &FiniteGroup) -> i64 {
        self.real_character[g.identity() as usize]
            .as_rational()
            .and_then(|r| {
                if r.is_integer() {
                    Some(r.to_integer() as i64)
                } else {
                    None
                }
            })
            .expect("real degree is an integer")
    }
}

/// A validated complete complex character table.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    group: FiniteGroup,
    chars: Vec<ComplexCharacter>,
}

impl CharacterTable {
    /// Validate: pairwise orthonormal, positive integer degrees squaring to
    /// |G|, the trivial character present, and closure under conjugation.
    pub fn new(
        group: FiniteGroup,
        chars: Vec<ComplexCharacter>,
    ) -> Result<CharacterTable, RepError> {
        let mut degsq = 0i64;
        for (i, c) in chars.iter().enumerate() {
            if c.values.len() != group.order() {
                return Err(RepError::WrongLength {
                    got: c.values.len(),
                    order: group.order(),
                });
            }
            let deg = c.values[group.identity() as usize].as_rational();
            let d = match deg {
                Some(r) if r.is_integer() && r > Rat::zero() => r.to_integer() as i64,
                _ => {
                    return Err(RepError::IncompleteTable {
                        reason: format!("character {i} has a non-positive-integer degree"),
                    })
                }
            };
            for (j, e) in chars.iter().enumerate() {
                let ip = c
                    .inner(e, &group)
                    .ok_or_else(|| RepError::IncompleteTable {
                        reason: format!("inner product of characters {i},{j} is not rational"),
                    })?;
                let expect = if i == j { Rat::one() } else { Rat::zero() };
                if ip != expect {
                    return Err(RepError::IncompleteTable {
                        reason: format!("characters {i},{j} are not orthonormal"),
                    });
                }
            }
            degsq += d * d;
        }
        if degsq != group.order() as i64 {
            return Err(RepError::IncompleteTable {
                reason: format!(
                    "sum of squared degrees {degsq} != group order {}",
                    group.order()
                ),
            });
        }
        let one = Cyc::one(1);
        if !chars
            .iter()
            .any(|c| c.values.iter().all(|v| v.eq_cyc(&one)))
        {
            return Err(RepError::IncompleteTable {
                reason: "the trivial character is missing".into(),
            });
        }
        for (i, c) in chars.iter().enumerate() {
            let cj = c.conj();
            let closed = chars
                .iter()
                .any(|e| e.values.iter().zip(cj.values()).all(|(a, b)| a.eq_cyc(b)));
            if !closed {
                return Err(RepError::IncompleteTable {
                    reason: format!("conjugate of character {i} is missing"),
                });
            }
        }
        Ok(CharacterTable { group, chars })
    }

    /// Characters of an abelian group, computed in-library.
    pub fn for_abelian(group: FiniteGroup) -> Result<CharacterTable, RepError> {
        let chars = characters_abelian(&group)?;
        CharacterTable::new(group, chars)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn chars(&self) -> &[ComplexCharacter] {
        &self.chars
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }

    /// Index of the trivial character.
    pub fn trivial_index(&self) -> usize {
        self.chars
            .iter()
            .position(|c| c.values.iter().all(|v| v.eq_cyc(&Cyc::one(1))))
            .expect("complete table contains the trivial character")
    }

    /// Index of the conjugate of character `i`.
    pub fn conj_index(&self, i: usize) -> usize {
        let cj = self.chars[i].conj();
        self.chars
            .iter()
            .position(|c| c.values.iter().zip(cj.values()).all(|(a, b)| a.eq_cyc(b)))
            .expect("complete table is closed under conjugation")
    }

    /// Multiplicity of character `i` in an integer-valued class function
    /// given per element. `None` if the inner product is not an integer.
    pub fn multiplicity_in(&self, class_fn: &[Cyc], i: usize) -> Option<i64> {
        let mut s = Cyc::zero(1);
        for e in self.group.elements() {
            s = s.add(&class_fn[e as usize].mul(&self.chars[i].values[e as usize].conj()));
        }
        let r = s.scale(rat(1, self.group.order() as i128)).as_rational()?;
        if r.is_integer() {
            Some(r.to_integer() as i64)
        } else {
            None
        }
    }
}

/// Group the complex irreducibles of a complete table into real irreps:
/// indicator +1 keeps chi, indicator 0 fuses conjugate pairs, indicator -1
/// doubles chi.
pub fn real_irreps(table: &CharacterTable) -> Result<Vec<RealIrrep>, RepError> {
    let g = table.group();
    let mut used = vec![false; table.len()];
    let mut out = Vec::new();
    for i in 0..table.len() {
        if used[i] {
            continue;
        }
        used[i] = true;
        let chi = &table.chars()[i];
        match frobenius_schur(chi, g)? {
            1 => out.push(RealIrrep {
                endo_type: EndoType::R,
                real_character: chi.values.clone(),
                constituents: vec![i],
            }),
            -1 => out.push(RealIrrep {
                endo_type: EndoType::H,
                real_character: chi.values.iter().map(|v| v.scale(rat(2, 1))).collect(),
                constituents: vec![i],
            }),
            _ => {
                let j = table.conj_index(i);
                if j == i || used[j] {
                    return Err(RepError::IncompleteTable {
                        reason: format!("no unused conjugate partner for character {i}"),
                    });
                }
                used[j] = true;
                let (a, b) = (i.min(j), i.max(j));
                out.push(RealIrrep {
                    endo_type: EndoType::C,
                    real_character: chi.values.iter().map(|v| v.add(&v.conj())).collect(),
                    constituents: vec![a, b],
                });
            }
        }
    }
    Ok(out)
}

/// Dimension of the subspace of `rho` on which `h` acts trivially:
/// (1/|H|) sum_{x in H} real_character(x), an exact nonnegative integer.
pub fn fixed_dim(rho: &RealIrrep, h: &Subgroup) -> Result<i64, RepError> {
    let mut s = Cyc::zero(1);
    for &x in h.elements() {
        s = s.add(&rho.real_character[x as usize]);
    }
    let r = s
        .scale(rat(1, h.order() as i128))
        .as_rational()
        .ok_or(RepError::NonIntegerAverage)?;
    if !r.is_integer() || r < Rat::zero() {
        return Err(RepError::NonIntegerAverage);
    }
    Ok(r.to_integer() as i64)
}

/// Character tables for the nonabelian test groups.
pub mod fixtures {
    use super::*;
    use crate::group::{build_group, FiniteGroup};

    fn int_table(g: &FiniteGroup, rows: Vec<Vec<i64>>) -> CharacterTable {
        let chars = rows
            .into_iter()
            .map(|row| ComplexCharacter {
                values: row
                    .into_iter()
                    .map(|v| Cyc::from_rat(1, rat(v as i128, 1)))
                    .collect(),
            })
            .collect();
        CharacterTable::new(g.clone(), chars).expect("fixture table validates")
    }

    /// Symmetric group S3 as permutations of {0,1,2} in lexicographic
    /// one-line order: 012, 021, 102, 120, 201, 210.
    pub fn s3() -> (FiniteGroup, CharacterTable) {
        let perms: [[usize; 3]; 6] = [
            [0, 1, 2],
            [0, 2, 1],
            [1, 0, 2],
            [1, 2, 0],
            [2, 0, 1],
            [2, 1, 0],
        ];
        let compose =
            |p: &[usize; 3], q: &[usize; 3]| -> [usize; 3] { [p[q[0]], p[q[1]], p[q[2]]] };
        let idx = |p: &[usize; 3]| perms.iter().position(|q| q == p).unwrap();
        let table: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| perms.iter().map(|q| idx(&compose(p, q))).collect())
            .collect();
        let g = build_group(&table).unwrap();
        // Transpositions: 021, 102, 210 (indices 1, 2, 5); 3-cycles: 3, 4.
        let sign = |i: usize| if [1usize, 2, 5].contains(&i) { -1 } else { 1 };
        let chars = vec![
            vec![1; 6],
            (0..6).map(sign).collect(),
            (0..6)
                .map(|i| match i {
                    0 => 2,
                    3 | 4 => -1,
                    _ => 0,
                })
                .collect(),
        ];
        let t = int_table(&g, chars);
        (g, t)
    }

    /// Dihedral group D4 of order 8: elements r^a s^b with a in 0..4,
    /// b in 0..2, index = 2a + b, relation s r = r^{-1} s.
    pub fn d4() -> (FiniteGroup, CharacterTable) {
        let idx = |a: usize, b: usize| 2 * (a % 4) + (b % 2);
        let mut table = vec![vec![0usize; 8]; 8];
        for a1 in 0..4 {
            for b1 in 0..2 {
                for a2 in 0..4 {
                    for b2 in 0..2 {
                        // (r^a1 s^b1)(r^a2 s^b2) = r^(a1 + a2*(-1)^b1) s^(b1+b2)
                        let a = if b1 == 0 {
                            (a1 + a2) % 4
                        } else {
                            (a1 + 4 - a2 % 4) % 4
                        };
                        table[idx(a1, b1)][idx(a2, b2)] = idx(a, b1 + b2);
                    }
                }
            }
        }
        let g = build_group(&table).unwrap();
        let val = |i: usize, f: &dyn Fn(usize, usize) -> i64| -> i64 { f(i / 2, i % 2) };
        let rows: Vec<Vec<i64>> = vec![
            (0..8).map(|i| val(i, &|_, _| 1)).collect(),
            (0..8)
                .map(|i| val(i, &|_, b| if b == 0 { 1 } else { -1 }))
                .collect(),
            (0..8)
                .map(|i| val(i, &|a, _| if a % 2 == 0 { 1 } else { -1 }))
                .collect(),
            (0..8)
                .map(|i| val(i, &|a, b| if (a + b) % 2 == 0 { 1 } else { -1 }))
                .collect(),
            (0..8)
                .map(|i| {
                    val(i, &|a, b| {
                        if b != 0 {
                            0
                        } else if a == 0 {
                            2
                        } else if a == 2 {
                            -2
                        } else {
                            0
                        }
                    })
                })
                .collect(),
        ];
        let t = int_table(&g, rows);
        (g, t)
    }

    /// Quaternion group Q8 = {1, -1, i, -i, j, -j, k, -k} in that order.
    pub fn q8() -> (FiniteGroup, CharacterTable) {
        // Encode +-{1,i,j,k} as (sign, axis) with axis 0..4.
        let enc = |s: i32, axis: usize| -> usize { axis * 2 + if s > 0 { 0 } else { 1 } };
        let mul = |x: usize, y: usize| -> usize {
            let (sx, ax) = (if x % 2 == 0 { 1 } else { -1 }, x / 2);
            let (sy, ay) = (if y % 2 == 0 { 1 } else { -1 }, y / 2);
            // Quaternion unit products: table[ax][ay] = (sign, axis).
            const UNIT: [[(i32, usize); 4]; 4] = [
                [(1, 0), (1, 1), (1, 2), (1, 3)],
                [(1, 1), (-1, 0), (1, 3), (-1, 2)],
                [(1, 2), (-1, 3), (-1, 0), (1, 1)],
                [(1, 3), (1, 2), (-1, 1), (-1, 0)],
            ];
            let (s, axis) = UNIT[ax][ay];
            enc(sx * sy * s, axis)
        };
        let table: Vec<Vec<usize>> = (0..8)
            .map(|x| (0..8).map(|y| mul(x, y)).collect())
            .collect();
        let g = build_group(&table).unwrap();
        // Element order: 1, -1, i, -i, j, -j, k, -k.
        let lin = |keep: usize| -> Vec<i64> {
            (0..8)
                .map(|x: usize| {
                    let axis = x / 2;
                    if axis == 0 || axis == keep {
                        1
                    } else {
                        -1
                    }
                })
                .collect()
        };
        let rows: Vec<Vec<i64>> = vec![
            vec![1; 8],
            lin(1),
            lin(2),
            lin(3),
            vec![2, -2, 0, 0, 0, 0, 0, 0],
        ];
        let t = int_table(&g, rows);
        (g, t)
    }
}
