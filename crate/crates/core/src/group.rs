//! Concrete finite groups given by multiplication tables, and their full
//! subgroup lattices with containment, meet, and Möbius data.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Default cap on the order of groups we are willing to materialize.
/// Overridable per call; the CLI reads `EQUICOUNT_MAX_GROUP_ORDER`.
pub const DEFAULT_MAX_GROUP_ORDER: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("multiplication table is not square: row {row} has length {len}, expected {order}")]
    NotSquare {
        row: usize,
        len: usize,
        order: usize,
    },
    #[error("table entry {value} at ({row},{col}) is out of range 0..{order}")]
    EntryOutOfRange {
        row: usize,
        col: usize,
        value: usize,
        order: usize,
    },
    #[error("no two-sided identity element found")]
    NoIdentity,
    #[error("element {element} has no inverse")]
    NoInverse { element: usize },
    #[error("associativity fails at triple ({a},{b},{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("group order {order} exceeds the configured bound {bound}")]
    BoundExceeded { order: usize, bound: usize },
    #[error("group is not abelian: {a}*{b} != {b}*{a}")]
    NotAbelian { a: usize, b: usize },
}

/// A finite group on element indices `0..order`, stored as a validated
/// multiplication table.
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    order: usize,
    mul: Vec<u16>,
    identity: u16,
    inverse: Vec<u16>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FiniteGroup(order={})", self.order)
    }
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> u16 {
        self.identity
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mul[a as usize * self.order + b as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        self.inverse[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = u16> {
        0..self.order as u16
    }

    /// Order of a single element.
    pub fn element_order(&self, a: u16) -> usize {
        let mut x = a;
        let mut n = 1;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order as u16).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    /// Exponent of the group: lcm of all element orders.
    pub fn exponent(&self) -> usize {
        let mut e: usize = 1;
        for a in self.elements() {
            e = num_integer::lcm(e, self.element_order(a));
        }
        e
    }

    pub fn mul_table(&self) -> Vec<Vec<u16>> {
        (0..self.order)
            .map(|a| self.mul[a * self.order..(a + 1) * self.order].to_vec())
            .collect()
    }
}

/// Validate a multiplication table and return the group, with the default
/// order bound.
pub fn build_group(table: &[Vec<usize>]) -> Result<FiniteGroup, GroupError> {
    build_group_bounded(table, DEFAULT_MAX_GROUP_ORDER)
}

/// Validate a multiplication table against an explicit order bound.
///
/// The identity and inverses are discovered from the table; group axioms are
/// checked by full enumeration, reporting a witness on failure.
pub fn build_group_bounded(table: &[Vec<usize>], bound: usize) -> Result<FiniteGroup, GroupError> {
    let order = table.len();
    if order == 0 || order > bound {
        return Err(GroupError::BoundExceeded { order, bound });
    }
    for (row, r) in table.iter().enumerate() {
        if r.len() != order {
            return Err(GroupError::NotSquare {
                row,
                len: r.len(),
                order,
            });
        }
        for (col, &v) in r.iter().enumerate() {
            if v >= order {
                return Err(GroupError::EntryOutOfRange {
                    row,
                    col,
                    value: v,
                    order,
                });
            }
        }
    }
    let mul: Vec<u16> = table.iter().flatten().map(|&v| v as u16).collect();
    let at = |a: usize, b: usize| mul[a * order + b] as usize;

    let identity = (0..order)
        .find(|&e| (0..order).all(|a| at(e, a) == a && at(a, e) == a))
        .ok_or(GroupError::NoIdentity)?;

    let mut inverse = vec![0u16; order];
    for a in 0..order {
        let inv = (0..order)
            .find(|&b| at(a, b) == identity && at(b, a) == identity)
            .ok_or(GroupError::NoInverse { element: a })?;
        inverse[a] = inv as u16;
    }

    for a in 0..order {
        for b in 0..order {
            for c in 0..order {
                if at(at(a, b), c) != at(a, at(b, c)) {
                    return Err(GroupError::NotAssociative { a, b, c });
                }
            }
        }
    }

    Ok(FiniteGroup {
        order,
        mul,
        identity: identity as u16,
        inverse,
    })
}

/// Direct product of cyclic groups Z/d1 x ... x Z/dk, with elements indexed
/// in mixed radix (last factor fastest).
pub fn abelian_group(factors: &[usize]) -> Result<FiniteGroup, GroupError> {
    abelian_group_bounded(factors, DEFAULT_MAX_GROUP_ORDER)
}

pub fn abelian_group_bounded(factors: &[usize], bound: usize) -> Result<FiniteGroup, GroupError> {
    assert!(
        factors.iter().all(|&d| d >= 1),
        "cyclic factors must be positive"
    );
    let order: usize = factors.iter().product();
    if order == 0 || order > bound {
        return Err(GroupError::BoundExceeded { order, bound });
    }
    let k = factors.len();
    let decode = |mut i: usize| -> Vec<usize> {
        let mut coords = vec![0; k];
        for j in (0..k).rev() {
            coords[j] = i % factors[j];
            i /= factors[j];
        }
        coords
    };
    let encode = |coords: &[usize]| -> usize {
        coords
            .iter()
            .zip(factors)
            .fold(0, |acc, (&c, &d)| acc * d + c)
    };
    let mut table = vec![vec![0usize; order]; order];
    for a in 0..order {
        let ca = decode(a);
        for b in 0..order {
            let cb = decode(b);
            let sum: Vec<usize> = ca
                .iter()
                .zip(&cb)
                .zip(factors)
                .map(|((&x, &y), &d)| (x + y) % d)
                .collect();
            table[a][b] = encode(&sum);
        }
    }
    build_group_bounded(&table, bound)
}

/// A subgroup, identified by its canonical (sorted) element set.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<u16>,
}

impl fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

impl Subgroup {
    /// Wrap a set of elements after verifying closure in `g`.
    pub fn new(g: &FiniteGroup, elements: &[u16]) -> Option<Subgroup> {
        let set: BTreeSet<u16> = elements.iter().copied().collect();
        if !set.contains(&g.identity()) {
            return None;
        }
        for &a in &set {
            if !set.contains(&g.inv(a)) {
                return None;
            }
            for &b in &set {
                if !set.contains(&g.mul(a, b)) {
                    return None;
                }
            }
        }
        Some(Subgroup {
            elements: set.into_iter().collect(),
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[u16] {
        &self.elements
    }

    pub fn contains(&self, e: u16) -> bool {
        self.elements.binary_search(&e).is_ok()
    }

    pub fn is_subset_of(&self, other: &Subgroup) -> bool {
        self.elements.iter().all(|&e| other.contains(e))
    }

    fn from_sorted(elements: Vec<u16>) -> Subgroup {
        Subgroup { elements }
    }
}

/// Closure of a set of elements under multiplication and inverse.
pub fn generated_subgroup(g: &FiniteGroup, gens: &[u16]) -> Subgroup {
    let mut set: BTreeSet<u16> = BTreeSet::new();
    set.insert(g.identity());
    let mut queue: VecDeque<u16> = gens.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        if !set.insert(x) {
            continue;
        }
        queue.push_back(g.inv(x));
        let members: Vec<u16> = set.iter().copied().collect();
        for &y in &members {
            queue.push_back(g.mul(x, y));
            queue.push_back(g.mul(y, x));
        }
    }
    loop {
        let members: Vec<u16> = set.iter().copied().collect();
        let mut grew = false;
        for &x in &members {
            for &y in &members {
                if set.insert(g.mul(x, y)) {
                    grew = true;
                }
            }
        }
        if !grew {
            break;
        }
    }
    Subgroup {
        elements: set.into_iter().collect(),
    }
}

/// The full subgroup lattice of a finite group: every subgroup exactly once
/// in a canonical order, with containment, meet, and Möbius matrices.
#[derive(Clone, PartialEq, Eq)]
pub struct SubgroupLattice {
    group: FiniteGroup,
    subgroups: Vec<Subgroup>,
    leq: Vec<bool>,
    meet: Vec<usize>,
    mobius: Vec<i64>,
    trivial_index: usize,
    full_index: usize,
}

impl fmt::Debug for SubgroupLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SubgroupLattice(group order {}, {} subgroups)",
            self.group.order(),
            self.subgroups.len()
        )
    }
}

impl SubgroupLattice {
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn subgroup(&self, i: usize) -> &Subgroup {
        &self.subgroups[i]
    }

    pub fn subgroups(&self) -> &[Subgroup] {
        &self.subgroups
    }

    /// Index of the trivial subgroup {1}.
    pub fn trivial_index(&self) -> usize {
        self.trivial_index
    }

    /// Index of the full group.
    pub fn full_index(&self) -> usize {
        self.full_index
    }

    /// Containment: subgroup `i` contained in subgroup `j`.
    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i * self.subgroups.len() + j]
    }

    /// Index of the intersection of subgroups `i` and `j`.
    pub fn meet(&self, i: usize, j: usize) -> usize {
        self.meet[i * self.subgroups.len() + j]
    }

    /// Möbius function of the containment order; defined for `i <= j`,
    /// zero for incomparable pairs.
    pub fn mobius(&self, i: usize, j: usize) -> i64 {
        self.mobius[i * self.subgroups.len() + j]
    }

    /// Look up a subgroup by element set.
    pub fn index_of(&self, s: &Subgroup) -> Option<usize> {
        self.subgroups.iter().position(|t| t == s)
    }
}

/// Enumerate all subgroups of `g` with the default order bound.
pub fn all_subgroups(g: &FiniteGroup) -> Result<Arc<SubgroupLattice>, GroupError> {
    all_subgroups_bounded(g, DEFAULT_MAX_GROUP_ORDER)
}

/// Enumerate all subgroups by closing the set of cyclic subgroups under
/// join, then compute containment, meet, and Möbius data.
pub fn all_subgroups_bounded(
    g: &FiniteGroup,
    bound: usize,
) -> Result<Arc<SubgroupLattice>, GroupError> {
    if g.order() > bound {
        return Err(GroupError::BoundExceeded {
            order: g.order(),
            bound,
        });
    }

    let mut found: BTreeSet<Vec<u16>> = BTreeSet::new();
    found.insert(vec![g.identity()]);
    let cyclic: Vec<Subgroup> = g.elements().map(|a| generated_subgroup(g, &[a])).collect();
    for c in &cyclic {
        found.insert(c.elements().to_vec());
    }
    // Join closure: every subgroup is a join of cyclic subgroups.
    let mut frontier: Vec<Vec<u16>> = found.iter().cloned().collect();
    while let Some(h) = frontier.pop() {
        for c in &cyclic {
            let mut gens = h.clone();
            gens.extend_from_slice(c.elements());
            let j = generated_subgroup(g, &gens);
            if found.insert(j.elements().to_vec()) {
                frontier.push(j.elements().to_vec());
            }
        }
    }

    let mut subgroups: Vec<Subgroup> = found.into_iter().map(Subgroup::from_sorted).collect();
    subgroups.sort_by(|a, b| {
        a.order()
            .cmp(&b.order())
            .then_with(|| a.elements().cmp(b.elements()))
    });

    let n = subgroups.len();
    let mut leq = vec![false; n * n];
    for i in 0..n {
        for j in 0..n {
            leq[i * n + j] = subgroups[i].is_subset_of(&subgroups[j]);
        }
    }

    let mut meet = vec![0usize; n * n];
    for i in 0..n {
        for j in 0..n {
            let inter: Vec<u16> = subgroups[i]
                .elements()
                .iter()
                .copied()
                .filter(|&e| subgroups[j].contains(e))
                .collect();
            let s = Subgroup::from_sorted(inter);
            let k = subgroups
                .iter()
                .position(|t| *t == s)
                .expect("intersection of subgroups is a subgroup");
            meet[i * n + j] = k;
        }
    }

    // Möbius by the defining recursion; the sort by order makes every
    // interval triangular in the index order.
    let mut mobius = vec![0i64; n * n];
    for i in 0..n {
        for j in 0..n {
            if !leq[i * n + j] {
                continue;
            }
            if i == j {
                mobius[i * n + j] = 1;
            } else {
                let mut s = 0i64;
                for k in 0..n {
                    if k != j && leq[i * n + k] && leq[k * n + j] {
                        s += mobius[i * n + k];
                    }
                }
                mobius[i * n + j] = -s;
            }
        }
    }

    let trivial_index = 0;
    let full_index = n - 1;
    debug_assert_eq!(subgroups[trivial_index].order(), 1);
    debug_assert_eq!(subgroups[full_index].order(), g.order());

    Ok(Arc::new(SubgroupLattice {
        group: g.clone(),
        subgroups,
        leq,
        meet,
        mobius,
        trivial_index,
        full_index,
    }))
}

/// Quotient of `g` by a normal subgroup, together with the projection map
/// on element indices. Returns `None` if `n` is not normal in `g`.
pub fn quotient_group(g: &FiniteGroup, n: &Subgroup) -> Option<(FiniteGroup, Vec<u16>)> {
    for a in g.elements() {
        for &h in n.elements() {
            let conj = g.mul(g.mul(a, h), g.inv(a));
            if !n.contains(conj) {
                return None;
            }
        }
    }
    // Cosets, indexed in order of first appearance.
    let mut coset_of = vec![u16::MAX; g.order()];
    let mut reps: Vec<u16> = Vec::new();
    for a in g.elements() {
        if coset_of[a as usize] != u16::MAX {
            continue;
        }
        let idx = reps.len() as u16;
        reps.push(a);
        for &h in n.elements() {
            coset_of[g.mul(a, h) as usize] = idx;
        }
    }
    let q_order = reps.len();
    let mut table = vec![vec![0usize; q_order]; q_order];
    for (i, &a) in reps.iter().enumerate() {
        for (j, &b) in reps.iter().enumerate() {
            table[i][j] = coset_of[g.mul(a, b) as usize] as usize;
        }
    }
    let q = build_group_bounded(&table, q_order.max(1)).expect("quotient of a group is a group");
    Some((q, coset_of))
}
