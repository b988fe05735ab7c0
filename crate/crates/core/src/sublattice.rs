//! Finite-index sublattices of Z^2 in Hermite normal form, and their
//! quotients via Smith normal form.

use crate::group::{abelian_group_bounded, FiniteGroup};

/// A rank-2 sublattice of Z^2 with basis rows `[[a,b],[0,d]]` in Hermite
/// normal form: a >= 1, d >= 1, 0 <= b < d. The form is a unique
/// representative per sublattice and the index is a*d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sublattice2 {
    pub a: i64,
    pub b: i64,
    pub d: i64,
}

impl Sublattice2 {
    pub fn index(&self) -> i64 {
        self.a * self.d
    }

    pub fn basis(&self) -> [[i64; 2]; 2] {
        [[self.a, self.b], [0, self.d]]
    }

    /// Membership of an integer vector in the sublattice.
    pub fn contains(&self, v: [i64; 2]) -> bool {
        let [x, y] = v;
        if x % self.a != 0 {
            return false;
        }
        let alpha = x / self.a;
        (y - alpha * self.b) % self.d == 0
    }

    /// Containment of sublattices: every basis row of `other` lies in `self`.
    pub fn contains_lattice(&self, other: &Sublattice2) -> bool {
        self.contains([other.a, other.b]) && self.contains([0, other.d])
    }

    /// Intersection of two sublattices, in HNF.
    pub fn intersect(&self, other: &Sublattice2) -> Sublattice2 {
        // x-coordinates in the intersection are multiples of lcm(a1, a2)
        // restricted further by the congruence on y; enumerate the kernel of
        // the natural map into (Z^2/self) x (Z^2/other) on a bounding box.
        let m = num_integer::lcm(self.index(), other.index());
        // Both sublattices contain m*Z^2, so the intersection is determined
        // by its image in (Z/m)^2.
        let mut rows: Vec<[i64; 2]> = vec![[m, 0], [0, m]];
        for x in 0..m {
            for y in 0..m {
                let v = [x, y];
                if self.contains(v) && other.contains(v) {
                    rows.push(v);
                }
            }
        }
        hnf_from_rows(&rows).expect("intersection of finite-index sublattices has full rank")
    }
}

/// Hermite normal form of the lattice generated by integer row vectors.
/// Returns `None` if the rows do not span a rank-2 lattice.
pub fn hnf_from_rows(rows: &[[i64; 2]]) -> Option<Sublattice2> {
    let mut rs: Vec<[i64; 2]> = rows.to_vec();
    // Euclid on first coordinates until at most one row has x != 0.
    loop {
        rs.retain(|r| *r != [0, 0]);
        let mut nz: Vec<usize> = (0..rs.len()).filter(|&i| rs[i][0] != 0).collect();
        if nz.len() <= 1 {
            break;
        }
        nz.sort_by_key(|&i| rs[i][0].abs());
        let (i, j) = (nz[0], nz[1]);
        let q = rs[j][0] / rs[i][0];
        rs[j][0] -= q * rs[i][0];
        rs[j][1] -= q * rs[i][1];
    }
    let pivot = rs.iter().position(|r| r[0] != 0)?;
    let mut first = rs[pivot];
    // Reduce remaining rows (all with x = 0) by gcd on the y coordinate.
    let mut d: i64 = 0;
    for (i, r) in rs.iter().enumerate() {
        if i != pivot {
            d = num_integer::gcd(d, r[1]);
        }
    }
    if d == 0 {
        return None;
    }
    d = d.abs();
    if first[0] < 0 {
        first = [-first[0], -first[1]];
    }
    let b = first[1].rem_euclid(d);
    Some(Sublattice2 { a: first[0], b, d })
}

/// All sublattices of Z^2 of index exactly `n`, in a deterministic order.
/// The count is sigma_1(n), the sum of divisors of n.
pub fn sublattices_of_index(n: i64) -> Vec<Sublattice2> {
    assert!(n >= 1, "index must be positive");
    let mut out = Vec::new();
    for a in 1..=n {
        if n % a != 0 {
            continue;
        }
        let d = n / a;
        for b in 0..d {
            out.push(Sublattice2 { a, b, d });
        }
    }
    out
}

/// The quotient Z^2 / K presented as a concrete abelian group.
#[derive(Clone, Debug)]
pub struct AbelianQuotient {
    /// Invariant factors d1 | d2 from the Smith normal form of the basis.
    pub invariant_factors: [i64; 2],
    /// Unimodular column transform V: the class of x in the quotient has
    /// coordinates ((x V)_1 mod d1, (x V)_2 mod d2).
    pub projection: [[i64; 2]; 2],
    /// Concrete realization of Z/d1 x Z/d2 (mixed-radix element indexing).
    pub group: FiniteGroup,
}

impl AbelianQuotient {
    /// Element index of the class of an integer vector.
    pub fn project(&self, v: [i64; 2]) -> u16 {
        let [d1, d2] = self.invariant_factors;
        let c1 = (v[0] * self.projection[0][0] + v[1] * self.projection[1][0]).rem_euclid(d1);
        let c2 = (v[0] * self.projection[0][1] + v[1] * self.projection[1][1]).rem_euclid(d2);
        (c1 * d2 + c2) as u16
    }

    pub fn order(&self) -> i64 {
        self.invariant_factors[0] * self.invariant_factors[1]
    }
}

/// Smith normal form quotient of Z^2 by a sublattice. Row operations act on
/// the generating set and need no tracking; column operations change the
/// coordinates of Z^2 and accumulate into the projection matrix V.
pub fn quotient_z2(k: &Sublattice2) -> AbelianQuotient {
    let mut m = [[k.a, k.b], [0, k.d]];
    let mut v = [[1i64, 0], [0, 1]];

    loop {
        // Clear m[0][1] by column Euclid.
        while m[0][1] != 0 {
            if m[0][0] == 0 || m[0][1].abs() < m[0][0].abs() {
                for r in &mut m {
                    r.swap(0, 1);
                }
                for r in &mut v {
                    r.swap(0, 1);
                }
                continue;
            }
            let q = m[0][1] / m[0][0];
            for r in &mut m {
                r[1] -= q * r[0];
            }
            for r in &mut v {
                r[1] -= q * r[0];
            }
        }
        // Clear m[1][0] by row Euclid; a row swap can reintroduce m[0][1].
        while m[1][0] != 0 {
            if m[0][0] == 0 || m[1][0].abs() < m[0][0].abs() {
                m.swap(0, 1);
                continue;
            }
            let q = m[1][0] / m[0][0];
            m[1][0] -= q * m[0][0];
            m[1][1] -= q * m[0][1];
        }
        if m[0][1] != 0 {
            continue;
        }
        // Diagonal; normalize signs.
        if m[0][0] < 0 {
            for r in &mut m {
                r[0] = -r[0];
            }
            for r in &mut v {
                r[0] = -r[0];
            }
        }
        if m[1][1] < 0 {
            for r in &mut m {
                r[1] = -r[1];
            }
            for r in &mut v {
                r[1] = -r[1];
            }
        }
        // Enforce d1 | d2: couple the columns and rerun the reduction.
        if m[0][0] != 0 && m[1][1] % m[0][0] != 0 {
            for r in &mut m {
                r[0] += r[1];
            }
            for r in &mut v {
                r[0] += r[1];
            }
            continue;
        }
        break;
    }

    let (d1, d2) = (m[0][0], m[1][1]);
    assert!(d1 > 0 && d2 > 0, "sublattice basis must have full rank");
    assert_eq!(d2 % d1, 0);
    assert_eq!(d1 * d2, k.index());
    debug_assert!(rows_in_kernel([[k.a, k.b], [0, k.d]], v, d1, d2));
    let group = abelian_group_bounded(&[d1 as usize, d2 as usize], usize::MAX)
        .expect("quotient group construction");
    AbelianQuotient {
        invariant_factors: [d1, d2],
        projection: v,
        group,
    }
}

fn rows_in_kernel(basis: [[i64; 2]; 2], v: [[i64; 2]; 2], d1: i64, d2: i64) -> bool {
    basis.iter().all(|row| {
        let c1 = row[0] * v[0][0] + row[1] * v[1][0];
        let c2 = row[0] * v[0][1] + row[1] * v[1][1];
        c1.rem_euclid(d1) == 0 && c2.rem_euclid(d2) == 0
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn sigma1(n: i64) -> usize {
        (1..=n).filter(|d| n % d == 0).map(|d| d as usize).sum()
    }

    #[test]
    fn full_lattice_is_unique_index_one() {
        let ls = sublattices_of_index(1);
        assert_eq!(ls, vec![Sublattice2 { a: 1, b: 0, d: 1 }]);
        let q = quotient_z2(&ls[0]);
        assert_eq!(q.order(), 1);
    }

    #[test]
    fn index_two_matches_the_three_kernels() {
        let ls = sublattices_of_index(2);
        assert_eq!(ls.len(), 3);
        // <2a, b>, <a, 2b>, <a+b, a-b> in HNF.
        let k1 = hnf_from_rows(&[[2, 0], [0, 1]]).unwrap();
        let k2 = hnf_from_rows(&[[1, 0], [0, 2]]).unwrap();
        let k3 = hnf_from_rows(&[[1, 1], [1, -1]]).unwrap();
        let set: BTreeSet<Sublattice2> = ls.into_iter().collect();
        assert_eq!(set, [k1, k2, k3].into_iter().collect());
        assert_eq!(k3, Sublattice2 { a: 1, b: 1, d: 2 });
    }

    #[test]
    fn census_matches_sigma1() {
        for n in 1..=12 {
            assert_eq!(sublattices_of_index(n).len(), sigma1(n), "index {n}");
        }
    }

    #[test]
    fn hnf_is_canonical() {
        // Row-scrambled bases of the same lattice normalize identically.
        let l = hnf_from_rows(&[[2, 1], [0, 3]]).unwrap();
        let same = hnf_from_rows(&[[2, 4], [4, 5]]).unwrap();
        // (2,4) = (2,1)+(0,3); (4,5) = 2*(2,1)+(0,3).
        assert_eq!(l, same);
        assert_eq!(l.index(), 6);
    }

    #[test]
    fn membership_and_containment() {
        let k1 = Sublattice2 { a: 2, b: 0, d: 1 };
        assert!(k1.contains([2, 5]));
        assert!(!k1.contains([1, 0]));
        let k12 = hnf_from_rows(&[[2, 0], [0, 2]]).unwrap();
        assert!(k1.contains_lattice(&k12));
        assert!(!k12.contains_lattice(&k1));
    }

    #[test]
    fn pairwise_intersections_of_index_two_kernels() {
        let k1 = Sublattice2 { a: 2, b: 0, d: 1 };
        let k2 = Sublattice2 { a: 1, b: 0, d: 2 };
        let k3 = Sublattice2 { a: 1, b: 1, d: 2 };
        let two_z2 = Sublattice2 { a: 2, b: 0, d: 2 };
        assert_eq!(k1.intersect(&k2), two_z2);
        assert_eq!(k2.intersect(&k3), two_z2);
        assert_eq!(k3.intersect(&k1), two_z2);
    }

    #[test]
    fn quotient_by_double_cover_kernel_is_z2() {
        let k1 = Sublattice2 { a: 2, b: 0, d: 1 };
        let q = quotient_z2(&k1);
        assert_eq!(q.invariant_factors, [1, 2]);
        assert_eq!(q.group.order(), 2);
        // Projection kills exactly K1.
        assert_eq!(q.project([2, 0]), q.group.identity());
        assert_eq!(q.project([0, 1]), q.group.identity());
        assert_ne!(q.project([1, 0]), q.group.identity());
    }

    #[test]
    fn quotient_by_two_z2_is_klein() {
        let k = Sublattice2 { a: 2, b: 0, d: 2 };
        let q = quotient_z2(&k);
        assert_eq!(q.invariant_factors, [2, 2]);
        assert_eq!(q.group.order(), 4);
        assert_eq!(q.project([2, 0]), q.group.identity());
        assert_eq!(q.project([0, 2]), q.group.identity());
        let a = q.project([1, 0]);
        let b = q.project([0, 1]);
        assert_ne!(a, q.group.identity());
        assert_ne!(b, q.group.identity());
        assert_ne!(a, b);
    }

    #[test]
    fn skew_quotient_is_cyclic() {
        // [[1,1],[0,2]] has quotient Z/2; [[1,2],[0,4]] has quotient Z/4.
        let q = quotient_z2(&Sublattice2 { a: 1, b: 1, d: 2 });
        assert_eq!(q.invariant_factors, [1, 2]);
        let q = quotient_z2(&Sublattice2 { a: 1, b: 2, d: 4 });
        assert_eq!(q.invariant_factors, [1, 4]);
        assert_eq!(q.project([1, 2]), q.group.identity());
        assert_eq!(q.project([0, 4]), q.group.identity());
    }

    #[test]
    fn projection_is_surjective_with_kernel_of_right_size() {
        for n in 1..=8 {
            for k in sublattices_of_index(n) {
                let q = quotient_z2(&k);
                assert_eq!(q.order(), n);
                let mut image = BTreeSet::new();
                let mut kernel = 0usize;
                for x in -(2 * n)..(2 * n) {
                    for y in -(2 * n)..(2 * n) {
                        let c = q.project([x, y]);
                        image.insert(c);
                        if c == q.group.identity() && x >= 0 && x < n && y >= 0 && y < n {
                            kernel += 1;
                        }
                        assert_eq!(c == q.group.identity(), k.contains([x, y]));
                    }
                }
                assert_eq!(image.len() as i64, n);
                assert_eq!(kernel as i64, n, "kernel density in an n x n box");
            }
        }
    }
}
