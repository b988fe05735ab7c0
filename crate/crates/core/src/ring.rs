//! The ring `Z[I]` over the subgroups of a finite group, with multiplication
//! given by subgroup intersection, the inner product with orthonormal
//! subgroup basis, diagonal evaluation, Möbius inversion, and the
//! pushforward along a quotient map.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::group::{FiniteGroup, Subgroup, SubgroupLattice};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RingError {
    #[error("elements live over different subgroup lattices")]
    LatticeMismatch,
    #[error("quotient data is inconsistent: {reason}")]
    BadQuotient { reason: String },
}

/// An element of `Z[I]`: sparse integer coefficients on the subgroups of a
/// fixed lattice. The full group is the multiplicative identity.
#[derive(Clone)]
pub struct IsotropyElement {
    lattice: Arc<SubgroupLattice>,
    coeffs: BTreeMap<usize, i64>,
}

impl fmt::Debug for IsotropyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .map(|(&i, &c)| format!("{c}*{:?}", self.lattice.subgroup(i)))
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl PartialEq for IsotropyElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_lattice(other) && self.coeffs == other.coeffs
    }
}

impl Eq for IsotropyElement {}

impl IsotropyElement {
    pub fn zero(lattice: Arc<SubgroupLattice>) -> IsotropyElement {
        IsotropyElement {
            lattice,
            coeffs: BTreeMap::new(),
        }
    }

    /// The multiplicative identity 1*G.
    pub fn one(lattice: Arc<SubgroupLattice>) -> IsotropyElement {
        let full = lattice.full_index();
        IsotropyElement::basis(lattice, full)
    }

    /// A single subgroup basis element.
    pub fn basis(lattice: Arc<SubgroupLattice>, subgroup_index: usize) -> IsotropyElement {
        assert!(subgroup_index < lattice.len());
        let mut coeffs = BTreeMap::new();
        coeffs.insert(subgroup_index, 1);
        IsotropyElement { lattice, coeffs }
    }

    pub fn from_coeffs(
        lattice: Arc<SubgroupLattice>,
        coeffs: impl IntoIterator<Item = (usize, i64)>,
    ) -> IsotropyElement {
        let mut map = BTreeMap::new();
        for (i, c) in coeffs {
            assert!(i < lattice.len());
            if c != 0 {
                *map.entry(i).or_insert(0) += c;
            }
        }
        map.retain(|_, c| *c != 0);
        IsotropyElement {
            lattice,
            coeffs: map,
        }
    }

    pub fn lattice(&self) -> &Arc<SubgroupLattice> {
        &self.lattice
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, subgroup_index: usize) -> i64 {
        self.coeffs.get(&subgroup_index).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn same_lattice(&self, other: &IsotropyElement) -> bool {
        Arc::ptr_eq(&self.lattice, &other.lattice) || self.lattice == other.lattice
    }

    pub fn add(&self, other: &IsotropyElement) -> Result<IsotropyElement, RingError> {
        if !self.same_lattice(other) {
            return Err(RingError::LatticeMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (&i, &c) in &other.coeffs {
            *coeffs.entry(i).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        Ok(IsotropyElement {
            lattice: self.lattice.clone(),
            coeffs,
        })
    }

    pub fn neg(&self) -> IsotropyElement {
        let coeffs = self.coeffs.iter().map(|(&i, &c)| (i, -c)).collect();
        IsotropyElement {
            lattice: self.lattice.clone(),
            coeffs,
        }
    }

    pub fn scale(&self, k: i64) -> IsotropyElement {
        if k == 0 {
            return IsotropyElement::zero(self.lattice.clone());
        }
        let coeffs = self.coeffs.iter().map(|(&i, &c)| (i, k * c)).collect();
        IsotropyElement {
            lattice: self.lattice.clone(),
            coeffs,
        }
    }
}

/// Ring product: the coefficient of K in xy is the sum of x_I y_J over
/// pairs with I meet J = K.
pub fn ring_mul(x: &IsotropyElement, y: &IsotropyElement) -> Result<IsotropyElement, RingError> {
    if !x.same_lattice(y) {
        return Err(RingError::LatticeMismatch);
    }
    let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
    for (&i, &ci) in &x.coeffs {
        for (&j, &cj) in &y.coeffs {
            let k = x.lattice.meet(i, j);
            *coeffs.entry(k).or_insert(0) += ci * cj;
        }
    }
    coeffs.retain(|_, c| *c != 0);
    Ok(IsotropyElement {
        lattice: x.lattice.clone(),
        coeffs,
    })
}

/// Inner product with the subgroups as orthonormal basis.
pub fn inner(x: &IsotropyElement, y: &IsotropyElement) -> Result<i64, RingError> {
    if !x.same_lattice(y) {
        return Err(RingError::LatticeMismatch);
    }
    Ok(x.coeffs.iter().map(|(&i, &c)| c * y.coeff(i)).sum())
}

/// Diagonal evaluation <xH, H> = sum of x_I over I containing H.
pub fn diagonal(x: &IsotropyElement, h_index: usize) -> i64 {
    let lat = &x.lattice;
    x.coeffs
        .iter()
        .filter(|(&i, _)| lat.leq(h_index, i))
        .map(|(_, &c)| c)
        .sum()
}

/// Möbius inversion: the unique element with prescribed diagonal values
/// g(H) for every subgroup H, via x_I = sum_{H >= I} mu(I,H) g(H).
pub fn from_diagonal(lattice: Arc<SubgroupLattice>, g: &[i64]) -> IsotropyElement {
    assert_eq!(
        g.len(),
        lattice.len(),
        "need one diagonal value per subgroup"
    );
    let n = lattice.len();
    let mut coeffs = BTreeMap::new();
    for i in 0..n {
        let mut c = 0i64;
        for h in 0..n {
            if lattice.leq(i, h) {
                c += lattice.mobius(i, h) * g[h];
            }
        }
        if c != 0 {
            coeffs.insert(i, c);
        }
    }
    IsotropyElement { lattice, coeffs }
}

/// A validated quotient map P -> P/K on element indices, with the induced
/// correspondence between the two subgroup lattices.
#[derive(Clone)]
pub struct QuotientMap {
    source: Arc<SubgroupLattice>,
    target: Arc<SubgroupLattice>,
    elem_map: Vec<u16>,
    kernel_index: usize,
}

impl QuotientMap {
    /// Validate that `elem_map` is a surjective homomorphism from the
    /// source group onto the target group with the stated kernel.
    pub fn new(
        source: Arc<SubgroupLattice>,
        target: Arc<SubgroupLattice>,
        elem_map: Vec<u16>,
        kernel_index: usize,
    ) -> Result<QuotientMap, RingError> {
        let p = source.group();
        let q = target.group();
        if elem_map.len() != p.order() {
            return Err(RingError::BadQuotient {
                reason: format!(
                    "element map has length {}, group order {}",
                    elem_map.len(),
                    p.order()
                ),
            });
        }
        if elem_map.iter().any(|&x| x as usize >= q.order()) {
            return Err(RingError::BadQuotient {
                reason: "element map value out of range".into(),
            });
        }
        for a in p.elements() {
            for b in p.elements() {
                let lhs = elem_map[p.mul(a, b) as usize];
                let rhs = q.mul(elem_map[a as usize], elem_map[b as usize]);
                if lhs != rhs {
                    return Err(RingError::BadQuotient {
                        reason: format!("not a homomorphism at ({a},{b})"),
                    });
                }
            }
        }
        let mut hit = vec![false; q.order()];
        for &x in &elem_map {
            hit[x as usize] = true;
        }
        if !hit.iter().all(|&h| h) {
            return Err(RingError::BadQuotient {
                reason: "map is not surjective".into(),
            });
        }
        let kernel: Vec<u16> = p
            .elements()
            .filter(|&a| elem_map[a as usize] == q.identity())
            .collect();
        if source.subgroup(kernel_index).elements() != kernel.as_slice() {
            return Err(RingError::BadQuotient {
                reason: "stated kernel does not match the element map".into(),
            });
        }
        Ok(QuotientMap {
            source,
            target,
            elem_map,
            kernel_index,
        })
    }

    /// Build the quotient map from a lattice and a normal subgroup index,
    /// constructing the quotient group and its lattice.
    pub fn by_normal_subgroup(
        source: Arc<SubgroupLattice>,
        kernel_index: usize,
        bound: usize,
    ) -> Result<QuotientMap, RingError> {
        let (q, elem_map) =
            crate::group::quotient_group(source.group(), source.subgroup(kernel_index))
                .ok_or_else(|| RingError::BadQuotient {
                    reason: "subgroup is not normal".into(),
                })?;
        let target =
            crate::group::all_subgroups_bounded(&q, bound).map_err(|e| RingError::BadQuotient {
                reason: format!("quotient lattice: {e}"),
            })?;
        QuotientMap::new(source, target, elem_map, kernel_index)
    }

    pub fn source(&self) -> &Arc<SubgroupLattice> {
        &self.source
    }

    pub fn target(&self) -> &Arc<SubgroupLattice> {
        &self.target
    }

    pub fn kernel_index(&self) -> usize {
        self.kernel_index
    }

    pub fn map_element(&self, a: u16) -> u16 {
        self.elem_map[a as usize]
    }

    /// Image of a subgroup of the source in the target group.
    pub fn image_subgroup(&self, s: &Subgroup) -> Subgroup {
        let q: &FiniteGroup = self.target.group();
        let imgs: Vec<u16> = s
            .elements()
            .iter()
            .map(|&a| self.elem_map[a as usize])
            .collect();
        Subgroup::new(q, &imgs).expect("image of a subgroup is a subgroup")
    }

    /// Index in the target lattice of the image of source subgroup `i`.
    pub fn image_index(&self, i: usize) -> usize {
        let img = self.image_subgroup(self.source.subgroup(i));
        self.target
            .index_of(&img)
            .expect("target lattice is complete")
    }
}

/// Pushforward pi_K: sends the class of I to I/K when K <= I and to 0
/// otherwise, extended linearly.
pub fn pushforward(x: &IsotropyElement, pi: &QuotientMap) -> Result<IsotropyElement, RingError> {
    if !(Arc::ptr_eq(&x.lattice, &pi.source) || x.lattice == pi.source) {
        return Err(RingError::LatticeMismatch);
    }
    let k = pi.kernel_index;
    let mut coeffs: BTreeMap<usize, i64> = BTreeMap::new();
    for (&i, &c) in &x.coeffs {
        if x.lattice.leq(k, i) {
            let j = pi.image_index(i);
            *coeffs.entry(j).or_insert(0) += c;
        }
    }
    coeffs.retain(|_, c| *c != 0);
    Ok(IsotropyElement {
        lattice: pi.target.clone(),
        coeffs,
    })
}
