//! The generalized sign sigma per real irrep, the total sigma of a curve,
//! the integer contribution formula, cover contributions in a quotient
//! group, and the complete torus case.

use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::cyclotomic::Rat;
use crate::group::{all_subgroups_bounded, generated_subgroup, GroupError, SubgroupLattice};
use crate::rep::{fixed_dim, real_irreps, CharacterTable, EndoType, RealIrrep, RepError};
use crate::ring::{from_diagonal, ring_mul, IsotropyElement, RingError};
use crate::sublattice::{quotient_z2, sublattices_of_index, Sublattice2};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SigmaError {
    #[error("need one flag per real irrep: got {got}, expected {expected}")]
    IncompleteFlags { got: usize, expected: usize },
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Per-irrep flags: `true` means the linearized operator on that factor is
/// isotopic through equivariant isomorphisms to a complex isomorphism, so
/// its sigma is 1. Flags on C- and H-type irreps are forced true on
/// construction; the coerced indices are recorded.
#[derive(Clone, Debug)]
pub struct SigmaFlags {
    effective: Vec<bool>,
    coerced: Vec<usize>,
}

impl SigmaFlags {
    pub fn new(irreps: &[RealIrrep], requested: &[bool]) -> Result<SigmaFlags, SigmaError> {
        if requested.len() != irreps.len() {
            return Err(SigmaError::IncompleteFlags {
                got: requested.len(),
                expected: irreps.len(),
            });
        }
        let mut effective = requested.to_vec();
        let mut coerced = Vec::new();
        for (i, rho) in irreps.iter().enumerate() {
            if rho.endo_type != EndoType::R && !effective[i] {
                effective[i] = true;
                coerced.push(i);
            }
        }
        Ok(SigmaFlags { effective, coerced })
    }

    pub fn all(irreps: &[RealIrrep], value: bool) -> SigmaFlags {
        SigmaFlags::new(irreps, &vec![value; irreps.len()]).expect("lengths match")
    }

    pub fn flags(&self) -> &[bool] {
        &self.effective
    }

    /// Indices whose requested `false` was overridden because the irrep is
    /// C- or H-type (codimension 2 and 4 make those factors isotopic).
    pub fn coerced_indices(&self) -> &[usize] {
        &self.coerced
    }
}

/// sigma for one real irrep: 1*G when flagged isotopic (or C/H type),
/// otherwise the unique element with diagonal (-1)^{dim rho^H}.
pub fn sigma_rho(
    rho: &RealIrrep,
    flag: bool,
    lattice: &Arc<SubgroupLattice>,
) -> Result<IsotropyElement, SigmaError> {
    if flag || rho.endo_type != EndoType::R {
        return Ok(IsotropyElement::one(lattice.clone()));
    }
    let mut diag = Vec::with_capacity(lattice.len());
    for h in 0..lattice.len() {
        let d = fixed_dim(rho, lattice.subgroup(h))?;
        diag.push(if d % 2 == 0 { 1 } else { -1 });
    }
    Ok(from_diagonal(lattice.clone(), &diag))
}

/// Product of the per-irrep sigmas.
pub fn sigma_f(
    irreps: &[RealIrrep],
    flags: &SigmaFlags,
    lattice: &Arc<SubgroupLattice>,
) -> Result<IsotropyElement, SigmaError> {
    if flags.effective.len() != irreps.len() {
        return Err(SigmaError::IncompleteFlags {
            got: flags.effective.len(),
            expected: irreps.len(),
        });
    }
    let mut acc = IsotropyElement::one(lattice.clone());
    for (rho, &flag) in irreps.iter().zip(&flags.effective) {
        let s = sigma_rho(rho, flag, lattice)?;
        acc = ring_mul(&acc, &s)?;
    }
    Ok(acc)
}

/// An exact rational contribution, flagged when it is an integer.
/// Non-integrality is reported rather than raised: it signals inconsistent
/// input flags, not a library failure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Contribution {
    pub value: Rat,
    pub asserted_integer: bool,
}

impl Contribution {
    fn new(value: Rat) -> Contribution {
        Contribution {
            value,
            asserted_integer: value.is_integer(),
        }
    }

    pub fn integer(&self) -> Option<i64> {
        if self.asserted_integer {
            Some(self.value.to_integer() as i64)
        } else {
            None
        }
    }
}

/// The contribution of a curve with total sigma: <sigma, {1}> / |G|.
pub fn contribution(sigma: &IsotropyElement) -> Contribution {
    let lat = sigma.lattice();
    let n_trivial = sigma.coeff(lat.trivial_index());
    Contribution::new(Ratio::new(n_trivial as i128, lat.group().order() as i128))
}

/// A group together with its subgroup lattice and real irreps: everything
/// the sigma machinery needs, built once.
#[derive(Clone)]
pub struct GroupContext {
    pub lattice: Arc<SubgroupLattice>,
    pub table: CharacterTable,
    pub irreps: Vec<RealIrrep>,
}

impl GroupContext {
    pub fn new(table: CharacterTable, bound: usize) -> Result<GroupContext, SigmaError> {
        let lattice = all_subgroups_bounded(table.group(), bound)?;
        let irreps = real_irreps(&table)?;
        Ok(GroupContext {
            lattice,
            table,
            irreps,
        })
    }

    pub fn for_abelian(
        g: crate::group::FiniteGroup,
        bound: usize,
    ) -> Result<GroupContext, SigmaError> {
        let table = CharacterTable::for_abelian(g)?;
        GroupContext::new(table, bound)
    }

    pub fn sigma_f(&self, flags: &SigmaFlags) -> Result<IsotropyElement, SigmaError> {
        sigma_f(&self.irreps, flags, &self.lattice)
    }
}

/// Contribution of the cover with deck group Q, presented directly as a
/// finite group with flags per real irrep of Q. Identical machinery to
/// `contribution(sigma_f(..))`, exposed for quotients supplied without a
/// fundamental-group model.
pub fn cover_contribution(
    ctx: &GroupContext,
    flags: &SigmaFlags,
) -> Result<Contribution, SigmaError> {
    Ok(contribution(&ctx.sigma_f(flags)?))
}

/// The four sign inputs of the torus case: the sign of sigma_{rho_0} and
/// the isotopy flags of the three representations factoring through the
/// sign representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TorusCase {
    /// +1 or -1.
    pub sigma_rho0: i8,
    /// `true` = isotopic to complex, so sigma_{rho_i} = 1.
    pub flags: [bool; 3],
}

impl TorusCase {
    pub fn new(sigma_rho0: i8, flags: [bool; 3]) -> TorusCase {
        assert!(
            sigma_rho0 == 1 || sigma_rho0 == -1,
            "sigma_rho0 must be +1 or -1"
        );
        TorusCase { sigma_rho0, flags }
    }

    /// All 16 cases, for exhaustive checks.
    pub fn all() -> Vec<TorusCase> {
        let mut out = Vec::new();
        for s in [1i8, -1] {
            for bits in 0..8u8 {
                out.push(TorusCase::new(
                    s,
                    [bits & 1 != 0, bits & 2 != 0, bits & 4 != 0],
                ));
            }
        }
        out
    }
}

/// The kernels of the three sign-valued representations of Z^2, in the
/// paper's order: <2a,b>, <a,2b>, <a+b,a-b> (the last in HNF).
pub fn torus_sign_kernels() -> [Sublattice2; 3] {
    [
        Sublattice2 { a: 2, b: 0, d: 1 },
        Sublattice2 { a: 1, b: 0, d: 2 },
        Sublattice2 { a: 1, b: 1, d: 2 },
    ]
}

/// Contribution of the cover corresponding to one sublattice K, computed
/// directly in the quotient Z^2/K: push each relevant sigma_{rho_i} down,
/// multiply, and read off the trivial-subgroup coefficient over the index.
pub fn torus_contribution(case: &TorusCase, k: &Sublattice2) -> Result<Contribution, SigmaError> {
    let q = quotient_z2(k);
    let lat = all_subgroups_bounded(&q.group, q.group.order().max(1))?;
    let kernels = torus_sign_kernels();

    let mut prod = IsotropyElement::one(lat.clone()).scale(case.sigma_rho0 as i64);
    for (i, ki) in kernels.iter().enumerate() {
        if case.flags[i] || !ki.contains_lattice(k) {
            continue;
        }
        // Image of K_i in the quotient: generated by the projections of its
        // basis rows.
        let gens = [q.project([ki.a, ki.b]), q.project([0, ki.d])];
        let s_i = generated_subgroup(&q.group, &gens);
        let idx = lat.index_of(&s_i).expect("lattice is complete");
        let factor = IsotropyElement::from_coeffs(lat.clone(), [(lat.full_index(), 1), (idx, -2)]);
        prod = ring_mul(&prod, &factor)?;
    }
    Ok(contribution(&prod))
}

/// The torus table: contributions for every sublattice of index at most
/// `max_index`, keyed by HNF sublattice in a deterministic order.
pub fn torus_table(
    case: &TorusCase,
    max_index: i64,
) -> Result<Vec<(Sublattice2, Contribution)>, SigmaError> {
    assert!(max_index >= 1);
    let mut out = Vec::new();
    for n in 1..=max_index {
        for k in sublattices_of_index(n) {
            out.push((k, torus_contribution(case, &k)?));
        }
    }
    Ok(out)
}

/// `torus_table` with the sublattices split across worker threads; the
/// subproblems are independent and results merge deterministically in HNF
/// key order.
pub fn torus_table_threads(
    case: &TorusCase,
    max_index: i64,
    threads: usize,
) -> Result<Vec<(Sublattice2, Contribution)>, SigmaError> {
    assert!(max_index >= 1);
    let keys: Vec<Sublattice2> = (1..=max_index).flat_map(sublattices_of_index).collect();
    if threads <= 1 || keys.len() < 2 {
        return keys
            .into_iter()
            .map(|k| Ok((k, torus_contribution(case, &k)?)))
            .collect();
    }
    let chunk = keys.len().div_ceil(threads);
    let results: Vec<Vec<(Sublattice2, Contribution)>> = std::thread::scope(|scope| {
        let handles: Vec<_> = keys
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|k| torus_contribution(case, k).map(|c| (*k, c)))
                        .collect::<Result<Vec<_>, SigmaError>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("worker panicked"))
            .collect::<Vec<Result<Vec<_>, SigmaError>>>()
    })
    .into_iter()
    .collect::<Result<_, _>>()?;
    Ok(results.into_iter().flatten().collect())
}

/// Independent route to the same numbers: build the quotient group
/// abstractly, compute its character table and real irreps, transfer the
/// case flags through the representation kernels, and run
/// `cover_contribution`. Exercises characters, Frobenius-Schur, fixed_dim
/// and Möbius inversion instead of direct ring products.
pub fn torus_contribution_via_cover(
    case: &TorusCase,
    k: &Sublattice2,
) -> Result<Contribution, SigmaError> {
    let q = quotient_z2(k);
    let ctx = GroupContext::for_abelian(q.group.clone(), q.group.order().max(1))?;
    let kernels = torus_sign_kernels();

    let mut flags = Vec::with_capacity(ctx.irreps.len());
    for rho in &ctx.irreps {
        if rho.endo_type != EndoType::R {
            flags.push(true);
            continue;
        }
        // R-type characters of an abelian group are +-1 valued; the kernel
        // of rho pulls back to Z^2 as a sublattice of index 1 or 2.
        let chi = &ctx.table.chars()[rho.constituents[0]];
        let one = crate::cyclotomic::Cyc::one(1);
        let in_kernel = |v: [i64; 2]| chi.value(q.project(v)).eq_cyc(&one);
        if in_kernel([1, 0]) && in_kernel([0, 1]) {
            // Trivial character: this is rho_0.
            flags.push(case.sigma_rho0 == 1);
        } else {
            let i = (0..3)
                .find(|&i| {
                    let ki = kernels[i];
                    in_kernel([ki.a, ki.b]) && in_kernel([0, ki.d])
                })
                .expect("sign character pulls back to one of the three index-2 kernels");
            flags.push(case.flags[i]);
        }
    }
    let flags = SigmaFlags::new(&ctx.irreps, &flags)?;
    cover_contribution(&ctx, &flags)
}
