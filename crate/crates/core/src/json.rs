//! Serde payload and result types for the batch interface: groups,
//! character tables, flags, isotropy elements, index inputs, generating
//! functions, and oracle cases, plus the dyadic encoding used for box
//! enclosures.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclotomic::{rat, Cyc};
use crate::group::{abelian_group_bounded, build_group_bounded, FiniteGroup, GroupError, Subgroup};
use crate::index::{CurveData, KClass, OrbitData};
use crate::oracle::{ReferenceMap, VerifyCase, WeightAction, C64};
use crate::rep::{CharacterTable, ComplexCharacter, RepError};
use crate::ring::IsotropyElement;
use crate::sigma::{Contribution, GroupContext, SigmaError, SigmaFlags, TorusCase};
use crate::sublattice::Sublattice2;
use crate::taubes::{Caps, ClassLabel, GrStyle, Pairing};

#[derive(Debug, Error)]
pub enum PayloadError {
    #[error("{0}")]
    Group(#[from] GroupError),
    #[error("{0}")]
    Rep(#[from] RepError),
    #[error("{0}")]
    Sigma(#[from] SigmaError),
    #[error("invalid payload at {path}: {message}")]
    Invalid { path: String, message: String },
}

fn invalid(path: &str, message: impl Into<String>) -> PayloadError {
    PayloadError::Invalid {
        path: path.into(),
        message: message.into(),
    }
}

/// A group given either by an explicit multiplication table or as a direct
/// product of cyclic groups.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupInput {
    MulTable { mul_table: Vec<Vec<usize>> },
    Abelian { abelian: Vec<usize> },
}

impl GroupInput {
    pub fn build(&self, bound: usize) -> Result<FiniteGroup, PayloadError> {
        Ok(match self {
            GroupInput::MulTable { mul_table } => build_group_bounded(mul_table, bound)?,
            GroupInput::Abelian { abelian } => abelian_group_bounded(abelian, bound)?,
        })
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct RationalInput {
    pub num: i64,
    #[serde(default = "one_i64")]
    pub den: i64,
}

fn one_i64() -> i64 {
    1
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootOfUnityInput {
    pub order: usize,
    pub power: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RootTermInput {
    pub root_of_unity: RootOfUnityInput,
    pub coeff: RationalInput,
}

/// One character value: a plain integer, a Gaussian rational, or a sum of
/// rational multiples of roots of unity.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CharValueInput {
    Integer(i64),
    Gaussian {
        re_num: i64,
        re_den: i64,
        im_num: i64,
        im_den: i64,
    },
    Terms(Vec<RootTermInput>),
}

impl CharValueInput {
    pub fn to_cyc(&self, path: &str) -> Result<Cyc, PayloadError> {
        match self {
            CharValueInput::Integer(n) => Ok(Cyc::from_rat(1, rat(*n as i128, 1))),
            CharValueInput::Gaussian {
                re_num,
                re_den,
                im_num,
                im_den,
            } => {
                if *re_den == 0 || *im_den == 0 {
                    return Err(invalid(path, "zero denominator"));
                }
                let re = Cyc::from_rat(4, rat(*re_num as i128, *re_den as i128));
                let im = Cyc::root_of_unity(4, 1, rat(*im_num as i128, *im_den as i128));
                Ok(re.add(&im))
            }
            CharValueInput::Terms(ts) => {
                let mut acc = Cyc::zero(1);
                for t in ts {
                    if t.root_of_unity.order == 0 || t.coeff.den == 0 {
                        return Err(invalid(path, "zero order or denominator"));
                    }
                    acc = acc.add(&Cyc::root_of_unity(
                        t.root_of_unity.order,
                        t.root_of_unity.power,
                        rat(t.coeff.num as i128, t.coeff.den as i128),
                    ));
                }
                Ok(acc)
            }
        }
    }
}

/// Build a validated character table from JSON rows (one row per
/// character, one value per group element). Absent rows fall back to the
/// in-library abelian construction.
pub fn character_table_from_json(
    group: FiniteGroup,
    rows: Option<&[Vec<CharValueInput>]>,
) -> Result<CharacterTable, PayloadError> {
    match rows {
        None => Ok(CharacterTable::for_abelian(group)?),
        Some(rows) => {
            let mut chars = Vec::with_capacity(rows.len());
            for (i, row) in rows.iter().enumerate() {
                let values: Result<Vec<Cyc>, PayloadError> = row
                    .iter()
                    .enumerate()
                    .map(|(j, v)| v.to_cyc(&format!("table[{i}][{j}]")))
                    .collect();
                chars.push(ComplexCharacter::new(&group, values?)?);
            }
            Ok(CharacterTable::new(group, chars)?)
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlagInput {
    pub irrep: usize,
    pub complex_isotopic: bool,
}

/// Payload for `sigma`, `contribution`, and `covers`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SigmaPayload {
    pub group: GroupInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<CharValueInput>>>,
    pub flags: Vec<FlagInput>,
}

impl SigmaPayload {
    pub fn context_and_flags(
        &self,
        bound: usize,
    ) -> Result<(GroupContext, SigmaFlags), PayloadError> {
        let group = self.group.build(bound)?;
        let table = character_table_from_json(group, self.table.as_deref())?;
        let ctx = GroupContext::new(table, bound)?;
        let mut flags = vec![true; ctx.irreps.len()];
        let mut seen = vec![false; ctx.irreps.len()];
        for f in &self.flags {
            if f.irrep >= flags.len() {
                return Err(invalid(
                    "flags",
                    format!("irrep index {} out of range 0..{}", f.irrep, flags.len()),
                ));
            }
            if seen[f.irrep] {
                return Err(invalid(
                    "flags",
                    format!("duplicate flag for irrep {}", f.irrep),
                ));
            }
            seen[f.irrep] = true;
            flags[f.irrep] = f.complex_isotopic;
        }
        let flags = SigmaFlags::new(&ctx.irreps, &flags)?;
        Ok((ctx, flags))
    }
}

/// Payload for `torus`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TorusPayload {
    pub sigma_rho0: i8,
    pub flags: [bool; 3],
    pub max_index: i64,
}

impl TorusPayload {
    pub fn case(&self) -> Result<TorusCase, PayloadError> {
        if self.sigma_rho0 != 1 && self.sigma_rho0 != -1 {
            return Err(invalid("torus.sigma_rho0", "must be +1 or -1"));
        }
        if self.max_index < 1 {
            return Err(invalid("torus.max_index", "must be >= 1"));
        }
        Ok(TorusCase::new(self.sigma_rho0, self.flags))
    }
}

/// Isotropy elements on the wire: terms of subgroup element lists with
/// integer coefficients.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsotropyTermJson {
    pub subgroup: Vec<u16>,
    pub coeff: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IsotropyJson {
    pub terms: Vec<IsotropyTermJson>,
}

pub fn isotropy_to_json(x: &IsotropyElement) -> IsotropyJson {
    IsotropyJson {
        terms: x
            .coeffs()
            .iter()
            .map(|(&i, &c)| IsotropyTermJson {
                subgroup: x.lattice().subgroup(i).elements().to_vec(),
                coeff: c,
            })
            .collect(),
    }
}

pub fn isotropy_from_json(
    lattice: &std::sync::Arc<crate::group::SubgroupLattice>,
    element: &IsotropyJson,
) -> Result<IsotropyElement, PayloadError> {
    let terms = &element.terms;
    let mut coeffs = Vec::with_capacity(terms.len());
    for (n, t) in terms.iter().enumerate() {
        let s = Subgroup::new(lattice.group(), &t.subgroup)
            .ok_or_else(|| invalid(&format!("terms[{n}].subgroup"), "not a subgroup"))?;
        let i = lattice
            .index_of(&s)
            .ok_or_else(|| invalid(&format!("terms[{n}].subgroup"), "not in the lattice"))?;
        coeffs.push((i, t.coeff));
    }
    Ok(IsotropyElement::from_coeffs(lattice.clone(), coeffs))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ContributionJson {
    pub num: i64,
    pub den: i64,
    pub integer: bool,
}

pub fn contribution_to_json(c: &Contribution) -> ContributionJson {
    ContributionJson {
        num: *c.value.numer() as i64,
        den: *c.value.denom() as i64,
        integer: c.asserted_integer,
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SublatticeJson {
    pub basis: [[i64; 2]; 2],
    pub index: i64,
}

pub fn sublattice_to_json(k: &Sublattice2) -> SublatticeJson {
    SublatticeJson {
        basis: k.basis(),
        index: k.index(),
    }
}

/// Payload for `index`: either the free smooth-cover shortcut or explicit
/// cohomology inputs.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum IndexPayload {
    FreeSmooth { free_smooth: FreeSmoothInput },
    Curve { curve: CurveInput },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FreeSmoothInput {
    pub group: GroupInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<CharValueInput>>>,
    pub g: i64,
    pub n: i64,
    pub c1: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KClassJson {
    #[serde(default)]
    pub coeffs: BTreeMap<String, i64>,
}

impl KClassJson {
    pub fn to_kclass(&self, table: &CharacterTable, path: &str) -> Result<KClass, PayloadError> {
        let mut pairs = Vec::new();
        for (k, &v) in &self.coeffs {
            let i: usize = k
                .parse()
                .map_err(|_| invalid(path, format!("coefficient key '{k}' is not an index")))?;
            if i >= table.len() {
                return Err(invalid(path, format!("irreducible index {i} out of range")));
            }
            pairs.push((i, v));
        }
        Ok(KClass::from_coeffs(table, pairs))
    }
}

pub fn kclass_to_json(k: &KClass) -> KClassJson {
    KClassJson {
        coeffs: k
            .coeffs()
            .iter()
            .map(|(&i, &c)| (i.to_string(), c))
            .collect(),
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OrbitJson {
    pub stabilizer: Vec<u16>,
    pub c1_integral: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CurveInput {
    pub group: GroupInput,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<Vec<CharValueInput>>>,
    pub h0_tstar_ck: KClassJson,
    pub h0_tc: KClassJson,
    pub h0_k: KClassJson,
    pub n: i64,
    #[serde(default)]
    pub orbits: Vec<OrbitJson>,
}

impl CurveInput {
    pub fn to_curve_data(&self, table: &CharacterTable) -> Result<CurveData, PayloadError> {
        let mut orbits = Vec::with_capacity(self.orbits.len());
        for (i, o) in self.orbits.iter().enumerate() {
            let stab = Subgroup::new(table.group(), &o.stabilizer).ok_or_else(|| {
                invalid(&format!("curve.orbits[{i}].stabilizer"), "not a subgroup")
            })?;
            orbits.push(OrbitData {
                stabilizer: stab,
                c1_integral: o.c1_integral,
            });
        }
        Ok(CurveData {
            h0_tstar_ck: self.h0_tstar_ck.to_kclass(table, "curve.h0_tstar_ck")?,
            h0_tc: self.h0_tc.to_kclass(table, "curve.h0_tc")?,
            h0_k: self.h0_k.to_kclass(table, "curve.h0_k")?,
            n: self.n,
            orbits,
        })
    }
}

/// Payload for `taubes`: a Gr evaluation or a torus weight series.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum TaubesPayload {
    Gr {
        classes: Vec<ClassJson>,
        pairing: Vec<Vec<i64>>,
        #[serde(rename = "A")]
        a: Vec<i64>,
        convention: ConventionJson,
        caps: CapsJson,
    },
    WeightSeries {
        weight_series: WeightSeriesInput,
    },
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ConventionJson {
    Geometric,
    Binomial,
}

impl From<ConventionJson> for GrStyle {
    fn from(c: ConventionJson) -> GrStyle {
        match c {
            ConventionJson::Geometric => GrStyle::Geometric,
            ConventionJson::Binomial => GrStyle::Binomial,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ClassJson {
    pub genus: i64,
    pub beta_id: String,
    pub homology: Vec<i64>,
    pub c1: i64,
    /// The integer invariant n_{g,beta} for this class.
    pub n: i64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CapsJson {
    pub per_class: Vec<u32>,
    pub total: u32,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct WeightSeriesInput {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub p: ConventionJson,
    pub cap: u32,
}

pub fn classes_from_json(classes: &[ClassJson]) -> Vec<(ClassLabel, i64)> {
    classes
        .iter()
        .map(|c| {
            (
                ClassLabel {
                    genus: c.genus,
                    beta_id: c.beta_id.clone(),
                    homology: c.homology.clone(),
                    c1: c.c1,
                },
                c.n,
            )
        })
        .collect()
}

pub fn pairing_from_json(matrix: &[Vec<i64>]) -> Result<Pairing, PayloadError> {
    let n = matrix.len();
    if matrix.iter().any(|r| r.len() != n) {
        return Err(invalid("pairing", "matrix must be square"));
    }
    for i in 0..n {
        for j in 0..n {
            if matrix[i][j] != matrix[j][i] {
                return Err(invalid("pairing", "matrix must be symmetric"));
            }
        }
    }
    Ok(Pairing::new(matrix.to_vec()))
}

pub fn caps_from_json(c: &CapsJson) -> Caps {
    Caps {
        per_class: c.per_class.clone(),
        total: c.total,
    }
}

/// Payload for `verify`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VerifyPayload {
    pub m: u32,
    pub w_domain: u32,
    pub w_target: u32,
    pub reference: ReferenceJson,
    #[serde(default = "default_max_degree")]
    pub max_degree: u32,
    #[serde(default = "default_cutoff")]
    pub cutoff: f64,
    #[serde(default = "default_outer")]
    pub outer: f64,
    #[serde(default = "default_min_box")]
    pub min_box: f64,
    #[serde(default = "default_quadrature")]
    pub quadrature_points: u32,
    #[serde(default)]
    pub seeds: Vec<u64>,
}

fn default_max_degree() -> u32 {
    4
}

fn default_cutoff() -> f64 {
    1.0
}

fn default_outer() -> f64 {
    2.0
}

fn default_min_box() -> f64 {
    1.0 / (1u64 << 30) as f64
}

fn default_quadrature() -> u32 {
    8
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ReferenceJson {
    Named(String),
    Scalar { scalar: [f64; 2] },
}

impl VerifyPayload {
    pub fn to_case(&self, fallback_seeds: &[u64]) -> Result<VerifyCase, PayloadError> {
        if self.m == 0 {
            return Err(invalid("verify.m", "group order must be >= 1"));
        }
        let reference = match &self.reference {
            ReferenceJson::Named(s) if s == "conjugation" => ReferenceMap::Conjugation,
            ReferenceJson::Named(s) if s == "scalar" => {
                ReferenceMap::ComplexScalar(C64::new(1.0, 0.0))
            }
            ReferenceJson::Named(s) => {
                return Err(invalid(
                    "verify.reference",
                    format!("unknown reference '{s}'"),
                ))
            }
            ReferenceJson::Scalar { scalar } => {
                ReferenceMap::ComplexScalar(C64::new(scalar[0], scalar[1]))
            }
        };
        let seeds = if self.seeds.is_empty() {
            fallback_seeds.to_vec()
        } else {
            self.seeds.clone()
        };
        if seeds.is_empty() {
            return Err(invalid("verify.seeds", "at least one seed is required"));
        }
        if self.outer <= self.cutoff {
            return Err(invalid(
                "verify.outer",
                "outer radius must exceed the cutoff",
            ));
        }
        Ok(VerifyCase {
            action: WeightAction::new(self.m, self.w_domain, self.w_target),
            reference,
            max_degree: self.max_degree,
            cutoff: self.cutoff,
            outer: self.outer,
            min_box: self.min_box,
            quadrature_points: self.quadrature_points,
            seeds,
        })
    }
}

/// Exact dyadic rational m * 2^e for box coordinates on the wire.
#[derive(Clone, Copy, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct Dyadic {
    pub mantissa: i64,
    pub exponent: i32,
}

pub fn to_dyadic(x: f64) -> Dyadic {
    if x == 0.0 {
        return Dyadic {
            mantissa: 0,
            exponent: 0,
        };
    }
    let mut m = x;
    let mut e = 0i32;
    while m.fract() != 0.0 {
        m *= 2.0;
        e -= 1;
    }
    while m != 0.0 && (m / 2.0).fract() == 0.0 && e < 0 {
        m /= 2.0;
        e += 1;
    }
    Dyadic {
        mantissa: m as i64,
        exponent: e,
    }
}

impl Dyadic {
    pub fn to_f64(self) -> f64 {
        self.mantissa as f64 * (2.0f64).powi(self.exponent)
    }
}
