//! Independent numerical verification of the sigma counting rule on the
//! one-complex-dimensional local model: build an equivariant normally
//! complex perturbation of a reference linear map, locate every zero with
//! a certified winding number by recursive box subdivision, classify zeros
//! by isotropy, and compare the signed counts with the sigma prediction.

use std::sync::Arc;

use thiserror::Error;

use crate::group::{abelian_group_bounded, Subgroup, SubgroupLattice};
use crate::ring::{diagonal, IsotropyElement};
use crate::sigma::{sigma_rho, GroupContext, SigmaError};

#[derive(Debug, Error)]
pub enum OracleError {
    #[error("no equivariant monomial of degree <= {max_degree} for weights ({w_domain},{w_target}) mod {m}")]
    NoEquivariantMonomial {
        m: u32,
        w_domain: u32,
        w_target: u32,
        max_degree: u32,
    },
    #[error("conjugation reference requires -w_domain = w_target (mod m)")]
    IncompatibleConjugation,
    #[error("scalar reference requires w_domain = w_target (mod m) and a nonzero scalar")]
    IncompatibleScalar,
    #[error("section vanishes on or too near the outer boundary; jitter the radius")]
    OuterBoundaryZero,
    #[error("winding number inconclusive at min_box near ({x}, {y}); refusing to guess")]
    Inconclusive { x: f64, y: f64 },
    #[error("oracle count disagrees with the sigma prediction: predicted {predicted}, counted {counted}")]
    Mismatch { predicted: String, counted: String },
    #[error("orbit symmetry violated: zero at ({x}, {y}) has no rotated partner of equal degree")]
    OrbitAsymmetry { x: f64, y: f64 },
    #[error(transparent)]
    Sigma(#[from] SigmaError),
}

/// Minimal complex arithmetic for the oracle's float evaluations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct C64 {
    pub re: f64,
    pub im: f64,
}

impl C64 {
    pub const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

    pub fn new(re: f64, im: f64) -> C64 {
        C64 { re, im }
    }

    pub fn add(self, o: C64) -> C64 {
        C64::new(self.re + o.re, self.im + o.im)
    }

    pub fn sub(self, o: C64) -> C64 {
        C64::new(self.re - o.re, self.im - o.im)
    }

    pub fn mul(self, o: C64) -> C64 {
        C64::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }

    pub fn scale(self, k: f64) -> C64 {
        C64::new(self.re * k, self.im * k)
    }

    pub fn conj(self) -> C64 {
        C64::new(self.re, -self.im)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    pub fn arg(self) -> f64 {
        self.im.atan2(self.re)
    }

    pub fn powu(self, k: u32) -> C64 {
        let mut acc = C64::new(1.0, 0.0);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }
}

/// The cyclic weight action: Z/m acts on the domain copy of C with weight
/// `w_domain` (the generator rotates by exp(2 pi i w_domain / m)) and on
/// the target copy with weight `w_target`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeightAction {
    pub m: u32,
    pub w_domain: u32,
    pub w_target: u32,
}

impl WeightAction {
    pub fn new(m: u32, w_domain: u32, w_target: u32) -> WeightAction {
        assert!(m >= 1);
        WeightAction {
            m,
            w_domain: w_domain % m,
            w_target: w_target % m,
        }
    }

    /// Elements of Z/m acting trivially on the domain.
    pub fn domain_kernel(&self) -> Vec<u16> {
        (0..self.m as u16)
            .filter(|&j| (j as u64 * self.w_domain as u64) % self.m as u64 == 0)
            .collect()
    }

    /// Whether the antilinear reference z -> conj(z) is equivariant:
    /// -w_domain = w_target (mod m).
    pub fn conjugation_compatible(&self) -> bool {
        (self.w_domain + self.w_target) % self.m == 0
    }

    /// Whether complex scalars are equivariant: w_domain = w_target.
    pub fn scalar_compatible(&self) -> bool {
        self.w_domain == self.w_target
    }

    /// Whether every element acts on the domain by a quarter-turn
    /// multiple, so rotations map the dyadic box partition to itself.
    pub fn is_box_exact(&self) -> bool {
        (4 * self.w_domain as u64) % self.m as u64 == 0
    }

    /// Rotation of a domain point by group element j; exact for quarter
    /// turns so that orbit checks match box centers bitwise.
    pub fn rotate_domain(&self, j: u16, z: C64) -> C64 {
        let q = (j as u64 * self.w_domain as u64) % self.m as u64;
        // q / m in quarter turns?
        let num = 4 * q;
        if num % self.m as u64 == 0 {
            match num / self.m as u64 {
                0 => z,
                1 => C64::new(-z.im, z.re),
                2 => C64::new(-z.re, -z.im),
                3 => C64::new(z.im, -z.re),
                _ => unreachable!(),
            }
        } else {
            let t = 2.0 * std::f64::consts::PI * q as f64 / self.m as f64;
            C64::new(t.cos(), t.sin()).mul(z)
        }
    }
}

/// All monomial exponents k in 1..=max_degree with w_domain * k = w_target
/// (mod m): the equivariant monomials z^k of the action.
pub fn equivariant_monomials(action: &WeightAction, max_degree: u32) -> Vec<u32> {
    (1..=max_degree)
        .filter(|&k| {
            (action.w_domain as u64 * k as u64) % action.m as u64 == action.w_target as u64
        })
        .collect()
}

/// The equivariant linear reference map being perturbed.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ReferenceMap {
    /// z -> conj(z); degree -1.
    Conjugation,
    /// z -> c z; degree +1.
    ComplexScalar(C64),
}

impl ReferenceMap {
    pub fn eval(&self, z: C64) -> C64 {
        match self {
            ReferenceMap::Conjugation => z.conj(),
            ReferenceMap::ComplexScalar(c) => c.mul(z),
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            ReferenceMap::Conjugation => -1,
            ReferenceMap::ComplexScalar(_) => 1,
        }
    }

    fn modulus_factor(&self) -> f64 {
        match self {
            ReferenceMap::Conjugation => 1.0,
            ReferenceMap::ComplexScalar(c) => c.abs(),
        }
    }
}

/// A piecewise-linear radial profile: complex node values at increasing
/// radii, constant beyond the last node. Linear splines keep the Lipschitz
/// data exact; degree counting needs no more smoothness.
#[derive(Clone, Debug)]
pub struct RadialSpline {
    radii: Vec<f64>,
    values: Vec<C64>,
}

impl RadialSpline {
    pub fn new(radii: Vec<f64>, values: Vec<C64>) -> RadialSpline {
        assert_eq!(radii.len(), values.len());
        assert!(radii.windows(2).all(|w| w[0] < w[1]));
        assert!(!radii.is_empty());
        RadialSpline { radii, values }
    }

    pub fn eval(&self, r: f64) -> C64 {
        if r <= self.radii[0] {
            return self.values[0];
        }
        for w in 0..self.radii.len() - 1 {
            let (r0, r1) = (self.radii[w], self.radii[w + 1]);
            if r <= r1 {
                let t = (r - r0) / (r1 - r0);
                return self.values[w]
                    .scale(1.0 - t)
                    .add(self.values[w + 1].scale(t));
            }
        }
        *self.values.last().unwrap()
    }

    /// Upper bound on |value| anywhere.
    pub fn sup(&self) -> f64 {
        self.values.iter().map(|v| v.abs()).fold(0.0, f64::max)
    }

    /// Upper bound on |d/dr| anywhere.
    pub fn slope_bound(&self) -> f64 {
        let mut b: f64 = 0.0;
        for w in 0..self.radii.len() - 1 {
            let s =
                self.values[w + 1].sub(self.values[w]).abs() / (self.radii[w + 1] - self.radii[w]);
            b = b.max(s);
        }
        b
    }
}

/// An equivariant normally complex perturbation of the reference map:
/// s(z) = ramp(|z|) D(z) + sum_j coeff_j(|z|) z^{k_j}, with G-invariant
/// radial coefficients supported inside the cutoff radius. Outside the
/// cutoff, s equals D exactly, so the |s - D| < |D|/2 approximation
/// condition holds on the nose.
#[derive(Clone, Debug)]
pub struct NormallyComplexSection {
    pub action: WeightAction,
    pub reference: ReferenceMap,
    pub cutoff_radius: f64,
    pub monomial_powers: Vec<u32>,
    ramp: RadialSpline,
    coeffs: Vec<RadialSpline>,
    pub seed: u64,
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

fn unit_f64(x: u64) -> f64 {
    (x >> 11) as f64 / (1u64 << 53) as f64
}

/// Build a deterministic generic section for the given seed.
pub fn build_section(
    action: WeightAction,
    reference: ReferenceMap,
    max_degree: u32,
    cutoff_radius: f64,
    seed: u64,
) -> Result<NormallyComplexSection, OracleError> {
    match reference {
        ReferenceMap::Conjugation => {
            if !action.conjugation_compatible() {
                return Err(OracleError::IncompatibleConjugation);
            }
        }
        ReferenceMap::ComplexScalar(c) => {
            if !action.scalar_compatible() || c.abs() == 0.0 {
                return Err(OracleError::IncompatibleScalar);
            }
        }
    }
    let powers = equivariant_monomials(&action, max_degree);
    if powers.is_empty() {
        return Err(OracleError::NoEquivariantMonomial {
            m: action.m,
            w_domain: action.w_domain,
            w_target: action.w_target,
            max_degree,
        });
    }
    assert!(cutoff_radius > 0.0);

    // Ramp from the interior polynomial regime to the reference map:
    // 0 on [0, cutoff/2], linear to 1 at the cutoff, 1 beyond.
    let ramp = RadialSpline::new(
        vec![0.0, cutoff_radius / 2.0, cutoff_radius],
        vec![C64::ZERO, C64::ZERO, C64::new(1.0, 0.0)],
    );

    let mut state = seed ^ 0xec0_u64.rotate_left(17);
    let mut coeffs = Vec::with_capacity(powers.len());
    for (j, &k) in powers.iter().enumerate() {
        let radii = vec![
            0.0,
            cutoff_radius / 4.0,
            cutoff_radius / 2.0,
            0.75 * cutoff_radius,
            cutoff_radius,
        ];
        let mut values = Vec::with_capacity(radii.len());
        for (node, _) in radii.iter().enumerate() {
            let mag_u = unit_f64(splitmix64(&mut state));
            let phase = 2.0 * std::f64::consts::PI * unit_f64(splitmix64(&mut state));
            // The lowest monomial keeps a solidly nonzero value at the
            // origin so the origin winding is certified quickly; every
            // coefficient dies at the cutoff.
            let mag = if node + 1 == radii.len() {
                0.0
            } else if j == 0 && node == 0 {
                0.5 + 0.5 * mag_u
            } else {
                0.8 * mag_u / (1.0 + k as f64)
            };
            values.push(C64::new(phase.cos(), phase.sin()).scale(mag));
        }
        coeffs.push(RadialSpline::new(radii, values));
    }

    Ok(NormallyComplexSection {
        action,
        reference,
        cutoff_radius,
        monomial_powers: powers,
        ramp,
        coeffs,
        seed,
    })
}

impl NormallyComplexSection {
    #[cfg(test)]
    pub(crate) fn from_parts(
        action: WeightAction,
        reference: ReferenceMap,
        cutoff_radius: f64,
        monomial_powers: Vec<u32>,
        ramp: RadialSpline,
        coeffs: Vec<RadialSpline>,
    ) -> NormallyComplexSection {
        NormallyComplexSection {
            action,
            reference,
            cutoff_radius,
            monomial_powers,
            ramp,
            coeffs,
            seed: 0,
        }
    }

    pub fn eval(&self, z: C64) -> C64 {
        let r = z.abs();
        let mut out = self.reference.eval(z).mul(self.ramp.eval(r));
        for (spline, &k) in self.coeffs.iter().zip(&self.monomial_powers) {
            out = out.add(spline.eval(r).mul(z.powu(k)));
        }
        out
    }

    /// Lipschitz bound for s on the disk of radius `radius`.
    pub fn lipschitz_bound(&self, radius: f64) -> f64 {
        let d_mod = self.reference.modulus_factor();
        let mut l = self.ramp.slope_bound() * d_mod * radius + d_mod;
        for (spline, &k) in self.coeffs.iter().zip(&self.monomial_powers) {
            let rk = radius.powi(k as i32);
            let rk1 = if k >= 1 {
                radius.powi(k as i32 - 1)
            } else {
                0.0
            };
            l += spline.slope_bound() * rk + k as f64 * spline.sup() * rk1;
        }
        l
    }

    /// Sampled check of the approximation condition |s - D| < |D|/2 on the
    /// annulus between the cutoff and `outer_radius`, padded by the
    /// Lipschitz bound of s - D between samples.
    pub fn verify_approximation_bound(&self, outer_radius: f64, samples: usize) -> bool {
        let l = self.lipschitz_bound(outer_radius) + self.reference.modulus_factor();
        let d_mod = self.reference.modulus_factor();
        let mut r = self.cutoff_radius;
        let dr = (outer_radius - self.cutoff_radius) / samples as f64;
        while r <= outer_radius + 1e-12 {
            let circumference = 2.0 * std::f64::consts::PI * r;
            let n = (circumference / dr).ceil().max(8.0) as usize;
            for i in 0..n {
                let t = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                let z = C64::new(r * t.cos(), r * t.sin());
                let gap = self.eval(z).sub(self.reference.eval(z)).abs();
                let pad = l * (dr.max(circumference / n as f64));
                if gap + pad >= 0.5 * d_mod * r {
                    // Padding too coarse or the bound genuinely fails;
                    // only a true failure survives refinement.
                    if gap >= 0.5 * d_mod * r {
                        return false;
                    }
                }
            }
            r += dr;
        }
        true
    }
}

/// An axis-aligned square box with dyadic center and half-width.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxRegion {
    pub cx: f64,
    pub cy: f64,
    pub half: f64,
}

impl BoxRegion {
    pub fn corners(&self) -> [C64; 4] {
        [
            C64::new(self.cx - self.half, self.cy - self.half),
            C64::new(self.cx + self.half, self.cy - self.half),
            C64::new(self.cx + self.half, self.cy + self.half),
            C64::new(self.cx - self.half, self.cy + self.half),
        ]
    }

    pub fn contains_origin(&self) -> bool {
        self.cx.abs() <= self.half && self.cy.abs() <= self.half
    }

    fn is_origin_centered(&self) -> bool {
        self.cx == 0.0 && self.cy == 0.0
    }

    /// Children tiling this box. An origin-centered box splits into a
    /// half-size origin-centered child plus a ring of twelve quarter-size
    /// boxes, so the origin is always a box center and never a corner.
    fn split(&self) -> Vec<BoxRegion> {
        if self.is_origin_centered() {
            let h2 = self.half / 2.0;
            let h4 = self.half / 4.0;
            let q3 = 3.0 * h4;
            let mut out = vec![BoxRegion {
                cx: 0.0,
                cy: 0.0,
                half: h2,
            }];
            for &x in &[-q3, -h4, h4, q3] {
                out.push(BoxRegion {
                    cx: x,
                    cy: q3,
                    half: h4,
                });
                out.push(BoxRegion {
                    cx: x,
                    cy: -q3,
                    half: h4,
                });
            }
            for &y in &[-h4, h4] {
                out.push(BoxRegion {
                    cx: -q3,
                    cy: y,
                    half: h4,
                });
                out.push(BoxRegion {
                    cx: q3,
                    cy: y,
                    half: h4,
                });
            }
            out
        } else {
            let h = self.half / 2.0;
            [(-h, -h), (h, -h), (-h, h), (h, h)]
                .iter()
                .map(|&(dx, dy)| BoxRegion {
                    cx: self.cx + dx,
                    cy: self.cy + dy,
                    half: h,
                })
                .collect()
        }
    }
}

enum WindingOutcome {
    Ok(i64),
    /// |s| could not be certified positive on the boundary.
    BoundaryNearZero,
}

/// Certified winding number of s around the box boundary. Each segment is
/// refined until the Lipschitz variation is at most half the smaller
/// endpoint modulus; then the segment's true argument change equals the
/// principal difference, and the sum is an exact multiple of 2 pi up to
/// float roundoff. The integer is accepted only inside the 0.25 * 2 pi
/// window.
fn certified_winding(
    s: &NormallyComplexSection,
    bx: &BoxRegion,
    lipschitz: f64,
    initial_segments: u32,
) -> WindingOutcome {
    let corners = bx.corners();
    let mut total_arg = 0.0f64;
    let min_seg = bx.half * 1e-9;
    for e in 0..4 {
        let a = corners[e];
        let b = corners[(e + 1) % 4];
        let edge = b.sub(a);
        let edge_len = edge.abs();
        // Work stack of (t0, t1, v0, v1).
        let n0 = initial_segments.max(1);
        let mut stack: Vec<(f64, f64, C64, C64)> = Vec::new();
        let mut samples: Vec<(f64, C64)> = (0..=n0)
            .map(|i| {
                let t = i as f64 / n0 as f64;
                (t, s.eval(a.add(edge.scale(t))))
            })
            .collect();
        samples.reverse();
        for w in 0..n0 as usize {
            let (t1, v1) = samples[w];
            let (t0, v0) = samples[w + 1];
            stack.push((t0, t1, v0, v1));
        }
        while let Some((t0, t1, v0, v1)) = stack.pop() {
            let seg_len = edge_len * (t1 - t0);
            let floor = v0.abs().min(v1.abs());
            if lipschitz * seg_len <= 0.5 * floor && floor > 0.0 {
                total_arg += v1.mul(C64::new(v0.re, -v0.im)).arg();
                continue;
            }
            if seg_len < min_seg {
                return WindingOutcome::BoundaryNearZero;
            }
            let tm = 0.5 * (t0 + t1);
            let vm = s.eval(a.add(edge.scale(tm)));
            stack.push((tm, t1, vm, v1));
            stack.push((t0, tm, v0, vm));
        }
    }
    let turns = total_arg / (2.0 * std::f64::consts::PI);
    let rounded = turns.round();
    if (turns - rounded).abs() < 0.25 {
        WindingOutcome::Ok(rounded as i64)
    } else {
        WindingOutcome::BoundaryNearZero
    }
}

/// One certified zero cluster: its enclosure, local degree, and the index
/// of its isotropy subgroup in the report's lattice.
#[derive(Clone, Debug)]
pub struct ZeroRecord {
    pub enclosure: BoxRegion,
    pub local_degree: i64,
    pub isotropy_index: usize,
}

/// The full output of a zero search.
#[derive(Clone, Debug)]
pub struct ZeroReport {
    pub zeros: Vec<ZeroRecord>,
    pub outer_winding: i64,
    /// Outer winding minus the sum of local degrees; 0 on every
    /// successful run.
    pub residual_winding: i64,
    pub sigma_hat: IsotropyElement,
    pub lattice: Arc<SubgroupLattice>,
    pub seed: u64,
}

/// Locate and classify all zeros of the section inside the outer box by
/// recursive subdivision with certified winding numbers.
pub fn find_zeros(
    s: &NormallyComplexSection,
    outer_radius: f64,
    min_box: f64,
    quadrature_points: u32,
) -> Result<ZeroReport, OracleError> {
    assert!(
        outer_radius > s.cutoff_radius,
        "outer radius must exceed the cutoff"
    );
    assert!(min_box > 0.0);
    let group = abelian_group_bounded(&[s.action.m as usize], s.action.m.max(1) as usize)
        .expect("cyclic group");
    let lattice = crate::group::all_subgroups_bounded(&group, s.action.m.max(1) as usize)
        .expect("cyclic lattice");

    let kernel = Subgroup::new(&group, &s.action.domain_kernel()).expect("kernel is a subgroup");
    let kernel_index = lattice.index_of(&kernel).expect("lattice is complete");
    let full_index = lattice.full_index();

    let root = BoxRegion {
        cx: 0.0,
        cy: 0.0,
        half: outer_radius,
    };
    let lipschitz = s.lipschitz_bound(outer_radius * std::f64::consts::SQRT_2 + 1.0);

    let outer_winding = match certified_winding(s, &root, lipschitz, quadrature_points.max(8)) {
        WindingOutcome::Ok(w) => w,
        WindingOutcome::BoundaryNearZero => return Err(OracleError::OuterBoundaryZero),
    };

    let mut zeros: Vec<ZeroRecord> = Vec::new();
    let mut queue: Vec<BoxRegion> = vec![root];
    while let Some(bx) = queue.pop() {
        let at_floor = bx.half <= min_box;
        let winding = if bx.half == root.half {
            Some(outer_winding)
        } else {
            match certified_winding(s, &bx, lipschitz, quadrature_points.max(4)) {
                WindingOutcome::Ok(w) => Some(w),
                WindingOutcome::BoundaryNearZero => None,
            }
        };
        match winding {
            Some(0) if !bx.is_origin_centered() => {}
            Some(w) if at_floor => {
                // Origin boxes are kept even at degree 0: the origin is a
                // structural zero of every equivariant section.
                let isotropy_index = if bx.is_origin_centered() {
                    full_index
                } else {
                    kernel_index
                };
                if w != 0 || bx.is_origin_centered() {
                    zeros.push(ZeroRecord {
                        enclosure: bx,
                        local_degree: w,
                        isotropy_index,
                    });
                }
            }
            Some(_) => queue.extend(bx.split()),
            None if at_floor => {
                return Err(OracleError::Inconclusive { x: bx.cx, y: bx.cy });
            }
            None => queue.extend(bx.split()),
        }
    }

    let degree_sum: i64 = zeros.iter().map(|z| z.local_degree).sum();
    let residual_winding = outer_winding - degree_sum;

    let mut counts: std::collections::BTreeMap<usize, i64> = std::collections::BTreeMap::new();
    for z in &zeros {
        *counts.entry(z.isotropy_index).or_insert(0) += z.local_degree;
    }
    let sigma_hat = IsotropyElement::from_coeffs(lattice.clone(), counts);

    Ok(ZeroReport {
        zeros,
        outer_winding,
        residual_winding,
        sigma_hat,
        lattice,
        seed: s.seed,
    })
}

/// Algebraic count of zeros on the H-fixed locus: +1 when the fixed locus
/// is the origin alone (the empty determinant convention), the full degree
/// when H acts trivially on the domain.
pub fn fixed_stratum_count(s: &NormallyComplexSection, h: &Subgroup, outer_winding: i64) -> i64 {
    let m = s.action.m as u64;
    let fixes_domain = h
        .elements()
        .iter()
        .all(|&j| (j as u64 * s.action.w_domain as u64) % m == 0);
    if fixes_domain {
        outer_winding
    } else {
        1
    }
}

/// `fixed_stratum_count` certifying its own outer winding on the box of
/// half-width `outer_radius`.
pub fn fixed_stratum_count_at(
    s: &NormallyComplexSection,
    h: &Subgroup,
    outer_radius: f64,
    quadrature_points: u32,
) -> Result<i64, OracleError> {
    let root = BoxRegion {
        cx: 0.0,
        cy: 0.0,
        half: outer_radius,
    };
    let lipschitz = s.lipschitz_bound(outer_radius * std::f64::consts::SQRT_2 + 1.0);
    match certified_winding(s, &root, lipschitz, quadrature_points.max(8)) {
        WindingOutcome::Ok(w) => Ok(fixed_stratum_count(s, h, w)),
        WindingOutcome::BoundaryNearZero => Err(OracleError::OuterBoundaryZero),
    }
}

/// Orbit symmetry of a zero report. For quarter-turn actions the dyadic
/// partition is group-invariant and the subdivision mirrors exactly, so
/// every off-origin zero must have a rotated partner of equal degree. For
/// other rotation angles the partition cannot be group-invariant (a
/// cancelling pair may be resolved on one side of an orbit and dropped as
/// a winding-zero box on another), so the certifiable statement is the
/// aggregate one: the total degree in each isotropy class is divisible by
/// the orbit size.
pub fn check_orbit_symmetry(
    s: &NormallyComplexSection,
    report: &ZeroReport,
) -> Result<(), OracleError> {
    let kernel_size = s.action.domain_kernel().len() as u32;
    let orbit = s.action.m / kernel_size;
    if s.action.is_box_exact() {
        for z in &report.zeros {
            if z.enclosure.is_origin_centered() {
                continue;
            }
            let c = C64::new(z.enclosure.cx, z.enclosure.cy);
            for j in 1..orbit as u16 {
                let rc = s.action.rotate_domain(j, c);
                let found = report.zeros.iter().any(|w| {
                    let tol = 2.0 * (z.enclosure.half + w.enclosure.half);
                    w.local_degree == z.local_degree
                        && (w.enclosure.cx - rc.re).abs() <= tol
                        && (w.enclosure.cy - rc.im).abs() <= tol
                });
                if !found {
                    return Err(OracleError::OrbitAsymmetry {
                        x: z.enclosure.cx,
                        y: z.enclosure.cy,
                    });
                }
            }
        }
    }
    let mut free_total = 0i64;
    for z in &report.zeros {
        if !z.enclosure.is_origin_centered() {
            free_total += z.local_degree;
        }
    }
    if free_total % orbit as i64 != 0 {
        return Err(OracleError::OrbitAsymmetry {
            x: f64::NAN,
            y: f64::NAN,
        });
    }
    Ok(())
}

/// A complete verification case: the weight action, the reference map, and
/// the zero-search parameters.
#[derive(Clone, Debug)]
pub struct VerifyCase {
    pub action: WeightAction,
    pub reference: ReferenceMap,
    pub max_degree: u32,
    pub cutoff: f64,
    pub outer: f64,
    pub min_box: f64,
    pub quadrature_points: u32,
    pub seeds: Vec<u64>,
}

/// The comparison record of a successful verification.
#[derive(Debug)]
pub struct VerifyOutcome {
    pub sigma_predicted: IsotropyElement,
    pub reports: Vec<ZeroReport>,
}

/// Run the oracle over every seed and check, per run: sigma_hat equals the
/// sigma-calculus prediction element by element, the diagonal of sigma_hat
/// at every subgroup equals the fixed-stratum count, the residual winding
/// vanishes, and zeros respect orbit symmetry.
pub fn verify_sigma(case: &VerifyCase) -> Result<VerifyOutcome, OracleError> {
    let m = case.action.m as usize;
    let group = abelian_group_bounded(&[m], m.max(1)).expect("cyclic group");
    let ctx = GroupContext::for_abelian(group.clone(), m.max(1))?;
    let lattice = &ctx.lattice;

    // The domain copy of C realifies the weight-w_domain character; its
    // real irrep carries the sign data of the reference map.
    let flag = match case.reference {
        ReferenceMap::Conjugation => false,
        ReferenceMap::ComplexScalar(_) => true,
    };
    let rho = ctx
        .irreps
        .iter()
        .find(|r| {
            r.constituents.iter().any(|&ci| {
                let chi = &ctx.table.chars()[ci];
                (0..m as u16).all(|j| {
                    let expect = crate::cyclotomic::Cyc::root_of_unity(
                        m,
                        (j as i64 * case.action.w_domain as i64) % m as i64,
                        crate::cyclotomic::rat(1, 1),
                    );
                    chi.value(j).eq_cyc(&expect)
                })
            })
        })
        .expect("the weight character appears in the table");
    let sigma_predicted = sigma_rho(rho, flag, lattice)?;

    let mut reports = Vec::new();
    for &seed in &case.seeds {
        let section = build_section(
            case.action,
            case.reference,
            case.max_degree,
            case.cutoff,
            seed,
        )?;
        debug_assert!(section.verify_approximation_bound(case.outer, 32));
        // Retry with a slightly larger outer radius if a zero sits on the
        // boundary; dyadic steps keep box coordinates exact.
        let mut report = None;
        for jitter in 0..4 {
            let outer = case.outer + case.outer * jitter as f64 / 32.0;
            match find_zeros(&section, outer, case.min_box, case.quadrature_points) {
                Ok(r) => {
                    report = Some(r);
                    break;
                }
                Err(OracleError::OuterBoundaryZero) if jitter + 1 < 4 => continue,
                Err(e) => return Err(e),
            }
        }
        let report = report.ok_or(OracleError::OuterBoundaryZero)?;

        if report.residual_winding != 0 {
            return Err(OracleError::Mismatch {
                predicted: "residual winding 0".into(),
                counted: format!("residual winding {}", report.residual_winding),
            });
        }
        check_orbit_symmetry(&section, &report)?;
        if report.sigma_hat != sigma_predicted {
            return Err(OracleError::Mismatch {
                predicted: format!("{:?}", sigma_predicted),
                counted: format!("{:?}", report.sigma_hat),
            });
        }
        for h in 0..lattice.len() {
            let lhs = diagonal(&report.sigma_hat, h);
            let rhs = fixed_stratum_count(&section, lattice.subgroup(h), report.outer_winding);
            if lhs != rhs {
                return Err(OracleError::Mismatch {
                    predicted: format!("fixed-stratum count {rhs} at subgroup {h}"),
                    counted: format!("diagonal {lhs}"),
                });
            }
        }
        reports.push(report);
    }
    Ok(VerifyOutcome {
        sigma_predicted,
        reports,
    })
}
