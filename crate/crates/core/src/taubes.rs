//! Formal power series over commuting curve-class variables with exact
//! integer coefficients: the generating functions that reassemble Taubes'
//! Gromov invariant and its disconnected-count variant from the integer
//! invariants, and the torus multiple-cover weight series.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TaubesError {
    #[error("class '{class}' has homology dimension {got}, pairing expects {expected}")]
    MissingHomologyData {
        class: String,
        got: usize,
        expected: usize,
    },
    #[error("an admissible term exceeds the truncation caps (class index {class_index}, multiplicity {multiplicity}); raise the caps")]
    CapTooSmall {
        class_index: usize,
        multiplicity: u32,
    },
}

/// A curve class (g, beta): genus, an opaque identifier, its homology
/// vector in a chosen basis, and the first-Chern integral over it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassLabel {
    pub genus: i64,
    pub beta_id: String,
    pub homology: Vec<i64>,
    pub c1: i64,
}

/// The symmetric intersection form on the homology basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    matrix: Vec<Vec<i64>>,
}

impl Pairing {
    pub fn new(matrix: Vec<Vec<i64>>) -> Pairing {
        let n = matrix.len();
        assert!(
            matrix.iter().all(|r| r.len() == n),
            "pairing matrix must be square"
        );
        for i in 0..n {
            for j in 0..n {
                assert_eq!(
                    matrix[i][j], matrix[j][i],
                    "pairing matrix must be symmetric"
                );
            }
        }
        Pairing { matrix }
    }

    pub fn dim(&self) -> usize {
        self.matrix.len()
    }

    pub fn eval(&self, a: &[i64], b: &[i64]) -> i64 {
        assert_eq!(a.len(), self.dim());
        assert_eq!(b.len(), self.dim());
        let mut s = 0;
        for i in 0..a.len() {
            for j in 0..b.len() {
                s += a[i] * self.matrix[i][j] * b[j];
            }
        }
        s
    }
}

/// Which single-class weight series each invariant exponent uses:
/// Taubes' P(z) = (1-z)^(-1) or the disconnected-count P(z) = 1+z.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GrStyle {
    /// (1 - x)^(-n) per class.
    Geometric,
    /// (1 + x)^n per class.
    Binomial,
}

/// Truncation caps: a per-class degree cap and a total-degree cap.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Caps {
    pub per_class: Vec<u32>,
    pub total: u32,
}

impl Caps {
    pub fn uniform(n_classes: usize, per_class: u32, total: u32) -> Caps {
        Caps {
            per_class: vec![per_class; n_classes],
            total,
        }
    }
}

/// A truncated multivariate formal power series with exact integer
/// coefficients, keyed by exponent vectors over a fixed class list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalSeries {
    n_vars: usize,
    coefficients: BTreeMap<Vec<u32>, i128>,
    caps: Caps,
}

impl FormalSeries {
    pub fn one(caps: Caps) -> FormalSeries {
        let n_vars = caps.per_class.len();
        let mut coefficients = BTreeMap::new();
        coefficients.insert(vec![0; n_vars], 1);
        FormalSeries {
            n_vars,
            coefficients,
            caps,
        }
    }

    pub fn coefficient(&self, exps: &[u32]) -> i128 {
        self.coefficients.get(exps).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &i128)> {
        self.coefficients.iter()
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    /// Multiply by the univariate series sum_m weights[m] * x_var^m,
    /// truncating at the caps.
    fn mul_univariate(&self, var: usize, weights: &[i128]) -> FormalSeries {
        let mut coefficients: BTreeMap<Vec<u32>, i128> = BTreeMap::new();
        for (exps, &c) in &self.coefficients {
            let total: u32 = exps.iter().sum();
            for (m, &w) in weights.iter().enumerate() {
                let m = m as u32;
                if w == 0 {
                    continue;
                }
                let new_e = exps[var] + m;
                if new_e > self.caps.per_class[var] || total + m > self.caps.total {
                    continue;
                }
                let mut key = exps.clone();
                key[var] = new_e;
                *coefficients.entry(key).or_insert(0) += c * w;
            }
        }
        coefficients.retain(|_, c| *c != 0);
        FormalSeries {
            n_vars: self.n_vars,
            coefficients,
            caps: self.caps.clone(),
        }
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coefficients.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in &self.coefficients {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c}")?;
            for (i, &e) in exps.iter().enumerate() {
                if e > 0 {
                    write!(f, "*x{i}^{e}")?;
                }
            }
        }
        Ok(())
    }
}

/// Generalized binomial coefficient C(n, m) for integer n (of either sign),
/// exact at every intermediate step.
pub fn gen_binom(n: i128, m: u32) -> i128 {
    let mut c: i128 = 1;
    for i in 0..m as i128 {
        c = c * (n - i) / (i + 1);
    }
    c
}

/// Coefficient of x^m in the single-class weight series for invariant `n`:
/// C(n+m-1, m) for Geometric, C(n, m) for Binomial.
pub fn class_weight(style: GrStyle, n: i64, m: u32) -> i128 {
    match style {
        GrStyle::Geometric => {
            let sign = if m % 2 == 0 { 1 } else { -1 };
            sign * gen_binom(-(n as i128), m)
        }
        GrStyle::Binomial => gen_binom(n as i128, m),
    }
}

/// Whether the single-class series is a polynomial whose coefficients
/// vanish for all multiplicities beyond `cap`.
fn weight_vanishes_beyond(style: GrStyle, n: i64, cap: u32) -> bool {
    match style {
        GrStyle::Binomial => n >= 0 && cap as i64 >= n,
        GrStyle::Geometric => n <= 0 && cap as i64 >= -n,
    }
}

/// The truncated product over classes of (1 -+ x_c)^(+-n_c), with exact
/// binomial and negative-binomial coefficients.
pub fn expand_invariant_product(
    classes: &[(ClassLabel, i64)],
    style: GrStyle,
    caps: &Caps,
) -> FormalSeries {
    assert_eq!(caps.per_class.len(), classes.len());
    let mut series = FormalSeries::one(caps.clone());
    for (var, (_, n)) in classes.iter().enumerate() {
        let weights: Vec<i128> = (0..=caps.per_class[var])
            .map(|m| class_weight(style, *n, m))
            .collect();
        series = series.mul_univariate(var, &weights);
    }
    series
}

/// The three admissibility conditions on one monomial: the homology classes
/// sum (with multiplicity) to A; every class in the support satisfies the
/// embedded-curve adjunction 2(g-1) = beta.beta - c1; distinct classes in
/// the support are orthogonal. Repeated copies of one class are allowed
/// only when its self-intersection vanishes (the square-zero torus case).
pub fn admissible(
    exps: &[u32],
    classes: &[(ClassLabel, i64)],
    a: &[i64],
    pairing: &Pairing,
) -> Result<bool, TaubesError> {
    assert_eq!(exps.len(), classes.len());
    if a.len() != pairing.dim() {
        return Err(TaubesError::MissingHomologyData {
            class: "<target class A>".into(),
            got: a.len(),
            expected: pairing.dim(),
        });
    }
    for (label, _) in classes {
        if label.homology.len() != pairing.dim() {
            return Err(TaubesError::MissingHomologyData {
                class: label.beta_id.clone(),
                got: label.homology.len(),
                expected: pairing.dim(),
            });
        }
    }
    let support: Vec<usize> = (0..classes.len()).filter(|&i| exps[i] > 0).collect();
    // Homology sum.
    let mut total = vec![0i64; pairing.dim()];
    for &i in &support {
        for (t, &h) in total.iter_mut().zip(&classes[i].0.homology) {
            *t += exps[i] as i64 * h;
        }
    }
    if total != a {
        return Ok(false);
    }
    for &i in &support {
        let label = &classes[i].0;
        let self_int = pairing.eval(&label.homology, &label.homology);
        if 2 * (label.genus - 1) != self_int - label.c1 {
            return Ok(false);
        }
        if exps[i] >= 2 && self_int != 0 {
            return Ok(false);
        }
        for &j in &support {
            if j > i && pairing.eval(&label.homology, &classes[j].0.homology) != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Gr(A): the sum of the expanded-product coefficients over admissible
/// monomials. Geometric style gives Taubes' Gr, Binomial the variant Gr'.
///
/// Errors with `CapTooSmall` if an admissible monomial reaches or crosses
/// the truncation boundary while its weight series has not provably
/// terminated; the caps must dominate the maximal admissible multiplicity.
pub fn gr_coefficient(
    classes: &[(ClassLabel, i64)],
    a: &[i64],
    pairing: &Pairing,
    style: GrStyle,
    caps: &Caps,
) -> Result<i128, TaubesError> {
    assert_eq!(caps.per_class.len(), classes.len());
    let series = expand_invariant_product(classes, style, caps);
    let mut sum = 0i128;
    // Scan one layer beyond the caps so boundary-crossing admissible
    // monomials are detected rather than silently truncated.
    let extended: Vec<u32> = caps.per_class.iter().map(|&c| c + 1).collect();
    let mut exps = vec![0u32; classes.len()];
    loop {
        let total: u32 = exps.iter().sum();
        if total <= caps.total + 1 && admissible(&exps, classes, a, pairing)? {
            let beyond = exps
                .iter()
                .enumerate()
                .find(|&(i, &e)| e > caps.per_class[i])
                .map(|(i, &e)| (i, e))
                .or_else(|| {
                    if total > caps.total {
                        Some((usize::MAX, total))
                    } else {
                        None
                    }
                });
            match beyond {
                None => {
                    sum += series.coefficient(&exps);
                    // An admissible term sitting exactly on a cap with a
                    // still-live weight series means deeper terms may matter.
                    for (i, &e) in exps.iter().enumerate() {
                        let on_boundary = e == caps.per_class[i] || total == caps.total;
                        if on_boundary && e > 0 && !weight_vanishes_beyond(style, classes[i].1, e) {
                            let mut bumped = exps.clone();
                            bumped[i] += 1;
                            if admissible(&bumped, classes, a, pairing)? {
                                return Err(TaubesError::CapTooSmall {
                                    class_index: i,
                                    multiplicity: e + 1,
                                });
                            }
                        }
                    }
                }
                Some((i, e)) => {
                    let live = if i == usize::MAX {
                        true
                    } else {
                        !weight_vanishes_beyond(style, classes[i].1, e - 1)
                    };
                    if live {
                        return Err(TaubesError::CapTooSmall {
                            class_index: if i == usize::MAX { 0 } else { i },
                            multiplicity: e,
                        });
                    }
                }
            }
        }
        // Advance the odometer over the extended box.
        let mut k = 0;
        loop {
            if k == exps.len() {
                return Ok(sum);
            }
            if exps[k] < extended[k] {
                exps[k] += 1;
                break;
            }
            exps[k] = 0;
            k += 1;
        }
    }
}

/// The torus weight series P(z)^a P(z^2)^b P(z^4)^c truncated at `cap`,
/// with P(z) = (1-z)^(-1) (Geometric) or P(z) = 1+z (Binomial). Returns
/// the coefficients of z^0 .. z^cap.
pub fn torus_weight_series(a: i64, b: i64, c: i64, style: GrStyle, cap: u32) -> Vec<i128> {
    let mut out = vec![0i128; cap as usize + 1];
    out[0] = 1;
    for (stride, exponent) in [(1u32, a), (2, b), (4, c)] {
        let mut next = vec![0i128; cap as usize + 1];
        for (deg, &coeff) in out.iter().enumerate() {
            if coeff == 0 {
                continue;
            }
            let mut m = 0u32;
            while deg as u32 + stride * m <= cap {
                let w = class_weight(style, exponent, m);
                if w != 0 {
                    next[deg + (stride * m) as usize] += coeff * w;
                }
                m += 1;
            }
        }
        out = next;
    }
    out
}

/// Extract the Taubes triple (a, b, c) from a torus contribution table:
/// a at the full lattice, b the common value at the three index-2 kernels,
/// c at their common index-4 intersection. `None` when the double-cover
/// contributions differ (no single P(z^2)-exponent encodes them).
pub fn torus_weights_from_contributions(
    table: &[(crate::sublattice::Sublattice2, crate::sigma::Contribution)],
) -> Option<(i64, i64, i64)> {
    use crate::sigma::torus_sign_kernels;
    use crate::sublattice::Sublattice2;
    let find = |k: &Sublattice2| -> Option<i64> {
        table
            .iter()
            .find(|(l, _)| l == k)
            .and_then(|(_, c)| c.integer())
    };
    let a = find(&Sublattice2 { a: 1, b: 0, d: 1 })?;
    let kernels = torus_sign_kernels();
    let b0 = find(&kernels[0])?;
    for k in &kernels[1..] {
        if find(k)? != b0 {
            return None;
        }
    }
    let c = find(&Sublattice2 { a: 2, b: 0, d: 2 })?;
    Some((a, b0, c))
}
