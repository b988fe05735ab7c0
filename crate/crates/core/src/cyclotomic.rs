//! Exact cyclotomic arithmetic: elements of Q(zeta_n) represented in the
//! quotient ring `Q[x]/(x^n - 1)`, with equality decided by reduction
//! modulo the cyclotomic polynomial Phi_n.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rat = Ratio<i128>;

pub fn rat(n: i128, d: i128) -> Rat {
    Ratio::new(n, d)
}

/// A cyclotomic number: sum of rational multiples of powers of a primitive
/// `order`-th root of unity. The representation lives in
/// `Q[x]/(x^order - 1)` and is not reduced; equality and rationality tests
/// reduce mod Phi_order.
#[derive(Clone, Debug)]
pub struct Cyc {
    order: usize,
    coeffs: Vec<Rat>,
}

impl Cyc {
    pub fn zero(order: usize) -> Cyc {
        assert!(order >= 1);
        Cyc {
            order,
            coeffs: vec![Rat::zero(); order],
        }
    }

    pub fn from_rat(order: usize, r: Rat) -> Cyc {
        let mut c = Cyc::zero(order);
        c.coeffs[0] = r;
        c
    }

    pub fn one(order: usize) -> Cyc {
        Cyc::from_rat(order, Rat::one())
    }

    /// `coeff * zeta_order^power`.
    pub fn root_of_unity(order: usize, power: i64, coeff: Rat) -> Cyc {
        let mut c = Cyc::zero(order);
        let p = power.rem_euclid(order as i64) as usize;
        c.coeffs[p] = coeff;
        c
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Re-express in a cyclotomic field of order `new_order` (a multiple of
    /// the current order) via zeta_n = zeta_{kn}^k.
    pub fn lift(&self, new_order: usize) -> Cyc {
        assert_eq!(
            new_order % self.order,
            0,
            "lift target must be a multiple of the order"
        );
        let k = new_order / self.order;
        let mut out = Cyc::zero(new_order);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[i * k] += c;
        }
        out
    }

    fn common(a: &Cyc, b: &Cyc) -> (Cyc, Cyc) {
        if a.order == b.order {
            return (a.clone(), b.clone());
        }
        let l = num_integer::lcm(a.order, b.order);
        (a.lift(l), b.lift(l))
    }

    pub fn add(&self, other: &Cyc) -> Cyc {
        let (mut a, b) = Cyc::common(self, other);
        for i in 0..a.order {
            a.coeffs[i] += b.coeffs[i];
        }
        a
    }

    pub fn sub(&self, other: &Cyc) -> Cyc {
        let (mut a, b) = Cyc::common(self, other);
        for i in 0..a.order {
            a.coeffs[i] -= b.coeffs[i];
        }
        a
    }

    pub fn scale(&self, r: Rat) -> Cyc {
        let mut out = self.clone();
        for c in &mut out.coeffs {
            *c *= r;
        }
        out
    }

    /// Product, by cyclic convolution of exponents.
    pub fn mul(&self, other: &Cyc) -> Cyc {
        let (a, b) = Cyc::common(self, other);
        let n = a.order;
        let mut out = Cyc::zero(n);
        for (i, ca) in a.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.coeffs.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                out.coeffs[(i + j) % n] += ca * cb;
            }
        }
        out
    }

    /// Complex conjugation: zeta^k -> zeta^{-k}.
    pub fn conj(&self) -> Cyc {
        let n = self.order;
        let mut out = Cyc::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(n - i) % n] += c;
        }
        out
    }

    /// Galois substitution zeta -> zeta^k. For k = 2 this evaluates the
    /// character at squared group elements only when the exponent data is a
    /// single monomial; general sums transform coefficientwise.
    pub fn galois(&self, k: usize) -> Cyc {
        let n = self.order;
        let mut out = Cyc::zero(n);
        for (i, c) in self.coeffs.iter().enumerate() {
            out.coeffs[(i * k) % n] += c;
        }
        out
    }

    /// The representative reduced modulo Phi_order; zero iff the number is 0.
    fn reduced(&self) -> Vec<Rat> {
        let phi = cyclotomic_polynomial(self.order);
        poly_rem(&self.coeffs, &phi)
    }

    pub fn is_zero(&self) -> bool {
        self.reduced().iter().all(|c| c.is_zero())
    }

    pub fn eq_cyc(&self, other: &Cyc) -> bool {
        self.sub(other).is_zero()
    }

    /// The rational value of this number, if it is rational.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.order == 1 {
            return Some(self.coeffs[0]);
        }
        let r = self.reduced();
        if r.iter().skip(1).all(|c| c.is_zero()) {
            Some(r.first().copied().unwrap_or_else(Rat::zero))
        } else {
            None
        }
    }

    /// Whether the number is real: equal to its own conjugate.
    pub fn is_real(&self) -> bool {
        self.sub(&self.conj()).is_zero()
    }

    /// Approximate complex value (for diagnostics only; all decisions in
    /// this crate are made on exact data).
    pub fn approx(&self) -> (f64, f64) {
        let n = self.order as f64;
        let mut re = 0.0;
        let mut im = 0.0;
        for (i, c) in self.coeffs.iter().enumerate() {
            let v = *c.numer() as f64 / *c.denom() as f64;
            let t = 2.0 * std::f64::consts::PI * i as f64 / n;
            re += v * t.cos();
            im += v * t.sin();
        }
        (re, im)
    }
}

impl PartialEq for Cyc {
    fn eq(&self, other: &Self) -> bool {
        self.eq_cyc(other)
    }
}

impl Eq for Cyc {}

/// Integer coefficients of Phi_n, computed by dividing x^n - 1 by the
/// cyclotomic polynomials of the proper divisors of n.
pub fn cyclotomic_polynomial(n: usize) -> Vec<Rat> {
    assert!(n >= 1);
    // x^n - 1.
    let mut num = vec![Rat::zero(); n + 1];
    num[0] = -Rat::one();
    num[n] = Rat::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d);
            num = poly_div_exact(&num, &phi_d);
        }
    }
    num
}

/// Quotient of an exact polynomial division (panics if not exact).
fn poly_div_exact(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = num.to_vec();
    let dd = poly_degree(den).expect("nonzero divisor");
    let lead = den[dd];
    let nd = match poly_degree(&rem) {
        Some(d) => d,
        None => return vec![Rat::zero()],
    };
    assert!(nd >= dd);
    let mut quot = vec![Rat::zero(); nd - dd + 1];
    for i in (0..=nd - dd).rev() {
        let c = rem[i + dd] / lead;
        quot[i] = c;
        if !c.is_zero() {
            for j in 0..=dd {
                let t = den[j] * c;
                rem[i + j] -= t;
            }
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division was not exact");
    quot
}

/// Remainder of polynomial division.
fn poly_rem(num: &[Rat], den: &[Rat]) -> Vec<Rat> {
    let mut rem: Vec<Rat> = num.to_vec();
    let dd = poly_degree(den).expect("nonzero divisor");
    let lead = den[dd];
    while let Some(nd) = poly_degree(&rem) {
        if nd < dd {
            break;
        }
        let c = rem[nd] / lead;
        for j in 0..=dd {
            let t = den[j] * c;
            rem[nd - dd + j] -= t;
        }
        rem[nd] = Rat::zero();
    }
    rem.truncate(dd.max(1));
    rem
}

fn poly_degree(p: &[Rat]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

/// Exact check that a rational is a nonnegative integer, returning it.
pub fn as_nonneg_integer(r: Rat) -> Option<i64> {
    if r.is_integer() && !r.is_negative() {
        Some(r.to_integer() as i64)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_low_order() {
        let as_ints = |p: Vec<Rat>| -> Vec<i128> {
            p.iter()
                .map(|c| {
                    assert!(c.is_integer());
                    c.to_integer()
                })
                .collect()
        };
        assert_eq!(as_ints(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_ints(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(as_ints(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_ints(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_ints(cyclotomic_polynomial(6)), vec![1, -1, 1]);
        assert_eq!(as_ints(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn cyclotomic_degree_and_coefficient_range() {
        // phi(n) degrees, integer coefficients in {-1,0,1} for n <= 64.
        let phi = |n: usize| (1..=n).filter(|k| num_integer::gcd(*k, n) == 1).count();
        for n in 1..=64 {
            let p = cyclotomic_polynomial(n);
            assert_eq!(
                p.iter().rposition(|c| !c.is_zero()).unwrap(),
                phi(n),
                "degree of Phi_{n}"
            );
            for c in &p {
                assert!(c.is_integer());
                assert!(c.to_integer().abs() <= 1, "coefficient of Phi_{n}");
            }
        }
    }

    #[test]
    fn roots_of_unity_sum_to_zero() {
        for n in 2..=12 {
            let mut s = Cyc::zero(n);
            for k in 0..n {
                s = s.add(&Cyc::root_of_unity(n, k as i64, Rat::one()));
            }
            assert!(s.is_zero(), "sum of all {n}-th roots of unity");
        }
    }

    #[test]
    fn primitive_root_is_not_rational() {
        let z = Cyc::root_of_unity(3, 1, Rat::one());
        assert_eq!(z.as_rational(), None);
        // zeta_3 + zeta_3^2 = -1.
        let s = z.add(&Cyc::root_of_unity(3, 2, Rat::one()));
        assert_eq!(s.as_rational(), Some(rat(-1, 1)));
    }

    #[test]
    fn conjugation_and_products() {
        let i = Cyc::root_of_unity(4, 1, Rat::one());
        assert!(i.mul(&i).eq_cyc(&Cyc::from_rat(4, rat(-1, 1))));
        assert!(i.conj().eq_cyc(&Cyc::root_of_unity(4, 3, Rat::one())));
        assert!(i.mul(&i.conj()).eq_cyc(&Cyc::one(4)));
        assert!(!i.is_real());
        assert!(i.add(&i.conj()).is_real());
    }

    #[test]
    fn lift_preserves_value() {
        let z3 = Cyc::root_of_unity(3, 1, Rat::one());
        let z6 = z3.lift(6);
        // zeta_3 = zeta_6^2; their difference is zero in Q(zeta_6).
        assert!(z6.eq_cyc(&Cyc::root_of_unity(6, 2, Rat::one())));
        // Mixed-order arithmetic lifts automatically.
        let s = z3.add(&Cyc::root_of_unity(2, 1, Rat::one()));
        assert_eq!(s.order(), 6);
        // zeta_3 + zeta_2 = zeta_6^2 + zeta_6^3 = zeta_6^2 - 1... check numerically.
        let (re, im) = s.approx();
        assert!((re - (-0.5 - 1.0)).abs() < 1e-12);
        assert!((im - 0.866_025_403_784_438_6).abs() < 1e-12);
    }

    #[test]
    fn galois_squares_exponents() {
        let z = Cyc::root_of_unity(8, 3, rat(2, 1));
        assert!(z.galois(2).eq_cyc(&Cyc::root_of_unity(8, 6, rat(2, 1))));
    }
}
