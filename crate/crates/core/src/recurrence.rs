//! Binary recurrences `u_n = A u_{n-1} + B u_{n-2}`, their Binet data in the
//! real quadratic field `K = Q(sqrt(Delta))`, Weil heights, and the
//! validation of the standing hypotheses (including the two exceptional
//! families that admit infinitely many solutions).

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{is_prime_u64, squarefree_decompose, strip_p};
use crate::error::{Error, Result};
use crate::mpreal::{quad_abs, BigReal};
use crate::quad::QuadElem;

/// Integer binary recurrence with its two seed values.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recurrence {
    #[serde(rename = "A", with = "crate::json::bigint")]
    pub a: BigInt,
    #[serde(rename = "B", with = "crate::json::bigint")]
    pub b: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub u0: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub u1: BigInt,
}

impl Recurrence {
    pub fn new(a: i64, b: i64, u0: i64, u1: i64) -> Self {
        Recurrence { a: a.into(), b: b.into(), u0: u0.into(), u1: u1.into() }
    }

    /// Fibonacci numbers.
    pub fn fibonacci() -> Self {
        Recurrence::new(1, 1, 0, 1)
    }

    /// Lucas numbers.
    pub fn lucas() -> Self {
        Recurrence::new(1, 1, 2, 1)
    }

    /// Pell numbers.
    pub fn pell() -> Self {
        Recurrence::new(2, 1, 0, 1)
    }

    /// Discriminant `A^2 + 4B`.
    pub fn discriminant(&self) -> BigInt {
        &self.a * &self.a + BigInt::from(4) * &self.b
    }

    /// `u_n`, by iteration.
    pub fn term(&self, n: u64) -> BigInt {
        let (mut x, mut y) = (self.u0.clone(), self.u1.clone());
        for _ in 0..n {
            let z = &self.a * &y + &self.b * &x;
            x = y;
            y = z;
        }
        x
    }

    /// `u_0, ..., u_n`.
    pub fn terms(&self, n: u64) -> Vec<BigInt> {
        let mut out = Vec::with_capacity(n as usize + 1);
        let (mut x, mut y) = (self.u0.clone(), self.u1.clone());
        for _ in 0..=n {
            out.push(x.clone());
            let z = &self.a * &y + &self.b * &x;
            x = y;
            y = z;
        }
        out
    }
}

/// Exact Binet data `u_n = (a alpha^n - b beta^n) / (alpha - beta)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BinetData {
    /// Dominant root, `|alpha| > |beta|`.
    pub alpha: QuadElem,
    pub beta: QuadElem,
    /// `a = u1 - u0 beta`.
    pub a: QuadElem,
    /// `b = u1 - u0 alpha`.
    pub b: QuadElem,
    /// `Delta = A^2 + 4B`.
    pub delta: BigInt,
    /// Square-free part of `Delta` (`1` when `Delta` is a perfect square).
    pub delta0: BigInt,
    /// `Delta = f^2 Delta0`.
    pub f: BigInt,
}

impl BinetData {
    /// Degree of `K` over `Q` (1 when `Delta` is a perfect square).
    pub fn d_k(&self) -> u32 {
        if self.delta0.is_one() {
            1
        } else {
            2
        }
    }

    /// `alpha - beta = sqrt(Delta)` (with the sign fixed by the choice of alpha).
    pub fn alpha_minus_beta(&self) -> QuadElem {
        &self.alpha - &self.beta
    }

    /// `u_n` from the Binet formula, evaluated exactly in `K`.
    pub fn term(&self, n: u64) -> Result<BigInt> {
        let num = &(&self.a * &self.alpha.pow(n)) - &(&self.b * &self.beta.pow(n));
        let v = num.div(&self.alpha_minus_beta())?;
        v.as_integer().ok_or_else(|| Error::InvalidInput("Binet formula produced a non-integer".into()))
    }

    /// `gamma = w sqrt(Delta) / a`, the constant of the associated linear form.
    pub fn gamma(&self, w: &BigInt) -> QuadElem {
        let wq = QuadElem::from_int(w.clone(), &self.delta0);
        (&wq * &self.alpha_minus_beta()).div(&self.a).expect("a != 0")
    }

    /// `beta` as an integer when `Delta` is a perfect square.
    pub fn beta_integer(&self) -> Option<BigInt> {
        self.beta.as_integer()
    }
}

/// Compute the Binet data of a recurrence.
pub fn binet_data(r: &Recurrence) -> Result<BinetData> {
    let delta = r.discriminant();
    if !delta.is_positive() {
        return Err(Error::DegenerateSequence(format!("discriminant {delta} is not positive")));
    }
    if r.b.is_zero() {
        return Err(Error::DegenerateSequence("B = 0 makes a root vanish".into()));
    }
    if r.a.is_zero() {
        return Err(Error::DegenerateSequence("A = 0 gives alpha/beta = -1".into()));
    }
    if r.u0.is_zero() && r.u1.is_zero() {
        return Err(Error::DegenerateSequence("zero sequence".into()));
    }
    let (f, delta0) = squarefree_decompose(&delta)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let sqrt_delta = if delta0.is_one() {
        QuadElem::from_int(f.clone(), &delta0)
    } else {
        QuadElem::new(BigRational::zero(), BigRational::from_integer(f.clone()), delta0.clone())
    };
    let sgn = QuadElem::from_int(if r.a.is_positive() { 1 } else { -1 }, &delta0);
    let a_el = QuadElem::from_int(r.a.clone(), &delta0);
    let half_el = QuadElem::from_rational(half, &delta0);
    let s = &sgn * &sqrt_delta;
    let alpha = &half_el * &(&a_el + &s);
    let beta = &half_el * &(&a_el - &s);
    let u0 = QuadElem::from_int(r.u0.clone(), &delta0);
    let u1 = QuadElem::from_int(r.u1.clone(), &delta0);
    let a = &u1 - &(&u0 * &beta);
    let b = &u1 - &(&u0 * &alpha);
    if a.is_zero() || b.is_zero() {
        return Err(Error::DegenerateSequence("a*b = 0: the sequence is a pure power".into()));
    }
    if alpha.cmp_abs(&beta) != std::cmp::Ordering::Greater {
        return Err(Error::DegenerateSequence("no dominant root".into()));
    }
    Ok(BinetData { alpha, beta, a, b, delta, delta0, f })
}

/// `max(0, log x)` for positive `x`.
pub fn log_star(x: f64) -> Result<f64> {
    if !(x > 0.0) {
        return Err(Error::InvalidInput(format!("log_star of non-positive value {x}")));
    }
    Ok(x.ln().max(0.0))
}

/// Absolute logarithmic Weil height of a non-zero quadratic-field element,
/// with absolute error below `2^-prec`.
pub fn height_real(q: &QuadElem, prec: u32) -> Result<BigReal> {
    if q.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let wp = prec + 16;
    let mp = q.min_poly();
    let deg = mp.degree() as i64;
    let mut sum = BigReal::from_int(mp.leading(), wp).ln(wp)?;
    let one = BigReal::from_i64(1, wp);
    let conjugates = if deg == 1 { vec![q.clone()] } else { vec![q.clone(), q.conj()] };
    for c in conjugates {
        let v = quad_abs(&c, wp)?;
        if v.cmp_real(&one) == std::cmp::Ordering::Greater {
            sum = sum.add(&v.ln(wp)?);
        }
    }
    Ok(sum.div_int(&BigInt::from(deg)).with_prec(prec))
}

/// Weil height as a binary64 value.
pub fn height(q: &QuadElem) -> Result<f64> {
    Ok(height_real(q, 80)?.to_f64())
}

/// A problem instance: `u_n + u_m = w p_1^z_1 ... p_s^z_s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Instance {
    #[serde(flatten)]
    pub recurrence: Recurrence,
    #[serde(with = "crate::json::bigint")]
    pub w: BigInt,
    pub primes: Vec<u64>,
}

impl Instance {
    pub fn new(recurrence: Recurrence, w: i64, primes: Vec<u64>) -> Self {
        Instance { recurrence, w: w.into(), primes }
    }

    /// Largest prime of the set.
    pub fn max_prime(&self) -> u64 {
        self.primes.iter().copied().max().unwrap_or(1)
    }

    /// Check the standing hypotheses that do not involve exceptional families:
    /// strictly increasing primes, `w != 0`, `p_i` not dividing `w` or
    /// `gcd(A, B)`, and non-degeneracy.
    pub fn validate(&self) -> Result<BinetData> {
        if self.w.is_zero() {
            return Err(Error::HypothesisViolated("w must be non-zero".into()));
        }
        if self.primes.is_empty() {
            return Err(Error::InvalidInput("the prime set must not be empty".into()));
        }
        for pair in self.primes.windows(2) {
            if pair[0] >= pair[1] {
                return Err(Error::InvalidInput("primes must be strictly increasing".into()));
            }
        }
        let g = self.recurrence.a.gcd(&self.recurrence.b);
        for &p in &self.primes {
            if !is_prime_u64(p) {
                return Err(Error::InvalidInput(format!("{p} is not prime")));
            }
            let pb = BigInt::from(p);
            if (&self.w % &pb).is_zero() {
                return Err(Error::HypothesisViolated(format!("{p} divides w")));
            }
            if (&g % &pb).is_zero() {
                return Err(Error::HypothesisViolated(format!("{p} divides gcd(A, B)")));
            }
        }
        binet_data(&self.recurrence)
    }
}

/// An instance of the first exceptional family: `alpha^m0 = beta^m0 * 2b/a`,
/// so that `u_n + u_m0 = a alpha^n / (alpha - beta)` along a parity class.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FirstFamily {
    pub parity: u8,
    pub m: u64,
}

/// An odd `x` with `w (alpha + 1) / (a (alpha^x + 1)) = prod p_i^(-t_i)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SecondFamily {
    pub x: u64,
    pub t: Vec<i64>,
}

/// Outcome of the exceptional-case detector.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExceptionalReport {
    /// `beta` when it equals `+1` or `-1`.
    pub beta_unit: Option<i64>,
    /// Parity classes for which the first family's identity holds.
    pub first_family: Vec<FirstFamily>,
    /// Second-family witnesses found.
    pub second_family: Vec<SecondFamily>,
    /// Largest odd `x` examined in the second-family search.
    pub second_family_searched_to: u64,
    /// Whether the second-family search is exhaustive.  A primitive prime
    /// divisor of `alpha^x + 1` exceeds `x`, divides neither `alpha + 1` nor
    /// `a`-free parts outside the prime set, so no witness exists once
    /// `x > max(P, |w|)`; the search is complete when it reached that point.
    pub second_family_complete: bool,
    /// Human-readable description of every family detected.
    pub families: Vec<String>,
}

impl ExceptionalReport {
    pub fn is_exceptional(&self) -> bool {
        !self.first_family.is_empty() || !self.second_family.is_empty()
    }
}

/// Exponent of `v` as a power of `base` (`|base| >= 2`), if `v = base^m`, `m >= 0`.
fn exact_power_index(v: &BigRational, base: &BigInt) -> Option<u64> {
    if !v.is_integer() {
        return None;
    }
    let mut v = v.to_integer();
    let mut m = 0;
    loop {
        if v.is_one() {
            return Some(m);
        }
        if v.is_zero() || v.abs() < base.abs() {
            return None;
        }
        let (q, r) = v.div_rem(base);
        if !r.is_zero() {
            return None;
        }
        v = q;
        m += 1;
    }
}

/// Default search limit for odd `x` in the second exceptional family.
pub const SECOND_FAMILY_LIMIT: u64 = 2000;

/// Detect the two exceptional families admitting infinitely many solutions.
///
/// Validation errors ([`Error::HypothesisViolated`], [`Error::DegenerateSequence`])
/// are returned as errors; a detected family is reported in the result.
pub fn check_exceptional(inst: &Instance, limit: u64) -> Result<ExceptionalReport> {
    let bd = inst.validate()?;
    let mut rep = ExceptionalReport {
        beta_unit: None,
        first_family: Vec::new(),
        second_family: Vec::new(),
        second_family_searched_to: 0,
        second_family_complete: true,
        families: Vec::new(),
    };
    let beta = match bd.beta_integer() {
        Some(b) if b.abs().is_one() => b,
        _ => return Ok(rep),
    };
    let beta_i = beta.to_i64().expect("beta is +-1");
    rep.beta_unit = Some(beta_i);
    let alpha = bd.alpha.as_integer().expect("alpha is an integer when beta is");
    let a = bd.a.as_integer().expect("a is an integer in the rational case");
    let b = bd.b.as_integer().expect("b is an integer in the rational case");
    // First family: alpha^m = beta^m * 2b/a, examined per parity class of m.
    for parity in 0u8..2 {
        let sign = if parity == 1 { beta.clone() } else { BigInt::one() };
        let v = BigRational::new(sign * BigInt::from(2) * &b, a.clone());
        if let Some(m) = exact_power_index(&v, &alpha) {
            if m % 2 == parity as u64 || beta_i == 1 {
                if !rep.first_family.iter().any(|f| f.m == m) {
                    rep.first_family.push(FirstFamily { parity, m });
                    let range = if beta_i == 1 { "every n".to_string() } else { format!("every n = {m} mod 2") };
                    rep.families.push(format!(
                        "first family: u_n + u_{m} = a*alpha^n/(alpha-beta) (alpha = {alpha}) for {range}"
                    ));
                }
            }
        }
    }
    // Second family: beta = -1 and an odd x with w(alpha+1)/(a(alpha^x+1)) an S-unit.
    if beta_i == -1 {
        let complete_at = inst.max_prime().max(inst.w.abs().to_u64().unwrap_or(u64::MAX));
        let upper = limit.min(complete_at).max(1);
        rep.second_family_complete = complete_at <= limit;
        let mut x = 1;
        let mut ax = alpha.clone();
        let alpha2 = &alpha * &alpha;
        while x <= upper {
            let num = &inst.w * (&alpha + BigInt::one());
            let den = &a * (&ax + BigInt::one());
            if !den.is_zero() {
                let q = BigRational::new(num, den);
                if q.is_positive() {
                    if let Some(t) = s_unit_exponents(&q, &inst.primes) {
                        rep.families.push(format!(
                            "second family: x = {x}; solutions with n = m + {x} and alpha^m an S-unit multiple"
                        ));
                        rep.second_family.push(SecondFamily { x, t });
                    }
                }
            }
            x += 2;
            ax *= &alpha2;
        }
        rep.second_family_searched_to = if upper % 2 == 1 { upper } else { upper - 1 };
    }
    Ok(rep)
}

/// Exponents `t_i` with `q = prod p_i^(-t_i)`, if `q` is a positive S-unit.
fn s_unit_exponents(q: &BigRational, primes: &[u64]) -> Option<Vec<i64>> {
    let mut n = q.numer().clone();
    let mut d = q.denom().clone();
    let mut t = Vec::with_capacity(primes.len());
    for &p in primes {
        let (n2, vn) = strip_p(&n, p);
        let (d2, vd) = strip_p(&d, p);
        n = n2;
        d = d2;
        t.push(vd as i64 - vn as i64);
    }
    if n.is_one() && d.is_one() {
        Some(t)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn fibonacci_binet() {
        let bd = binet_data(&Recurrence::fibonacci()).unwrap();
        let five = BigInt::from(5);
        assert_eq!(bd.alpha, QuadElem::new(r(1, 2), r(1, 2), five.clone()));
        assert_eq!(bd.beta, QuadElem::new(r(1, 2), r(-1, 2), five.clone()));
        assert!(bd.a.is_one() && bd.b.is_one());
        assert_eq!(bd.delta, five);
        assert_eq!(bd.term(10).unwrap(), BigInt::from(55));
    }

    #[test]
    fn pell_and_lucas_binet() {
        let bd = binet_data(&Recurrence::pell()).unwrap();
        let two = BigInt::from(2);
        assert_eq!(bd.alpha, QuadElem::new(r(1, 1), r(1, 1), two.clone()));
        assert_eq!(bd.beta, QuadElem::new(r(1, 1), r(-1, 1), two.clone()));
        assert_eq!((bd.delta.clone(), bd.delta0.clone()), (BigInt::from(8), two));
        let bl = binet_data(&Recurrence::lucas()).unwrap();
        let five = BigInt::from(5);
        assert_eq!(bl.a, QuadElem::sqrt_d(&five));
        assert_eq!(bl.b, -QuadElem::sqrt_d(&five));
    }

    #[test]
    fn iteration_examples() {
        assert_eq!(Recurrence::fibonacci().term(0), BigInt::from(0));
        assert_eq!(Recurrence::fibonacci().term(10), BigInt::from(55));
        assert_eq!(Recurrence::lucas().term(10), BigInt::from(123));
    }

    #[test]
    fn height_examples() {
        let one = BigInt::one();
        assert!((height(&QuadElem::from_int(2, &one)).unwrap() - 0.693_147).abs() < 1e-5);
        let bd = binet_data(&Recurrence::fibonacci()).unwrap();
        assert!((height(&bd.alpha).unwrap() - 0.240_605_9).abs() < 1e-6);
        let s5 = QuadElem::sqrt_d(&BigInt::from(5));
        assert!((height(&s5).unwrap() - 0.804_718_9).abs() < 1e-6);
    }

    #[test]
    fn log_star_examples() {
        assert_eq!(log_star(0.5).unwrap(), 0.0);
        assert_eq!(log_star(1.0).unwrap(), 0.0);
        assert!((log_star(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!(log_star(0.0).is_err());
    }

    #[test]
    fn degenerate_sequences_rejected() {
        assert!(matches!(binet_data(&Recurrence::new(1, -1, 0, 1)), Err(Error::DegenerateSequence(_))));
        assert!(matches!(binet_data(&Recurrence::new(0, 1, 0, 1)), Err(Error::DegenerateSequence(_))));
        // u_n = 2^n: a*b = 0.
        assert!(matches!(binet_data(&Recurrence::new(3, -2, 1, 2)), Err(Error::DegenerateSequence(_))));
    }

    #[test]
    fn exceptional_families() {
        // u_n = 2^n - 1: alpha = 2, beta = 1, a = b = 1.
        let mersenne = Instance::new(Recurrence::new(3, -2, 0, 1), 1, vec![2]);
        let rep = check_exceptional(&mersenne, SECOND_FAMILY_LIMIT).unwrap();
        assert!(rep.is_exceptional());
        assert_eq!(rep.first_family[0].m, 1);
        // alpha = 6 = 2*3, beta = -1, a = b = 1.
        let six = Instance::new(Recurrence::new(5, 6, 0, 1), 1, vec![2, 3]);
        let rep = check_exceptional(&six, SECOND_FAMILY_LIMIT).unwrap();
        assert!(rep.is_exceptional());
        assert_eq!(rep.second_family[0].x, 1);
        assert!(rep.second_family_complete);
        let fib = Instance::new(Recurrence::fibonacci(), 1, vec![2, 3, 5]);
        assert!(!check_exceptional(&fib, SECOND_FAMILY_LIMIT).unwrap().is_exceptional());
    }

    #[test]
    fn hypothesis_checks() {
        let bad_w = Instance::new(Recurrence::fibonacci(), 6, vec![2, 3]);
        assert!(matches!(bad_w.validate(), Err(Error::HypothesisViolated(_))));
        let bad_gcd = Instance::new(Recurrence::new(2, 4, 0, 1), 1, vec![2]);
        assert!(matches!(bad_gcd.validate(), Err(Error::HypothesisViolated(_))));
    }
}
