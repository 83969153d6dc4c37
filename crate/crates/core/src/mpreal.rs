//! Arbitrary-precision binary floating point with explicit precision control.
//!
//! A [`BigReal`] is `mant * 2^exp` with a big-integer mantissa of at most
//! `prec` significant bits.  Arithmetic rounds to nearest.  The transcendental
//! functions are evaluated in fixed point with guard bits:
//!
//! * [`BigReal::ln`] is accurate to an *absolute* error below `2^-prec`;
//! * [`BigReal::exp`], [`BigReal::pow`] and [`BigReal::root`] to a
//!   *relative* error below `2^-prec`.
//!
//! [`stable_floor`] evaluates `floor(C * eta)` at two precisions and refuses
//! to answer unless both agree and neither lies next to an integer — the
//! entries of approximation lattices are only trustworthy in that case.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::quad::QuadElem;

/// Binary floating-point number `mant * 2^exp` carrying its working precision.
#[derive(Clone, Debug)]
pub struct BigReal {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn bits(n: &BigInt) -> u64 {
    n.magnitude().bits()
}

/// Arithmetic shift toward zero.
fn shr_trunc(n: &BigInt, s: u64) -> BigInt {
    if n.is_negative() {
        -((-n) >> s)
    } else {
        n >> s
    }
}

fn shift(n: &BigInt, s: i64) -> BigInt {
    if s >= 0 {
        n << (s as u64)
    } else {
        n >> ((-s) as u64)
    }
}

impl BigReal {
    fn round_to(mant: BigInt, exp: i64, prec: u32) -> BigReal {
        let prec = prec.max(2);
        if mant.is_zero() {
            return BigReal { mant, exp: 0, prec };
        }
        let b = bits(&mant);
        if b <= prec as u64 {
            return BigReal { mant, exp, prec };
        }
        let sh = b - prec as u64;
        let neg = mant.is_negative();
        let mag = mant.abs();
        let mut m: BigInt = (mag + (BigInt::one() << (sh - 1))) >> sh;
        let mut e = exp + sh as i64;
        if bits(&m) > prec as u64 {
            m >>= 1u32;
            e += 1;
        }
        BigReal { mant: if neg { -m } else { m }, exp: e, prec }
    }

    /// Zero carrying precision `prec`.
    pub fn zero(prec: u32) -> Self {
        BigReal { mant: BigInt::zero(), exp: 0, prec }
    }

    /// Exact conversion of an integer (rounded if wider than `prec`).
    pub fn from_int(n: &BigInt, prec: u32) -> Self {
        BigReal::round_to(n.clone(), 0, prec)
    }

    /// Conversion of a machine integer.
    pub fn from_i64(n: i64, prec: u32) -> Self {
        BigReal::from_int(&BigInt::from(n), prec)
    }

    /// Exact value `mant * 2^exp`, rounded to `prec` bits.
    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        BigReal::round_to(mant, exp, prec)
    }

    /// Correctly rounded (to within one unit) conversion of a rational.
    pub fn from_ratio(q: &BigRational, prec: u32) -> Self {
        let (n, d) = (q.numer(), q.denom());
        if n.is_zero() {
            return BigReal::zero(prec);
        }
        let sh = prec as i64 + 4 + bits(d) as i64 - bits(n) as i64;
        let sh = sh.max(0);
        let quo = (n << (sh as u64)) / d;
        BigReal::round_to(quo, -sh, prec)
    }

    /// Exact conversion of a finite binary64 value.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        assert!(x.is_finite());
        if x == 0.0 {
            return BigReal::zero(prec);
        }
        let b = x.abs().to_bits();
        let raw_exp = ((b >> 52) & 0x7ff) as i64;
        let frac = b & ((1u64 << 52) - 1);
        let (m, e) = if raw_exp == 0 { (frac, -1074) } else { (frac | (1u64 << 52), raw_exp - 1075) };
        let m = if x < 0.0 { -BigInt::from(m) } else { BigInt::from(m) };
        BigReal::round_to(m, e, prec)
    }

    pub fn prec(&self) -> u32 {
        self.prec
    }

    /// Same value rounded to a new precision.
    pub fn with_prec(&self, prec: u32) -> Self {
        let mut r = BigReal::round_to(self.mant.clone(), self.exp, prec);
        r.prec = prec.max(2);
        r
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    /// `-1`, `0` or `1`.
    pub fn signum(&self) -> i32 {
        match self.mant.sign() {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    pub fn abs(&self) -> Self {
        BigReal { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Position just above the top bit: `|x|` lies in `[2^(t-1), 2^t)`.
    fn top(&self) -> i64 {
        self.exp + bits(&self.mant) as i64
    }

    /// Sum, rounded to the larger of the two precisions.
    pub fn add(&self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return o.with_prec(prec);
        }
        if o.is_zero() {
            return self.with_prec(prec);
        }
        let gap = prec as i64 + 8;
        if self.top() - o.top() > gap {
            return self.with_prec(prec);
        }
        if o.top() - self.top() > gap {
            return o.with_prec(prec);
        }
        let e = self.exp.min(o.exp);
        let m = shift(&self.mant, self.exp - e) + shift(&o.mant, o.exp - e);
        BigReal::round_to(m, e, prec)
    }

    pub fn sub(&self, o: &BigReal) -> BigReal {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> BigReal {
        BigReal { mant: -self.mant.clone(), exp: self.exp, prec: self.prec }
    }

    pub fn mul(&self, o: &BigReal) -> BigReal {
        let prec = self.prec.max(o.prec);
        BigReal::round_to(&self.mant * &o.mant, self.exp + o.exp, prec)
    }

    /// Quotient; division by zero is a programming error.
    pub fn div(&self, o: &BigReal) -> BigReal {
        assert!(!o.is_zero(), "BigReal division by zero");
        let prec = self.prec.max(o.prec);
        if self.is_zero() {
            return BigReal::zero(prec);
        }
        let sh = (prec as i64 + 4 + bits(&o.mant) as i64 - bits(&self.mant) as i64).max(0);
        let q = (&self.mant << (sh as u64)) / &o.mant;
        BigReal::round_to(q, self.exp - o.exp - sh, prec)
    }

    pub fn mul_int(&self, n: &BigInt) -> BigReal {
        BigReal::round_to(&self.mant * n, self.exp, self.prec)
    }

    pub fn div_int(&self, n: &BigInt) -> BigReal {
        self.div(&BigReal::from_int(n, self.prec.max(bits(n) as u32 + 2)))
    }

    /// Multiplication by `2^k`, exact.
    pub fn mul_pow2(&self, k: i64) -> BigReal {
        if self.is_zero() {
            return self.clone();
        }
        BigReal { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    /// Square root of a non-negative number.
    pub fn sqrt(&self) -> BigReal {
        assert!(!self.mant.is_negative(), "square root of a negative BigReal");
        if self.is_zero() {
            return self.clone();
        }
        let mut m = self.mant.clone();
        let mut e = self.exp;
        if e & 1 != 0 {
            m <<= 1u32;
            e -= 1;
        }
        let want = 2 * (self.prec as i64 + 4);
        let mut sh = want - bits(&m) as i64;
        if sh < 0 {
            sh = 0;
        }
        if sh & 1 != 0 {
            sh += 1;
        }
        m <<= sh as u64;
        e -= sh;
        BigReal::round_to(m.sqrt(), e / 2, self.prec)
    }

    /// Exact comparison.
    pub fn cmp_real(&self, o: &BigReal) -> Ordering {
        let (s1, s2) = (self.signum(), o.signum());
        if s1 != s2 {
            return s1.cmp(&s2);
        }
        if s1 == 0 {
            return Ordering::Equal;
        }
        let (t1, t2) = (self.top(), o.top());
        if t1 != t2 {
            let mag = t1.cmp(&t2);
            return if s1 > 0 { mag } else { mag.reverse() };
        }
        let e = self.exp.min(o.exp);
        shift(&self.mant, self.exp - e).cmp(&shift(&o.mant, o.exp - e))
    }

    pub fn max(&self, o: &BigReal) -> BigReal {
        if self.cmp_real(o) == Ordering::Less {
            o.clone()
        } else {
            self.clone()
        }
    }

    pub fn min(&self, o: &BigReal) -> BigReal {
        if self.cmp_real(o) == Ordering::Greater {
            o.clone()
        } else {
            self.clone()
        }
    }

    /// Greatest integer not above the value (exact).
    pub fn floor(&self) -> BigInt {
        // `>>` on negative BigInt rounds toward negative infinity.
        shift(&self.mant, self.exp)
    }

    /// Least integer not below the value (exact).
    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    /// Nearest integer (ties upward).
    pub fn round(&self) -> BigInt {
        self.add(&BigReal::from_parts(BigInt::one(), -1, self.prec)).floor()
    }

    /// Distance from the value to the nearest integer, as a BigReal.
    pub fn dist_to_int(&self) -> BigReal {
        let f = self.sub(&BigReal::from_int(&self.floor(), self.prec));
        let g = BigReal::from_i64(1, self.prec).sub(&f);
        f.min(&g)
    }

    /// `floor(x * 2^w)` as an integer.
    fn to_fixed(&self, w: u64) -> BigInt {
        shift(&self.mant, self.exp + w as i64)
    }

    /// Nearest binary64 (may overflow to infinity).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let b = bits(&self.mant) as i64;
        let cut = (b - 60).max(0);
        let m = shift(&self.mant, -cut).to_f64().unwrap_or(0.0);
        let e = self.exp + cut;
        if e > 2000 {
            return m.signum() * f64::INFINITY;
        }
        if e < -2000 {
            return 0.0;
        }
        m * 2f64.powi(e as i32)
    }

    /// `log2 |x|` as a binary64, valid far beyond the binary64 range of `x`.
    pub fn log2_abs_f64(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        let b = bits(&self.mant) as i64;
        let cut = (b - 60).max(0);
        let m = shift(&self.mant.abs(), -cut).to_f64().unwrap_or(1.0);
        m.log2() + (self.exp + cut) as f64
    }

    /// `log10 |x|` as a binary64.
    pub fn log10_abs_f64(&self) -> f64 {
        self.log2_abs_f64() * std::f64::consts::LN_2 / std::f64::consts::LN_10
    }

    /// Natural logarithm of a positive number with absolute error `< 2^-prec`.
    pub fn ln(&self, prec: u32) -> Result<BigReal> {
        if self.is_zero() {
            return Err(Error::ZeroArgument);
        }
        assert!(self.is_positive(), "logarithm of a negative BigReal");
        let w: u64 = prec as u64 + 40;
        let b = bits(&self.mant) as i64;
        let mut e = self.exp + b - 1;
        // m = x / 2^e in [1, 2), as a fixed-point integer M = m * 2^w.
        let big_m = shift(&self.mant, w as i64 - (b - 1));
        let one = BigInt::one() << w;
        let (num, den) = if &big_m * &big_m > (&one * &one) << 1u32 {
            e += 1;
            (&big_m - (&one << 1u32), &big_m + (&one << 1u32))
        } else {
            (&big_m - &one, &big_m + &one)
        };
        let s = (num << w) / den;
        let at = atanh_fixed(&s, w);
        let mut v = at << 1u32;
        if e != 0 {
            let eb = 64 - e.unsigned_abs().leading_zeros() as u64;
            let wl = w + eb + 4;
            let l2 = ln2_fixed(wl);
            v += shr_trunc(&(l2 * BigInt::from(e)), wl - w);
        }
        let out_prec = (bits(&v) as u32).max(prec + 8);
        Ok(BigReal::round_to(v, -(w as i64), out_prec))
    }

    /// Exponential with relative error `< 2^-prec`.
    pub fn exp(&self, prec: u32) -> BigReal {
        if self.is_zero() {
            return BigReal::from_i64(1, prec);
        }
        let j: u64 = 16;
        let w: u64 = prec as u64 + 48 + j;
        // k = round(x / ln 2), computed loosely; any nearby integer works.
        let inv_l2 = BigReal::from_int(&BigInt::one(), 128).div(&ln2(128));
        let k = self.with_prec(self.prec.max(128)).mul(&inv_l2).round();
        let kb = bits(&k);
        let wl = w + kb + 4;
        let l2 = ln2_fixed(wl);
        let kl2 = shr_trunc(&(l2 * &k), wl - w);
        let r = self.to_fixed(w) - kl2;
        let r = shr_trunc(&r, j);
        let one = BigInt::one() << w;
        let mut sum = one.clone();
        let mut term = one;
        let mut i: u64 = 1;
        loop {
            term = shr_trunc(&(&term * &r), w) / BigInt::from(i);
            if term.magnitude().bits() < 2 {
                break;
            }
            sum += &term;
            i += 1;
        }
        for _ in 0..j {
            sum = (&sum * &sum) >> w;
        }
        let ke = k.to_i64().expect("exponent of exp() out of range");
        BigReal::round_to(sum, ke - w as i64, prec)
    }

    /// `self^y` for positive `self`, relative error `< 2^-prec`.
    pub fn pow(&self, y: &BigReal, prec: u32) -> Result<BigReal> {
        let lnx = self.ln(prec + 16)?;
        let mag = (lnx.log2_abs_f64() + y.log2_abs_f64()).max(0.0) as u32;
        let lnx = self.ln(prec + 24 + mag + y.log2_abs_f64().max(0.0) as u32)?;
        let t = lnx.with_prec(prec + 24 + 2 * mag).mul(&y.with_prec(prec + 24 + 2 * mag));
        Ok(t.exp(prec))
    }

    /// `self^n` for a machine-size non-negative exponent.
    pub fn powi(&self, mut n: u64, prec: u32) -> BigReal {
        let guard = 64 - n.leading_zeros() + 8;
        let wp = prec + 2 * guard;
        let mut base = self.with_prec(wp);
        let mut acc = BigReal::from_i64(1, wp);
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        acc.with_prec(prec)
    }

    /// Positive `n`-th root of a positive number.
    pub fn root(&self, n: u64, prec: u32) -> Result<BigReal> {
        let mag = (self.log2_abs_f64().abs() as u32) + 8;
        let l = self.ln(prec + mag + 24)?;
        Ok(l.div_int(&BigInt::from(n)).with_prec(prec + mag + 24).exp(prec))
    }

    /// Decimal scientific notation with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let digits = digits.max(1);
        let neg = self.is_negative_value();
        let mag = self.abs();
        let mut k = mag.log10_abs_f64().floor() as i64 - digits as i64 + 1;
        let mut n;
        loop {
            n = scaled_round(&mag, k);
            let len = n.to_string().len();
            if len > digits {
                k += 1;
            } else if len < digits && !n.is_zero() {
                k -= 1;
            } else {
                break;
            }
        }
        let s = n.to_string();
        let e10 = k + digits as i64 - 1;
        let body = if s.len() > 1 { format!("{}.{}", &s[..1], &s[1..]) } else { s };
        format!("{}{}e{}", if neg { "-" } else { "" }, body, e10)
    }

    fn is_negative_value(&self) -> bool {
        self.mant.is_negative()
    }
}

/// `round(x / 10^k)` for positive `x`, exact.
fn scaled_round(x: &BigReal, k: i64) -> BigInt {
    let ten = BigInt::from(10);
    let mut num = x.mant.clone();
    let mut den = BigInt::one();
    if x.exp >= 0 {
        num <<= x.exp as u64;
    } else {
        den <<= (-x.exp) as u64;
    }
    if k >= 0 {
        den *= ten.pow(k as u32);
    } else {
        num *= ten.pow((-k) as u32);
    }
    let (q, r) = num.div_rem(&den);
    if (r << 1u32) >= den {
        q + 1
    } else {
        q
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_sci_string(20))
    }
}

/// `atanh(s)` in fixed point with scale `2^w`, for `|s| <= 1/5`.
fn atanh_fixed(s: &BigInt, w: u64) -> BigInt {
    let neg = s.is_negative();
    let s = s.abs();
    let s2 = (&s * &s) >> w;
    let mut sum = s.clone();
    let mut term = s;
    let mut k: u64 = 1;
    loop {
        term = (&term * &s2) >> w;
        if term.is_zero() {
            break;
        }
        sum += &term / BigInt::from(2 * k + 1);
        k += 1;
    }
    if neg {
        -sum
    } else {
        sum
    }
}

static LN2_CACHE: Mutex<Option<(u64, BigInt)>> = Mutex::new(None);

/// `ln 2` in fixed point with scale `2^w` (truncated), cached across calls.
fn ln2_fixed(w: u64) -> BigInt {
    {
        let guard = LN2_CACHE.lock().expect("ln2 cache poisoned");
        if let Some((cw, v)) = guard.as_ref() {
            if *cw >= w {
                return v >> (cw - w);
            }
        }
    }
    // ln 2 = 2 atanh(1/3) = 2 * sum 1 / ((2k+1) 3^(2k+1)).
    let wg = (w + 64).max(256);
    let mut t = (BigInt::one() << wg) / BigInt::from(3);
    let mut sum = t.clone();
    let nine = BigInt::from(9);
    let mut k: u64 = 1;
    loop {
        t /= &nine;
        if t.is_zero() {
            break;
        }
        sum += &t / BigInt::from(2 * k + 1);
        k += 1;
    }
    sum <<= 1u32;
    let mut guard = LN2_CACHE.lock().expect("ln2 cache poisoned");
    *guard = Some((wg, sum.clone()));
    sum >> (wg - w)
}

/// `ln 2` with absolute error `< 2^-prec`.
pub fn ln2(prec: u32) -> BigReal {
    let w = prec as u64 + 8;
    BigReal::round_to(ln2_fixed(w), -(w as i64), prec + 8)
}

/// `|q|` for a quadratic-field element, relative error `< 2^-prec`.
///
/// When the rational and irrational parts cancel, the value is computed from
/// the exact norm as `|N(q)| / |conj(q)|`, so no precision is lost.
pub fn quad_abs(q: &QuadElem, prec: u32) -> Result<BigReal> {
    if q.is_zero() {
        return Err(Error::ZeroArgument);
    }
    let wp = prec + 16;
    if q.is_rational() {
        return Ok(BigReal::from_ratio(q.x(), wp).abs().with_prec(prec));
    }
    let sd = BigReal::from_int(q.d(), wp).sqrt();
    let xr = BigReal::from_ratio(q.x(), wp);
    let yr = BigReal::from_ratio(q.y(), wp).mul(&sd);
    let cancels = xr.signum() * yr.signum() < 0;
    if !cancels {
        return Ok(xr.add(&yr).abs().with_prec(prec));
    }
    let conj = xr.sub(&yr).abs();
    let n = BigReal::from_ratio(&q.norm(), wp).abs();
    Ok(n.div(&conj).with_prec(prec))
}

/// `log |q|` with absolute error `< 2^-prec`.
pub fn eval_log(q: &QuadElem, prec: u32) -> Result<BigReal> {
    let x = quad_abs(q, prec + 8)?;
    x.ln(prec + 2)
}

/// A real number that can be re-evaluated at any precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RealSpec {
    /// `log |q|` for an element of a quadratic field.
    LogAbs(QuadElem),
    /// An exact rational value.
    Exact(BigRational),
}

impl RealSpec {
    /// Value with absolute error `< 2^-prec`.
    pub fn eval(&self, prec: u32) -> Result<BigReal> {
        match self {
            RealSpec::LogAbs(q) => eval_log(q, prec),
            RealSpec::Exact(r) => {
                let mag = (bits(r.numer()) as i64 - bits(r.denom()) as i64).max(0) as u32;
                Ok(BigReal::from_ratio(r, prec + mag + 4))
            }
        }
    }
}

/// `floor(C * eta)`, certified by agreement at two precisions.
///
/// The first evaluation uses `log2 C + 64` bits of absolute accuracy for
/// `eta`, the second twice that; both must agree and sit at least `2^-60`
/// away from an integer.  Up to four precision doublings are attempted before
/// [`Error::PrecisionUnstable`] is returned.
pub fn stable_floor(c: &BigInt, eta: &RealSpec) -> Result<BigInt> {
    if let RealSpec::Exact(r) = eta {
        return Ok((r * BigRational::from_integer(c.clone())).floor().to_integer());
    }
    let cb = bits(c) as u32;
    let mut p = cb + 64;
    let margin = BigReal::from_parts(BigInt::one(), -60, 64);
    let eval = |prec: u32| -> Result<(BigInt, bool)> {
        let e = eta.eval(prec)?;
        let v = e.mul(&BigReal::from_int(c, cb + 2));
        Ok((v.floor(), v.dist_to_int().cmp_real(&margin) == Ordering::Greater))
    };
    for _ in 0..5 {
        let (f1, ok1) = eval(p)?;
        let (f2, ok2) = eval(2 * p)?;
        if ok1 && ok2 && f1 == f2 {
            return Ok(f1);
        }
        p *= 2;
    }
    Err(Error::PrecisionUnstable(format!("floor(C*eta) with log2 C = {cb} is too close to an integer")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn phi() -> QuadElem {
        QuadElem::new(BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into()), BigInt::from(5))
    }

    #[test]
    fn ln2_digits() {
        let s = ln2(200).to_sci_string(40);
        assert_eq!(s, "6.931471805599453094172321214581765680755e-1");
    }

    #[test]
    fn exp_ln_roundtrip() {
        let x = BigReal::from_i64(10, 300);
        let l = x.ln(300).unwrap();
        let back = l.exp(300);
        let err = back.sub(&x).abs();
        assert!(err.log2_abs_f64() < -280.0);
        let e1 = BigReal::from_i64(1, 200).exp(200).to_sci_string(30);
        assert_eq!(e1, "2.71828182845904523536028747135e0");
    }

    #[test]
    fn stable_floor_examples() {
        let c = BigInt::from(10).pow(30);
        let two = RealSpec::LogAbs(QuadElem::from_int(2, &BigInt::one()));
        assert_eq!(stable_floor(&c, &two).unwrap().to_string(), "693147180559945309417232121458");
        let lphi = RealSpec::LogAbs(phi());
        assert_eq!(stable_floor(&BigInt::from(1_000_000), &lphi).unwrap(), BigInt::from(481211));
    }

    #[test]
    fn floor_of_negative_values() {
        let x = BigReal::from_f64(-2.5, 53);
        assert_eq!(x.floor(), BigInt::from(-3));
        assert_eq!(x.ceil(), BigInt::from(-2));
        assert_eq!(BigReal::from_f64(2.5, 53).floor(), BigInt::from(2));
    }

    #[test]
    fn quad_abs_uses_norm_under_cancellation() {
        let beta = phi().conj();
        let b = quad_abs(&beta.pow(40), 200).unwrap();
        let expected = quad_abs(&phi(), 200).unwrap().powi(40, 200);
        let rel = b.mul(&expected).sub(&BigReal::from_i64(1, 200)).abs();
        assert!(rel.log2_abs_f64() < -180.0);
    }

    #[test]
    fn roots_and_sqrt() {
        let two = BigReal::from_i64(2, 200);
        let s = two.sqrt();
        assert_eq!(s.to_sci_string(30), "1.41421356237309504880168872421e0");
        let c = BigReal::from_i64(27, 200).root(3, 200).unwrap();
        assert!(c.sub(&BigReal::from_i64(3, 200)).abs().log2_abs_f64() < -190.0);
    }

    #[test]
    fn sci_string_of_huge_numbers() {
        let x = BigReal::from_int(&BigInt::from(10).pow(500), 64);
        assert_eq!(x.to_sci_string(5), "1.0000e500");
    }
}
