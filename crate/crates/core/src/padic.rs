//! Arithmetic, valuations and logarithms in the completion `L = Q_p(sqrt(Delta0))`.
//!
//! Three shapes of `L` occur:
//!
//! * **split** — `Delta0` is a square in `Q_p`; `L = Q_p` and an element of
//!   `K` is embedded through a Hensel-lifted root `r` of `X^2 = Delta0`;
//! * **inert** — `L/Q_p` unramified of degree 2;
//! * **ramified** — `L/Q_p` totally ramified of degree 2.
//!
//! In the non-split shapes elements are written on the integral basis
//! `{1, omega}` with `omega^2 = c1 omega + c0` (`omega = sqrt(Delta0)`, or
//! `(1 + sqrt(Delta0))/2` over `Q_2` when `Delta0 = 1 mod 4`).
//!
//! A [`PadicElem`] is `p^scale * (x + y omega) + O(p^(scale + prec))` with the
//! pair `(x, y)` not divisible by `p`; its *relative* precision is `prec`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::{legendre, mod_inverse, ord_p, ord_p_rational, sqrt_mod_prime};
use crate::error::{Error, Result};
use crate::quad::QuadElem;

/// How `p` behaves in `Q(sqrt(Delta0))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Split,
    Inert,
    Ramified,
}

/// Ramification index, residue degree and the derived degrees of `L/Q_p`.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize)]
pub struct RamificationData {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// `[L : Q_p] = e f`.
    pub d_l: u32,
    /// `[K : Q] / f`.
    #[serde(serialize_with = "ser_ratio")]
    pub big_d: Rational64,
}

fn ser_ratio<S: serde::Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Splitting type of `p` in `Q(sqrt(delta0))`.
pub fn mode_of(p: u64, delta0: &BigInt) -> Mode {
    if delta0.is_one() {
        return Mode::Split;
    }
    if p == 2 {
        let r = delta0.mod_floor(&BigInt::from(8)).to_u64().expect("residue");
        return match r {
            1 => Mode::Split,
            5 => Mode::Inert,
            _ => Mode::Ramified,
        };
    }
    match legendre(delta0, p) {
        0 => Mode::Ramified,
        1 => Mode::Split,
        _ => Mode::Inert,
    }
}

/// `(e, f, d_L, D)` for the prime `p` and square-free `delta0`.
pub fn ramification_data(p: u64, delta0: &BigInt) -> RamificationData {
    let d_k: i64 = if delta0.is_one() { 1 } else { 2 };
    let (e, f) = match mode_of(p, delta0) {
        Mode::Split => (1, 1),
        Mode::Inert => (1, 2),
        Mode::Ramified => (2, 1),
    };
    RamificationData { p, e, f, d_l: (e * f).min(2), big_d: Rational64::new(d_k, f as i64) }
}

/// The local field `L` with the data needed to embed elements of `K`.
#[derive(Debug)]
pub struct LocalField {
    p: u64,
    pb: BigInt,
    mode: Mode,
    delta0: BigInt,
    /// Split shape: root of `X^2 = delta0` modulo `p^root_prec`.
    root: BigInt,
    root_prec: u32,
    /// Non-split shapes: `omega^2 = c1 omega + c0`.
    c1: BigInt,
    c0: BigInt,
    omega_half: bool,
}

fn lift_root(p: u64, d0: &BigInt, k: u32) -> BigInt {
    if d0.is_one() {
        return BigInt::one();
    }
    let pb = BigInt::from(p);
    if p == 2 {
        // Bit-by-bit lifting of the root congruent to 1 mod 4.
        let mut r = BigInt::one();
        // r^2 = d0 mod 8 holds for r = 1 because d0 = 1 mod 8.
        for j in 3..=(k + 1) {
            let m = BigInt::one() << (j + 1);
            if !((&r * &r - d0).mod_floor(&m)).is_zero() {
                r += BigInt::one() << (j - 1);
            }
        }
        return r.mod_floor(&(BigInt::one() << k.max(1)));
    }
    let r0 = sqrt_mod_prime(d0, p).expect("split prime has a square root");
    let mut r = BigInt::from(r0);
    let mut have = 1u32;
    while have < k {
        have = (2 * have).min(k);
        let m = pb.pow(have);
        let inv = mod_inverse(&(BigInt::from(2) * &r), &m).expect("2r is a unit");
        r = (&r - (&r * &r - d0) * inv).mod_floor(&m);
    }
    r.mod_floor(&pb.pow(k.max(1)))
}

impl LocalField {
    /// Local field for `p` over `Q(sqrt(delta0))`, with split-shape embeddings
    /// accurate to `root_prec` digits.
    pub fn new(p: u64, delta0: &BigInt, root_prec: u32) -> Arc<LocalField> {
        let mode = mode_of(p, delta0);
        let root_prec = root_prec.max(8);
        let (root, c1, c0, omega_half) = match mode {
            Mode::Split => (lift_root(p, delta0, root_prec), BigInt::zero(), BigInt::zero(), false),
            _ => {
                if p == 2 && delta0.mod_floor(&BigInt::from(4)).is_one() {
                    (BigInt::zero(), BigInt::one(), (delta0 - 1) / 4, true)
                } else {
                    (BigInt::zero(), BigInt::zero(), delta0.clone(), false)
                }
            }
        };
        Arc::new(LocalField {
            p,
            pb: BigInt::from(p),
            mode,
            delta0: delta0.clone(),
            root,
            root_prec,
            c1,
            c0,
            omega_half,
        })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn delta0(&self) -> &BigInt {
        &self.delta0
    }

    /// Residue degree `f`.
    pub fn residue_degree(&self) -> u32 {
        if self.mode == Mode::Inert {
            2
        } else {
            1
        }
    }

    /// Precision (in digits) of the split-shape embedding.
    pub fn root_prec(&self) -> u32 {
        self.root_prec
    }

    /// The chosen square root of `Delta0` modulo `p^root_prec` (split shape).
    pub fn root(&self) -> &BigInt {
        &self.root
    }

    fn pk(&self, k: u32) -> BigInt {
        self.pb.pow(k)
    }

    fn zero_elem(self: &Arc<Self>, abs: i64) -> PadicElem {
        PadicElem { field: Arc::clone(self), scale: abs, x: BigInt::zero(), y: BigInt::zero(), prec: 0 }
    }

    fn make(self: &Arc<Self>, scale: i64, x: BigInt, y: BigInt, prec: i64) -> PadicElem {
        if prec <= 0 {
            return self.zero_elem(scale + prec.max(0));
        }
        let prec = prec as u32;
        let m = self.pk(prec);
        let x = x.mod_floor(&m);
        let y = y.mod_floor(&m);
        if x.is_zero() && y.is_zero() {
            return self.zero_elem(scale + prec as i64);
        }
        let mut j = u64::MAX;
        if !x.is_zero() {
            j = j.min(ord_p(&x, self.p));
        }
        if !y.is_zero() {
            j = j.min(ord_p(&y, self.p));
        }
        if j == 0 {
            return PadicElem { field: Arc::clone(self), scale, x, y, prec };
        }
        let d = self.pk(j as u32);
        PadicElem { field: Arc::clone(self), scale: scale + j as i64, x: x / &d, y: y / &d, prec: prec - j as u32 }
    }

    /// The integer `n` with relative precision `prec`.
    pub fn from_int(self: &Arc<Self>, n: &BigInt, prec: u32) -> PadicElem {
        self.from_rational(&BigRational::from_integer(n.clone()), prec)
    }

    /// A rational number with relative precision `prec`.
    pub fn from_rational(self: &Arc<Self>, q: &BigRational, prec: u32) -> PadicElem {
        if q.is_zero() {
            return self.zero_elem(i64::MAX / 4);
        }
        let v = ord_p_rational(q, self.p);
        let (n, d) = (q.numer(), q.denom());
        let on = ord_p(n, self.p);
        let od = ord_p(d, self.p);
        let m = self.pk(prec);
        let nu = n / self.pk(on as u32);
        let du = d / self.pk(od as u32);
        let unit = (nu * mod_inverse(&du, &m).expect("unit")).mod_floor(&m);
        self.make(v, unit, BigInt::zero(), prec as i64)
    }

    /// Coordinates of `q` on the basis `{1, omega}` (non-split shapes).
    fn basis_coords(&self, q: &QuadElem) -> (BigRational, BigRational) {
        if self.omega_half {
            // sqrt(d) = 2 omega - 1
            (q.x() - q.y(), q.y() * BigRational::from_integer(BigInt::from(2)))
        } else {
            (q.x().clone(), q.y().clone())
        }
    }

    /// Embed an element of `K`, aiming for relative precision `prec`.
    ///
    /// In the split shape the attainable precision is limited by the
    /// precision of the embedding root; the result records what was achieved.
    pub fn from_quad(self: &Arc<Self>, q: &QuadElem, prec: u32) -> Result<PadicElem> {
        if q.is_zero() {
            return Err(Error::ZeroArgument);
        }
        debug_assert!(q.d() == &self.delta0 || q.is_rational());
        match self.mode {
            Mode::Split => {
                // q = (nx*dy + ny*dx*r) / (dx*dy)
                let (nx, dx) = (q.x().numer(), q.x().denom());
                let (ny, dy) = (q.y().numer(), q.y().denom());
                let k = self.root_prec;
                let m = self.pk(k);
                let num = (nx * dy + ny * dx * &self.root).mod_floor(&m);
                let den = dx * dy;
                let od = ord_p(&den, self.p) as i64;
                if num.is_zero() {
                    return Ok(self.zero_elem(k as i64 - od));
                }
                let on = ord_p(&num, self.p);
                let rel = (k - on as u32).min(prec);
                let mr = self.pk(rel);
                let nu = &num / self.pk(on as u32);
                let du = &den / self.pk(od as u32);
                let unit = (nu * mod_inverse(&du, &mr).expect("unit")).mod_floor(&mr);
                Ok(self.make(on as i64 - od, unit, BigInt::zero(), rel as i64))
            }
            _ => {
                let (cx, cy) = self.basis_coords(q);
                let vx = if cx.is_zero() { i64::MAX } else { ord_p_rational(&cx, self.p) };
                let vy = if cy.is_zero() { i64::MAX } else { ord_p_rational(&cy, self.p) };
                let s = vx.min(vy);
                let m = self.pk(prec);
                let comp = |c: &BigRational| -> BigInt {
                    if c.is_zero() {
                        return BigInt::zero();
                    }
                    let (n, d) = (c.numer(), c.denom());
                    let on = ord_p(n, self.p);
                    let od = ord_p(d, self.p);
                    let shift = on as i64 - od as i64 - s;
                    let nu = n / self.pk(on as u32);
                    let du = d / self.pk(od as u32);
                    let unit = nu * mod_inverse(&du, &m).expect("unit");
                    (unit * self.pb.pow(shift as u32)).mod_floor(&m)
                };
                Ok(self.make(s, comp(&cx), comp(&cy), prec as i64))
            }
        }
    }

    /// Exact valuation of a non-zero element of `K` (for the split shape, in
    /// the embedding fixed by the chosen root).
    pub fn valuation_of(self: &Arc<Self>, q: &QuadElem) -> Result<Rational64> {
        if q.is_zero() {
            return Err(Error::ZeroArgument);
        }
        match self.mode {
            Mode::Split => {
                let n = q.norm();
                // v(q) + v(q') = v(N) and both parts of the numerator are
                // integral, so ord(N)+1 digits of the root decide v(q).
                let need = (n.numer().abs().bits() as u32) + 8;
                let f =
                    if self.root_prec >= need { Arc::clone(self) } else { LocalField::new(self.p, &self.delta0, need) };
                Ok(Rational64::from_integer(f.from_quad(q, need)?.valuation()?.to_integer()))
            }
            _ => {
                let v = ord_p_rational(&q.norm(), self.p);
                Ok(Rational64::new(v, 2))
            }
        }
    }
}

/// Truncated element of `L`.
#[derive(Clone, Debug)]
pub struct PadicElem {
    field: Arc<LocalField>,
    scale: i64,
    x: BigInt,
    y: BigInt,
    prec: u32,
}

impl PadicElem {
    pub fn field(&self) -> &Arc<LocalField> {
        &self.field
    }

    /// Whether the element is zero to its stored precision.
    pub fn is_zero_approx(&self) -> bool {
        self.prec == 0
    }

    /// Absolute precision `k`: the element is known modulo `p^k`.
    pub fn abs_prec(&self) -> i64 {
        self.scale + self.prec as i64
    }

    /// Relative precision.
    pub fn rel_prec(&self) -> u32 {
        self.prec
    }

    /// Exact valuation (a rational with denominator 1 or 2).
    pub fn valuation(&self) -> Result<Rational64> {
        if self.is_zero_approx() {
            return Err(Error::PrecisionExhausted(format!("element is zero modulo p^{}", self.abs_prec())));
        }
        match self.field.mode {
            Mode::Split | Mode::Inert => Ok(Rational64::from_integer(self.scale)),
            Mode::Ramified => {
                let f = &self.field;
                let n = &self.x * &self.x + &f.c1 * &self.x * &self.y - &f.c0 * &self.y * &self.y;
                let odd = (n.mod_floor(&f.pb)).is_zero();
                Ok(Rational64::new(2 * self.scale + odd as i64, 2))
            }
        }
    }

    pub fn neg(&self) -> PadicElem {
        self.field.make(self.scale, -self.x.clone(), -self.y.clone(), self.prec as i64)
    }

    pub fn add(&self, o: &PadicElem) -> PadicElem {
        let abs = self.abs_prec().min(o.abs_prec());
        if self.is_zero_approx() {
            return o.truncate_abs(abs);
        }
        if o.is_zero_approx() {
            return self.truncate_abs(abs);
        }
        let s = self.scale.min(o.scale);
        let prec = abs - s;
        if prec <= 0 {
            return self.field.zero_elem(abs);
        }
        let u1 = self.field.pk((self.scale - s) as u32);
        let u2 = self.field.pk((o.scale - s) as u32);
        self.field.make(s, &self.x * &u1 + &o.x * &u2, &self.y * &u1 + &o.y * &u2, prec)
    }

    pub fn sub(&self, o: &PadicElem) -> PadicElem {
        self.add(&o.neg())
    }

    /// Same element with absolute precision lowered to at most `abs`.
    pub fn truncate_abs(&self, abs: i64) -> PadicElem {
        if self.is_zero_approx() {
            return self.field.zero_elem(self.scale.min(abs));
        }
        let prec = (abs - self.scale).min(self.prec as i64);
        self.field.make(self.scale, self.x.clone(), self.y.clone(), prec)
    }

    pub fn mul(&self, o: &PadicElem) -> PadicElem {
        if self.is_zero_approx() || o.is_zero_approx() {
            // A zero O(p^A) times p^s * unit is O(p^(A+s)); scales carry A and s.
            return self.field.zero_elem(self.scale + o.scale);
        }
        let f = &self.field;
        let prec = self.prec.min(o.prec);
        let xx = &self.x * &o.x + &f.c0 * &self.y * &o.y;
        let yy = &self.x * &o.y + &self.y * &o.x + &f.c1 * &self.y * &o.y;
        f.make(self.scale + o.scale, xx, yy, prec as i64)
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<PadicElem> {
        if self.is_zero_approx() {
            return Err(Error::PrecisionExhausted("inverse of an element that is zero to precision".into()));
        }
        let f = &self.field;
        match f.mode {
            Mode::Split => {
                let m = f.pk(self.prec);
                let i = mod_inverse(&self.x, &m).expect("primitive split element is a unit");
                Ok(f.make(-self.scale, i, BigInt::zero(), self.prec as i64))
            }
            _ => {
                let m = f.pk(self.prec);
                let n = (&self.x * &self.x + &f.c1 * &self.x * &self.y - &f.c0 * &self.y * &self.y).mod_floor(&m);
                let e = if f.mode == Mode::Ramified && n.mod_floor(&f.pb).is_zero() { 1u32 } else { 0 };
                if e as u32 >= self.prec {
                    return Err(Error::PrecisionExhausted("norm not determined".into()));
                }
                let rp = self.prec - e;
                let mr = f.pk(rp);
                let nu = (&n / f.pk(e)).mod_floor(&mr);
                let ni = mod_inverse(&nu, &mr).expect("unit norm");
                let cx = (&self.x + &f.c1 * &self.y) * &ni;
                let cy = -&self.y * &ni;
                Ok(f.make(-self.scale - e as i64, cx, cy, rp as i64))
            }
        }
    }

    pub fn div(&self, o: &PadicElem) -> Result<PadicElem> {
        Ok(self.mul(&o.inv()?))
    }

    /// Non-negative power.
    pub fn pow(&self, mut e: u64) -> PadicElem {
        let mut acc = self.field.from_int(&BigInt::one(), self.prec.max(1));
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// The `Q_p` coordinate carrying the element: the whole element in the
    /// split shape, the `omega` coordinate otherwise.
    pub fn qp_part(&self, omega: bool) -> QpNum {
        let c = if omega { &self.y } else { &self.x };
        let p = self.field.p;
        if self.is_zero_approx() || c.is_zero() {
            return QpNum { p, val: self.abs_prec(), unit: BigInt::zero(), prec: 0 };
        }
        let o = ord_p(c, p) as u32;
        let prec = self.prec.saturating_sub(o);
        let m = self.field.pk(prec);
        QpNum { p, val: self.scale + o as i64, unit: (c / self.field.pk(o)).mod_floor(&m), prec }
    }

    /// Whether the element is `1` modulo its precision (used in tests).
    pub fn is_one_approx(&self) -> bool {
        let one = self.field.from_int(&BigInt::one(), self.prec.max(1));
        self.sub(&one).is_zero_approx()
    }
}

/// Truncated element of `Q_p`: `p^val * unit + O(p^(val + prec))`, `p` not
/// dividing `unit` unless `prec = 0` (then the number is `O(p^val)`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QpNum {
    pub p: u64,
    pub val: i64,
    pub unit: BigInt,
    pub prec: u32,
}

impl QpNum {
    pub fn is_zero_approx(&self) -> bool {
        self.prec == 0
    }

    /// Quotient of two truncated numbers (the divisor must be non-zero).
    pub fn div(&self, o: &QpNum) -> Result<QpNum> {
        if o.is_zero_approx() {
            return Err(Error::PrecisionExhausted("division by a number zero to precision".into()));
        }
        if self.is_zero_approx() {
            return Ok(QpNum { p: self.p, val: self.val - o.val, unit: BigInt::zero(), prec: 0 });
        }
        let prec = self.prec.min(o.prec);
        let m = BigInt::from(self.p).pow(prec);
        let i = mod_inverse(&o.unit, &m).expect("unit");
        Ok(QpNum { p: self.p, val: self.val - o.val, unit: (&self.unit * i).mod_floor(&m), prec })
    }

    /// Absolute precision.
    pub fn abs_prec(&self) -> i64 {
        self.val + self.prec as i64
    }

    /// The number modulo `p^k` as an integer in `[0, p^k)`, for `0 <= val`
    /// and `k <= abs_prec`.
    pub fn residue(&self, k: u32) -> Option<BigInt> {
        if (k as i64) > self.abs_prec() || self.val < 0 && !self.is_zero_approx() {
            return None;
        }
        let pb = BigInt::from(self.p);
        let m = pb.pow(k);
        if self.is_zero_approx() || self.val >= k as i64 {
            return Some(BigInt::zero());
        }
        Some((&self.unit * pb.pow(self.val as u32)).mod_floor(&m))
    }
}

/// `p`-adic logarithm of a unit, accurate modulo `p^k`.
///
/// The unit is first raised to `M = (p^f - 1) p^j` with `j` minimal such that
/// `nu(xi^M - 1) > 1/(p-1)`; the series `sum (-1)^(i+1) u^i / i` for
/// `u = xi^M - 1` is summed until every omitted term lies in `O(p^(k+j))`,
/// and the result is divided by `M`.
pub fn padic_log(xi: &PadicElem, k: i64) -> Result<PadicElem> {
    let v = xi.valuation()?;
    if !v.is_zero() {
        return Err(Error::NonUnit { num: *v.numer(), den: *v.denom() });
    }
    let field = Arc::clone(xi.field());
    let p = field.p;
    let q = p.pow(field.residue_degree()) - 1;
    let one = field.from_int(&BigInt::one(), xi.rel_prec() + 8);
    let threshold = Rational64::new(1, p as i64 - 1);
    let mut x1 = xi.pow(q);
    let mut j: u32 = 0;
    let u = loop {
        let u = x1.sub(&one);
        if u.is_zero_approx() {
            break u;
        }
        if u.valuation()? > threshold {
            break u;
        }
        x1 = x1.pow(p);
        j += 1;
        if j > 64 {
            return Err(Error::PrecisionExhausted("log reduction did not converge".into()));
        }
    };
    let m_int = BigInt::from(q) * BigInt::from(p).pow(j);
    let inv_m = field.from_rational(&BigRational::new(BigInt::one(), m_int), xi.rel_prec() + 8);
    if u.is_zero_approx() {
        return Ok(u.mul(&inv_m));
    }
    let vu = u.valuation()?;
    let vu_f = *vu.numer() as f64 / *vu.denom() as f64;
    let target = (k + j as i64) as f64 + 1.0;
    let lnp = (p as f64).ln();
    let mut sum = u.clone();
    let mut upow = u.clone();
    let mut i: u64 = 1;
    loop {
        let next = (i + 1) as f64;
        // The omitted tail has valuation >= i' v - log_p(i') for i' > i, and
        // that lower bound increases once i' > 1 / (v ln p).
        if next * vu_f - next.ln() / lnp >= target && next > 1.0 / (vu_f * lnp) {
            break;
        }
        i += 1;
        upow = upow.mul(&u);
        let inv_i = field.from_rational(&BigRational::new(BigInt::one(), BigInt::from(i)), upow.rel_prec() + 8);
        let term = upow.mul(&inv_i);
        sum = if i % 2 == 0 { sum.sub(&term) } else { sum.add(&term) };
    }
    // The series converges to log(x1) only modulo the tail bound.
    let sum = sum.truncate_abs(target.floor() as i64);
    Ok(sum.mul(&inv_m))
}

/// Index of the Binet tuple orientation at a prime: `alpha` is replaced by
/// `beta` (and `a` by `b`) when `alpha` is not a unit.
#[derive(Clone, Debug)]
pub struct LocalFrame {
    pub field: Arc<LocalField>,
    pub alpha: QuadElem,
    pub beta: QuadElem,
    pub a: QuadElem,
    pub b: QuadElem,
    pub swapped: bool,
    pub nu_alpha: Rational64,
    pub nu_beta: Rational64,
}

/// Orient the Binet data at `p` so that `nu_p(alpha) = 0`.
///
/// `u_n = (a alpha^n - b beta^n)/(alpha - beta)` is symmetric under
/// `(alpha, beta, a, b) -> (beta, alpha, b, a)`; dominance of `alpha` is not
/// used by any p-adic argument.
pub fn local_frame(bd: &crate::recurrence::BinetData, p: u64, root_prec: u32) -> Result<LocalFrame> {
    let field = LocalField::new(p, &bd.delta0, root_prec);
    let na = field.valuation_of(&bd.alpha)?;
    let nb = field.valuation_of(&bd.beta)?;
    if na.is_zero() {
        Ok(LocalFrame {
            field,
            alpha: bd.alpha.clone(),
            beta: bd.beta.clone(),
            a: bd.a.clone(),
            b: bd.b.clone(),
            swapped: false,
            nu_alpha: na,
            nu_beta: nb,
        })
    } else if nb.is_zero() {
        Ok(LocalFrame {
            field,
            alpha: bd.beta.clone(),
            beta: bd.alpha.clone(),
            a: bd.b.clone(),
            b: bd.a.clone(),
            swapped: true,
            nu_alpha: nb,
            nu_beta: na,
        })
    } else {
        Err(Error::HypothesisViolated(format!("{p} divides both characteristic roots")))
    }
}

/// Digits of precision used by default for a bound `n_bound`:
/// `ceil(log_p n_bound) + 20`.
pub fn default_precision(n_bound: &BigInt, p: u64) -> u32 {
    crate::arith::digits_needed(n_bound, p) as u32 + 20
}

/// Exact `nu_p(log_p(alpha/beta))`, requiring both roots to be units.
pub fn nu_log_quotient(bd: &crate::recurrence::BinetData, p: u64) -> Result<Rational64> {
    let mut prec = 64;
    for _ in 0..6 {
        let field = LocalField::new(p, &bd.delta0, prec + 16);
        let na = field.valuation_of(&bd.alpha)?;
        let nb = field.valuation_of(&bd.beta)?;
        if !na.is_zero() || !nb.is_zero() {
            return Err(Error::NonUnit { num: *(na + nb).numer(), den: *(na + nb).denom() });
        }
        let lam = field.from_quad(&bd.alpha.div(&bd.beta)?, prec)?;
        let l = padic_log(&lam, prec as i64 / 2)?;
        if !l.is_zero_approx() {
            return l.valuation();
        }
        prec *= 2;
    }
    Err(Error::PrecisionExhausted("log(alpha/beta) vanished to working precision".into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::{binet_data, Recurrence};

    #[test]
    fn ramification_examples() {
        let five = BigInt::from(5);
        let r = ramification_data(5, &five);
        assert_eq!((r.e, r.f), (2, 1));
        let r = ramification_data(11, &five);
        assert_eq!((r.e, r.f), (1, 1));
        let r = ramification_data(2, &five);
        assert_eq!((r.e, r.f), (1, 2));
        assert_eq!(ramification_data(2, &BigInt::from(17)).f, 1);
        assert_eq!(ramification_data(2, &BigInt::from(3)).e, 2);
    }

    #[test]
    fn valuation_examples() {
        let five = BigInt::from(5);
        let f5 = LocalField::new(5, &five, 32);
        assert_eq!(f5.valuation_of(&QuadElem::from_int(5, &five)).unwrap(), Rational64::from_integer(1));
        assert_eq!(f5.valuation_of(&QuadElem::sqrt_d(&five)).unwrap(), Rational64::new(1, 2));
        let bd = binet_data(&Recurrence::fibonacci()).unwrap();
        let f2 = LocalField::new(2, &five, 32);
        assert_eq!(f2.valuation_of(&bd.alpha).unwrap(), Rational64::from_integer(0));
        // 11 splits; 11 = (4 + sqrt5)(4 - sqrt5)... up to units, one factor per embedding.
        let f11 = LocalField::new(11, &five, 32);
        let e = QuadElem::new(BigRational::from_integer(4.into()), BigRational::one(), five.clone());
        let v1 = f11.valuation_of(&e).unwrap();
        let v2 = f11.valuation_of(&e.conj()).unwrap();
        assert_eq!(v1 + v2, Rational64::from_integer(1));
    }

    #[test]
    fn log_examples() {
        let five = BigInt::from(5);
        for p in [3u64, 7, 11] {
            let f = LocalField::new(p, &five, 64);
            let one = f.from_int(&BigInt::one(), 40);
            assert!(padic_log(&one, 30).unwrap().is_zero_approx());
            let xi = f.from_int(&(BigInt::one() + BigInt::from(p * p)), 40);
            let l = padic_log(&xi, 30).unwrap();
            assert_eq!(l.valuation().unwrap(), Rational64::from_integer(2));
        }
    }

    #[test]
    fn field_arithmetic_roundtrip() {
        let five = BigInt::from(5);
        for p in [2u64, 3, 5, 11] {
            let f = LocalField::new(p, &five, 80);
            let bd = binet_data(&Recurrence::fibonacci()).unwrap();
            let a = f.from_quad(&bd.alpha, 40).unwrap();
            let b = f.from_quad(&bd.beta, 40).unwrap();
            // alpha * beta = -1
            let prod = a.mul(&b);
            let minus_one = f.from_int(&BigInt::from(-1), 40);
            assert!(prod.sub(&minus_one).is_zero_approx(), "p = {p}");
            let q = a.div(&b).unwrap();
            let direct = f.from_quad(&bd.alpha.div(&bd.beta).unwrap(), 40).unwrap();
            assert!(q.sub(&direct).is_zero_approx(), "p = {p}");
        }
    }

    #[test]
    fn fibonacci_log_quotient_valuations_are_small() {
        let bd = binet_data(&Recurrence::fibonacci()).unwrap();
        for p in crate::arith::primes_below(200) {
            let v = nu_log_quotient(&bd, p).unwrap();
            assert!(v <= Rational64::from_integer(2) && v > Rational64::from_integer(0), "p = {p}: {v}");
        }
    }
}
