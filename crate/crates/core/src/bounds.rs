//! Explicit constants of the method and the bound bookkeeping.
//!
//! Every constant is evaluated with [`PREC`]-bit binary floating point and
//! recorded in a [`ConstantLedger`] together with the formula that produced
//! it.  Final upper bounds are nudged upward by a relative `2^-200` so that
//! rounding can never turn a valid bound into an invalid one.
//!
//! Where the closed forms of the constant list are not valid upper bounds as
//! printed, the safe reading is used and documented at the definition:
//!
//! * `c9` and `c10` bound the valuation and height of `a(alpha^t+1)` and of
//!   `tau(t)` through both conjugates (the single-conjugate forms fail at split
//!   primes and when `|beta| < 1/2`);
//! * `c8` uses the factor `max{2 log|alpha|, log p}`;
//! * `c19` uses `log(2(1+2|b|/|a|))` in the numerator and the minimum
//!   `min{|alpha/beta|, |alpha|}` in the denominator;
//! * `c13`, `c18` and `c20` call [`pdw_bound`] directly and also record the
//!   expanded shorthands, taking the maximum of both;
//! * `c20` additionally covers the `n - m <= c17` branch and the range in which
//!   `max{z_i, n} < n^2` may fail.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mpreal::{quad_abs, BigReal};
use crate::padic::{local_frame, nu_log_quotient, ramification_data};
use crate::quad::QuadElem;
use crate::recurrence::{height_real, BinetData, Instance};

/// Working precision of the constant evaluation, in bits.
pub const PREC: u32 = 256;

fn real(n: i64) -> BigReal {
    BigReal::from_i64(n, PREC)
}

fn ratio(n: i64, d: i64) -> BigReal {
    real(n).div(&real(d))
}

fn ln(x: &BigReal) -> Result<BigReal> {
    if !x.is_positive() {
        return Err(Error::InvalidInput(format!("logarithm of non-positive value {}", x.to_sci_string(6))));
    }
    x.ln(PREC)
}

fn log_star(x: &BigReal) -> Result<BigReal> {
    Ok(ln(x)?.max(&BigReal::zero(PREC)))
}

fn rat64(q: Rational64) -> BigReal {
    ratio(*q.numer(), *q.denom())
}

/// Relative upward nudge applied to finished upper bounds.
fn up(x: &BigReal) -> BigReal {
    x.add(&x.abs().mul_pow2(-200))
}

fn e_squared() -> BigReal {
    real(2).exp(PREC)
}

/// Upper bound for the largest solution of `x = u + v (log x)^h`.
///
/// Returns `max{2^h (u^(1/h) + v^(1/h) log(h^h v))^h, 2^h (u^(1/h) + 2e^2)^h}`.
/// With `v = 0` the equation reads `x = u` and `u` itself is returned.  A
/// first branch whose inner sum is not positive is dropped (the second branch
/// dominates).
pub fn pdw_bound(u: &BigReal, v: &BigReal, h: &BigReal) -> Result<BigReal> {
    let one = real(1);
    if u.signum() < 0 || v.signum() < 0 || h.cmp_real(&one) == Ordering::Less {
        return Err(Error::InvalidInput("pdw_bound needs u, v >= 0 and h >= 1".into()));
    }
    let inv_h = one.div(h);
    let root = |x: &BigReal| -> Result<BigReal> {
        if x.is_zero() {
            Ok(BigReal::zero(PREC))
        } else {
            x.pow(&inv_h, PREC)
        }
    };
    if v.is_zero() {
        return Ok(u.clone());
    }
    let two_h = real(2).pow(h, PREC)?;
    let uh = root(u)?;
    let second = two_h.mul(&uh.add(&real(2).mul(&e_squared())).pow(h, PREC)?);
    let inner = h.mul(&ln(h)?).add(&ln(v)?);
    let s = uh.add(&root(v)?.mul(&inner));
    let mut best = second;
    if s.is_positive() {
        best = best.max(&two_h.mul(&s.pow(h, PREC)?));
    }
    Ok(up(&best))
}

/// `C1(p) = 947 p^f / (log p)^4`.
pub fn c1_p(p: u64, f: u32) -> Result<BigReal> {
    let pb = BigReal::from_int(&BigInt::from(p).pow(f), PREC);
    let l = ln(&BigReal::from_int(&BigInt::from(p), PREC))?;
    let l2 = l.mul(&l);
    Ok(up(&real(947).mul(&pb).div(&l2.mul(&l2))))
}

/// `C2(n) = 2.31 * 60^(n+3) * n^4.5`.
pub fn c2_n(n: u32) -> Result<BigReal> {
    if n < 2 {
        return Err(Error::InvalidInput("C2(n) needs n >= 2".into()));
    }
    let sixty = BigReal::from_int(&BigInt::from(60).pow(n + 3), PREC);
    let nr = real(n as i64);
    let n45 = nr.powi(4, PREC).mul(&nr.sqrt());
    Ok(up(&ratio(231, 100).mul(&sixty).mul(&n45)))
}

/// One recorded constant.
#[derive(Clone, Debug, Serialize)]
pub struct ConstEntry {
    pub name: String,
    pub formula: String,
    #[serde(serialize_with = "ser_real")]
    pub value: BigReal,
    pub log10: f64,
}

fn ser_real<S: serde::Serializer>(v: &BigReal, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_sci_string(20))
}

/// Named constants with the formula that produced each of them.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ConstantLedger {
    pub entries: Vec<ConstEntry>,
}

impl ConstantLedger {
    pub fn push(&mut self, name: impl Into<String>, formula: impl Into<String>, value: &BigReal) {
        let log10 = if value.is_zero() { f64::NEG_INFINITY } else { value.log10_abs_f64() };
        self.entries.push(ConstEntry { name: name.into(), formula: formula.into(), value: value.clone(), log10 });
    }

    /// Value of a scalar constant.
    pub fn get(&self, name: &str) -> Option<&BigReal> {
        self.entries.iter().find(|e| e.name == name).map(|e| &e.value)
    }

    /// Entries `name[0]`, `name[1]`, ... of a per-prime constant.
    pub fn vector(&self, name: &str) -> Vec<&BigReal> {
        let prefix = format!("{name}[");
        self.entries.iter().filter(|e| e.name.starts_with(&prefix)).map(|e| &e.value).collect()
    }
}

/// Real quantities of an instance shared by all constants.
#[derive(Clone, Debug)]
pub struct InstanceReals {
    pub abs_a: BigReal,
    pub abs_b: BigReal,
    pub abs_alpha: BigReal,
    pub abs_beta: BigReal,
    pub log_alpha: BigReal,
    pub log_beta: BigReal,
    pub log_ab_ratio: BigReal,
    pub sqrt_delta: BigReal,
    pub abs_w: BigReal,
    pub log_p: Vec<BigReal>,
    pub max_p: BigReal,
    /// `log min{|alpha/beta|, |alpha|}`.
    pub c4_tilde: BigReal,
}

impl InstanceReals {
    pub fn new(inst: &Instance, bd: &BinetData) -> Result<Self> {
        let abs_a = quad_abs(&bd.a, PREC)?;
        let abs_b = quad_abs(&bd.b, PREC)?;
        let abs_alpha = quad_abs(&bd.alpha, PREC)?;
        let abs_beta = quad_abs(&bd.beta, PREC)?;
        let log_alpha = ln(&abs_alpha)?;
        let log_beta = ln(&abs_beta)?;
        let log_ab_ratio = log_alpha.sub(&log_beta);
        let sqrt_delta = BigReal::from_int(&bd.delta, PREC).sqrt();
        let abs_w = BigReal::from_int(&inst.w.abs(), PREC);
        let log_p =
            inst.primes.iter().map(|&p| ln(&BigReal::from_int(&BigInt::from(p), PREC))).collect::<Result<Vec<_>>>()?;
        let max_p = BigReal::from_int(&BigInt::from(inst.max_prime()), PREC);
        let c4_tilde = log_ab_ratio.min(&log_alpha);
        Ok(InstanceReals {
            abs_a,
            abs_b,
            abs_alpha,
            abs_beta,
            log_alpha,
            log_beta,
            log_ab_ratio,
            sqrt_delta,
            abs_w,
            log_p,
            max_p,
            c4_tilde,
        })
    }
}

/// Constants `c1..c5` bounding `|u_n + u_m|` and the exponents.
#[derive(Clone, Debug)]
pub struct GrowthConstants {
    pub c1: BigReal,
    pub c2: BigReal,
    pub c3: BigReal,
    pub c4: BigReal,
    pub c5: BigReal,
}

/// `c1 = 2(|a|+|b|)/sqrt(Delta)`, `c2 = log*(c1/|w|)/log|alpha|`,
/// `c3 = max` of `log*(4|b|phi/(|a|(phi-1)))` over `log|alpha|` and over
/// `log|alpha/beta|`, `c4 = |a|(phi-1)/(2 phi sqrt(Delta))`,
/// `c5 = log(|w|/c4)/log|alpha|`.
pub fn growth_constants(r: &InstanceReals) -> Result<GrowthConstants> {
    let c1 = real(2).mul(&r.abs_a.add(&r.abs_b)).div(&r.sqrt_delta);
    let c2 = log_star(&c1.div(&r.abs_w))?.div(&r.log_alpha);
    let phi = real(1).add(&real(5).sqrt()).div(&real(2));
    let phi_m1 = phi.sub(&real(1));
    let q = real(4).mul(&r.abs_b).mul(&phi).div(&r.abs_a.mul(&phi_m1));
    let lq = log_star(&q)?;
    let c3 = lq.div(&r.log_alpha).max(&lq.div(&r.log_ab_ratio));
    let c4 = r.abs_a.mul(&phi_m1).div(&real(2).mul(&phi).mul(&r.sqrt_delta));
    let c5 = ln(&r.abs_w.div(&c4))?.div(&r.log_alpha);
    Ok(GrowthConstants { c1: up(&c1), c2: up(&c2), c3: up(&c3), c4: c4.sub(&c4.abs().mul_pow2(-200)), c5: up(&c5) })
}

/// Exact local data of one prime of the set.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeData {
    pub p: u64,
    pub e: u32,
    pub f: u32,
    /// Whether the roots were swapped so that the first one is a unit.
    pub swapped: bool,
    /// Both roots are units at `p`.
    pub unit_roots: bool,
    /// `nu_p(log_p(alpha/beta))` when both roots are units.
    #[serde(serialize_with = "ser_opt_ratio")]
    pub nu_log: Option<Rational64>,
    /// `nu_p` of the leading coefficient of the unit root.
    #[serde(serialize_with = "ser_ratio")]
    pub nu_a: Rational64,
    /// `nu_p` of the other leading coefficient.
    #[serde(serialize_with = "ser_ratio")]
    pub nu_b: Rational64,
    /// `nu_p` of the non-unit root (zero when both are units).
    #[serde(serialize_with = "ser_ratio")]
    pub nu_beta: Rational64,
    /// `nu_p(alpha - beta)`.
    #[serde(serialize_with = "ser_ratio")]
    pub nu_sqrt_delta: Rational64,
}

fn ser_ratio<S: serde::Serializer>(v: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

fn ser_opt_ratio<S: serde::Serializer>(v: &Option<Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(q) => s.serialize_str(&q.to_string()),
        None => s.serialize_none(),
    }
}

/// Local data at `p`: ramification, orientation and exact valuations.
pub fn prime_data(bd: &BinetData, p: u64) -> Result<PrimeData> {
    let rd = ramification_data(p, &bd.delta0);
    let frame = local_frame(bd, p, 64)?;
    let unit_roots = frame.nu_beta.is_zero();
    let nu_log = if unit_roots { Some(nu_log_quotient(bd, p)?) } else { None };
    let nu_a = frame.field.valuation_of(&frame.a)?;
    let nu_b = frame.field.valuation_of(&frame.b)?;
    let nu_sqrt_delta = frame.field.valuation_of(&bd.alpha_minus_beta())?;
    Ok(PrimeData {
        p,
        e: rd.e,
        f: rd.f,
        swapped: frame.swapped,
        unit_roots,
        nu_log,
        nu_a,
        nu_b,
        nu_beta: frame.nu_beta,
        nu_sqrt_delta,
    })
}

/// Constants of the bound `n < c7 (n-m)(log n)^2`, `z_i < c8_i (n-m)(log n)^2`.
#[derive(Clone, Debug)]
pub struct PadicBoundConstants {
    pub c6: BigReal,
    pub c7: BigReal,
    pub c8: Vec<BigReal>,
    pub c9: Vec<BigReal>,
    pub c10: Vec<BigReal>,
    pub c11: Vec<BigReal>,
}

/// Per-`t` growth rates of `log|a(alpha^t+1)|` and `log|b(beta^t+1)|`:
/// `Ea = max{log|2a alpha|, log|alpha|}` and
/// `Eb = max{log|2b| + log*|beta|, log*|beta|}`, so that both logarithms are
/// at most `t Ea` and `t Eb` for every `t >= 1`.
fn growth_rates(r: &InstanceReals) -> Result<(BigReal, BigReal)> {
    let ea = ln(&real(2).mul(&r.abs_a).mul(&r.abs_alpha))?.max(&r.log_alpha);
    let lsb = r.log_beta.max(&BigReal::zero(PREC));
    let eb = ln(&real(2).mul(&r.abs_b))?.add(&lsb).max(&lsb);
    Ok((ea, eb))
}

/// `c6 .. c11` with the safe readings described in the module documentation.
pub fn padic_bound_constants(
    bd: &BinetData,
    r: &InstanceReals,
    l2: &GrowthConstants,
    primes: &[PrimeData],
) -> Result<PadicBoundConstants> {
    let (ea, eb) = growth_rates(r)?;
    let emax = ea.max(&eb);
    let split_sum = ea.add(&eb);
    let p10 = r.max_p.powi(10, PREC);
    let e10 = real(10).exp(PREC);
    let dep = ratio(175, 10).mul(&r.log_alpha).mul(&emax.add(&ratio(24, 100)));
    let c6 = l2.c3.max(&dep).max(&p10).max(&e10);
    let log_c1 = log_star(&l2.c1)?;
    let mut c8 = Vec::new();
    let mut c9 = Vec::new();
    let mut c10 = Vec::new();
    let mut c11 = Vec::new();
    for (pd, lp) in primes.iter().zip(&r.log_p) {
        // A split prime sees one conjugate's valuation, bounded by the norm.
        let split = pd.e == 1 && pd.f == 1 && !bd.delta0.is_one();
        let c9i = if split { split_sum.clone() } else { emax.clone() }.div(lp);
        let c10i = emax.max(lp);
        let c11i = match pd.nu_log {
            Some(nu) => rat64(nu).add(&real(2).div(lp)).add(&c9i),
            // Non-unit root: z is determined by the single m with
            // nu(tau beta^m / alpha^m) = 0, where m <= 2 t c9.
            None => c9i.add(&log_c1.add(&real(1).add(&real(2).mul(&c9i)).mul(&r.log_alpha)).div(lp)),
        };
        let c1p = c1_p(pd.p, pd.f)?;
        let factor = real(2).mul(&r.log_alpha).max(lp);
        let main = c1p.mul(&factor).mul(&c10i).add(&c9i);
        c8.push(up(&main.max(&c11i)));
        c9.push(up(&c9i));
        c10.push(up(&c10i));
        c11.push(up(&c11i));
    }
    let mut sum = BigReal::zero(PREC);
    for (c, lp) in c8.iter().zip(&r.log_p) {
        sum = sum.add(&c.mul(lp));
    }
    let c7 = sum.div(&r.log_alpha).add(&l2.c5);
    Ok(PadicBoundConstants { c6: up(&c6), c7: up(&c7), c8, c9, c10, c11 })
}

/// Bounds for the case `n = m`.
#[derive(Clone, Debug)]
pub struct EqualIndexBounds {
    pub c12: Vec<BigReal>,
    pub c13: BigReal,
    pub c14: Vec<BigReal>,
    pub c15: BigReal,
    pub c16: BigReal,
    /// `4 c15 log(4 c15)^2`, the expanded form of the independent branch.
    pub c13_shorthand: BigReal,
    /// Whether `z_1` was lowered by one (`p_1 = 2`, `w` odd) rather than `w` halved.
    pub shift_z1: bool,
}

/// `c12 .. c16` for `2 u_n = w p_1^z_1 ... p_s^z_s`.
///
/// Returns `Ok(None)` when the case has no solution (odd `w` and odd primes).
/// The p-adic lower bound uses the exact `nu_p(a) - nu_p(alpha - beta)` in
/// place of `log*|a| / log p`.
pub fn equal_index_bounds(
    inst: &Instance,
    r: &InstanceReals,
    l2: &GrowthConstants,
    primes: &[PrimeData],
) -> Result<Option<EqualIndexBounds>> {
    let w_even = (&inst.w % BigInt::from(2)).is_zero();
    let has_two = inst.primes.first() == Some(&2);
    if !w_even && !has_two {
        return Ok(None);
    }
    let shift_z1 = !w_even;
    let hab = ln(&r.abs_a)?.max(&ln(&r.abs_b)?);
    let hab_dep = hab.max(&real(1));
    let hba = r.log_alpha.max(&r.log_beta);
    let log_c1 = log_star(&l2.c1)?;
    let mut c14 = Vec::new();
    let mut dep_sum = BigReal::zero(PREC);
    for (pd, lp) in primes.iter().zip(&r.log_p) {
        let z0 = rat64(pd.nu_a - pd.nu_sqrt_delta).max(&BigReal::zero(PREC));
        let c14i = match pd.nu_log {
            Some(nu) => {
                let c1p = c1_p(pd.p, pd.f)?;
                dep_sum = dep_sum.add(&rat64(nu).mul(lp).add(&real(2)).add(&z0.mul(lp)));
                c1p.mul(&hab.max(lp)).mul(&hba.max(lp)).add(&z0)
            }
            None => {
                // The unit part b/a (beta/alpha)^n - 1 is a unit for at most one
                // n* <= 2 |nu(b) - nu(a)|; elsewhere z <= z0.
                let nstar = rat64(pd.nu_a - pd.nu_b).abs().mul(&real(2));
                let zb = log_c1.add(&nstar.mul(&r.log_alpha)).div(lp);
                dep_sum = dep_sum.add(&zb.mul(lp));
                zb.add(&z0)
            }
        };
        c14.push(up(&c14i));
    }
    let mut sum = BigReal::zero(PREC);
    for (c, lp) in c14.iter().zip(&r.log_p) {
        sum = sum.add(&c.mul(lp));
    }
    let shift = if shift_z1 { ln(&real(2))?.div(&r.log_alpha) } else { BigReal::zero(PREC) };
    let u = l2.c5.add(&shift).max(&BigReal::zero(PREC));
    let v = sum.div(&r.log_alpha);
    let c15 = v.add(&l2.c5).add(&shift);
    let c16 = dep_sum.div(&r.log_alpha);
    let indep = pdw_bound(&u, &v, &real(2))?;
    let four = real(4).mul(&c15.max(&real(1)));
    let c13_shorthand = four.mul(&ln(&four)?.powi(2, PREC));
    let dep = pdw_bound(&u, &c16.max(&BigReal::zero(PREC)), &real(1))?;
    let dep_threshold = ratio(175, 10).mul(&r.log_alpha).mul(&hab_dep);
    let p10 = r.max_p.powi(10, PREC);
    let e10 = real(10).exp(PREC);
    let c13 = indep.max(&c13_shorthand).max(&dep).max(&dep_threshold).max(&l2.c3).max(&l2.c2).max(&p10).max(&e10);
    let c13 = up(&c13);
    let c12 = r.log_p.iter().map(|lp| up(&real(2).mul(&r.log_alpha).div(lp).mul(&c13))).collect();
    Ok(Some(EqualIndexBounds {
        c12,
        c13,
        c14,
        c15: up(&c15),
        c16: up(&c16),
        c13_shorthand: up(&c13_shorthand),
        shift_z1,
    }))
}

/// Constants of the vanishing case `b beta^n - a alpha^m + b beta^m = 0`.
#[derive(Clone, Debug)]
pub struct Vanishing {
    /// `log|b/a| / log|alpha/beta|` (irrational case).
    pub c22: Option<BigReal>,
    /// `C2(3) max{0.16, log* max{|a|,|b|}} log|alpha| + 1` (rational case, `|beta| >= 2`).
    pub c23: Option<BigReal>,
    /// `max{pdw(0, c7 c23, 3), 8 c7 c23 log(27 c7 c23)^3, c6}`.
    pub c18: Option<BigReal>,
}

/// `c18`, `c22`, `c23`.  The `+1` in `c23` absorbs `log 2 / log|beta|`.
pub fn vanishing_bounds(bd: &BinetData, r: &InstanceReals, p31: &PadicBoundConstants) -> Result<Vanishing> {
    if !bd.delta0.is_one() {
        let c22 = r.abs_b.div(&r.abs_a).ln(PREC)?.div(&r.log_ab_ratio).max(&BigReal::zero(PREC));
        return Ok(Vanishing { c22: Some(up(&c22)), c23: None, c18: None });
    }
    if r.abs_beta.cmp_real(&real(2)) == Ordering::Less {
        return Ok(Vanishing { c22: None, c23: None, c18: None });
    }
    let m = r.abs_a.max(&r.abs_b);
    let c23 = c2_n(3)?.mul(&ratio(16, 100).max(&log_star(&m)?)).mul(&r.log_alpha).add(&real(1));
    let v = p31.c7.mul(&c23);
    let short = real(8).mul(&v).mul(&ln(&real(27).mul(&v))?.powi(3, PREC));
    let c18 = pdw_bound(&BigReal::zero(PREC), &v, &real(3))?.max(&short).max(&p31.c6);
    Ok(Vanishing { c22: None, c23: Some(up(&c23)), c18: Some(up(&c18)) })
}

/// Which justification produced a bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    Initial,
    AfterRealReduction,
    AfterPadicReduction,
    Final,
}

/// One step of the bound history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub stage: Stage,
    #[serde(with = "crate::json::bigint")]
    pub n: BigInt,
    #[serde(with = "crate::json::vec_bigint")]
    pub z: Vec<BigInt>,
    #[serde(with = "crate::json::opt_bigint")]
    pub t: Option<BigInt>,
    pub justification: String,
}

/// Inclusive bounds `n <= N`, `z_i <= Z_i`, `n - m <= T` with their history.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundState {
    #[serde(with = "crate::json::bigint")]
    pub n: BigInt,
    #[serde(with = "crate::json::vec_bigint")]
    pub z: Vec<BigInt>,
    #[serde(with = "crate::json::opt_bigint")]
    pub t: Option<BigInt>,
    pub stage: Stage,
    pub history: Vec<HistoryEntry>,
}

impl BoundState {
    pub fn new(n: BigInt, z: Vec<BigInt>, justification: impl Into<String>) -> Self {
        let entry = HistoryEntry {
            stage: Stage::Initial,
            n: n.clone(),
            z: z.clone(),
            t: None,
            justification: justification.into(),
        };
        BoundState { n, z, t: None, stage: Stage::Initial, history: vec![entry] }
    }

    /// Record new bounds; each component keeps the smaller of old and new, so
    /// the history is monotone by construction.
    pub fn update(
        &mut self,
        stage: Stage,
        n: &BigInt,
        z: &[BigInt],
        t: Option<&BigInt>,
        justification: impl Into<String>,
    ) {
        if n < &self.n {
            self.n = n.clone();
        }
        for (cur, new) in self.z.iter_mut().zip(z) {
            if new < cur {
                *cur = new.clone();
            }
        }
        if let Some(t) = t {
            self.t = Some(match &self.t {
                Some(cur) if cur <= t => cur.clone(),
                _ => t.clone(),
            });
        }
        self.stage = stage;
        self.history.push(HistoryEntry {
            stage,
            n: self.n.clone(),
            z: self.z.clone(),
            t: self.t.clone(),
            justification: justification.into(),
        });
    }
}

/// Everything produced by the initial bound computation.
#[derive(Clone, Debug)]
pub struct InitialBounds {
    pub reals: InstanceReals,
    pub primes: Vec<PrimeData>,
    pub growth: GrowthConstants,
    pub padic: PadicBoundConstants,
    pub vanishing: Vanishing,
    pub c17: BigReal,
    pub c19: BigReal,
    pub c20: BigReal,
    pub c21: Vec<BigReal>,
    pub ledger: ConstantLedger,
    pub state: BoundState,
}

/// `floor` of a non-negative real as an integer (negative values give 0).
pub fn floor_nonneg(x: &BigReal) -> BigInt {
    let f = x.floor();
    if f.is_negative() {
        BigInt::zero()
    } else {
        f
    }
}

/// Initial bounds `max{n, m} < c20`, `z_i < c21_i` for `n > m`.
pub fn initial_bounds(inst: &Instance, bd: &BinetData) -> Result<InitialBounds> {
    let r = InstanceReals::new(inst, bd)?;
    let primes = inst.primes.par_iter().map(|&p| prime_data(bd, p)).collect::<Result<Vec<_>>>()?;
    let l2 = growth_constants(&r)?;
    let p31 = padic_bound_constants(bd, &r, &l2, &primes)?;
    let van = vanishing_bounds(bd, &r, &p31)?;
    let c3t = real(2).mul(&real(1).add(&real(2).mul(&r.abs_b).div(&r.abs_a)));
    let c17 = ln(&c3t)?.div(&r.c4_tilde);
    let gamma: QuadElem = bd.gamma(&inst.w);
    let h_gamma = height_real(&gamma, PREC)?.max(&ratio(1, 2));
    let s = inst.primes.len() as u32;
    let mut prod = c2_n(s + 2)?.mul(&real(2)).mul(&h_gamma).mul(&r.log_alpha);
    for lp in &r.log_p {
        prod = prod.mul(lp);
    }
    let c19 = prod.add(&ln(&c3t)?).div(&r.c4_tilde);
    let v = p31.c7.mul(&c19);
    let c20_pdw = pdw_bound(&BigReal::zero(PREC), &v, &real(3))?;
    let c20_short = real(8).mul(&v).mul(&ln(&real(27).mul(&v))?.powi(3, PREC));
    let small_t = pdw_bound(&BigReal::zero(PREC), &p31.c7.mul(&c17.max(&BigReal::zero(PREC))), &real(2))?;
    let matveev_range = real(2).mul(&r.log_alpha).div(&ln(&real(2))?);
    let mut c20 = c20_pdw.max(&c20_short).max(&p31.c6).max(&l2.c2).max(&small_t).max(&matveev_range);
    if let Some(c18) = &van.c18 {
        c20 = c20.max(c18);
    }
    if let Some(c22) = &van.c22 {
        c20 = c20.max(c22);
    }
    let c20 = up(&c20);
    let c21: Vec<BigReal> = r.log_p.iter().map(|lp| up(&real(2).mul(&r.log_alpha).div(lp).mul(&c20))).collect();

    let mut ledger = ConstantLedger::default();
    ledger.push("c1", "2(|a|+|b|)/sqrt(Delta)", &l2.c1);
    ledger.push("c2", "log*(c1/|w|)/log|alpha|", &l2.c2);
    ledger.push("c3", "max{log*(4|b|phi/(|a|(phi-1)))/log|alpha|, .../log|alpha/beta|}", &l2.c3);
    ledger.push("c4", "|a|(phi-1)/(2 phi sqrt(Delta))", &l2.c4);
    ledger.push("c5", "log(|w|/c4)/log|alpha|", &l2.c5);
    ledger.push("c6", "max{c3, 17.5 log|alpha| (max{Ea,Eb}+0.24), P^10, e^10}", &p31.c6);
    ledger.push("c7", "sum c8_i log p_i / log|alpha| + c5", &p31.c7);
    for (i, pd) in primes.iter().enumerate() {
        ledger.push(format!("C1[{i}]"), format!("947 p^f/(log p)^4 at p={}, f={}", pd.p, pd.f), &c1_p(pd.p, pd.f)?);
    }
    for (i, c) in p31.c8.iter().enumerate() {
        ledger.push(format!("c8[{i}]"), "max{C1(p) max{2log|alpha|, log p} c10 + c9, c11}", c);
    }
    for (i, c) in p31.c9.iter().enumerate() {
        ledger.push(format!("c9[{i}]"), "(Ea or Ea+Eb at split primes)/log p", c);
    }
    for (i, c) in p31.c10.iter().enumerate() {
        ledger.push(format!("c10[{i}]"), "max{Ea, Eb, log p}", c);
    }
    for (i, c) in p31.c11.iter().enumerate() {
        ledger.push(format!("c11[{i}]"), "nu_p(log_p(alpha/beta)) + 2/log p + c9", c);
    }
    ledger.push("c17", "log(2(1+2|b|/|a|))/log min{|alpha/beta|, |alpha|}", &c17);
    if let Some(c) = &van.c22 {
        ledger.push("c22", "log|b/a|/log|alpha/beta|", c);
    }
    if let Some(c) = &van.c23 {
        ledger.push("c23", "C2(3) max{0.16, log* max{|a|,|b|}} log|alpha| + 1", c);
    }
    if let Some(c) = &van.c18 {
        ledger.push("c18", "max{pdw(0, c7 c23, 3), c6}", c);
    }
    ledger.push(format!("C2({})", s + 2), "2.31 * 60^(n+3) * n^4.5", &c2_n(s + 2)?);
    ledger.push("h_gamma", "h(w sqrt(Delta)/a), at least 1/2", &h_gamma);
    ledger.push(
        "c19",
        "(2 C2(s+2) prod log p_i h(gamma) log|alpha| + log(2(1+2|b|/|a|)))/log min{|alpha/beta|,|alpha|}",
        &c19,
    );
    ledger.push("c20_pdw", "pdw(0, c7 c19, 3)", &c20_pdw);
    ledger.push("c20_shorthand", "8 c7 c19 log(27 c7 c19)^3", &c20_short);
    ledger.push("c20_small_t", "pdw(0, c7 c17, 2)", &small_t);
    ledger.push("c20", "max{c20_pdw, c20_shorthand, c20_small_t, c18 or c22, c6, c2, 2log|alpha|/log 2}", &c20);
    for (i, c) in c21.iter().enumerate() {
        ledger.push(format!("c21[{i}]"), "2 log|alpha|/log p_i * c20", c);
    }
    let n = floor_nonneg(&c20);
    let z = c21.iter().map(floor_nonneg).collect();
    let state = BoundState::new(n, z, "initial bounds n < c20, z_i < c21_i");
    Ok(InitialBounds {
        reals: r,
        primes,
        growth: l2,
        padic: p31,
        vanishing: van,
        c17: up(&c17),
        c19: up(&c19),
        c20,
        c21,
        ledger,
        state,
    })
}

/// New bounds on `n` and the `z_i` from a bound `T` on `n - m`:
/// `n < c7 T (log n)^2` beyond `max{c6, c2}`, then `z_i` from both the p-adic bound
/// `c8_i T (log N)^2` and `2 log|alpha|/log p_i * N`.
pub fn bounds_from_t(ib: &InitialBounds, t: &BigInt) -> Result<(BigInt, Vec<BigInt>)> {
    let tr = BigReal::from_int(t, PREC);
    let pdw = pdw_bound(&BigReal::zero(PREC), &ib.padic.c7.mul(&tr), &real(2))?;
    let n_r = pdw.max(&ib.padic.c6).max(&ib.growth.c2).max(&tr.add(&real(3)));
    let n = floor_nonneg(&n_r);
    let logn2 = ln(&n_r)?.powi(2, PREC);
    let z = ib
        .padic
        .c8
        .iter()
        .zip(&ib.reals.log_p)
        .map(|(c8, lp)| {
            let a = c8.mul(&tr).mul(&logn2);
            let b = real(2).mul(&ib.reals.log_alpha).div(lp).mul(&n_r);
            floor_nonneg(&up(&a.min(&b)))
        })
        .collect();
    Ok((n, z))
}

/// `n < sum Z_i log p_i / log|alpha| + c5` (valid beyond `c3`), as an
/// inclusive integer bound also covering `n <= c3`.
pub fn n_from_z(ib: &InitialBounds, z: &[BigInt]) -> BigInt {
    let mut sum = BigReal::zero(PREC);
    for (zi, lp) in z.iter().zip(&ib.reals.log_p) {
        sum = sum.add(&BigReal::from_int(zi, PREC).mul(lp));
    }
    let v = up(&sum.div(&ib.reals.log_alpha).add(&ib.growth.c5));
    floor_nonneg(&v).max(floor_nonneg(&ib.growth.c3))
}

/// Convert a non-negative bound to `u64`, saturating.
pub fn to_u64_sat(x: &BigInt) -> u64 {
    x.to_u64().unwrap_or(if x.is_positive() { u64::MAX } else { 0 })
}

/// `n < c5` for the family with all exponents zero (`u_n + u_m = w`), valid
/// beyond `c3`: the inclusive bound `max{c3, c5}`.
pub fn zero_exponent_bound(l2: &GrowthConstants) -> BigInt {
    floor_nonneg(&l2.c3.max(&l2.c5))
}

/// Convenience: a `BigReal` from an integer at constant precision.
pub fn real_of(n: &BigInt) -> BigReal {
    BigReal::from_int(n, PREC)
}

/// Convenience: a `BigReal` from a decimal literal like `"1.4e23"`.
pub fn real_from_decimal(s: &str) -> Result<BigReal> {
    let (m, e) = match s.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().map_err(|_| Error::InvalidInput(s.into()))?),
        None => (s, 0),
    };
    let (int, frac) = m.split_once('.').unwrap_or((m, ""));
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| Error::InvalidInput(s.into()))?;
    let exp10 = e - frac.len() as i32;
    let ten = BigInt::from(10);
    Ok(if exp10 >= 0 {
        real_of(&(digits * ten.pow(exp10 as u32)))
    } else {
        real_of(&digits).div(&real_of(&ten.pow((-exp10) as u32)))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::primes_below;
    use crate::recurrence::Recurrence;

    fn fib(primes: Vec<u64>) -> (Instance, BinetData) {
        let inst = Instance::new(Recurrence::fibonacci(), 1, primes);
        let bd = inst.validate().unwrap();
        (inst, bd)
    }

    #[test]
    fn pdw_examples() {
        let z = BigReal::zero(PREC);
        let v = pdw_bound(&z, &real(1), &real(1)).unwrap().to_f64();
        assert!((v - 4.0 * (2f64).exp()).abs() < 1e-9, "{v}");
        assert_eq!(pdw_bound(&real(5), &z, &real(1)).unwrap().to_f64(), 5.0);
    }

    #[test]
    fn c1_c2_values() {
        assert!((c1_p(2, 2).unwrap().to_f64() - 947.0 * 4.0 / 2f64.ln().powi(4)).abs() < 1e-6);
        let c = c1_p(199, 1).unwrap().to_f64();
        assert!((c - 947.0 * 199.0 / 199f64.ln().powi(4)).abs() < 1e-9);
        let c = c2_n(3).unwrap().to_f64();
        assert!((c / 1.512e13 - 1.0).abs() < 1e-3, "{c}");
        assert!((c2_n(48).unwrap().log10_abs_f64() - 98.6).abs() < 0.1);
    }

    #[test]
    fn fibonacci_growth_constants() {
        let (inst, bd) = fib(vec![2, 3, 5]);
        let r = InstanceReals::new(&inst, &bd).unwrap();
        let l2 = growth_constants(&r).unwrap();
        assert!((l2.c1.to_f64() - 4.0 / 5f64.sqrt()).abs() < 1e-12);
        assert!(l2.c5.to_f64() < 6.0);
    }

    #[test]
    fn fibonacci_prime_data() {
        let bd = fib(vec![2]).1;
        let d = prime_data(&bd, 5).unwrap();
        assert_eq!(d.nu_log, Some(Rational64::new(1, 2)));
        assert_eq!(d.nu_sqrt_delta, Rational64::new(1, 2));
        let d = prime_data(&bd, 2).unwrap();
        assert_eq!(d.nu_log, Some(Rational64::from_integer(2)));
    }

    #[test]
    fn initial_bound_grows_with_prime_set() {
        let (i3, b3) = fib(vec![2, 3, 5]);
        let (i46, b46) = fib(primes_below(200));
        let a = initial_bounds(&i3, &b3).unwrap();
        let b = initial_bounds(&i46, &b46).unwrap();
        assert!(a.c20.cmp_real(&b.c20) == Ordering::Less);
        assert_eq!(b.c21.len(), 46);
    }
}
