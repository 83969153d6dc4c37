//! Digit-expansion reduction of the exponent bounds for a fixed difference
//! `t = n - m`.
//!
//! With the Binet data oriented at `p` so that `alpha` is a unit,
//! `u_n + u_m = a' alpha^m (1 - tau lambda^m) / (alpha - beta)` where
//! `a' = a(alpha^t + 1)`, `b' = b(beta^t + 1)`, `tau = b'/a'` and
//! `lambda = beta/alpha`.  Hence `z = z0 + nu(1 - tau lambda^m)` with
//! `z0 = nu(a') - nu(alpha - beta)`.  When both roots and `tau` are units and
//! `z >= z0 + 3/2`, the p-adic logarithm turns this into
//! `z = z0 + nu(log(alpha/beta)) + nu(zeta - m)` with
//! `zeta = log tau / log(alpha/beta)`, and `0 <= m <= N < p^r` pins `m` to the
//! residue `m0 = zeta mod p^r`.
//!
//! The equal-index case `u_n + u_n` is the same computation with `a' = a`,
//! `b' = b` and `n` in place of `m`.

use std::sync::Mutex;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::Rational64;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{digits_needed, ilog, ord_p};
use crate::bounds::{n_from_z, InitialBounds, PREC};
use crate::error::{Error, Result};
use crate::mpreal::{eval_log, BigReal};
use crate::padic::{local_frame, nu_log_quotient, padic_log, LocalFrame, Mode, PadicElem, QpNum};
use crate::quad::QuadElem;
use crate::recurrence::{BinetData, Instance};

/// Which pair of indices is being reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Shift {
    /// `n = m` (the equation `u_n = w' prod p_i^z_i`).
    Equal,
    /// `n - m = t >= 1`.
    Diff(u64),
}

/// One reduction problem: prime, shift and current bounds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PadicReductionInput {
    pub p: u64,
    pub shift: Shift,
    /// Bound on the free index (`m`, or `n` in the equal-index case).
    pub n_bound: BigInt,
    /// Current bound on `z`.
    pub z_bound: BigInt,
}

/// How the new bound was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `log tau = 0` exactly (`tau = +-1`).
    ZeroLog,
    /// A non-zero digit of `zeta - m0` at index `R`.
    DigitR,
    /// `tau lambda^k = +-1` exactly for an integer `k != 0`.
    IntegerZeta,
    /// The bound follows from valuations alone (non-unit data or `nu(zeta) < 0`).
    SmallZ,
}

/// Outcome of one reduction.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PadicReductionResult {
    pub p: u64,
    pub shift: Shift,
    #[serde(with = "crate::json::bigint")]
    pub new_z: BigInt,
    pub branch: Branch,
    pub r: Option<u64>,
    #[serde(rename = "R")]
    pub big_r: Option<u64>,
    #[serde(serialize_with = "ser_ratio")]
    pub z0: Rational64,
}

fn ser_ratio<S: serde::Serializer>(v: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// `tau(t) = b(beta^t + 1) / (a(alpha^t + 1))` in the given orientation.
pub fn tau(bd: &BinetData, t: u64) -> Result<QuadElem> {
    let one = QuadElem::from_int(1, &bd.delta0);
    let num = &bd.b * &(&bd.beta.pow(t) + &one);
    let den = &bd.a * &(&bd.alpha.pow(t) + &one);
    num.div(&den)
}

/// `z0 = nu_p(a(alpha^t + 1)) - nu_p(alpha - beta)`, with the roots oriented
/// so that `alpha` is a unit at `p`.  `t = 0` gives the equal-index value
/// `nu_p(a) - nu_p(alpha - beta)`.
pub fn z0(bd: &BinetData, t: u64, p: u64) -> Result<Rational64> {
    let f = local_frame(bd, p, 64)?;
    let a1 = if t == 0 { f.a.clone() } else { &f.a * &(&f.alpha.pow(t) + &QuadElem::from_int(1, &bd.delta0)) };
    Ok(f.field.valuation_of(&a1)? - f.field.valuation_of(&bd.alpha_minus_beta())?)
}

/// Coarse bound for the vanishing-logarithm case from estimates of `nu` and `z0`:
/// `floor(log N / log p + nu + z0)`.
pub fn zero_log_bound(n: &BigReal, p: u64, nu: &BigReal, z0: &BigReal) -> Result<BigInt> {
    let lp = BigReal::from_int(&BigInt::from(p), PREC).ln(PREC)?;
    Ok(n.ln(PREC)?.div(&lp).add(nu).add(z0).floor())
}

/// Per-prime data shared by every reduction at that prime.
#[derive(Debug)]
pub struct PrimeContext {
    pub p: u64,
    pub frame: LocalFrame,
    /// `nu_p(log(alpha/beta))` when both roots are units.
    pub nu_log: Option<Rational64>,
    pub nu_sqrt_delta: Rational64,
    lambda: QuadElem,
    max_prec: i64,
    extra: i64,
    log_lambda: Mutex<Option<PadicElem>>,
}

/// Digit horizon `r + ceil(40 / log10 p) + 20`.
pub fn horizon(r: u64, p: u64) -> u64 {
    r + (40.0 / (p as f64).log10()).ceil() as u64 + 20
}

impl PrimeContext {
    /// Context able to handle index bounds up to `n_max`.
    pub fn new(bd: &BinetData, p: u64, n_max: &BigInt) -> Result<Self> {
        Self::with_extra_bits(bd, p, n_max, 0)
    }

    /// As [`PrimeContext::new`], with `extra_bits` of additional working
    /// precision (converted to base-`p` digits) for every expansion.
    pub fn with_extra_bits(bd: &BinetData, p: u64, n_max: &BigInt, extra_bits: u32) -> Result<Self> {
        let r = digits_needed(n_max, p).max(1);
        let extra = (extra_bits as f64 / (p as f64).log2()).ceil() as i64;
        let max_prec = 4 * horizon(r, p) as i64 + 200 + extra;
        let frame = local_frame(bd, p, max_prec as u32 + 64)?;
        let nu_log = if frame.nu_beta.is_zero() { Some(nu_log_quotient(bd, p)?) } else { None };
        let nu_sqrt_delta = frame.field.valuation_of(&bd.alpha_minus_beta())?;
        let lambda = frame.beta.div(&frame.alpha)?;
        Ok(PrimeContext { p, frame, nu_log, nu_sqrt_delta, lambda, max_prec, extra, log_lambda: Mutex::new(None) })
    }

    /// `log_p(beta/alpha)` modulo `p^k`, cached at the highest precision used.
    fn log_lambda(&self, k: i64) -> Result<PadicElem> {
        let mut guard = self.log_lambda.lock().expect("log cache poisoned");
        if let Some(l) = guard.as_ref() {
            if l.abs_prec() >= k {
                return Ok(l.truncate_abs(k));
            }
        }
        let x = self.frame.field.from_quad(&self.lambda, k as u32 + 16)?;
        let l = padic_log(&x, k)?;
        *guard = Some(l.clone());
        Ok(l)
    }

    fn omega(&self) -> bool {
        self.frame.field.mode() != Mode::Split
    }

    /// Oriented coefficients `(a', b')` for a shift, given `alpha^t` and
    /// `beta^t` of the unoriented data.
    pub fn coefficients(
        &self,
        bd: &BinetData,
        shift: Shift,
        powers: Option<(&QuadElem, &QuadElem)>,
    ) -> (QuadElem, QuadElem) {
        match shift {
            Shift::Equal => (self.frame.a.clone(), self.frame.b.clone()),
            Shift::Diff(t) => {
                let one = QuadElem::from_int(1, &bd.delta0);
                let (at, bt) = match powers {
                    Some((x, y)) => (x.clone(), y.clone()),
                    None => (bd.alpha.pow(t), bd.beta.pow(t)),
                };
                let (af, bf) = if self.frame.swapped { (bt, at) } else { (at, bt) };
                (&self.frame.a * &(&af + &one), &self.frame.b * &(&bf + &one))
            }
        }
    }
}

fn ceil_rat(q: Rational64) -> i64 {
    q.ceil().to_integer()
}

fn floor_rat(q: Rational64) -> BigInt {
    BigInt::from(q.floor().to_integer())
}

fn rat(n: i64) -> Rational64 {
    Rational64::from_integer(n)
}

/// Exact test for `tau lambda^k = +-1`; the candidate `k` comes from the real
/// absolute values.  Returns `(k, sign)`.
fn exact_relation(tau: &QuadElem, lambda: &QuadElem) -> Result<Option<(i64, i32)>> {
    let lt = eval_log(tau, 128)?;
    let ll = eval_log(lambda, 128)?;
    let k = lt.neg().div(&ll).round();
    let Some(k) = k.to_i64().filter(|k| k.unsigned_abs() <= 1_000_000) else {
        return Ok(None);
    };
    let v = tau * &lambda.powi(k)?;
    if v.is_one() {
        return Ok(Some((k, 1)));
    }
    if (-v).is_one() {
        return Ok(Some((k, -1)));
    }
    Ok(None)
}

/// Reduce the bound on `z` at one prime for one shift.
pub fn padic_reduce(bd: &BinetData, input: &PadicReductionInput) -> Result<PadicReductionResult> {
    let ctx = PrimeContext::new(bd, input.p, &input.n_bound)?;
    let (a1, b1) = ctx.coefficients(bd, input.shift, None);
    padic_reduce_with(&ctx, &a1, &b1, input)
}

/// [`padic_reduce`] with a prepared context and oriented coefficients.
pub fn padic_reduce_with(
    ctx: &PrimeContext,
    a1: &QuadElem,
    b1: &QuadElem,
    input: &PadicReductionInput,
) -> Result<PadicReductionResult> {
    let raw = reduce_raw(ctx, a1, b1, &input.n_bound)?;
    let new_z = raw.bound.max(BigInt::zero()).min(input.z_bound.clone());
    Ok(PadicReductionResult {
        p: ctx.p,
        shift: input.shift,
        new_z,
        branch: raw.branch,
        r: raw.r,
        big_r: raw.big_r,
        z0: raw.z0,
    })
}

struct Raw {
    bound: BigInt,
    branch: Branch,
    r: Option<u64>,
    big_r: Option<u64>,
    z0: Rational64,
}

fn reduce_raw(ctx: &PrimeContext, a1: &QuadElem, b1: &QuadElem, n_bound: &BigInt) -> Result<Raw> {
    let field = &ctx.frame.field;
    let p = ctx.p;
    let nu_d = ctx.nu_sqrt_delta;
    let small = |bound: BigInt, z0: Rational64| Raw { bound, branch: Branch::SmallZ, r: None, big_r: None, z0 };
    if a1.is_zero() {
        if b1.is_zero() {
            // u_n + u_m vanishes identically on this shift: no solution.
            return Ok(small(BigInt::from(-1), rat(0)));
        }
        // u_n + u_m = -b' beta^m / (alpha - beta).
        // Valuations are multiples of 1/2; work with twice their values.
        let twice = |q: Rational64| BigInt::from((q * rat(2)).to_integer());
        let nb = field.valuation_of(b1)?;
        let v2 = twice(nb) + n_bound * twice(ctx.frame.nu_beta) - twice(nu_d);
        return Ok(small(v2.div_floor(&BigInt::from(2)), rat(0)));
    }
    let z0 = field.valuation_of(a1)? - nu_d;
    if b1.is_zero() {
        return Ok(small(floor_rat(z0), z0));
    }
    let tau = b1.div(a1)?;
    let nu_tau = field.valuation_of(&tau)?;
    let nu_lam = ctx.frame.nu_beta;
    if !nu_lam.is_zero() || !nu_tau.is_zero() {
        if nu_lam.is_zero() {
            return Ok(small(floor_rat(z0 + nu_tau.min(rat(0))), z0));
        }
        // nu(tau lambda^m) = nu_tau + m nu_lam vanishes for at most one m.
        let m_star = -nu_tau / nu_lam;
        let mut bound = floor_rat(z0);
        if m_star.is_integer() && m_star >= rat(0) && BigInt::from(m_star.to_integer()) <= *n_bound {
            let x = &tau * &ctx.lambda.pow(m_star.to_integer() as u64);
            let diff = &QuadElem::from_int(1, x.d()) - &x;
            if !diff.is_zero() {
                bound = bound.max(floor_rat(z0 + field.valuation_of(&diff)?));
            }
        }
        return Ok(small(bound, z0));
    }
    let nu_log = ctx.nu_log.ok_or_else(|| Error::ReductionFailed("unit data without log valuation".into()))?;
    let low = BigInt::from(ceil_rat(z0 + Rational64::new(3, 2)) - 1);
    if !n_bound.is_positive() {
        // Only index 0 is possible; compute its exponent directly.
        let diff = &QuadElem::from_int(1, tau.d()) - &tau;
        let b = if diff.is_zero() { BigInt::from(-1) } else { floor_rat(z0 + field.valuation_of(&diff)?) };
        return Ok(small(b, z0));
    }
    let r = digits_needed(n_bound, p);
    let hz = horizon(r, p);
    let omega = ctx.omega();
    let relation_bound = |k: i64, sign: i32| -> Raw {
        let span = n_bound + BigInt::from(k.unsigned_abs());
        let lg = ilog(&span, p) as i64;
        let mut b = floor_rat(z0 + nu_log + rat(lg)).max(low.clone());
        if sign < 0 {
            // m = k gives 1 - tau lambda^k = 2.
            let two = if p == 2 { 1 } else { 0 };
            b = b.max(floor_rat(z0 + rat(two)));
        }
        Raw {
            bound: b,
            branch: if k == 0 { Branch::ZeroLog } else { Branch::IntegerZeta },
            r: Some(r),
            big_r: None,
            z0,
        }
    };
    let mut k = r as i64 + ceil_rat(nu_log) + 24 + ctx.extra;
    loop {
        if k > ctx.max_prec {
            return Err(Error::PrecisionExhausted(format!(
                "p = {p}: no digit of zeta found within {} digits",
                ctx.max_prec
            )));
        }
        let lt = padic_log(&field.from_quad(&tau, k as u32 + 16)?, k)?;
        if lt.is_zero_approx() {
            if let Some((kk, sign)) = exact_relation(&tau, &ctx.lambda)? {
                return Ok(relation_bound(kk, sign));
            }
            k *= 2;
            continue;
        }
        let nu_lt = lt.valuation()?;
        if nu_lt < nu_log {
            // nu(zeta) < 0: nu(log tau + m log lambda) = nu(log tau) for every m.
            return Ok(Raw {
                bound: floor_rat(z0 + nu_lt).max(low),
                branch: Branch::SmallZ,
                r: Some(r),
                big_r: None,
                z0,
            });
        }
        let ll = ctx.log_lambda(k)?;
        // zeta = log tau / log(alpha/beta) = -log tau / log lambda.
        let zeta: QpNum = lt.qp_part(omega).div(&ll.qp_part(omega))?;
        let zeta = QpNum { unit: -zeta.unit.clone(), ..zeta };
        if !zeta.is_zero_approx() && zeta.val < 0 {
            return Ok(Raw {
                bound: floor_rat(z0 + nu_lt).max(low),
                branch: Branch::SmallZ,
                r: Some(r),
                big_r: None,
                z0,
            });
        }
        let avail = zeta.abs_prec();
        if avail < r as i64 + 1 {
            k *= 2;
            continue;
        }
        let check = avail.min(hz as i64) as u32;
        let m0 = zeta.residue(r as u32).expect("precision checked");
        let x = zeta.residue(check).expect("precision checked");
        let d = (&x - &m0).mod_floor(&BigInt::from(p).pow(check));
        if !d.is_zero() {
            let big_r = ord_p(&d, p);
            // If m0 exceeds the index bound no admissible m equals m0, and
            // nu(m - zeta) = nu(m - m0) < r.
            let eff = if m0 > *n_bound { r - 1 } else { big_r };
            let bound = floor_rat(z0 + nu_log + rat(eff as i64)).max(low);
            return Ok(Raw { bound, branch: Branch::DigitR, r: Some(r), big_r: Some(big_r), z0 });
        }
        if check as u64 >= hz {
            if let Some((kk, sign)) = exact_relation(&tau, &ctx.lambda)? {
                return Ok(relation_bound(kk, sign));
            }
        }
        k *= 2;
    }
}

/// Contexts for every prime of the instance.
pub fn prime_contexts(inst: &Instance, bd: &BinetData, n_max: &BigInt) -> Result<Vec<PrimeContext>> {
    prime_contexts_with(inst, bd, n_max, 0)
}

/// [`prime_contexts`] with extra working precision.
pub fn prime_contexts_with(
    inst: &Instance,
    bd: &BinetData,
    n_max: &BigInt,
    extra_bits: u32,
) -> Result<Vec<PrimeContext>> {
    inst.primes.par_iter().map(|&p| PrimeContext::with_extra_bits(bd, p, n_max, extra_bits)).collect()
}

/// Per-prime bounds valid for every shift `1 <= t <= t_max`, with the
/// individual results ordered by `(t, prime index)`.
pub fn reduce_shifts(
    bd: &BinetData,
    ctxs: &[PrimeContext],
    t_max: u64,
    n_bound: &BigInt,
    z_bound: &[BigInt],
) -> Result<(Vec<BigInt>, Vec<PadicReductionResult>)> {
    let per_t: Vec<Vec<PadicReductionResult>> = (1..=t_max)
        .into_par_iter()
        .map(|t| {
            let at = bd.alpha.pow(t);
            let bt = bd.beta.pow(t);
            ctxs.iter()
                .zip(z_bound)
                .map(|(ctx, zb)| {
                    let (a1, b1) = ctx.coefficients(bd, Shift::Diff(t), Some((&at, &bt)));
                    let input = PadicReductionInput {
                        p: ctx.p,
                        shift: Shift::Diff(t),
                        n_bound: n_bound.clone(),
                        z_bound: zb.clone(),
                    };
                    padic_reduce_with(ctx, &a1, &b1, &input)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut z = vec![BigInt::zero(); ctxs.len()];
    for row in &per_t {
        for (zi, res) in z.iter_mut().zip(row) {
            if res.new_z > *zi {
                *zi = res.new_z.clone();
            }
        }
    }
    Ok((z, per_t.into_iter().flatten().collect()))
}

/// One pass of [`reduce_all`].
#[derive(Clone, Debug, Serialize)]
pub struct ReducePass {
    #[serde(with = "crate::json::bigint")]
    pub n_in: BigInt,
    #[serde(with = "crate::json::vec_bigint")]
    pub z_out: Vec<BigInt>,
    #[serde(with = "crate::json::bigint")]
    pub n_out: BigInt,
    pub results: Vec<PadicReductionResult>,
}

/// Maximum number of passes of [`reduce_all`].
pub const MAX_PASSES: usize = 10;

/// Reduce the `z_i` over all shifts `t <= T`, then `n` via
/// `n < sum Z_i log p_i / log|alpha| + c5`, repeating while `N` decreases.
pub fn reduce_all(
    bd: &BinetData,
    ib: &InitialBounds,
    ctxs: &[PrimeContext],
    t_bound: &BigInt,
    n_bound: &BigInt,
    z_bound: &[BigInt],
) -> Result<(BigInt, Vec<BigInt>, Vec<ReducePass>)> {
    let mut n = n_bound.clone();
    let mut z = z_bound.to_vec();
    let mut passes = Vec::new();
    for _ in 0..MAX_PASSES {
        let t_max = t_bound.clone().min(n.clone());
        let t_max =
            t_max.to_u64().ok_or_else(|| Error::ReductionFailed("shift bound too large for enumeration".into()))?;
        let (zt, results) = reduce_shifts(bd, ctxs, t_max, &n, &z)?;
        let z_new: Vec<BigInt> = zt.iter().zip(&z).map(|(a, b)| a.clone().min(b.clone())).collect();
        let n_new = n_from_z(ib, &z_new).min(n.clone());
        passes.push(ReducePass { n_in: n.clone(), z_out: z_new.clone(), n_out: n_new.clone(), results });
        let improved = n_new < n || z_new != z;
        z = z_new;
        if !improved {
            break;
        }
        n = n_new;
    }
    Ok((n, z, passes))
}

/// Exponent bound at one prime for the equal-index equation with index bound `n`.
pub fn reduce_equal(ctx: &PrimeContext, n_bound: &BigInt, z_bound: &BigInt) -> Result<PadicReductionResult> {
    let input =
        PadicReductionInput { p: ctx.p, shift: Shift::Equal, n_bound: n_bound.clone(), z_bound: z_bound.clone() };
    let (a1, b1) = (ctx.frame.a.clone(), ctx.frame.b.clone());
    padic_reduce_with(ctx, &a1, &b1, &input)
}
