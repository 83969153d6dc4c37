//! End-to-end solver: exceptional check, initial bounds, the equal-index
//! branch, the vanishing-form branch, alternating real and p-adic
//! reductions, and the final exhaustive search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{ilog, is_prime_u64, ord_p, strip_p};
use crate::bounds::{
    bounds_from_t, equal_index_bounds, floor_nonneg, initial_bounds, n_from_z, zero_exponent_bound, BoundState,
    ConstantLedger, InitialBounds, Stage, PREC,
};
use crate::error::{Error, Result};
use crate::lattice::{linear_form, real_reduction_auto, LinearForm, ReductionOutcome};
use crate::mpreal::{eval_log, quad_abs};
use crate::padic_reduction::{
    prime_contexts_with, reduce_all, reduce_equal, PadicReductionResult, PrimeContext, ReducePass,
};
use crate::quad::QuadElem;
use crate::recurrence::{check_exceptional, BinetData, ExceptionalReport, Instance, SECOND_FAMILY_LIMIT};

/// A solution `u_n + u_m = w prod p_i^z_i` with `n >= m`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Solution {
    pub n: u64,
    pub m: u64,
    pub z: Vec<u64>,
}

impl Solution {
    /// Check the defining identity exactly.
    pub fn verify(&self, inst: &Instance) -> bool {
        if self.m > self.n || self.z.len() != inst.primes.len() {
            return false;
        }
        let lhs = inst.recurrence.term(self.n) + inst.recurrence.term(self.m);
        let mut rhs = inst.w.clone();
        for (&p, &z) in inst.primes.iter().zip(&self.z) {
            let Ok(z) = u32::try_from(z) else { return false };
            rhs *= BigInt::from(p).pow(z);
        }
        lhs == rhs
    }
}

/// Exponents of `s / w` over the prime set, if it is a positive S-unit.
/// Primes are divided out from the largest down, which rejects most
/// candidates after a single division.
fn s_unit_exponents(s: &BigInt, w: &BigInt, primes_desc: &[(usize, u64)], len: usize) -> Option<Vec<u64>> {
    let (q, r) = s.div_rem(w);
    if !r.is_zero() || !q.is_positive() {
        return None;
    }
    let mut q = q;
    let mut z = vec![0u64; len];
    for &(i, p) in primes_desc {
        if q.is_one() {
            break;
        }
        let (rest, v) = strip_p(&q, p);
        z[i] = v;
        q = rest;
    }
    if q.is_one() {
        Some(z)
    } else {
        None
    }
}

/// Every solution with `m <= n <= n_max`, by exact enumeration.
pub fn brute_force(inst: &Instance, n_max: u64) -> Result<Vec<Solution>> {
    if inst.w.is_zero() {
        return Err(Error::HypothesisViolated("w must be non-zero".into()));
    }
    let terms = inst.recurrence.terms(n_max);
    let mut primes_desc: Vec<(usize, u64)> = inst.primes.iter().copied().enumerate().collect();
    primes_desc.sort_by(|a, b| b.1.cmp(&a.1));
    let s = inst.primes.len();
    let mut out: Vec<Solution> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| {
            let terms = &terms;
            let primes_desc = &primes_desc;
            (0..=n).filter_map(move |m| {
                let sum = &terms[n as usize] + &terms[m as usize];
                s_unit_exponents(&sum, &inst.w, primes_desc, s).map(|z| Solution { n, m, z })
            })
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Overall outcome of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    /// Every solution is listed; the certificate proves the search bound.
    Complete,
    /// An exceptional family with infinitely many solutions applies.
    Exceptional,
    /// A standing hypothesis fails.
    HypothesisViolated,
    /// Exhaustive search to a user-given bound only; no completeness claim.
    Searched,
}

/// Record of the equal-index branch `2 u_n = w prod p_i^z_i`.
#[derive(Clone, Debug, Serialize)]
pub struct EqualIndexRecord {
    pub applicable: bool,
    pub transform: String,
    #[serde(with = "crate::json::opt_bigint")]
    pub initial_n: Option<BigInt>,
    pub passes: Vec<EqualIndexPass>,
    #[serde(with = "crate::json::bigint")]
    pub final_n: BigInt,
}

/// One pass of the equal-index reduction.
#[derive(Clone, Debug, Serialize)]
pub struct EqualIndexPass {
    #[serde(with = "crate::json::bigint")]
    pub n_in: BigInt,
    #[serde(with = "crate::json::vec_bigint")]
    pub z_out: Vec<BigInt>,
    #[serde(with = "crate::json::bigint")]
    pub n_out: BigInt,
    pub results: Vec<PadicReductionResult>,
}

/// Record of the vanishing-form branch `b beta^n - a alpha^m + b beta^m = 0`.
#[derive(Clone, Debug, Serialize)]
pub struct VanishingRecord {
    pub case: String,
    /// Exact pairs `(m, t)` (with `n = m + t`) on which the form vanishes.
    pub vanishing_pairs: Vec<(u64, u64)>,
    /// Bound on `n` for vanishing pairs (largest `m + t`, or 0).
    pub n_bound: u64,
    pub details: Vec<String>,
}

/// One round of real followed by p-adic reduction.
#[derive(Clone, Debug, Serialize)]
pub struct RoundRecord {
    pub real: ReductionOutcome,
    #[serde(with = "crate::json::vec_bigint")]
    pub c_tried: Vec<BigInt>,
    #[serde(with = "crate::json::bigint")]
    pub t: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub n_after_real: BigInt,
    pub padic_passes: Vec<ReducePass>,
    #[serde(with = "crate::json::bigint")]
    pub n_after_padic: BigInt,
}

/// Everything needed to audit a run.
#[derive(Clone, Debug, Serialize)]
pub struct Certificate {
    pub version: String,
    pub config: SolveConfig,
    pub exceptional: ExceptionalReport,
    pub constants: ConstantLedger,
    /// The linear form reduced by the approximation lattice.
    pub linear_form: LinearForm,
    pub equal_index: EqualIndexRecord,
    pub vanishing: VanishingRecord,
    pub rounds: Vec<RoundRecord>,
    pub bounds: BoundState,
    /// `max{c3, c5}`: bound for solutions with every `z_i = 0`.
    #[serde(with = "crate::json::bigint")]
    pub zero_exponent_bound: BigInt,
    /// Final bound: every solution has `n <= final_n`.
    #[serde(with = "crate::json::bigint")]
    pub final_n: BigInt,
    /// Largest `n` searched exhaustively (`final_n` once searched).
    pub searched_to: Option<u64>,
}

/// Result of [`solve`].
#[derive(Clone, Debug, Serialize)]
pub struct SolutionSet {
    pub status: Status,
    pub solutions: Vec<Solution>,
    pub message: Option<String>,
    pub exceptional: Option<ExceptionalReport>,
    pub certificate: Option<Certificate>,
}

/// Tunable parameters of [`solve`].
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SolveConfig {
    /// Extra p-adic working precision, in bits, on top of the automatic choice.
    pub precision_bits: u32,
    /// `C` for the first approximation-lattice reduction (default `10^ceil(k log10 X0)`).
    #[serde(with = "crate::json::opt_bigint")]
    pub lattice_c: Option<BigInt>,
    /// Maximum number of real/p-adic rounds.
    pub max_rounds: usize,
    /// Refuse to search beyond this `n`.
    pub max_search: u64,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig { precision_bits: 0, lattice_c: None, max_rounds: 10, max_search: 200_000 }
    }
}

/// Search limit for the second exceptional family that makes its exclusion complete.
pub fn exceptional_limit(inst: &Instance) -> u64 {
    let complete_at = inst.max_prime().max(inst.w.abs().to_u64().unwrap_or(u64::MAX));
    SECOND_FAMILY_LIMIT.max(complete_at.min(1_000_000))
}

/// Classify hypothesis errors into a status, passing other errors through.
fn hypothesis_status(e: Error) -> Result<SolutionSet> {
    match e {
        Error::HypothesisViolated(_) | Error::DegenerateSequence(_) => Ok(SolutionSet {
            status: Status::HypothesisViolated,
            solutions: Vec::new(),
            message: Some(e.to_string()),
            exceptional: None,
            certificate: None,
        }),
        other => Err(other),
    }
}

/// Equal-index branch: bound `n` for `2 u_n = w prod p_i^z_i`.
pub fn equal_index_reduction(inst: &Instance, ib: &InitialBounds, ctxs: &[PrimeContext]) -> Result<EqualIndexRecord> {
    let Some(p41) = equal_index_bounds(inst, &ib.reals, &ib.growth, &ib.primes)? else {
        return Ok(EqualIndexRecord {
            applicable: false,
            transform: "w odd and every prime odd: 2 u_n cannot equal w prod p_i^z_i".into(),
            initial_n: None,
            passes: Vec::new(),
            final_n: BigInt::zero(),
        });
    };
    let transform = if p41.shift_z1 { "z_1 replaced by z_1 - 1".to_string() } else { "w replaced by w/2".to_string() };
    let mut n = floor_nonneg(&p41.c13);
    let mut z: Vec<BigInt> = p41.c12.iter().map(floor_nonneg).collect();
    if p41.shift_z1 {
        // The bounds bound the original z_1; the shifted exponent is one less.
        z[0] = (&z[0] - BigInt::one()).max(BigInt::zero());
    }
    let initial_n = n.clone();
    let mut passes = Vec::new();
    for _ in 0..crate::padic_reduction::MAX_PASSES {
        let results: Vec<PadicReductionResult> =
            ctxs.par_iter().zip(&z).map(|(ctx, zb)| reduce_equal(ctx, &n, zb)).collect::<Result<_>>()?;
        let z_new: Vec<BigInt> = results.iter().map(|r| r.new_z.clone()).collect();
        let mut z_orig = z_new.clone();
        if p41.shift_z1 {
            z_orig[0] += 1;
        }
        let n_new = n_from_z(ib, &z_orig).min(n.clone());
        passes.push(EqualIndexPass { n_in: n.clone(), z_out: z_new.clone(), n_out: n_new.clone(), results });
        let improved = n_new < n || z_new != z;
        z = z_new;
        n = n_new;
        if !improved {
            break;
        }
    }
    Ok(EqualIndexRecord { applicable: true, transform, initial_n: Some(initial_n), passes, final_n: n })
}

fn int_pow_le(base: &BigInt, t: u64, limit: &BigInt) -> bool {
    let mut acc = BigInt::one();
    for _ in 0..t {
        acc *= base;
        if &acc > limit {
            return false;
        }
    }
    true
}

/// Exact `t >= 1` with `beta^t = v`, if any.
fn exact_exponent(beta: &BigInt, v: &BigRational) -> Option<u64> {
    if !v.is_integer() {
        return None;
    }
    let v = v.to_integer();
    let mut acc = beta.clone();
    let mut t = 1;
    while acc.abs() <= v.abs() {
        if acc == v {
            return Some(t);
        }
        acc *= beta;
        t += 1;
    }
    None
}

/// Smallest prime factor of `|n| >= 2` by trial division, or `|n|` itself when
/// certified prime.
fn smallest_prime_factor(n: &BigInt) -> Result<BigInt> {
    let n = n.abs();
    let mut d = BigInt::from(2);
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            return Ok(d);
        }
        if d > BigInt::from(10_000_000) {
            break;
        }
        d += 1;
    }
    if &d * &d > n {
        return Ok(n);
    }
    match n.to_u64() {
        Some(v) if is_prime_u64(v) => Ok(n),
        _ => Err(Error::ReductionFailed(format!("cannot find a prime factor of {n}"))),
    }
}

fn ord_big(n: &BigInt, q: &BigInt) -> u64 {
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (d, r) = m.div_rem(q);
        if !r.is_zero() {
            return v;
        }
        m = d;
        v += 1;
    }
}

/// Vanishing-form branch.
///
/// Irrational case: the form and its conjugate vanish together, forcing
/// `(alpha^t + 1)(beta^t + 1) = 1`, which holds only for `t` with
/// `|beta|^t` in `(1/2, 2]`; `m` is then determined by absolute values.
///
/// Rational case `|beta| >= 2`, `a alpha^m = b beta^m (beta^t + 1)`:
/// if `beta` does not divide `alpha`, write `beta' = beta / gcd(alpha, beta)`;
/// then `beta'^m | a`.  Otherwise `alpha = P beta`, `a P^m = b(beta^t + 1)`:
/// the part of `P` sharing primes with `beta` divides `b` to the power `m`;
/// for `P` coprime to `beta` a prime `q | P` bounds `m` through
/// `nu_q(beta^t + 1)` (lifting the exponent), and the sizes bound `t` by `m`.
pub fn vanishing_case(inst: &Instance, bd: &BinetData, ib: &InitialBounds) -> Result<VanishingRecord> {
    let _ = inst;
    let mut details = Vec::new();
    let mut pairs = Vec::new();
    if !bd.delta0.is_one() {
        let lb = eval_log(&bd.beta, PREC)?.to_f64();
        let t_max = (2f64.ln() / lb.abs()).floor() as u64 + 1;
        if t_max > 10_000_000 {
            return Err(Error::ReductionFailed("|beta| too close to 1 for the vanishing-form search".into()));
        }
        let one = QuadElem::from_int(1, &bd.delta0);
        for t in 1..=t_max {
            let at = bd.alpha.pow(t);
            let bt = bd.beta.pow(t);
            if !(&(&at + &one) * &(&bt + &one)).is_one() {
                continue;
            }
            details.push(format!("t = {t}: (alpha^t + 1)(beta^t + 1) = 1"));
            // (b/a)(beta/alpha)^m = alpha^t + 1 fixes m by absolute values.
            let lhs = quad_abs(&bd.b.div(&bd.a)?, PREC)?.ln(PREC)?.sub(&quad_abs(&(&at + &one), PREC)?.ln(PREC)?);
            let m = lhs.div(&ib.reals.log_ab_ratio).round();
            if let Some(m) = m.to_u64() {
                let l = &bd.a * &bd.alpha.pow(m);
                let r = &(&bd.b * &bd.beta.pow(m)) * &(&bt + &one);
                if l == r {
                    pairs.push((m, t));
                }
            }
        }
        let n_bound = pairs.iter().map(|(m, t)| m + t).max().unwrap_or(0);
        let c22 = ib.vanishing.c22.as_ref().map(|c| c.to_sci_string(6)).unwrap_or_default();
        details.push(format!("c22 = {c22}"));
        return Ok(VanishingRecord { case: "irrational".into(), vanishing_pairs: pairs, n_bound, details });
    }
    let beta = bd.beta.as_integer().expect("rational beta");
    let alpha = bd.alpha.as_integer().expect("rational alpha");
    if beta.abs().is_one() {
        return Ok(VanishingRecord {
            case: "beta = +-1".into(),
            vanishing_pairs: Vec::new(),
            n_bound: 0,
            details: vec!["equivalent to the first exceptional family, excluded by the exceptional check".into()],
        });
    }
    let a = bd.a.as_integer().ok_or_else(|| Error::ReductionFailed("non-integral a".into()))?;
    let b = bd.b.as_integer().ok_or_else(|| Error::ReductionFailed("non-integral b".into()))?;
    let vanishes =
        |m: u64, t: u64| -> bool { &a * alpha.pow(m as u32) == &b * beta.pow(m as u32) * (beta.pow(t as u32) + 1) };
    // For fixed m, beta^t = a alpha^m / (b beta^m) - 1 decides t.
    let t_for_m = |m: u64| -> Option<u64> {
        let v = BigRational::new(&a * alpha.pow(m as u32), &b * beta.pow(m as u32)) - BigRational::one();
        exact_exponent(&beta, &v)
    };
    let g = alpha.gcd(&beta);
    let beta1 = &beta / &g;
    let case;
    if !beta1.abs().is_one() {
        case = "beta does not divide alpha".to_string();
        let m_max = ilog(&a.abs().max(BigInt::one()), beta1.abs().to_u64().unwrap_or(u64::MAX).max(2));
        details.push(format!("beta' = {beta1}, beta'^m | a gives m <= {m_max}"));
        for m in 0..=m_max {
            if let Some(t) = t_for_m(m) {
                pairs.push((m, t));
            }
        }
    } else {
        let p = &alpha / &beta;
        let mut rest = p.clone();
        loop {
            let h = rest.gcd(&beta);
            if h.is_one() {
                break;
            }
            rest /= h;
        }
        let p1 = &p / &rest;
        if !p1.abs().is_one() {
            case = "alpha = P beta, gcd(P, beta) > 1".to_string();
            let mut m_max = 0u64;
            let mut acc = BigInt::one();
            while {
                acc *= &p1;
                acc.abs() <= b.abs()
            } {
                m_max += 1;
            }
            details.push(format!("P = {p}, P1 = {p1}, P1^m | b gives m <= {m_max}"));
            for m in 0..=m_max {
                if let Some(t) = t_for_m(m) {
                    pairs.push((m, t));
                }
            }
        } else {
            case = "alpha = P beta, gcd(P, beta) = 1".to_string();
            let q = smallest_prime_factor(&p)?;
            let nu_p = ord_big(&p, &q);
            let nu_b = if b.is_zero() { 0 } else { ord_big(&b, &q) } as i64;
            let nu_a = ord_big(&a, &q) as i64;
            let qu = q.to_u64();
            // nu_q(beta^t + 1) <= v0 + log_q t (odd q), <= max(1, nu_2(beta + 1)) (q = 2).
            let (v0, uses_log) = if q == BigInt::from(2) {
                (ord_big(&(&beta + 1), &q).max(1) as i64, false)
            } else {
                let qq = qu.ok_or_else(|| Error::ReductionFailed("prime factor too large".into()))?;
                let bm = beta.mod_floor(&q);
                let mut x = BigInt::one();
                let mut t0 = None;
                for t in 1..qq {
                    x = (&x * &bm).mod_floor(&q);
                    if x == &q - 1 {
                        t0 = Some(t);
                        break;
                    }
                    if x.is_one() {
                        break;
                    }
                }
                match t0 {
                    None => (0, false),
                    Some(t0) => {
                        let mut k = 64u32;
                        loop {
                            let qk = q.pow(k);
                            let v: BigInt = (beta.modpow(&BigInt::from(t0), &qk) + BigInt::one()).mod_floor(&qk);
                            if !v.is_zero() {
                                break (ord_big(&v, &q) as i64, true);
                            }
                            k *= 2;
                        }
                    }
                }
            };
            let mut t_bound = floor_nonneg(ib.vanishing.c18.as_ref().unwrap_or(&ib.c20));
            let mut m_max;
            loop {
                let lg = if uses_log && t_bound.is_positive() { ilog(&t_bound, qu.unwrap_or(2)) as i64 } else { 0 };
                m_max = ((nu_b - nu_a + v0 + lg).max(0) / nu_p as i64) as u64;
                // |b| (|beta|^t - 1) <= |a| |P|^m.
                let lim = (a.abs() * p.abs().pow(m_max as u32)) / b.abs() + 1;
                let mut t_new = 0u64;
                while int_pow_le(&beta.abs(), t_new + 1, &lim) {
                    t_new += 1;
                }
                let t_new = BigInt::from(t_new).min(t_bound.clone());
                if t_new == t_bound {
                    break;
                }
                t_bound = t_new;
            }
            details.push(format!("q = {q}: m <= {m_max}, t <= {t_bound}"));
            let t_max = t_bound.to_u64().unwrap_or(0);
            for m in 0..=m_max {
                for t in 1..=t_max {
                    if vanishes(m, t) {
                        pairs.push((m, t));
                    }
                }
            }
        }
    }
    pairs.retain(|&(m, t)| vanishes(m, t));
    pairs.sort();
    pairs.dedup();
    let n_bound = pairs.iter().map(|(m, t)| m + t).max().unwrap_or(0);
    Ok(VanishingRecord { case, vanishing_pairs: pairs, n_bound, details })
}

/// Either a certified bound or an early verdict (exceptional instance,
/// violated hypothesis) that makes the search unnecessary.
#[derive(Clone, Debug)]
pub enum Certified {
    Bound(Box<Certificate>),
    Verdict(SolutionSet),
}

/// Derive and certify a bound `n <= final_n` for all solutions.
pub fn certify(inst: &Instance, config: &SolveConfig) -> Result<Certified> {
    let verdict = |r: Result<SolutionSet>| r.map(Certified::Verdict);
    // Hypotheses and exceptional families.
    let report = match check_exceptional(inst, exceptional_limit(inst)) {
        Ok(r) => r,
        Err(e) => return verdict(hypothesis_status(e)),
    };
    if report.is_exceptional() {
        return Ok(Certified::Verdict(SolutionSet {
            status: Status::Exceptional,
            solutions: Vec::new(),
            message: Some(report.families.join("; ")),
            exceptional: Some(report),
            certificate: None,
        }));
    }
    if !report.second_family_complete {
        return Err(Error::ReductionFailed("the second exceptional family could not be excluded".into()));
    }
    let bd = match inst.validate() {
        Ok(bd) => bd,
        Err(e) => return verdict(hypothesis_status(e)),
    };
    // Initial bounds.
    let ib = initial_bounds(inst, &bd)?;
    let mut state = ib.state.clone();
    let ctxs = prime_contexts_with(inst, &bd, &state.n, config.precision_bits)?;
    // Equal indices.
    let s2 = equal_index_reduction(inst, &ib, &ctxs)?;
    // Vanishing linear form.
    let s3 = vanishing_case(inst, &bd, &ib)?;
    // Alternating real and p-adic reductions.
    let mut rounds = Vec::new();
    for round in 0..config.max_rounds.max(1) {
        let n_before = state.n.clone();
        let c_start = if round == 0 { config.lattice_c.as_ref() } else { None };
        let (outcome, tried) = real_reduction_auto(inst, &bd, &ib, &state.z, &state.n, c_start)?;
        let h = match &outcome {
            ReductionOutcome::NewBound(d) => d.h.clone(),
            ReductionOutcome::Degenerate { data, .. } => data.h.clone(),
            ReductionOutcome::ConditionFailed { .. } => {
                if round == 0 {
                    return Err(Error::ReductionFailed(
                        "approximation lattice condition failed for every C tried".into(),
                    ));
                }
                break;
            }
        };
        let t = h.max(floor_nonneg(&ib.c17));
        let (n1, z1) = bounds_from_t(&ib, &t)?;
        state.update(
            Stage::AfterRealReduction,
            &n1,
            &z1,
            Some(&t),
            format!("approximation lattice, round {}", round + 1),
        );
        let n_after_real = state.n.clone();
        let t_now = state.t.clone().expect("set above");
        let (n2, z2, passes) = reduce_all(&bd, &ib, &ctxs, &t_now, &state.n, &state.z)?;
        state.update(
            Stage::AfterPadicReduction,
            &n2,
            &z2,
            None,
            format!("digit expansion over t <= {t_now}, round {}", round + 1),
        );
        rounds.push(RoundRecord {
            real: outcome,
            c_tried: tried,
            t: t_now,
            n_after_real,
            padic_passes: passes,
            n_after_padic: state.n.clone(),
        });
        if &state.n * 100u32 > &n_before * 99u32 {
            break;
        }
    }
    // Final bound.
    let zero_exp = zero_exponent_bound(&ib.growth);
    let final_n = [state.n.clone(), s2.final_n.clone(), BigInt::from(s3.n_bound), zero_exp.clone()]
        .into_iter()
        .max()
        .expect("non-empty");
    let z_final = state.z.clone();
    state.update(Stage::Final, &final_n, &z_final, None, "final bound: max over all branches");
    Ok(Certified::Bound(Box::new(Certificate {
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: config.clone(),
        exceptional: report,
        constants: ib.ledger.clone(),
        linear_form: linear_form(inst, &bd)?,
        equal_index: s2,
        vanishing: s3,
        rounds,
        bounds: state,
        zero_exponent_bound: zero_exp,
        final_n,
        searched_to: None,
    })))
}

/// Solve an instance completely (or report why not): [`certify`], then
/// search every `n <= final_n` exhaustively.
pub fn solve(inst: &Instance, config: &SolveConfig) -> Result<SolutionSet> {
    let mut cert = match certify(inst, config)? {
        Certified::Bound(c) => c,
        Certified::Verdict(v) => return Ok(v),
    };
    let n = cert.final_n.to_u64().filter(|&n| n <= config.max_search).ok_or_else(|| {
        Error::ReductionFailed(format!("final bound {} exceeds the search limit {}", cert.final_n, config.max_search))
    })?;
    let solutions = brute_force(inst, n)?;
    cert.searched_to = Some(n);
    Ok(SolutionSet { status: Status::Complete, solutions, message: None, exceptional: None, certificate: Some(*cert) })
}

/// Exhaustive search only, with the hypotheses checked first.
pub fn search_only(inst: &Instance, n_max: u64) -> Result<SolutionSet> {
    if let Err(e) = inst.validate() {
        return hypothesis_status(e);
    }
    Ok(SolutionSet {
        status: Status::Searched,
        solutions: brute_force(inst, n_max)?,
        message: Some(format!("exhaustive search for n <= {n_max}")),
        exceptional: None,
        certificate: None,
    })
}

/// `ord_p` of a solution's left-hand side, for diagnostics.
pub fn lhs_valuation(inst: &Instance, n: u64, m: u64, p: u64) -> Option<u64> {
    let s = inst.recurrence.term(n) + inst.recurrence.term(m);
    if s.is_zero() {
        None
    } else {
        Some(ord_p(&s, p))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::recurrence::Recurrence;

    #[test]
    fn tiny_brute_force() {
        let inst = Instance::new(Recurrence::fibonacci(), 1, vec![2]);
        let sols = brute_force(&inst, 1).unwrap();
        assert_eq!(sols, vec![Solution { n: 1, m: 0, z: vec![0] }, Solution { n: 1, m: 1, z: vec![1] }]);
        assert!(brute_force(&inst, 0).unwrap().is_empty());
        assert!(sols.iter().all(|s| s.verify(&inst)));
    }

    #[test]
    fn fibonacci_vanishing_branch_is_empty() {
        let inst = Instance::new(Recurrence::fibonacci(), 1, vec![2, 3]);
        let bd = inst.validate().unwrap();
        let ib = initial_bounds(&inst, &bd).unwrap();
        let s3 = vanishing_case(&inst, &bd, &ib).unwrap();
        assert!(s3.vanishing_pairs.is_empty());
    }
}
