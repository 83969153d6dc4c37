//! Exact lattice reduction and the real approximation-lattice step.
//!
//! [`lll`] is the integral LLL algorithm (all Gram–Schmidt quantities are
//! kept as integers `d_i` and `lambda_ij = d_j mu_ij`), so the reduction
//! conditions hold exactly.  [`lattice_lower_bound`] turns a reduced basis
//! into a certified lower bound for the distance from a target vector to the
//! lattice, and [`real_reduction`] uses it to cut the bound on `n - m`.

use std::fmt::Write as _;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::arith::strip_p;
use crate::bounds::{floor_nonneg, real_of, InitialBounds, PREC};
use crate::error::{Error, Result};
use crate::mpreal::{quad_abs, stable_floor, BigReal, RealSpec};
use crate::quad::QuadElem;
use crate::recurrence::{BinetData, Instance};

/// Square lattice basis; `basis[j]` is the `j`-th column (basis vector).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntLattice {
    pub basis: Vec<Vec<BigInt>>,
}

impl IntLattice {
    /// Lattice spanned by the given column vectors.
    pub fn from_columns(cols: Vec<Vec<BigInt>>) -> Result<Self> {
        let k = cols.len();
        if k == 0 || cols.iter().any(|c| c.len() != k) {
            return Err(Error::InvalidInput("lattice basis must be a non-empty square matrix".into()));
        }
        Ok(IntLattice { basis: cols })
    }

    /// Lattice from a row-major matrix whose columns are the basis vectors.
    pub fn from_rows(rows: &[Vec<BigInt>]) -> Result<Self> {
        let k = rows.len();
        let cols = (0..k).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        Self::from_columns(cols)
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Determinant of the basis matrix (fraction-free elimination).
    pub fn determinant(&self) -> BigInt {
        let k = self.dim();
        let mut m: Vec<Vec<BigInt>> = (0..k).map(|i| (0..k).map(|j| self.basis[j][i].clone()).collect()).collect();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for c in 0..k {
            let Some(piv) = (c..k).find(|&r| !m[r][c].is_zero()) else {
                return BigInt::zero();
            };
            if piv != c {
                m.swap(piv, c);
                sign = -sign;
            }
            for r in c + 1..k {
                for j in c + 1..k {
                    let v = (&m[c][c] * &m[r][j] - &m[r][c] * &m[c][j]) / &prev;
                    m[r][j] = v;
                }
                m[r][c] = BigInt::zero();
            }
            prev = m[c][c].clone();
        }
        sign * prev
    }

    /// The basis as text: the dimension, then one row of the basis matrix per line.
    pub fn to_text(&self) -> String {
        let k = self.dim();
        let mut s = format!("{k}\n");
        for i in 0..k {
            let row: Vec<String> = (0..k).map(|j| self.basis[j][i].to_string()).collect();
            let _ = writeln!(s, "{}", row.join(" "));
        }
        s
    }

    /// Parse the format written by [`IntLattice::to_text`].
    pub fn from_text(s: &str) -> Result<Self> {
        let mut lines = s.lines().filter(|l| !l.trim().is_empty());
        let k: usize = lines
            .next()
            .and_then(|l| l.trim().parse().ok())
            .ok_or_else(|| Error::InvalidInput("missing lattice dimension".into()))?;
        let rows = lines
            .take(k)
            .map(|l| {
                l.split_whitespace()
                    .map(|t| t.parse::<BigInt>().map_err(|_| Error::InvalidInput(format!("bad integer {t}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        if rows.len() != k || rows.iter().any(|r| r.len() != k) {
            return Err(Error::InvalidInput("lattice text has the wrong shape".into()));
        }
        Self::from_rows(&rows)
    }
}

fn dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Exact Gram–Schmidt data: `||b*_i||^2` and `mu_ij` (`j < i`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GramSchmidtData {
    pub bstar_norms_sq: Vec<BigRational>,
    pub mu: Vec<Vec<BigRational>>,
}

/// Integral Gram–Schmidt state: `d[0] = 1`, `d[i+1] = prod_{j<=i} ||b*_j||^2`,
/// `lam[i][j] = d[j+1] mu_ij`.
struct IntegralGs {
    d: Vec<BigInt>,
    lam: Vec<Vec<BigInt>>,
}

fn integral_gs(b: &[Vec<BigInt>]) -> Result<IntegralGs> {
    let k = b.len();
    let mut d = vec![BigInt::one(); k + 1];
    let mut lam = vec![vec![BigInt::zero(); k]; k];
    for i in 0..k {
        for j in 0..=i {
            let mut u = dot(&b[i], &b[j]);
            for l in 0..j {
                u = (&d[l + 1] * &u - &lam[i][l] * &lam[j][l]) / &d[l];
            }
            if j < i {
                lam[i][j] = u;
            } else {
                if u.is_zero() {
                    return Err(Error::DependentColumns);
                }
                d[i + 1] = u;
            }
        }
    }
    Ok(IntegralGs { d, lam })
}

/// Exact Gram–Schmidt orthogonalisation of the basis.
pub fn gram_schmidt(l: &IntLattice) -> Result<GramSchmidtData> {
    let gs = integral_gs(&l.basis)?;
    let k = l.dim();
    let bstar_norms_sq = (0..k).map(|i| BigRational::new(gs.d[i + 1].clone(), gs.d[i].clone())).collect();
    let mu =
        (0..k).map(|i| (0..i).map(|j| BigRational::new(gs.lam[i][j].clone(), gs.d[j + 1].clone())).collect()).collect();
    Ok(GramSchmidtData { bstar_norms_sq, mu })
}

/// Nearest integer to `n / d` for `d > 0` (halves rounded up).
fn round_div(n: &BigInt, d: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n * &two + d).div_floor(&(d * &two))
}

/// LLL reduction with `delta = 3/4` in exact integer arithmetic.
pub fn lll(l: &IntLattice) -> Result<IntLattice> {
    let k = l.dim();
    let mut b = l.basis.clone();
    let IntegralGs { mut d, mut lam } = integral_gs(&b)?;
    if k == 1 {
        return Ok(IntLattice { basis: b });
    }
    // 1-based indices follow the usual presentation: d[i] for b_i, d[0] = 1.
    let red = |b: &mut Vec<Vec<BigInt>>, lam: &mut Vec<Vec<BigInt>>, d: &[BigInt], kk: usize, ll: usize| {
        let two_l = lam[kk - 1][ll - 1].abs() * 2;
        if two_l > d[ll] {
            let q = round_div(&lam[kk - 1][ll - 1], &d[ll]);
            let bl = b[ll - 1].clone();
            for (x, y) in b[kk - 1].iter_mut().zip(&bl) {
                *x -= &q * y;
            }
            lam[kk - 1][ll - 1] -= &q * &d[ll];
            for i in 1..ll {
                let v = &q * &lam[ll - 1][i - 1];
                lam[kk - 1][i - 1] -= v;
            }
        }
    };
    let mut kk = 2;
    while kk <= k {
        red(&mut b, &mut lam, &d, kk, kk - 1);
        let lhs = BigInt::from(4) * &d[kk] * &d[kk - 2];
        let lk = &lam[kk - 1][kk - 2];
        let rhs = BigInt::from(3) * &d[kk - 1] * &d[kk - 1] - BigInt::from(4) * lk * lk;
        if lhs < rhs {
            // Swap b_k and b_{k-1}.
            b.swap(kk - 1, kk - 2);
            for j in 1..kk - 1 {
                let t = lam[kk - 1][j - 1].clone();
                lam[kk - 1][j - 1] = lam[kk - 2][j - 1].clone();
                lam[kk - 2][j - 1] = t;
            }
            let lm = lam[kk - 1][kk - 2].clone();
            let bb = (&d[kk - 2] * &d[kk] + &lm * &lm) / &d[kk - 1];
            for i in kk + 1..=k {
                let t = lam[i - 1][kk - 1].clone();
                lam[i - 1][kk - 1] = (&d[kk] * &lam[i - 1][kk - 2] - &lm * &t) / &d[kk - 1];
                lam[i - 1][kk - 2] = (&bb * &t + &lm * &lam[i - 1][kk - 1]) / &d[kk];
            }
            d[kk - 1] = bb;
            if kk > 2 {
                kk -= 1;
            }
        } else {
            for ll in (1..kk - 1).rev() {
                red(&mut b, &mut lam, &d, kk, ll);
            }
            kk += 1;
        }
    }
    Ok(IntLattice { basis: b })
}

/// Whether the basis satisfies both LLL conditions with `delta = 3/4`, exactly.
pub fn is_lll_reduced(l: &IntLattice) -> Result<bool> {
    let gs = gram_schmidt(l)?;
    let half = BigRational::new(BigInt::one(), BigInt::from(2));
    let delta = BigRational::new(BigInt::from(3), BigInt::from(4));
    for i in 0..l.dim() {
        for j in 0..i {
            if gs.mu[i][j].abs() > half {
                return Ok(false);
            }
        }
        if i > 0 {
            let m = &gs.mu[i][i - 1];
            if (&delta - m * m) * &gs.bstar_norms_sq[i - 1] > gs.bstar_norms_sq[i] {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Certificate of the lower bound for `l(L, y)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LowerBound {
    /// Certified `l(L, y)^2 >= sigma^2 ||b_1||^2 / c2_tilde`.
    pub c1_sq: BigRational,
    pub sigma: BigRational,
    pub b1_norm_sq: BigInt,
    /// `max_j ||b_1||^2 / ||b*_j||^2`.
    pub c2_tilde: BigRational,
    /// Largest index with non-integral coordinate (`None` when `y` is in `L`).
    pub i0: Option<usize>,
    /// Coordinates of `y` in the basis.
    pub z: Vec<BigRational>,
}

/// Solve `B z = y` exactly (fraction-free elimination with integer back
/// substitution).
pub fn solve_coordinates(l: &IntLattice, y: &[BigInt]) -> Result<Vec<BigRational>> {
    let k = l.dim();
    if y.len() != k {
        return Err(Error::InvalidInput("target vector has the wrong dimension".into()));
    }
    let mut m: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigInt> = (0..k).map(|j| l.basis[j][i].clone()).collect();
            row.push(y[i].clone());
            row
        })
        .collect();
    let mut prev = BigInt::one();
    for c in 0..k {
        let piv = (c..k).find(|&r| !m[r][c].is_zero()).ok_or(Error::DependentColumns)?;
        m.swap(piv, c);
        for r in c + 1..k {
            for j in c + 1..=k {
                let v = (&m[c][c] * &m[r][j] - &m[r][c] * &m[c][j]) / &prev;
                m[r][j] = v;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[c][c].clone();
    }
    // Rows of the echelon form are scaled; solve each row directly in Q.
    let mut z = vec![BigRational::zero(); k];
    for i in (0..k).rev() {
        let mut acc = BigRational::from_integer(m[i][k].clone());
        for j in i + 1..k {
            acc -= BigRational::from_integer(m[i][j].clone()) * &z[j];
        }
        z[i] = acc / BigRational::from_integer(m[i][i].clone());
    }
    Ok(z)
}

fn dist_to_int(q: &BigRational) -> BigRational {
    let f = q.floor();
    let r = q - &f;
    let s = BigRational::one() - &r;
    if r < s {
        r
    } else {
        s
    }
}

/// Lower bound for the squared distance from `y` to the nearest lattice
/// point (to the nearest point other than `y` itself when `y` lies in `L`).
///
/// With `z = B^-1 y` and `i0` the largest index of a non-integral `z_i`,
/// every `x` in `L` satisfies `||x - y||^2 >= sigma^2 ||b_1||^2 / c2_tilde`,
/// `sigma = ||z_i0||` (distance to the nearest integer): the component of
/// `x - y` along `b*_j` for the largest index `j` where the coordinates differ
/// is at least `sigma ||b*_j||` in length.  The bound is squared in `sigma`.
pub fn lattice_lower_bound(l: &IntLattice, y: &[BigInt]) -> Result<LowerBound> {
    let gs = gram_schmidt(l)?;
    let b1_norm_sq = dot(&l.basis[0], &l.basis[0]);
    let b1 = BigRational::from_integer(b1_norm_sq.clone());
    let c2_tilde = gs.bstar_norms_sq.iter().map(|n| &b1 / n).max().expect("non-empty basis");
    let z = solve_coordinates(l, y)?;
    let i0 = (0..z.len()).rev().find(|&i| !z[i].is_integer());
    let sigma = match i0 {
        Some(i) => dist_to_int(&z[i]),
        None => BigRational::one(),
    };
    let c1_sq = &sigma * &sigma * &b1 / &c2_tilde;
    Ok(LowerBound { c1_sq, sigma, b1_norm_sq, c2_tilde, i0, z })
}

/// Approximation lattice `[[I, 0], [floor(C eta_1) ... floor(C eta_k)]]` and
/// target `y = (0, ..., 0, -floor(C eta_0))`.
pub fn build_approx_lattice(eta0: &RealSpec, etas: &[RealSpec], c: &BigInt) -> Result<(IntLattice, Vec<BigInt>)> {
    if !c.is_positive() {
        return Err(Error::InvalidInput("C must be positive".into()));
    }
    let k = etas.len();
    let last: Vec<BigInt> = etas.iter().map(|e| stable_floor(c, e)).collect::<Result<_>>()?;
    let cols = (0..k)
        .map(|j| {
            let mut col = vec![BigInt::zero(); k];
            if j < k - 1 {
                col[j] = BigInt::one();
            }
            col[k - 1] = last[j].clone();
            col
        })
        .collect();
    let mut y = vec![BigInt::zero(); k];
    y[k - 1] = -stable_floor(c, eta0)?;
    Ok((IntLattice::from_columns(cols)?, y))
}

/// Data of a successful real reduction.
#[derive(Clone, Debug, Serialize)]
pub struct RealReductionData {
    #[serde(with = "crate::json::bigint")]
    pub c: BigInt,
    /// New bound `n - m <= h` (valid for `n - m > c17`).
    #[serde(with = "crate::json::bigint")]
    pub h: BigInt,
    pub c1_sq_log10: f64,
    pub c2_tilde_log10: f64,
    pub sigma: f64,
    #[serde(with = "crate::json::bigint")]
    pub s: BigInt,
    #[serde(with = "crate::json::bigint")]
    pub t: BigInt,
    pub dimension: usize,
}

/// Result of one approximation-lattice reduction.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReductionOutcome {
    /// `n - m <= h` for every solution.
    NewBound(RealReductionData),
    /// The target lies in the lattice.  The one excluded coefficient vector
    /// (last coefficient `x_k`, all others zero) either makes the form vanish
    /// (`lambda_star_log10 = None`, the vanishing case) or fixes its value,
    /// which is folded into `data.h`.
    Degenerate {
        #[serde(with = "crate::json::bigint")]
        x_k: BigInt,
        lambda_star_log10: Option<f64>,
        data: RealReductionData,
    },
    /// `c1_tilde^2 <= T^2 + S`; a larger `C` is needed.
    ConditionFailed {
        #[serde(with = "crate::json::bigint")]
        c: BigInt,
        c1_sq_log10: f64,
        threshold_log10: f64,
    },
}

fn log10_rat(q: &BigRational) -> f64 {
    if q.is_zero() {
        return f64::NEG_INFINITY;
    }
    BigReal::from_ratio(q, 64).log10_abs_f64()
}

/// Integer coefficient `offset + z_mult z_i + n_mult n` of one logarithm.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coeff {
    #[serde(with = "crate::json::bigint")]
    pub offset: BigInt,
    pub z_index: Option<usize>,
    pub z_mult: i64,
    pub n_mult: i64,
}

impl Coeff {
    /// `max |c|` over the box `0 <= z_i <= Z_i`, `0 <= n <= N`.
    pub fn bound(&self, z: &[BigInt], n: &BigInt) -> BigInt {
        let mut hi = self.offset.clone();
        let mut lo = self.offset.clone();
        let mut terms = vec![BigInt::from(self.n_mult) * n];
        if let Some(i) = self.z_index {
            terms.push(BigInt::from(self.z_mult) * &z[i]);
        }
        for v in terms {
            if v.is_positive() {
                hi += v;
            } else {
                lo += v;
            }
        }
        hi.abs().max(lo.abs())
    }
}

/// The linear form `Lambda = log|gamma| + sum z_i log p_i - n log|alpha|`
/// rewritten as `scale * Lambda = eta_0 + sum_j c_j log|g_j|` over
/// multiplicatively independent generators `g_j`, so that the approximation
/// lattice has no spurious short vectors.  `eta_0 = log|g_0|` is zero when
/// `|g_0| = 1` (the homogeneous case).
#[derive(Clone, Debug, Serialize)]
pub struct LinearForm {
    pub scale: u32,
    /// Human-readable generators, in lattice order.
    pub generators: Vec<String>,
    pub coeffs: Vec<Coeff>,
    /// `|g_0|` as text.
    pub g0: String,
    #[serde(skip)]
    g0_elem: QuadElem,
    #[serde(skip)]
    gen_elems: Vec<QuadElem>,
}

impl LinearForm {
    pub fn eta0(&self) -> RealSpec {
        log_spec(&self.g0_elem)
    }

    pub fn etas(&self) -> Vec<RealSpec> {
        self.gen_elems.iter().map(log_spec).collect()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.g0_elem.abs().is_one()
    }

    /// Coefficient bounds `X_j`.
    pub fn bounds(&self, z: &[BigInt], n: &BigInt) -> Vec<BigInt> {
        self.coeffs.iter().map(|c| c.bound(z, n)).collect()
    }
}

fn log_spec(q: &QuadElem) -> RealSpec {
    // |q| = 1 gives log|q| = 0 exactly; a numerical floor would sit on an integer.
    if q.abs().is_one() {
        RealSpec::Exact(BigRational::zero())
    } else {
        RealSpec::LogAbs(q.clone())
    }
}

/// Pairwise coprime integers `> 1` generating the same multiplicative
/// monoid as the inputs (which must be positive).
fn coprime_base(xs: &[BigInt]) -> Vec<BigInt> {
    let mut xs: Vec<BigInt> = xs.iter().filter(|x| !x.is_one()).cloned().collect();
    loop {
        xs.sort();
        xs.dedup();
        let mut found = None;
        'outer: for i in 0..xs.len() {
            for j in i + 1..xs.len() {
                let g = xs[i].gcd(&xs[j]);
                if !g.is_one() {
                    found = Some((i, j, g));
                    break 'outer;
                }
            }
        }
        let Some((i, j, g)) = found else { return xs };
        let a = &xs[i] / &g;
        let b = &xs[j] / &g;
        xs.remove(j);
        xs.remove(i);
        xs.extend([a, b, g].into_iter().filter(|x| !x.is_one()));
    }
}

/// Exponents of `x` over a coprime base that generates it.
fn base_exponents(x: &BigInt, base: &[BigInt]) -> Vec<i64> {
    let mut x = x.clone();
    let e = base
        .iter()
        .map(|b| {
            let mut k = 0;
            while (&x % b).is_zero() {
                x /= b;
                k += 1;
            }
            k
        })
        .collect();
    debug_assert!(x.is_one(), "base does not generate the input");
    e
}

/// `|q|` with every prime of the set stripped, and the stripped exponents.
fn strip_set(q: &BigRational, primes: &[u64]) -> (BigInt, BigInt, Vec<i64>) {
    let mut num = q.numer().abs();
    let mut den = q.denom().abs();
    let mut e = Vec::with_capacity(primes.len());
    for &p in primes {
        let (n1, a) = strip_p(&num, p);
        let (d1, b) = strip_p(&den, p);
        num = n1;
        den = d1;
        e.push(a as i64 - b as i64);
    }
    (num, den, e)
}

fn pow_rat(b: &BigInt, e: i64) -> BigRational {
    let v = BigRational::from_integer(b.pow(e.unsigned_abs() as u32));
    if e >= 0 {
        v
    } else {
        v.recip()
    }
}

/// The linear form for an instance; see [`LinearForm`].
pub fn linear_form(inst: &Instance, bd: &BinetData) -> Result<LinearForm> {
    let gamma = bd.gamma(&inst.w);
    let s = inst.primes.len();
    let d = &bd.delta0;
    let prime_names: Vec<String> = inst.primes.iter().map(|p| p.to_string()).collect();
    let prime_elems: Vec<QuadElem> = inst.primes.iter().map(|&p| QuadElem::from_int(BigInt::from(p), d)).collect();
    if d.is_one() {
        // Rational roots: everything factors over the primes of the set and a
        // coprime base of the remaining parts of |alpha| and |gamma|.
        let alpha = bd.alpha.x().abs();
        let g = gamma.x().abs();
        let (ar, ad, ea) = strip_set(&alpha, &inst.primes);
        let (gn, gd, eg) = strip_set(&g, &inst.primes);
        debug_assert!(ad.is_one());
        let base = coprime_base(&[ar.clone(), gn.clone(), gd.clone()]);
        let ea_x = base_exponents(&ar, &base);
        let gn_x = base_exponents(&gn, &base);
        let gd_x = base_exponents(&gd, &base);
        let mut gens = prime_names;
        let mut elems = prime_elems;
        let mut coeffs: Vec<Coeff> = (0..s)
            .map(|i| Coeff { offset: BigInt::from(eg[i]), z_index: Some(i), z_mult: 1, n_mult: -ea[i] })
            .collect();
        let mut g0 = BigRational::one();
        for (j, b) in base.iter().enumerate() {
            let off = gn_x[j] - gd_x[j];
            if ea_x[j] == 0 {
                g0 *= pow_rat(b, off);
            } else {
                gens.push(b.to_string());
                elems.push(QuadElem::from_int(b.clone(), d));
                coeffs.push(Coeff { offset: BigInt::from(off), z_index: None, z_mult: 0, n_mult: -ea_x[j] });
            }
        }
        // The generator carrying the largest multiple of n goes last.
        let last = (0..coeffs.len()).rev().max_by_key(|&j| coeffs[j].n_mult.unsigned_abs()).expect("non-empty");
        let k = coeffs.len() - 1;
        gens.swap(last, k);
        elems.swap(last, k);
        coeffs.swap(last, k);
        return Ok(LinearForm {
            scale: 1,
            generators: gens,
            coeffs,
            g0: g0.to_string(),
            g0_elem: QuadElem::from_rational(g0, d),
            gen_elems: elems,
        });
    }
    let mut gens = prime_names;
    gens.push("alpha".into());
    let mut elems = prime_elems;
    elems.push(bd.alpha.clone());
    // Irrational roots: log|gamma| is dependent exactly when
    // gamma^2 alpha^-k is rational for some k, forced by conjugation to be
    // k = 2 log|gamma/gamma'| / log|alpha/beta|.
    let ratio = |x: &QuadElem| -> Result<f64> {
        Ok((quad_abs(x, 64)?.ln(64)?.sub(&quad_abs(&x.conj(), 64)?.ln(64)?)).to_f64())
    };
    let kf = 2.0 * ratio(&gamma)? / ratio(&bd.alpha)?;
    let k = kf.round();
    if (kf - k).abs() < 1e-6 && k.abs() <= 1e6 {
        let k = k as i64;
        let r = &(&gamma * &gamma) * &bd.alpha.powi(-k)?;
        if r.is_rational() {
            let (rn, rd, eg) = strip_set(r.x(), &inst.primes);
            let mut coeffs: Vec<Coeff> =
                (0..s).map(|i| Coeff { offset: BigInt::from(eg[i]), z_index: Some(i), z_mult: 2, n_mult: 0 }).collect();
            coeffs.push(Coeff { offset: BigInt::from(k), z_index: None, z_mult: 0, n_mult: -2 });
            let g0 = BigRational::new(rn, rd);
            return Ok(LinearForm {
                scale: 2,
                generators: gens,
                coeffs,
                g0: g0.to_string(),
                g0_elem: QuadElem::from_rational(g0, d),
                gen_elems: elems,
            });
        }
    }
    let mut coeffs: Vec<Coeff> =
        (0..s).map(|i| Coeff { offset: BigInt::zero(), z_index: Some(i), z_mult: 1, n_mult: 0 }).collect();
    coeffs.push(Coeff { offset: BigInt::zero(), z_index: None, z_mult: 0, n_mult: -1 });
    Ok(LinearForm {
        scale: 1,
        generators: gens,
        coeffs,
        g0: format!("{:.6}", gamma.abs().to_f64()),
        g0_elem: gamma.abs(),
        gen_elems: elems,
    })
}

/// One reduction with a fixed `C`, for bounds `z_i <= Z_i`, `n <= N`.
pub fn real_reduction(
    inst: &Instance,
    bd: &BinetData,
    ib: &InitialBounds,
    z: &[BigInt],
    n: &BigInt,
    c: &BigInt,
) -> Result<ReductionOutcome> {
    real_reduction_with(&linear_form(inst, bd)?, ib, z, n, c)
}

/// One reduction of a prepared [`LinearForm`].
///
/// With coefficient bounds `X_j`, `S = sum_{j<k} X_j^2` and
/// `T = 1 + sum_j X_j` (each of the floors in the last coordinate is off by
/// less than one); `scale * |Lambda| < scale * c3~ * exp(-c4~ (n - m))`.
pub fn real_reduction_with(
    form: &LinearForm,
    ib: &InitialBounds,
    z: &[BigInt],
    n: &BigInt,
    c: &BigInt,
) -> Result<ReductionOutcome> {
    let (eta0, etas) = (form.eta0(), form.etas());
    let (lat, y) = build_approx_lattice(&eta0, &etas, c)?;
    let x = form.bounds(z, n);
    let k = x.len();
    if lat.basis[k - 1][k - 1].is_zero() {
        // floor(C eta_k) = 0: the lattice is singular and C far too small.
        let s: BigInt = x[..k - 1].iter().map(|v| v * v).sum();
        let t: BigInt = BigInt::one() + x.iter().sum::<BigInt>();
        return Ok(ReductionOutcome::ConditionFailed {
            c: c.clone(),
            c1_sq_log10: f64::NEG_INFINITY,
            threshold_log10: log10_rat(&BigRational::from_integer(&t * &t + &s)),
        });
    }
    let red = lll(&lat)?;
    let lb = lattice_lower_bound(&red, &y)?;
    let s: BigInt = x[..k - 1].iter().map(|v| v * v).sum();
    let t: BigInt = BigInt::one() + x.iter().sum::<BigInt>();
    let threshold = BigRational::from_integer(&t * &t + &s);
    let failed = || ReductionOutcome::ConditionFailed {
        c: c.clone(),
        c1_sq_log10: log10_rat(&lb.c1_sq),
        threshold_log10: log10_rat(&threshold),
    };
    if lb.c1_sq <= threshold {
        return Ok(failed());
    }
    // H = (log(C scale c3~) - log(sqrt(c1~^2 - S) - T)) / c4~.
    let diff = BigReal::from_ratio(&(&lb.c1_sq - BigRational::from_integer(s.clone())), PREC + 64);
    // Round the subtracted quantity downward so that H only grows.
    let root = diff.sqrt();
    let root = root.sub(&root.abs().mul_pow2(-(PREC as i64)));
    let gap = root.sub(&real_of(&t));
    if !gap.is_positive() {
        return Ok(failed());
    }
    let r = &ib.reals;
    let c3t = real_of(&BigInt::from(2))
        .mul(&real_of(&BigInt::one()).add(&real_of(&BigInt::from(2)).mul(&r.abs_b).div(&r.abs_a)))
        .mul(&real_of(&BigInt::from(form.scale)));
    let h_of = |num: BigReal| -> BigInt {
        let hv = num.div(&r.c4_tilde);
        let hv = hv.add(&hv.abs().mul_pow2(-200)).add(&BigReal::from_parts(BigInt::one(), -100, PREC));
        floor_nonneg(&hv)
    };
    let h = h_of(real_of(c).mul(&c3t).ln(PREC)?.sub(&gap.ln(PREC)?));
    let mut data = RealReductionData {
        c: c.clone(),
        h,
        c1_sq_log10: log10_rat(&lb.c1_sq),
        c2_tilde_log10: log10_rat(&lb.c2_tilde),
        sigma: BigReal::from_ratio(&lb.sigma, 64).to_f64(),
        s,
        t,
        dimension: red.dim(),
    };
    if lb.i0.is_some() {
        return Ok(ReductionOutcome::NewBound(data));
    }
    // y lies in L: the bound covers every coefficient vector except
    // c_j = 0 (j < k), c_k = x_k, on which scale * Lambda takes the fixed value
    // eta_0 + x_k eta_k.
    let x_k = solve_coordinates(&lat, &y)?.last().expect("non-empty").to_integer();
    let exact_zero = x_k.abs() <= BigInt::from(1_000_000) && {
        let e = x_k.to_i64().expect("small");
        (&form.g0_elem * &form.gen_elems[k - 1].powi(e)?).abs().is_one()
    };
    if exact_zero {
        // Those coefficient vectors give Lambda = 0, the vanishing case.
        return Ok(ReductionOutcome::Degenerate { x_k, lambda_star_log10: None, data });
    }
    let wp = PREC + 2 * real_of(&x_k).log2_abs_f64().max(0.0) as u32;
    let lam = eta0.eval(wp)?.add(&etas[k - 1].eval(wp)?.mul(&BigReal::from_int(&x_k, wp)));
    let lam = lam.abs();
    // Below the evaluation error the value is not certified non-zero.
    if lam.log2_abs_f64() < -((wp as f64) - 64.0) {
        return Err(Error::ReductionFailed("cannot separate the exceptional lattice point from zero".into()));
    }
    let lam_lo = lam.sub(&lam.mul_pow2(-64));
    let h_star = h_of(c3t.ln(PREC)?.sub(&lam_lo.ln(PREC)?));
    data.h = data.h.clone().max(h_star);
    Ok(ReductionOutcome::Degenerate { x_k, lambda_star_log10: Some(lam.log10_abs_f64()), data })
}

/// Starting `C`: `10^ceil(k log10 X0)` with `X0` the largest coefficient
/// bound and `k` the lattice dimension.
pub fn default_c(x: &[BigInt]) -> BigInt {
    let x0 = x.iter().max().cloned().unwrap_or_else(BigInt::one).max(BigInt::from(2));
    let k = x.len() as f64;
    let digits = (k * real_of(&x0).log10_abs_f64()).ceil().max(1.0) as u32;
    BigInt::from(10).pow(digits)
}

/// Attempts made by [`real_reduction_auto`].
pub const MAX_C_RETRIES: usize = 5;

/// [`real_reduction`] starting at `c_start` (or [`default_c`]) and
/// multiplying `C` by `10^50` after each failed condition, at most
/// [`MAX_C_RETRIES`] times.  Returns the outcome together with every `C` tried.
pub fn real_reduction_auto(
    inst: &Instance,
    bd: &BinetData,
    ib: &InitialBounds,
    z: &[BigInt],
    n: &BigInt,
    c_start: Option<&BigInt>,
) -> Result<(ReductionOutcome, Vec<BigInt>)> {
    let form = linear_form(inst, bd)?;
    let mut c = c_start.cloned().unwrap_or_else(|| default_c(&form.bounds(z, n)));
    let step = BigInt::from(10).pow(50);
    let mut tried = Vec::new();
    for attempt in 0..=MAX_C_RETRIES {
        tried.push(c.clone());
        let out = real_reduction_with(&form, ib, z, n, &c)?;
        match out {
            ReductionOutcome::ConditionFailed { .. } if attempt < MAX_C_RETRIES => c *= &step,
            other => return Ok((other, tried)),
        }
    }
    unreachable!("the loop returns on its last attempt")
}
