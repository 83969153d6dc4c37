//! Independent test oracles and property checks shared by the property
//! suite and the acceptance report.  Nothing here calls the code under test
//! to compute an expected value: exact rational Gram–Schmidt, adjugate
//! lattice membership, bisection for roots, floating-point heights and
//! direct enumeration are all re-implemented from first principles.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_rational::Rational64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use recsum_core::bounds::{growth_constants, initial_bounds, pdw_bound, InstanceReals};
use recsum_core::lattice::{is_lll_reduced, lattice_lower_bound, lll, IntLattice};
use recsum_core::mpreal::BigReal;
use recsum_core::padic::{padic_log, LocalField};
use recsum_core::quad::QuadElem;
use recsum_core::recurrence::{height, Instance, Recurrence};
use recsum_core::solver::brute_force;

pub type Check = std::result::Result<(), TestCaseError>;

fn fail(msg: String) -> Check {
    Err(TestCaseError::fail(msg))
}

/// Run `check` on `cases` inputs drawn from `strategy` with a fixed seed.
pub fn run<S: Strategy>(cases: u32, strategy: S, check: impl Fn(S::Value) -> Check) -> std::result::Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let config = Config { cases, failure_persistence: None, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::deterministic_rng(proptest::test_runner::RngAlgorithm::ChaCha),
    );
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------- lattices

/// Square integer matrix given by columns, non-singular.
pub fn lattice_strategy(max_dim: usize, max_entry: i64) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (1..=max_dim)
        .prop_flat_map(move |k| prop::collection::vec(prop::collection::vec(-max_entry..=max_entry, k), k))
        .prop_filter("singular", |cols| det_i128(cols) != 0)
}

fn to_lattice(cols: &[Vec<i64>]) -> IntLattice {
    IntLattice::from_columns(cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect()).unwrap()
}

/// Determinant by exact rational elimination on `i128`-sized input.
fn det_rat(cols: &[Vec<BigInt>]) -> BigRational {
    let k = cols.len();
    let mut m: Vec<Vec<BigRational>> =
        (0..k).map(|i| (0..k).map(|j| BigRational::from_integer(cols[j][i].clone())).collect()).collect();
    let mut det = BigRational::one();
    for c in 0..k {
        let Some(p) = (c..k).find(|&r| !m[r][c].is_zero()) else { return BigRational::zero() };
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c].clone();
        for r in c + 1..k {
            let f = &m[r][c] / &m[c][c];
            for j in c..k {
                let v = &f * &m[c][j];
                m[r][j] -= v;
            }
        }
    }
    det
}

fn det_i128(cols: &[Vec<i64>]) -> i128 {
    let b: Vec<Vec<BigInt>> = cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
    det_rat(&b).to_integer().to_i128().unwrap()
}

/// Solve `B x = y` over the rationals (Gauss–Jordan).
fn solve_rat(cols: &[Vec<BigInt>], y: &[BigInt]) -> Vec<BigRational> {
    let k = cols.len();
    let mut m: Vec<Vec<BigRational>> = (0..k)
        .map(|i| {
            let mut row: Vec<BigRational> = (0..k).map(|j| BigRational::from_integer(cols[j][i].clone())).collect();
            row.push(BigRational::from_integer(y[i].clone()));
            row
        })
        .collect();
    for c in 0..k {
        let p = (c..k).find(|&r| !m[r][c].is_zero()).expect("non-singular");
        m.swap(p, c);
        let piv = m[c][c].clone();
        for j in c..=k {
            m[c][j] = &m[c][j] / &piv;
        }
        for r in 0..k {
            if r != c && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in c..=k {
                    let v = &f * &m[c][j];
                    m[r][j] -= v;
                }
            }
        }
    }
    m.into_iter().map(|row| row[k].clone()).collect()
}

/// Exact size-reduction and Lovász conditions (`delta = 3/4`) through an
/// independent rational Gram–Schmidt process, plus the reduced basis
/// spanning the same lattice.
pub fn check_lll(cols: Vec<Vec<i64>>) -> Check {
    let l = to_lattice(&cols);
    let red = lll(&l).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let b = &red.basis;
    let k = b.len();
    let dot = |x: &[BigRational], y: &[BigRational]| -> BigRational { x.iter().zip(y).map(|(a, c)| a * c).sum() };
    let bq: Vec<Vec<BigRational>> =
        b.iter().map(|c| c.iter().map(|x| BigRational::from_integer(x.clone())).collect()).collect();
    let mut bstar: Vec<Vec<BigRational>> = Vec::new();
    let mut mu = vec![vec![BigRational::zero(); k]; k];
    for i in 0..k {
        let mut v = bq[i].clone();
        for j in 0..i {
            mu[i][j] = dot(&bq[i], &bstar[j]) / dot(&bstar[j], &bstar[j]);
            for (t, s) in v.iter_mut().zip(&bstar[j]) {
                *t -= &mu[i][j] * s;
            }
        }
        bstar.push(v);
    }
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for i in 0..k {
        for j in 0..i {
            if mu[i][j].abs() > half {
                return fail(format!("|mu[{i}][{j}]| = {} > 1/2", mu[i][j]));
            }
        }
    }
    for i in 1..k {
        let lhs = dot(&bstar[i], &bstar[i]);
        let rhs = (BigRational::new(BigInt::from(3), BigInt::from(4)) - &mu[i][i - 1] * &mu[i][i - 1])
            * dot(&bstar[i - 1], &bstar[i - 1]);
        if lhs < rhs {
            return fail(format!("Lovasz condition fails at {i}"));
        }
    }
    // Same lattice: equal |det| and every reduced vector integral in the old basis.
    let orig: Vec<Vec<BigInt>> = cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
    if det_rat(&orig).abs() != det_rat(b).abs() {
        return fail("determinant changed".into());
    }
    for v in b {
        if !solve_rat(&orig, v).iter().all(|x| x.is_integer()) {
            return fail("reduced vector outside the lattice".into());
        }
    }
    prop_assert!(is_lll_reduced(&red).unwrap(), "library checker disagrees");
    Ok(())
}

/// Membership test `B^-1 v` integral, via the adjugate: `adj(B) v = 0 mod det`.
struct Membership {
    adj: Vec<Vec<i128>>,
    det: i128,
}

impl Membership {
    fn new(cols: &[Vec<i64>]) -> Self {
        let k = cols.len();
        let b: Vec<Vec<BigInt>> = cols.iter().map(|c| c.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let det = det_rat(&b);
        // adj(B) = det * B^-1, column by column.
        let mut adj = vec![vec![0i128; k]; k];
        for j in 0..k {
            let e: Vec<BigInt> = (0..k).map(|i| BigInt::from((i == j) as i64)).collect();
            let x = solve_rat(&b, &e);
            for i in 0..k {
                adj[i][j] = (&x[i] * &det).to_integer().to_i128().unwrap();
            }
        }
        Membership { adj, det: det.to_integer().to_i128().unwrap() }
    }

    fn contains(&self, v: &[i64]) -> bool {
        self.adj.iter().all(|row| row.iter().zip(v).map(|(a, &x)| a * x as i128).sum::<i128>() % self.det == 0)
    }
}

/// Every lattice point `x != y` satisfies `||x - y||^2 >= c1_sq`, by
/// enumerating the integer points of the open ball of squared radius `c1_sq`.
pub fn check_lower_bound(cols: &[Vec<i64>], y: &[i64]) -> Check {
    let l = to_lattice(cols);
    let red = lll(&l).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let yb: Vec<BigInt> = y.iter().map(|&v| BigInt::from(v)).collect();
    let lb = lattice_lower_bound(&red, &yb).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let mem = Membership::new(cols);
    let k = cols.len();
    let r = lb.c1_sq.ceil().to_integer().to_i64().unwrap();
    let rr = (r as f64).sqrt().ceil() as i64 + 1;
    let mut off = vec![-rr; k];
    loop {
        let d2: i64 = off.iter().map(|o| o * o).sum();
        if BigRational::from_integer(BigInt::from(d2)) < lb.c1_sq && d2 > 0 {
            let v: Vec<i64> = y.iter().zip(&off).map(|(a, b)| a + b).collect();
            if mem.contains(&v) {
                return fail(format!("lattice point {v:?} at squared distance {d2} < {}", lb.c1_sq));
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return Ok(());
            }
            off[i] += 1;
            if off[i] <= rr {
                break;
            }
            off[i] = -rr;
            i += 1;
        }
    }
}

/// All bases `[[a, b], [0, d]]` with entries in small ranges and all targets
/// in a box, exhaustively.
pub fn exhaustive_lower_bounds_dim2() -> std::result::Result<usize, String> {
    let mut n = 0;
    for a in 1..=4 {
        for b in -3..=3 {
            for d in 1..=4 {
                for y0 in -2..=2 {
                    for y1 in -2..=2 {
                        check_lower_bound(&[vec![a, 0], vec![b, d]], &[y0, y1]).map_err(|e| e.to_string())?;
                        n += 1;
                    }
                }
            }
        }
    }
    for a in 1..=6 {
        for y in -7..=7 {
            check_lower_bound(&[vec![a]], &[y]).map_err(|e| e.to_string())?;
            n += 1;
        }
    }
    Ok(n)
}

pub fn lower_bound_strategy() -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (3usize..=4)
        .prop_flat_map(|k| {
            (prop::collection::vec(prop::collection::vec(-4i64..=4, k), k), prop::collection::vec(-6i64..=6, k))
        })
        .prop_filter("singular", |(c, _)| det_i128(c) != 0)
}

// ----------------------------------------------------------------- p-adics

/// `(p, Delta0, x, y, z)` with `x, y` coordinates of two elements and `z` of a third.
pub fn padic_strategy() -> impl Strategy<Value = (u64, i64, [i64; 6])> {
    (
        prop::sample::select(vec![2u64, 3, 5, 7, 199]),
        prop::sample::select(vec![2i64, 3, 5, 6, 7, 13, 21]),
        prop::array::uniform6(-400i64..=400),
    )
}

fn quad(x: i64, y: i64, d: i64) -> QuadElem {
    QuadElem::new(rat(x), rat(y), BigInt::from(d))
}

/// For units `x, y`: `log(xy) = log x + log y`; for `xi = 1 + p^2 z`:
/// `nu(log xi) = nu(xi - 1)` (exact valuation from the norm).
pub fn check_padic((p, d, c): (u64, i64, [i64; 6])) -> Check {
    let f = LocalField::new(p, &BigInt::from(d), 160);
    let x = quad(c[0], c[1], d);
    let y = quad(c[2], c[3], d);
    let z = quad(c[4], c[5], d);
    let k = 24;
    let unit = |q: &QuadElem| !q.is_zero() && f.valuation_of(q).map(|v| v.is_zero()).unwrap_or(false);
    prop_assume!(unit(&x) && unit(&y));
    let lx = padic_log(&f.from_quad(&x, 60).unwrap(), k).unwrap();
    let ly = padic_log(&f.from_quad(&y, 60).unwrap(), k).unwrap();
    let lxy = padic_log(&f.from_quad(&(&x * &y), 60).unwrap(), k).unwrap();
    let diff = lxy.sub(&lx.add(&ly));
    let agrees =
        diff.is_zero_approx() || diff.valuation().map(|v| v >= Rational64::from_integer(k - 2)).unwrap_or(false);
    if !agrees {
        return fail(format!("log additivity fails for p = {p}, d = {d}"));
    }
    prop_assume!(!z.is_zero());
    let p2 = QuadElem::from_int(BigInt::from(p * p), &BigInt::from(d));
    let xi_minus_1 = &p2 * &z;
    let xi = &xi_minus_1 + &QuadElem::from_int(1, &BigInt::from(d));
    let expect = f.valuation_of(&xi_minus_1).unwrap();
    // Enough precision that the logarithm is not zero to working precision.
    let kk = (expect.to_integer() + 12).max(k);
    let l = padic_log(&f.from_quad(&xi, kk as u32 + 20).unwrap(), kk).unwrap();
    let got = l.valuation().map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(got, expect, "p = {}, d = {}", p, d);
    Ok(())
}

// -------------------------------------------------------------------- pdw

/// Last sign change of `x - u - v (log x)^h` on a fine geometric grid,
/// refined by bisection: the largest solution of `x = u + v (log x)^h`.
pub fn largest_root(u: f64, v: f64, h: f64) -> f64 {
    let f = |x: f64| x - u - v * x.ln().powf(h);
    let mut last = 1.0;
    let mut x: f64 = 1.0;
    while x < 1e40 {
        if f(x) <= 0.0 {
            last = x;
        }
        x *= 1.0005;
    }
    let (mut lo, mut hi) = (last, last * 1.0005);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) <= 0.0 {
            lo = mid
        } else {
            hi = mid
        }
    }
    lo
}

pub fn pdw_strategy() -> impl Strategy<Value = (f64, f64, u32)> {
    (0.0f64..1e6, 1.0f64..1e6, 1u32..=3)
}

pub fn check_pdw((u, v, h): (f64, f64, u32)) -> Check {
    let b = pdw_bound(&BigReal::from_f64(u, 128), &BigReal::from_f64(v, 128), &BigReal::from_i64(h as i64, 128))
        .map_err(|e| TestCaseError::fail(e.to_string()))?
        .to_f64();
    let r = largest_root(u, v, h as f64);
    prop_assert!(b >= r * (1.0 - 1e-12), "pdw({u}, {v}, {h}) = {b} < root {r}");
    Ok(())
}

// ----------------------------------------------------------------- heights

/// Root `(-b + sqrt(b^2 - 4ac)) / (2a)` of a random integer quadratic with
/// positive non-square discriminant.
pub fn height_strategy() -> impl Strategy<Value = (i64, i64, i64)> {
    (1i64..=40, -60i64..=60, -60i64..=60).prop_filter("need a real irrational root", |&(a, b, c)| {
        let disc = b * b - 4 * a * c;
        disc > 0 && (disc as f64).sqrt().round().powi(2) as i64 != disc
    })
}

/// `h = (log a0 + sum log+ |roots|) / 2` in floating point, with `a0` the
/// leading coefficient of the primitive polynomial.
pub fn float_height(a: i64, b: i64, c: i64) -> f64 {
    let g = a.gcd(&b).gcd(&c);
    let (a, b, c) = ((a / g) as f64, (b / g) as f64, (c / g) as f64);
    let s = (b * b - 4.0 * a * c).sqrt();
    let r1 = (-b + s) / (2.0 * a);
    let r2 = (-b - s) / (2.0 * a);
    (a.abs().ln() + r1.abs().ln().max(0.0) + r2.abs().ln().max(0.0)) / 2.0
}

pub fn check_height((a, b, c): (i64, i64, i64)) -> Check {
    let disc = BigInt::from(b * b - 4 * a * c);
    let (sq, d0) = recsum_core::arith::squarefree_decompose(&disc).unwrap();
    // sqrt(disc) = sq * sqrt(d0).
    let q = QuadElem::new(
        BigRational::new(BigInt::from(-b), BigInt::from(2 * a)),
        BigRational::new(sq, BigInt::from(2 * a)),
        d0,
    );
    let h = height(&q).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let oracle = float_height(a, b, c);
    prop_assert!((h - oracle).abs() < 1e-9 * oracle.max(1.0), "height {h} vs oracle {oracle}");
    prop_assert!(h >= 0.24, "height {h} < 0.24 for root of {a}x^2 + {b}x + {c}");
    Ok(())
}

// ---------------------------------------------------------- growth bounds

/// `ln |x|` for a non-zero integer of any size.
fn log_abs(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 900 {
        return x.abs().to_f64().unwrap().ln();
    }
    let shift = bits - 60;
    (x.abs() >> shift).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// Growth bounds on one instance: for all `m <= n <= n_max`,
/// `|u_n + u_m| < c1 |alpha|^n`, and for `n > c3` also `c4 |alpha|^n < |u_n + u_m|`;
/// on the actual solutions with `n > c3`, `n < sum z_i log p_i / log|alpha| + c5`.
pub fn check_growth_bounds(inst: &Instance, n_max: u64) -> Check {
    let bd = inst.validate().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let r = InstanceReals::new(inst, &bd).unwrap();
    let l2 = growth_constants(&r).unwrap();
    let la = r.log_alpha.to_f64();
    let (lc1, lc4, c3, c5) = (l2.c1.to_f64().ln(), l2.c4.to_f64().ln(), l2.c3.to_f64(), l2.c5.to_f64());
    let terms = inst.recurrence.terms(n_max);
    let tol = 1e-9;
    for n in 0..=n_max as usize {
        for m in 0..=n {
            let s = &terms[n] + &terms[m];
            if s.is_zero() {
                if n as f64 > c3 {
                    return fail(format!("u_{n} + u_{m} = 0 beyond c3"));
                }
                continue;
            }
            let ls = log_abs(&s);
            let top = lc1 + n as f64 * la;
            if ls >= top + tol * top.abs().max(1.0) {
                return fail(format!("|u_{n} + u_{m}| >= c1 |alpha|^n"));
            }
            if n as f64 > c3 {
                let bottom = lc4 + n as f64 * la;
                if ls <= bottom - tol * bottom.abs().max(1.0) {
                    return fail(format!("|u_{n} + u_{m}| <= c4 |alpha|^n"));
                }
            }
        }
    }
    for sol in brute_force(inst, n_max).unwrap() {
        if sol.n as f64 > c3 {
            let rhs: f64 =
                sol.z.iter().zip(&inst.primes).map(|(&z, &p)| z as f64 * (p as f64).ln()).sum::<f64>() / la + c5;
            if sol.n as f64 >= rhs + tol {
                return fail(format!("solution {sol:?} violates n < sum z log p / log|alpha| + c5"));
            }
        }
    }
    Ok(())
}

/// Random non-degenerate recurrences with `Delta > 0`.
pub fn recurrence_strategy() -> impl Strategy<Value = (i64, i64, i64, i64, i64)> {
    (1i64..=6, -8i64..=8, -5i64..=5, -5i64..=5, 1i64..=9)
        .prop_filter("instance must be valid", |&(a, b, u0, u1, w)| small_instance(a, b, u0, u1, w).validate().is_ok())
}

pub fn small_instance(a: i64, b: i64, u0: i64, u1: i64, w: i64) -> Instance {
    let primes: Vec<u64> =
        [2u64, 3, 5].into_iter().filter(|&p| w % p as i64 != 0 && (a.gcd(&b)) % p as i64 != 0).collect();
    Instance::new(Recurrence::new(a, b, u0, u1), w, if primes.is_empty() { vec![7] } else { primes })
}

/// The six desk instances: Fibonacci, Lucas, Pell with `{2}` and `{2, 3, 5}`.
pub fn desk_instances() -> Vec<(&'static str, Instance)> {
    let mut out = Vec::new();
    for (name, rec) in
        [("fibonacci", Recurrence::fibonacci()), ("lucas", Recurrence::lucas()), ("pell", Recurrence::pell())]
    {
        out.push((name, Instance::new(rec.clone(), 1, vec![2])));
        out.push((name, Instance::new(rec, 1, vec![2, 3, 5])));
    }
    out
}

/// Every brute-force solution with `n <= 500` lies inside the initial box.
pub fn check_initial_box(inst: &Instance) -> Check {
    let bd = inst.validate().unwrap();
    let ib = initial_bounds(inst, &bd).unwrap();
    for s in brute_force(inst, 500).unwrap() {
        prop_assert!(BigInt::from(s.n) < ib.state.n);
        for (z, zb) in s.z.iter().zip(&ib.state.z) {
            prop_assert!(&BigInt::from(*z) < zb);
        }
    }
    Ok(())
}
