//! Worked examples checked against independent computations: hand-derived
//! closed forms, floating-point formula evaluation, direct enumeration and a
//! stand-alone truncated p-adic series.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Rational64};
use num_traits::{One, ToPrimitive, Zero};

use recsum_core::arith::ord_p;
use recsum_core::bounds::{c1_p, c2_n, equal_index_bounds, initial_bounds};
use recsum_core::lattice::{real_reduction, ReductionOutcome};
use recsum_core::padic::nu_log_quotient;
use recsum_core::padic_reduction::{padic_reduce, tau, z0, PadicReductionInput, Shift};
use recsum_core::quad::QuadElem;
use recsum_core::recurrence::{binet_data, Instance, Recurrence};
use recsum_core::solver::{brute_force, solve, Solution, SolveConfig, Status};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn close(x: f64, y: f64, rel: f64) -> bool {
    (x - y).abs() <= rel * y.abs()
}

// ------------------------------------------------- stand-alone p-adic series

/// `x mod p^k` for a rational with denominator prime to `p`.
fn rat_mod(q: &BigRational, m: &BigInt) -> BigInt {
    let g = q.denom().extended_gcd(m);
    assert!(g.gcd.is_one());
    (q.numer() * g.x).mod_floor(m)
}

/// `nu_p(log_p(alpha/beta))` for odd `p` not dividing `Delta`, summing the
/// logarithm series of `(alpha/beta)^M - 1` directly to 200 terms modulo
/// `p^k`.  Split primes use the embedding by a Hensel-lifted root of `d0`;
/// inert primes use coordinate pairs over the unramified extension.
fn series_nu_log(a: i64, b: i64, p: u64, k: u32) -> i64 {
    let disc = a * a + 4 * b;
    let (mut f, mut d0) = (1i64, disc);
    for q in 2..=disc {
        while d0 % (q * q) == 0 {
            d0 /= q * q;
            f *= q;
        }
    }
    assert!(d0 % p as i64 != 0);
    let work = k + 12;
    let m = BigInt::from(p).pow(work);
    // alpha/beta = alpha^2 / (alpha beta) = alpha^2 / (-B).
    let x = rat_mod(&rat(a * a + disc, -4 * b), &m);
    let y = rat_mod(&rat(a * f, -2 * b), &m);
    let d = BigInt::from(d0);
    let pb = BigInt::from(p);
    let split = (0..p as i64).any(|r| (r * r - d0).rem_euclid(p as i64) == 0);
    // Elements are pairs (x, y) = x + y sqrt(d0); in the split case y = 0 after embedding.
    let (x, y, d) = if split {
        let mut r = BigInt::from((0..p as i64).find(|r| (r * r - d0).rem_euclid(p as i64) == 0).unwrap());
        for _ in 0..8 {
            let inv = (BigInt::from(2) * &r).extended_gcd(&m).x;
            r = (&r - (&r * &r - &d) * inv).mod_floor(&m);
        }
        assert!(((&r * &r - &d) % &m).is_zero());
        ((x + y * r).mod_floor(&m), BigInt::zero(), BigInt::zero())
    } else {
        (x, y, d)
    };
    let mul = |(a1, b1): &(BigInt, BigInt), (a2, b2): &(BigInt, BigInt)| {
        ((a1 * a2 + &d * b1 * b2).mod_floor(&m), (a1 * b2 + b1 * a2).mod_floor(&m))
    };
    let order = if split { p - 1 } else { p * p - 1 };
    let mut xm = (BigInt::one(), BigInt::zero());
    for _ in 0..order {
        xm = mul(&xm, &(x.clone(), y.clone()));
    }
    let u: (BigInt, BigInt) = ((&xm.0 - BigInt::one()).mod_floor(&m), xm.1.clone());
    assert!((&u.0 % &pb).is_zero() && (&u.1 % &pb).is_zero());
    let mut pw = u.clone();
    let mut sum = (BigInt::zero(), BigInt::zero());
    for i in 1u64..=200 {
        let (i1, v) = {
            let mut i1 = i;
            let mut v = 0;
            while i1 % p == 0 {
                i1 /= p;
                v += 1;
            }
            (i1, v)
        };
        let pv = pb.pow(v);
        assert!((&pw.0 % &pv).is_zero() && (&pw.1 % &pv).is_zero());
        let inv = BigInt::from(i1).extended_gcd(&m).x;
        let sign = if i % 2 == 1 { 1 } else { -1 };
        let t0: BigInt = (&pw.0 / &pv) * &inv * sign;
        let t1: BigInt = (&pw.1 / &pv) * &inv * sign;
        sum = ((sum.0 + t0).mod_floor(&m), (sum.1 + t1).mod_floor(&m));
        pw = mul(&pw, &u);
    }
    // Valid modulo p^(work - 4); report the valuation if it is below k.
    let m_k = BigInt::from(p).pow(k);
    let (s0, s1) = (sum.0.mod_floor(&m_k), sum.1.mod_floor(&m_k));
    assert!(!(s0.is_zero() && s1.is_zero()), "logarithm is zero modulo p^{k}");
    let ord = |v: &BigInt| if v.is_zero() { u64::MAX } else { ord_p(v, p) };
    ord(&s0).min(ord(&s1)) as i64
}

#[test]
fn log_quotient_valuations_match_series_oracle() {
    for (a, b, primes) in [(1i64, 1i64, vec![3u64, 7, 11, 13, 19, 29, 31, 41, 199]), (2, 1, vec![3, 5, 7, 11, 17, 23])]
    {
        let bd = binet_data(&Recurrence::new(a, b, 0, 1)).unwrap();
        for p in primes {
            let lo = series_nu_log(a, b, p, 30);
            let hi = series_nu_log(a, b, p, 60);
            assert_eq!(lo, hi, "oracle unstable at p = {p}");
            assert_eq!(nu_log_quotient(&bd, p).unwrap(), Rational64::from_integer(lo), "A = {a}, p = {p}");
        }
    }
}

#[test]
fn fibonacci_log_quotient_valuations_at_most_two() {
    let bd = binet_data(&Recurrence::fibonacci()).unwrap();
    for p in recsum_core::arith::primes_below(200) {
        assert!(nu_log_quotient(&bd, p).unwrap() <= Rational64::from_integer(2), "p = {p}");
    }
}

// ------------------------------------------------------- p-adic reduction

#[test]
fn pell_tau_two_by_hand() {
    // alpha^2 = 3 + 2 sqrt2, beta^2 = 3 - 2 sqrt2, a = b = 1:
    // (4 - 2 sqrt2) / (4 + 2 sqrt2) = (4 - 2 sqrt2)^2 / 8 = 3 - 2 sqrt2.
    let bd = binet_data(&Recurrence::pell()).unwrap();
    let expect = QuadElem::new(rat(3, 1), rat(-2, 1), BigInt::from(2));
    assert_eq!(tau(&bd, 2).unwrap(), expect);
}

#[test]
fn fibonacci_z0_at_five_by_norms() {
    // Norm(alpha + 1) = Norm(alpha^2) = 1 and Norm(sqrt5) = -5, d_L = 2.
    let bd = binet_data(&Recurrence::fibonacci()).unwrap();
    assert_eq!(z0(&bd, 1, 5).unwrap(), Rational64::new(-1, 2));
    // Primes not dividing Norm(a(alpha + 1)) Delta = 5 give zero.
    for p in [3u64, 7, 11, 101] {
        assert_eq!(z0(&bd, 1, p).unwrap(), Rational64::zero());
    }
}

/// `ord_p(u_{m+t} + u_m)` never exceeds the reduced bound for `m <= m_max`.
fn reduce_is_sound(rec: &Recurrence, p: u64, t: u64, n_bound: u64, m_max: u64) -> BigInt {
    let bd = binet_data(rec).unwrap();
    let nb = BigInt::from(n_bound);
    let res =
        padic_reduce(&bd, &PadicReductionInput { p, shift: Shift::Diff(t), n_bound: nb.clone(), z_bound: nb.clone() })
            .unwrap();
    let u = rec.terms(m_max + t);
    for m in 0..=m_max as usize {
        let s = &u[m + t as usize] + &u[m];
        if !s.is_zero() {
            assert!(BigInt::from(ord_p(&s, p)) <= res.new_z, "p = {p}, t = {t}, m = {m}");
        }
    }
    assert!(res.new_z < nb);
    res.new_z
}

#[test]
fn pell_three_adic_bound_matches_enumeration() {
    let z = reduce_is_sound(&Recurrence::pell(), 3, 1, 1_000_000, 40);
    assert!(z <= BigInt::from(20), "bound {z} is not a reduction");
}

#[test]
fn reductions_are_sound_against_enumeration() {
    for rec in [Recurrence::fibonacci(), Recurrence::lucas(), Recurrence::pell()] {
        for p in [2u64, 3, 5, 7, 11, 13] {
            for t in 1..=6 {
                reduce_is_sound(&rec, p, t, 10_000, 300);
            }
        }
    }
}

// -------------------------------------------------------------- constants

#[test]
fn padic_linear_form_constant_formula() {
    // The value at p = 199 is 947 * 199 / (log 199)^4, about 240.
    for (p, f, approx) in [(2u64, 2u32, 1.641e4), (3, 1, 1.95e3), (199, 1, 240.05)] {
        let oracle = 947.0 * (p as f64).powi(f as i32) / (p as f64).ln().powi(4);
        let got = c1_p(p, f).unwrap().to_f64();
        assert!(close(got, oracle, 1e-12) && close(got, approx, 5e-3), "p = {p}: {got}");
    }
}

#[test]
fn linear_forms_constant_formula() {
    for (n, approx) in [(2u32, 4.06e10), (3, 1.512e13)] {
        let oracle = 2.31 * 60f64.powi(n as i32 + 3) * (n as f64).powf(4.5);
        let got = c2_n(n).unwrap().to_f64();
        assert!(close(got, oracle, 1e-12) && close(got, approx, 5e-3), "n = {n}: {got}");
    }
    let l = c2_n(48).unwrap().log10_abs_f64();
    assert!((l - 98.6).abs() < 0.05, "log10 C2(48) = {l}");
}

#[test]
fn fibonacci_growth_constants() {
    let inst = Instance::new(Recurrence::fibonacci(), 1, vec![2]);
    let bd = inst.validate().unwrap();
    let ib = initial_bounds(&inst, &bd).unwrap();
    assert!(close(ib.growth.c1.to_f64(), 4.0 / 5f64.sqrt(), 1e-12));
    assert!(ib.growth.c5.to_f64() < 6.0);
    // c1 <= |w| forces c2 = 0.
    let inst2 = Instance::new(Recurrence::fibonacci(), 3, vec![2]);
    let ib2 = initial_bounds(&inst2, &inst2.validate().unwrap()).unwrap();
    assert_eq!(ib2.growth.c2.to_f64(), 0.0);
}

#[test]
fn all_odd_equal_index_case_is_impossible() {
    let inst = Instance::new(Recurrence::fibonacci(), 1, vec![3, 5, 7]);
    let ib = initial_bounds(&inst, &inst.validate().unwrap()).unwrap();
    assert!(equal_index_bounds(&inst, &ib.reals, &ib.growth, &ib.primes).unwrap().is_none());
    // Oracle: 2 u_n is even, w p^z with odd w and odd primes is odd.
    let inst2 = Instance::new(Recurrence::fibonacci(), 1, vec![2, 3]);
    let ib2 = initial_bounds(&inst2, &inst2.validate().unwrap()).unwrap();
    assert!(equal_index_bounds(&inst2, &ib2.reals, &ib2.growth, &ib2.primes).unwrap().is_some());
}

#[test]
fn vanishing_constants() {
    // Pell has |b/a| = 1, so c22 = 0.
    let inst = Instance::new(Recurrence::pell(), 1, vec![2]);
    let ib = initial_bounds(&inst, &inst.validate().unwrap()).unwrap();
    assert_eq!(ib.vanishing.c22.as_ref().unwrap().to_f64(), 0.0);
    // alpha = 3, beta = 2, a = b = 1: c23 = C2(3) 0.16 log 3 + 1.
    let inst = Instance::new(Recurrence::new(5, -6, 0, 1), 1, vec![5, 7]);
    let ib = initial_bounds(&inst, &inst.validate().unwrap()).unwrap();
    let oracle = 2.31 * 60f64.powi(6) * 3f64.powf(4.5) * 0.16 * 3f64.ln() + 1.0;
    assert!(close(ib.vanishing.c23.as_ref().unwrap().to_f64(), oracle, 1e-9));
}

#[test]
fn initial_bound_ordering_across_instances() {
    let primes46 = recsum_core::arith::primes_below(200);
    let n_of = |rec: Recurrence, primes: Vec<u64>| {
        let inst = Instance::new(rec, 1, primes);
        let ib = initial_bounds(&inst, &inst.validate().unwrap()).unwrap();
        recsum_core::bounds::real_of(&ib.state.n).log10_abs_f64()
    };
    let fib46 = n_of(Recurrence::fibonacci(), primes46.clone());
    let luc46 = n_of(Recurrence::lucas(), primes46);
    let fib3 = n_of(Recurrence::fibonacci(), vec![2, 3, 5]);
    assert!(fib3 < fib46);
    assert!((fib46 - luc46).abs() < 0.05 * fib46, "{fib46} vs {luc46}");
}

// --------------------------------------------------------------- lattices

#[test]
fn tiny_c_fails_the_reduction_condition() {
    let inst = Instance::new(Recurrence::fibonacci(), 1, vec![2, 3, 5]);
    let bd = inst.validate().unwrap();
    let ib = initial_bounds(&inst, &bd).unwrap();
    let out = real_reduction(&inst, &bd, &ib, &ib.state.z, &ib.state.n, &BigInt::one()).unwrap();
    assert!(matches!(out, ReductionOutcome::ConditionFailed { .. }));
}

// ----------------------------------------------------------- enumeration

#[test]
fn brute_force_by_hand() {
    let inst = Instance::new(Recurrence::fibonacci(), 1, vec![2]);
    let got = brute_force(&inst, 1).unwrap();
    assert_eq!(got, vec![Solution { n: 1, m: 0, z: vec![0] }, Solution { n: 1, m: 1, z: vec![1] }]);
    // u_0 = 0 and 0 is never w times an S-unit.
    assert!(brute_force(&inst, 0).unwrap().is_empty());
    // F_n + F_m among n <= 12 equal to a power of two, by direct listing.
    let f = Recurrence::fibonacci().terms(12);
    let mut oracle = Vec::new();
    for n in 0..=12usize {
        for m in 0..=n {
            let s = (&f[n] + &f[m]).to_u64().unwrap();
            if s > 0 && s.is_power_of_two() {
                oracle.push(Solution { n: n as u64, m: m as u64, z: vec![s.trailing_zeros() as u64] });
            }
        }
    }
    let mut got = brute_force(&inst, 12).unwrap();
    got.sort();
    oracle.sort();
    assert_eq!(got, oracle);
}

/// The complete solver agrees with enumeration up to 200 on rational-root
/// instances whose vanishing sums exercise the exact case analysis.
#[test]
fn rational_roots_solve_matches_enumeration() {
    let cases = [
        Instance::new(Recurrence::new(5, -6, 1, 4), 1, vec![5, 7]),
        Instance::new(Recurrence::new(5, -6, 0, 1), 1, vec![5, 7]),
        Instance::new(Recurrence::new(5, -6, 0, 1), 1, vec![2, 3]),
        Instance::new(Recurrence::new(6, -8, 1, 5), 1, vec![3, 5]),
        Instance::new(Recurrence::new(8, -12, 0, 1), 1, vec![3]),
    ];
    for inst in cases {
        let res = solve(&inst, &SolveConfig::default()).unwrap();
        assert_eq!(res.status, Status::Complete, "{inst:?}");
        let bf = brute_force(&inst, 200).unwrap();
        let mut small: Vec<Solution> = res.solutions.iter().filter(|s| s.n <= 200).cloned().collect();
        small.sort();
        let mut bf_sorted = bf.clone();
        bf_sorted.sort();
        assert_eq!(small, bf_sorted, "{inst:?}");
        assert!(res.solutions.iter().all(|s| s.verify(&inst)));
        // Nothing between the certified bound and 200 was missed.
        assert!(bf.iter().all(|s| s.n <= 200));
    }
}

#[test]
fn hypothesis_violations_are_reported() {
    // gcd(A, B) = 2 with 2 in the prime set.
    let inst = Instance::new(Recurrence::new(2, 8, 0, 1), 1, vec![2, 3]);
    let res = solve(&inst, &SolveConfig::default()).unwrap();
    assert_eq!(res.status, Status::HypothesisViolated);
    // 2 divides w: not a valid instance.
    let inst = Instance::new(Recurrence::fibonacci(), 2, vec![2, 3]);
    assert!(inst.validate().is_err());
}
