//! Elementary integer arithmetic: valuations, primality, square-free parts,
//! modular inverses and square roots.

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exponent of the prime `p` in the non-zero integer `n`.
pub fn ord_p(n: &BigInt, p: u64) -> u64 {
    assert!(!n.is_zero(), "ord_p of zero");
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}

/// Exponent of `p` in a non-zero rational number.
pub fn ord_p_rational(q: &BigRational, p: u64) -> i64 {
    ord_p(q.numer(), p) as i64 - ord_p(q.denom(), p) as i64
}

/// Divide out every factor `p` of `n`, returning `(n / p^v, v)`.
pub fn strip_p(n: &BigInt, p: u64) -> (BigInt, u64) {
    let v = ord_p(n, p);
    (n / BigInt::from(p).pow(v as u32), v)
}

/// Deterministic Miller–Rabin test, exact for every 64-bit integer.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    let mul = |a: u64, b: u64| ((a as u128 * b as u128) % n as u128) as u64;
    let pow = |mut a: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mul(r, a);
            }
            a = mul(a, a);
            e >>= 1;
        }
        r
    };
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow(a, d);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul(x, x);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// All primes strictly below `n`, in increasing order.
pub fn primes_below(n: u64) -> Vec<u64> {
    if n < 3 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n];
    sieve[0] = false;
    sieve[1] = false;
    let mut i = 2;
    while i * i < n {
        if sieve[i] {
            let mut j = i * i;
            while j < n {
                sieve[j] = false;
                j += i;
            }
        }
        i += 1;
    }
    (0..n).filter(|&k| sieve[k]).map(|k| k as u64).collect()
}

/// Exact integer square root of a non-negative integer, if it exists.
pub fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    if &(&r * &r) == n {
        Some(r)
    } else {
        None
    }
}

/// Write the positive integer `n` as `f^2 * d0` with `d0` square-free.
///
/// Trial division is used up to `10^7`; a cofactor without small prime
/// factors is either a perfect square, a prime, or (when below `10^21`) a
/// product of two distinct primes, all of which are decided exactly.
pub fn squarefree_decompose(n: &BigInt) -> Result<(BigInt, BigInt)> {
    if !n.is_positive() {
        return Err(Error::InvalidInput(format!("square-free part of non-positive {n}")));
    }
    let mut f = BigInt::one();
    let mut d0 = BigInt::one();
    let mut m = n.clone();
    let limit: u64 = 10_000_000;
    let mut p: u64 = 2;
    while p <= limit {
        let pb = BigInt::from(p);
        if &(&pb * &pb) > &m {
            break;
        }
        if (&m % &pb).is_zero() {
            let (rest, v) = strip_p(&m, p);
            m = rest;
            f *= pb.pow((v / 2) as u32);
            if v % 2 == 1 {
                d0 *= &pb;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if m.is_one() {
        return Ok((f, d0));
    }
    if let Some(r) = exact_sqrt(&m) {
        return Ok((f * r, d0));
    }
    let bound = BigInt::from(limit);
    if m < &bound * &bound * &bound {
        // Every prime factor exceeds the trial bound, so at most two prime
        // factors are present and the cofactor is square-free unless square.
        return Ok((f, d0 * m));
    }
    Err(Error::InvalidInput("discriminant has a large cofactor whose square-free part cannot be certified".into()))
}

/// Inverse of `a` modulo `m` (`m > 1`), if `gcd(a, m) = 1`.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Legendre symbol `(a | p)` for an odd prime `p`, as `-1`, `0` or `1`.
pub fn legendre(a: &BigInt, p: u64) -> i32 {
    let pb = BigInt::from(p);
    let a = a.mod_floor(&pb);
    if a.is_zero() {
        return 0;
    }
    let r = a.modpow(&BigInt::from((p - 1) / 2), &pb);
    if r.is_one() {
        1
    } else {
        -1
    }
}

/// Smallest non-negative square root of `a` modulo the odd prime `p`,
/// assuming `(a | p) = 1`.
pub fn sqrt_mod_prime(a: &BigInt, p: u64) -> Option<u64> {
    let am = a.mod_floor(&BigInt::from(p)).to_u64()?;
    // p is small in every use of this routine (primes of the input set), but
    // guard against large p by falling back to Tonelli–Shanks.
    if p < 1 << 20 {
        return (0..p).find(|&x| (x as u128 * x as u128) % p as u128 == am as u128);
    }
    tonelli_shanks(am, p)
}

fn tonelli_shanks(a: u64, p: u64) -> Option<u64> {
    let mulm = |x: u64, y: u64| ((x as u128 * y as u128) % p as u128) as u64;
    let powm = |mut b: u64, mut e: u64| {
        let mut r = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                r = mulm(r, b);
            }
            b = mulm(b, b);
            e >>= 1;
        }
        r
    };
    if a == 0 {
        return Some(0);
    }
    if powm(a, (p - 1) / 2) != 1 {
        return None;
    }
    let mut q = p - 1;
    let mut s = 0;
    while q % 2 == 0 {
        q /= 2;
        s += 1;
    }
    let mut z = 2;
    while powm(z, (p - 1) / 2) != p - 1 {
        z += 1;
    }
    let mut m = s;
    let mut c = powm(z, q);
    let mut t = powm(a, q);
    let mut r = powm(a, (q + 1) / 2);
    while t != 1 {
        let mut i = 0;
        let mut tt = t;
        while tt != 1 {
            tt = mulm(tt, tt);
            i += 1;
        }
        let b = powm(c, 1 << (m - i - 1));
        m = i;
        c = mulm(b, b);
        t = mulm(t, c);
        r = mulm(r, b);
    }
    Some(r.min(p - r))
}

/// `floor(log_p(n))` for positive `n` and `p >= 2`, computed exactly.
pub fn ilog(n: &BigInt, p: u64) -> u64 {
    assert!(n.is_positive());
    let pb = BigInt::from(p);
    let mut k = 0;
    let mut acc = pb.clone();
    while &acc <= n {
        acc *= &pb;
        k += 1;
    }
    k
}

/// Least `r >= 0` with `p^r > n` (so every integer `0 <= m <= n` is `< p^r`).
pub fn digits_needed(n: &BigInt, p: u64) -> u64 {
    if n.sign() == Sign::Minus || n.is_zero() {
        return 0;
    }
    ilog(n, p) + 1
}
