//! Exact arithmetic in a real quadratic field `Q(sqrt(d))` (or in `Q` when
//! `d = 1`).
//!
//! An element is stored as `x + y * sqrt(d)` with rational coordinates and a
//! square-free radicand `d >= 1`.  For `d = 1` the invariant `y = 0` is kept,
//! so rational fields need no special casing elsewhere.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Element `x + y * sqrt(d)` of `Q(sqrt(d))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadElem {
    x: BigRational,
    y: BigRational,
    d: BigInt,
}

/// Primitive integer minimal polynomial `lead * X^deg + ...`, stored as
/// coefficients from the constant term upward with a positive leading term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinPoly {
    pub coeffs: Vec<BigInt>,
}

impl MinPoly {
    /// Degree (1 or 2).
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Leading coefficient.
    pub fn leading(&self) -> &BigInt {
        self.coeffs.last().expect("non-empty polynomial")
    }
}

fn rat(n: BigInt) -> BigRational {
    BigRational::from_integer(n)
}

impl QuadElem {
    /// Build `x + y sqrt(d)`; with `d = 1` the two parts are merged.
    pub fn new(x: BigRational, y: BigRational, d: BigInt) -> Self {
        assert!(d.is_positive(), "radicand must be positive");
        if d.is_one() {
            QuadElem { x: x + y, y: BigRational::zero(), d }
        } else {
            QuadElem { x, y, d }
        }
    }

    /// The rational number `q` viewed inside `Q(sqrt(d))`.
    pub fn from_rational(q: BigRational, d: &BigInt) -> Self {
        QuadElem::new(q, BigRational::zero(), d.clone())
    }

    /// The integer `n` viewed inside `Q(sqrt(d))`.
    pub fn from_int(n: impl Into<BigInt>, d: &BigInt) -> Self {
        QuadElem::from_rational(rat(n.into()), d)
    }

    /// `sqrt(d)` itself (requires `d > 1`).
    pub fn sqrt_d(d: &BigInt) -> Self {
        QuadElem::new(BigRational::zero(), BigRational::one(), d.clone())
    }

    /// Rational part.
    pub fn x(&self) -> &BigRational {
        &self.x
    }

    /// Coefficient of `sqrt(d)`.
    pub fn y(&self) -> &BigRational {
        &self.y
    }

    /// Square-free radicand of the ambient field.
    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// Whether the element lies in `Q`.
    pub fn is_rational(&self) -> bool {
        self.y.is_zero()
    }

    /// Galois conjugate `x - y sqrt(d)`.
    pub fn conj(&self) -> Self {
        QuadElem { x: self.x.clone(), y: -self.y.clone(), d: self.d.clone() }
    }

    /// Field norm `x^2 - d y^2`.
    pub fn norm(&self) -> BigRational {
        &self.x * &self.x - rat(self.d.clone()) * &self.y * &self.y
    }

    /// Field trace `2x`.
    pub fn trace(&self) -> BigRational {
        &self.x * rat(BigInt::from(2))
    }

    /// Multiplicative inverse.
    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::InvalidInput("inverse of zero".into()));
        }
        let n = self.norm();
        let c = self.conj();
        Ok(QuadElem { x: c.x / &n, y: c.y / &n, d: self.d.clone() })
    }

    /// Quotient `self / other`.
    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.inv()?)
    }

    /// Non-negative integer power by repeated squaring.
    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = QuadElem::from_int(1, &self.d);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Integer power allowing negative exponents.
    pub fn powi(&self, e: i64) -> Result<Self> {
        if e >= 0 {
            Ok(self.pow(e as u64))
        } else {
            Ok(self.inv()?.pow(e.unsigned_abs()))
        }
    }

    /// Sign of the real embedding `x + y * (+sqrt(d))`, computed exactly.
    pub fn signum(&self) -> i32 {
        let sx = sign_of(&self.x);
        let sy = sign_of(&self.y);
        if sy == 0 {
            return sx;
        }
        if sx == 0 || sx == sy {
            return sy;
        }
        // Opposite signs: compare x^2 against d y^2.
        let lhs = &self.x * &self.x;
        let rhs = rat(self.d.clone()) * &self.y * &self.y;
        if lhs > rhs {
            sx
        } else if lhs < rhs {
            sy
        } else {
            0
        }
    }

    /// Absolute value of the real embedding.
    pub fn abs(&self) -> Self {
        if self.signum() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Exact comparison of absolute values `|self|` and `|other|`.
    pub fn cmp_abs(&self, other: &Self) -> std::cmp::Ordering {
        let diff = &self.abs() - &other.abs();
        diff.signum().cmp(&0)
    }

    /// Floating-point approximation of the real embedding (for heuristics only).
    pub fn to_f64(&self) -> f64 {
        use num_traits::ToPrimitive;
        let xf = self.x.to_f64().unwrap_or(f64::NAN);
        let yf = self.y.to_f64().unwrap_or(f64::NAN);
        let df = self.d.to_f64().unwrap_or(f64::NAN);
        xf + yf * df.sqrt()
    }

    /// Primitive integer minimal polynomial over `Z`.
    pub fn min_poly(&self) -> MinPoly {
        if self.is_rational() {
            let (n, dn) = (self.x.numer().clone(), self.x.denom().clone());
            return MinPoly { coeffs: vec![-n, dn] };
        }
        // X^2 - trace X + norm, cleared of denominators.
        let tr = self.trace();
        let nm = self.norm();
        let l = tr.denom().lcm(nm.denom());
        let c1 = -(tr * rat(l.clone())).to_integer();
        let c0 = (nm * rat(l.clone())).to_integer();
        let g = l.gcd(&c1).gcd(&c0);
        MinPoly { coeffs: vec![c0 / &g, c1 / &g, l / &g] }
    }

    /// Whether the element is an algebraic integer.
    pub fn is_algebraic_integer(&self) -> bool {
        self.min_poly().leading().is_one()
    }

    /// Whether the element is a rational integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        if self.is_rational() && self.x.is_integer() {
            Some(self.x.to_integer())
        } else {
            None
        }
    }
}

fn sign_of(q: &BigRational) -> i32 {
    if q.is_positive() {
        1
    } else if q.is_negative() {
        -1
    } else {
        0
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            write!(f, "{}", self.x)
        } else {
            write!(f, "{} + ({})*sqrt({})", self.x, self.y, self.d)
        }
    }
}

impl<'a> Add<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn add(self, o: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        QuadElem { x: &self.x + &o.x, y: &self.y + &o.y, d: self.d.clone() }
    }
}

impl<'a> Sub<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn sub(self, o: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        QuadElem { x: &self.x - &o.x, y: &self.y - &o.y, d: self.d.clone() }
    }
}

impl<'a> Mul<&'a QuadElem> for &'a QuadElem {
    type Output = QuadElem;
    fn mul(self, o: &QuadElem) -> QuadElem {
        debug_assert_eq!(self.d, o.d);
        let d = rat(self.d.clone());
        QuadElem { x: &self.x * &o.x + d * &self.y * &o.y, y: &self.x * &o.y + &self.y * &o.x, d: self.d.clone() }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem { x: -self.x, y: -self.y, d: self.d }
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, o: QuadElem) -> QuadElem {
        &self + &o
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, o: QuadElem) -> QuadElem {
        &self - &o
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, o: QuadElem) -> QuadElem {
        &self * &o
    }
}
