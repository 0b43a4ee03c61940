use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::Coeff;

/// An element `a + b*sqrt(r)` of a real quadratic field, with rational `a`, `b`.
///
/// Values are kept normalized: `r` is square-free, and `r == 0` exactly when
/// `b == 0`. A value with `b == 0` is a plain rational and combines with any
/// radicand; combining two irrational values with different radicands panics.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadValue {
    a: BigRational,
    b: BigRational,
    radicand: u64,
}

fn square_free_split(n: u64) -> (u64, u64) {
    // n = outer^2 * inner, inner square-free
    let mut outer = 1u64;
    let mut inner = 1u64;
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        let mut count = 0;
        while rest.is_multiple_of(d) {
            rest /= d;
            count += 1;
        }
        outer *= d.pow(count / 2);
        if count % 2 == 1 {
            inner *= d;
        }
        d += 1;
    }
    inner *= rest;
    (outer, inner)
}

impl QuadValue {
    pub fn new(a: BigRational, b: BigRational, radicand: u64) -> Self {
        let mut v = QuadValue { a, b, radicand };
        v.normalize();
        v
    }

    pub fn rational(a: BigRational) -> Self {
        QuadValue {
            a,
            b: BigRational::zero(),
            radicand: 0,
        }
    }

    pub fn integer(n: i64) -> Self {
        Self::rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `sqrt(q)` for a non-negative integer `q`.
    pub fn sqrt(q: u64) -> Self {
        Self::new(BigRational::zero(), BigRational::one(), q)
    }

    /// `a + b*sqrt(radicand)` from small integers.
    pub fn from_ints(a: i64, b: i64, radicand: u64) -> Self {
        Self::new(
            BigRational::from_integer(BigInt::from(a)),
            BigRational::from_integer(BigInt::from(b)),
            radicand,
        )
    }

    pub fn rational_part(&self) -> &BigRational {
        &self.a
    }

    pub fn irrational_part(&self) -> &BigRational {
        &self.b
    }

    /// Square-free radicand, or 0 for rational values.
    pub fn radicand(&self) -> u64 {
        self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// Galois conjugate `a - b*sqrt(r)`.
    pub fn conjugate(&self) -> Self {
        QuadValue {
            a: self.a.clone(),
            b: -self.b.clone(),
            radicand: self.radicand,
        }
    }

    /// Field norm `a^2 - r b^2`.
    pub fn norm(&self) -> BigRational {
        let r = BigRational::from_integer(BigInt::from(self.radicand));
        &self.a * &self.a - r * &self.b * &self.b
    }

    fn normalize(&mut self) {
        if self.b.is_zero() || self.radicand == 0 {
            self.b = BigRational::zero();
            self.radicand = 0;
            return;
        }
        let (outer, inner) = square_free_split(self.radicand);
        let outer = BigRational::from_integer(BigInt::from(outer));
        if inner == 1 {
            self.a = &self.a + &self.b * outer;
            self.b = BigRational::zero();
            self.radicand = 0;
        } else {
            self.b = &self.b * outer;
            self.radicand = inner;
        }
    }

    fn common_radicand(&self, other: &Self) -> u64 {
        match (self.radicand, other.radicand) {
            (0, r) | (r, 0) => r,
            (r, s) if r == s => r,
            (r, s) => panic!("QuadValue radicand mismatch: sqrt({r}) vs sqrt({s})"),
        }
    }
}

impl fmt::Debug for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for QuadValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        let b = if self.b.is_one() {
            format!("sqrt({})", self.radicand)
        } else if (-self.b.clone()).is_one() {
            format!("-sqrt({})", self.radicand)
        } else {
            format!("{}*sqrt({})", self.b, self.radicand)
        };
        if self.a.is_zero() {
            write!(f, "{b}")
        } else if self.b.is_negative() {
            write!(f, "{}{}", self.a, b)
        } else {
            write!(f, "{}+{}", self.a, b)
        }
    }
}

impl Add for QuadValue {
    type Output = QuadValue;
    fn add(self, rhs: QuadValue) -> QuadValue {
        let r = self.common_radicand(&rhs);
        QuadValue::new(self.a + rhs.a, self.b + rhs.b, r)
    }
}

impl Sub for QuadValue {
    type Output = QuadValue;
    fn sub(self, rhs: QuadValue) -> QuadValue {
        let r = self.common_radicand(&rhs);
        QuadValue::new(self.a - rhs.a, self.b - rhs.b, r)
    }
}

impl Mul for QuadValue {
    type Output = QuadValue;
    fn mul(self, rhs: QuadValue) -> QuadValue {
        let r = self.common_radicand(&rhs);
        let rr = BigRational::from_integer(BigInt::from(r));
        let a = &self.a * &rhs.a + rr * &self.b * &rhs.b;
        let b = &self.a * &rhs.b + &self.b * &rhs.a;
        QuadValue::new(a, b, r)
    }
}

impl Neg for QuadValue {
    type Output = QuadValue;
    fn neg(self) -> QuadValue {
        QuadValue {
            a: -self.a,
            b: -self.b,
            radicand: self.radicand,
        }
    }
}

impl Coeff for QuadValue {
    fn zero() -> Self {
        QuadValue::integer(0)
    }
    fn one() -> Self {
        QuadValue::integer(1)
    }
    fn from_i64(n: i64) -> Self {
        QuadValue::integer(n)
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        let c = self.conjugate();
        Some(QuadValue::new(&c.a / &n, &c.b / &n, c.radicand))
    }
    fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        a + b * (self.radicand as f64).sqrt()
    }
}
