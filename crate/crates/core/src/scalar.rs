//! Scalar backends.
//!
//! Every algorithm in this crate is generic over [`Scalar`], which is
//! implemented for exact rationals ([`Rational`]) and binary floats (`f64`).
//! A computation is monomorphised for exactly one backend, so the two are
//! never mixed inside a single run.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Arbitrary precision rational.
pub type Rational = BigRational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Rational,
    Float,
}

impl std::fmt::Display for Backend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Backend::Rational => "rational",
            Backend::Float => "float",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rational" | "exact" => Ok(Backend::Rational),
            "float" | "f64" => Ok(Backend::Float),
            other => Err(Error::InvalidArgument(format!("unknown backend {other:?}"))),
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + PartialOrd
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const BACKEND: Backend;

    fn from_i64(v: i64) -> Self;

    /// `num / den`; `den` must be nonzero.
    fn from_ratio(num: i64, den: i64) -> Self;

    fn to_f64(&self) -> f64;

    fn abs(&self) -> Self;

    fn floor(&self) -> Self;

    /// Comparison slack: zero on the exact backend.
    fn tolerance() -> Self;

    /// Canonical text form: `p/q` in lowest terms for rationals, shortest
    /// round-trip decimal for floats.
    fn to_canonical(&self) -> String;

    fn parse(s: &str) -> Result<Self>;

    fn sqrt(&self) -> Option<Self>;
    fn sin(&self) -> Option<Self>;
    fn cos(&self) -> Option<Self>;
    fn exp(&self) -> Option<Self>;
    fn pi() -> Option<Self>;

    fn from_u64(v: u64) -> Self {
        Self::from_i64(i64::try_from(v).expect("u64 scalar fits in i64"))
    }

    fn powi(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = acc * self.clone();
        }
        acc
    }

    fn is_exact() -> bool {
        Self::BACKEND == Backend::Rational
    }

    /// `self <= other` up to the backend tolerance.
    fn le_tol(&self, other: &Self) -> bool {
        *self <= other.clone() + Self::tolerance()
    }

    /// Smallest integer `k >= self`, when it fits in a `u64`.
    fn ceil_u64(&self) -> Option<u64> {
        let f = self.floor();
        let c = if f == *self { f } else { f + Self::one() };
        let v = c.to_f64();
        if v.is_finite() && v >= 0.0 && v <= u64::MAX as f64 {
            Some(v as u64)
        } else {
            None
        }
    }
}

pub fn smax<S: Scalar>(a: &S, b: &S) -> S {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}

pub fn smin<S: Scalar>(a: &S, b: &S) -> S {
    if a <= b {
        a.clone()
    } else {
        b.clone()
    }
}

impl Scalar for Rational {
    const BACKEND: Backend = Backend::Rational;

    fn from_i64(v: i64) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        Rational::new(BigInt::from(num), BigInt::from(den))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs(&self) -> Self {
        Signed::abs(self)
    }

    fn floor(&self) -> Self {
        Rational::floor(self)
    }

    fn tolerance() -> Self {
        Rational::zero()
    }

    fn to_canonical(&self) -> String {
        // Ratio keeps itself reduced with a positive denominator.
        format!("{}/{}", self.numer(), self.denom())
    }

    fn parse(s: &str) -> Result<Self> {
        parse_rational(s.trim()).ok_or_else(|| Error::ParseScalar(s.to_string()))
    }

    fn sqrt(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        let r = Rational::new(n, d);
        (r.clone() * r.clone() == *self).then_some(r)
    }

    fn sin(&self) -> Option<Self> {
        self.is_zero().then(Rational::zero)
    }

    fn cos(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }

    fn exp(&self) -> Option<Self> {
        self.is_zero().then(Rational::one)
    }

    fn pi() -> Option<Self> {
        None
    }
}

fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((p, q)) = s.split_once('/') {
        let p = BigInt::from_str(p.trim()).ok()?;
        let q = BigInt::from_str(q.trim()).ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(Rational::new(p, q));
    }
    // Exact decimal, optionally with exponent: "-12.5e-3".
    let (mantissa, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, digits) = match mantissa.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, mantissa.strip_prefix('+').unwrap_or(mantissa)),
    };
    let (int_part, frac_part) = digits.split_once('.').unwrap_or((digits, ""));
    if int_part.is_empty() && frac_part.is_empty() {
        return None;
    }
    if !int_part.chars().chain(frac_part.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let all = format!("{int_part}{frac_part}");
    let num = BigInt::from_str(if all.is_empty() { "0" } else { &all }).ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10u32);
    let mut r = if scale >= 0 {
        Rational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        Rational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        r = -r;
    }
    Some(r)
}

impl Scalar for f64 {
    const BACKEND: Backend = Backend::Float;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn from_ratio(num: i64, den: i64) -> Self {
        num as f64 / den as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs(&self) -> Self {
        f64::abs(*self)
    }

    fn floor(&self) -> Self {
        f64::floor(*self)
    }

    fn tolerance() -> Self {
        1e-9
    }

    fn to_canonical(&self) -> String {
        format!("{self:?}")
    }

    fn parse(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.contains('/') {
            let r = parse_rational(t).ok_or_else(|| Error::ParseScalar(s.to_string()))?;
            return Ok(Scalar::to_f64(&r));
        }
        t.parse::<f64>()
            .ok()
            .filter(|v| v.is_finite())
            .ok_or_else(|| Error::ParseScalar(s.to_string()))
    }

    fn sqrt(&self) -> Option<Self> {
        (*self >= 0.0).then(|| f64::sqrt(*self))
    }

    fn sin(&self) -> Option<Self> {
        Some(f64::sin(*self))
    }

    fn cos(&self) -> Option<Self> {
        Some(f64::cos(*self))
    }

    fn exp(&self) -> Option<Self> {
        Some(f64::exp(*self))
    }

    fn pi() -> Option<Self> {
        Some(std::f64::consts::PI)
    }
}

/// `2^-k` on either backend.
pub fn dyadic<S: Scalar>(k: u32) -> S {
    S::one() / S::from_i64(2).powi(k)
}
