//! Dense univariate polynomials with ascending coefficients.

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Polynomial<S> {
    /// `coeffs[i]` multiplies `t^i`. Trailing zeros are dropped.
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, t: &S) -> S {
        self.coeffs.iter().rev().fold(S::zero(), |acc, c| acc * t.clone() + c.clone())
    }

    pub fn eval_f64(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * t + c.to_f64())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_u64(i as u64))
                .collect(),
        )
    }

    /// Antiderivative vanishing at 0.
    pub fn antiderivative(&self) -> Self {
        let mut out = vec![S::zero()];
        out.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() / S::from_u64(i as u64 + 1)),
        );
        Self::new(out)
    }

    /// `∫_a^b p`.
    pub fn integral(&self, a: &S, b: &S) -> S {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    pub fn neg(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| -c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let at = |v: &[S], i: usize| v.get(i).cloned().unwrap_or_else(S::zero);
        Self::new((0..n).map(|i| at(&self.coeffs, i) + at(&other.coeffs, i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![S::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Self::new(out)
    }

    /// Sum of absolute coefficients: a bound for `|p|` on [0,1].
    pub fn abs_coeff_sum(&self) -> S {
        self.coeffs.iter().fold(S::zero(), |acc, c| acc + c.abs())
    }

    /// Sign-change points of `p` strictly inside `(lo, hi)`.
    ///
    /// Roots are isolated in `f64` and then snapped: on the exact backend a
    /// root must be a rational with small denominator that makes `p` vanish
    /// exactly, otherwise the call fails with `Inexact`.
    pub fn sign_changes(&self, lo: &S, hi: &S) -> Result<Vec<S>> {
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let (l, h) = (lo.to_f64(), hi.to_f64());
        let mut out: Vec<S> = Vec::new();
        for r in real_roots_f64(&self.to_f64_coeffs(), l, h) {
            let x = snap_root(self, r)?;
            if x > *lo && x < *hi && out.last() != Some(&x) {
                out.push(x);
            }
        }
        out.sort_by(|a, b| a.partial_cmp(b).expect("ordered roots"));
        out.dedup();
        Ok(out)
    }

    fn to_f64_coeffs(&self) -> Vec<f64> {
        self.coeffs.iter().map(S::to_f64).collect()
    }
}

fn eval_f64(c: &[f64], t: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, v| acc * t + v)
}

/// Roots in `(lo, hi)` by recursive critical-point isolation.
fn real_roots_f64(c: &[f64], lo: f64, hi: f64) -> Vec<f64> {
    let deg = c.len().saturating_sub(1);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        let r = -c[0] / c[1];
        return if r > lo && r < hi { vec![r] } else { Vec::new() };
    }
    let d: Vec<f64> = c.iter().enumerate().skip(1).map(|(i, v)| v * i as f64).collect();
    let mut knots = vec![lo];
    knots.extend(real_roots_f64(&d, lo, hi));
    knots.push(hi);
    let scale = c.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(f64::MIN_POSITIVE);
    let mut roots = Vec::new();
    for w in knots.windows(2) {
        let (a, b) = (w[0], w[1]);
        let (fa, fb) = (eval_f64(c, a), eval_f64(c, b));
        if fa.abs() <= 1e-13 * scale && a > lo {
            roots.push(a);
            continue;
        }
        if fa.signum() == fb.signum() || fb == 0.0 {
            continue;
        }
        let (mut x0, mut x1, mut f0) = (a, b, fa);
        for _ in 0..200 {
            let m = 0.5 * (x0 + x1);
            if m <= x0 || m >= x1 {
                break;
            }
            let fm = eval_f64(c, m);
            if fm == 0.0 {
                x0 = m;
                x1 = m;
                break;
            }
            if fm.signum() == f0.signum() {
                x0 = m;
                f0 = fm;
            } else {
                x1 = m;
            }
        }
        roots.push(0.5 * (x0 + x1));
    }
    roots
}

/// Best rational approximations of `x` with denominator at most `max_den`.
fn convergents(x: f64, max_den: i64) -> Vec<(i64, i64)> {
    let mut out = Vec::new();
    let (mut h0, mut h1, mut k0, mut k1) = (0i64, 1i64, 1i64, 0i64);
    let mut v = x;
    for _ in 0..40 {
        let a = v.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i64;
        let (h, k) = (a.saturating_mul(h1).saturating_add(h0), a.saturating_mul(k1).saturating_add(k0));
        if k > max_den || k <= 0 {
            break;
        }
        out.push((h, k));
        (h0, h1, k0, k1) = (h1, h, k1, k);
        let frac = v - a as f64;
        if frac.abs() < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    out
}

fn snap_root<S: Scalar>(p: &Polynomial<S>, r: f64) -> Result<S> {
    for (num, den) in convergents(r, 1 << 20) {
        if (num as f64 / den as f64 - r).abs() > 1e-6 {
            continue;
        }
        let x = S::from_ratio(num, den);
        if p.eval(&x).is_zero() {
            return Ok(x);
        }
    }
    if S::is_exact() {
        return Err(Error::Inexact(format!("irrational root near {r} has no exact representation")));
    }
    S::parse(&format!("{r:?}"))
}
