//! Closed-form integrals and sup bounds.

use super::{escaping_pieces, Form, LatticeFunction, Term};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::partition::Interval;
use crate::scalar::{smax, smin, Scalar};

/// Endpoints of piece `j` for interior breakpoints `bps`.
pub(crate) fn piece_bounds<S: Scalar>(bps: &[S], j: usize) -> (S, S) {
    let lo = if j == 0 { S::zero() } else { bps[j - 1].clone() };
    let hi = if j == bps.len() { S::one() } else { bps[j].clone() };
    (lo, hi)
}

/// `[lo,hi] ∩ [a,b]` when it has positive length.
fn overlap<S: Scalar>(lo: &S, hi: &S, a: &S, b: &S) -> Option<(S, S)> {
    let (l, h) = (smax(lo, a), smin(hi, b));
    (l < h).then_some((l, h))
}

fn term_integral<S: Scalar>(term: &Term<S>, a: &S, b: &S) -> Result<S> {
    let inexact = || Error::Inexact("closed form needs the float backend".into());
    let omega = |freq: &S, pi: bool| Term::angle(freq, pi, &S::one());
    match term {
        Term::Poly(p) => Ok(p.integral(a, b)),
        Term::Exp { coef, rate } => {
            if rate.is_zero() {
                return Ok(coef.clone() * (b.clone() - a.clone()));
            }
            let eb = (rate.clone() * b.clone()).exp().ok_or_else(inexact)?;
            let ea = (rate.clone() * a.clone()).exp().ok_or_else(inexact)?;
            Ok(coef.clone() / rate.clone() * (eb - ea))
        }
        Term::Sin { coef, freq, pi } => {
            let w = omega(freq, *pi)?;
            if w.is_zero() {
                return Ok(S::zero());
            }
            let ca = (w.clone() * a.clone()).cos().ok_or_else(inexact)?;
            let cb = (w.clone() * b.clone()).cos().ok_or_else(inexact)?;
            Ok(coef.clone() / w * (ca - cb))
        }
        Term::Cos { coef, freq, pi } => {
            let w = omega(freq, *pi)?;
            if w.is_zero() {
                return Ok(coef.clone() * (b.clone() - a.clone()));
            }
            let sa = (w.clone() * a.clone()).sin().ok_or_else(inexact)?;
            let sb = (w.clone() * b.clone()).sin().ok_or_else(inexact)?;
            Ok(coef.clone() / w * (sb - sa))
        }
    }
}

impl<S: Scalar> LatticeFunction<S> {
    /// `∫_I f` from the antiderivative, exact on the rational backend.
    pub fn exact_integral(&self, interval: &Interval<S>) -> Result<LatticeVector<S>> {
        self.integral_between(interval.a(), interval.b())
    }

    /// `∫_a^b f` for `0 <= a <= b <= 1`.
    pub fn integral_between(&self, a: &S, b: &S) -> Result<LatticeVector<S>> {
        if *a < S::zero() || *b > S::one() || a > b {
            return Err(Error::OutOfDomain(format!("[{}, {}] is not inside [0,1]", a.to_canonical(), b.to_canonical())));
        }
        let mut acc = LatticeVector::zeros(self.dim);
        match &self.form {
            Form::Step { breakpoints, values } => {
                for (j, v) in values.iter().enumerate() {
                    let (lo, hi) = piece_bounds(breakpoints, j);
                    if let Some((l, h)) = overlap(&lo, &hi, a, b) {
                        acc.add_scaled(v, &(h - l))?;
                    }
                }
            }
            Form::PiecewisePolynomial { breakpoints, pieces } => {
                for (j, comps) in pieces.iter().enumerate() {
                    let (lo, hi) = piece_bounds(breakpoints, j);
                    if let Some((l, h)) = overlap(&lo, &hi, a, b) {
                        let part = LatticeVector::new(comps.iter().map(|p| p.integral(&l, &h)).collect())?;
                        acc.add_assign(&part)?;
                    }
                }
            }
            Form::Smooth { components } => {
                let vals = components
                    .iter()
                    .map(|terms| terms.iter().try_fold(S::zero(), |s, t| Ok(s + term_integral(t, a, b)?)))
                    .collect::<Result<Vec<_>>>()?;
                acc = LatticeVector::new(vals)?;
            }
            Form::PiecewiseMonotone(inner) => return inner.integral_between(a, b),
            Form::AeModified { base, .. } => return base.integral_between(a, b),
            Form::EscapingDimension { .. } => return self.normalized().integral_between(a, b),
            Form::Closure { label, .. } => {
                return Err(Error::UnsupportedForm(format!("closure `{label}` has no closed-form integral")))
            }
        }
        Ok(acc)
    }

    /// A componentwise bound `M >= |f(t)|` on [0,1].
    pub fn majorant(&self) -> Result<LatticeVector<S>> {
        let join_all = |vs: Vec<LatticeVector<S>>| -> Result<LatticeVector<S>> {
            let mut it = vs.into_iter();
            let first = it.next().expect("at least one piece").modulus();
            it.try_fold(first, |m, v| m.join(&v.modulus()))
        };
        match &self.form {
            Form::Step { values, .. } => join_all(values.clone()),
            Form::PiecewisePolynomial { breakpoints, pieces } => {
                let mut out = Vec::new();
                for (j, comps) in pieces.iter().enumerate() {
                    let (_, hi) = piece_bounds(breakpoints, j);
                    let v = comps
                        .iter()
                        .map(|p| {
                            p.coeffs()
                                .iter()
                                .enumerate()
                                .fold(S::zero(), |s, (i, c)| s + c.abs() * hi.powi(i as u32))
                        })
                        .collect();
                    out.push(LatticeVector::new(v)?);
                }
                join_all(out)
            }
            Form::Smooth { components } => {
                let mut v = Vec::new();
                for terms in components {
                    let mut s = S::zero();
                    for t in terms {
                        s = s + match t {
                            Term::Poly(p) => p.abs_coeff_sum(),
                            Term::Exp { coef, rate } => {
                                if *rate <= S::zero() {
                                    coef.abs()
                                } else {
                                    coef.abs()
                                        * rate.exp().ok_or_else(|| {
                                            Error::Inexact("exp bound needs the float backend".into())
                                        })?
                                }
                            }
                            Term::Sin { coef, .. } | Term::Cos { coef, .. } => coef.abs(),
                        };
                    }
                    v.push(s);
                }
                LatticeVector::new(v)
            }
            Form::PiecewiseMonotone(inner) => {
                join_all(vec![inner.evaluate(&S::zero())?, inner.evaluate(&S::one())?])
            }
            Form::AeModified { base, exceptions } => {
                let mut vs = vec![base.majorant()?];
                vs.extend(exceptions.iter().map(|(_, v)| v.clone()));
                join_all(vs)
            }
            Form::EscapingDimension { scaling } => join_all(escaping_pieces(self.dim, *scaling).1),
            Form::Closure { label, .. } => Err(Error::UnsupportedForm(format!("closure `{label}` has no known bound"))),
        }
    }
}
