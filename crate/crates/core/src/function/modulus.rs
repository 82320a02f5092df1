//! Pointwise modulus `|f|` within the catalog.

use std::sync::Arc;

use super::oracle::piece_bounds;
use super::{Form, LatticeFunction, Polynomial};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Sign of `p` on an interval where it does not change sign.
fn sign_on<S: Scalar>(p: &Polynomial<S>, lo: &S, hi: &S) -> bool {
    let len = hi.clone() - lo.clone();
    let mut best = S::zero();
    let mut positive = true;
    for (num, den) in [(1, 2), (1, 4), (3, 4), (1, 8), (7, 8)] {
        let v = p.eval(&(lo.clone() + len.clone() * S::from_ratio(num, den)));
        if v.abs() > best {
            best = v.abs();
            positive = v > S::zero();
        }
    }
    positive
}

impl<S: Scalar> LatticeFunction<S> {
    /// The function `t ↦ |f(t)|`.
    pub fn modulus_fn(&self) -> Result<Self> {
        match &self.form {
            Form::Step { breakpoints, values } => {
                Self::step(breakpoints.clone(), values.iter().map(|v| v.modulus()).collect())
            }
            Form::PiecewisePolynomial { breakpoints, pieces } => {
                let mut new_bps: Vec<S> = Vec::new();
                let mut new_pieces: Vec<Vec<Polynomial<S>>> = Vec::new();
                for (j, comps) in pieces.iter().enumerate() {
                    let (lo, hi) = piece_bounds(breakpoints, j);
                    let mut cuts = Vec::new();
                    for p in comps {
                        cuts.extend(p.sign_changes(&lo, &hi)?);
                    }
                    cuts.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
                    cuts.dedup();
                    let mut knots = vec![lo.clone()];
                    knots.extend(cuts);
                    knots.push(hi.clone());
                    for (k, w) in knots.windows(2).enumerate() {
                        if j > 0 || k > 0 {
                            new_bps.push(w[0].clone());
                        }
                        new_pieces.push(
                            comps
                                .iter()
                                .map(|p| if sign_on(p, &w[0], &w[1]) { p.clone() } else { p.neg() })
                                .collect(),
                        );
                    }
                }
                Self::piecewise_polynomial(new_bps, new_pieces)
            }
            Form::Smooth { components } => {
                let mut polys = Vec::new();
                for terms in components {
                    let mut acc = Polynomial::zero();
                    for t in terms {
                        match t {
                            super::Term::Poly(p) => acc = acc.add(p),
                            _ => {
                                return Err(Error::UnsupportedForm(
                                    "modulus of transcendental smooth terms is outside the catalog".into(),
                                ))
                            }
                        }
                    }
                    polys.push(acc);
                }
                Self::polynomial(polys)?.modulus_fn()
            }
            Form::PiecewiseMonotone(inner) => inner.modulus_fn(),
            Form::AeModified { base, exceptions } => Self::ae_modified(
                base.modulus_fn()?,
                exceptions.iter().map(|(p, v)| (p.clone(), v.modulus())).collect(),
            ),
            Form::EscapingDimension { .. } => Ok(self.clone()),
            Form::Closure { label, f } => {
                let f = Arc::clone(f);
                Self::closure(self.dim, format!("|{label}|"), Arc::new(move |t: &S| Ok(f(t)?.modulus())))
            }
        }
    }
}
