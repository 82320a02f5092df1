//! JSON documents for functions. Scalars are strings so that rationals
//! round-trip exactly.

use serde::{Deserialize, Serialize};

use super::{EscapeScaling, Form, LatticeFunction, Polynomial, Term};
use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FunctionDoc {
    Step {
        #[serde(default)]
        breakpoints: Vec<String>,
        values: Vec<Vec<String>>,
    },
    /// One polynomial (ascending coefficients) per component.
    Polynomial { components: Vec<Vec<String>> },
    PiecewisePolynomial {
        #[serde(default)]
        breakpoints: Vec<String>,
        /// `pieces[piece][component]` holds ascending coefficients.
        pieces: Vec<Vec<Vec<String>>>,
    },
    Smooth { components: Vec<Vec<TermDoc>> },
    Monotone { inner: Box<FunctionDoc> },
    AeModified { base: Box<FunctionDoc>, exceptions: Vec<ExceptionDoc> },
    EscapingDimension {
        dim: usize,
        #[serde(default = "unit_scaling")]
        scaling: EscapeScaling,
    },
}

fn unit_scaling() -> EscapeScaling {
    EscapeScaling::Unit
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExceptionDoc {
    pub point: String,
    pub value: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum TermDoc {
    Poly { coeffs: Vec<String> },
    Exp { coef: String, rate: String },
    Sin {
        coef: String,
        freq: String,
        #[serde(default)]
        pi: bool,
    },
    Cos {
        coef: String,
        freq: String,
        #[serde(default)]
        pi: bool,
    },
}

fn scalars<S: Scalar>(v: &[String]) -> Result<Vec<S>> {
    v.iter().map(|s| S::parse(s)).collect()
}

fn strings<S: Scalar>(v: &[S]) -> Vec<String> {
    v.iter().map(S::to_canonical).collect()
}

fn poly<S: Scalar>(c: &[String]) -> Result<Polynomial<S>> {
    Ok(Polynomial::new(scalars(c)?))
}

impl TermDoc {
    fn build<S: Scalar>(&self) -> Result<Term<S>> {
        Ok(match self {
            TermDoc::Poly { coeffs } => Term::Poly(poly(coeffs)?),
            TermDoc::Exp { coef, rate } => Term::Exp { coef: S::parse(coef)?, rate: S::parse(rate)? },
            TermDoc::Sin { coef, freq, pi } => Term::Sin { coef: S::parse(coef)?, freq: S::parse(freq)?, pi: *pi },
            TermDoc::Cos { coef, freq, pi } => Term::Cos { coef: S::parse(coef)?, freq: S::parse(freq)?, pi: *pi },
        })
    }

    fn from_term<S: Scalar>(t: &Term<S>) -> Self {
        match t {
            Term::Poly(p) => TermDoc::Poly { coeffs: strings(p.coeffs()) },
            Term::Exp { coef, rate } => TermDoc::Exp { coef: coef.to_canonical(), rate: rate.to_canonical() },
            Term::Sin { coef, freq, pi } => {
                TermDoc::Sin { coef: coef.to_canonical(), freq: freq.to_canonical(), pi: *pi }
            }
            Term::Cos { coef, freq, pi } => {
                TermDoc::Cos { coef: coef.to_canonical(), freq: freq.to_canonical(), pi: *pi }
            }
        }
    }
}

impl FunctionDoc {
    pub fn build<S: Scalar>(&self) -> Result<LatticeFunction<S>> {
        match self {
            FunctionDoc::Step { breakpoints, values } => LatticeFunction::step(
                scalars(breakpoints)?,
                values.iter().map(|v| LatticeVector::parse(v)).collect::<Result<_>>()?,
            ),
            FunctionDoc::Polynomial { components } => {
                LatticeFunction::polynomial(components.iter().map(|c| poly(c)).collect::<Result<_>>()?)
            }
            FunctionDoc::PiecewisePolynomial { breakpoints, pieces } => LatticeFunction::piecewise_polynomial(
                scalars(breakpoints)?,
                pieces
                    .iter()
                    .map(|comps| comps.iter().map(|c| poly(c)).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?,
            ),
            FunctionDoc::Smooth { components } => LatticeFunction::smooth(
                components
                    .iter()
                    .map(|terms| terms.iter().map(TermDoc::build).collect::<Result<Vec<_>>>())
                    .collect::<Result<_>>()?,
            ),
            FunctionDoc::Monotone { inner } => LatticeFunction::monotone(inner.build()?),
            FunctionDoc::AeModified { base, exceptions } => LatticeFunction::ae_modified(
                base.build()?,
                exceptions
                    .iter()
                    .map(|e| Ok((S::parse(&e.point)?, LatticeVector::parse(&e.value)?)))
                    .collect::<Result<_>>()?,
            ),
            FunctionDoc::EscapingDimension { dim, scaling } => LatticeFunction::escaping(*dim, *scaling),
        }
    }

    pub fn from_function<S: Scalar>(f: &LatticeFunction<S>) -> Result<Self> {
        Ok(match f.form() {
            Form::Step { breakpoints, values } => FunctionDoc::Step {
                breakpoints: strings(breakpoints),
                values: values.iter().map(LatticeVector::to_canonical).collect(),
            },
            Form::PiecewisePolynomial { breakpoints, pieces } => FunctionDoc::PiecewisePolynomial {
                breakpoints: strings(breakpoints),
                pieces: pieces.iter().map(|c| c.iter().map(|p| strings(p.coeffs())).collect()).collect(),
            },
            Form::Smooth { components } => FunctionDoc::Smooth {
                components: components.iter().map(|ts| ts.iter().map(TermDoc::from_term).collect()).collect(),
            },
            Form::PiecewiseMonotone(inner) => FunctionDoc::Monotone { inner: Box::new(Self::from_function(inner)?) },
            Form::AeModified { base, exceptions } => FunctionDoc::AeModified {
                base: Box::new(Self::from_function(base)?),
                exceptions: exceptions
                    .iter()
                    .map(|(p, v)| ExceptionDoc { point: p.to_canonical(), value: v.to_canonical() })
                    .collect(),
            },
            Form::EscapingDimension { scaling } => FunctionDoc::EscapingDimension { dim: f.dim(), scaling: *scaling },
            Form::Closure { label, .. } => {
                return Err(Error::UnsupportedForm(format!("closure `{label}` cannot be serialized")))
            }
        })
    }
}
