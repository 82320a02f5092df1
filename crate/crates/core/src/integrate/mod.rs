//! Norm-type and order-type integration with certificates.

mod adaptive;
mod indefinite;

use serde::Serialize;

pub use adaptive::integrate_norm_adaptive;
pub use indefinite::{modulus_measure, IndefiniteIntegral, Method, QueryResult};

use crate::error::{Error, Result};
use crate::function::{check_monotone, Form, LatticeFunction, Term};
use crate::lattice::LatticeVector;
use crate::oseq::OSequence;
use crate::scalar::{Backend, Scalar};

/// Largest bracket resolution `integrate_order` will use.
pub const MAX_BRACKET_PIECES: u64 = 10_000_000;

#[derive(Clone, Debug, PartialEq)]
pub enum Certificate<S> {
    Exact,
    /// `lower <= J <= upper` componentwise.
    Bracket { lower: LatticeVector<S>, upper: LatticeVector<S> },
    /// `|σ_level - σ_{level-1}|` at the stopping level.
    CauchyGap { gap: LatticeVector<S>, level: u32 },
}

impl<S: Scalar> Certificate<S> {
    pub fn name(&self) -> &'static str {
        match self {
            Certificate::Exact => "exact",
            Certificate::Bracket { .. } => "bracket",
            Certificate::CauchyGap { .. } => "cauchy_gap",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IntegralResult<S> {
    pub value: LatticeVector<S>,
    pub certificate: Certificate<S>,
    pub partitions_used: u64,
    pub backend: Backend,
    /// Certified `|value - J|` bound from an order schedule, when one applies.
    pub order_bound: Option<LatticeVector<S>>,
}

impl<S: Scalar> IntegralResult<S> {
    fn exact(value: LatticeVector<S>) -> Self {
        let dim = value.dim();
        Self {
            value,
            certificate: Certificate::Exact,
            partitions_used: 1,
            backend: S::BACKEND,
            order_bound: Some(LatticeVector::zeros(dim)),
        }
    }

    /// Componentwise uncertainty implied by the certificate.
    pub fn uncertainty(&self) -> Result<LatticeVector<S>> {
        let half = S::from_ratio(1, 2);
        let cert = match &self.certificate {
            Certificate::Exact => LatticeVector::zeros(self.value.dim()),
            Certificate::Bracket { lower, upper } => upper.sub(lower)?.scale(&half),
            Certificate::CauchyGap { gap, .. } => gap.clone(),
        };
        match &self.order_bound {
            Some(b) => cert.meet(b).or(Ok(cert)),
            None => Ok(cert),
        }
    }

    pub fn to_record(&self) -> ResultRecord {
        let (lower, upper, gap, level) = match &self.certificate {
            Certificate::Exact => (None, None, None, None),
            Certificate::Bracket { lower, upper } => (Some(lower.to_canonical()), Some(upper.to_canonical()), None, None),
            Certificate::CauchyGap { gap, level } => (None, None, Some(gap.to_canonical()), Some(*level)),
        };
        ResultRecord {
            value: self.value.to_canonical(),
            certificate: CertificateRecord { kind: self.certificate.name().to_string(), lower, upper, gap, level },
            partitions_used: self.partitions_used,
            backend: self.backend,
            order_bound: self.order_bound.as_ref().map(LatticeVector::to_canonical),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct CertificateRecord {
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub lower: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub upper: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gap: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub level: Option<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, serde::Deserialize)]
pub struct ResultRecord {
    pub value: Vec<String>,
    pub certificate: CertificateRecord,
    pub partitions_used: u64,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order_bound: Option<Vec<String>>,
}

/// `Σ value_piece · length_piece`.
pub fn integrate_step<S: Scalar>(f: &LatticeFunction<S>) -> Result<IntegralResult<S>> {
    match f.form() {
        Form::Step { .. } | Form::EscapingDimension { .. } => {
            Ok(IntegralResult::exact(f.integral_between(&S::zero(), &S::one())?))
        }
        _ => Err(Error::UnsupportedForm(format!("integrate_step needs a step function, got {}", f.kind_name()))),
    }
}

/// Lower and upper step brackets over `n` equal pieces of `[a,b]`.
pub(crate) fn bracket_on<S: Scalar>(
    f: &LatticeFunction<S>,
    a: &S,
    b: &S,
    n: u64,
) -> Result<(LatticeVector<S>, LatticeVector<S>)> {
    let len = b.clone() - a.clone();
    let nn = S::from_u64(n);
    let mut prev = f.evaluate(a)?;
    let mut lower = LatticeVector::zeros(f.dim());
    let mut upper = LatticeVector::zeros(f.dim());
    for i in 1..=n {
        let t = a.clone() + len.clone() * S::from_u64(i) / nn.clone();
        let cur = f.evaluate(&t)?;
        if !prev.le_tol(&cur)? {
            let s = a.clone() + len.clone() * S::from_u64(i - 1) / nn.clone();
            return Err(Error::MonotonicityViolated { lo: s.to_canonical(), hi: t.to_canonical() });
        }
        lower.add_assign(&prev)?;
        upper.add_assign(&cur)?;
        prev = cur;
    }
    let h = len / nn;
    Ok((lower.scale(&h), upper.scale(&h)))
}

/// Brackets a nondecreasing `f` between the left and right step functions on
/// `n` equal pieces; the value is the bracket midpoint.
pub fn integrate_monotone<S: Scalar>(f: &LatticeFunction<S>, n: u64) -> Result<IntegralResult<S>> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    check_monotone(f, 16, 256, n)?;
    let (lower, upper) = bracket_on(f, &S::zero(), &S::one(), n)?;
    let value = lower.add(&upper)?.scale(&S::from_ratio(1, 2));
    Ok(IntegralResult {
        value,
        certificate: Certificate::Bracket { lower, upper },
        partitions_used: 2,
        backend: S::BACKEND,
        order_bound: None,
    })
}

fn delta<S: Scalar>(f: &LatticeFunction<S>) -> Result<LatticeVector<S>> {
    f.evaluate(&S::one())?.sub(&f.evaluate(&S::zero())?)
}

/// Smallest `m` with `delta / m <= b` componentwise.
pub(crate) fn pieces_for<S: Scalar>(delta: &LatticeVector<S>, b: &LatticeVector<S>) -> Result<u64> {
    let mut m = 1u64;
    for (d, bc) in delta.entries().iter().zip(b.entries()) {
        if d.is_zero() {
            continue;
        }
        if bc.is_zero() {
            return Err(Error::UnsupportedClass("zero regulator component with nonzero variation".into()));
        }
        let need = (d.clone() / bc.clone())
            .ceil_u64()
            .filter(|k| *k <= MAX_BRACKET_PIECES)
            .ok_or_else(|| Error::UnsupportedClass("bracket resolution exceeds the supported range".into()))?;
        m = m.max(need);
    }
    Ok(m)
}

/// Order-type integral with a certified bound tied to `oseq` at index `n`.
pub fn integrate_order<S: Scalar>(f: &LatticeFunction<S>, oseq: &OSequence<S>, n: u64) -> Result<IntegralResult<S>> {
    Error::check_dim(f.dim(), oseq.dim())?;
    let b = oseq.eval(n)?;
    match f.form() {
        Form::Step { .. } | Form::EscapingDimension { .. } => integrate_step(f),
        Form::PiecewisePolynomial { .. } => Ok(IntegralResult::exact(f.integral_between(&S::zero(), &S::one())?)),
        Form::Smooth { components } if components.iter().flatten().all(Term::is_polynomial) => {
            Ok(IntegralResult::exact(f.integral_between(&S::zero(), &S::one())?))
        }
        Form::PiecewiseMonotone(_) => {
            let m = pieces_for(&delta(f)?, &b)?;
            let mut r = integrate_monotone(f, m)?;
            r.order_bound = Some(b);
            Ok(r)
        }
        Form::AeModified { base, exceptions } => {
            let mut r = integrate_order(base, oseq, n)?;
            let extra = if exceptions.is_empty() {
                LatticeVector::zeros(f.dim())
            } else {
                f.majorant()?.scale(&(S::from_i64(2) / S::from_u64(n)))
            };
            let base_bound = match &r.certificate {
                Certificate::Exact => LatticeVector::zeros(f.dim()),
                _ => b,
            };
            r.order_bound = Some(base_bound.add(&extra)?);
            Ok(r)
        }
        _ => Err(Error::UnsupportedClass(format!("no constructive gage schedule for {} integrands", f.kind_name()))),
    }
}

#[cfg(test)]
mod tests;
