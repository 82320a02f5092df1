//! Lattice-valued integrands on [0,1] with closed-form oracles.

mod doc;
mod modulus;
mod oracle;
mod poly;

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub use doc::{ExceptionDoc, FunctionDoc, TermDoc};
pub use poly::Polynomial;

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::partition::Integrand;
use crate::scalar::{dyadic, Scalar};

/// One summand of a smooth component.
#[derive(Clone, Debug, PartialEq)]
pub enum Term<S> {
    Poly(Polynomial<S>),
    /// `coef · exp(rate · t)`
    Exp { coef: S, rate: S },
    /// `coef · sin(freq · t)`, or `coef · sin(freq · π · t)` when `pi` is set.
    Sin { coef: S, freq: S, pi: bool },
    /// `coef · cos(freq · t)`, or with a factor `π` as for `Sin`.
    Cos { coef: S, freq: S, pi: bool },
}

impl<S: Scalar> Term<S> {
    pub(crate) fn angle(freq: &S, pi: bool, t: &S) -> Result<S> {
        let x = freq.clone() * t.clone();
        if !pi {
            return Ok(x);
        }
        if x.is_zero() {
            return Ok(x);
        }
        S::pi().map(|p| p * x).ok_or_else(|| Error::Inexact("π is not representable on this backend".into()))
    }

    pub fn eval(&self, t: &S) -> Result<S> {
        let inexact = || Error::Inexact(format!("transcendental value at t={} needs the float backend", t.to_canonical()));
        match self {
            Term::Poly(p) => Ok(p.eval(t)),
            Term::Exp { coef, rate } => {
                Ok(coef.clone() * (rate.clone() * t.clone()).exp().ok_or_else(inexact)?)
            }
            Term::Sin { coef, freq, pi } => {
                Ok(coef.clone() * Self::angle(freq, *pi, t)?.sin().ok_or_else(inexact)?)
            }
            Term::Cos { coef, freq, pi } => {
                Ok(coef.clone() * Self::angle(freq, *pi, t)?.cos().ok_or_else(inexact)?)
            }
        }
    }

    pub fn is_polynomial(&self) -> bool {
        matches!(self, Term::Poly(_))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EscapeScaling {
    /// Block `k` carries `e_k`.
    Unit,
    /// Block `k` carries `2^k · e_k`.
    Dyadic,
}

pub type ClosureFn<S> = Arc<dyn Fn(&S) -> Result<LatticeVector<S>> + Send + Sync>;

#[derive(Clone)]
pub enum Form<S> {
    /// Piece `j` is `[x_{j-1}, x_j)` with `x_0 = 0`; the last piece is closed at 1.
    Step { breakpoints: Vec<S>, values: Vec<LatticeVector<S>> },
    /// `pieces[j][c]` is component `c` on piece `j`, pieces as for `Step`.
    PiecewisePolynomial { breakpoints: Vec<S>, pieces: Vec<Vec<Polynomial<S>>> },
    /// Each component is a sum of catalog terms.
    Smooth { components: Vec<Vec<Term<S>>> },
    /// A componentwise nondecreasing function.
    PiecewiseMonotone(Box<LatticeFunction<S>>),
    /// `base` with finitely many replaced values.
    AeModified { base: Box<LatticeFunction<S>>, exceptions: Vec<(S, LatticeVector<S>)> },
    /// Block `k = 1..=dim` on `[1 - 2^{1-k}, 1 - 2^{-k})`, zero afterwards.
    EscapingDimension { scaling: EscapeScaling },
    /// User-supplied evaluation without an oracle.
    Closure { label: String, f: ClosureFn<S> },
}

impl<S: fmt::Debug> fmt::Debug for Form<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Form::Step { breakpoints, values } => {
                f.debug_struct("Step").field("breakpoints", breakpoints).field("values", values).finish()
            }
            Form::PiecewisePolynomial { breakpoints, pieces } => f
                .debug_struct("PiecewisePolynomial")
                .field("breakpoints", breakpoints)
                .field("pieces", pieces)
                .finish(),
            Form::Smooth { components } => f.debug_struct("Smooth").field("components", components).finish(),
            Form::PiecewiseMonotone(inner) => f.debug_tuple("PiecewiseMonotone").field(inner).finish(),
            Form::AeModified { base, exceptions } => {
                f.debug_struct("AeModified").field("base", base).field("exceptions", exceptions).finish()
            }
            Form::EscapingDimension { scaling } => f.debug_struct("EscapingDimension").field("scaling", scaling).finish(),
            Form::Closure { label, .. } => f.debug_struct("Closure").field("label", label).finish_non_exhaustive(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct LatticeFunction<S> {
    dim: usize,
    form: Form<S>,
}

fn check_breakpoints<S: Scalar>(bps: &[S]) -> Result<()> {
    for w in bps.windows(2) {
        if w[0] >= w[1] {
            return Err(Error::InvalidArgument("breakpoints must be strictly increasing".into()));
        }
    }
    if bps.first().is_some_and(|x| *x <= S::zero()) || bps.last().is_some_and(|x| *x >= S::one()) {
        return Err(Error::InvalidArgument("breakpoints must lie in (0,1)".into()));
    }
    Ok(())
}

fn piece_of<S: Scalar>(bps: &[S], t: &S) -> usize {
    bps.partition_point(|x| x <= t)
}

fn check_domain<S: Scalar>(t: &S) -> Result<()> {
    if *t < S::zero() || *t > S::one() {
        return Err(Error::OutOfDomain(format!("t = {} is outside [0,1]", t.to_canonical())));
    }
    Ok(())
}

impl<S: Scalar> LatticeFunction<S> {
    pub fn step(breakpoints: Vec<S>, values: Vec<LatticeVector<S>>) -> Result<Self> {
        check_breakpoints(&breakpoints)?;
        if values.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "step needs {} values, got {}",
                breakpoints.len() + 1,
                values.len()
            )));
        }
        let dim = values[0].dim();
        for v in &values {
            Error::check_dim(dim, v.dim())?;
        }
        Ok(Self { dim, form: Form::Step { breakpoints, values } })
    }

    pub fn piecewise_polynomial(breakpoints: Vec<S>, pieces: Vec<Vec<Polynomial<S>>>) -> Result<Self> {
        check_breakpoints(&breakpoints)?;
        if pieces.len() != breakpoints.len() + 1 {
            return Err(Error::InvalidArgument(format!(
                "piecewise polynomial needs {} pieces, got {}",
                breakpoints.len() + 1,
                pieces.len()
            )));
        }
        let dim = pieces[0].len();
        if dim == 0 {
            return Err(Error::InvalidArgument("at least one component is required".into()));
        }
        for p in &pieces {
            Error::check_dim(dim, p.len())?;
        }
        Ok(Self { dim, form: Form::PiecewisePolynomial { breakpoints, pieces } })
    }

    /// A single polynomial per component.
    pub fn polynomial(components: Vec<Polynomial<S>>) -> Result<Self> {
        Self::piecewise_polynomial(Vec::new(), vec![components])
    }

    pub fn smooth(components: Vec<Vec<Term<S>>>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidArgument("at least one component is required".into()));
        }
        Ok(Self { dim: components.len(), form: Form::Smooth { components } })
    }

    /// Wraps `inner`, spot-checking monotonicity on a grid and seeded pairs.
    pub fn monotone(inner: LatticeFunction<S>) -> Result<Self> {
        check_monotone(&inner, 64, 64, 0)?;
        Ok(Self { dim: inner.dim, form: Form::PiecewiseMonotone(Box::new(inner)) })
    }

    pub fn ae_modified(base: LatticeFunction<S>, mut exceptions: Vec<(S, LatticeVector<S>)>) -> Result<Self> {
        for (p, v) in &exceptions {
            check_domain(p)?;
            Error::check_dim(base.dim, v.dim())?;
        }
        exceptions.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("ordered points"));
        if exceptions.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::InvalidArgument("exceptional points must be distinct".into()));
        }
        Ok(Self { dim: base.dim, form: Form::AeModified { base: Box::new(base), exceptions } })
    }

    pub fn escaping(dim: usize, scaling: EscapeScaling) -> Result<Self> {
        if dim == 0 || dim > 60 {
            return Err(Error::InvalidArgument("escaping dimension must be in 1..=60".into()));
        }
        Ok(Self { dim, form: Form::EscapingDimension { scaling } })
    }

    pub fn closure(dim: usize, label: impl Into<String>, f: ClosureFn<S>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidArgument("at least one component is required".into()));
        }
        Ok(Self { dim, form: Form::Closure { label: label.into(), f } })
    }

    pub fn constant(value: LatticeVector<S>) -> Self {
        Self { dim: value.dim(), form: Form::Step { breakpoints: Vec::new(), values: vec![value] } }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn form(&self) -> &Form<S> {
        &self.form
    }

    /// Short name of the outermost form.
    pub fn kind_name(&self) -> &'static str {
        match &self.form {
            Form::Step { .. } => "step",
            Form::PiecewisePolynomial { .. } => "piecewise_polynomial",
            Form::Smooth { .. } => "smooth",
            Form::PiecewiseMonotone(_) => "monotone",
            Form::AeModified { .. } => "ae_modified",
            Form::EscapingDimension { .. } => "escaping_dimension",
            Form::Closure { .. } => "closure",
        }
    }

    pub fn evaluate(&self, t: &S) -> Result<LatticeVector<S>> {
        check_domain(t)?;
        self.eval_unchecked(t)
    }

    fn eval_unchecked(&self, t: &S) -> Result<LatticeVector<S>> {
        match &self.form {
            Form::Step { breakpoints, values } => Ok(values[piece_of(breakpoints, t)].clone()),
            Form::PiecewisePolynomial { breakpoints, pieces } => {
                LatticeVector::new(pieces[piece_of(breakpoints, t)].iter().map(|p| p.eval(t)).collect())
            }
            Form::Smooth { components } => LatticeVector::new(
                components
                    .iter()
                    .map(|terms| terms.iter().try_fold(S::zero(), |acc, term| Ok(acc + term.eval(t)?)))
                    .collect::<Result<Vec<_>>>()?,
            ),
            Form::PiecewiseMonotone(inner) => inner.eval_unchecked(t),
            Form::AeModified { base, exceptions } => {
                match exceptions.binary_search_by(|(p, _)| p.partial_cmp(t).expect("ordered")) {
                    Ok(i) => Ok(exceptions[i].1.clone()),
                    Err(_) => base.eval_unchecked(t),
                }
            }
            Form::EscapingDimension { scaling } => {
                let (bps, values) = escaping_pieces(self.dim, *scaling);
                Ok(values[piece_of(&bps, t)].clone())
            }
            Form::Closure { f, .. } => {
                let v = f(t)?;
                Error::check_dim(self.dim, v.dim())?;
                Ok(v)
            }
        }
    }

    /// The step form of an escaping-dimension function; other forms unchanged.
    pub fn normalized(&self) -> Self {
        match &self.form {
            Form::EscapingDimension { scaling } => {
                let (breakpoints, values) = escaping_pieces(self.dim, *scaling);
                Self { dim: self.dim, form: Form::Step { breakpoints, values } }
            }
            _ => self.clone(),
        }
    }

    /// Points where the function may jump or is modified.
    pub fn special_points(&self) -> Vec<S> {
        let mut out = match &self.form {
            Form::Step { breakpoints, .. } | Form::PiecewisePolynomial { breakpoints, .. } => breakpoints.clone(),
            Form::PiecewiseMonotone(inner) => inner.special_points(),
            Form::AeModified { base, exceptions } => {
                let mut v = base.special_points();
                v.extend(exceptions.iter().map(|(p, _)| p.clone()));
                v
            }
            Form::EscapingDimension { scaling } => escaping_pieces(self.dim, *scaling).0,
            Form::Smooth { .. } | Form::Closure { .. } => Vec::new(),
        };
        out.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
        out.dedup();
        out
    }

    /// True when an exact-integral oracle exists for this function.
    pub fn has_oracle(&self) -> bool {
        match &self.form {
            Form::Step { .. } | Form::PiecewisePolynomial { .. } | Form::EscapingDimension { .. } => true,
            Form::Smooth { components } => {
                !S::is_exact() || components.iter().flatten().all(Term::is_polynomial)
            }
            Form::PiecewiseMonotone(inner) => inner.has_oracle(),
            Form::AeModified { base, .. } => base.has_oracle(),
            Form::Closure { .. } => false,
        }
    }
}

impl<S: Scalar> Integrand<S> for LatticeFunction<S> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, t: &S) -> Result<LatticeVector<S>> {
        self.evaluate(t)
    }
}

pub(crate) fn escaping_pieces<S: Scalar>(dim: usize, scaling: EscapeScaling) -> (Vec<S>, Vec<LatticeVector<S>>) {
    let breakpoints = (1..=dim as u32).map(|k| S::one() - dyadic::<S>(k)).collect();
    let mut values: Vec<LatticeVector<S>> = (0..dim)
        .map(|k| {
            let e = LatticeVector::unit(dim, k);
            match scaling {
                EscapeScaling::Unit => e,
                EscapeScaling::Dyadic => e.scale(&S::from_i64(2).powi(k as u32 + 1)),
            }
        })
        .collect();
    values.push(LatticeVector::zeros(dim));
    (breakpoints, values)
}

/// Checks `f(s) <= f(t)` on a uniform grid of `grid` steps and `pairs` seeded
/// random pairs.
pub fn check_monotone<S: Scalar>(f: &LatticeFunction<S>, grid: u64, pairs: usize, seed: u64) -> Result<()> {
    let violated = |s: &S, t: &S| -> Result<()> {
        let (fs, ft) = (f.evaluate(s)?, f.evaluate(t)?);
        if fs.le_tol(&ft)? {
            Ok(())
        } else {
            Err(Error::MonotonicityViolated { lo: s.to_canonical(), hi: t.to_canonical() })
        }
    };
    let mut pts: Vec<S> = (0..=grid).map(|i| S::from_ratio(i as i64, grid as i64)).collect();
    pts.extend(f.special_points());
    pts.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
    for w in pts.windows(2) {
        violated(&w[0], &w[1])?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..pairs {
        let a = S::from_ratio(rng.random_range(0..=4096), 4096);
        let b = S::from_ratio(rng.random_range(0..=4096), 4096);
        let (s, t) = if a <= b { (a, b) } else { (b, a) };
        violated(&s, &t)?;
    }
    Ok(())
}
