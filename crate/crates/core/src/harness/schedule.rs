//! Explicit gage sequences with certified bounds per function class.
//!
//! Every schedule produces a gage `γ_n` and constant vectors `c` such that
//! the regulating bound at index `n` is `c / n`. Parts combine additively:
//!
//! * jumps `J_p` isolated by ring gages of width `w`,
//! * a Lipschitz constant `L` under a constant gage `δ = 1/(2n)`,
//! * total variation `Δf` of a nondecreasing map under the same `δ`,
//! * finitely many replaced values bounded by `M`, each shrunk to total
//!   width `1/(n·m)` for `m` exceptional points.

use crate::error::{Error, Result};
use crate::function::{Form, LatticeFunction, Polynomial, Term};
use crate::lattice::LatticeVector;
use crate::oseq::OSequence;
use crate::partition::Gage;
use crate::scalar::{smin, Scalar};

/// Which inequality a bound certifies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    /// `Σ_E |f(τ_E)λ(E) − ∫_E f|` over Henstock partitions; bounds `|σ − J|`.
    HenstockDef,
    /// Twice `HenstockDef`: Cauchy pairs, Henstock-lemma sums, tag swaps.
    HenstockCauchy,
    /// As `HenstockDef` for free (McShane) tags.
    FreeDef,
    /// Twice `FreeDef`.
    FreeCauchy,
}

/// How ring widths scale with the number of jumps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Isolation {
    /// Total straddle width `1/n`, shared among all jumps.
    Total,
    /// Width `1/(2n)` around every jump regardless of their number.
    PerPoint,
}

#[derive(Clone, Debug)]
pub struct Schedule<S> {
    dim: usize,
    /// Jump points with `|J_p|`.
    jumps: Vec<(S, LatticeVector<S>)>,
    lipschitz: Option<LatticeVector<S>>,
    variation: Option<LatticeVector<S>>,
    exceptions: Vec<S>,
    majorant: Option<LatticeVector<S>>,
    isolation: Isolation,
}

fn poly_slope_bound<S: Scalar>(p: &Polynomial<S>, hi: &S) -> S {
    p.derivative()
        .coeffs()
        .iter()
        .enumerate()
        .fold(S::zero(), |s, (i, c)| s + c.abs() * hi.powi(i as u32))
}

fn term_slope_bound<S: Scalar>(t: &Term<S>) -> Result<S> {
    let inexact = || Error::Inexact("slope bound needs the float backend".into());
    match t {
        Term::Poly(p) => Ok(poly_slope_bound(p, &S::one())),
        Term::Exp { coef, rate } => {
            let grow = if *rate <= S::zero() { S::one() } else { rate.exp().ok_or_else(inexact)? };
            Ok((coef.clone() * rate.clone()).abs() * grow)
        }
        Term::Sin { coef, freq, pi } | Term::Cos { coef, freq, pi } => {
            Ok(coef.abs() * Term::angle(freq, *pi, &S::one())?.abs())
        }
    }
}

impl<S: Scalar> Schedule<S> {
    pub fn for_function(f: &LatticeFunction<S>) -> Result<Self> {
        let mut s = Self {
            dim: f.dim(),
            jumps: Vec::new(),
            lipschitz: None,
            variation: None,
            exceptions: Vec::new(),
            majorant: None,
            isolation: Isolation::Total,
        };
        match f.form() {
            Form::Step { breakpoints, values } => {
                for (j, p) in breakpoints.iter().enumerate() {
                    s.push_jump(p, values[j + 1].sub(&values[j])?);
                }
            }
            Form::PiecewisePolynomial { breakpoints, pieces } => {
                for (j, p) in breakpoints.iter().enumerate() {
                    let left = LatticeVector::new(pieces[j].iter().map(|q| q.eval(p)).collect())?;
                    let right = LatticeVector::new(pieces[j + 1].iter().map(|q| q.eval(p)).collect())?;
                    s.push_jump(p, right.sub(&left)?);
                }
                let mut l = LatticeVector::zeros(f.dim());
                for (j, comps) in pieces.iter().enumerate() {
                    let hi = if j == breakpoints.len() { S::one() } else { breakpoints[j].clone() };
                    let v = LatticeVector::new(comps.iter().map(|q| poly_slope_bound(q, &hi)).collect())?;
                    l = l.join(&v)?;
                }
                s.lipschitz = Some(l);
            }
            Form::Smooth { components } => {
                let l = components
                    .iter()
                    .map(|terms| terms.iter().try_fold(S::zero(), |acc, t| Ok(acc + term_slope_bound(t)?)))
                    .collect::<Result<Vec<_>>>()?;
                s.lipschitz = Some(LatticeVector::new(l)?);
            }
            Form::PiecewiseMonotone(_) => {
                s.variation = Some(f.evaluate(&S::one())?.sub(&f.evaluate(&S::zero())?)?);
            }
            Form::AeModified { base, exceptions } => {
                let mut b = Self::for_function(base)?;
                if !exceptions.is_empty() {
                    b.exceptions = exceptions.iter().map(|(p, _)| p.clone()).collect();
                    b.majorant = Some(f.majorant()?);
                }
                return Ok(b);
            }
            Form::EscapingDimension { .. } => return Self::for_function(&f.normalized()),
            Form::Closure { label, .. } => {
                return Err(Error::UnsupportedClass(format!("closure `{label}` has no gage schedule")))
            }
        }
        Ok(s)
    }

    fn push_jump(&mut self, p: &S, jump: LatticeVector<S>) {
        if !jump.is_zero() {
            self.jumps.push((p.clone(), jump.modulus()));
        }
    }

    pub fn with_isolation(mut self, isolation: Isolation) -> Self {
        self.isolation = isolation;
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn jumps(&self) -> &[(S, LatticeVector<S>)] {
        &self.jumps
    }

    pub fn exceptions(&self) -> &[S] {
        &self.exceptions
    }

    /// True when only jumps contribute, so `Ob_n` has a closed form.
    pub fn is_pure_step(&self) -> bool {
        self.lipschitz.is_none() && self.variation.is_none() && self.exceptions.is_empty()
    }

    /// Points worth probing as tags and cuts.
    pub fn hints(&self) -> Vec<S> {
        let mut h: Vec<S> = self.jumps.iter().map(|(p, _)| p.clone()).collect();
        h.extend(self.exceptions.iter().cloned());
        h.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
        h.dedup();
        h
    }

    /// `n · w`: ring half-width times `n`.
    fn ring_scale(&self) -> S {
        match self.isolation {
            Isolation::Total => S::one() / S::from_u64(2 * self.jumps.len().max(1) as u64),
            Isolation::PerPoint => S::from_ratio(1, 2),
        }
    }

    pub fn ring_width(&self, n: u64) -> S {
        self.ring_scale() / S::from_u64(n)
    }

    /// The gage `γ_n`.
    pub fn gage(&self, n: u64) -> Result<Gage<S>> {
        if n == 0 {
            return Err(Error::InvalidArgument("schedule index must be at least 1".into()));
        }
        let nn = S::from_u64(n);
        let base = if self.lipschitz.is_some() || self.variation.is_some() {
            S::one() / (S::from_i64(2) * nn.clone())
        } else {
            S::one()
        };
        let mut g = Gage::constant(base)?;
        let w = self.ring_width(n);
        for (p, _) in &self.jumps {
            g = g.pointwise_min(&ring_gage(p, &w)?);
        }
        if !self.exceptions.is_empty() {
            let cap = S::one() / (S::from_i64(2) * nn * S::from_u64(self.exceptions.len() as u64));
            g = g.shrink_at(&self.exceptions, &cap)?;
        }
        Ok(g)
    }

    /// `c` with bound `c / n`.
    pub fn constants(&self, kind: BoundKind) -> Result<LatticeVector<S>> {
        let free = matches!(kind, BoundKind::FreeDef | BoundKind::FreeCauchy);
        let half = S::from_ratio(1, 2);
        let mut c = LatticeVector::zeros(self.dim);
        let ring = self.ring_scale();
        for (_, j) in &self.jumps {
            c.add_scaled(j, &ring)?;
        }
        if free {
            c = c.scale(&S::from_i64(2));
        }
        if let Some(l) = &self.lipschitz {
            // δ·n = 1/2; Henstock tags give Lδ/2, free tags Lδ.
            c.add_scaled(l, &if free { half.clone() } else { S::from_ratio(1, 4) })?;
        }
        if let Some(d) = &self.variation {
            c.add_scaled(d, &if free { S::one() } else { half.clone() })?;
        }
        if let Some(m) = &self.majorant {
            c.add_scaled(m, &S::from_i64(2))?;
        }
        if matches!(kind, BoundKind::HenstockCauchy | BoundKind::FreeCauchy) {
            c = c.scale(&S::from_i64(2));
        }
        Ok(c)
    }

    pub fn bound(&self, kind: BoundKind, n: u64) -> Result<LatticeVector<S>> {
        Ok(self.constants(kind)?.scale(&(S::one() / S::from_u64(n))))
    }

    /// The (o)-sequence `c / n` for `kind`.
    pub fn oseq(&self, kind: BoundKind) -> Result<OSequence<S>> {
        OSequence::harmonic(self.constants(kind)?)
    }
}

/// Gage isolating `p`: value `w` on `[p-w, p+w)` and `2^{j-1} w` on the
/// rings at distance `[2^{j-1} w, 2^j w)`, so no fine interval tagged off
/// `[p-w, p+w)` reaches `p`.
pub fn ring_gage<S: Scalar>(p: &S, w: &S) -> Result<Gage<S>> {
    let (zero, one) = (S::zero(), S::one());
    let mut cuts: Vec<S> = Vec::new();
    let mut r = w.clone();
    loop {
        for x in [p.clone() - r.clone(), p.clone() + r.clone()] {
            if x > zero && x < one {
                cuts.push(x);
            }
        }
        if r >= one {
            break;
        }
        r = r * S::from_i64(2);
    }
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
    cuts.dedup();
    let value_at = |s: &S| -> S {
        let d = if s >= p { s.clone() - p.clone() } else { p.clone() - s.clone() };
        // Ring containing `s`; the left rings are half-open on the right.
        let mut r = w.clone();
        let mut v = w.clone();
        loop {
            let inside = if s >= p { d < r } else { d <= r };
            if inside || v >= one {
                return smin(&v, &one);
            }
            v = r.clone();
            r = r * S::from_i64(2);
        }
    };
    let values = std::iter::once(zero.clone()).chain(cuts.iter().cloned()).map(|s| value_at(&s)).collect();
    Gage::new(cuts, values)
}
