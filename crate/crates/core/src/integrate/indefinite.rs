use std::collections::HashMap;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use super::bracket_on;
use crate::error::{Error, Result};
use crate::function::{Form, LatticeFunction};
use crate::lattice::LatticeVector;
use crate::partition::Interval;
use crate::scalar::{dyadic, Scalar};

/// How an interval integral was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Exact,
    Bracket,
    Cauchy,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryResult<S> {
    pub value: LatticeVector<S>,
    /// Componentwise bound on `|value - μ_f(A)|`.
    pub uncertainty: LatticeVector<S>,
    pub method: Method,
}

/// `A ↦ ∫_A f` on finite unions of intervals.
#[derive(Debug)]
pub struct IndefiniteIntegral<S> {
    f: LatticeFunction<S>,
    bracket_pieces: u64,
    cache: RwLock<HashMap<(String, String), QueryResult<S>>>,
}

impl<S: Scalar> IndefiniteIntegral<S> {
    /// Fails with `UnsupportedClass` when neither an oracle nor a monotone
    /// bracket is available.
    pub fn new(f: LatticeFunction<S>) -> Result<Self> {
        Self::with_bracket_pieces(f, 4096)
    }

    /// `bracket_pieces` is the per-interval resolution for monotone
    /// integrands without an oracle.
    pub fn with_bracket_pieces(f: LatticeFunction<S>, bracket_pieces: u64) -> Result<Self> {
        let supported = f.has_oracle() || matches!(f.form(), Form::PiecewiseMonotone(_));
        if !supported {
            return Err(Error::UnsupportedClass(format!("no interval integrals for {} integrands", f.kind_name())));
        }
        if bracket_pieces == 0 {
            return Err(Error::InvalidArgument("bracket_pieces must be positive".into()));
        }
        Ok(Self { f, bracket_pieces, cache: RwLock::new(HashMap::new()) })
    }

    pub fn integrand(&self) -> &LatticeFunction<S> {
        &self.f
    }

    /// `∫_a^b f`, uncached.
    pub fn on(&self, a: &S, b: &S) -> Result<QueryResult<S>> {
        let dim = self.f.dim();
        if a == b {
            return Ok(QueryResult {
                value: LatticeVector::zeros(dim),
                uncertainty: LatticeVector::zeros(dim),
                method: Method::Exact,
            });
        }
        if self.f.has_oracle() {
            return Ok(QueryResult {
                value: self.f.integral_between(a, b)?,
                uncertainty: LatticeVector::zeros(dim),
                method: Method::Exact,
            });
        }
        let (lo, hi) = bracket_on(&self.f, a, b, self.bracket_pieces)?;
        let half = S::from_ratio(1, 2);
        Ok(QueryResult {
            value: lo.add(&hi)?.scale(&half),
            uncertainty: hi.sub(&lo)?.scale(&half),
            method: Method::Bracket,
        })
    }

    fn cached(&self, e: &Interval<S>) -> Result<QueryResult<S>> {
        let key = (e.a().to_canonical(), e.b().to_canonical());
        if let Some(hit) = self.cache.read().expect("cache lock").get(&key) {
            return Ok(hit.clone());
        }
        let r = self.on(e.a(), e.b())?;
        self.cache.write().expect("cache lock").insert(key, r.clone());
        Ok(r)
    }

    /// `μ_f(A)` for a union of pairwise disjoint intervals.
    pub fn query(&self, set: &[Interval<S>]) -> Result<LatticeVector<S>> {
        Ok(self.query_with_bound(set)?.value)
    }

    pub fn query_with_bound(&self, set: &[Interval<S>]) -> Result<QueryResult<S>> {
        let mut sorted: Vec<&Interval<S>> = set.iter().collect();
        sorted.sort_by(|x, y| x.a().partial_cmp(y.a()).expect("ordered"));
        if sorted.windows(2).any(|w| w[0].b() > w[1].a()) {
            return Err(Error::InvalidArgument("intervals in a union must be disjoint".into()));
        }
        let dim = self.f.dim();
        let mut out = QueryResult {
            value: LatticeVector::zeros(dim),
            uncertainty: LatticeVector::zeros(dim),
            method: Method::Exact,
        };
        for e in sorted {
            let r = self.cached(e)?;
            out.value.add_assign(&r.value)?;
            out.uncertainty.add_assign(&r.uncertainty)?;
            if r.method != Method::Exact {
                out.method = r.method;
            }
        }
        Ok(out)
    }

    pub fn cache_len(&self) -> usize {
        self.cache.read().expect("cache lock").len()
    }
}

const BISECTION_STEPS: u32 = 48;

/// A point in `[lo, hi]` where component `c` of `f` changes sign, found by
/// bisection from endpoint values of opposite strict sign.
fn locate_sign_change<S: Scalar>(f: &LatticeFunction<S>, c: usize, lo: &S, hi: &S, positive_at_lo: bool) -> Result<S> {
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let two = S::from_i64(2);
    for _ in 0..BISECTION_STEPS {
        let m = (a.clone() + b.clone()) / two.clone();
        let v = f.evaluate(&m)?.get(c).clone();
        if v.is_zero() {
            return Ok(m);
        }
        if (v > S::zero()) == positive_at_lo {
            a = m;
        } else {
            b = m;
        }
    }
    Ok((a + b) / two)
}

fn abs_sum<S: Scalar>(mu: &IndefiniteIntegral<S>, knots: &[S]) -> Result<LatticeVector<S>> {
    let mut acc = LatticeVector::zeros(mu.f.dim());
    for w in knots.windows(2) {
        acc.add_assign(&mu.on(&w[0], &w[1])?.value.modulus())?;
    }
    Ok(acc)
}

/// Lower approximation of `|μ_f|(A)`: the largest `Σ_B |μ_f(B)|` over
/// uniform dyadic partitions of `A` up to `2^depth` pieces and the same
/// partitions refined at located sign changes of each component.
pub fn modulus_measure<S: Scalar>(mu: &IndefiniteIntegral<S>, a: &Interval<S>, depth: u32) -> Result<LatticeVector<S>> {
    let f = &mu.f;
    let mut best = LatticeVector::zeros(f.dim());
    for k in 0..=depth {
        let h = a.length() * dyadic::<S>(k);
        let grid: Vec<S> = (0..=(1u64 << k)).map(|i| a.a().clone() + h.clone() * S::from_u64(i)).collect();
        best = best.join(&abs_sum(mu, &grid)?)?;

        let vals = grid.iter().map(|t| f.evaluate(t)).collect::<Result<Vec<_>>>()?;
        let mut knots = grid.clone();
        for c in 0..f.dim() {
            for (i, w) in vals.windows(2).enumerate() {
                let (x, y) = (w[0].get(c), w[1].get(c));
                let zero = S::zero();
                if (*x > zero && *y < zero) || (*x < zero && *y > zero) {
                    knots.push(locate_sign_change(f, c, &grid[i], &grid[i + 1], *x > zero)?);
                }
            }
        }
        if knots.len() > grid.len() {
            knots.sort_by(|x, y| x.partial_cmp(y).expect("ordered"));
            knots.dedup();
            best = best.join(&abs_sum(mu, &knots)?)?;
        }
    }
    Ok(best)
}
