//! Oscillation `Ob_n(f, E)`: the supremum of `|σ(f,Π') − σ(f,Π'')|` over
//! γ-fine Henstock partitions `Π', Π''` of `E`.

use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::lattice::LatticeVector;
use crate::partition::{riemann_sum_items, Gage, Interval, Integrand, PartitionSampler};
use crate::scalar::{smax, smin, Scalar};

/// `sup_{τ ∈ [p,b]} (p − τ + γ(τ))`: how far left of `p` an interval tagged
/// at or right of `p` may start.
fn reach_left<S: Scalar>(g: &Gage<S>, p: &S, b: &S) -> S {
    if p == b {
        return g.eval(p);
    }
    let mut best = g.piece_value(p).clone();
    for (j, s) in g.breakpoints().iter().enumerate() {
        if s > p && s <= b {
            let v = if s == b { g.eval(s) } else { g.values()[j + 1].clone() };
            best = smax(&best, &(p.clone() - s.clone() + v));
        }
    }
    best
}

/// `sup_{τ ∈ [a,p)} (τ + γ(τ) − p)`: how far right of `p` an interval tagged
/// left of `p` may end.
fn reach_right<S: Scalar>(g: &Gage<S>, a: &S, p: &S) -> S {
    let mut best = S::zero();
    for (j, v) in g.values().iter().enumerate() {
        let (s, e) = (g.piece_start(j), g.piece_end(j));
        if s < *p && e > *a {
            best = smax(&best, &(smin(&e, p) + v.clone() - p.clone()));
        }
    }
    best
}

/// Closed-form `Ob_n(f, E)` for a step function with jumps `|J_p|`.
///
/// Returns the value and whether it is exact; with two or more jumps in the
/// closure of `E` the sum over jumps is an upper bound.
pub fn step_ob<S: Scalar>(
    g: &Gage<S>,
    jumps: &[(S, LatticeVector<S>)],
    e: &Interval<S>,
    dim: usize,
) -> Result<(LatticeVector<S>, bool)> {
    let (a, b) = (e.a(), e.b());
    let mut ob = LatticeVector::zeros(dim);
    let mut hits = 0;
    for (p, j) in jumps {
        if p <= a || p > b {
            continue;
        }
        hits += 1;
        let plus = smin(&(p.clone() - a.clone()), &smax(&S::zero(), &reach_left(g, p, b)));
        let minus = if p < b { smin(&(b.clone() - p.clone()), &reach_right(g, a, p)) } else { S::zero() };
        ob.add_scaled(j, &(plus + minus))?;
    }
    Ok((ob, hits <= 1))
}

/// Lower bound for `Ob_n(f, E)` from `samples` random fine subpartitions.
pub fn sampled_ob<S: Scalar, F: Integrand<S> + ?Sized>(
    f: &F,
    sampler: &PartitionSampler<'_, S>,
    e: &Interval<S>,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> Result<LatticeVector<S>> {
    let first = riemann_sum_items(f, &sampler.subpartition(e, rng))?;
    let (mut lo, mut hi) = (first.clone(), first);
    for _ in 1..samples.max(2) {
        let s = riemann_sum_items(f, &sampler.subpartition(e, rng))?;
        lo = lo.meet(&s)?;
        hi = hi.join(&s)?;
    }
    hi.sub(&lo)
}
