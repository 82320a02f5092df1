//! Tagged partitions of [0,1], gages, fineness and Riemann sums.
//!
//! Intervals are half-open `[a,b)` except the one ending at 1, which is
//! closed. A pair `(E, t)` is γ-fine when `E ⊂ (t − γ(t), t + γ(t))`, which
//! for `E = [a,b)` reads `t − a < γ(t)` and `b − t <= γ(t)` (the open end may
//! touch the ball boundary), and `b − t < γ(t)` when `E` is closed at `b = 1`.

mod cousin;
mod doc;
mod gage;
mod sample;

pub use cousin::{cousin_partition, cousin_with_depth};
pub use doc::{GageDoc, ItemDoc, PartitionDoc};
pub use gage::Gage;
pub use sample::PartitionSampler;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::LatticeVector;
use crate::scalar::Scalar;

/// Anything that can be evaluated pointwise on [0,1].
pub trait Integrand<S: Scalar> {
    fn dim(&self) -> usize;
    fn eval(&self, t: &S) -> Result<LatticeVector<S>>;
}

#[derive(Debug, Clone, PartialEq)]
pub struct Interval<S> {
    a: S,
    b: S,
}

impl<S: Scalar> Interval<S> {
    pub fn new(a: S, b: S) -> Result<Self> {
        if !(a >= S::zero() && a < b && b <= S::one()) {
            return Err(Error::InvalidArgument(format!(
                "interval [{}, {}] must satisfy 0 <= a < b <= 1",
                a.to_canonical(),
                b.to_canonical()
            )));
        }
        Ok(Self { a, b })
    }

    pub fn unit() -> Self {
        Self { a: S::zero(), b: S::one() }
    }

    pub fn a(&self) -> &S {
        &self.a
    }

    pub fn b(&self) -> &S {
        &self.b
    }

    pub fn length(&self) -> S {
        self.b.clone() - self.a.clone()
    }

    pub fn midpoint(&self) -> S {
        (self.a.clone() + self.b.clone()) / S::from_i64(2)
    }

    pub fn closed_right(&self) -> bool {
        self.b == S::one()
    }

    /// Membership in the closure `[a,b]`.
    pub fn closure_contains(&self, t: &S) -> bool {
        self.a <= *t && *t <= self.b
    }

    pub fn contains(&self, t: &S) -> bool {
        self.a <= *t && (*t < self.b || (self.closed_right() && *t == self.b))
    }

    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let a = crate::scalar::smax(&self.a, &other.a);
        let b = crate::scalar::smin(&self.b, &other.b);
        (a < b).then_some(Self { a, b })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionKind {
    /// Every tag lies in the closure of its interval.
    Henstock,
    /// Tags anywhere in [0,1] (free partitions).
    McShane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggedItem<S> {
    pub interval: Interval<S>,
    pub tag: S,
}

impl<S: Scalar> TaggedItem<S> {
    pub fn new(interval: Interval<S>, tag: S) -> Self {
        Self { interval, tag }
    }

    pub fn is_fine(&self, gage: &Gage<S>) -> bool {
        item_is_fine(gage, &self.interval, &self.tag)
    }
}

/// Fineness of a single pair, with the endpoint convention described above.
pub fn item_is_fine<S: Scalar>(gage: &Gage<S>, e: &Interval<S>, t: &S) -> bool {
    let g = gage.eval(t);
    let left_ok = t.clone() - e.a.clone() < g;
    let reach = e.b.clone() - t.clone();
    let right_ok = if e.closed_right() { reach < g } else { reach <= g };
    left_ok && right_ok
}

#[derive(Debug, Clone, PartialEq)]
pub struct TaggedPartition<S> {
    items: Vec<TaggedItem<S>>,
    kind: PartitionKind,
}

impl<S: Scalar> TaggedPartition<S> {
    /// Items must be listed left to right and tile [0,1].
    pub fn new(items: Vec<TaggedItem<S>>, kind: PartitionKind) -> Result<Self> {
        Self::validate_tiling(&items, &S::zero(), &S::one())?;
        for it in &items {
            if it.tag < S::zero() || it.tag > S::one() {
                return Err(Error::OutOfDomain(it.tag.to_canonical()));
            }
            if kind == PartitionKind::Henstock && !it.interval.closure_contains(&it.tag) {
                return Err(Error::InvalidArgument(format!(
                    "Henstock tag {} outside its interval",
                    it.tag.to_canonical()
                )));
            }
        }
        Ok(Self { items, kind })
    }

    pub(crate) fn validate_tiling(items: &[TaggedItem<S>], lo: &S, hi: &S) -> Result<()> {
        let first = items.first().ok_or_else(|| Error::InvalidArgument("empty partition".into()))?;
        if first.interval.a != *lo {
            return Err(Error::InvalidArgument("partition does not start at the left end".into()));
        }
        for w in items.windows(2) {
            if w[0].interval.b != w[1].interval.a {
                return Err(Error::InvalidArgument(format!(
                    "gap or overlap at {}",
                    w[0].interval.b.to_canonical()
                )));
            }
        }
        if items.last().expect("non-empty").interval.b != *hi {
            return Err(Error::InvalidArgument("partition does not reach the right end".into()));
        }
        Ok(())
    }

    /// Builds from interior breakpoints and one tag per piece.
    pub fn from_breakpoints(breakpoints: &[S], tags: Vec<S>, kind: PartitionKind) -> Result<Self> {
        let ends: Vec<S> = std::iter::once(S::zero())
            .chain(breakpoints.iter().cloned())
            .chain(std::iter::once(S::one()))
            .collect();
        if tags.len() + 1 != ends.len() {
            return Err(Error::InvalidArgument("one tag per piece required".into()));
        }
        let items = ends
            .windows(2)
            .zip(tags)
            .map(|(w, t)| Ok(TaggedItem::new(Interval::new(w[0].clone(), w[1].clone())?, t)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(items, kind)
    }

    /// `n` equal pieces with tags chosen by `policy`.
    pub fn uniform(n: u64, policy: &TagPolicy, kind: PartitionKind) -> Result<Self> {
        if n < 1 {
            return Err(Error::InvalidArgument("uniform partition needs n >= 1".into()));
        }
        let mut rng = policy.rng();
        let step = S::one() / S::from_u64(n);
        let items = (0..n)
            .map(|i| {
                let a = S::from_u64(i) * step.clone();
                let b = if i + 1 == n { S::one() } else { S::from_u64(i + 1) * step.clone() };
                let e = Interval { a, b };
                let tag = policy.pick(&e, None, &mut rng);
                TaggedItem::new(e, tag)
            })
            .collect();
        Ok(Self { items, kind })
    }

    pub fn items(&self) -> &[TaggedItem<S>] {
        &self.items
    }

    pub fn kind(&self) -> PartitionKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    /// Interior breakpoints.
    pub fn breakpoints(&self) -> Vec<S> {
        self.items.iter().skip(1).map(|it| it.interval.a.clone()).collect()
    }

    pub fn total_length(&self) -> S {
        self.items.iter().fold(S::zero(), |acc, it| acc + it.interval.length())
    }

    pub fn with_tags(&self, tags: Vec<S>, kind: PartitionKind) -> Result<Self> {
        if tags.len() != self.items.len() {
            return Err(Error::InvalidArgument("one tag per interval required".into()));
        }
        let items = self
            .items
            .iter()
            .zip(tags)
            .map(|(it, t)| TaggedItem::new(it.interval.clone(), t))
            .collect();
        Self::new(items, kind)
    }

    pub(crate) fn from_items_unchecked(items: Vec<TaggedItem<S>>, kind: PartitionKind) -> Self {
        debug_assert!(Self::new(items.clone(), kind).is_ok());
        Self { items, kind }
    }
}

/// True iff every pair of `pi` is γ-fine.
pub fn is_fine<S: Scalar>(gage: &Gage<S>, pi: &TaggedPartition<S>) -> bool {
    pi.items.iter().all(|it| it.is_fine(gage))
}

/// How tags are assigned to newly created intervals.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TagPolicy {
    Midpoint,
    Left,
    Right,
    /// Keep the parent's tag where it remains valid, midpoint elsewhere.
    Inherited,
    /// Uniform on a dyadic grid inside the interval, reproducible from the seed.
    Random { seed: u64 },
}

impl TagPolicy {
    fn rng(&self) -> ChaCha8Rng {
        match self {
            TagPolicy::Random { seed } => ChaCha8Rng::seed_from_u64(*seed),
            _ => ChaCha8Rng::seed_from_u64(0),
        }
    }

    fn pick<S: Scalar>(&self, e: &Interval<S>, parent: Option<(&S, PartitionKind)>, rng: &mut ChaCha8Rng) -> S {
        match self {
            TagPolicy::Midpoint => e.midpoint(),
            TagPolicy::Left => e.a.clone(),
            TagPolicy::Right => e.b.clone(),
            TagPolicy::Inherited => match parent {
                Some((t, PartitionKind::McShane)) => t.clone(),
                Some((t, PartitionKind::Henstock)) if e.closure_contains(t) => t.clone(),
                _ => e.midpoint(),
            },
            TagPolicy::Random { .. } => {
                let k: i64 = rng.random_range(0..=1024);
                e.a.clone() + e.length() * S::from_ratio(k, 1024)
            }
        }
    }
}

/// Splits every interval into `k` equal parts.
pub fn refine<S: Scalar>(pi: &TaggedPartition<S>, k: u64, policy: &TagPolicy) -> Result<TaggedPartition<S>> {
    if k < 1 {
        return Err(Error::InvalidArgument("refinement factor must be >= 1".into()));
    }
    let mut rng = policy.rng();
    let mut items = Vec::with_capacity(pi.items.len() * k as usize);
    for it in &pi.items {
        let step = it.interval.length() / S::from_u64(k);
        for j in 0..k {
            let a = it.interval.a.clone() + step.clone() * S::from_u64(j);
            let b = if j + 1 == k {
                it.interval.b.clone()
            } else {
                it.interval.a.clone() + step.clone() * S::from_u64(j + 1)
            };
            let e = Interval { a, b };
            let tag = policy.pick(&e, Some((&it.tag, pi.kind)), &mut rng);
            items.push(TaggedItem::new(e, tag));
        }
    }
    TaggedPartition::new(items, pi.kind)
}

/// All nonempty intersections `E_i ∩ F_j`; inherited tags come from `p1`.
pub fn common_refinement<S: Scalar>(
    p1: &TaggedPartition<S>,
    p2: &TaggedPartition<S>,
    policy: &TagPolicy,
) -> Result<TaggedPartition<S>> {
    let mut rng = policy.rng();
    let mut items = Vec::with_capacity(p1.len() + p2.len());
    let (mut i, mut j) = (0, 0);
    while i < p1.items.len() && j < p2.items.len() {
        let (e, f) = (&p1.items[i], &p2.items[j]);
        if let Some(cut) = e.interval.intersect(&f.interval) {
            let tag = policy.pick(&cut, Some((&e.tag, p1.kind)), &mut rng);
            items.push(TaggedItem::new(cut, tag));
        }
        if e.interval.b <= f.interval.b {
            i += 1;
        }
        if f.interval.b <= e.interval.b {
            j += 1;
        }
    }
    let kind = if p1.kind == PartitionKind::McShane || p2.kind == PartitionKind::McShane {
        PartitionKind::McShane
    } else {
        PartitionKind::Henstock
    };
    TaggedPartition::new(items, kind)
}

/// `σ(f, Π) = Σ f(t_i) λ(E_i)`.
pub fn riemann_sum<S: Scalar, F: Integrand<S> + ?Sized>(f: &F, pi: &TaggedPartition<S>) -> Result<LatticeVector<S>> {
    riemann_sum_items(f, pi.items())
}

pub(crate) fn riemann_sum_items<S: Scalar, F: Integrand<S> + ?Sized>(
    f: &F,
    items: &[TaggedItem<S>],
) -> Result<LatticeVector<S>> {
    let mut acc = LatticeVector::zeros(f.dim());
    for it in items {
        acc.add_scaled(&f.eval(&it.tag)?, &it.interval.length())?;
    }
    Ok(acc)
}
