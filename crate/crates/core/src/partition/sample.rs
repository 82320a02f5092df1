//! Seeded random γ-fine partitions for fuzzing theorem checks.
//!
//! All generated endpoints lie on a dyadic grid much finer than the gage's
//! minimum, or on caller-supplied hint points (breakpoints, exceptional
//! points), so exact-rational denominators stay bounded.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::{item_is_fine, Gage, Interval, PartitionKind, TaggedItem, TaggedPartition};
use crate::scalar::{dyadic, smax, smin, Scalar};

const UNIT_STEPS: i64 = 1 << 16;

pub struct PartitionSampler<'g, S> {
    gage: &'g Gage<S>,
    hints: Vec<S>,
    grid: S,
    reach: S,
}

impl<'g, S: Scalar> PartitionSampler<'g, S> {
    /// `hints` are points where tags and cuts are deliberately placed.
    pub fn new(gage: &'g Gage<S>, hints: &[S]) -> Self {
        let min = gage.min_value();
        let mut k = 8u32;
        while dyadic::<S>(k) * S::from_i64(256) > min {
            k += 1;
        }
        let mut hints: Vec<S> = hints.iter().filter(|h| **h >= S::zero() && **h <= S::one()).cloned().collect();
        hints.extend(gage.overrides().iter().map(|(p, _)| p.clone()));
        hints.sort_by(|a, b| a.partial_cmp(b).expect("ordered"));
        hints.dedup();
        let reach = gage.max_value();
        Self { gage, hints, grid: dyadic(k), reach }
    }

    pub fn gage(&self) -> &Gage<S> {
        self.gage
    }

    fn unit(&self, rng: &mut ChaCha8Rng) -> S {
        S::from_ratio(rng.random_range(0..=UNIT_STEPS), UNIT_STEPS)
    }

    /// Largest grid point `<= x`.
    fn snap_down(&self, x: &S) -> S {
        (x.clone() / self.grid.clone()).floor() * self.grid.clone()
    }

    fn hints_in<'a>(&'a self, lo: &'a S, hi: &'a S) -> impl Iterator<Item = &'a S> + 'a {
        let start = self.hints.partition_point(|h| h < lo);
        self.hints[start..].iter().take_while(move |h| *h <= hi)
    }

    /// A random γ-fine partition of [0,1] of the requested kind.
    pub fn sample(&self, kind: PartitionKind, rng: &mut ChaCha8Rng) -> TaggedPartition<S> {
        let pi = self.henstock(rng);
        match kind {
            PartitionKind::Henstock => pi,
            PartitionKind::McShane => self.retag(&pi, PartitionKind::McShane, rng),
        }
    }

    pub fn henstock(&self, rng: &mut ChaCha8Rng) -> TaggedPartition<S> {
        let items = self.walk(&Interval::unit(), rng);
        TaggedPartition::from_items_unchecked(items, PartitionKind::Henstock)
    }

    /// A random γ-fine Henstock partition of the interval `e`.
    pub fn subpartition(&self, e: &Interval<S>, rng: &mut ChaCha8Rng) -> Vec<TaggedItem<S>> {
        self.walk(e, rng)
    }

    fn walk(&self, e: &Interval<S>, rng: &mut ChaCha8Rng) -> Vec<TaggedItem<S>> {
        let hi = e.b().clone();
        let closed = e.closed_right();
        let mut a = e.a().clone();
        let mut items = Vec::new();
        while a < hi {
            let t = self.pick_tag(&a, &hi, rng);
            let b = self.pick_right(&a, &t, &hi, closed, rng);
            let piece = Interval { a: a.clone(), b: b.clone() };
            debug_assert!(item_is_fine(self.gage, &piece, &t), "sampler produced a coarse pair");
            items.push(TaggedItem::new(piece, t));
            a = b;
        }
        items
    }

    fn pick_tag(&self, a: &S, hi: &S, rng: &mut ChaCha8Rng) -> S {
        let valid = |t: &S| t.clone() - a.clone() < self.gage.eval(t);
        let roll: u32 = rng.random_range(0..10);
        if roll < 3 {
            return a.clone();
        }
        let upper = smin(hi, &(a.clone() + self.reach.clone()));
        if roll < 6 {
            let hs: Vec<&S> = self.hints_in(a, &upper).filter(|h| valid(h)).collect();
            if !hs.is_empty() {
                return hs[rng.random_range(0..hs.len())].clone();
            }
        }
        for _ in 0..3 {
            let span = smin(&(hi.clone() - a.clone()), &(self.gage.eval(a) * S::from_i64(2)));
            let t = smin(&(a.clone() + self.snap_down(&(span * self.unit(rng)))), hi);
            if valid(&t) {
                return t;
            }
        }
        a.clone()
    }

    fn pick_right(&self, a: &S, t: &S, hi: &S, closed: bool, rng: &mut ChaCha8Rng) -> S {
        let g = self.gage.eval(t);
        let limit = t.clone() + g.clone();
        // Largest admissible right end.
        let (b_max, hi_ok) = if limit > *hi {
            (hi.clone(), true)
        } else if limit == *hi && closed {
            (self.snap_down(&(hi.clone() - self.grid.clone())), false)
        } else {
            (limit.clone(), limit == *hi)
        };
        // Guard against rounding in floating-point backends.
        let fits = |b: &S| item_is_fine(self.gage, &Interval { a: a.clone(), b: b.clone() }, t);
        let b_max = if b_max > *t && !fits(&b_max) {
            let down = self.snap_down(&b_max);
            if down > *t && fits(&down) {
                down
            } else {
                down - self.grid.clone()
            }
        } else {
            b_max
        };
        let floor = smax(a, t);
        let roll: u32 = rng.random_range(0..8);
        let candidate = if roll < 2 {
            b_max.clone()
        } else if roll < 4 {
            let after = self
                .hints_in(t, &b_max)
                .filter(|h| *h > a && *h > t)
                .cloned()
                .collect::<Vec<_>>();
            if after.is_empty() {
                b_max.clone()
            } else {
                after[rng.random_range(0..after.len())].clone()
            }
        } else {
            let half = g.clone() / S::from_i64(2);
            let b = self.snap_down(&(t.clone() + half.clone() + half * self.unit(rng)));
            smin(&b, &b_max)
        };
        let b = if candidate <= floor || candidate > b_max { b_max } else { candidate };
        if b >= *hi {
            debug_assert!(hi_ok || b == *hi);
            return hi.clone();
        }
        b
    }

    /// Random new tags keeping the intervals and fineness.
    pub fn retag(&self, pi: &TaggedPartition<S>, kind: PartitionKind, rng: &mut ChaCha8Rng) -> TaggedPartition<S> {
        let items = pi
            .items()
            .iter()
            .map(|it| {
                let tag = self.retag_one(&it.interval, &it.tag, kind, rng);
                TaggedItem::new(it.interval.clone(), tag)
            })
            .collect();
        TaggedPartition::from_items_unchecked(items, kind)
    }

    fn retag_one(&self, e: &Interval<S>, current: &S, kind: PartitionKind, rng: &mut ChaCha8Rng) -> S {
        let (lo, hi) = match kind {
            PartitionKind::Henstock => (e.a().clone(), e.b().clone()),
            PartitionKind::McShane => (
                smax(&S::zero(), &(e.b().clone() - self.reach.clone())),
                smin(&S::one(), &(e.a().clone() + self.reach.clone())),
            ),
        };
        let ok = |t: &S| *t >= lo && *t <= hi && item_is_fine(self.gage, e, t);
        let mut pool: Vec<S> = vec![e.a().clone(), e.b().clone()];
        pool.extend(self.hints_in(&lo, &hi).cloned());
        for _ in 0..4 {
            let t = lo.clone() + self.snap_down(&((hi.clone() - lo.clone()) * self.unit(rng)));
            pool.push(t);
        }
        pool.retain(|t| ok(t));
        if pool.is_empty() {
            current.clone()
        } else {
            pool.swap_remove(rng.random_range(0..pool.len()))
        }
    }
}
