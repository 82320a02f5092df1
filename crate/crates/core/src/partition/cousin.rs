//! Constructive Cousin lemma: every positive gage admits a fine Henstock
//! partition, found here by deterministic bisection.

use rand_chacha::ChaCha8Rng;

use super::{item_is_fine, Gage, Interval, PartitionKind, TagPolicy, TaggedItem, TaggedPartition};
use crate::scalar::Scalar;

/// A γ-fine Henstock partition of [0,1].
pub fn cousin_partition<S: Scalar>(gage: &Gage<S>, policy: &TagPolicy) -> TaggedPartition<S> {
    cousin_with_depth(gage, policy).0
}

/// Same as [`cousin_partition`], also returning the deepest split level used.
pub fn cousin_with_depth<S: Scalar>(gage: &Gage<S>, policy: &TagPolicy) -> (TaggedPartition<S>, u32) {
    let items = cousin_items(gage, policy, Interval::unit());
    let depth = items.iter().map(|(_, d)| *d).max().unwrap_or(0);
    let items = items.into_iter().map(|(it, _)| it).collect();
    (TaggedPartition::from_items_unchecked(items, PartitionKind::Henstock), depth)
}

pub(crate) fn cousin_items<S: Scalar>(
    gage: &Gage<S>,
    policy: &TagPolicy,
    whole: Interval<S>,
) -> Vec<(TaggedItem<S>, u32)> {
    let mut rng = policy.rng();
    let mut out = Vec::new();
    // Stack holds pending intervals; right halves are pushed first so the
    // output comes out ordered left to right.
    let mut stack = vec![(whole, 0u32)];
    while let Some((e, depth)) = stack.pop() {
        if let Some(tag) = candidates(gage, &e, policy, &mut rng)
            .into_iter()
            .find(|t| item_is_fine(gage, &e, t))
        {
            out.push((TaggedItem::new(e, tag), depth));
            continue;
        }
        let cut = split_point(gage, &e);
        let left = Interval { a: e.a.clone(), b: cut.clone() };
        let right = Interval { a: cut, b: e.b.clone() };
        stack.push((right, depth + 1));
        stack.push((left, depth + 1));
    }
    out
}

fn candidates<S: Scalar>(gage: &Gage<S>, e: &Interval<S>, policy: &TagPolicy, rng: &mut ChaCha8Rng) -> Vec<S> {
    let mid = e.midpoint();
    let mut c = Vec::with_capacity(6);
    match policy {
        TagPolicy::Left => c.push(e.a.clone()),
        TagPolicy::Right => c.push(e.b.clone()),
        TagPolicy::Random { .. } => c.push(policy.pick(e, None, rng)),
        TagPolicy::Midpoint | TagPolicy::Inherited => {}
    }
    c.push(mid.clone());
    c.push(e.a.clone());
    c.push(e.b.clone());
    // The piece of largest gage value meeting `e`, entered as close to the
    // midpoint as it allows.
    let (first, last) = (gage.piece_index(&e.a), gage.piece_index(&e.b));
    if let Some(j) = (first..=last.min(gage.values().len() - 1))
        .filter(|&j| gage.piece_start(j) < e.b || j == first)
        .max_by(|&i, &j| gage.values()[i].partial_cmp(&gage.values()[j]).expect("ordered"))
    {
        let s = crate::scalar::smax(&gage.piece_start(j), &e.a);
        let end = gage.piece_end(j);
        if mid >= s && mid < end {
            c.push(mid);
        }
        c.push(s);
    }
    c
}

fn split_point<S: Scalar>(gage: &Gage<S>, e: &Interval<S>) -> S {
    let mid = e.midpoint();
    gage.breakpoints()
        .iter()
        .filter(|x| **x > e.a && **x < e.b)
        .min_by(|x, y| {
            let dx = (x.to_owned().clone() - mid.clone()).abs();
            let dy = (y.to_owned().clone() - mid.clone()).abs();
            dx.partial_cmp(&dy).expect("ordered")
        })
        .cloned()
        .unwrap_or(mid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::is_fine;
    use crate::scalar::Rational;
    use proptest::prelude::*;

    type Q = Rational;

    fn q(n: i64, d: i64) -> Q {
        Q::from_ratio(n, d)
    }

    #[test]
    fn constant_gage() {
        let g = Gage::constant(q(3, 10)).unwrap();
        let p = cousin_partition(&g, &TagPolicy::Midpoint);
        assert!(is_fine(&g, &p));
        assert!(p.items().iter().all(|it| it.interval.length() < q(3, 10) * q(2, 1)));
        assert_eq!(p.total_length(), q(1, 1));
    }

    #[test]
    fn two_level_gage() {
        let g = Gage::new(vec![q(1, 2)], vec![q(1, 2), q(1, 100)]).unwrap();
        let (p, depth) = cousin_with_depth(&g, &TagPolicy::Midpoint);
        assert!(is_fine(&g, &p));
        assert!(depth <= g.cousin_level_bound());
        let left: Vec<_> = p.items().iter().filter(|it| it.interval.b() <= &q(1, 2)).collect();
        let right: Vec<_> = p.items().iter().filter(|it| it.interval.a() >= &q(1, 2)).collect();
        assert!(left.len() <= 2);
        assert!(right.iter().all(|it| it.interval.length() < q(2, 100)));
        assert_eq!(left.len() + right.len(), p.len());
    }

    #[test]
    fn large_gage_gives_single_interval() {
        let g = Gage::constant(q(2, 1)).unwrap();
        let p = cousin_partition(&g, &TagPolicy::Midpoint);
        assert_eq!(p.len(), 1);
        assert_eq!(p.items()[0].tag, q(1, 2));
    }

    #[test]
    fn policies_all_fine() {
        let g = Gage::new(vec![q(1, 3), q(2, 3)], vec![q(1, 7), q(1, 50), q(1, 5)]).unwrap();
        for policy in [TagPolicy::Midpoint, TagPolicy::Left, TagPolicy::Right, TagPolicy::Inherited, TagPolicy::Random { seed: 9 }] {
            let p = cousin_partition(&g, &policy);
            assert!(is_fine(&g, &p), "{policy:?}");
        }
    }

    fn random_gage() -> impl Strategy<Value = Gage<Q>> {
        prop::collection::btree_set(1i64..256, 0..10).prop_flat_map(|bps| {
            let n = bps.len() + 1;
            (Just(bps), prop::collection::vec(1i64..200, n))
        })
        .prop_map(|(bps, vals)| {
            Gage::new(
                bps.into_iter().map(|k| q(k, 256)).collect(),
                vals.into_iter().map(|v| q(v, 1000)).collect(),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn cousin_round_trip(g in random_gage(), seed in 0u64..1000) {
            let (p, depth) = cousin_with_depth(&g, &TagPolicy::Random { seed });
            prop_assert!(is_fine(&g, &p));
            prop_assert_eq!(p.total_length(), q(1, 1));
            prop_assert!(depth <= g.cousin_level_bound());
            prop_assert!(p.items().iter().all(|it| it.interval.closure_contains(&it.tag)));
        }
    }
}
