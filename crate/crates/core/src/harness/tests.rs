use super::*;
use crate::function::{EscapeScaling, LatticeFunction, Polynomial};
use crate::lattice::{LatticeVector, NormKind, Space};
use crate::partition::{Interval, PartitionKind, TagPolicy, TaggedPartition};
use crate::scalar::Rational;

type Q = Rational;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn v(xs: &[Q]) -> LatticeVector<Q> {
    LatticeVector::new(xs.to_vec()).unwrap()
}

fn corpus(id: &str) -> LatticeFunction<Q> {
    default_corpus::<Q>().into_iter().find(|e| e.id == id).unwrap().function
}

fn params(id: &str, n: u64, trials: u64) -> CheckParams {
    CheckParams::new(id, n, trials, 11)
}

fn identity() -> LatticeFunction<Q> {
    LatticeFunction::monotone(LatticeFunction::polynomial(vec![Polynomial::new(vec![q(0, 1), q(1, 1)])]).unwrap())
        .unwrap()
}

#[test]
fn ring_gage_isolates() {
    let g = ring_gage(&q(1, 2), &q(1, 64)).unwrap();
    assert_eq!(g.eval(&q(1, 2)), q(1, 64));
    assert_eq!(g.eval(&(q(1, 2) - q(1, 64))), q(1, 64));
    // No tag outside the central ring reaches across 1/2.
    for k in 0..=256 {
        let t = q(k, 256);
        let d = if t > q(1, 2) { t.clone() - q(1, 2) } else { q(1, 2) - t.clone() };
        if d >= q(1, 64) {
            assert!(g.eval(&t) <= d, "t = {t}");
        }
    }
}

#[test]
fn schedule_constants() {
    let s = Schedule::for_function(&corpus("step_half")).unwrap();
    // One jump of size 2 with total width 1/n: b_n = 2·(1/2n) = 1/n.
    assert_eq!(s.bound(BoundKind::HenstockDef, 4).unwrap(), v(&[q(1, 4)]));
    assert_eq!(s.bound(BoundKind::HenstockCauchy, 4).unwrap(), v(&[q(1, 2)]));
    let m = Schedule::for_function(&identity()).unwrap();
    assert_eq!(m.bound(BoundKind::HenstockCauchy, 10).unwrap(), v(&[q(1, 10)]));
    let ae = Schedule::for_function(&corpus("ae_zero_spike")).unwrap();
    assert_eq!(ae.bound(BoundKind::HenstockDef, 10).unwrap(), v(&[q(1, 1)]));
}

#[test]
fn cauchy_examples() {
    let r = check_cauchy(&corpus("step_half"), &params("step_half", 8, 200)).unwrap();
    assert!(!r.violated && r.exact);
    let r = check_cauchy(&corpus("constant_2d"), &params("constant_2d", 8, 50)).unwrap();
    assert!(!r.violated);
    assert_eq!(r.worst_slack, r.bound);
    let r = check_cauchy(&identity(), &params("identity", 10, 100)).unwrap();
    assert!(!r.violated);
    assert_eq!(r.bound, vec!["1/10".to_string()]);
}

#[test]
fn henstock_lemma_examples() {
    let r = check_henstock_lemma(&corpus("step_signed_2d"), &params("s", 6, 200)).unwrap();
    assert!(!r.violated && r.exact);
    let r = check_henstock_lemma(&corpus("constant_2d"), &params("c", 6, 20)).unwrap();
    assert_eq!(r.worst_achieved, vec!["0/1".to_string(), "0/1".to_string()]);
    let r = check_henstock_lemma(&identity(), &params("identity", 8, 50)).unwrap();
    assert!(!r.violated && !r.exact);
    assert_eq!(r.bound, vec!["1/8".to_string()]);
}

#[test]
fn pointwise_examples() {
    for kind in [PartitionKind::Henstock, PartitionKind::McShane] {
        let r = check_pointwise_sums(&corpus("step_signed_2d"), kind, &params("s", 5, 200)).unwrap();
        assert!(!r.violated, "{kind:?}");
    }
    let r = check_pointwise_sums(&corpus("constant_2d"), PartitionKind::Henstock, &params("c", 5, 20)).unwrap();
    assert_eq!(r.worst_achieved, vec!["0/1".to_string(), "0/1".to_string()]);
    let r = check_pointwise_sums(&corpus("square_pair"), PartitionKind::Henstock, &params("sq", 16, 100)).unwrap();
    assert!(!r.violated);
    let b: Vec<f64> = r.bound.iter().map(|s| parse_f64(s)).collect();
    assert!(b.iter().all(|x| *x <= 1.0 / 16.0));
}

#[test]
fn tag_swap_examples() {
    let f = identity();
    for n in [1u64, 5, 40] {
        let l = TaggedPartition::uniform(n, &TagPolicy::Left, PartitionKind::Henstock).unwrap();
        let r = TaggedPartition::uniform(n, &TagPolicy::Right, PartitionKind::Henstock).unwrap();
        assert_eq!(tag_swap_sum(&f, &l, &r).unwrap(), v(&[q(1, n as i64)]));
    }
    for kind in [PartitionKind::Henstock, PartitionKind::McShane] {
        let r = check_tag_swap(&corpus("step_thirds"), kind, &params("t", 7, 200)).unwrap();
        assert!(!r.violated);
        let r = check_tag_swap(&corpus("constant_2d"), kind, &params("c", 7, 20)).unwrap();
        assert_eq!(r.worst_achieved, vec!["0/1".to_string(), "0/1".to_string()]);
    }
}

#[test]
fn negative_controls_fail() {
    let f = corpus("step_half");
    let p = params("step_half", 9, 400).as_control();
    assert!(check_cauchy(&f, &p).unwrap().violated);
    assert!(check_henstock_lemma(&f, &p).unwrap().violated);
    let r = check_pointwise_sums(&f, PartitionKind::Henstock, &p).unwrap();
    assert!(r.violated && r.passed());
    let w = r.witness.unwrap();
    let doc: crate::partition::PartitionDoc = serde_json::from_value(w["partitions"][0].clone()).unwrap();
    let pi: TaggedPartition<Q> = doc.build().unwrap();
    assert!(crate::partition::is_fine(&Schedule::for_function(&f).unwrap().gage(9).unwrap(), &pi));
}

#[test]
fn variational_examples() {
    let space = Space::new(2, NormKind::L1).unwrap();
    let r = check_variational(&corpus("step_signed_2d"), &space, &q(1, 100), &params("s", 1, 100)).unwrap();
    assert!(!r.violated, "{r:?}");
    let r = check_variational(&corpus("constant_2d"), &space, &q(1, 100), &params("c", 1, 10)).unwrap();
    assert_eq!(r.worst_achieved[0], "0/1");
    let line = Space::new(1, NormKind::L1).unwrap();
    let r = check_variational(&identity(), &line, &q(1, 50), &params("identity", 1, 50)).unwrap();
    assert!(!r.violated);
    assert_eq!(r.details["N"], "25");
    let sup = Space::new(1, NormKind::Sup).unwrap();
    assert!(check_variational(&identity(), &sup, &q(1, 50), &params("identity", 1, 5)).is_err());
}

#[test]
fn ae_equality_examples() {
    let r = check_ae_equality(&corpus("ae_zero_spike"), &params("ae", 10, 200)).unwrap();
    assert!(!r.violated);
    assert_eq!(r.bound, vec!["1/1".to_string()]);
    let empty = LatticeFunction::ae_modified(identity(), Vec::new()).unwrap();
    let r = check_ae_equality(&empty, &params("plain", 10, 50)).unwrap();
    assert!(!r.violated);
    assert_eq!(r.bound, vec!["1/20".to_string()]);
    let r = check_ae_equality(&corpus("ae_identity_spikes"), &params("spikes", 1000, 100)).unwrap();
    assert!(!r.violated);
    assert!(parse_f64(&r.bound[0]) <= 0.01 + 1.0 / 1000.0);
    assert!(check_ae_equality(&identity(), &params("x", 10, 1)).is_err());
}

#[test]
fn additivity_examples() {
    let r = check_additivity(&identity(), &[q(1, 2)], &params("identity", 1, 50)).unwrap();
    assert!(!r.violated && r.exact);
    let r = check_additivity(&corpus("step_thirds"), &[q(1, 3), q(2, 3)], &params("st", 1, 50)).unwrap();
    assert!(!r.violated);
    let mu = crate::integrate::IndefiniteIntegral::new(identity()).unwrap();
    let half = Interval::new(q(0, 1), q(1, 2)).unwrap();
    let rest = Interval::new(q(1, 2), q(1, 1)).unwrap();
    assert_eq!(mu.query(&[half]).unwrap(), v(&[q(1, 8)]));
    assert_eq!(mu.query(&[rest]).unwrap(), v(&[q(3, 8)]));
}

#[test]
fn modulus_identity_examples() {
    let tol = q(1, 1_000_000);
    for id in ["shifted_line", "two_root_quadratic", "signed_pair"] {
        let r = check_modulus_identity(&corpus(id), 6, &tol, id).unwrap();
        assert!(!r.violated, "{id}: {r:?}");
    }
    let r = check_modulus_identity(&corpus("square_pair"), 0, &tol, "square_pair").unwrap();
    assert_eq!(r.worst_achieved, vec!["0/1".to_string(), "0/1".to_string()]);
}

#[test]
fn abs_integral_examples() {
    let unit = [Interval::unit()];
    let r = check_abs_integral(&corpus("square_pair"), &unit, "sq").unwrap();
    assert_eq!(r.worst_achieved, vec!["0/1".to_string(), "0/1".to_string()]);
    let r = check_abs_integral(&corpus("shifted_line"), &unit, "line").unwrap();
    assert_eq!(r.worst_achieved, vec!["-1/4".to_string()]);
    let f = LatticeFunction::step(vec![q(1, 2)], vec![v(&[q(-1, 1)]), v(&[q(1, 1)])]).unwrap();
    let pieces = [Interval::new(q(0, 1), q(1, 2)).unwrap(), Interval::new(q(1, 2), q(1, 1)).unwrap()];
    let r = check_abs_integral(&f, &pieces, "signs").unwrap();
    assert_eq!(r.worst_achieved, vec!["0/1".to_string()]);
    let r = check_abs_integral(&f, &unit, "signs").unwrap();
    assert_eq!(r.worst_achieved, vec!["-1/1".to_string()]);
}

#[test]
fn sweep_examples() {
    let r = dimension_sweep::<Q>(&[1, 2, 3], EscapeScaling::Unit, 8, 50, 3).unwrap();
    assert!(!r.violated);
    assert_eq!(r.rows[0].certified_sup, r.rows[0].certified_l1);
    // Jumps of L1 size 2 at 1/2 and 1 at 3/4, each within width 1/16.
    assert_eq!(r.rows[1].certified_l1, "3/16");
    let dy = dimension_sweep::<Q>(&[1, 2, 3, 4], EscapeScaling::Dyadic, 4, 10, 3).unwrap();
    let l1: Vec<f64> = dy.rows.iter().map(|r| parse_f64(&r.certified_l1)).collect();
    assert!(l1.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn reports_are_deterministic() {
    let p = params("step_signed_2d", 6, 64);
    let a = serde_json::to_string(&check_cauchy(&corpus("step_signed_2d"), &p).unwrap()).unwrap();
    let b = serde_json::to_string(&check_cauchy(&corpus("step_signed_2d"), &p).unwrap()).unwrap();
    assert_eq!(a, b);
}
