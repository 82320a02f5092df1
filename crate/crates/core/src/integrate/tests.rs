use num_traits::{One, Zero};
use proptest::prelude::*;

use super::*;
use crate::function::{EscapeScaling, Polynomial};
use crate::partition::Interval;
use crate::lattice::{NormKind, Space};
use crate::scalar::Rational;

type Q = Rational;

fn q(n: i64, d: i64) -> Q {
    Q::from_ratio(n, d)
}

fn v(xs: &[Q]) -> LatticeVector<Q> {
    LatticeVector::new(xs.to_vec()).unwrap()
}

fn poly(c: &[Q]) -> Polynomial<Q> {
    Polynomial::new(c.to_vec())
}

fn identity() -> LatticeFunction<Q> {
    LatticeFunction::polynomial(vec![poly(&[q(0, 1), q(1, 1)])]).unwrap()
}

fn step3() -> LatticeFunction<Q> {
    LatticeFunction::step(vec![q(1, 3), q(2, 3)], vec![v(&[q(1, 1)]), v(&[q(2, 1)]), v(&[q(3, 1)])]).unwrap()
}

fn half_indicator() -> LatticeFunction<Q> {
    LatticeFunction::step(vec![q(1, 2)], vec![v(&[q(2, 1)]), v(&[q(0, 1)])]).unwrap()
}

fn harmonic(dim: usize) -> OSequence<Q> {
    OSequence::harmonic(LatticeVector::splat(dim, q(1, 1))).unwrap()
}

#[test]
fn step_examples() {
    let r = integrate_step(&half_indicator()).unwrap();
    assert_eq!(r.value, v(&[q(1, 1)]));
    assert_eq!(r.certificate, Certificate::Exact);
    assert_eq!(integrate_step(&LatticeFunction::constant(v(&[q(0, 1)]))).unwrap().value, v(&[q(0, 1)]));
    assert_eq!(integrate_step(&step3()).unwrap().value, v(&[q(2, 1)]));
    assert!(matches!(integrate_step(&identity()), Err(Error::UnsupportedForm(_))));
}

#[test]
fn monotone_examples() {
    let r = integrate_monotone(&identity(), 2).unwrap();
    match &r.certificate {
        Certificate::Bracket { lower, upper } => {
            assert_eq!(lower, &v(&[q(1, 4)]));
            assert_eq!(upper, &v(&[q(3, 4)]));
        }
        c => panic!("unexpected {c:?}"),
    }
    let r = integrate_monotone(&identity(), 4096).unwrap();
    assert_eq!(r.value, v(&[q(1, 2)]));
    let f = LatticeFunction::polynomial(vec![poly(&[q(0, 1), q(1, 1)]), poly(&[q(0, 1), q(0, 1), q(1, 1)])]).unwrap();
    let r = integrate_monotone(&f, 1000).unwrap();
    let err = r.value.sub(&v(&[q(1, 2), q(1, 3)])).unwrap().modulus();
    assert!(err.le(&v(&[q(1, 1000), q(1, 1000)])).unwrap());
    if let Certificate::Bracket { lower, upper } = &r.certificate {
        assert_eq!(upper.sub(lower).unwrap(), v(&[q(1, 1000), q(1, 1000)]));
    }
    let dec = LatticeFunction::polynomial(vec![poly(&[q(0, 1), q(-1, 1)])]).unwrap();
    assert!(matches!(integrate_monotone(&dec, 10), Err(Error::MonotonicityViolated { .. })));
}

#[test]
fn adaptive_examples() {
    let space = Space::new(1, NormKind::Sup).unwrap();
    let r = integrate_norm_adaptive(&LatticeFunction::<f64>::polynomial(vec![Polynomial::new(vec![0.0, 1.0])]).unwrap(), &space, &1e-6, 20, 1)
        .unwrap();
    assert!((r.value.get(0) - 0.5).abs() < 1e-5);
    let r = integrate_norm_adaptive(&half_indicator(), &space, &q(1, 1_000_000), 20, 1).unwrap();
    assert_eq!(r.value, integrate_step(&half_indicator()).unwrap().value);
    let sin = LatticeFunction::<f64>::smooth(vec![vec![crate::function::Term::Sin { coef: 1.0, freq: 1.0, pi: true }]])
        .unwrap();
    let r = integrate_norm_adaptive(&sin, &space, &1e-6, 20, 1).unwrap();
    assert!((r.value.get(0) - 2.0 / std::f64::consts::PI).abs() < 1e-5);
    let jumpy = LatticeFunction::step(vec![q(1, 3)], vec![v(&[q(0, 1)]), v(&[q(1, 1)])]).unwrap();
    assert!(matches!(
        integrate_norm_adaptive(&jumpy, &space, &q(1, 1_000_000), 6, 1),
        Err(Error::NoConvergence { depth: 6 })
    ));
}

#[test]
fn order_examples() {
    let base = LatticeFunction::constant(v(&[q(0, 1)]));
    let g = LatticeFunction::ae_modified(base, vec![(q(1, 2), v(&[q(5, 1)]))]).unwrap();
    let r = integrate_order(&g, &harmonic(1), 10).unwrap();
    assert_eq!(r.value, v(&[q(0, 1)]));
    assert_eq!(r.order_bound, Some(v(&[q(1, 1)])));
    let m = LatticeFunction::monotone(identity()).unwrap();
    for n in [1u64, 7, 64] {
        let r = integrate_order(&m, &harmonic(1), n).unwrap();
        let err = r.value.sub(&v(&[q(1, 2)])).unwrap().modulus();
        assert!(err.le(&v(&[q(1, n as i64)])).unwrap());
    }
    let s = step3();
    assert_eq!(integrate_order(&s, &harmonic(1), 3).unwrap(), integrate_step(&s).unwrap());
    let closure = LatticeFunction::closure(1, "c", std::sync::Arc::new(|t: &Q| LatticeVector::new(vec![t.clone()])))
        .unwrap();
    assert!(matches!(integrate_order(&closure, &harmonic(1), 3), Err(Error::UnsupportedClass(_))));
}

#[test]
fn indefinite_examples() {
    let mu = IndefiniteIntegral::new(identity()).unwrap();
    assert_eq!(mu.query(&[Interval::new(q(0, 1), q(1, 2)).unwrap()]).unwrap(), v(&[q(1, 8)]));
    let split = [Interval::new(q(0, 1), q(1, 3)).unwrap(), Interval::new(q(1, 3), q(1, 1)).unwrap()];
    assert_eq!(mu.query(&split).unwrap(), mu.query(&[Interval::unit()]).unwrap());
    let st = IndefiniteIntegral::new(LatticeFunction::step(vec![q(1, 2)], vec![v(&[q(1, 1)]), v(&[q(0, 1)])]).unwrap())
        .unwrap();
    assert_eq!(st.query(&[Interval::new(q(1, 4), q(3, 4)).unwrap()]).unwrap(), v(&[q(1, 4)]));
    let overlapping = [Interval::new(q(0, 1), q(1, 2)).unwrap(), Interval::new(q(1, 4), q(1, 1)).unwrap()];
    assert!(mu.query(&overlapping).is_err());
}

#[test]
fn indefinite_brackets_oracle_free_monotone() {
    let f = LatticeFunction::monotone(
        LatticeFunction::closure(1, "t", std::sync::Arc::new(|t: &Q| LatticeVector::new(vec![t.clone()]))).unwrap(),
    )
    .unwrap();
    let mu = IndefiniteIntegral::with_bracket_pieces(f, 64).unwrap();
    let r = mu.query_with_bound(&[Interval::unit()]).unwrap();
    assert_eq!(r.method, Method::Bracket);
    assert_eq!(r.value, v(&[q(1, 2)]));
    assert_eq!(r.uncertainty, v(&[q(1, 128)]));
}

#[test]
fn modulus_measure_examples() {
    let f = LatticeFunction::polynomial(vec![poly(&[q(-1, 2), q(1, 1)])]).unwrap();
    let mu = IndefiniteIntegral::new(f).unwrap();
    assert_eq!(modulus_measure(&mu, &Interval::unit(), 1).unwrap(), v(&[q(1, 4)]));
    let pos = IndefiniteIntegral::new(identity()).unwrap();
    assert_eq!(modulus_measure(&pos, &Interval::unit(), 0).unwrap(), v(&[q(1, 2)]));
    // (t - 1/3)(t - 2/3), oracle 11/162.
    let g = LatticeFunction::polynomial(vec![poly(&[q(2, 9), q(-1, 1), q(1, 1)])]).unwrap();
    let oracle = g.modulus_fn().unwrap().exact_integral(&Interval::unit()).unwrap();
    assert_eq!(oracle, v(&[q(11, 162)]));
    let mu = IndefiniteIntegral::new(g).unwrap();
    let mut prev = v(&[q(0, 1)]);
    for d in 0..=6 {
        let m = modulus_measure(&mu, &Interval::unit(), d).unwrap();
        assert!(prev.le(&m).unwrap());
        assert!(m.le(&oracle).unwrap());
        prev = m;
    }
    let gap = oracle.sub(&prev).unwrap();
    assert!(gap.get(0).to_f64() < 1e-6);
}

#[test]
fn escaping_is_step_like() {
    let f = LatticeFunction::<Q>::escaping(4, EscapeScaling::Unit).unwrap();
    let r = integrate_step(&f).unwrap();
    assert_eq!(r.value, v(&[q(1, 2), q(1, 4), q(1, 8), q(1, 16)]));
}

fn arb_monotone() -> impl Strategy<Value = LatticeFunction<Q>> {
    // Nonnegative coefficients give nondecreasing maps on [0,1].
    prop::collection::vec(prop::collection::vec(0i64..5, 1..4), 1..3).prop_map(|comps| {
        let polys = comps.iter().map(|c| Polynomial::new(c.iter().map(|&k| q(k, 1)).collect())).collect();
        LatticeFunction::monotone(LatticeFunction::polynomial(polys).unwrap()).unwrap()
    })
}

proptest! {
    #[test]
    fn bracket_contains_oracle_and_tightens(f in arb_monotone(), n in 1u64..40) {
        let j = f.exact_integral(&Interval::unit()).unwrap();
        let (l1, u1) = bracket_on(&f, &Q::zero(), &Q::one(), n).unwrap();
        let (l2, u2) = bracket_on(&f, &Q::zero(), &Q::one(), 2 * n).unwrap();
        prop_assert!(l1.le(&j).unwrap() && j.le(&u1).unwrap());
        prop_assert!(l1.le(&l2).unwrap() && u2.le(&u1).unwrap());
        let width = u1.sub(&l1).unwrap();
        let delta = f.evaluate(&Q::one()).unwrap().sub(&f.evaluate(&Q::zero()).unwrap()).unwrap();
        prop_assert_eq!(width, delta.scale(&q(1, n as i64)));
    }

    #[test]
    fn order_and_norm_agree(f in arb_monotone(), n in 1u64..20) {
        let oseq = harmonic(f.dim());
        let order = integrate_order(&f, &oseq, n).unwrap();
        let space = Space::new(f.dim(), NormKind::Sup).unwrap();
        let eps = q(1, 10_000);
        let norm = integrate_norm_adaptive(&f, &space, &eps, 16, n).unwrap();
        let diff = space.norm(&order.value.sub(&norm.value).unwrap()).unwrap();
        let bn = space.norm(&oseq.eval(n).unwrap()).unwrap();
        prop_assert!(diff <= eps + bn);
    }

    #[test]
    fn query_is_additive(k in 1i64..64) {
        let f = LatticeFunction::polynomial(vec![poly(&[q(1, 3), q(-2, 1), q(1, 1)])]).unwrap();
        let mu = IndefiniteIntegral::new(f).unwrap();
        let c = q(k, 64);
        let parts = [Interval::new(Q::zero(), c.clone()).unwrap(), Interval::new(c, Q::one()).unwrap()];
        prop_assert_eq!(mu.query(&parts).unwrap(), mu.query(&[Interval::unit()]).unwrap());
    }
}
