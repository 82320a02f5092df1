use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use super::ob::{sampled_ob, step_ob};
use super::schedule::{BoundKind, Schedule};
use super::{report_from, run_trials, CheckParams, CheckReport, Trial};
use crate::error::{Error, Result};
use crate::function::{Form, LatticeFunction};
use crate::integrate::{modulus_measure, IndefiniteIntegral};
use crate::lattice::{LatticeVector, NormKind, Space};
use crate::partition::{
    cousin_partition, riemann_sum, Gage, Interval, PartitionDoc, PartitionKind, PartitionSampler, TagPolicy,
    TaggedItem, TaggedPartition,
};
use crate::scalar::Scalar;

/// Subpartition samples per interval when `Ob_n` has no closed form.
const OB_SAMPLES: usize = 4;

/// A γ-fine partition: mostly random walks, sometimes a Cousin bisection.
pub fn sample_fine<S: Scalar>(
    sampler: &PartitionSampler<'_, S>,
    kind: PartitionKind,
    rng: &mut ChaCha8Rng,
) -> TaggedPartition<S> {
    if rng.random_range(0..6u32) == 0 {
        let policy = match rng.random_range(0..4u32) {
            0 => TagPolicy::Midpoint,
            1 => TagPolicy::Left,
            2 => TagPolicy::Right,
            _ => TagPolicy::Random { seed: rng.random() },
        };
        let pi = cousin_partition(sampler.gage(), &policy);
        match kind {
            PartitionKind::Henstock => pi,
            PartitionKind::McShane => sampler.retag(&pi, kind, rng),
        }
    } else {
        sampler.sample(kind, rng)
    }
}

fn witness<S: Scalar>(parts: Vec<TaggedPartition<S>>) -> Box<dyn FnOnce() -> serde_json::Value + Send> {
    Box::new(move || json!({ "partitions": parts.iter().map(PartitionDoc::from_partition).collect::<Vec<_>>() }))
}

/// Per-item `f(τ_E)λ(E) − μ_f(E)` and the summed uncertainty of `μ_f`.
pub fn deviations<S: Scalar>(
    f: &LatticeFunction<S>,
    mu: &IndefiniteIntegral<S>,
    items: &[TaggedItem<S>],
) -> Result<(Vec<LatticeVector<S>>, LatticeVector<S>)> {
    let mut unc = LatticeVector::zeros(f.dim());
    let mut out = Vec::with_capacity(items.len());
    for it in items {
        let q = mu.on(it.interval.a(), it.interval.b())?;
        unc.add_assign(&q.uncertainty)?;
        out.push(f.evaluate(&it.tag)?.scale(&it.interval.length()).sub(&q.value)?);
    }
    Ok((out, unc))
}

/// `max(x − u, 0)` componentwise.
fn less_uncertainty<S: Scalar>(x: &LatticeVector<S>, u: &LatticeVector<S>) -> Result<LatticeVector<S>> {
    x.sub(u)?.join(&LatticeVector::zeros(x.dim()))
}

fn sum_abs<S: Scalar>(dim: usize, xs: &[LatticeVector<S>]) -> Result<LatticeVector<S>> {
    let mut acc = LatticeVector::zeros(dim);
    for x in xs {
        acc.add_assign(&x.modulus())?;
    }
    Ok(acc)
}

/// `Σ_E |f(τ_E) − f(τ'_E)| λ(E)` for two taggings of the same intervals.
pub fn tag_swap_sum<S: Scalar>(
    f: &LatticeFunction<S>,
    p1: &TaggedPartition<S>,
    p2: &TaggedPartition<S>,
) -> Result<LatticeVector<S>> {
    let mut acc = LatticeVector::zeros(f.dim());
    for (x, y) in p1.items().iter().zip(p2.items()) {
        if x.interval != y.interval {
            return Err(Error::InvalidArgument("tag swap needs identical intervals".into()));
        }
        let d = f.evaluate(&x.tag)?.sub(&f.evaluate(&y.tag)?)?.modulus();
        acc.add_scaled(&d, &x.interval.length())?;
    }
    Ok(acc)
}

struct Setup<S> {
    schedule: Schedule<S>,
    gage: Gage<S>,
    hints: Vec<S>,
}

impl<S: Scalar> Setup<S> {
    fn new(f: &LatticeFunction<S>, n: u64) -> Result<Self> {
        let schedule = Schedule::for_function(f)?;
        let gage = schedule.gage(n)?;
        let hints = schedule.hints();
        Ok(Self { schedule, gage, hints })
    }

    fn sampler(&self) -> PartitionSampler<'_, S> {
        PartitionSampler::new(&self.gage, &self.hints)
    }

    fn bound(&self, kind: BoundKind, p: &CheckParams) -> Result<LatticeVector<S>> {
        Ok(p.scaled(self.schedule.bound(kind, p.n)?))
    }
}

/// `|σ(f,Π) − σ(f,Π′)| ≤ b_n` for pairs of γ_n-fine Henstock partitions.
pub fn check_cauchy<S: Scalar>(f: &LatticeFunction<S>, p: &CheckParams) -> Result<CheckReport> {
    let setup = Setup::new(f, p.n)?;
    let bound = setup.bound(BoundKind::HenstockCauchy, p)?;
    let sampler = setup.sampler();
    let summary = run_trials(f.dim(), &bound, p, |_, rng| {
        let a = sample_fine(&sampler, PartitionKind::Henstock, rng);
        let b = sample_fine(&sampler, PartitionKind::Henstock, rng);
        let achieved = riemann_sum(f, &a)?.sub(&riemann_sum(f, &b)?)?.modulus();
        Ok(Trial { achieved, witness: witness(vec![a, b]), exact: true })
    })?;
    report_from("cauchy", p, &bound, summary)
}

/// `Σ_E Ob_n(f,E) ≤ b_n` on γ_n-fine Henstock partitions; exact for steps.
pub fn check_henstock_lemma<S: Scalar>(f: &LatticeFunction<S>, p: &CheckParams) -> Result<CheckReport> {
    let setup = Setup::new(f, p.n)?;
    let bound = setup.bound(BoundKind::HenstockCauchy, p)?;
    let sampler = setup.sampler();
    let closed_form = setup.schedule.is_pure_step();
    let summary = run_trials(f.dim(), &bound, p, |_, rng| {
        let pi = sample_fine(&sampler, PartitionKind::Henstock, rng);
        let mut total = LatticeVector::zeros(f.dim());
        let mut exact = closed_form;
        for it in pi.items() {
            let ob = if closed_form {
                let (ob, ok) = step_ob(&setup.gage, setup.schedule.jumps(), &it.interval, f.dim())?;
                exact &= ok;
                ob
            } else {
                sampled_ob(f, &sampler, &it.interval, OB_SAMPLES, rng)?
            };
            total.add_assign(&ob)?;
        }
        Ok(Trial { achieved: total, witness: witness(vec![pi]), exact })
    })?;
    report_from("henstock_lemma", p, &bound, summary)
}

/// `Σ_E |f(τ_E)λ(E) − ∫_E f| ≤ b_n`, for Henstock or free tags.
pub fn check_pointwise_sums<S: Scalar>(
    f: &LatticeFunction<S>,
    kind: PartitionKind,
    p: &CheckParams,
) -> Result<CheckReport> {
    let setup = Setup::new(f, p.n)?;
    let bk = match kind {
        PartitionKind::Henstock => BoundKind::HenstockDef,
        PartitionKind::McShane => BoundKind::FreeDef,
    };
    let bound = setup.bound(bk, p)?;
    let sampler = setup.sampler();
    let mu = IndefiniteIntegral::new(f.clone())?;
    let summary = run_trials(f.dim(), &bound, p, |_, rng| {
        let pi = sample_fine(&sampler, kind, rng);
        let (devs, unc) = deviations(f, &mu, pi.items())?;
        let achieved = less_uncertainty(&sum_abs(f.dim(), &devs)?, &unc)?;
        Ok(Trial { achieved, witness: witness(vec![pi]), exact: unc.is_zero() })
    })?;
    let id = match kind {
        PartitionKind::Henstock => "pointwise_sums",
        PartitionKind::McShane => "pointwise_sums_free",
    };
    report_from(id, p, &bound, summary)
}

/// `Σ_E |f(τ_E) − f(τ′_E)| λ(E) ≤ b_n` for two valid taggings.
pub fn check_tag_swap<S: Scalar>(f: &LatticeFunction<S>, kind: PartitionKind, p: &CheckParams) -> Result<CheckReport> {
    let setup = Setup::new(f, p.n)?;
    let bk = match kind {
        PartitionKind::Henstock => BoundKind::HenstockCauchy,
        PartitionKind::McShane => BoundKind::FreeCauchy,
    };
    let bound = setup.bound(bk, p)?;
    let sampler = setup.sampler();
    let summary = run_trials(f.dim(), &bound, p, |_, rng| {
        let a = sample_fine(&sampler, kind, rng);
        let b = sampler.retag(&a, kind, rng);
        let achieved = tag_swap_sum(f, &a, &b)?;
        Ok(Trial { achieved, witness: witness(vec![a, b]), exact: true })
    })?;
    let id = match kind {
        PartitionKind::Henstock => "tag_swap",
        PartitionKind::McShane => "tag_swap_free",
    };
    report_from(id, p, &bound, summary)
}

/// Henstock-tag and free-tag sums agree within the sum of their certificates.
pub fn check_tag_discipline<S: Scalar>(f: &LatticeFunction<S>, p: &CheckParams) -> Result<CheckReport> {
    let setup = Setup::new(f, p.n)?;
    let bound = p.scaled(setup.schedule.bound(BoundKind::HenstockDef, p.n)?.add(&setup.schedule.bound(BoundKind::FreeDef, p.n)?)?);
    let sampler = setup.sampler();
    let summary = run_trials(f.dim(), &bound, p, |_, rng| {
        let h = sample_fine(&sampler, PartitionKind::Henstock, rng);
        let m = sample_fine(&sampler, PartitionKind::McShane, rng);
        let achieved = riemann_sum(f, &h)?.sub(&riemann_sum(f, &m)?)?.modulus();
        Ok(Trial { achieved, witness: witness(vec![h, m]), exact: true })
    })?;
    report_from("tag_discipline", p, &bound, summary)
}

/// Variational sums in an L-space: picks `N` with `‖b_N‖₁ ≤ eps` and checks
/// `Σ_E ‖f(τ_E)λ(E) − ∫_E f‖₁ ≤ eps`, together with the exact identity
/// `‖Σ_E x_E‖₁ = Σ_E ‖x_E‖₁` for the positive summands `x_E`.
///
/// The report has two components: the variational sum against `eps`, and
/// the identity defect against 0. `p.n` is ignored.
pub fn check_variational<S: Scalar>(
    f: &LatticeFunction<S>,
    space: &Space,
    eps: &S,
    p: &CheckParams,
) -> Result<CheckReport> {
    if space.norm_kind != NormKind::L1 {
        return Err(Error::InvalidArgument("variational sums are checked in the L1 space".into()));
    }
    Error::check_dim(space.dim, f.dim())?;
    if *eps <= S::zero() {
        return Err(Error::InvalidArgument("eps must be positive".into()));
    }
    let schedule = Schedule::for_function(f)?;
    let c = schedule.constants(BoundKind::HenstockDef)?;
    let big_n = (space.norm(&c)? / eps.clone()).ceil_u64().unwrap_or(u64::MAX).max(1);
    if big_n > 100_000_000 {
        return Err(Error::UnsupportedClass(format!("regulator index {big_n} is out of range")));
    }
    let gage = schedule.gage(big_n)?;
    let hints = schedule.hints();
    let sampler = PartitionSampler::new(&gage, &hints);
    let mu = IndefiniteIntegral::new(f.clone())?;
    let target = if p.control { eps.clone() * S::from_ratio(1, 2) } else { eps.clone() };
    let bound = LatticeVector::new(vec![target, S::zero()])?;
    let params = CheckParams { n: big_n, ..p.clone() };
    let summary = run_trials(2, &bound, &params, |_, rng| {
        let pi = sample_fine(&sampler, PartitionKind::Henstock, rng);
        let (devs, unc) = deviations(f, &mu, pi.items())?;
        let xs: Vec<LatticeVector<S>> = devs.iter().map(LatticeVector::modulus).collect();
        let mut norms = S::zero();
        let mut total = LatticeVector::zeros(f.dim());
        for x in &xs {
            norms = norms + space.norm(x)?;
            total.add_assign(x)?;
        }
        let defect = (space.norm(&total)? - norms.clone()).abs();
        let slack = if S::is_exact() { S::zero() } else { S::tolerance() * S::from_u64(xs.len() as u64) };
        let defect = if defect <= slack { S::zero() } else { defect };
        let var = norms - space.norm(&unc)?;
        let var = if var < S::zero() { S::zero() } else { var };
        Ok(Trial { achieved: LatticeVector::new(vec![var, defect])?, witness: witness(vec![pi]), exact: unc.is_zero() })
    })?;
    let mut r = report_from("variational", &params, &bound, summary)?;
    r.replay = format!("{} --eps {}", r.replay, eps.to_canonical());
    r.details.insert("N".into(), big_n.to_string());
    r.details.insert("eps".into(), eps.to_canonical());
    r.details.insert("norm_b_N".into(), (space.norm(&c)? / S::from_u64(big_n)).to_canonical());
    Ok(r)
}

/// For `g` equal to its base `f` off a finite set: `|σ(g,Π) − J| ≤ b_n + 2M/n`
/// on γ′_n-fine partitions, and both integrals agree.
pub fn check_ae_equality<S: Scalar>(g: &LatticeFunction<S>, p: &CheckParams) -> Result<CheckReport> {
    let Form::AeModified { base, exceptions } = g.form() else {
        return Err(Error::InvalidArgument("ae_equality needs an a.e.-modified function".into()));
    };
    let setup = Setup::new(g, p.n)?;
    let bound = setup.bound(BoundKind::HenstockDef, p)?;
    let sampler = setup.sampler();
    let mu_f = IndefiniteIntegral::new((**base).clone())?;
    let mu_g = IndefiniteIntegral::new(g.clone())?;
    let jf = mu_f.on(&S::zero(), &S::one())?;
    let jg = mu_g.on(&S::zero(), &S::one())?;
    let disagreement = less_uncertainty(&jf.value.sub(&jg.value)?.modulus(), &jf.uncertainty.add(&jg.uncertainty)?)?;
    let summary = run_trials(g.dim(), &bound, p, |_, rng| {
        let pi = sample_fine(&sampler, PartitionKind::Henstock, rng);
        let dev = riemann_sum(g, &pi)?.sub(&jf.value)?.modulus();
        let achieved = less_uncertainty(&dev, &jf.uncertainty)?;
        Ok(Trial { achieved, witness: witness(vec![pi]), exact: jf.uncertainty.is_zero() })
    })?;
    let mut r = report_from("ae_equality", p, &bound, summary)?;
    let base_bound = Schedule::for_function(base)?.bound(BoundKind::HenstockDef, p.n)?;
    let m = if exceptions.is_empty() { LatticeVector::zeros(g.dim()) } else { g.majorant()? };
    r.details.insert("b_n".into(), format!("{:?}", base_bound.to_canonical()));
    r.details.insert("M".into(), format!("{:?}", m.to_canonical()));
    r.details.insert("integral_f".into(), format!("{:?}", jf.value.to_canonical()));
    r.details.insert("integral_g".into(), format!("{:?}", jg.value.to_canonical()));
    if !disagreement.is_zero() && !p.control {
        r.violated = true;
        r.violations += 1;
        r.details.insert("integrals_disagree".into(), format!("{:?}", disagreement.to_canonical()));
    }
    Ok(r)
}

/// `μ(A∪B) = μ(A) + μ(B)` over random splits `a < c < b`, together with
/// `μ([a,b]) = μ([0,b]) − μ([0,a])`; discrepancies beyond the certificates
/// count as violations.
pub fn check_additivity<S: Scalar>(f: &LatticeFunction<S>, splits: &[S], p: &CheckParams) -> Result<CheckReport> {
    let mu = IndefiniteIntegral::new(f.clone())?;
    let zero = LatticeVector::zeros(f.dim());
    let excess = |a: &S, c: &S, b: &S| -> Result<LatticeVector<S>> {
        let whole = mu.on(a, b)?;
        let (l, r) = (mu.on(a, c)?, mu.on(c, b)?);
        let split = l.value.add(&r.value)?.sub(&whole.value)?.modulus();
        let split_unc = l.uncertainty.add(&r.uncertainty)?.add(&whole.uncertainty)?;
        let (ob, oa) = (mu.on(&S::zero(), b)?, mu.on(&S::zero(), a)?);
        let restr = ob.value.sub(&oa.value)?.sub(&whole.value)?.modulus();
        let restr_unc = ob.uncertainty.add(&oa.uncertainty)?.add(&whole.uncertainty)?;
        less_uncertainty(&split, &split_unc)?.add(&less_uncertainty(&restr, &restr_unc)?)
    };
    for c in splits {
        if *c <= S::zero() || *c >= S::one() {
            return Err(Error::InvalidArgument("split points must lie in (0,1)".into()));
        }
    }
    let fixed = splits.len() as u64;
    let summary = run_trials(f.dim(), &zero, p, |i, rng| {
        let (a, c, b) = if i < fixed {
            (S::zero(), splits[i as usize].clone(), S::one())
        } else {
            let mut k = [0i64; 3];
            for x in &mut k {
                *x = rng.random_range(0..=(1 << 20));
            }
            k.sort();
            let pt = |v: i64| S::from_ratio(v, 1 << 20);
            (pt(k[0]), pt(k[1]), pt(k[2]))
        };
        let achieved = excess(&a, &c, &b)?;
        let w = json!({ "a": a.to_canonical(), "c": c.to_canonical(), "b": b.to_canonical() });
        Ok(Trial { achieved, witness: Box::new(move || w), exact: true })
    })?;
    report_from("additivity", &CheckParams { trials: p.trials.max(fixed), ..p.clone() }, &zero, summary)
}

/// `|μ_f|([0,1]) = μ_{|f|}([0,1])`: the sign-change-aware lower
/// approximation is nondecreasing in depth, never exceeds the oracle, and
/// ends within `tol` of it.
pub fn check_modulus_identity<S: Scalar>(
    f: &LatticeFunction<S>,
    depth: u32,
    tol: &S,
    function_id: &str,
) -> Result<CheckReport> {
    let unit = Interval::unit();
    let oracle = f.modulus_fn()?.exact_integral(&unit)?;
    let mu = IndefiniteIntegral::new(f.clone())?;
    let mut prev = LatticeVector::zeros(f.dim());
    let mut violations = 0u64;
    let mut witness = None;
    let mut details = std::collections::BTreeMap::new();
    let mut last = prev.clone();
    for d in 0..=depth {
        let m = modulus_measure(&mu, &unit, d)?;
        let overshoot = !m.le_tol(&oracle)?;
        let decreasing = !prev.le_tol(&m)?;
        if overshoot || decreasing {
            violations += 1;
            witness.get_or_insert_with(|| json!({ "depth": d, "measure": m.to_canonical(), "oracle": oracle.to_canonical() }));
        }
        details.insert(format!("gap_depth_{d:02}"), format!("{:?}", oracle.sub(&m)?.to_f64s()));
        prev = m.clone();
        last = m;
    }
    let gap = oracle.sub(&last)?;
    let bound = LatticeVector::splat(f.dim(), tol.clone());
    if !gap.le_tol(&bound)? {
        violations += 1;
        witness.get_or_insert_with(|| json!({ "depth": depth, "gap": gap.to_canonical() }));
    }
    details.insert("oracle".into(), format!("{:?}", oracle.to_canonical()));
    details.insert("measure".into(), format!("{:?}", last.to_canonical()));
    Ok(CheckReport {
        theorem_id: "modulus_identity".into(),
        function_id: function_id.to_string(),
        backend: S::BACKEND,
        n: None,
        trials: u64::from(depth) + 1,
        bound: bound.to_canonical(),
        worst_achieved: gap.to_canonical(),
        worst_slack: bound.sub(&gap)?.to_canonical(),
        violated: violations > 0,
        violations,
        witness,
        seed: 0,
        replay: format!("gauge modulus --function {function_id} --depth {depth} --backend {}", S::BACKEND),
        exact: S::is_exact(),
        negative_control: false,
        details,
    })
}

/// `|∫_A f| ≤ ∫_A |f|` componentwise over the given intervals.
pub fn check_abs_integral<S: Scalar>(
    f: &LatticeFunction<S>,
    intervals: &[Interval<S>],
    function_id: &str,
) -> Result<CheckReport> {
    let m = f.modulus_fn()?;
    let mut worst: Option<LatticeVector<S>> = None;
    let mut violations = 0u64;
    let mut witness = None;
    for e in intervals {
        let lhs = f.exact_integral(e)?.modulus();
        let rhs = m.exact_integral(e)?;
        let excess = lhs.sub(&rhs)?;
        if !lhs.le_tol(&rhs)? {
            violations += 1;
            witness.get_or_insert_with(|| json!({ "a": e.a().to_canonical(), "b": e.b().to_canonical() }));
        }
        worst = Some(match worst {
            Some(w) => w.join(&excess)?,
            None => excess,
        });
    }
    let zero = LatticeVector::zeros(f.dim());
    let worst = worst.unwrap_or_else(|| zero.clone());
    Ok(CheckReport {
        theorem_id: "abs_integral".into(),
        function_id: function_id.to_string(),
        backend: S::BACKEND,
        n: None,
        trials: intervals.len() as u64,
        bound: zero.to_canonical(),
        worst_achieved: worst.to_canonical(),
        worst_slack: zero.sub(&worst)?.to_canonical(),
        violated: violations > 0,
        violations,
        witness,
        seed: 0,
        replay: format!("gauge verify --check abs_integral --function {function_id} --backend {}", S::BACKEND),
        exact: S::is_exact(),
        negative_control: false,
        details: Default::default(),
    })
}
