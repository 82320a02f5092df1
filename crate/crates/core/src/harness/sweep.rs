//! Bound growth with dimension for escaping-block step functions.

use serde::{Deserialize, Serialize};

use super::checks::{deviations, sample_fine};
use super::schedule::{BoundKind, Isolation, Schedule};
use super::{run_trials, CheckParams, Trial};
use crate::error::Result;
use crate::function::{EscapeScaling, LatticeFunction};
use crate::integrate::IndefiniteIntegral;
use crate::lattice::LatticeVector;
use crate::partition::{PartitionDoc, PartitionKind, PartitionSampler};
use crate::scalar::{Backend, Scalar};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub d: usize,
    pub ring_width: String,
    /// Certified `max_c (b_n)_c`: the scalar multiple of `(1,…,1)` that
    /// dominates the pointwise sums in the order.
    pub certified_sup: String,
    pub sampled_sup: String,
    /// Certified `‖b_n‖₁`: the bound on the L1 variational sum.
    pub certified_l1: String,
    pub sampled_l1: String,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub theorem_id: String,
    pub backend: Backend,
    pub scaling: EscapeScaling,
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    pub rows: Vec<SweepRow>,
    pub violated: bool,
    pub replay: String,
}

/// For each `d`, the certified and sampled sup-order scale of the pointwise
/// sums and the L1 variational sum, with a fixed ring width `1/(2n)` around
/// every block boundary.
pub fn dimension_sweep<S: Scalar>(
    dims: &[usize],
    scaling: EscapeScaling,
    n: u64,
    trials: u64,
    seed: u64,
) -> Result<SweepReport> {
    let mut rows = Vec::new();
    for &d in dims {
        let f = LatticeFunction::<S>::escaping(d, scaling)?;
        let schedule = Schedule::for_function(&f)?.with_isolation(Isolation::PerPoint);
        let gage = schedule.gage(n)?;
        let hints = schedule.hints();
        let sampler = PartitionSampler::new(&gage, &hints);
        let mu = IndefiniteIntegral::new(f.clone())?;
        let b = schedule.bound(BoundKind::HenstockDef, n)?;
        let cert_sup = b.max_entry();
        let cert_l1 = b.sum_entries();
        let mut ext = b.entries().to_vec();
        ext.push(cert_l1.clone());
        let bound = LatticeVector::new(ext)?;
        let params = CheckParams::new(format!("escaping_{d}"), n, trials, seed);
        let summary = run_trials(d + 1, &bound, &params, |_, rng| {
            let pi = sample_fine(&sampler, PartitionKind::Henstock, rng);
            let (devs, _) = deviations(&f, &mu, pi.items())?;
            let mut acc = LatticeVector::zeros(d);
            for x in &devs {
                acc.add_assign(&x.modulus())?;
            }
            let mut ext = acc.entries().to_vec();
            ext.push(acc.sum_entries());
            let doc = PartitionDoc::from_partition(&pi);
            Ok(Trial {
                achieved: LatticeVector::new(ext)?,
                witness: Box::new(move || serde_json::json!({ "partitions": [doc] })),
                exact: true,
            })
        })?;
        let worst = summary.worst.entries();
        let sampled_sup = worst[..d].iter().skip(1).fold(worst[0].clone(), |m, v| if *v > m { v.clone() } else { m });
        rows.push(SweepRow {
            d,
            ring_width: schedule.ring_width(n).to_canonical(),
            certified_sup: cert_sup.to_canonical(),
            sampled_sup: sampled_sup.to_canonical(),
            certified_l1: cert_l1.to_canonical(),
            sampled_l1: worst[d].to_canonical(),
            violated: summary.violations > 0,
        });
    }
    let violated = rows.iter().any(|r| r.violated);
    let dims_arg = dims.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(",");
    Ok(SweepReport {
        theorem_id: "dimension_sweep".into(),
        backend: S::BACKEND,
        scaling,
        n,
        trials,
        seed,
        rows,
        violated,
        replay: format!(
            "gauge sweep --dims {dims_arg} --scaling {} --n {n} --trials {trials} --seed {seed} --backend {}",
            match scaling {
                EscapeScaling::Unit => "unit",
                EscapeScaling::Dyadic => "dyadic",
            },
            S::BACKEND
        ),
    })
}
