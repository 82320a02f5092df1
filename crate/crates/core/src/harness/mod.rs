//! Executable checks of the integration theorems, with seeded trials,
//! witnesses and negative controls.

mod checks;
mod corpus;
mod ob;
mod schedule;
mod sweep;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use checks::*;
pub use corpus::{default_corpus, default_corpus_doc, float_corpus, float_corpus_doc, CorpusDoc, CorpusEntry, CorpusItemDoc};
pub use ob::{sampled_ob, step_ob};
pub use schedule::{ring_gage, BoundKind, Isolation, Schedule};
pub use sweep::{dimension_sweep, SweepReport, SweepRow};

use crate::error::Result;
use crate::lattice::LatticeVector;
use crate::scalar::{Backend, Scalar};

/// Parameters shared by sampled checks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckParams {
    /// Index into the gage schedule.
    pub n: u64,
    pub trials: u64,
    pub seed: u64,
    /// Halve the certified bound; such a run is expected to fail.
    pub control: bool,
    /// Label of the integrand, used in replay commands.
    pub function_id: String,
}

impl CheckParams {
    pub fn new(function_id: impl Into<String>, n: u64, trials: u64, seed: u64) -> Self {
        Self { n, trials, seed, control: false, function_id: function_id.into() }
    }

    pub fn as_control(&self) -> Self {
        Self { control: true, ..self.clone() }
    }

    pub(crate) fn scaled<S: Scalar>(&self, bound: LatticeVector<S>) -> LatticeVector<S> {
        if self.control {
            bound.scale(&S::from_ratio(1, 2))
        } else {
            bound
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub theorem_id: String,
    pub function_id: String,
    pub backend: Backend,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    pub trials: u64,
    pub bound: Vec<String>,
    pub worst_achieved: Vec<String>,
    /// Componentwise `bound − achieved`, minimized over trials.
    pub worst_slack: Vec<String>,
    pub violated: bool,
    pub violations: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness: Option<serde_json::Value>,
    pub seed: u64,
    pub replay: String,
    /// True when the achieved quantities are computed exactly rather than
    /// sampled lower bounds.
    pub exact: bool,
    pub negative_control: bool,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub details: BTreeMap<String, String>,
}

impl CheckReport {
    /// A control passes when it is violated; a regular check when it is not.
    pub fn passed(&self) -> bool {
        self.violated == self.negative_control
    }

    pub fn worst_slack_f64(&self) -> Vec<f64> {
        self.worst_slack.iter().map(|s| parse_f64(s)).collect()
    }
}

/// Decimal value of a canonical scalar string.
pub fn parse_f64(s: &str) -> f64 {
    match s.split_once('/') {
        Some((p, q)) => {
            let (p, q) = (p.parse::<f64>().unwrap_or(f64::NAN), q.parse::<f64>().unwrap_or(f64::NAN));
            if p.is_finite() && q.is_finite() {
                p / q
            } else {
                crate::scalar::Rational::parse(s).map(|r| r.to_f64()).unwrap_or(f64::NAN)
            }
        }
        None => s.parse().unwrap_or(f64::NAN),
    }
}

pub(crate) fn replay_command<S: Scalar>(theorem: &str, p: &CheckParams) -> String {
    let mut cmd = format!(
        "gauge verify --check {theorem} --function {} --n {} --trials {} --seed {} --backend {}",
        p.function_id,
        p.n,
        p.trials,
        p.seed,
        S::BACKEND
    );
    if p.control {
        cmd.push_str(" --control");
    }
    cmd
}

/// Independent per-trial seed.
pub fn trial_seed(seed: u64, trial: u64) -> u64 {
    let mut z = seed ^ trial.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Outcome of one trial: the achieved quantity, a witness builder, and
/// whether the quantity was computed exactly.
pub(crate) struct Trial<S> {
    pub achieved: LatticeVector<S>,
    pub witness: Box<dyn FnOnce() -> serde_json::Value + Send>,
    pub exact: bool,
}

pub(crate) struct Summary<S> {
    pub worst: LatticeVector<S>,
    pub violations: u64,
    pub witness: Option<serde_json::Value>,
    pub exact: bool,
}

/// Runs `trials` seeded trials in parallel and reduces them in trial order.
pub(crate) fn run_trials<S, F>(dim: usize, bound: &LatticeVector<S>, params: &CheckParams, trial: F) -> Result<Summary<S>>
where
    S: Scalar,
    F: Fn(u64, &mut ChaCha8Rng) -> Result<Trial<S>> + Sync,
{
    let outcomes: Vec<Result<(LatticeVector<S>, Option<serde_json::Value>, bool)>> = (0..params.trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(params.seed, i));
            let t = trial(i, &mut rng)?;
            let violated = !t.achieved.le_tol(bound)?;
            let w = if violated {
                let mut w = (t.witness)();
                if let Some(obj) = w.as_object_mut() {
                    obj.insert("trial".into(), serde_json::json!(i));
                }
                Some(w)
            } else {
                None
            };
            Ok((t.achieved, w, t.exact))
        })
        .collect();
    let mut s = Summary { worst: LatticeVector::zeros(dim), violations: 0, witness: None, exact: true };
    for o in outcomes {
        let (achieved, w, exact) = o?;
        s.worst = s.worst.join(&achieved)?;
        s.exact &= exact;
        if let Some(w) = w {
            s.violations += 1;
            if s.witness.is_none() {
                s.witness = Some(w);
            }
        }
    }
    Ok(s)
}

pub(crate) fn report_from<S: Scalar>(
    theorem: &str,
    params: &CheckParams,
    bound: &LatticeVector<S>,
    summary: Summary<S>,
) -> Result<CheckReport> {
    let slack = bound.sub(&summary.worst)?;
    Ok(CheckReport {
        theorem_id: theorem.to_string(),
        function_id: params.function_id.clone(),
        backend: S::BACKEND,
        n: Some(params.n),
        trials: params.trials,
        bound: bound.to_canonical(),
        worst_achieved: summary.worst.to_canonical(),
        worst_slack: slack.to_canonical(),
        violated: summary.violations > 0,
        violations: summary.violations,
        witness: summary.witness,
        seed: params.seed,
        replay: replay_command::<S>(theorem, params),
        exact: summary.exact && S::is_exact(),
        negative_control: params.control,
        details: BTreeMap::new(),
    })
}

#[cfg(test)]
mod tests;
