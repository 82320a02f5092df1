use gauge_core::integrate::ResultRecord;
use serde::{Deserialize, Serialize};

/// One integration of one corpus function by one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntegrationRecord {
    pub function_id: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<u64>,
    pub seed: u64,
    /// Componentwise half-width of the certificate, as canonical scalars.
    pub uncertainty: Vec<String>,
    #[serde(flatten)]
    pub result: ResultRecord,
}

/// Fixed-precision decimal used in every table.
pub fn decimal(x: f64) -> String {
    format!("{x:.6e}")
}

pub fn decimals(xs: &[String]) -> String {
    xs.iter().map(|s| decimal(gauge_core::harness::parse_f64(s))).collect::<Vec<_>>().join(";")
}

pub const CHECK_HEADER: &str = "theorem_id,function_id,backend,n,trials,worst_slack,violated,negative_control,passed,seed";

pub fn check_row(r: &gauge_core::CheckReport) -> String {
    format!(
        "{},{},{},{},{},{},{},{},{},{}",
        r.theorem_id,
        r.function_id,
        r.backend,
        r.n.map(|n| n.to_string()).unwrap_or_default(),
        r.trials,
        decimals(&r.worst_slack),
        r.violated,
        r.negative_control,
        r.passed(),
        r.seed
    )
}
