use gauge_core::harness::dimension_sweep;
use gauge_core::{EscapeScaling, Scalar, SweepReport};

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::write_json;

pub fn run<S: Scalar>(s: &Settings) -> CliResult<SweepReport> {
    let w = &s.sweep;
    let r = dimension_sweep::<S>(&w.dims, w.scaling, w.n, w.trials, s.seed)
        .map_err(|e| CliError::from_core("dimension_sweep", e))?;
    let scaling = match w.scaling {
        EscapeScaling::Unit => "unit",
        EscapeScaling::Dyadic => "dyadic",
    };
    let path = s.out.join("sweep").join(format!("sweep_{scaling}_n{}__{}.json", w.n, S::BACKEND));
    write_json(&path, &r)?;
    println!("sweep: {} dimensions, violated = {}, in {}", r.rows.len(), r.violated, path.display());
    Ok(r)
}
