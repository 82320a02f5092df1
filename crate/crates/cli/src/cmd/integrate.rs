use gauge_core::harness::{BoundKind, CorpusEntry, Schedule};
use gauge_core::{
    integrate_monotone, integrate_norm_adaptive, integrate_order, integrate_step, Form, IntegralResult, LatticeFunction,
    NormKind, Scalar, Space,
};
use rayon::prelude::*;

use crate::config::Settings;
use crate::error::{CliError, CliResult};
use crate::output::{load_corpus, slug, write_json};
use crate::records::IntegrationRecord;

/// Method used for `auto` on a given form.
fn auto_method<S: Scalar>(f: &LatticeFunction<S>) -> &'static str {
    match f.form() {
        Form::Step { .. } | Form::EscapingDimension { .. } => "step",
        Form::PiecewiseMonotone(_) => "monotone",
        Form::Smooth { components } if !components.iter().all(|c| c.iter().all(|t| t.is_polynomial())) => "adaptive",
        _ => "order",
    }
}

fn record<S: Scalar>(
    id: &str,
    method: &str,
    n: Option<u64>,
    seed: u64,
    r: &IntegralResult<S>,
) -> gauge_core::Result<IntegrationRecord> {
    Ok(IntegrationRecord {
        function_id: id.to_string(),
        method: method.to_string(),
        n,
        seed,
        uncertainty: r.uncertainty()?.to_canonical(),
        result: r.to_record(),
    })
}

fn integrate_entry<S: Scalar>(e: &CorpusEntry<S>, s: &Settings) -> gauge_core::Result<Vec<IntegrationRecord>> {
    let f = &e.function;
    let cfg = &s.integrate;
    let mut out = Vec::new();
    for requested in &cfg.methods {
        let method = if requested == "auto" { auto_method(f) } else { requested.as_str() };
        match method {
            "step" => out.push(record(&e.id, method, None, s.seed, &integrate_step(f)?)?),
            "monotone" => {
                for &n in &cfg.n {
                    out.push(record(&e.id, method, Some(n), s.seed, &integrate_monotone(f, n)?)?);
                }
            }
            "order" => {
                let oseq = Schedule::for_function(f)?.oseq(BoundKind::HenstockDef)?;
                for &n in &cfg.n {
                    out.push(record(&e.id, method, Some(n), s.seed, &integrate_order(f, &oseq, n)?)?);
                }
            }
            "adaptive" => {
                let space = Space::new(f.dim(), NormKind::L1)?;
                let eps = S::parse(&cfg.eps)?;
                let r = integrate_norm_adaptive(f, &space, &eps, cfg.depth, s.seed)?;
                out.push(record(&e.id, method, None, s.seed, &r)?);
            }
            other => unreachable!("method `{other}` passed validation"),
        }
    }
    Ok(out)
}

pub fn run<S: Scalar>(s: &Settings) -> CliResult<Vec<CliError>> {
    let corpus = load_corpus::<S>(s.corpus.as_deref(), &s.functions)?;
    let results: Vec<_> = corpus.par_iter().map(|e| (e.id.clone(), integrate_entry(e, s))).collect();
    let dir = s.out.join("integrate");
    let mut errors = Vec::new();
    let mut written = 0usize;
    for (id, res) in results {
        match res {
            Ok(records) => {
                for r in records {
                    let mut name = format!("{}__{}", slug(&r.function_id), r.method);
                    if let Some(n) = r.n {
                        name.push_str(&format!("__n{n}"));
                    }
                    write_json(&dir.join(format!("{name}__{}.json", r.result.backend)), &r)?;
                    written += 1;
                }
            }
            Err(err) => errors.push(CliError::from_core(&id, err)),
        }
    }
    println!("integrate: {written} records in {}", dir.display());
    Ok(errors)
}
