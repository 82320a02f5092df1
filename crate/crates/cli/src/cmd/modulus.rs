use gauge_core::harness::check_modulus_identity;
use gauge_core::{CheckReport, Scalar};
use rayon::prelude::*;

use crate::config::Settings;
use crate::error::{is_unsupported, CliError, CliResult};
use crate::output::{load_corpus, slug, write_json};

pub fn run<S: Scalar>(s: &Settings) -> CliResult<(Vec<CheckReport>, Vec<CliError>)> {
    let corpus = load_corpus::<S>(s.corpus.as_deref(), &s.functions)?;
    let tol = S::parse(&s.modulus.tol).map_err(|e| CliError::Config(e.to_string()))?;
    let results: Vec<_> =
        corpus.par_iter().map(|e| check_modulus_identity(&e.function, s.modulus.depth, &tol, &e.id)).collect();
    let dir = s.out.join("modulus");
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    for (e, res) in corpus.iter().zip(results) {
        match res {
            Ok(r) => {
                write_json(&dir.join(format!("{}__{}.json", slug(&e.id), S::BACKEND)), &r)?;
                reports.push(r);
            }
            Err(err) if is_unsupported(&err) && s.functions.is_empty() => {
                eprintln!("skip: modulus on {}: {err}", e.id);
            }
            Err(err) => errors.push(CliError::from_core(&e.id, err)),
        }
    }
    let failed = reports.iter().filter(|r| r.violated).count();
    println!("modulus: {} reports, {failed} violated, in {}", reports.len(), dir.display());
    Ok((reports, errors))
}
