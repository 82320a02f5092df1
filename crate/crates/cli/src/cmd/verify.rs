use gauge_core::harness::{
    check_abs_integral, check_additivity, check_ae_equality, check_cauchy, check_henstock_lemma, check_modulus_identity,
    check_pointwise_sums, check_tag_discipline, check_tag_swap, check_variational, CheckParams, CorpusEntry,
    Schedule,
};
use gauge_core::{CheckReport, Form, Interval, NormKind, PartitionKind, Scalar, Space};
use rayon::prelude::*;

use crate::config::{Settings, CONTROL_CHECKS};
use crate::error::{is_unsupported, CliError, CliResult};
use crate::output::{load_corpus, slug, write_atomic, write_json};
use crate::records::{check_row, CHECK_HEADER};

#[derive(Debug, Clone)]
enum Param {
    None,
    N(u64),
    Eps(String),
}

#[derive(Debug, Clone)]
struct Job {
    check: String,
    entry: usize,
    param: Param,
    control: bool,
}

impl Job {
    fn file_name(&self, id: &str, backend: gauge_core::Backend) -> String {
        let mut name = format!("{}__{}", self.check, slug(id));
        match &self.param {
            Param::None => {}
            Param::N(n) => name.push_str(&format!("__n{n}")),
            Param::Eps(e) => name.push_str(&format!("__eps{}", slug(e))),
        }
        if self.control {
            name.push_str("__control");
        }
        format!("{name}__{backend}.json")
    }
}

fn has_jumps<S: Scalar>(e: &CorpusEntry<S>) -> bool {
    matches!(e.function.form(), Form::Step { .. })
        && Schedule::for_function(&e.function).is_ok_and(|s| !s.jumps().is_empty())
}

fn jobs<S: Scalar>(corpus: &[CorpusEntry<S>], s: &Settings) -> Vec<Job> {
    let v = &s.verify;
    let mut out = Vec::new();
    for (entry, e) in corpus.iter().enumerate() {
        for check in &v.checks {
            let params: Vec<Param> = match check.as_str() {
                "variational" => v.eps.iter().cloned().map(Param::Eps).collect(),
                "additivity" | "modulus_identity" | "abs_integral" => vec![Param::None],
                "ae_equality" if !matches!(e.function.form(), Form::AeModified { .. }) => Vec::new(),
                _ => v.n.iter().copied().map(Param::N).collect(),
            };
            for param in params {
                let job = |control| Job { check: check.clone(), entry, param: param.clone(), control };
                if v.control_only {
                    out.push(job(true));
                    continue;
                }
                out.push(job(false));
                if v.controls && CONTROL_CHECKS.contains(&check.as_str()) && has_jumps(e) {
                    out.push(job(true));
                }
            }
        }
    }
    out
}

fn abs_intervals<S: Scalar>() -> gauge_core::Result<Vec<Interval<S>>> {
    let q = |p, r| S::from_ratio(p, r);
    Ok(vec![
        Interval::unit(),
        Interval::new(q(0, 1), q(1, 2))?,
        Interval::new(q(1, 3), q(1, 1))?,
        Interval::new(q(1, 4), q(3, 4))?,
    ])
}

fn run_job<S: Scalar>(job: &Job, e: &CorpusEntry<S>, s: &Settings) -> gauge_core::Result<CheckReport> {
    let v = &s.verify;
    let f = &e.function;
    let n = match job.param {
        Param::N(n) => n,
        _ => 1,
    };
    let mut p = CheckParams::new(e.id.clone(), n, v.trials, s.seed);
    p.control = job.control;
    match job.check.as_str() {
        "cauchy" => check_cauchy(f, &p),
        "henstock_lemma" => check_henstock_lemma(f, &p),
        "pointwise_sums" => check_pointwise_sums(f, PartitionKind::Henstock, &p),
        "pointwise_sums_free" => check_pointwise_sums(f, PartitionKind::McShane, &p),
        "tag_swap" => check_tag_swap(f, PartitionKind::Henstock, &p),
        "tag_swap_free" => check_tag_swap(f, PartitionKind::McShane, &p),
        "tag_discipline" => check_tag_discipline(f, &p),
        "variational" => {
            let Param::Eps(eps) = &job.param else { unreachable!("variational jobs carry eps") };
            let space = Space::new(f.dim(), NormKind::L1)?;
            check_variational(f, &space, &S::parse(eps)?, &p)
        }
        "ae_equality" => check_ae_equality(f, &p),
        "additivity" => check_additivity(f, &[S::from_ratio(1, 3), S::from_ratio(1, 2)], &p),
        "modulus_identity" => check_modulus_identity(f, v.depth, &S::parse(&v.tol)?, &e.id),
        "abs_integral" => check_abs_integral(f, &abs_intervals()?, &e.id),
        other => unreachable!("check `{other}` passed validation"),
    }
}

/// Runs the selected checks. Returns the reports in job order and the
/// errors; unsupported pairs are skipped unless both the checks and the
/// functions were named.
pub fn run<S: Scalar>(s: &Settings) -> CliResult<(Vec<CheckReport>, Vec<CliError>)> {
    let corpus = load_corpus::<S>(s.corpus.as_deref(), &s.functions)?;
    let explicit = s.verify.explicit_checks && !s.functions.is_empty();
    let jobs = jobs(&corpus, s);
    let results: Vec<_> = jobs.par_iter().map(|j| run_job(j, &corpus[j.entry], s)).collect();
    let dir = s.out.join("verify");
    let mut reports = Vec::new();
    let mut errors = Vec::new();
    let mut csv = String::from(CHECK_HEADER);
    csv.push('\n');
    for (job, res) in jobs.iter().zip(results) {
        let id = &corpus[job.entry].id;
        match res {
            Ok(mut r) => {
                if let Some(c) = &s.corpus {
                    r.replay = format!("{} --corpus {}", r.replay, c.display());
                }
                write_json(&dir.join(job.file_name(id, S::BACKEND)), &r)?;
                csv.push_str(&check_row(&r));
                csv.push('\n');
                if r.negative_control && !r.violated {
                    eprintln!("note: negative control {} on {id} did not trigger", r.theorem_id);
                }
                reports.push(r);
            }
            Err(e) if is_unsupported(&e) && !explicit => {
                eprintln!("skip: {} on {id}: {e}", job.check);
            }
            Err(e) => errors.push(CliError::from_core(id, e)),
        }
    }
    write_atomic(&dir.join(format!("summary__{}.csv", S::BACKEND)), csv.as_bytes())?;
    let failed = reports.iter().filter(|r| !r.negative_control && r.violated).count();
    let controls = reports.iter().filter(|r| r.negative_control).count();
    println!(
        "verify: {} reports ({controls} negative controls), {failed} violated, in {}",
        reports.len(),
        dir.display()
    );
    Ok((reports, errors))
}
