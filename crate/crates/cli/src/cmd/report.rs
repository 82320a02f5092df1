use std::path::{Path, PathBuf};

use gauge_core::harness::parse_f64;
use gauge_core::{CheckReport, Rational, Scalar, SweepReport};
use serde::de::DeserializeOwned;

use crate::error::{CliError, CliResult};
use crate::output::write_atomic;
use crate::records::{check_row, decimal, IntegrationRecord, CHECK_HEADER};

struct Table {
    name: &'static str,
    header: Vec<&'static str>,
    rows: Vec<Vec<String>>,
}

impl Table {
    fn new(name: &'static str, header: &[&'static str]) -> Self {
        Self { name, header: header.to_vec(), rows: Vec::new() }
    }

    fn csv(&self) -> String {
        let mut s = self.header.join(",");
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.join(","));
            s.push('\n');
        }
        s
    }

    fn markdown(&self) -> String {
        let mut s = format!("## {}\n\n| {} |\n|{}|\n", self.name, self.header.join(" | "), "---|".repeat(self.header.len()));
        for r in &self.rows {
            s.push_str(&format!("| {} |\n", r.join(" | ")));
        }
        if self.rows.is_empty() {
            s.push_str("\n_no rows_\n");
        }
        s.push('\n');
        s
    }
}

fn json_files(dir: &Path) -> CliResult<Vec<PathBuf>> {
    if !dir.is_dir() {
        return Ok(Vec::new());
    }
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::io(dir, e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    files.sort();
    Ok(files)
}

fn read<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

fn exact_diff(hi: &str, lo: &str) -> f64 {
    match (Rational::parse(hi), Rational::parse(lo)) {
        (Ok(h), Ok(l)) => (h - l).to_f64(),
        _ => parse_f64(hi) - parse_f64(lo),
    }
}

/// Parses a `[x, y, ...]` list written by the modulus check.
fn float_list(s: &str) -> Vec<f64> {
    s.trim_matches(|c| c == '[' || c == ']').split(',').filter_map(|x| x.trim().parse().ok()).collect()
}

pub fn run(dir: &Path) -> CliResult<PathBuf> {
    if !dir.is_dir() {
        return Err(CliError::Config(format!("result directory {} does not exist", dir.display())));
    }
    let mut integrals = Table::new(
        "Integrals",
        &["function_id", "backend", "method", "n", "certificate", "component", "value", "uncertainty"],
    );
    let mut brackets =
        Table::new("Monotone brackets", &["function_id", "backend", "n", "component", "lower", "upper", "width"]);
    let mut records: Vec<IntegrationRecord> =
        json_files(&dir.join("integrate"))?.iter().map(|p| read(p)).collect::<CliResult<_>>()?;
    records.sort_by(|a, b| {
        (&a.function_id, a.result.backend.to_string(), &a.method, a.n)
            .cmp(&(&b.function_id, b.result.backend.to_string(), &b.method, b.n))
    });
    for r in &records {
        let n = r.n.map(|n| n.to_string()).unwrap_or_default();
        for (c, v) in r.result.value.iter().enumerate() {
            integrals.rows.push(vec![
                r.function_id.clone(),
                r.result.backend.to_string(),
                r.method.clone(),
                n.clone(),
                r.result.certificate.kind.clone(),
                c.to_string(),
                decimal(parse_f64(v)),
                decimal(parse_f64(&r.uncertainty[c])),
            ]);
        }
        if let (Some(lo), Some(hi)) = (&r.result.certificate.lower, &r.result.certificate.upper) {
            for c in 0..lo.len() {
                brackets.rows.push(vec![
                    r.function_id.clone(),
                    r.result.backend.to_string(),
                    n.clone(),
                    c.to_string(),
                    decimal(parse_f64(&lo[c])),
                    decimal(parse_f64(&hi[c])),
                    decimal(exact_diff(&hi[c], &lo[c])),
                ]);
            }
        }
    }
    brackets.rows.sort_by(|a, b| {
        (&a[0], &a[1], a[3].parse::<usize>().ok(), a[2].parse::<u64>().ok())
            .cmp(&(&b[0], &b[1], b[3].parse::<usize>().ok(), b[2].parse::<u64>().ok()))
    });

    let mut checks = Vec::new();
    for sub in ["verify", "modulus"] {
        for p in json_files(&dir.join(sub))? {
            checks.push((sub, read::<CheckReport>(&p)?));
        }
    }
    let mut summary = Table::new("Checks", &CHECK_HEADER.split(',').collect::<Vec<_>>());
    let mut modulus = Table::new("Modulus gap", &["source", "function_id", "backend", "depth", "component", "gap"]);
    let mut variational = Table::new(
        "Variational sums",
        &["function_id", "backend", "eps", "N", "norm_b_N", "worst_sum", "violated", "negative_control"],
    );
    for (sub, r) in &checks {
        summary.rows.push(check_row(r).split(',').map(str::to_string).collect());
        match r.theorem_id.as_str() {
            "modulus_identity" => {
                for (k, v) in r.details.iter().filter(|(k, _)| k.starts_with("gap_depth_")) {
                    let depth = k.trim_start_matches("gap_depth_").trim_start_matches('0');
                    for (c, g) in float_list(v).into_iter().enumerate() {
                        modulus.rows.push(vec![
                            sub.to_string(),
                            r.function_id.clone(),
                            r.backend.to_string(),
                            if depth.is_empty() { "0".into() } else { depth.to_string() },
                            c.to_string(),
                            decimal(g),
                        ]);
                    }
                }
            }
            "variational" => {
                let get = |k: &str| r.details.get(k).cloned().unwrap_or_default();
                variational.rows.push(vec![
                    r.function_id.clone(),
                    r.backend.to_string(),
                    decimal(parse_f64(&get("eps"))),
                    get("N"),
                    decimal(parse_f64(&get("norm_b_N"))),
                    decimal(parse_f64(&r.worst_achieved[0])),
                    r.violated.to_string(),
                    r.negative_control.to_string(),
                ]);
            }
            _ => {}
        }
    }

    let mut sweep = Table::new(
        "Dimension sweep",
        &[
            "backend",
            "scaling",
            "n",
            "d",
            "ring_width",
            "certified_sup",
            "sampled_sup",
            "certified_l1",
            "sampled_l1",
            "violated",
        ],
    );
    for p in json_files(&dir.join("sweep"))? {
        let r: SweepReport = read(&p)?;
        let scaling = serde_json::to_value(r.scaling).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
        for row in &r.rows {
            sweep.rows.push(vec![
                r.backend.to_string(),
                scaling.clone(),
                r.n.to_string(),
                row.d.to_string(),
                decimal(parse_f64(&row.ring_width)),
                decimal(parse_f64(&row.certified_sup)),
                decimal(parse_f64(&row.sampled_sup)),
                decimal(parse_f64(&row.certified_l1)),
                decimal(parse_f64(&row.sampled_l1)),
                row.violated.to_string(),
            ]);
        }
    }

    let out = dir.join("report");
    let tables = [
        ("integrals.csv", &integrals),
        ("brackets.csv", &brackets),
        ("checks.csv", &summary),
        ("modulus.csv", &modulus),
        ("variational.csv", &variational),
        ("sweep.csv", &sweep),
    ];
    let mut md = String::from("# Gauge experiment report\n\n");
    for (file, t) in tables {
        write_atomic(&out.join(file), t.csv().as_bytes())?;
        md.push_str(&t.markdown());
    }
    write_atomic(&out.join("report.md"), md.as_bytes())?;
    println!(
        "report: {} integrals, {} checks, {} sweep rows, in {}",
        records.len(),
        checks.len(),
        sweep.rows.len(),
        out.display()
    );
    Ok(out)
}
