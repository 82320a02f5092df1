use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use gauge_core::{Backend, EscapeScaling};
use serde::Deserialize;

use crate::error::{CliError, CliResult};

pub const MAX_N: u64 = 1_000_000;
pub const MAX_TRIALS: u64 = 100_000;
pub const MAX_DEPTH: u32 = 24;
pub const OUT_ENV: &str = "GAUGE_OUT_DIR";
const DEFAULT_OUT: &str = "gauge-out";

pub const ALL_CHECKS: &[&str] = &[
    "cauchy",
    "henstock_lemma",
    "pointwise_sums",
    "pointwise_sums_free",
    "tag_swap",
    "tag_swap_free",
    "tag_discipline",
    "variational",
    "ae_equality",
    "additivity",
    "modulus_identity",
    "abs_integral",
];

/// Checks that also run with a halved bound as a negative control on step
/// functions with at least one jump, where the bound is attained.
pub const CONTROL_CHECKS: &[&str] = &["henstock_lemma", "pointwise_sums"];

pub const METHODS: &[&str] = &["auto", "step", "monotone", "order", "adaptive"];

#[derive(Debug, Parser)]
#[command(name = "gauge", version, about = "Gauge integration of lattice-valued functions and theorem checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// TOML configuration file; flags override its keys.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// `rational` or `float`.
    #[arg(long, global = true)]
    pub backend: Option<Backend>,
    /// Output directory; defaults to $GAUGE_OUT_DIR, then `gauge-out`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// Corpus JSON file; the built-in corpus is used otherwise.
    #[arg(long, global = true)]
    pub corpus: Option<PathBuf>,
    /// Restrict to these corpus ids (repeatable).
    #[arg(long = "function", global = true)]
    pub functions: Vec<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integrate every corpus function and write one record per method.
    Integrate(IntegrateArgs),
    /// Run theorem checks and negative controls.
    Verify(VerifyArgs),
    /// Check the modulus identity by sign-change-aware refinement.
    Modulus(ModulusArgs),
    /// Sweep the escaping-dimension family over dimensions.
    Sweep(SweepArgs),
    /// Aggregate result files into CSV and Markdown tables.
    Report(ReportArgs),
}

#[derive(Debug, Args)]
pub struct IntegrateArgs {
    #[arg(long = "method", value_delimiter = ',')]
    pub methods: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    #[arg(long)]
    pub eps: Option<String>,
    #[arg(long)]
    pub depth: Option<u32>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "check", value_delimiter = ',')]
    pub checks: Vec<String>,
    #[arg(long, value_delimiter = ',')]
    pub n: Vec<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    /// Run only the halved-bound variant.
    #[arg(long)]
    pub control: bool,
    /// Skip the negative controls.
    #[arg(long)]
    pub no_controls: bool,
    #[arg(long, value_delimiter = ',')]
    pub eps: Vec<String>,
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Debug, Args)]
pub struct ModulusArgs {
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long)]
    pub tol: Option<String>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_delimiter = ',')]
    pub dims: Vec<usize>,
    /// `unit` or `dyadic`.
    #[arg(long)]
    pub scaling: Option<String>,
    #[arg(long)]
    pub n: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    /// Result directory; defaults to the output directory.
    pub dir: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub corpus: Option<PathBuf>,
    pub backend: Option<Backend>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub jobs: Option<usize>,
    pub functions: Option<Vec<String>>,
    #[serde(default)]
    pub integrate: IntegrateSection,
    #[serde(default)]
    pub verify: VerifySection,
    #[serde(default)]
    pub modulus: ModulusSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegrateSection {
    pub methods: Option<Vec<String>>,
    pub n: Option<Vec<u64>>,
    pub eps: Option<String>,
    pub depth: Option<u32>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifySection {
    pub checks: Option<Vec<String>>,
    pub n: Option<Vec<u64>>,
    pub trials: Option<u64>,
    pub control: Option<bool>,
    pub controls: Option<bool>,
    pub eps: Option<Vec<String>>,
    pub depth: Option<u32>,
    pub tol: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModulusSection {
    pub depth: Option<u32>,
    pub tol: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub dims: Option<Vec<usize>>,
    pub scaling: Option<String>,
    pub n: Option<u64>,
    pub trials: Option<u64>,
}

/// Fully resolved settings shared by every subcommand.
#[derive(Debug, Clone)]
pub struct Settings {
    pub corpus: Option<PathBuf>,
    pub backend: Backend,
    pub seed: u64,
    pub out: PathBuf,
    pub jobs: Option<usize>,
    pub functions: Vec<String>,
    pub integrate: IntegrateSettings,
    pub verify: VerifySettings,
    pub modulus: ModulusSettings,
    pub sweep: SweepSettings,
}

#[derive(Debug, Clone)]
pub struct IntegrateSettings {
    pub methods: Vec<String>,
    pub n: Vec<u64>,
    pub eps: String,
    pub depth: u32,
}

#[derive(Debug, Clone)]
pub struct VerifySettings {
    pub checks: Vec<String>,
    /// True when the checks were named rather than defaulted.
    pub explicit_checks: bool,
    pub n: Vec<u64>,
    pub trials: u64,
    pub control_only: bool,
    pub controls: bool,
    pub eps: Vec<String>,
    pub depth: u32,
    pub tol: String,
}

#[derive(Debug, Clone)]
pub struct ModulusSettings {
    pub depth: u32,
    pub tol: String,
}

#[derive(Debug, Clone)]
pub struct SweepSettings {
    pub dims: Vec<usize>,
    pub scaling: EscapeScaling,
    pub n: u64,
    pub trials: u64,
}

fn nonempty<T>(v: Vec<T>) -> Option<Vec<T>> {
    (!v.is_empty()).then_some(v)
}

pub fn load_file(path: &Path) -> CliResult<FileConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}

impl Settings {
    pub fn resolve(cli: &Cli) -> CliResult<Self> {
        let file = match &cli.global.config {
            Some(p) => load_file(p)?,
            None => FileConfig::default(),
        };
        Self::merge(cli, file, std::env::var_os(OUT_ENV).map(PathBuf::from))
    }

    /// Flags win over the file, the file over the environment.
    pub fn merge(cli: &Cli, file: FileConfig, env_out: Option<PathBuf>) -> CliResult<Self> {
        let g = &cli.global;
        let mut integrate = IntegrateSettings {
            methods: file.integrate.methods.unwrap_or_else(|| vec!["auto".into()]),
            n: file.integrate.n.unwrap_or_else(|| vec![10, 100, 1000]),
            eps: file.integrate.eps.unwrap_or_else(|| "1/1000".into()),
            depth: file.integrate.depth.unwrap_or(16),
        };
        let checks_named = file.verify.checks.is_some();
        let mut verify = VerifySettings {
            checks: file.verify.checks.unwrap_or_else(|| ALL_CHECKS.iter().map(|s| s.to_string()).collect()),
            explicit_checks: checks_named,
            n: file.verify.n.unwrap_or_else(|| vec![4, 16]),
            trials: file.verify.trials.unwrap_or(200),
            control_only: file.verify.control.unwrap_or(false),
            controls: file.verify.controls.unwrap_or(true),
            eps: file.verify.eps.unwrap_or_else(|| vec!["1/100".into()]),
            depth: file.verify.depth.unwrap_or(6),
            tol: file.verify.tol.unwrap_or_else(|| "1/1000000".into()),
        };
        let mut modulus = ModulusSettings {
            depth: file.modulus.depth.unwrap_or(6),
            tol: file.modulus.tol.unwrap_or_else(|| "1/1000000".into()),
        };
        let mut sweep_scaling = file.sweep.scaling.unwrap_or_else(|| "unit".into());
        let mut sweep = SweepSettings {
            dims: file.sweep.dims.unwrap_or_else(|| vec![1, 2, 4, 8, 16, 32]),
            scaling: EscapeScaling::Unit,
            n: file.sweep.n.unwrap_or(16),
            trials: file.sweep.trials.unwrap_or(100),
        };
        match &cli.command {
            Command::Integrate(a) => {
                if let Some(m) = nonempty(a.methods.clone()) {
                    integrate.methods = m;
                }
                if let Some(n) = nonempty(a.n.clone()) {
                    integrate.n = n;
                }
                if let Some(e) = &a.eps {
                    integrate.eps = e.clone();
                }
                if let Some(d) = a.depth {
                    integrate.depth = d;
                }
            }
            Command::Verify(a) => {
                if let Some(c) = nonempty(a.checks.clone()) {
                    verify.checks = c;
                    verify.explicit_checks = true;
                }
                if let Some(n) = nonempty(a.n.clone()) {
                    verify.n = n;
                }
                if let Some(t) = a.trials {
                    verify.trials = t;
                }
                if a.control {
                    verify.control_only = true;
                }
                if a.no_controls {
                    verify.controls = false;
                }
                if let Some(e) = nonempty(a.eps.clone()) {
                    verify.eps = e;
                }
                if let Some(d) = a.depth {
                    verify.depth = d;
                }
                if let Some(t) = &a.tol {
                    verify.tol = t.clone();
                }
            }
            Command::Modulus(a) => {
                if let Some(d) = a.depth {
                    modulus.depth = d;
                }
                if let Some(t) = &a.tol {
                    modulus.tol = t.clone();
                }
            }
            Command::Sweep(a) => {
                if let Some(d) = nonempty(a.dims.clone()) {
                    sweep.dims = d;
                }
                if let Some(s) = &a.scaling {
                    sweep_scaling = s.clone();
                }
                if let Some(n) = a.n {
                    sweep.n = n;
                }
                if let Some(t) = a.trials {
                    sweep.trials = t;
                }
            }
            Command::Report(_) => {}
        }
        sweep.scaling = match sweep_scaling.as_str() {
            "unit" => EscapeScaling::Unit,
            "dyadic" => EscapeScaling::Dyadic,
            other => return Err(CliError::Config(format!("unknown scaling `{other}`; expected unit or dyadic"))),
        };
        let settings = Settings {
            corpus: g.corpus.clone().or(file.corpus),
            backend: g.backend.or(file.backend).unwrap_or(Backend::Rational),
            seed: g.seed.or(file.seed).unwrap_or(1),
            out: g.out.clone().or(file.out).or(env_out).unwrap_or_else(|| PathBuf::from(DEFAULT_OUT)),
            jobs: g.jobs.or(file.jobs),
            functions: nonempty(g.functions.clone()).or(file.functions).unwrap_or_default(),
            integrate,
            verify,
            modulus,
            sweep,
        };
        settings.validate()?;
        Ok(settings)
    }

    fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        let check_n = |ns: &[u64], what: &str| -> CliResult<()> {
            match ns.iter().find(|&&n| n == 0 || n > MAX_N) {
                Some(n) => Err(CliError::Config(format!("{what}: n = {n} is outside 1..={MAX_N}"))),
                None => Ok(()),
            }
        };
        let check_trials = |t: u64, what: &str| -> CliResult<()> {
            if t == 0 || t > MAX_TRIALS {
                return Err(CliError::Config(format!("{what}: trials = {t} is outside 1..={MAX_TRIALS}")));
            }
            Ok(())
        };
        let check_depth = |d: u32, what: &str| -> CliResult<()> {
            if d > MAX_DEPTH {
                return Err(CliError::Config(format!("{what}: depth = {d} exceeds {MAX_DEPTH}")));
            }
            Ok(())
        };
        if self.jobs == Some(0) {
            return bad("jobs must be at least 1".into());
        }
        check_n(&self.integrate.n, "integrate")?;
        check_depth(self.integrate.depth, "integrate")?;
        if let Some(m) = self.integrate.methods.iter().find(|m| !METHODS.contains(&m.as_str())) {
            return bad(format!("unknown method `{m}`; expected one of {}", METHODS.join(", ")));
        }
        check_n(&self.verify.n, "verify")?;
        check_trials(self.verify.trials, "verify")?;
        check_depth(self.verify.depth, "verify")?;
        if let Some(c) = self.verify.checks.iter().find(|c| !ALL_CHECKS.contains(&c.as_str())) {
            return bad(format!("unknown check `{c}`; expected one of {}", ALL_CHECKS.join(", ")));
        }
        check_depth(self.modulus.depth, "modulus")?;
        check_n(&[self.sweep.n], "sweep")?;
        check_trials(self.sweep.trials, "sweep")?;
        if let Some(d) = self.sweep.dims.iter().find(|&&d| d == 0 || d > 60) {
            return bad(format!("sweep: dimension {d} is outside 1..=60"));
        }
        for e in self.verify.eps.iter().chain([&self.integrate.eps]) {
            positive_rational(e)?;
        }
        positive_rational(&self.verify.tol)?;
        positive_rational(&self.modulus.tol)?;
        Ok(())
    }
}

/// Parses a positive `p/q` or decimal literal.
pub fn positive_rational(s: &str) -> CliResult<gauge_core::Rational> {
    use gauge_core::Scalar;
    let v = gauge_core::Rational::parse(s).map_err(|e| CliError::Config(format!("`{s}`: {e}")))?;
    if v <= gauge_core::Rational::from_i64(0) {
        return Err(CliError::Config(format!("`{s}` must be positive")));
    }
    Ok(v)
}
