//! Command-line flags and the resolved configuration recorded in reports.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pinchwarp_core::TensorSource;
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Largest scale searched when neither `--s` nor `--s-max` is given.
pub const DEFAULT_S_MAX: f64 = 16384.0;
pub const DEFAULT_EPS_LIST: [f64; 3] = [0.5, 0.25, 0.1];

#[derive(Debug, Parser)]
#[command(
    name = "pinchwarp",
    version,
    about = "Pinched negatively curved warped metrics on nilpotent Lie groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lower central series, grading, bracket containment and a k-fold witness.
    Analyze(CommonArgs),
    /// Build the warping profile and check its conditions on a grid.
    Profile(CommonArgs),
    /// Curvature tensor at one radius as a flat (a, b, c, d) row-major array.
    Curvature(CurvatureArgs),
    /// Pinching certificate at a fixed scale, or the first passing scale.
    Certify(CommonArgs),
    /// Certificates over a descending list of ε.
    Sweep(SweepArgs),
    /// Closed-form curvature components against the frame computation.
    OracleCheck(CommonArgs),
    /// Commutator checks in the unitriangular integer matrix group.
    Commutator(CommutatorArgs),
    /// Regenerate a JSON report from the configuration it records.
    Rerun(RerunArgs),
}

#[derive(Debug, Clone, Args)]
#[group(id = "source", required = true, multiple = false)]
pub struct SourceArgs {
    /// Algebra description file (JSON).
    #[arg(long, value_name = "FILE", group = "source")]
    pub algebra: Option<PathBuf>,
    /// Built-in algebra: abelian:N, heis3, heis5, filiform:N, free2step:K.
    #[arg(long, value_name = "NAME", group = "source")]
    pub builtin: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Write the report here instead of standard output.
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[command(flatten)]
    pub source: SourceArgs,
    #[arg(long, default_value_t = 0.25)]
    pub epsilon: f64,
    /// Fixed scale.
    #[arg(long, conflicts_with = "s_max")]
    pub s: Option<f64>,
    /// Largest scale tried by the doubling search.
    #[arg(long)]
    pub s_max: Option<f64>,
    #[arg(long, requires_all = ["r_max", "r_step"], allow_hyphen_values = true)]
    pub r_min: Option<f64>,
    #[arg(long, requires_all = ["r_min", "r_step"], allow_hyphen_values = true)]
    pub r_max: Option<f64>,
    #[arg(long, requires_all = ["r_min", "r_max"])]
    pub r_step: Option<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Random restarts per radius for the sampled sectional extremes.
    #[arg(long, default_value_t = 32)]
    pub restarts: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CurvatureArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, allow_hyphen_values = true)]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = SourceChoice::Oracle)]
    pub tensor: SourceChoice,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Comma-separated, positive and strictly descending.
    #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_EPS_LIST)]
    pub eps_list: Vec<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct CommutatorArgs {
    /// Matrix size m; generators have an (m-1)-fold nontrivial commutator.
    #[arg(long, default_value_t = 4)]
    pub size: usize,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct RerunArgs {
    /// A JSON report previously written by this tool.
    pub report: PathBuf,
    #[arg(long, value_name = "PATH")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SourceChoice {
    Oracle,
    ClosedForm,
    Limit,
    Intrinsic,
}

impl From<SourceChoice> for TensorSource {
    fn from(c: SourceChoice) -> Self {
        match c {
            SourceChoice::Oracle => TensorSource::Oracle,
            SourceChoice::ClosedForm => TensorSource::ClosedForm,
            SourceChoice::Limit => TensorSource::Limit,
            SourceChoice::Intrinsic => TensorSource::Intrinsic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandKind {
    Analyze,
    Profile,
    Curvature,
    Certify,
    Sweep,
    OracleCheck,
    Commutator,
}

impl CommandKind {
    pub fn name(self) -> &'static str {
        match self {
            CommandKind::Analyze => "analyze",
            CommandKind::Profile => "profile",
            CommandKind::Curvature => "curvature",
            CommandKind::Certify => "certify",
            CommandKind::Sweep => "sweep",
            CommandKind::OracleCheck => "oracle-check",
            CommandKind::Commutator => "commutator",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AlgebraSource {
    Builtin(String),
    File(PathBuf),
}

impl AlgebraSource {
    pub fn label(&self) -> String {
        match self {
            AlgebraSource::Builtin(name) => name.clone(),
            AlgebraSource::File(path) => path.display().to_string(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub r_step: f64,
}

/// Everything a report depends on; rerunning it reproduces the report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: CommandKind,
    pub algebra: Option<AlgebraSource>,
    pub epsilon: Option<f64>,
    pub s: Option<f64>,
    pub s_max: Option<f64>,
    pub grid: Option<GridSpec>,
    pub tol: Option<f64>,
    pub seed: u64,
    pub restarts: Option<usize>,
    pub r: Option<f64>,
    pub tensor: Option<TensorSource>,
    pub eps_list: Option<Vec<f64>>,
    pub size: Option<usize>,
    pub trials: Option<usize>,
    pub output: Option<PathBuf>,
    pub format: Format,
}

fn positive(name: &str, v: f64) -> Result<f64, CliError> {
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(CliError::Input(format!(
            "--{name} must be positive and finite, got {v}"
        )))
    }
}

fn resolve_common(kind: CommandKind, a: &CommonArgs) -> Result<RunConfig, CliError> {
    let algebra = match (&a.source.algebra, &a.source.builtin) {
        (Some(path), None) => AlgebraSource::File(path.clone()),
        (None, Some(name)) => AlgebraSource::Builtin(name.clone()),
        _ => {
            return Err(CliError::Input(
                "give exactly one of --algebra, --builtin".into(),
            ))
        }
    };
    positive("epsilon", a.epsilon)?;
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(CliError::Input(format!(
            "--tol must be non-negative, got {}",
            a.tol
        )));
    }
    if let Some(s) = a.s {
        positive("s", s)?;
    }
    if let Some(s) = a.s_max {
        positive("s-max", s)?;
    }
    let grid = match (a.r_min, a.r_max, a.r_step) {
        (Some(r_min), Some(r_max), Some(r_step)) => {
            positive("r-step", r_step)?;
            if !(r_min.is_finite() && r_max.is_finite() && r_min < r_max) {
                return Err(CliError::Input(format!(
                    "need --r-min < --r-max, got {r_min}, {r_max}"
                )));
            }
            Some(GridSpec {
                r_min,
                r_max,
                r_step,
            })
        }
        _ => None,
    };
    if a.restarts == 0 {
        return Err(CliError::Input("--restarts must be at least 1".into()));
    }
    let searches = matches!(kind, CommandKind::Certify | CommandKind::Sweep);
    let s_max = match (searches, a.s, a.s_max) {
        (true, None, None) => Some(DEFAULT_S_MAX),
        (_, _, s_max) => s_max,
    };
    let s = match (kind, a.s) {
        (CommandKind::Curvature | CommandKind::OracleCheck, None) => Some(1.0),
        (_, s) => s,
    };
    Ok(RunConfig {
        command: kind,
        algebra: Some(algebra),
        epsilon: Some(a.epsilon),
        s,
        s_max,
        grid,
        tol: Some(a.tol),
        seed: a.seed,
        restarts: Some(a.restarts),
        r: None,
        tensor: None,
        eps_list: None,
        size: None,
        trials: None,
        output: a.out.output.clone(),
        format: a.out.format.unwrap_or(if kind == CommandKind::Sweep {
            Format::Csv
        } else {
            Format::Json
        }),
    })
}

/// Validated configuration for every command except `rerun`.
pub fn resolve(command: &Command) -> Result<RunConfig, CliError> {
    match command {
        Command::Analyze(a) => resolve_common(CommandKind::Analyze, a),
        Command::Profile(a) => resolve_common(CommandKind::Profile, a),
        Command::Certify(a) => resolve_common(CommandKind::Certify, a),
        Command::OracleCheck(a) => resolve_common(CommandKind::OracleCheck, a),
        Command::Curvature(a) => {
            if !a.r.is_finite() {
                return Err(CliError::Input(format!("--r must be finite, got {}", a.r)));
            }
            let mut c = resolve_common(CommandKind::Curvature, &a.common)?;
            c.r = Some(a.r);
            c.tensor = Some(a.tensor.into());
            Ok(c)
        }
        Command::Sweep(a) => {
            let mut c = resolve_common(CommandKind::Sweep, &a.common)?;
            if c.s.is_some() {
                return Err(CliError::Input(
                    "sweep searches the scale; use --s-max".into(),
                ));
            }
            c.eps_list = Some(a.eps_list.clone());
            Ok(c)
        }
        Command::Commutator(a) => {
            if !(2..=12).contains(&a.size) {
                return Err(CliError::Input(format!(
                    "--size must lie in 2..=12, got {}",
                    a.size
                )));
            }
            Ok(RunConfig {
                command: CommandKind::Commutator,
                algebra: None,
                epsilon: None,
                s: None,
                s_max: None,
                grid: None,
                tol: None,
                seed: a.seed,
                restarts: None,
                r: None,
                tensor: None,
                eps_list: None,
                size: Some(a.size),
                trials: Some(a.trials),
                output: a.out.output.clone(),
                format: a.out.format.unwrap_or(Format::Json),
            })
        }
        Command::Rerun(_) => Err(CliError::Input(
            "rerun has no configuration of its own".into(),
        )),
    }
}
