//! Command-line front end for `pinchwarp-core`.
//!
//! [`run_cli`] parses arguments, resolves them into a [`RunConfig`], runs the
//! command and writes its report. Exit codes: 0 success or passing verdict,
//! 1 failed verdict, 2 input or numerical error.

pub mod config;
pub mod input;
pub mod parallel;
pub mod report;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::Parser;
use pinchwarp_core::algebra::{
    bracket_level_check, kfold_bracket_witness, unitriangular_commutator_check, AlgebraError,
};
use pinchwarp_core::certify::{
    certification_grid, certify_pinching, check_eps_list, find_s, sweep_row, CertifyError,
    CertifyOptions, SectionalOptions, SweepTable,
};
use pinchwarp_core::curvature::{
    closed_form_curvature, compare_formulas, full_curvature, gr_curvature, limit_tensor,
    MetricError,
};
use pinchwarp_core::linalg::matrix_columns;
use pinchwarp_core::warp::{profile_check, uniform_grid};
use pinchwarp_core::{
    builtin, graded_frame, validate, FramedMetric, GradedFrame, LieAlgebraSpec, TensorSource,
    ValidatedAlgebra, WarpError, WarpProfile,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use config::{AlgebraSource, Cli, Command, CommandKind, Format, GridSpec, RunConfig};
pub use input::{parse_algebra_file, parse_algebra_str, ParseError};
pub use parallel::Parallel;
use report::*;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("algebra: {0}")]
    Algebra(#[from] AlgebraError),
    #[error("warp profile: {0}")]
    Warp(#[from] WarpError),
    #[error("metric: {0}")]
    Metric(#[from] MetricError),
    #[error("certify: {0}")]
    Certify(#[from] CertifyError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            // A tail that is not yet settled withholds the verdict.
            CliError::Certify(CertifyError::TailNotMonotone { .. }) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Success,
    Failed,
}

impl Status {
    fn from_pass(pass: bool) -> Self {
        if pass {
            Status::Success
        } else {
            Status::Failed
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Status::Success => 0,
            Status::Failed => 1,
        }
    }
}

/// A finished command: the report text and whether its check passed.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub body: String,
    pub status: Status,
}

fn json<T: Serialize>(config: &RunConfig, result: T) -> Result<String, CliError> {
    let report = Report {
        tool: ToolInfo::current(),
        config: config.clone(),
        result,
    };
    let mut text = serde_json::to_string_pretty(&report)?;
    text.push('\n');
    Ok(text)
}

fn only_json(config: &RunConfig) -> Result<(), CliError> {
    if config.format == Format::Json {
        Ok(())
    } else {
        Err(CliError::Input(format!(
            "{} reports are JSON only",
            config.command.name()
        )))
    }
}

fn load_spec(source: &AlgebraSource) -> Result<LieAlgebraSpec, CliError> {
    Ok(match source {
        AlgebraSource::Builtin(name) => builtin(name)?,
        AlgebraSource::File(path) => parse_algebra_file(path)?,
    })
}

struct Loaded {
    label: String,
    algebra: ValidatedAlgebra,
    frame: GradedFrame,
}

fn load(config: &RunConfig) -> Result<Loaded, CliError> {
    let source = config
        .algebra
        .as_ref()
        .ok_or_else(|| CliError::Input(format!("{} needs an algebra", config.command.name())))?;
    let algebra = validate(&load_spec(source)?)?;
    let frame = graded_frame(&algebra)?;
    Ok(Loaded {
        label: source.label(),
        algebra,
        frame,
    })
}

fn need<T: Copy>(value: Option<T>, name: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Input(format!("configuration lacks `{name}`")))
}

fn profile_for(config: &RunConfig, frame: &GradedFrame) -> Result<WarpProfile, CliError> {
    Ok(WarpProfile::build(
        frame.degree(),
        need(config.epsilon, "epsilon")?,
    )?)
}

fn certify_options(config: &RunConfig) -> Result<CertifyOptions, CliError> {
    Ok(CertifyOptions {
        tol: need(config.tol, "tol")?,
        sectional: SectionalOptions {
            restarts: need(config.restarts, "restarts")?,
            seed: config.seed,
            ..Default::default()
        },
    })
}

/// Explicit grid from the flags, with `±ρ` inserted, or the default layout.
fn certify_grid(config: &RunConfig, profile: &WarpProfile) -> Vec<f64> {
    match config.grid {
        Some(g) => {
            let mut grid = uniform_grid(g.r_min, g.r_max, g.r_step);
            for edge in [-profile.rho, profile.rho] {
                if edge > g.r_min && edge < g.r_max {
                    grid.push(edge);
                }
            }
            grid.sort_by(f64::total_cmp);
            grid.dedup_by(|a, b| (*a - *b).abs() < 1e-12);
            grid
        }
        None => certification_grid(profile, 4.0),
    }
}

fn plain_grid(config: &RunConfig, profile: &WarpProfile) -> Vec<f64> {
    match config.grid {
        Some(g) => uniform_grid(g.r_min, g.r_max, g.r_step),
        None => uniform_grid(-profile.rho - 4.0, profile.rho + 4.0, 0.05),
    }
}

fn analyze(config: &RunConfig) -> Result<Outcome, CliError> {
    only_json(config)?;
    let l = load(config)?;
    let containment = bracket_level_check(&l.frame)?;
    let witness = kfold_bracket_witness(&l.frame)?;
    let result = AnalyzeResult {
        algebra: l.label,
        dim: l.frame.dim(),
        k: l.frame.degree(),
        series_dims: l.frame.series.dims(),
        level_dims: l.frame.level_dims(),
        levels: l.frame.levels.clone(),
        adapted_basis: matrix_columns(&l.frame.basis),
        jacobi_residual: l.algebra.jacobi_residual,
        bracket_constant: l.frame.bracket_constant(),
        containment,
        witness,
    };
    Ok(Outcome {
        body: json(config, result)?,
        status: Status::Success,
    })
}

fn profile(config: &RunConfig) -> Result<Outcome, CliError> {
    only_json(config)?;
    let l = load(config)?;
    let profile = profile_for(config, &l.frame)?;
    let grid = plain_grid(config, &profile);
    let (report, violation) = match profile_check(&profile, &grid) {
        Ok(r) => (Some(r), None),
        Err(e @ WarpError::ProfileViolation { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let passed = report.is_some();
    let result = ProfileResult {
        algebra: l.label,
        alpha: (1..=profile.k).map(|i| profile.alpha(i)).collect(),
        a: profile.a(),
        targets: [profile.lower_target(), -1.0],
        profile,
        grid: GridSummary::of(&grid),
        passed,
        report,
        violation,
    };
    Ok(Outcome {
        body: json(config, result)?,
        status: Status::from_pass(passed),
    })
}

fn curvature(config: &RunConfig) -> Result<Outcome, CliError> {
    only_json(config)?;
    let l = load(config)?;
    let profile = profile_for(config, &l.frame)?;
    let s = need(config.s, "s")?;
    let r = need(config.r, "r")?;
    let source = need(config.tensor, "tensor")?;
    let metric = FramedMetric::new(l.frame, profile, s)?;
    let tensor = match source {
        TensorSource::Oracle => full_curvature(&metric, r),
        TensorSource::ClosedForm => closed_form_curvature(&metric, r),
        TensorSource::Limit => limit_tensor(&metric, r),
        TensorSource::Intrinsic => gr_curvature(&metric, r),
    };
    let result = CurvatureResult {
        algebra: l.label,
        source,
        r,
        s,
        dim: tensor.dim(),
        levels: tensor.levels.clone(),
        index_order: "a,b,c,d row-major; R_abcd = <R(E_a,E_b)E_c,E_d>".into(),
        symmetry: tensor.symmetry_residuals(),
        max_off_pattern: tensor.max_off_pattern(),
        data: tensor.data().to_vec(),
    };
    Ok(Outcome {
        body: json(config, result)?,
        status: Status::Success,
    })
}

fn certify(config: &RunConfig) -> Result<Outcome, CliError> {
    let l = load(config)?;
    let profile = profile_for(config, &l.frame)?;
    let grid = certify_grid(config, &profile);
    let opts = certify_options(config)?;
    let (mut certificate, search) = match (config.s, config.s_max) {
        (Some(s), _) => {
            let metric = FramedMetric::new(l.frame, profile, s)?;
            (certify_pinching(&metric, &grid, &opts, &Parallel)?, None)
        }
        (None, Some(s_max)) => {
            let template = FramedMetric::new(l.frame, profile, 1.0)?;
            match find_s(&template, &grid, s_max, &opts, &Parallel) {
                Ok((s, cert)) => (
                    cert,
                    Some(SearchSummary {
                        s_max,
                        passing_s: Some(s),
                        blocking: None,
                    }),
                ),
                Err(CertifyError::ScaleExhausted {
                    s_max,
                    blocking,
                    last,
                }) => (
                    *last,
                    Some(SearchSummary {
                        s_max,
                        passing_s: None,
                        blocking: Some(blocking),
                    }),
                ),
                Err(e) => return Err(e.into()),
            }
        }
        (None, None) => return Err(CliError::Input("certify needs --s or --s-max".into())),
    };
    certificate.algebra = l.label;
    let status = Status::from_pass(certificate.passed());
    let body = match config.format {
        Format::Json => json(
            config,
            CertifyResult {
                certificate,
                search,
            },
        )?,
        Format::Csv => rows_csv(&certificate.rows)?,
    };
    Ok(Outcome { body, status })
}

fn sweep(config: &RunConfig) -> Result<Outcome, CliError> {
    let l = load(config)?;
    let eps_list = config
        .eps_list
        .clone()
        .ok_or_else(|| CliError::Input("configuration lacks `eps_list`".into()))?;
    check_eps_list(&eps_list)?;
    let s_max = need(config.s_max, "s_max")?;
    let opts = certify_options(config)?;
    let rows = eps_list
        .par_iter()
        .map(|&eps| sweep_row(&l.frame, eps, s_max, &opts, &Parallel))
        .collect::<Result<Vec<_>, _>>()?;
    let table = SweepTable {
        k: l.frame.degree(),
        tol: opts.tol,
        rows,
    };
    let status = Status::from_pass(table.rows.iter().all(|r| r.pass && r.within_bounds));
    let body = match config.format {
        Format::Csv => sweep_csv(&table)?,
        Format::Json => json(
            config,
            SweepResult {
                algebra: l.label,
                table,
            },
        )?,
    };
    Ok(Outcome { body, status })
}

fn oracle_check(config: &RunConfig) -> Result<Outcome, CliError> {
    only_json(config)?;
    let l = load(config)?;
    let profile = profile_for(config, &l.frame)?;
    let grid = match config.grid {
        Some(_) => plain_grid(config, &profile),
        None => certification_grid(&profile, 4.0),
    };
    let metric = FramedMetric::new(l.frame, profile, need(config.s, "s")?)?;
    let result = OracleResult {
        algebra: l.label,
        grid: GridSummary::of(&grid),
        discrepancy: compare_formulas(&metric, &grid),
    };
    Ok(Outcome {
        body: json(config, result)?,
        status: Status::Success,
    })
}

fn commutator(config: &RunConfig) -> Result<Outcome, CliError> {
    only_json(config)?;
    let size = need(config.size, "size")?;
    if !(2..=12).contains(&size) {
        return Err(CliError::Input(format!(
            "size must lie in 2..=12, got {size}"
        )));
    }
    let witness = unitriangular_commutator_check(size, need(config.trials, "trials")?, config.seed);
    let pass =
        witness.witness_nontrivial && witness.higher_commutators_trivial && witness.identity_holds;
    Ok(Outcome {
        body: json(config, CommutatorResult { witness })?,
        status: Status::from_pass(pass),
    })
}

/// Runs one resolved configuration.
pub fn execute(config: &RunConfig) -> Result<Outcome, CliError> {
    match config.command {
        CommandKind::Analyze => analyze(config),
        CommandKind::Profile => profile(config),
        CommandKind::Curvature => curvature(config),
        CommandKind::Certify => certify(config),
        CommandKind::Sweep => sweep(config),
        CommandKind::OracleCheck => oracle_check(config),
        CommandKind::Commutator => commutator(config),
    }
}

/// The configuration recorded in a JSON report.
pub fn config_from_report(path: &Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let value: serde_json::Value = serde_json::from_str(&text)?;
    let config = value
        .get("config")
        .cloned()
        .ok_or_else(|| CliError::Input(format!("{}: no `config` field", path.display())))?;
    Ok(serde_json::from_value(config)?)
}

fn write_output(body: &str, path: Option<&Path>) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|source| CliError::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            use std::io::Write;
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdout>"),
                    source,
                })
        }
    }
}

fn dispatch(cli: Cli) -> Result<Status, CliError> {
    let (config, destination) = match &cli.command {
        Command::Rerun(a) => (config_from_report(&a.report)?, a.output.clone()),
        other => {
            let config = resolve_config(other)?;
            let destination = config.output.clone();
            (config, destination)
        }
    };
    let outcome = execute(&config)?;
    write_output(&outcome.body, destination.as_deref())?;
    Ok(outcome.status)
}

fn resolve_config(command: &Command) -> Result<RunConfig, CliError> {
    config::resolve(command)
}

/// Entry point shared by the binary and the tests.
pub fn run_cli<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code().clamp(0, 2) as u8);
        }
    };
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status.exit_code()),
        Err(e) => {
            eprintln!("pinchwarp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
