//! Pinching certificates for the warped metric.
//!
//! A certificate evaluates the oracle tensor on a radial grid, records the
//! curvature-operator eigen envelope and sampled sectional extremes at every
//! point, closes the two exponential tails against the limit tensor, and
//! compares the global envelope with the targets `[-(k+ε)², -1]`. The verdict
//! is decided by the envelope alone.

mod sectional;

pub use sectional::{sectional_range, Plane, SectionalOptions, SectionalRange};

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

use crate::algebra::GradedFrame;
use crate::curvature::{full_curvature, limit_tensor, ComponentClass, FramedMetric, MetricError};
use crate::linalg;
use crate::warp::{uniform_grid, WarpError, WarpProfile};

/// Number of outermost grid points per side used for the tail check.
pub const TAIL_POINTS: usize = 4;
/// Default certificate comparison tolerance.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Slack on the sandwich `λ_min ≤ sec_min ≤ sec_max ≤ λ_max`.
pub const SANDWICH_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("symmetric eigenvalue iteration failed")]
    EigenFailure,
    #[error(
        "{side} tail: |R - R̄| grows outward at r = {r} (component {component:?}); extend the grid"
    )]
    TailNotMonotone {
        side: TailSide,
        r: f64,
        component: [usize; 4],
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no scale s ≤ {s_max} passed; blocking: {blocking}")]
    ScaleExhausted {
        s_max: f64,
        blocking: String,
        /// Certificate at the largest scale tried.
        last: Box<PinchCertificate>,
    },
    #[error("all off-pattern components vanish; no decay to fit (exact-zero case)")]
    DegenerateFit,
    #[error("decay fit needs at least 5 geometric scales and r ≥ ρ: {0}")]
    BadDecayInput(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Warp(#[from] WarpError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum TailSide {
    Left,
    Right,
}

impl core::fmt::Display for TailSide {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(match self {
            TailSide::Left => "left",
            TailSide::Right => "right",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Verdict {
    Pass,
    Fail,
}

/// One radial sample of a certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RowRecord {
    pub r: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub sec_min: f64,
    pub sec_max: f64,
}

/// Per-point evidence kept alongside the row but not part of the row format.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RowDiagnostics {
    pub sandwich_ok: bool,
    pub half_sec_min: f64,
    pub half_sec_max: f64,
    pub converged: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluatedRow {
    pub row: RowRecord,
    pub diagnostics: RowDiagnostics,
}

/// Evaluates the oracle and its sectional range at grid point `index`.
pub fn evaluate_row(
    metric: &FramedMetric,
    r: f64,
    index: usize,
    opts: &SectionalOptions,
) -> Result<EvaluatedRow, CertifyError> {
    let tensor = full_curvature(metric, r);
    let range = sectional_range(&tensor, opts, index as u64)?;
    let sandwich_ok = range.lambda_min <= range.sec_min + SANDWICH_SLACK
        && range.sec_min <= range.sec_max + SANDWICH_SLACK
        && range.sec_max <= range.lambda_max + SANDWICH_SLACK;
    Ok(EvaluatedRow {
        row: RowRecord {
            r,
            lambda_min: range.lambda_min,
            lambda_max: range.lambda_max,
            sec_min: range.sec_min,
            sec_max: range.sec_max,
        },
        diagnostics: RowDiagnostics {
            sandwich_ok,
            half_sec_min: range.half_sec_min,
            half_sec_max: range.half_sec_max,
            converged: range.converged,
        },
    })
}

/// Strategy for evaluating all grid rows; implementations must return rows in
/// grid order and derive randomness from the grid index only.
pub trait RowEvaluator {
    fn evaluate(
        &self,
        metric: &FramedMetric,
        grid: &[f64],
        opts: &SectionalOptions,
    ) -> Result<Vec<EvaluatedRow>, CertifyError>;
}

/// Evaluates rows one after another.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl RowEvaluator for Sequential {
    fn evaluate(
        &self,
        metric: &FramedMetric,
        grid: &[f64],
        opts: &SectionalOptions,
    ) -> Result<Vec<EvaluatedRow>, CertifyError> {
        grid.iter()
            .enumerate()
            .map(|(i, &r)| evaluate_row(metric, r, i, opts))
            .collect()
    }
}

/// Default certification grid: spacing ≤ 0.05 on `[-ρ, ρ]`, 0.25 on tails of
/// length `tail`.
pub fn certification_grid(profile: &WarpProfile, tail: f64) -> Vec<f64> {
    let rho = profile.rho;
    let mut grid = uniform_grid(-rho - tail, -rho, 0.25);
    grid.pop();
    grid.extend(uniform_grid(-rho, rho, 0.05));
    grid.extend(uniform_grid(rho, rho + tail, 0.25).into_iter().skip(1));
    grid
}

fn check_grid(profile: &WarpProfile, grid: &[f64]) -> Result<(), CertifyError> {
    const MIN_TAIL: f64 = 4.0;
    const MAX_INNER_STEP: f64 = 0.1;
    const MAX_TAIL_STEP: f64 = 0.25;
    let rho = profile.rho;
    if grid.iter().any(|r| !r.is_finite()) || grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CertifyError::InvalidInput(
            "grid must be strictly increasing".into(),
        ));
    }
    let (Some(&lo), Some(&hi)) = (grid.first(), grid.last()) else {
        return Err(CertifyError::InvalidInput("grid is empty".into()));
    };
    if lo > -rho - MIN_TAIL + 1e-9 || hi < rho + MIN_TAIL - 1e-9 {
        return Err(CertifyError::InvalidInput(alloc::format!(
            "grid [{lo}, {hi}] must cover [-ρ-{MIN_TAIL}, ρ+{MIN_TAIL}] with ρ = {rho}"
        )));
    }
    for w in grid.windows(2) {
        let inner = w[1] > -rho && w[0] < rho;
        let limit = if inner { MAX_INNER_STEP } else { MAX_TAIL_STEP };
        if w[1] - w[0] > limit + 1e-9 {
            return Err(CertifyError::InvalidInput(alloc::format!(
                "spacing {} between {} and {} exceeds {limit}",
                w[1] - w[0],
                w[0],
                w[1]
            )));
        }
    }
    if !grid.iter().any(|&r| (r - rho).abs() < 1e-12)
        || !grid.iter().any(|&r| (r + rho).abs() < 1e-12)
    {
        return Err(CertifyError::InvalidInput("grid must contain ±ρ".into()));
    }
    let left = grid.iter().filter(|&&r| r <= -rho).count();
    let right = grid.iter().filter(|&&r| r >= rho).count();
    if left < TAIL_POINTS || right < TAIL_POINTS {
        return Err(CertifyError::InvalidInput(
            "need four grid points beyond each of ±ρ".into(),
        ));
    }
    Ok(())
}

/// Tail closure on one side of the ramp.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct TailReport {
    pub side: TailSide,
    /// Outermost grid points, innermost first.
    pub points: Vec<f64>,
    /// `max |R - R̄|` at each of `points`.
    pub deviation: Vec<f64>,
    /// Every component of `|R - R̄|` is non-increasing outward.
    pub monotone: bool,
    /// Envelope of `R̄` on this tail (constant in `r` there).
    pub limit_min: f64,
    pub limit_max: f64,
    pub limit_within_targets: bool,
}

fn tail_report(
    metric: &FramedMetric,
    side: TailSide,
    points: Vec<f64>,
    lower: f64,
    upper: f64,
) -> Result<TailReport, CertifyError> {
    let mut previous: Option<Vec<f64>> = None;
    let mut deviation = Vec::with_capacity(points.len());
    for &r in &points {
        let oracle = full_curvature(metric, r);
        let limit = limit_tensor(metric, r);
        let diff: Vec<f64> = oracle
            .data()
            .iter()
            .zip(limit.data())
            .map(|(a, b)| (a - b).abs())
            .collect();
        deviation.push(linalg::max_abs(&diff));
        if let Some(prev) = &previous {
            for (idx, (now, before)) in diff.iter().zip(prev).enumerate() {
                if *now > *before * (1.0 + 1e-9) + 1e-12 {
                    let n = oracle.dim();
                    let component = [
                        idx / (n * n * n),
                        (idx / (n * n)) % n,
                        (idx / n) % n,
                        idx % n,
                    ];
                    return Err(CertifyError::TailNotMonotone { side, r, component });
                }
            }
        }
        previous = Some(diff);
    }
    let outer = *points.last().expect("tail has points");
    let limit = limit_tensor(metric, outer);
    let (values, _) =
        linalg::symmetric_eigen(&limit.curvature_operator()).ok_or(CertifyError::EigenFailure)?;
    let limit_min = values[0];
    let limit_max = values[values.len() - 1];
    Ok(TailReport {
        side,
        points,
        deviation,
        monotone: true,
        limit_min,
        limit_max,
        limit_within_targets: limit_min >= lower && limit_max <= upper,
    })
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Tails {
    pub left: TailReport,
    pub right: TailReport,
}

impl Tails {
    pub fn iter(&self) -> impl Iterator<Item = &TailReport> {
        [&self.left, &self.right].into_iter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GlobalBounds {
    /// Smallest eigen-envelope value over grid and tails.
    pub min: f64,
    /// Largest eigen-envelope value over grid and tails.
    pub max: f64,
    /// `|min| / |max|`.
    pub ratio: f64,
    pub sampled_min: f64,
    pub sampled_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Targets {
    pub lower: f64,
    pub upper: f64,
}

/// Which tensor the certificate rests on, and which closed-form component
/// families were kept out of it.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Provenance {
    pub curvature_source: crate::curvature::TensorSource,
    pub bound: String,
    pub untrusted_classes: Vec<ComponentClass>,
}

impl Default for Provenance {
    fn default() -> Self {
        Self {
            curvature_source: crate::curvature::TensorSource::Oracle,
            bound: "curvature-operator eigen envelope".into(),
            untrusted_classes: alloc::vec![ComponentClass::MixedRadial],
        }
    }
}

/// Evidence about the sampled extremes; does not affect the verdict.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SamplingReport {
    pub restarts: usize,
    pub seed: u64,
    /// Every row satisfied `λ_min ≤ sec_min ≤ sec_max ≤ λ_max`.
    pub sandwich_ok: bool,
    /// Largest gap between the best of the first half of the restarts and the
    /// best of all of them.
    pub restart_gap: f64,
    pub converged: usize,
    pub attempted: usize,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PinchCertificate {
    pub algebra: String,
    pub k: usize,
    pub epsilon: f64,
    pub rho: f64,
    pub s: f64,
    pub tol: f64,
    pub targets: Targets,
    pub rows: Vec<RowRecord>,
    pub tails: Tails,
    pub global: GlobalBounds,
    /// `k²`: no metric on this space has pinching below it.
    pub theoretical_lower_bound: f64,
    pub sampling: SamplingReport,
    pub provenance: Provenance,
    pub verdict: Verdict,
}

impl PinchCertificate {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    /// Short description of what keeps a failing certificate from passing.
    pub fn blocking(&self) -> String {
        let worst_hi = self
            .rows
            .iter()
            .max_by(|a, b| a.lambda_max.total_cmp(&b.lambda_max));
        let worst_lo = self
            .rows
            .iter()
            .min_by(|a, b| a.lambda_min.total_cmp(&b.lambda_min));
        let mut out = String::new();
        if self.global.max > self.targets.upper + self.tol {
            if let Some(row) = worst_hi {
                out += &alloc::format!(
                    "upper bound: λ_max = {} > {} at r = {}",
                    row.lambda_max,
                    self.targets.upper,
                    row.r
                );
            }
        }
        if self.global.min < self.targets.lower - self.tol {
            if let Some(row) = worst_lo {
                if !out.is_empty() {
                    out += "; ";
                }
                out += &alloc::format!(
                    "lower bound: λ_min = {} < {} at r = {}",
                    row.lambda_min,
                    self.targets.lower,
                    row.r
                );
            }
        }
        for t in self.tails.iter() {
            if !t.limit_within_targets {
                if !out.is_empty() {
                    out += "; ";
                }
                out += &alloc::format!("{} tail limit envelope outside targets", t.side);
            }
        }
        if out.is_empty() {
            out += "none";
        }
        out
    }
}

/// Certificate settings shared by every scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CertifyOptions {
    pub tol: f64,
    pub sectional: SectionalOptions,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            sectional: SectionalOptions::default(),
        }
    }
}

pub fn certify_pinching(
    metric: &FramedMetric,
    grid: &[f64],
    opts: &CertifyOptions,
    evaluator: &impl RowEvaluator,
) -> Result<PinchCertificate, CertifyError> {
    let profile = metric.profile;
    check_grid(&profile, grid)?;
    if !opts.tol.is_finite() || opts.tol < 0.0 {
        return Err(CertifyError::InvalidInput(
            "tolerance must be non-negative".into(),
        ));
    }
    let targets = Targets {
        lower: profile.lower_target(),
        upper: -1.0,
    };
    let evaluated = evaluator.evaluate(metric, grid, &opts.sectional)?;

    let rho = profile.rho;
    let mut left: Vec<f64> = grid[..TAIL_POINTS].to_vec();
    left.reverse();
    let right = grid[grid.len() - TAIL_POINTS..].to_vec();
    let tails = Tails {
        left: tail_report(
            metric,
            TailSide::Left,
            left,
            targets.lower - opts.tol,
            targets.upper + opts.tol,
        )?,
        right: tail_report(
            metric,
            TailSide::Right,
            right,
            targets.lower - opts.tol,
            targets.upper + opts.tol,
        )?,
    };

    let rows: Vec<RowRecord> = evaluated.iter().map(|e| e.row).collect();
    let mut global = GlobalBounds {
        min: f64::INFINITY,
        max: f64::NEG_INFINITY,
        ratio: 0.0,
        sampled_min: f64::INFINITY,
        sampled_max: f64::NEG_INFINITY,
    };
    for row in &rows {
        global.min = global.min.min(row.lambda_min);
        global.max = global.max.max(row.lambda_max);
        global.sampled_min = global.sampled_min.min(row.sec_min);
        global.sampled_max = global.sampled_max.max(row.sec_max);
    }
    for t in tails.iter() {
        global.min = global.min.min(t.limit_min);
        global.max = global.max.max(t.limit_max);
    }
    global.ratio = if global.max < 0.0 {
        global.min.abs() / global.max.abs()
    } else {
        f64::MAX
    };

    let sampling = SamplingReport {
        restarts: opts.sectional.restarts,
        seed: opts.sectional.seed,
        sandwich_ok: evaluated.iter().all(|e| e.diagnostics.sandwich_ok),
        restart_gap: evaluated
            .iter()
            .map(|e| {
                (e.diagnostics.half_sec_min - e.row.sec_min)
                    .abs()
                    .max((e.diagnostics.half_sec_max - e.row.sec_max).abs())
            })
            .fold(0.0, f64::max),
        converged: evaluated.iter().map(|e| e.diagnostics.converged).sum(),
        attempted: evaluated.len() * 2 * opts.sectional.restarts.max(1),
    };

    let pass = global.min >= targets.lower - opts.tol
        && global.max <= targets.upper + opts.tol
        && tails.iter().all(|t| t.monotone && t.limit_within_targets);
    Ok(PinchCertificate {
        algebra: String::new(),
        k: profile.k,
        epsilon: profile.epsilon,
        rho,
        s: metric.s,
        tol: opts.tol,
        targets,
        rows,
        tails,
        global,
        theoretical_lower_bound: (profile.k * profile.k) as f64,
        sampling,
        provenance: Provenance::default(),
        verdict: if pass { Verdict::Pass } else { Verdict::Fail },
    })
}

/// Doubles `s` from 1 until a certificate passes or `s_max` is exceeded.
pub fn find_s(
    template: &FramedMetric,
    grid: &[f64],
    s_max: f64,
    opts: &CertifyOptions,
    evaluator: &impl RowEvaluator,
) -> Result<(f64, PinchCertificate), CertifyError> {
    if !(1.0..=(1u64 << 20) as f64).contains(&s_max) {
        return Err(CertifyError::InvalidInput(alloc::format!(
            "s_max must lie in [1, 2^20], got {s_max}"
        )));
    }
    let mut s = 1.0;
    loop {
        let cert = certify_pinching(&template.with_scale(s)?, grid, opts, evaluator)?;
        if cert.passed() {
            return Ok((s, cert));
        }
        if 2.0 * s > s_max {
            return Err(CertifyError::ScaleExhausted {
                s_max,
                blocking: cert.blocking(),
                last: Box::new(cert),
            });
        }
        s *= 2.0;
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub epsilon: f64,
    /// First passing scale, or `None` when the search was exhausted.
    pub s: Option<f64>,
    pub ratio: Option<f64>,
    pub k_squared: f64,
    pub pass: bool,
    /// `ratio ∈ [k² - tol, (k+ε)² + tol]`.
    pub within_bounds: bool,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepTable {
    pub k: usize,
    pub tol: f64,
    pub rows: Vec<SweepRow>,
}

/// One sweep row: [`find_s`] at `epsilon` on the default grid. Only
/// `ScaleExhausted` is folded into the row; other errors propagate.
pub fn sweep_row(
    frame: &GradedFrame,
    epsilon: f64,
    s_max: f64,
    opts: &CertifyOptions,
    evaluator: &impl RowEvaluator,
) -> Result<SweepRow, CertifyError> {
    let k = frame.degree();
    let k_squared = (k * k) as f64;
    let profile = WarpProfile::build(k, epsilon)?;
    let template = FramedMetric::new(frame.clone(), profile, 1.0)?;
    let grid = certification_grid(&profile, 4.0);
    match find_s(&template, &grid, s_max, opts, evaluator) {
        Ok((s, cert)) => {
            let upper = (k as f64 + epsilon) * (k as f64 + epsilon);
            let ratio = cert.global.ratio;
            Ok(SweepRow {
                epsilon,
                s: Some(s),
                ratio: Some(ratio),
                k_squared,
                pass: true,
                within_bounds: ratio >= k_squared - opts.tol && ratio <= upper + opts.tol,
                error: None,
            })
        }
        Err(e @ CertifyError::ScaleExhausted { .. }) => Ok(SweepRow {
            epsilon,
            s: None,
            ratio: None,
            k_squared,
            pass: false,
            within_bounds: false,
            error: Some(alloc::format!("{e}")),
        }),
        Err(e) => Err(e),
    }
}

pub fn check_eps_list(eps_list: &[f64]) -> Result<(), CertifyError> {
    if eps_list.is_empty()
        || eps_list.iter().any(|&e| !e.is_finite() || e <= 0.0)
        || eps_list.windows(2).any(|w| w[1] >= w[0])
    {
        return Err(CertifyError::InvalidInput(
            "epsilon list must be non-empty, positive and strictly descending".into(),
        ));
    }
    Ok(())
}

/// Runs [`sweep_row`] for each `ε` in turn.
pub fn epsilon_sweep(
    frame: &GradedFrame,
    eps_list: &[f64],
    s_max: f64,
    opts: &CertifyOptions,
    evaluator: &impl RowEvaluator,
) -> Result<SweepTable, CertifyError> {
    check_eps_list(eps_list)?;
    let rows = eps_list
        .iter()
        .map(|&e| sweep_row(frame, e, s_max, opts, evaluator))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepTable {
        k: frame.degree(),
        tol: opts.tol,
        rows,
    })
}

/// Least-squares fit of `log max|off-pattern component|` against `log s`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DecayFit {
    pub r: f64,
    pub scales: Vec<f64>,
    pub off_pattern: Vec<f64>,
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit in log space.
    pub residual: f64,
}

pub fn s_decay_check(
    template: &FramedMetric,
    scales: &[f64],
    r: f64,
) -> Result<DecayFit, CertifyError> {
    if scales.len() < 5 {
        return Err(CertifyError::BadDecayInput(alloc::format!(
            "{} scales given",
            scales.len()
        )));
    }
    let q = scales[1] / scales[0];
    let geometric = q > 1.0
        && scales.iter().all(|&s| s > 0.0)
        && scales
            .windows(2)
            .all(|w| ((w[1] / w[0]) - q).abs() <= 1e-9 * q);
    if !geometric {
        return Err(CertifyError::BadDecayInput(
            "scales are not an increasing geometric sequence".into(),
        ));
    }
    if r < template.profile.rho {
        return Err(CertifyError::BadDecayInput(alloc::format!(
            "r = {r} is below ρ = {}",
            template.profile.rho
        )));
    }
    let mut off_pattern = Vec::with_capacity(scales.len());
    for &s in scales {
        off_pattern.push(full_curvature(&template.with_scale(s)?, r).max_off_pattern());
    }
    if off_pattern.iter().all(|&v| v < 1e-14) {
        return Err(CertifyError::DegenerateFit);
    }
    let xs: Vec<f64> = scales.iter().map(|&s| libm::log(s)).collect();
    let ys: Vec<f64> = off_pattern
        .iter()
        .map(|&v| libm::log(v.max(f64::MIN_POSITIVE)))
        .collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    Ok(DecayFit {
        r,
        scales: scales.to_vec(),
        off_pattern,
        slope,
        intercept,
        residual: libm::sqrt(sse / n),
    })
}
