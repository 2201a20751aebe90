//! Report bodies. Every JSON report is `{tool, config, ...result}`.

use pinchwarp_core::algebra::{CommutatorWitness, ContainmentReport, KFoldWitness};
use pinchwarp_core::certify::{PinchCertificate, RowRecord, SweepTable};
use pinchwarp_core::curvature::{DiscrepancyReport, SymmetryResiduals};
use pinchwarp_core::warp::ProfileReport;
use pinchwarp_core::{TensorSource, WarpProfile};
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

impl ToolInfo {
    pub fn current() -> Self {
        Self {
            name: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report<T> {
    pub tool: ToolInfo,
    pub config: RunConfig,
    #[serde(flatten)]
    pub result: T,
}

/// Radii actually evaluated.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSummary {
    pub r_min: f64,
    pub r_max: f64,
    pub points: usize,
}

impl GridSummary {
    pub fn of(grid: &[f64]) -> Self {
        Self {
            r_min: grid.first().copied().unwrap_or(0.0),
            r_max: grid.last().copied().unwrap_or(0.0),
            points: grid.len(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalyzeResult {
    pub algebra: String,
    pub dim: usize,
    pub k: usize,
    /// `dim L_1, …, dim L_k`, then the trailing zero.
    pub series_dims: Vec<usize>,
    pub level_dims: Vec<usize>,
    pub levels: Vec<usize>,
    /// Adapted basis vectors in the input coordinates.
    pub adapted_basis: Vec<Vec<f64>>,
    pub jacobi_residual: f64,
    pub bracket_constant: f64,
    pub containment: ContainmentReport,
    pub witness: KFoldWitness,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileResult {
    pub algebra: String,
    pub profile: WarpProfile,
    pub alpha: Vec<f64>,
    pub a: f64,
    pub targets: [f64; 2],
    pub grid: GridSummary,
    pub passed: bool,
    pub report: Option<ProfileReport>,
    pub violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureResult {
    pub algebra: String,
    pub source: TensorSource,
    pub r: f64,
    pub s: f64,
    pub dim: usize,
    /// Level of each index; 0 is the radial direction.
    pub levels: Vec<usize>,
    pub index_order: String,
    pub symmetry: SymmetryResiduals,
    pub max_off_pattern: f64,
    pub data: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub s_max: f64,
    /// First scale that passed, if any.
    pub passing_s: Option<f64>,
    pub blocking: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CertifyResult {
    #[serde(flatten)]
    pub certificate: PinchCertificate,
    pub search: Option<SearchSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub algebra: String,
    #[serde(flatten)]
    pub table: SweepTable,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub algebra: String,
    pub grid: GridSummary,
    #[serde(flatten)]
    pub discrepancy: DiscrepancyReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutatorResult {
    #[serde(flatten)]
    pub witness: CommutatorWitness,
}

/// Sweep CSV row; column order is part of the interface.
#[derive(Debug, Serialize)]
pub struct SweepCsvRow {
    pub epsilon: f64,
    pub s: Option<f64>,
    pub ratio: Option<f64>,
    pub k_squared: f64,
    pub pass: bool,
}

pub const SWEEP_CSV_HEADER: &str = "epsilon,s,ratio,k_squared,pass";

pub fn sweep_csv(table: &SweepTable) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &table.rows {
        w.serialize(SweepCsvRow {
            epsilon: row.epsilon,
            s: row.s,
            ratio: row.ratio,
            k_squared: row.k_squared,
            pass: row.pass && row.within_bounds,
        })?;
    }
    if table.rows.is_empty() {
        w.write_record(SWEEP_CSV_HEADER.split(','))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn rows_csv(rows: &[RowRecord]) -> Result<String, csv::Error> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["r", "lambda_min", "lambda_max", "sec_min", "sec_max"])?;
    for row in rows {
        w.serialize((
            row.r,
            row.lambda_min,
            row.lambda_max,
            row.sec_min,
            row.sec_max,
        ))?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}
