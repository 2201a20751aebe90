//! Nilpotent Lie algebras given by structure constants.
//!
//! Input is a [`LieAlgebraSpec`]: a dimension, a sparse list of bracket
//! coefficients and a base inner product `⟨·,·⟩₀`. [`validate`] completes
//! antisymmetry and measures the Jacobi residual; [`lower_central_series`] and
//! [`graded_frame`] then produce the graded, `⟨·,·⟩₀`-orthonormal frame that
//! the warped metric is built on.

mod builtin;
mod random;
mod series;
mod unitriangular;

pub use builtin::{builtin, hall_basis, hall_word_string, HallWord};
pub use random::random_nilpotent;
pub use series::{
    bracket_level_check, graded_frame, kfold_bracket_witness, lower_central_series,
    ContainmentEntry, ContainmentReport, GradedFrame, KFoldWitness, LowerCentralSeries,
};
pub use unitriangular::{
    group_commutator, unitriangular_commutator_check, CommutatorWitness, IntMatrix,
};

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use nalgebra::DMatrix;
use thiserror::Error;

/// One bracket coefficient: the `X_m` component of `[X_i, X_j]` (0-based).
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub m: usize,
    pub value: f64,
}

/// Raw algebra description, prior to validation.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct LieAlgebraSpec {
    pub dim: usize,
    pub brackets: Vec<BracketEntry>,
    /// Row-major `dim × dim` Gram matrix of `⟨·,·⟩₀`; identity when absent.
    pub inner0: Option<Vec<f64>>,
}

impl LieAlgebraSpec {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            brackets: Vec::new(),
            inner0: None,
        }
    }

    /// Adds `[X_i, X_j] ∋ value · X_m` (0-based).
    pub fn with_bracket(mut self, i: usize, j: usize, m: usize, value: f64) -> Self {
        self.brackets.push(BracketEntry { i, j, m, value });
        self
    }

    pub fn with_inner0(mut self, gram: Vec<f64>) -> Self {
        self.inner0 = Some(gram);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("algebra dimension must be at least 1")]
    EmptyAlgebra,
    #[error("bracket index out of range: ({i}, {j}, {m}) for dimension {dim}")]
    IndexError {
        i: usize,
        j: usize,
        m: usize,
        dim: usize,
    },
    #[error("bracket entries for ({i}, {j}, {m}) are not antisymmetric")]
    AntisymmetryConflict { i: usize, j: usize, m: usize },
    #[error(
        "Jacobi identity fails on ({i}, {j}, {l}): residual {residual:e} exceeds {tolerance:e}"
    )]
    JacobiViolation {
        i: usize,
        j: usize,
        l: usize,
        residual: f64,
        tolerance: f64,
    },
    #[error("inner product is not symmetric positive definite: {0}")]
    BadInnerProduct(String),
    #[error("lower central series stabilizes at dimension {stable_dim}; algebra is not nilpotent")]
    NotNilpotent { stable_dim: usize },
    #[error("[F_{i}, F_{j}] reaches only level {depth}, below {i} + {j}")]
    ContainmentViolation { i: usize, j: usize, depth: usize },
    #[error("no nonzero {0}-fold bracket of generators found")]
    WitnessNotFound(usize),
    #[error("unknown builtin algebra `{0}`")]
    UnknownBuiltin(String),
}

/// Dense structure constants: `get(i, j, m)` is the `X_m` coefficient of
/// `[X_i, X_j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureConstants {
    dim: usize,
    data: Vec<f64>,
}

impl StructureConstants {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim * dim],
        }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    fn idx(&self, i: usize, j: usize, m: usize) -> usize {
        (i * self.dim + j) * self.dim + m
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, m: usize) -> f64 {
        self.data[self.idx(i, j, m)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, m: usize, v: f64) {
        let k = self.idx(i, j, m);
        self.data[k] = v;
    }

    /// Coefficients of `[X_i, X_j]`.
    pub fn basis_bracket(&self, i: usize, j: usize) -> &[f64] {
        let start = self.idx(i, j, 0);
        &self.data[start..start + self.dim]
    }

    /// Bracket of two coordinate vectors.
    pub fn bracket(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0.0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0.0 {
                    continue;
                }
                let w = xi * yj;
                for (o, c) in out.iter_mut().zip(self.basis_bracket(i, j)) {
                    *o += w * c;
                }
            }
        }
        out
    }

    pub fn max_abs(&self) -> f64 {
        crate::linalg::max_abs(&self.data)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&c| c == 0.0)
    }

    /// Nonzero entries `(i, j, m, value)` with `i < j`.
    pub fn entries(&self) -> Vec<BracketEntry> {
        let mut out = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for m in 0..self.dim {
                    let value = self.get(i, j, m);
                    if value != 0.0 {
                        out.push(BracketEntry { i, j, m, value });
                    }
                }
            }
        }
        out
    }

    /// Max-norm of the Jacobiator over all basis triples, with the worst triple.
    pub fn jacobi_residual(&self) -> (f64, (usize, usize, usize)) {
        let n = self.dim;
        let mut worst = 0.0;
        let mut at = (0, 0, 0);
        let mut term = vec![0.0; n];
        for i in 0..n {
            for j in i + 1..n {
                for l in j + 1..n {
                    term.iter_mut().for_each(|t| *t = 0.0);
                    for (a, b, c) in [(i, j, l), (j, l, i), (l, i, j)] {
                        // [[X_a, X_b], X_c]
                        for p in 0..n {
                            let cab = self.get(a, b, p);
                            if cab == 0.0 {
                                continue;
                            }
                            for (t, v) in term.iter_mut().zip(self.basis_bracket(p, c)) {
                                *t += cab * v;
                            }
                        }
                    }
                    let r = crate::linalg::max_abs(&term);
                    if r > worst {
                        worst = r;
                        at = (i, j, l);
                    }
                }
            }
        }
        (worst, at)
    }
}

/// An algebra whose structure constants passed validation.
#[derive(Debug, Clone)]
pub struct ValidatedAlgebra {
    pub consts: StructureConstants,
    pub inner0: DMatrix<f64>,
    pub jacobi_residual: f64,
    /// All coefficients are integers, so the Jacobi residual was computed
    /// exactly.
    pub exact: bool,
}

impl ValidatedAlgebra {
    pub fn dim(&self) -> usize {
        self.consts.dim()
    }
}

/// Acceptance threshold for the Jacobi residual.
pub fn jacobi_tolerance(max_coefficient: f64) -> f64 {
    1e-10 * (1.0 + max_coefficient) * (1.0 + max_coefficient)
}

pub fn validate(spec: &LieAlgebraSpec) -> Result<ValidatedAlgebra, AlgebraError> {
    let n = spec.dim;
    if n == 0 {
        return Err(AlgebraError::EmptyAlgebra);
    }
    let mut consts = StructureConstants::zeros(n);
    let mut given = vec![false; n * n * n];
    for e in &spec.brackets {
        let BracketEntry { i, j, m, value } = *e;
        if i >= n || j >= n || m >= n {
            return Err(AlgebraError::IndexError { i, j, m, dim: n });
        }
        if i == j {
            if value != 0.0 {
                return Err(AlgebraError::AntisymmetryConflict { i, j, m });
            }
            continue;
        }
        for (a, b, v) in [(i, j, value), (j, i, -value)] {
            let k = consts.idx(a, b, m);
            if given[k] && consts.data[k] != v {
                return Err(AlgebraError::AntisymmetryConflict { i, j, m });
            }
            given[k] = true;
            consts.data[k] = v;
        }
    }

    let exact = consts
        .data
        .iter()
        .all(|c| libm::trunc(*c) == *c && c.abs() < 1e6);
    let (residual, (i, j, l)) = consts.jacobi_residual();
    let tolerance = jacobi_tolerance(consts.max_abs());
    if residual >= tolerance {
        return Err(AlgebraError::JacobiViolation {
            i,
            j,
            l,
            residual,
            tolerance,
        });
    }

    let inner0 = check_inner(n, spec.inner0.as_deref())?;
    Ok(ValidatedAlgebra {
        consts,
        inner0,
        jacobi_residual: residual,
        exact,
    })
}

fn check_inner(n: usize, gram: Option<&[f64]>) -> Result<DMatrix<f64>, AlgebraError> {
    let Some(gram) = gram else {
        return Ok(DMatrix::identity(n, n));
    };
    if gram.len() != n * n {
        return Err(AlgebraError::BadInnerProduct(alloc::format!(
            "expected {} entries, got {}",
            n * n,
            gram.len()
        )));
    }
    let m = DMatrix::from_row_slice(n, n, gram);
    let scale = m.amax().max(f64::MIN_POSITIVE);
    if (&m - m.transpose()).amax() > 1e-12 * scale {
        return Err(AlgebraError::BadInnerProduct(
            "matrix is not symmetric".into(),
        ));
    }
    let (values, _) = crate::linalg::symmetric_eigen(&m)
        .ok_or_else(|| AlgebraError::BadInnerProduct("eigenvalue iteration failed".into()))?;
    if values[0] <= 0.0 || values[0] <= 1e-14 * scale {
        return Err(AlgebraError::BadInnerProduct(alloc::format!(
            "smallest eigenvalue {:e} is not positive",
            values[0]
        )));
    }
    Ok(m)
}
