//! Curvature of `g = s² g_r + dr²` on `G × ℝ`.
//!
//! All tensors are expressed in the g-orthonormal frame `E₀ = ∂/∂r`,
//! `E_m = X_m / (s h_{lvl(m)}(r))`, where `X_m` is the adapted basis of the
//! [`GradedFrame`]. Index 0 is always the radial direction and `m + 1` the
//! `m`-th adapted basis vector.
//!
//! Three routes are provided:
//!
//! * [`full_curvature`]: the oracle. Koszul connection coefficients from the
//!   frame structure functions, then the frame curvature formula with the
//!   r-derivatives taken analytically.
//! * [`closed_form_curvature`]: assembled from the classical closed-form component
//!   formulas for this warped product, including the mixed `(∂r, Y, Y, Y)`
//!   expression that is known to be wrong and is flagged as untrusted.
//! * [`limit_tensor`]: the `s → ∞` limit, diagonal in coordinate planes.

mod tensor;

pub use tensor::{ComponentClass, CurvatureTensor, SymmetryResiduals, TensorSource};

use alloc::vec;
use alloc::vec::Vec;
use thiserror::Error;

use crate::algebra::GradedFrame;
use crate::warp::{LogDerivs, WarpProfile};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricError {
    #[error("profile built for k = {profile} but the algebra has nilpotency degree {frame}")]
    DegreeMismatch { profile: usize, frame: usize },
    #[error("scale s must be positive and finite, got {0}")]
    BadScale(f64),
}

/// The warped metric at a fixed scale `s`.
#[derive(Debug, Clone)]
pub struct FramedMetric {
    pub frame: GradedFrame,
    pub profile: WarpProfile,
    pub s: f64,
}

impl FramedMetric {
    pub fn new(frame: GradedFrame, profile: WarpProfile, s: f64) -> Result<Self, MetricError> {
        if profile.k != frame.degree() {
            return Err(MetricError::DegreeMismatch {
                profile: profile.k,
                frame: frame.degree(),
            });
        }
        if !(s > 0.0 && s.is_finite()) {
            return Err(MetricError::BadScale(s));
        }
        Ok(Self { frame, profile, s })
    }

    pub fn with_scale(&self, s: f64) -> Result<Self, MetricError> {
        Self::new(self.frame.clone(), self.profile, s)
    }

    /// Ambient dimension `n + 1`.
    pub fn ambient_dim(&self) -> usize {
        self.frame.dim() + 1
    }

    /// Level of each ambient index, 0 for the radial direction.
    pub fn ambient_levels(&self) -> Vec<usize> {
        core::iter::once(0)
            .chain(self.frame.levels.iter().copied())
            .collect()
    }

    fn log_derivs(&self, r: f64) -> Vec<LogDerivs> {
        self.frame
            .levels
            .iter()
            .map(|&l| self.profile.log_derivs(l, r))
            .collect()
    }

    /// `|Z|_{g_r}` for `Z` in adapted coordinates.
    pub fn gr_norm(&self, r: f64, z: &[f64]) -> f64 {
        let sq: f64 = z
            .iter()
            .zip(&self.frame.levels)
            .map(|(x, &l)| {
                let h = self.profile.eval_h(l, r).0;
                x * x * h * h
            })
            .sum();
        libm::sqrt(sq)
    }

    /// `|[Z, W]|_{g_r}` for `Z, W` in adapted coordinates.
    pub fn gr_bracket_norm(&self, r: f64, z: &[f64], w: &[f64]) -> f64 {
        self.gr_norm(r, &self.frame.bracket(z, w))
    }
}

/// Frame structure functions `[E_a, E_b] = Σ_c γ^c_{ab} E_c` and their
/// r-derivatives, stored at `(a * N + b) * N + c`.
#[derive(Debug, Clone)]
pub struct StructureTable {
    pub dim: usize,
    pub gamma: Vec<f64>,
    pub dgamma: Vec<f64>,
}

impl StructureTable {
    #[inline]
    pub fn get(&self, a: usize, b: usize, c: usize) -> f64 {
        self.gamma[(a * self.dim + b) * self.dim + c]
    }
}

/// `γ^m_{ij} = c^m_{ij} h_m / (s h_i h_j)` on algebra indices and
/// `γ^m_{0m} = -h_m'/h_m = u_m'`.
pub fn structure_functions(metric: &FramedMetric, r: f64) -> StructureTable {
    let n = metric.frame.dim();
    let big = n + 1;
    let d = metric.log_derivs(r);
    let mut gamma = vec![0.0; big * big * big];
    let mut dgamma = vec![0.0; big * big * big];
    let at = |a: usize, b: usize, c: usize| (a * big + b) * big + c;
    let consts = &metric.frame.consts;
    for i in 0..n {
        for j in 0..n {
            for (m, &c) in consts.basis_bracket(i, j).iter().enumerate() {
                if c == 0.0 {
                    continue;
                }
                let g = c * libm::exp(-d[m].u + d[i].u + d[j].u) / metric.s;
                gamma[at(i + 1, j + 1, m + 1)] = g;
                dgamma[at(i + 1, j + 1, m + 1)] = g * (-d[m].du + d[i].du + d[j].du);
            }
        }
    }
    for m in 0..n {
        gamma[at(0, m + 1, m + 1)] = d[m].du;
        gamma[at(m + 1, 0, m + 1)] = -d[m].du;
        dgamma[at(0, m + 1, m + 1)] = d[m].d2u;
        dgamma[at(m + 1, 0, m + 1)] = -d[m].d2u;
    }
    StructureTable {
        dim: big,
        gamma,
        dgamma,
    }
}

/// Koszul connection `Γ_{abc} = ⟨∇_{E_a} E_b, E_c⟩ = ½(γ^c_{ab} - γ^a_{bc} + γ^b_{ca})`
/// applied to a flat `N³` table.
fn koszul(dim: usize, gamma: &[f64]) -> Vec<f64> {
    let at = |a: usize, b: usize, c: usize| (a * dim + b) * dim + c;
    let mut out = vec![0.0; dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                out[at(a, b, c)] =
                    0.5 * (gamma[at(a, b, c)] - gamma[at(b, c, a)] + gamma[at(c, a, b)]);
            }
        }
    }
    out
}

/// Connection coefficients and their r-derivatives, `(Γ, ∂_r Γ)`.
pub fn connection(metric: &FramedMetric, r: f64) -> (Vec<f64>, Vec<f64>) {
    let t = structure_functions(metric, r);
    (koszul(t.dim, &t.gamma), koszul(t.dim, &t.dgamma))
}

/// `R_{abcd} = E_a(Γ_{bcd}) - E_b(Γ_{acd})
///           + Σ_e (Γ_{bce} Γ_{aed} - Γ_{ace} Γ_{bed} - γ^e_{ab} Γ_{ecd})`,
/// where only `E₀ = ∂/∂r` differentiates (all coefficients depend on `r` alone).
fn frame_curvature(dim: usize, gamma: &[f64], conn: &[f64], dconn: Option<&[f64]>) -> Vec<f64> {
    let at = |a: usize, b: usize, c: usize| (a * dim + b) * dim + c;
    let mut out = vec![0.0; dim * dim * dim * dim];
    for a in 0..dim {
        for b in 0..dim {
            for c in 0..dim {
                for d in 0..dim {
                    let mut v = 0.0;
                    if let Some(dc) = dconn {
                        if a == 0 {
                            v += dc[at(b, c, d)];
                        }
                        if b == 0 {
                            v -= dc[at(a, c, d)];
                        }
                    }
                    for e in 0..dim {
                        v += conn[at(b, c, e)] * conn[at(a, e, d)]
                            - conn[at(a, c, e)] * conn[at(b, e, d)]
                            - gamma[at(a, b, e)] * conn[at(e, c, d)];
                    }
                    out[((a * dim + b) * dim + c) * dim + d] = v;
                }
            }
        }
    }
    out
}

/// Oracle curvature tensor of `g` at radius `r`.
pub fn full_curvature(metric: &FramedMetric, r: f64) -> CurvatureTensor {
    let t = structure_functions(metric, r);
    let conn = koszul(t.dim, &t.gamma);
    let dconn = koszul(t.dim, &t.dgamma);
    let data = frame_curvature(t.dim, &t.gamma, &conn, Some(&dconn));
    CurvatureTensor::from_data(t.dim, data, TensorSource::Oracle, metric.ambient_levels())
}

/// Curvature of the left-invariant metric `g_r` on `G` alone, in the
/// `g_r`-orthonormal frame `X_m / h_{lvl(m)}(r)`.
pub fn gr_curvature(metric: &FramedMetric, r: f64) -> CurvatureTensor {
    let n = metric.frame.dim();
    let d = metric.log_derivs(r);
    let mut gamma = vec![0.0; n * n * n];
    for i in 0..n {
        for j in 0..n {
            for (m, &c) in metric.frame.consts.basis_bracket(i, j).iter().enumerate() {
                if c != 0.0 {
                    gamma[(i * n + j) * n + m] = c * libm::exp(-d[m].u + d[i].u + d[j].u);
                }
            }
        }
    }
    let conn = koszul(n, &gamma);
    let data = frame_curvature(n, &gamma, &conn, None);
    CurvatureTensor::from_data(
        n,
        data,
        TensorSource::Intrinsic,
        metric.frame.levels.clone(),
    )
}

/// Tensor assembled from the closed-form component formulas:
///
/// * `R(Y_i,Y_j,Y_j,Y_i) = R_{g_r}(Y_i,Y_j,Y_j,Y_i)/s² - h_i'h_j'/(h_i h_j)`,
/// * `R(Y_i,Y_j,Y_l,Y_m) = R_{g_r}(Y_i,Y_j,Y_l,Y_m)/s²` for `{i,j} ≠ {l,m}`,
/// * `R(Y_i,∂r,∂r,Y_j) = -δ_{ij} h_i''/h_i`,
/// * `R(∂r,Y_i,Y_j,Y_l) = (h_j'/2h_j + h_l'/2h_l)(⟨[Y_j,Y_i],Y_l⟩ + ⟨[Y_i,Y_l],Y_j⟩ + ⟨[Y_j,Y_l],Y_i⟩)`.
///
/// The last (mixed) family is not correct in general; components of class
/// [`ComponentClass::MixedRadial`] of this tensor must not be trusted.
pub fn closed_form_curvature(metric: &FramedMetric, r: f64) -> CurvatureTensor {
    let n = metric.frame.dim();
    let big = n + 1;
    let d = metric.log_derivs(r);
    let intrinsic = gr_curvature(metric, r);
    let t = structure_functions(metric, r);
    let inv_s2 = 1.0 / (metric.s * metric.s);
    // h'/h = -u' on ambient index a ≥ 1.
    let log_slope = |a: usize| -d[a - 1].du;
    let radial = |a: usize| -(d[a - 1].du * d[a - 1].du - d[a - 1].d2u);
    let mixed = |i: usize, j: usize, l: usize| -> f64 {
        0.5 * (log_slope(j) + log_slope(l)) * (t.get(j, i, l) + t.get(i, l, j) + t.get(j, l, i))
    };
    let mut tensor = CurvatureTensor::zeros(big, TensorSource::ClosedForm, metric.ambient_levels());
    for a in 0..big {
        for b in 0..big {
            for c in 0..big {
                for e in 0..big {
                    let zeros = [a, b, c, e].iter().filter(|&&x| x == 0).count();
                    let v = match zeros {
                        0 => {
                            let mut v = inv_s2 * intrinsic.get(a - 1, b - 1, c - 1, e - 1);
                            if a != b && a == e && b == c {
                                v -= log_slope(a) * log_slope(b);
                            } else if a != b && a == c && b == e {
                                v += log_slope(a) * log_slope(b);
                            }
                            v
                        }
                        1 => {
                            if a == 0 {
                                mixed(b, c, e)
                            } else if b == 0 {
                                -mixed(a, c, e)
                            } else if c == 0 {
                                mixed(e, a, b)
                            } else {
                                -mixed(c, a, b)
                            }
                        }
                        // Nonzero only as (i,0,0,i) and its antisymmetric images.
                        2 => match (a, b, c, e) {
                            (i, 0, 0, j) | (0, i, j, 0) if i == j => radial(i),
                            (i, 0, j, 0) | (0, i, 0, j) if i == j => -radial(i),
                            _ => 0.0,
                        },
                        _ => 0.0,
                    };
                    tensor.set(a, b, c, e, v);
                }
            }
        }
    }
    tensor
}

/// `s → ∞` limit: `R̄(Y_i,Y_j,Y_j,Y_i) = -h_i'h_j'/(h_i h_j)`,
/// `R̄(Y_i,∂r,∂r,Y_i) = -h_i''/h_i`, all other independent components zero.
pub fn limit_tensor(metric: &FramedMetric, r: f64) -> CurvatureTensor {
    let big = metric.ambient_dim();
    let d = metric.log_derivs(r);
    let mut tensor = CurvatureTensor::zeros(big, TensorSource::Limit, metric.ambient_levels());
    for a in 0..big {
        for b in a + 1..big {
            let sec = if a == 0 {
                -(d[b - 1].du * d[b - 1].du - d[b - 1].d2u)
            } else {
                -d[a - 1].du * d[b - 1].du
            };
            tensor.set_plane(a, b, sec);
        }
    }
    tensor
}

/// Largest `|oracle - closed form|` of one component class.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ClassDiscrepancy {
    pub class: ComponentClass,
    pub max_abs: f64,
    /// Worst radius.
    pub at_r: f64,
    /// False for the mixed radial class, whose closed form is known to be wrong.
    pub trusted: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiscrepancyReport {
    pub s: f64,
    pub classes: Vec<ClassDiscrepancy>,
    /// `max |oracle - limit|` over the grid at `s`.
    pub limit_deviation: f64,
    /// The same at `2s`.
    pub limit_deviation_doubled: f64,
    /// `limit_deviation_doubled / limit_deviation`; about ½ for O(1/s) decay.
    pub limit_decay_ratio: Option<f64>,
}

impl DiscrepancyReport {
    pub fn class(&self, class: ComponentClass) -> &ClassDiscrepancy {
        self.classes
            .iter()
            .find(|c| c.class == class)
            .expect("every class is reported")
    }
}

fn limit_deviation(metric: &FramedMetric, grid: &[f64]) -> f64 {
    grid.iter()
        .map(|&r| full_curvature(metric, r).max_abs_diff(&limit_tensor(metric, r)))
        .fold(0.0, f64::max)
}

pub fn compare_formulas(metric: &FramedMetric, grid: &[f64]) -> DiscrepancyReport {
    let mut classes: Vec<ClassDiscrepancy> = ComponentClass::ALL
        .iter()
        .map(|&class| ClassDiscrepancy {
            class,
            max_abs: 0.0,
            at_r: grid.first().copied().unwrap_or(0.0),
            trusted: class.trusted(),
        })
        .collect();
    for &r in grid {
        let oracle = full_curvature(metric, r);
        let closed = closed_form_curvature(metric, r);
        for (slot, dev) in classes.iter_mut().zip(oracle.class_deviation(&closed)) {
            if dev > slot.max_abs {
                slot.max_abs = dev;
                slot.at_r = r;
            }
        }
    }
    let dev = limit_deviation(metric, grid);
    let doubled = metric
        .with_scale(2.0 * metric.s)
        .map(|m| limit_deviation(&m, grid))
        .unwrap_or(f64::NAN);
    let limit_decay_ratio = (dev > 1e-14).then(|| doubled / dev);
    DiscrepancyReport {
        s: metric.s,
        classes,
        limit_deviation: dev,
        limit_deviation_doubled: doubled,
        limit_decay_ratio,
    }
}

#[cfg(test)]
mod tests;
