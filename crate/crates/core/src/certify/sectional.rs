//! Extremes of sectional curvature at one point.
//!
//! The eigen envelope of the curvature operator bounds every sectional
//! curvature (a sectional curvature is the Rayleigh quotient of the operator at
//! a unit decomposable bivector). Sampled extremes come from multi-start
//! ascent and descent over orthonormal pairs `(U, V)`, with steps taken in the
//! orthogonal complement of the current plane.

use alloc::vec;
use alloc::vec::Vec;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use super::CertifyError;
use crate::curvature::CurvatureTensor;
use crate::linalg;

/// Optimizer settings for sampled sectional extremes.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SectionalOptions {
    pub restarts: usize,
    /// Riemannian gradient norm at which a restart counts as converged.
    pub grad_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for SectionalOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            grad_tol: 1e-10,
            max_iter: 5000,
            seed: 0,
        }
    }
}

/// An orthonormal pair spanning a 2-plane.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Plane {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SectionalRange {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub sec_min: f64,
    pub sec_max: f64,
    pub argmin: Plane,
    pub argmax: Plane,
    /// Best extremes over the first half of the restarts.
    pub half_sec_min: f64,
    pub half_sec_max: f64,
    /// Restarts (out of `2 × restarts`) that reached the gradient tolerance.
    pub converged: usize,
}

/// Deterministic stream for `(seed, point, restart, direction)`.
fn stream(seed: u64, point: u64, restart: u64, direction: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&point.to_le_bytes());
    key[16..24].copy_from_slice(&restart.to_le_bytes());
    key[24..].copy_from_slice(&direction.to_le_bytes());
    ChaCha8Rng::from_seed(key)
}

fn random_unit_pair(rng: &mut impl RngCore, n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut draw = || {
        let x = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * x - 1.0
    };
    loop {
        let u: Vec<f64> = (0..n).map(|_| draw()).collect();
        let v: Vec<f64> = (0..n).map(|_| draw()).collect();
        if let Some(pair) = orthonormalize(&u, &v) {
            return pair;
        }
    }
}

/// QR retraction onto orthonormal pairs.
fn orthonormalize(u: &[f64], v: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
    let nu = linalg::norm(u);
    if nu < 1e-12 {
        return None;
    }
    let u: Vec<f64> = u.iter().map(|x| x / nu).collect();
    let mut w = v.to_vec();
    for _ in 0..2 {
        let p = linalg::dot(&w, &u);
        w.iter_mut().zip(&u).for_each(|(x, y)| *x -= p * y);
    }
    let nw = linalg::norm(&w);
    if nw < 1e-12 {
        return None;
    }
    w.iter_mut().for_each(|x| *x /= nw);
    Some((u, w))
}

/// `R(U, V, V, U)` as the quadratic form `wᵀ M w` of the curvature operator
/// at `w = U ∧ V`, with `M` scaled by `sign` so that climbs always ascend.
struct BivectorForm {
    n: usize,
    pairs: Vec<(usize, usize)>,
    op: Vec<f64>,
}

impl BivectorForm {
    fn new(t: &CurvatureTensor, op: &nalgebra::DMatrix<f64>, sign: f64) -> Self {
        let pairs = t.bivector_pairs();
        let m = pairs.len();
        let op = (0..m * m).map(|k| sign * op[(k / m, k % m)]).collect();
        Self {
            n: t.dim(),
            pairs,
            op,
        }
    }

    fn wedge(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.pairs
            .iter()
            .map(|&(a, b)| x[a] * y[b] - x[b] * y[a])
            .collect()
    }

    fn apply(&self, w: &[f64]) -> Vec<f64> {
        let m = self.pairs.len();
        (0..m)
            .map(|p| linalg::dot(&self.op[p * m..(p + 1) * m], w))
            .collect()
    }

    fn value(&self, u: &[f64], v: &[f64]) -> f64 {
        let w = self.wedge(u, v);
        linalg::dot(&w, &self.apply(&w))
    }
}

/// Orthonormal basis of the complement of `span{U, V}`, as columns.
fn complement(u: &[f64], v: &[f64]) -> Vec<Vec<f64>> {
    let n = u.len();
    let projector = nalgebra::DMatrix::from_fn(n, n, |i, j| {
        f64::from(u8::from(i == j)) - u[i] * u[j] - v[i] * v[j]
    });
    match linalg::symmetric_eigen(&projector) {
        Some((_, vectors)) => (2..n)
            .map(|c| vectors.column(c).iter().copied().collect())
            .collect(),
        None => Vec::new(),
    }
}

/// Gradient and Hessian at `B = 0` of `φ(B) = q(w) / |w|²` with
/// `w = (U + Q b₁) ∧ (V + Q b₂)`, the chart of 2-planes around `U ∧ V`.
/// Directions are ordered `b₁` then `b₂`.
fn local_model(
    form: &BivectorForm,
    u: &[f64],
    v: &[f64],
    q: &[Vec<f64>],
) -> (f64, Vec<f64>, nalgebra::DMatrix<f64>) {
    let c = q.len();
    let w0 = form.wedge(u, v);
    let mw0 = form.apply(&w0);
    let f0 = linalg::dot(&w0, &mw0);
    let lin: Vec<Vec<f64>> = q
        .iter()
        .map(|qi| form.wedge(qi, v))
        .chain(q.iter().map(|qj| form.wedge(u, qj)))
        .collect();
    let mlin: Vec<Vec<f64>> = lin.iter().map(|l| form.apply(l)).collect();
    let grad: Vec<f64> = lin.iter().map(|l| 2.0 * linalg::dot(&mw0, l)).collect();
    let mut hess = nalgebra::DMatrix::from_fn(2 * c, 2 * c, |k, l| {
        2.0 * (linalg::dot(&lin[k], &mlin[l]) - f0 * linalg::dot(&lin[k], &lin[l]))
    });
    for i in 0..c {
        for j in 0..c {
            let cross = 2.0 * linalg::dot(&mw0, &form.wedge(&q[i], &q[j]));
            hess[(i, c + j)] += cross;
            hess[(c + j, i)] += cross;
        }
    }
    (f0, grad, hess)
}

struct Climb {
    value: f64,
    plane: Plane,
    converged: bool,
}

/// Ascent from a random pair. Each step is the gradient preconditioned by the
/// Hessian of the local chart with eigenvalues clamped to the ascent side,
/// limited to unit length and backtracked until the Armijo condition holds.
fn climb(form: &BivectorForm, rng: &mut impl RngCore, opts: &SectionalOptions) -> Climb {
    let (mut u, mut v) = random_unit_pair(rng, form.n);
    let scale = 1.0 + linalg::max_abs(&form.op);
    let floor = 1e-12 * scale;
    let mut converged = false;
    let mut blind_steps = 0;
    let mut f = form.value(&u, &v);
    for _ in 0..opts.max_iter {
        let q = complement(&u, &v);
        let (f0, grad, hess) = local_model(form, &u, &v, &q);
        f = f0;
        let gnorm = linalg::norm(&grad);
        if gnorm < opts.grad_tol {
            converged = true;
            break;
        }
        let Some((values, vectors)) = linalg::symmetric_eigen(&hess) else {
            break;
        };
        let mut step = vec![0.0; grad.len()];
        for (k, &h) in values.iter().enumerate() {
            let e = vectors.column(k);
            let gk: f64 = e.iter().zip(&grad).map(|(a, b)| a * b).sum();
            let coef = gk / (-h).max(floor);
            step.iter_mut()
                .zip(e.iter())
                .for_each(|(s, x)| *s += coef * x);
        }
        let len = linalg::norm(&step);
        if len > 1.0 {
            step.iter_mut().for_each(|s| *s /= len);
        }
        let slope = linalg::dot(&grad, &step);
        // Predicted gain below the rounding of f: Armijo cannot tell, so the
        // full step is taken a bounded number of times in a row.
        let blind = slope <= 1e3 * f64::EPSILON * (1.0 + f.abs()) && blind_steps < 8;
        blind_steps = if blind { blind_steps + 1 } else { 0 };
        let c = q.len();
        let mut t = 1.0;
        let mut accepted = None;
        while t > 1e-12 {
            let cu: Vec<f64> = (0..form.n)
                .map(|a| u[a] + t * (0..c).map(|i| q[i][a] * step[i]).sum::<f64>())
                .collect();
            let cv: Vec<f64> = (0..form.n)
                .map(|a| v[a] + t * (0..c).map(|j| q[j][a] * step[c + j]).sum::<f64>())
                .collect();
            if let Some((nu, nv)) = orthonormalize(&cu, &cv) {
                let nf = form.value(&nu, &nv);
                if blind || nf >= f + 1e-4 * t * slope {
                    accepted = Some((nu, nv, nf));
                    break;
                }
            }
            t *= 0.5;
        }
        let Some((nu, nv, nf)) = accepted else {
            // No ascent left at machine precision.
            converged = gnorm < opts.grad_tol.max(1e-8);
            break;
        };
        u = nu;
        v = nv;
        f = nf;
    }
    Climb {
        value: f,
        plane: Plane { u, v },
        converged,
    }
}

/// Envelope and sampled extremes of sectional curvature of `t`; `point`
/// selects the random streams so that results do not depend on evaluation
/// order.
pub fn sectional_range(
    t: &CurvatureTensor,
    opts: &SectionalOptions,
    point: u64,
) -> Result<SectionalRange, CertifyError> {
    let op = t.curvature_operator();
    let (values, _) = linalg::symmetric_eigen(&op).ok_or(CertifyError::EigenFailure)?;
    let lower = BivectorForm::new(t, &op, -1.0);
    let upper = BivectorForm::new(t, &op, 1.0);
    let (lambda_min, lambda_max) = match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) if lo.is_finite() && hi.is_finite() => (lo, hi),
        _ => return Err(CertifyError::EigenFailure),
    };
    let mut best_min: Option<Climb> = None;
    let mut best_max: Option<Climb> = None;
    let mut half_min = f64::INFINITY;
    let mut half_max = f64::NEG_INFINITY;
    let mut converged = 0;
    let restarts = opts.restarts.max(1);
    for restart in 0..restarts {
        let mut lo = climb(
            &lower,
            &mut stream(opts.seed, point, restart as u64, 0),
            opts,
        );
        lo.value = -lo.value;
        let hi = climb(
            &upper,
            &mut stream(opts.seed, point, restart as u64, 1),
            opts,
        );
        converged += usize::from(lo.converged) + usize::from(hi.converged);
        if best_min.as_ref().is_none_or(|b| lo.value < b.value) {
            best_min = Some(lo);
        }
        if best_max.as_ref().is_none_or(|b| hi.value > b.value) {
            best_max = Some(hi);
        }
        if restart < restarts.div_ceil(2) {
            half_min = best_min.as_ref().unwrap().value;
            half_max = best_max.as_ref().unwrap().value;
        }
    }
    let (lo, hi) = (best_min.unwrap(), best_max.unwrap());
    Ok(SectionalRange {
        lambda_min,
        lambda_max,
        sec_min: lo.value,
        sec_max: hi.value,
        argmin: lo.plane,
        argmax: hi.plane,
        half_sec_min: half_min,
        half_sec_max: half_max,
        converged,
    })
}
