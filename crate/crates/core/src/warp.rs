//! Warping functions `h_i(r) = e^{-u_i(r)}`.
//!
//! Outside `[-ρ, ρ]` the profile is exponential: `h_i = e^{-i r}` for `r ≥ ρ`
//! and `h_i = e^{-k r}` for `r ≤ -ρ`. Inside, `u_i'` moves from `k` to `i`
//! along a quintic smoothstep `σ(x) = 6x⁵ - 15x⁴ + 10x³`, `x = (r + ρ)/2ρ`.
//! Because `σ' = σ'' = 0` at both ends, `h_i` is C³ across `±ρ`; because
//! `∫₀¹ σ = 1/2`, integrating from `u_i(-ρ) = -kρ` lands on `u_i(ρ) = iρ`.

use alloc::string::String;
use alloc::vec::Vec;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WarpError {
    #[error("invalid warp parameter: {0}")]
    InvalidParameter(String),
    #[error("profile check `{condition}` failed at level {level}, r = {r}: {detail}")]
    ProfileViolation {
        condition: &'static str,
        level: usize,
        r: f64,
        detail: String,
    },
    #[error("grid must cover [-ρ-{min_tail}, ρ+{min_tail}]")]
    GridTooShort { min_tail: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Ramp {
    Quintic,
}

/// Warping profile for a `k`-step algebra.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WarpProfile {
    pub k: usize,
    pub epsilon: f64,
    pub rho: f64,
    pub ramp: Ramp,
}

/// `u = -ln h` and its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDerivs {
    pub u: f64,
    pub du: f64,
    pub d2u: f64,
}

fn smoothstep(x: f64) -> f64 {
    x * x * x * (10.0 + x * (-15.0 + 6.0 * x))
}

fn smoothstep_d(x: f64) -> f64 {
    30.0 * x * x * (1.0 - x) * (1.0 - x)
}

/// `∫₀ˣ σ`.
fn smoothstep_integral(x: f64) -> f64 {
    x * x * x * x * (2.5 + x * (-3.0 + x))
}

/// Smallest ramp half-width keeping `|u_i''| ≤ 2kε`.
pub fn min_rho(epsilon: f64) -> f64 {
    15.0 / (32.0 * epsilon)
}

impl WarpProfile {
    /// Profile with `ρ = max(2, 15/(32ε))`.
    pub fn build(k: usize, epsilon: f64) -> Result<Self, WarpError> {
        Self::with_rho(k, epsilon, min_rho(epsilon).max(2.0))
    }

    /// Profile with an explicit ramp half-width, which may violate the
    /// curvature bounds.
    pub fn with_rho(k: usize, epsilon: f64, rho: f64) -> Result<Self, WarpError> {
        if k == 0 {
            return Err(WarpError::InvalidParameter("k must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(WarpError::InvalidParameter(
                "epsilon must be positive".into(),
            ));
        }
        if !(rho > 0.0 && rho.is_finite()) {
            return Err(WarpError::InvalidParameter("rho must be positive".into()));
        }
        Ok(Self {
            k,
            epsilon,
            rho,
            ramp: Ramp::Quintic,
        })
    }

    /// `α_i = i`.
    pub fn alpha(&self, level: usize) -> f64 {
        level as f64
    }

    /// Exponent on the `r ≤ -ρ` side, `a = k`.
    pub fn a(&self) -> f64 {
        self.k as f64
    }

    /// Lower sectional-curvature target `-(k + ε)²`.
    pub fn lower_target(&self) -> f64 {
        let t = self.k as f64 + self.epsilon;
        -t * t
    }

    pub fn log_derivs(&self, level: usize, r: f64) -> LogDerivs {
        debug_assert!((1..=self.k).contains(&level));
        let alpha = self.alpha(level);
        let a = self.a();
        let rho = self.rho;
        if r >= rho {
            return LogDerivs {
                u: alpha * r,
                du: alpha,
                d2u: 0.0,
            };
        }
        if r <= -rho {
            return LogDerivs {
                u: a * r,
                du: a,
                d2u: 0.0,
            };
        }
        let x = (r + rho) / (2.0 * rho);
        let delta = alpha - a;
        LogDerivs {
            u: a * r + delta * 2.0 * rho * smoothstep_integral(x),
            du: a + delta * smoothstep(x),
            d2u: delta * smoothstep_d(x) / (2.0 * rho),
        }
    }

    /// `(h, h', h'')` with `h'' = (u'² - u'') e^{-u}`.
    pub fn eval_h(&self, level: usize, r: f64) -> (f64, f64, f64) {
        let LogDerivs { u, du, d2u } = self.log_derivs(level, r);
        let h = libm::exp(-u);
        (h, -du * h, (du * du - d2u) * h)
    }

    /// Bound on `|u_i''|` implied by `ρ`: `(k - 1) · (15/8) / 2ρ`.
    pub fn max_second_log_derivative(&self) -> f64 {
        (self.a() - 1.0) * 15.0 / 8.0 / (2.0 * self.rho)
    }
}

/// Outcome of [`profile_check`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ProfileReport {
    pub points: usize,
    pub max_abs_d2u: f64,
    pub d2u_bound: f64,
    /// Largest `Σ_{s ≥ i+j} h_s / (k h_i h_j)` over grid points `r ≥ ρ`.
    pub max_summation_ratio: f64,
    pub summation_pairs_checked: usize,
}

/// Checks sign, log-derivative and summation conditions of `profile` on `grid`.
pub fn profile_check(profile: &WarpProfile, grid: &[f64]) -> Result<ProfileReport, WarpError> {
    const MIN_TAIL: f64 = 2.0;
    let lo = grid.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = grid.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if lo > -profile.rho - MIN_TAIL + 1e-12 || hi < profile.rho + MIN_TAIL - 1e-12 {
        return Err(WarpError::GridTooShort { min_tail: MIN_TAIL });
    }
    let k = profile.k;
    let bound = 2.0 * k as f64 * profile.epsilon;
    let mut max_abs_d2u = 0.0f64;
    let mut max_ratio = 0.0f64;
    let mut pairs = 0;
    let violation = |condition, level, r, detail: String| {
        Err(WarpError::ProfileViolation {
            condition,
            level,
            r,
            detail,
        })
    };
    for &r in grid {
        for level in 1..=k {
            let (h, dh, d2h) = profile.eval_h(level, r);
            let d = profile.log_derivs(level, r);
            if !(h > 0.0 && dh < 0.0 && d2h > 0.0) {
                return violation(
                    "h' < 0 < h''",
                    level,
                    r,
                    alloc::format!("h={h:e} h'={dh:e} h''={d2h:e}"),
                );
            }
            let slack = 1e-12 * profile.a();
            if d.du < profile.alpha(level) - slack || d.du > profile.a() + slack {
                return violation(
                    "u' in [alpha_i, a]",
                    level,
                    r,
                    alloc::format!("u'={}", d.du),
                );
            }
            max_abs_d2u = max_abs_d2u.max(d.d2u.abs());
            if d.d2u.abs() > bound {
                return violation(
                    "|u''| <= 2k eps",
                    level,
                    r,
                    alloc::format!("|u''|={} > {bound}", d.d2u.abs()),
                );
            }
        }
        if r >= profile.rho {
            for i in 1..=k {
                for j in 1..=k {
                    if i + j > k {
                        continue;
                    }
                    let sum: f64 = (i + j..=k).map(|s| profile.eval_h(s, r).0).sum();
                    let rhs = k as f64 * profile.eval_h(i, r).0 * profile.eval_h(j, r).0;
                    let ratio = sum / rhs;
                    max_ratio = max_ratio.max(ratio);
                    pairs += 1;
                    if ratio > 1.0 + 1e-12 {
                        return violation(
                            "sum_{s>=i+j} h_s <= k h_i h_j",
                            i,
                            r,
                            alloc::format!("ratio {ratio}"),
                        );
                    }
                }
            }
        }
    }
    Ok(ProfileReport {
        points: grid.len(),
        max_abs_d2u,
        d2u_bound: bound,
        max_summation_ratio: max_ratio,
        summation_pairs_checked: pairs,
    })
}

/// Uniform grid on `[lo, hi]` with spacing at most `step`, both ends included.
pub fn uniform_grid(lo: f64, hi: f64, step: f64) -> Vec<f64> {
    let count = libm::ceil((hi - lo) / step - 1e-9).max(1.0) as usize;
    (0..=count)
        .map(|t| lo + (hi - lo) * t as f64 / count as f64)
        .collect()
}
