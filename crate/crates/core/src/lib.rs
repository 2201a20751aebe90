//! Pinched negatively curved warped-product metrics on nilpotent Lie groups.
//!
//! Given a nilpotent Lie algebra by structure constants, this crate builds the
//! metric `g = s² g_r + dr²` on `G × ℝ`, where `g_r` rescales the graded
//! pieces `F_i` of the lower central series by warping functions `h_i(r)`, and
//! certifies numerically that every sectional curvature lies in
//! `[-(k + ε)², -1]` for a sufficiently large scale `s`.
//!
//! The crate is `no_std` (it needs `alloc`). File formats, the command line and
//! parallel grid evaluation live in the `pinchwarp` companion crate.
//!
//! Modules, bottom-up:
//!
//! * [`algebra`]: validation, lower central series, graded frames, bracket
//!   containment, k-fold witnesses, unitriangular group checks, builtins.
//! * [`warp`]: warping profiles `h_i` and their analytic checks.
//! * [`curvature`]: the frame-based curvature oracle, the closed-form component
//!   formulas, the `s → ∞` limit tensor, and their comparison.
//! * [`certify`]: sectional-curvature extremization and pinching certificates.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod algebra;
pub mod certify;
pub mod curvature;
pub mod linalg;
pub mod warp;

pub use algebra::{
    builtin, graded_frame, lower_central_series, validate, AlgebraError, GradedFrame,
    LieAlgebraSpec, ValidatedAlgebra,
};
pub use certify::{CertifyError, PinchCertificate, Verdict};

pub use curvature::{CurvatureTensor, FramedMetric, TensorSource};
pub use warp::{WarpError, WarpProfile};
