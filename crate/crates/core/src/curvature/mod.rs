//! Equi-affine differential geometry of sampled planar curves.
//!
//! A curve is sampled at equal steps of equi-affine arc-length s, so
//! |γ′, γ″| = 1, T = γ′, N = γ″ and γ‴ = −κγ′. Derivatives come from exact
//! jets when synthesis attached them and from sixth-order finite
//! differences otherwise.

mod frame;
mod residuals;
mod samples;

pub use frame::{
    canonical_points, frame_and_curvature, reparametrize_equiaffine, support_function,
    translate_to_canonical, FrameField, SupportData, CRITICAL_TOL,
};
pub use residuals::{
    area_expression, el_residual_area_and_length, el_residual_area_constrained,
    el_residual_general, full_affine_length, functionals, sextactic_count, AreaFit, AreaLengthFit,
    Density, Functionals, GeneralFit, Power,
};
pub use samples::{
    det2, CurveSamples, Grid, Jets, PointJet, Vec2, BOUNDARY_MARGIN, MIN_SAMPLES, VERIFY_FD_ORDER,
    VERIFY_MIN_SAMPLES, VERIFY_STEP,
};
