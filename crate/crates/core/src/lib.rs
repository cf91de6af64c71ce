//! Critical curves of equi-affine curvature functionals.
//!
//! The crate is organised bottom-up:
//!
//! - [`elliptic`]: Weierstrass ℘, ℘′, ζ, σ for real invariants.
//! - [`curvature`]: sampled curves, equi-affine frame and curvature, Euler–Lagrange residuals.
//! - [`classifier`]: case taxonomy of the invariants (g₂, g₃).
//! - [`synthesis`]: curve construction for every case, closure condition and solver.
//! - [`fullaffine`]: full-affine invariants, the ∫√κ ds equations, SL(2) congruences.
//!
//! [`numeric`] holds the finite-difference, quadrature and interpolation helpers
//! shared by the rest.

#![allow(
    clippy::neg_cmp_op_on_partial_ord,
    clippy::excessive_precision,
    clippy::needless_range_loop
)]

pub mod classifier;
pub mod curvature;
pub mod elliptic;
mod error;
pub mod fullaffine;
pub mod numeric;
pub mod synthesis;

pub use error::{Error, Result};

pub use classifier::{classify, rescale_to_normal_form, Branch, CaseLabel, CaseParams, CaseTag};
pub use curvature::{CurveSamples, FrameField, SupportData};
pub use elliptic::{ComplexPoint, Invariants, LatticeData, Weierstrass};
pub use fullaffine::{FullAffineData, PointedParabolaPath, SL2Point};
pub use synthesis::{ClosureSolution, LameSolutionParams};
