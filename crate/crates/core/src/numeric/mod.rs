//! Finite differences, quadrature, interpolation and root bracketing on
//! uniform grids.

pub mod fd;
pub mod interp;
pub mod quad;
pub mod root;

pub use fd::{derivative, fornberg_weights, DEFAULT_FD_ORDER};
pub use interp::{lagrange_nonuniform, lagrange_uniform};
pub use quad::{cumulative_uniform, gauss_legendre, integrate_uniform};
pub use root::brent;
