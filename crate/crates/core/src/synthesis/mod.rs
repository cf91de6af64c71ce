//! Curve synthesis for every case, the closure condition of the oval
//! branch, length-constrained curves and display transforms.

mod cases;
mod closure;
mod constrained;
mod display;
mod lame;

use std::f64::consts::PI;

use serde_json::json;

use crate::classifier::{CaseLabel, CaseTag};
use crate::curvature::{CurveSamples, Grid};
use crate::elliptic::Weierstrass;
use crate::Result;

pub use cases::real_poles;
pub use closure::{
    a3_nonperiodicity, closure_lhs, closure_lhs_complex, solve_closure, synthesize_closure,
    ClosureSolution, CLOSURE_Q_MAX, CLOSURE_Q_MIN,
};
pub use constrained::synthesize_length_constrained;
pub use display::{
    case_f_double_point, euclidean_display_transform, fit_period_map, AffineMap, DoublePoint,
};
pub use lame::{
    lame_phi1, lame_phi2, real_solutions, solve_c, LameJet, LameSolutionParams, RealPair,
};

/// Equi-affinely normalized samples of the critical curve with this label.
///
/// Exact jets are attached; strip `jets` to force finite-difference
/// verification.
pub fn synthesize(label: &CaseLabel, grid: &Grid) -> Result<CurveSamples> {
    let built = cases::build(label, grid)?;
    let mut out = CurveSamples::from_jets(grid, &built.jets)?;
    out.sign_flip_at_poles = built.flips;
    out.meta.insert("tag".into(), json!(label.tag.name()));
    out.meta.insert("g2".into(), json!(label.g2));
    out.meta.insert("g3".into(), json!(label.g3));
    out.meta.insert("method".into(), json!(built.method));
    if let Some(c) = built.c {
        out.meta.insert("c".into(), json!([c.re, c.im]));
    }
    if let Some(c0) = built.c0 {
        out.meta.insert("c0".into(), json!([c0.re, c0.im]));
    }
    Ok(out)
}

/// A grid of `n` samples on which `synthesize` succeeds for the label:
/// two real periods of the oval, the interior of one arc between poles for
/// the unbounded branches, one period of the ellipse.
pub fn default_grid(label: &CaseLabel, n: usize) -> Result<Grid> {
    let e = || label.params.e.unwrap_or_else(|| label.g3.cbrt());
    Ok(match label.tag {
        CaseTag::A1 | CaseTag::A2 | CaseTag::A3 => {
            // Offset so that no node lands on a sign flip at an odd ϖ₁.
            let w1 = Weierstrass::new(label.invariants())?.lattice().w1;
            Grid::open(0.0137 * w1, 4.0137 * w1, n)
        }
        CaseTag::Ellipse => Grid::closed(0.0, 2.0 * PI / (3.0 * e()).sqrt(), n),
        CaseTag::Da => {
            let a = (-1.5 * e()).sqrt();
            Grid::open(0.6 / a, 3.0 / a, n)
        }
        CaseTag::Dc => {
            let a = (-1.5 * e()).sqrt();
            Grid::open(-3.0 / a, 3.0 / a, n)
        }
        CaseTag::ECase => {
            let a = (1.5 * e()).sqrt();
            let half = 0.6 * PI / (2.0 * a);
            Grid::open(-half, half, n)
        }
        CaseTag::G => Grid::open(0.5, 2.5, n),
        _ => {
            let w1 = Weierstrass::new(label.invariants())?.lattice().w1;
            Grid::open(0.3137 * w1, 1.7137 * w1, n)
        }
    })
}
