//! Critical curves of ∫κ ds under both area and length constraints.
//!
//! With g₂ = A²/12 and z = s − c₀ the curve
//!   x = −ζ(z) + (A/12)s,
//!   y = (A/6)ζ(z)z + ℘(z) − ζ(z)² − (Az/12)²
//! has |γ′, γ″| = g₃ − A³/216, and κ = −6℘(z) + A/2 once scaled to unit
//! determinant.

use num_complex::Complex64;
use serde_json::json;

use crate::curvature::{CurveSamples, Grid, PointJet};
use crate::elliptic::{ComplexPoint, Invariants, Weierstrass};
use crate::{Error, Result};

use super::cases::{check_grid, check_poles, real_poles};

/// Samples of the length-constrained curve, equi-affinely normalized.
pub fn synthesize_length_constrained(
    a: f64,
    g3: f64,
    c0: ComplexPoint,
    grid: &Grid,
) -> Result<CurveSamples> {
    check_grid(grid)?;
    let g2 = a * a / 12.0;
    let wf = Weierstrass::new(Invariants::new(g2, g3))?;
    if let Some((o, per)) = real_poles(wf.lattice(), c0) {
        check_poles(grid, o, per)?;
    }
    let pts = grid.points();
    let raw: Vec<[Complex64; 8]> = pts
        .iter()
        .map(|&s| {
            let z = Complex64::new(s, 0.0) - c0;
            let j = wf.jet(z)?;
            let (p, dp, ze) = (j.wp, j.wp_prime, j.zeta);
            let ddp = 6.0 * p * p - 0.5 * g2;
            let k = a / 12.0;
            Ok([
                -ze + k * s,
                a / 6.0 * ze * z + p - ze * ze - k * k * z * z,
                p + k,
                a / 6.0 * (-p * z + ze) + dp + 2.0 * ze * p - a * a / 72.0 * z,
                dp,
                a / 6.0 * (-dp * z - 2.0 * p) + 4.0 * p * p - 0.5 * g2 + 2.0 * ze * dp
                    - a * a / 72.0,
                ddp,
                a / 6.0 * (-ddp * z - 3.0 * dp) + 6.0 * p * dp + 2.0 * ze * ddp,
            ])
        })
        .collect::<Result<_>>()?;
    let w = raw
        .iter()
        .map(|v| v[2].re * v[5].re - v[4].re * v[3].re)
        .sum::<f64>()
        / raw.len() as f64;
    if w.abs() < 1e-12 {
        return Err(Error::UnimodularizationFailed);
    }
    let r = 1.0 / w.abs().sqrt();
    let sg = w.signum();
    let jets: Vec<PointJet> = raw
        .iter()
        .zip(&pts)
        .map(|(v, &s)| {
            let j = wf.jet(Complex64::new(s, 0.0) - c0).expect("checked above");
            let f = |x: Complex64, y: Complex64| [r * x.re, sg * r * y.re];
            PointJet {
                p: f(v[0], v[1]),
                d1: f(v[2], v[3]),
                d2: f(v[4], v[5]),
                d3: f(v[6], v[7]),
                kappa: -6.0 * j.wp.re + 0.5 * a,
                dkappa: -6.0 * j.wp_prime.re,
            }
        })
        .collect();
    let mut out = CurveSamples::from_jets(grid, &jets)?;
    out.meta.insert("tag".into(), json!("length_constrained"));
    out.meta.insert("A".into(), json!(a));
    out.meta.insert("g2".into(), json!(g2));
    out.meta.insert("g3".into(), json!(g3));
    out.meta.insert("c0".into(), json!([c0.re, c0.im]));
    out.meta.insert("W".into(), json!(w));
    Ok(out)
}
