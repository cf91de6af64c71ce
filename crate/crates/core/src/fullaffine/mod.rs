//! Full-affine invariants of strictly convex curves and the variational
//! equations of ∫√κ ds.
//!
//! ds_F = √κ ds and κ_F = κ′/(2κ^{3/2}). Both are unchanged by every
//! invertible affine map; an orientation-reversing map flips the sign of κ_F
//! along with the direction of travel.

mod reconstruct;
mod sl2;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::{CurveSamples, Grid, PointJet, Vec2};
use crate::numeric::{
    cumulative_uniform, derivative, integrate_uniform, lagrange_nonuniform, DEFAULT_FD_ORDER,
};
use crate::{Error, Result};

pub use reconstruct::{
    curve_from_full_affine_curvature, tanh_curve, tanh_kappa_f, BLOW_UP_KAPPA,
    TANH_CURVE_HALF_RANGE,
};
pub use sl2::{
    congruence_arclength, mat_mul, metric, osculating_congruence, osculating_conic,
    osculating_parabola, parabola_points, sl2_geodesic, CongruenceLength, Mat2,
    PointedParabolaPath, SL2Point, Signature, E1, E2, E3,
};

/// κ must exceed this fraction of max|κ| at every sample.
pub const CONVEX_REL_TOL: f64 = 1e-10;
/// Stencil width for resampling κ_F onto a uniform s_F grid.
const RESAMPLE_WIDTH: usize = 10;
/// Nodes dropped at each end of open data in s_F residuals.
const SF_MARGIN: usize = 8;

/// Full-affine arc-length and curvature at the samples of a curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FullAffineData {
    #[serde(rename = "s_F")]
    pub s_f: Vec<f64>,
    #[serde(rename = "kappa_F")]
    pub kappa_f: Vec<f64>,
    pub closed: bool,
    /// ∫ds_F over the whole curve; one full turn when closed.
    pub length: f64,
}

impl FullAffineData {
    /// Open data κ_F(s_F) sampled at `n` uniform points of [a, b].
    pub fn from_function(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> Result<Self> {
        if n < 2 * SF_MARGIN + 1 || !(b > a) {
            return Err(Error::InvalidInput(format!(
                "need b > a and n > {}",
                2 * SF_MARGIN
            )));
        }
        let h = (b - a) / (n - 1) as f64;
        let s_f: Vec<f64> = (0..n).map(|i| a + i as f64 * h).collect();
        Ok(FullAffineData {
            kappa_f: s_f.iter().map(|&s| f(s)).collect(),
            s_f,
            closed: false,
            length: b - a,
        })
    }

    /// κ_F resampled on a uniform s_F grid with as many nodes as samples.
    ///
    /// Returns the grid step and values; closed data covers one period with
    /// the end point excluded.
    pub fn uniform(&self) -> (f64, Vec<f64>) {
        let n = self.s_f.len();
        if self.closed {
            let h = self.length / n as f64;
            // Three copies give every stencil a full neighbourhood.
            let mut nodes = Vec::with_capacity(3 * n);
            let mut vals = Vec::with_capacity(3 * n);
            for k in [-1.0, 0.0, 1.0] {
                nodes.extend(self.s_f.iter().map(|s| s + k * self.length));
                vals.extend_from_slice(&self.kappa_f);
            }
            let s0 = self.s_f[0];
            let v = (0..n)
                .map(|i| lagrange_nonuniform(&nodes, &vals, s0 + i as f64 * h, RESAMPLE_WIDTH))
                .collect();
            (h, v)
        } else {
            let (a, b) = (self.s_f[0], self.s_f[n - 1]);
            let h = (b - a) / (n - 1) as f64;
            let uniform = self
                .s_f
                .iter()
                .enumerate()
                .all(|(i, s)| (s - (a + i as f64 * h)).abs() <= 1e-12 * h);
            if uniform {
                return (h, self.kappa_f.clone());
            }
            let v = (0..n)
                .map(|i| {
                    lagrange_nonuniform(&self.s_f, &self.kappa_f, a + i as f64 * h, RESAMPLE_WIDTH)
                })
                .collect();
            (h, v)
        }
    }
}

fn rms(v: impl Iterator<Item = f64>) -> f64 {
    let mut n = 0usize;
    let mut ss = 0.0;
    for x in v {
        ss += x * x;
        n += 1;
    }
    (ss / n.max(1) as f64).sqrt()
}

/// κ, failing with NonConvex unless it is positive everywhere.
fn positive_kappa(c: &CurveSamples) -> Result<Vec<f64>> {
    let k = c.kappa();
    let scale = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for (i, &v) in k.iter().enumerate() {
        if !(v > CONVEX_REL_TOL * scale) {
            return Err(Error::NonConvex { index: i, kappa: v });
        }
    }
    Ok(k)
}

/// κ_F = κ′/(2κ^{3/2}) at every sample.
pub fn kappa_f(c: &CurveSamples) -> Result<Vec<f64>> {
    let k = positive_kappa(c)?;
    let dk = c.dkappa();
    Ok(k.iter()
        .zip(&dk)
        .map(|(k, dk)| dk / (2.0 * k.powf(1.5)))
        .collect())
}

/// s_F by cumulative quadrature of √κ and pointwise κ_F.
pub fn full_affine_invariants(c: &CurveSamples) -> Result<FullAffineData> {
    let k = positive_kappa(c)?;
    let kf = kappa_f(c)?;
    let root: Vec<f64> = k.iter().map(|v| v.sqrt()).collect();
    let h = c.h();
    let s_f = cumulative_uniform(&root, h);
    let length = integrate_uniform(&root, h, c.closed);
    Ok(FullAffineData {
        s_f,
        kappa_f: kf,
        closed: c.closed,
        length,
    })
}

/// ∫κ_F ds_F = ½∫κ′/κ ds.
pub fn total_full_affine_curvature(c: &CurveSamples) -> Result<f64> {
    let k = positive_kappa(c)?;
    let dk = c.dkappa();
    let v: Vec<f64> = k.iter().zip(&dk).map(|(k, dk)| 0.5 * dk / k).collect();
    Ok(integrate_uniform(&v, c.h(), c.closed))
}

/// (κ_F)‴ + κ(κ_F)′ at every sample, s-derivatives by finite differences.
pub fn sqrt_el_expression(c: &CurveSamples) -> Result<Vec<f64>> {
    let k = positive_kappa(c)?;
    let kf = kappa_f(c)?;
    let d1 = c.differentiate(&kf, 1);
    let d3 = c.differentiate(&kf, 3);
    Ok((0..c.len()).map(|i| d3[i] + k[i] * d1[i]).collect())
}

/// RMS of (κ_F)‴ + κ(κ_F)′ over interior nodes; near zero exactly on
/// critical points of ∫√κ ds.
pub fn el_residual_sqrt(c: &CurveSamples) -> Result<f64> {
    let e = sqrt_el_expression(c)?;
    Ok(rms(c.interior().map(|i| e[i])))
}

/// Pointwise residual of the full-affine form of the Euler–Lagrange
/// equation, κ_F‴ + 3κ_Fκ_F″ + (κ_F′)² + (2κ_F² + 1)κ_F′ with derivatives
/// in s_F, on a uniform s_F grid.
///
/// Returns (s_F, residual) for the nodes away from open ends.
pub fn full_affine_form_pointwise(fd: &FullAffineData) -> (Vec<f64>, Vec<f64>) {
    let (h, v) = fd.uniform();
    let n = v.len();
    // Differencing v − mean keeps a constant κ_F from leaving rounding noise.
    let mean = v.iter().sum::<f64>() / n as f64;
    let centered: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let d1 = derivative(&centered, h, 1, DEFAULT_FD_ORDER, fd.closed);
    let d2 = derivative(&centered, h, 2, DEFAULT_FD_ORDER, fd.closed);
    let d3 = derivative(&centered, h, 3, DEFAULT_FD_ORDER, fd.closed);
    let m = if fd.closed {
        0
    } else {
        SF_MARGIN.min((n - 1) / 2)
    };
    let s0 = fd.s_f[0];
    (m..n - m)
        .map(|i| {
            let k = v[i];
            let r = d3[i] + 3.0 * k * d2[i] + d1[i] * d1[i] + (2.0 * k * k + 1.0) * d1[i];
            (s0 + i as f64 * h, r)
        })
        .unzip()
}

/// RMS of the full-affine form of the Euler–Lagrange equation.
pub fn el_residual_full_affine_form(fd: &FullAffineData) -> f64 {
    let (_, r) = full_affine_form_pointwise(fd);
    rms(r.into_iter())
}

/// Least-squares fit κ_F ≈ Ax + By + C.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct LinearKappaFCertificate {
    /// (A, B) vanishes: κ_F is constant.
    pub is_w_curve: bool,
    #[serde(rename = "A")]
    pub a: f64,
    #[serde(rename = "B")]
    pub b: f64,
    #[serde(rename = "C")]
    pub c: f64,
    /// Origin after which κ_F = A x + B y, when (A, B) ≠ 0.
    pub origin: Option<Vec2>,
    pub fit_residual: f64,
}

/// (A, B) counts as zero below this, relative to max|κ_F| / diameter.
pub const W_CURVE_TOL: f64 = 1e-6;

/// Fit κ_F by an affine function of position.
pub fn theorem8_certificate(c: &CurveSamples) -> Result<LinearKappaFCertificate> {
    let kf = kappa_f(c)?;
    let idx: Vec<usize> = c.interior().collect();
    let m = DMatrix::from_fn(idx.len(), 3, |r, col| match col {
        0 => c.x[idx[r]],
        1 => c.y[idx[r]],
        _ => 1.0,
    });
    let rhs = DVector::from_iterator(idx.len(), idx.iter().map(|&i| kf[i]));
    let sol = m
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-14)
        .map_err(|e| Error::InvalidInput(e.to_string()))?;
    let fitted = &m * &sol;
    let fit_residual = rms(rhs.iter().zip(fitted.iter()).map(|(a, b)| a - b));
    let (a, b, cc) = (sol[0], sol[1], sol[2]);
    let kmax = kf.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    let diam = c.diameter().max(f64::MIN_POSITIVE);
    let is_w_curve = a.hypot(b) * diam <= W_CURVE_TOL * kmax;
    let origin = (!is_w_curve).then(|| {
        let q = a * a + b * b;
        [-cc * a / q, -cc * b / q]
    });
    Ok(LinearKappaFCertificate {
        is_w_curve,
        a,
        b,
        c: cc,
        origin,
        fit_residual,
    })
}

/// Fits of the constrained forms (κ_F)‴ + κ(κ_F)′ = Q·E with E = 1 (area),
/// κ (arc-length) and κ″ + κ² (total curvature).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstrainedSqrtFit {
    #[serde(rename = "area_Q")]
    pub area_q: f64,
    #[serde(rename = "length_Q")]
    pub length_q: f64,
    #[serde(rename = "total_curv_Q")]
    pub total_curv_q: f64,
    pub unconstrained_residual: f64,
    pub area_residual: f64,
    pub length_residual: f64,
    pub total_curv_residual: f64,
}

fn fit_multiple(l: &[f64], e: &[f64]) -> (f64, f64) {
    let den: f64 = e.iter().map(|v| v * v).sum();
    let q = if den > 0.0 {
        l.iter().zip(e).map(|(a, b)| a * b).sum::<f64>() / den
    } else {
        0.0
    };
    (q, rms(l.iter().zip(e).map(|(a, b)| a - q * b)))
}

pub fn constrained_sqrt_residuals(c: &CurveSamples) -> Result<ConstrainedSqrtFit> {
    let all = sqrt_el_expression(c)?;
    let k = c.kappa();
    let ddk = c.ddkappa();
    let idx: Vec<usize> = c.interior().collect();
    let l: Vec<f64> = idx.iter().map(|&i| all[i]).collect();
    let ones = vec![1.0; l.len()];
    let ks: Vec<f64> = idx.iter().map(|&i| k[i]).collect();
    let tc: Vec<f64> = idx.iter().map(|&i| ddk[i] + k[i] * k[i]).collect();
    let (area_q, area_residual) = fit_multiple(&l, &ones);
    let (length_q, length_residual) = fit_multiple(&l, &ks);
    let (total_curv_q, total_curv_residual) = fit_multiple(&l, &tc);
    Ok(ConstrainedSqrtFit {
        area_q,
        length_q,
        total_curv_q,
        unconstrained_residual: rms(l.iter().copied()),
        area_residual,
        length_residual,
        total_curv_residual,
    })
}

/// Logarithmic spiral e^{aθ}(cos θ, sin θ) in equi-affine arc-length, with
/// exact jets; s = 0 at θ = 0. A full-affine W-curve with
/// κ_F = −(2a/3)(1 + a²)^{1/2} / ((1 + a²)(1 + a²/9))^{1/2}.
pub fn log_spiral(a: f64, grid: &Grid) -> Result<CurveSamples> {
    if a == 0.0 {
        return CurveSamples::from_jets(grid, &circle_jets(grid));
    }
    let b = Complex64::new(a, 1.0);
    let k = (1.0 + a * a).cbrt();
    let big_k = (1.0 + a * a) * (1.0 + a * a / 9.0);
    let jets = grid
        .points()
        .into_iter()
        .map(|s| {
            let arg = 1.0 + 2.0 * a * s / (3.0 * k);
            if !(arg > 0.0) {
                return Err(Error::InvalidInput(format!(
                    "s = {s} lies past the spiral's center"
                )));
            }
            let theta = 1.5 / a * arg.ln();
            let z = (b * theta).exp();
            let tp = (-2.0 * a * theta / 3.0).exp() / k;
            let d1 = b * z * tp;
            let d2 = b * (b - 2.0 * a / 3.0) * z * tp * tp;
            let d3 = d2 * (b - 4.0 * a / 3.0) * tp;
            let kappa = big_k * (-4.0 * a * theta / 3.0).exp() / k.powi(5);
            let v = |w: Complex64| [w.re, w.im];
            Ok(PointJet {
                p: v(z),
                d1: v(d1),
                d2: v(d2),
                d3: v(d3),
                kappa,
                dkappa: -4.0 * a / 3.0 * kappa * tp,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    CurveSamples::from_jets(grid, &jets)
}

fn circle_jets(grid: &Grid) -> Vec<PointJet> {
    grid.points()
        .into_iter()
        .map(|s| {
            let (sn, cs) = s.sin_cos();
            PointJet {
                p: [cs, sn],
                d1: [-sn, cs],
                d2: [-cs, -sn],
                d3: [sn, -cs],
                kappa: 1.0,
                dkappa: 0.0,
            }
        })
        .collect()
}
