use serde::{Deserialize, Serialize};

use crate::numeric::{cumulative_uniform, derivative, lagrange_nonuniform, lagrange_uniform};
use crate::{Error, Result};

use super::residuals::el_residual_area_constrained;
use super::samples::{det2, CurveSamples, Vec2};

/// Relative size of |γ̇, γ̈| below which a sample counts as an inflection.
const INFLECTION_TOL: f64 = 1e-8;
const INTERP_WIDTH: usize = 10;
/// Relative RMS spread of κ″ + κ² tolerated by `translate_to_canonical`.
pub const CRITICAL_TOL: f64 = 1e-4;

/// Equi-affine frame (T, N) = (γ′, γ″) and curvature at every sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrameField {
    pub t: Vec<Vec2>,
    pub n: Vec<Vec2>,
    pub kappa: Vec<f64>,
}

impl FrameField {
    /// max |det(T, N) − 1|.
    pub fn unimodularity_defect(&self) -> f64 {
        self.t
            .iter()
            .zip(&self.n)
            .map(|(t, n)| (det2(*t, *n) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// RMS of N′ + κT over the interior of `c`.
    pub fn frenet_residual(&self, c: &CurveSamples) -> f64 {
        let nx: Vec<f64> = self.n.iter().map(|v| v[0]).collect();
        let ny: Vec<f64> = self.n.iter().map(|v| v[1]).collect();
        let dnx = c.differentiate(&nx, 1);
        let dny = c.differentiate(&ny, 1);
        let idx = c.interior();
        let m = idx.len() as f64;
        let ss: f64 = idx
            .map(|i| {
                let rx = dnx[i] + self.kappa[i] * self.t[i][0];
                let ry = dny[i] + self.kappa[i] * self.t[i][1];
                rx * rx + ry * ry
            })
            .sum();
        (ss / m).sqrt()
    }
}

/// Components of the position vector P = −ρN + φT.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupportData {
    /// Equi-affine support function ρ = |P, T|.
    pub rho: Vec<f64>,
    /// Tangential component φ = |P, N|.
    pub phi: Vec<f64>,
}

impl SupportData {
    /// RMS of ρ″ + κρ − 1 over the interior of `c`.
    pub fn residual(&self, c: &CurveSamples) -> f64 {
        let kappa = c.kappa();
        let d2 = c.differentiate(&self.rho, 2);
        let idx = c.interior();
        let m = idx.len() as f64;
        (idx.map(|i| (d2[i] + kappa[i] * self.rho[i] - 1.0).powi(2))
            .sum::<f64>()
            / m)
            .sqrt()
    }
}

/// Resample a curve given at uniformly spaced values of an arbitrary
/// parameter t onto a uniform equi-affine arc-length grid.
///
/// ds = |γ̇, γ̈|^{1/3} dt is integrated with a fourth-order rule, t(s) is
/// inverted by local polynomial interpolation and positions are
/// interpolated at the resulting t. A negatively oriented input is reversed.
pub fn reparametrize_equiaffine(points: &[Vec2], closed: bool) -> Result<CurveSamples> {
    let n = points.len();
    if n < super::samples::MIN_SAMPLES {
        return Err(Error::InvalidInput(format!(
            "need at least 7 points, got {n}"
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p[0]).collect();
    let ys: Vec<f64> = points.iter().map(|p| p[1]).collect();
    let order = crate::numeric::DEFAULT_FD_ORDER;
    let dx = derivative(&xs, 1.0, 1, order, closed);
    let dy = derivative(&ys, 1.0, 1, order, closed);
    let ddx = derivative(&xs, 1.0, 2, order, closed);
    let ddy = derivative(&ys, 1.0, 2, order, closed);
    let d: Vec<f64> = (0..n)
        .map(|i| det2([dx[i], dy[i]], [ddx[i], ddy[i]]))
        .collect();
    let dmax = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sign = d[n / 2].signum();
    for (i, v) in d.iter().enumerate() {
        if v.signum() != sign || v.abs() < INFLECTION_TOL * dmax {
            return Err(Error::InflectionPoint { index: i });
        }
    }
    if sign < 0.0 {
        let rev: Vec<Vec2> = if closed {
            (0..n).map(|i| points[(n - i) % n]).collect()
        } else {
            points.iter().rev().copied().collect()
        };
        return reparametrize_equiaffine(&rev, closed);
    }
    let speed: Vec<f64> = d.iter().map(|v| v.cbrt()).collect();
    let t_nodes: Vec<f64> = (0..n).map(|i| i as f64).collect();

    if closed {
        // Pad the cumulative length periodically so interpolation near the
        // seam sees a smooth monotone sequence.
        let total: f64 = speed.iter().sum();
        let s_nodes = periodic_cumulative(&speed);
        let pad = INTERP_WIDTH;
        let mut sn = Vec::with_capacity(n + 2 * pad);
        let mut tn = Vec::with_capacity(n + 2 * pad);
        for k in 0..n + 2 * pad {
            let i = k as i64 - pad as i64;
            let wrap = i.div_euclid(n as i64);
            let j = i.rem_euclid(n as i64) as usize;
            sn.push(s_nodes[j] + wrap as f64 * total);
            tn.push(i as f64);
        }
        let h = total / n as f64;
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for k in 0..n {
            let t = lagrange_nonuniform(&sn, &tn, k as f64 * h, INTERP_WIDTH);
            x.push(lagrange_uniform(&xs, 0.0, 1.0, t, INTERP_WIDTH, true));
            y.push(lagrange_uniform(&ys, 0.0, 1.0, t, INTERP_WIDTH, true));
        }
        return CurveSamples::new(0.0, h, x, y, true);
    }

    let s_nodes = cumulative_uniform(&speed, 1.0);
    let total = s_nodes[n - 1];
    let h = total / (n - 1) as f64;
    let mut x = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for k in 0..n {
        let s = (k as f64 * h).min(total);
        let t = lagrange_nonuniform(&s_nodes, &t_nodes, s, INTERP_WIDTH).clamp(0.0, (n - 1) as f64);
        x.push(lagrange_uniform(&xs, 0.0, 1.0, t, INTERP_WIDTH, false));
        y.push(lagrange_uniform(&ys, 0.0, 1.0, t, INTERP_WIDTH, false));
    }
    CurveSamples::new(0.0, h, x, y, false)
}

/// Running integral of periodic samples (unit spacing), exact for
/// trigonometric polynomials below the Nyquist limit.
fn periodic_cumulative(f: &[f64]) -> Vec<f64> {
    let n = f.len();
    let mean = f.iter().sum::<f64>() / n as f64;
    // Integrate the zero-mean part spectrally via its discrete Fourier
    // series; the mean contributes a linear ramp.
    let mut out = vec![0.0; n];
    let g: Vec<f64> = f.iter().map(|v| v - mean).collect();
    let half = n / 2;
    let mut coef = Vec::with_capacity(half + 1);
    for k in 1..=half {
        let (mut re, mut im) = (0.0, 0.0);
        for (j, v) in g.iter().enumerate() {
            let a = 2.0 * std::f64::consts::PI * (k * j) as f64 / n as f64;
            re += v * a.cos();
            im -= v * a.sin();
        }
        let w = if n.is_multiple_of(2) && k == half {
            1.0
        } else {
            2.0
        };
        coef.push((k, re * w / n as f64, im * w / n as f64));
    }
    for (j, o) in out.iter_mut().enumerate() {
        let mut acc = mean * j as f64;
        for &(k, re, im) in &coef {
            let om = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
            let a = om * j as f64;
            // ∫₀^j (re cos ωt − im sin ωt) dt
            acc += (re * a.sin() + im * (a.cos() - 1.0)) / om;
        }
        *o = acc;
    }
    out
}

/// Frame and curvature from the samples (exact jets when attached).
pub fn frame_and_curvature(c: &CurveSamples) -> FrameField {
    FrameField {
        t: c.deriv(1),
        n: c.deriv(2),
        kappa: c.kappa(),
    }
}

/// Support function with respect to `origin`.
pub fn support_function(c: &CurveSamples, origin: Vec2) -> SupportData {
    let t = c.deriv(1);
    let n = c.deriv(2);
    let mut rho = Vec::with_capacity(c.len());
    let mut phi = Vec::with_capacity(c.len());
    for i in 0..c.len() {
        let p = [c.x[i] - origin[0], c.y[i] - origin[1]];
        rho.push(det2(p, t[i]));
        phi.push(det2(p, n[i]));
    }
    SupportData { rho, phi }
}

/// Origin for which M = κN − κ′T equals −C·P on a curve with κ″ + κ² = C.
pub fn translate_to_canonical(c: &CurveSamples) -> Result<Vec2> {
    let fit = el_residual_area_constrained(c);
    let scale = c
        .kappa()
        .iter()
        .fold(0.0f64, |m, k| m.max(k.abs()))
        .max(1.0);
    if fit.c.abs() < 1e-10 * scale * scale {
        return Err(Error::ZeroC);
    }
    if fit.residual > CRITICAL_TOL * fit.c.abs() {
        return Err(Error::NotCritical {
            spread: fit.residual / fit.c.abs(),
        });
    }
    let o = canonical_points(c, fit.c);
    let m = o.len() as f64;
    let sx: f64 = o.iter().map(|p| p[0]).sum();
    let sy: f64 = o.iter().map(|p| p[1]).sum();
    Ok([sx / m, sy / m])
}

/// γ + M/C at every sample; constant on a critical curve.
pub fn canonical_points(c: &CurveSamples, cc: f64) -> Vec<Vec2> {
    let t = c.deriv(1);
    let n = c.deriv(2);
    let k = c.kappa();
    let dk = c.dkappa();
    (0..c.len())
        .map(|i| {
            let mx = k[i] * n[i][0] - dk[i] * t[i][0];
            let my = k[i] * n[i][1] - dk[i] * t[i][1];
            [c.x[i] + mx / cc, c.y[i] + my / cc]
        })
        .collect()
}
