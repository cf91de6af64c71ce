use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::numeric::integrate_uniform;
use crate::{Error, Result};

use super::samples::{det2, CurveSamples};

/// A curvature density F with its first three derivatives.
pub trait Density {
    /// [F(κ), F′(κ), F″(κ), F‴(κ)]
    fn eval(&self, kappa: f64) -> [f64; 4];
}

impl<F: Fn(f64) -> [f64; 4]> Density for F {
    fn eval(&self, kappa: f64) -> [f64; 4] {
        self(kappa)
    }
}

/// F(κ) = κ^p.
#[derive(Clone, Copy, Debug)]
pub struct Power(pub f64);

impl Density for Power {
    fn eval(&self, k: f64) -> [f64; 4] {
        let p = self.0;
        [
            k.powf(p),
            p * k.powf(p - 1.0),
            p * (p - 1.0) * k.powf(p - 2.0),
            p * (p - 1.0) * (p - 2.0) * k.powf(p - 3.0),
        ]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralFit {
    pub a: f64,
    pub b: f64,
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaFit {
    /// Fitted constant in κ″ + κ² = C.
    pub c: f64,
    /// RMS of κ″ + κ² − C.
    pub residual: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaLengthFit {
    pub c: f64,
    pub a: f64,
    pub residual: f64,
    /// True when κ is (numerically) constant, so only C + Aκ is determined
    /// and (C, A) is the minimal-norm solution.
    pub underdetermined: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Functionals {
    pub length: f64,
    pub total_curvature: f64,
    /// ½∮|γ, γ′| ds; positive for positively oriented curves.
    pub area: f64,
    /// ∫√κ ds; absent unless κ > 0 everywhere.
    pub full_affine_length: Option<f64>,
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

/// Least-squares fit of G = F‴(κ)κ′² + F″(κ)κ″ + 4F′(κ)κ − 2F(κ) by
/// A x′ + B y′; a vanishing residual characterizes critical points of
/// ∫F(κ) ds.
pub fn el_residual_general(c: &CurveSamples, f: &dyn Density) -> GeneralFit {
    let k = c.kappa();
    let dk = c.dkappa();
    let ddk = c.ddkappa();
    let d1 = c.deriv(1);
    let idx: Vec<usize> = c.interior().collect();
    let g: Vec<f64> = idx
        .iter()
        .map(|&i| {
            let [f0, f1, f2, f3] = f.eval(k[i]);
            f3 * dk[i] * dk[i] + f2 * ddk[i] + 4.0 * f1 * k[i] - 2.0 * f0
        })
        .collect();
    let m = DMatrix::from_fn(idx.len(), 2, |r, col| d1[idx[r]][col]);
    let rhs = DVector::from_vec(g.clone());
    let sol = m
        .clone()
        .svd(true, true)
        .solve(&rhs, 1e-12)
        .unwrap_or_else(|_| DVector::zeros(2));
    let fitted = &m * &sol;
    GeneralFit {
        a: sol[0],
        b: sol[1],
        residual: rms(g.iter().zip(fitted.iter()).map(|(a, b)| a - b)),
    }
}

/// κ″ + κ² on the interior nodes.
pub fn area_expression(c: &CurveSamples) -> Vec<f64> {
    let k = c.kappa();
    let ddk = c.ddkappa();
    c.interior().map(|i| ddk[i] + k[i] * k[i]).collect()
}

/// Fit κ″ + κ² = C.
pub fn el_residual_area_constrained(c: &CurveSamples) -> AreaFit {
    let e = area_expression(c);
    let mean = e.iter().sum::<f64>() / e.len() as f64;
    AreaFit {
        c: mean,
        residual: rms(e.iter().map(|v| v - mean)),
    }
}

/// Fit κ″ + κ² = C + Aκ.
pub fn el_residual_area_and_length(c: &CurveSamples) -> AreaLengthFit {
    let e = area_expression(c);
    let k = c.kappa();
    let ks: Vec<f64> = c.interior().map(|i| k[i]).collect();
    let n = e.len();
    let kmean = ks.iter().sum::<f64>() / n as f64;
    let kspread = rms(ks.iter().map(|v| v - kmean));
    let underdetermined = kspread <= 1e-9 * kmean.abs().max(1.0);
    let (cc, a) = if underdetermined {
        // Minimal-norm (C, A) with C + A·κ̄ = mean of the expression.
        let v = e.iter().sum::<f64>() / n as f64;
        let d = 1.0 + kmean * kmean;
        (v / d, v * kmean / d)
    } else {
        let m = DMatrix::from_fn(n, 2, |r, col| if col == 0 { 1.0 } else { ks[r] });
        let sol = m
            .svd(true, true)
            .solve(&DVector::from_vec(e.clone()), 1e-14)
            .unwrap_or_else(|_| DVector::zeros(2));
        (sol[0], sol[1])
    };
    AreaLengthFit {
        c: cc,
        a,
        residual: rms(e.iter().zip(&ks).map(|(v, k)| v - cc - a * k)),
        underdetermined,
    }
}

/// ∫√κ ds; fails unless κ > 0 at every sample.
pub fn full_affine_length(c: &CurveSamples) -> Result<f64> {
    let k = c.kappa();
    let min = k.iter().copied().fold(f64::INFINITY, f64::min);
    if !(min > 0.0) {
        return Err(Error::NegativeCurvature { min_kappa: min });
    }
    let v: Vec<f64> = k.iter().map(|x| x.sqrt()).collect();
    Ok(integrate_uniform(&v, c.h(), c.closed))
}

/// Length, total curvature, enclosed area and full-affine length.
pub fn functionals(c: &CurveSamples) -> Functionals {
    let k = c.kappa();
    let d1 = c.deriv(1);
    let h = c.h();
    let sector: Vec<f64> = (0..c.len())
        .map(|i| 0.5 * det2(c.point(i), d1[i]))
        .collect();
    Functionals {
        length: c.length(),
        total_curvature: integrate_uniform(&k, h, c.closed),
        area: integrate_uniform(&sector, h, c.closed),
        full_affine_length: full_affine_length(c).ok(),
    }
}

/// Number of sign changes of κ′ around the curve (sextactic points).
pub fn sextactic_count(c: &CurveSamples) -> usize {
    let dk = c.dkappa();
    let scale = dk.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let signs: Vec<f64> = dk
        .iter()
        .filter(|v| v.abs() > 1e-9 * scale)
        .map(|v| v.signum())
        .collect();
    if signs.is_empty() {
        return 0;
    }
    let mut count = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if c.closed && signs[0] != signs[signs.len() - 1] {
        count += 1;
    }
    count
}
