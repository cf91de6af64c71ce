use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::numeric::{derivative, lagrange_uniform, DEFAULT_FD_ORDER};
use crate::{Error, Result};

/// Minimum number of samples (one 7-point stencil).
pub const MIN_SAMPLES: usize = 7;

pub type Vec2 = [f64; 2];

#[inline]
pub fn det2(a: Vec2, b: Vec2) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Sampling range for synthesis.
///
/// Closed grids exclude the end point (it coincides with the start after one
/// period); open grids include both ends.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub start: f64,
    pub end: f64,
    pub n: usize,
    pub closed: bool,
}

impl Grid {
    pub fn open(start: f64, end: f64, n: usize) -> Self {
        Grid {
            start,
            end,
            n,
            closed: false,
        }
    }

    pub fn closed(start: f64, period: f64, n: usize) -> Self {
        Grid {
            start,
            end: start + period,
            n,
            closed: true,
        }
    }

    pub fn step(&self) -> f64 {
        if self.closed {
            (self.end - self.start) / self.n as f64
        } else {
            (self.end - self.start) / (self.n - 1) as f64
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let h = self.step();
        (0..self.n).map(|i| self.start + i as f64 * h).collect()
    }
}

/// Analytic jet of a curve at one parameter value.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PointJet {
    pub p: Vec2,
    pub d1: Vec2,
    pub d2: Vec2,
    pub d3: Vec2,
    pub kappa: f64,
    pub dkappa: f64,
}

/// Cached exact derivatives, attached by synthesis when they are known in
/// closed form. Finite differences are used whenever this is absent.
#[derive(Clone, Debug, PartialEq)]
pub struct Jets {
    pub d1: Vec<Vec2>,
    pub d2: Vec<Vec2>,
    pub d3: Vec<Vec2>,
    pub kappa: Vec<f64>,
    pub dkappa: Vec<f64>,
}

/// Uniformly spaced samples s ↦ (x(s), y(s)) of an equi-affinely
/// parametrized curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CurveSamples {
    pub s: Vec<f64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub closed: bool,
    /// Total equi-affine length of a closed curve.
    pub period: Option<f64>,
    /// Set by display transforms; such output is no longer equi-affinely
    /// normalized.
    #[serde(default)]
    pub display_normalized: bool,
    /// Parameter values where a sign convention flips between smooth arcs.
    #[serde(default)]
    pub sign_flip_at_poles: Vec<f64>,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
    #[serde(skip)]
    pub jets: Option<Jets>,
    /// Stencil order for finite differences; `None` means the default.
    #[serde(skip)]
    pub fd_order: Option<usize>,
}

impl CurveSamples {
    /// Samples on a uniform grid starting at `s0` with step `h`.
    pub fn new(s0: f64, h: f64, x: Vec<f64>, y: Vec<f64>, closed: bool) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "x has {} samples, y has {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < MIN_SAMPLES {
            return Err(Error::InvalidInput(format!(
                "need at least {MIN_SAMPLES} samples, got {}",
                x.len()
            )));
        }
        if !(h > 0.0) || !h.is_finite() {
            return Err(Error::InvalidInput(format!("invalid step {h}")));
        }
        let n = x.len();
        let s = (0..n).map(|i| s0 + i as f64 * h).collect();
        Ok(CurveSamples {
            s,
            x,
            y,
            closed,
            period: closed.then_some(n as f64 * h),
            display_normalized: false,
            sign_flip_at_poles: Vec::new(),
            meta: BTreeMap::new(),
            jets: None,
            fd_order: None,
        })
    }

    /// Samples with exact jets attached.
    pub fn from_jets(grid: &Grid, jets: &[PointJet]) -> Result<Self> {
        let x = jets.iter().map(|j| j.p[0]).collect();
        let y = jets.iter().map(|j| j.p[1]).collect();
        let mut c = CurveSamples::new(grid.start, grid.step(), x, y, grid.closed)?;
        c.jets = Some(Jets {
            d1: jets.iter().map(|j| j.d1).collect(),
            d2: jets.iter().map(|j| j.d2).collect(),
            d3: jets.iter().map(|j| j.d3).collect(),
            kappa: jets.iter().map(|j| j.kappa).collect(),
            dkappa: jets.iter().map(|j| j.dkappa).collect(),
        });
        Ok(c)
    }

    /// Equi-affinely parametrized ellipse with semi-axes `a`, `b` centered
    /// at the origin; κ ≡ (ab)^{−2/3}, period 2π(ab)^{1/3}.
    pub fn ellipse(a: f64, b: f64, n: usize) -> Result<Self> {
        let w = (a * b).powf(-1.0 / 3.0);
        let grid = Grid::closed(0.0, 2.0 * PI / w, n);
        let jets: Vec<PointJet> = grid
            .points()
            .into_iter()
            .map(|s| {
                let (sn, cs) = (w * s).sin_cos();
                PointJet {
                    p: [a * cs, b * sn],
                    d1: [-a * w * sn, b * w * cs],
                    d2: [-a * w * w * cs, -b * w * w * sn],
                    d3: [a * w.powi(3) * sn, -b * w.powi(3) * cs],
                    kappa: w * w,
                    dkappa: 0.0,
                }
            })
            .collect();
        CurveSamples::from_jets(&grid, &jets)
    }

    pub fn circle(n: usize) -> Result<Self> {
        CurveSamples::ellipse(1.0, 1.0, n)
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn h(&self) -> f64 {
        match (self.closed, self.period) {
            (true, Some(p)) => p / self.len() as f64,
            _ => self.s[1] - self.s[0],
        }
    }

    pub fn point(&self, i: usize) -> Vec2 {
        [self.x[i], self.y[i]]
    }

    pub fn points(&self) -> Vec<Vec2> {
        (0..self.len()).map(|i| self.point(i)).collect()
    }

    /// Total parameter length: the period when closed, otherwise the span.
    pub fn length(&self) -> f64 {
        match (self.closed, self.period) {
            (true, Some(p)) => p,
            _ => self.s[self.len() - 1] - self.s[0],
        }
    }

    fn order(&self) -> usize {
        self.fd_order.unwrap_or(DEFAULT_FD_ORDER)
    }

    fn fd(&self, v: &[f64], k: usize) -> Vec<f64> {
        derivative(v, self.h(), k, self.order(), self.closed)
    }

    /// k-th derivative of (x, y), k ∈ 1..=3, from jets when available.
    pub fn deriv(&self, k: usize) -> Vec<Vec2> {
        if let Some(j) = &self.jets {
            match k {
                1 => return j.d1.clone(),
                2 => return j.d2.clone(),
                3 => return j.d3.clone(),
                _ => {}
            }
        }
        let dx = self.fd(&self.x, k);
        let dy = self.fd(&self.y, k);
        dx.into_iter().zip(dy).map(|(a, b)| [a, b]).collect()
    }

    /// x′y″ − x″y′ at every node.
    pub fn unimodularity(&self) -> Vec<f64> {
        let d1 = self.deriv(1);
        let d2 = self.deriv(2);
        d1.iter().zip(&d2).map(|(a, b)| det2(*a, *b)).collect()
    }

    /// Equi-affine curvature κ = |γ″, γ‴|.
    pub fn kappa(&self) -> Vec<f64> {
        if let Some(j) = &self.jets {
            return j.kappa.clone();
        }
        let d2 = self.deriv(2);
        let d3 = self.deriv(3);
        d2.iter().zip(&d3).map(|(a, b)| det2(*a, *b)).collect()
    }

    pub fn dkappa(&self) -> Vec<f64> {
        if let Some(j) = &self.jets {
            return j.dkappa.clone();
        }
        self.fd(&self.kappa(), 1)
    }

    pub fn ddkappa(&self) -> Vec<f64> {
        self.fd(&self.dkappa(), 1)
    }

    /// Finite-difference derivative of an arbitrary nodal field.
    pub fn differentiate(&self, v: &[f64], k: usize) -> Vec<f64> {
        self.fd(v, k)
    }

    /// Number of nodes excluded at each end of an open curve when forming
    /// residual norms.
    pub fn boundary_margin(&self) -> usize {
        if self.closed {
            0
        } else {
            BOUNDARY_MARGIN
                .max(self.order() + 2)
                .min(self.len().saturating_sub(1) / 2)
        }
    }

    /// Indices that enter residual norms.
    pub fn interior(&self) -> std::ops::Range<usize> {
        let m = self.boundary_margin();
        m..self.len() - m
    }

    /// Image under p ↦ A p + b, reparametrized by equi-affine arc-length.
    ///
    /// Arc-length scales by |det A|^{1/3}; a negative determinant reverses
    /// the orientation, so the sample order is reversed to keep
    /// |γ′, γ″| = +1. Exact jets are transformed along.
    pub fn transformed(&self, a: [[f64; 2]; 2], b: Vec2) -> Result<Self> {
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == 0.0 || !det.is_finite() {
            return Err(Error::InvalidInput("singular linear map".into()));
        }
        let lam = det.abs().cbrt();
        let sg = det.signum();
        let n = self.len();
        let map = |p: Vec2| {
            [
                a[0][0] * p[0] + a[0][1] * p[1],
                a[1][0] * p[0] + a[1][1] * p[1],
            ]
        };
        let order: Vec<usize> = if sg > 0.0 {
            (0..n).collect()
        } else if self.closed {
            (0..n).map(|i| (n - i) % n).collect()
        } else {
            (0..n).rev().collect()
        };
        let mut x = Vec::with_capacity(n);
        let mut y = Vec::with_capacity(n);
        for &i in &order {
            let p = map(self.point(i));
            x.push(p[0] + b[0]);
            y.push(p[1] + b[1]);
        }
        let mut out = CurveSamples::new(lam * self.s[0], lam * self.h(), x, y, self.closed)?;
        out.meta = self.meta.clone();
        out.display_normalized = self.display_normalized;
        out.fd_order = self.fd_order;
        if let Some(j) = &self.jets {
            let scale = |v: Vec2, k: i32| {
                let m = map(v);
                let f = sg.powi(k) / lam.powi(k);
                [m[0] * f, m[1] * f]
            };
            out.jets = Some(Jets {
                d1: order.iter().map(|&i| scale(j.d1[i], 1)).collect(),
                d2: order.iter().map(|&i| scale(j.d2[i], 2)).collect(),
                d3: order.iter().map(|&i| scale(j.d3[i], 3)).collect(),
                kappa: order.iter().map(|&i| j.kappa[i] / (lam * lam)).collect(),
                dkappa: order
                    .iter()
                    .map(|&i| sg * j.dkappa[i] / lam.powi(3))
                    .collect(),
            });
        }
        Ok(out)
    }

    /// Every `stride`-th sample; jets are kept.
    pub fn decimated(&self, stride: usize) -> Result<Self> {
        let stride = stride.max(1);
        if stride == 1 {
            return Ok(self.clone());
        }
        let pick = |v: &[f64]| v.iter().step_by(stride).copied().collect::<Vec<_>>();
        let n_out = self.len().div_ceil(stride);
        let closed = self.closed && self.len().is_multiple_of(stride);
        let mut out = CurveSamples::new(
            self.s[0],
            self.h() * stride as f64,
            pick(&self.x),
            pick(&self.y),
            closed,
        )?;
        debug_assert_eq!(out.len(), n_out);
        out.meta = self.meta.clone();
        out.fd_order = self.fd_order;
        if let Some(j) = &self.jets {
            let pick2 = |v: &[Vec2]| v.iter().step_by(stride).copied().collect::<Vec<_>>();
            out.jets = Some(Jets {
                d1: pick2(&j.d1),
                d2: pick2(&j.d2),
                d3: pick2(&j.d3),
                kappa: pick(&j.kappa),
                dkappa: pick(&j.dkappa),
            });
        }
        Ok(out)
    }

    /// Positions only, thinned to a step suited to differencing κ″.
    ///
    /// κ″ is a fifth difference of positions, so rounding noise grows like
    /// ε/h⁵ while truncation shrinks with h. The view uses a tenth-order
    /// stencil at h·√max|κ| ≈ [`VERIFY_STEP`], keeping at least
    /// [`VERIFY_MIN_SAMPLES`] samples. A closed curve only takes strides
    /// that divide its sample count, and is resampled when none is close.
    pub fn verification_view(&self) -> Result<Self> {
        let mut base = self.clone();
        base.jets = None;
        base.fd_order = Some(VERIFY_FD_ORDER);
        let kmax = base
            .kappa()
            .iter()
            .filter(|v| v.is_finite())
            .fold(0.0f64, |m, v| m.max(v.abs()));
        let h = self.h();
        let ideal = if kmax > 0.0 {
            (VERIFY_STEP / kmax.sqrt() / h).floor().max(1.0) as usize
        } else {
            1
        };
        let cap = (self.len() / VERIFY_MIN_SAMPLES).max(1);
        let target = ideal.min(cap);
        let mut stride = target;
        if self.closed {
            while stride > 1 && !self.len().is_multiple_of(stride) {
                stride -= 1;
            }
            if 2 * stride <= target {
                // No usable divisor: resample the period onto a coarser
                // uniform grid instead.
                let m = self.len() / target;
                let period = h * self.len() as f64;
                let hn = period / m as f64;
                let pts: Vec<Vec2> = (0..m)
                    .map(|i| self.interpolate(self.s[0] + hn * i as f64))
                    .collect();
                let mut out = CurveSamples::new(
                    self.s[0],
                    hn,
                    pts.iter().map(|p| p[0]).collect(),
                    pts.iter().map(|p| p[1]).collect(),
                    true,
                )?;
                out.meta = self.meta.clone();
                out.display_normalized = self.display_normalized;
                out.fd_order = Some(VERIFY_FD_ORDER);
                return Ok(out);
            }
        }
        base.decimated(stride)
    }

    /// Position at an arbitrary parameter by local 8-point interpolation.
    pub fn interpolate(&self, s: f64) -> Vec2 {
        let h = self.h();
        [
            lagrange_uniform(&self.x, self.s[0], h, s, 8, self.closed),
            lagrange_uniform(&self.y, self.s[0], h, s, 8, self.closed),
        ]
    }

    /// Largest distance between two samples.
    pub fn diameter(&self) -> f64 {
        let pts = self.points();
        let mut best: f64 = 0.0;
        let step = (pts.len() / 2000).max(1);
        for (i, p) in pts.iter().enumerate().step_by(step) {
            for q in pts.iter().skip(i + 1) {
                best = best.max(((p[0] - q[0]).powi(2) + (p[1] - q[1]).powi(2)).sqrt());
            }
        }
        best
    }

    /// Mark the samples as closed if the point one step past the last sample
    /// coincides with the first sample; returns whether it did.
    pub fn detect_closure(&mut self, rel_tol: f64) -> bool {
        let n = self.len();
        if n < 16 {
            return false;
        }
        let h = self.h();
        let s_next = self.s[n - 1] + h;
        let tail = 8;
        let xs = &self.x[n - tail..];
        let ys = &self.y[n - tail..];
        let s0 = self.s[n - tail];
        let px = lagrange_uniform(xs, s0, h, s_next, tail, false);
        let py = lagrange_uniform(ys, s0, h, s_next, tail, false);
        let gap = ((px - self.x[0]).powi(2) + (py - self.y[0]).powi(2)).sqrt();
        let diam = self.diameter();
        if gap < rel_tol * diam {
            self.closed = true;
            self.period = Some(n as f64 * h);
            true
        } else {
            false
        }
    }

    /// CSV with columns s, x, y; 17 significant digits, LF line endings.
    pub fn to_csv(&self) -> String {
        let mut out = String::with_capacity(self.len() * 72 + 8);
        out.push_str("s,x,y\n");
        for i in 0..self.len() {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e}",
                self.s[i], self.x[i], self.y[i]
            );
        }
        out
    }

    /// Parse the CSV written by [`to_csv`](Self::to_csv). The grid must be
    /// uniform; the curve is read as open.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut s = Vec::new();
        let mut x = Vec::new();
        let mut y = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || (ln == 0 && line.starts_with(|c: char| c.is_alphabetic())) {
                continue;
            }
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols.len() != 3 {
                return Err(Error::InvalidInput(format!(
                    "line {}: expected 3 columns, found {}",
                    ln + 1,
                    cols.len()
                )));
            }
            let parse = |t: &str| {
                t.parse::<f64>()
                    .map_err(|e| Error::InvalidInput(format!("line {}: {e}", ln + 1)))
            };
            s.push(parse(cols[0])?);
            x.push(parse(cols[1])?);
            y.push(parse(cols[2])?);
        }
        if s.len() < 2 {
            return Err(Error::InvalidInput("too few rows".into()));
        }
        let h = (s[s.len() - 1] - s[0]) / (s.len() - 1) as f64;
        for w in s.windows(2) {
            if ((w[1] - w[0]) - h).abs() > 1e-6 * h.abs() {
                return Err(Error::InvalidInput("parameter grid is not uniform".into()));
            }
        }
        let mut c = CurveSamples::new(s[0], h, x, y, false)?;
        c.s = s;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("curve samples serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// Nodes dropped at each end of an open curve: two widths of the widest
/// stencil, since κ″ nests a first derivative on top of a third.
pub const BOUNDARY_MARGIN: usize = 8;

/// Stencil order of [`CurveSamples::verification_view`].
pub const VERIFY_FD_ORDER: usize = 10;
/// Target h·√max|κ| of the verification view.
pub const VERIFY_STEP: f64 = 0.13;
pub const VERIFY_MIN_SAMPLES: usize = 64;
