//! SL(2) with the bi-invariant Lorentzian metric g(v, v) = −det v, and the
//! osculating parabolic congruence of a curve.
//!
//! The standard pointed parabola is t ↦ (t, t²/2) with special point at the
//! origin. It is already parametrized by equi-affine arc-length, so the map
//! onto the osculating parabola at γ(s) is p ↦ [T N]p + γ(s).

use serde::{Deserialize, Serialize};

use crate::curvature::{det2, CurveSamples, Vec2};
use crate::numeric::integrate_uniform;
use crate::{Error, Result};

pub type Mat2 = [[f64; 2]; 2];

/// Pseudo-orthonormal basis of the Lie algebra.
pub const E1: Mat2 = [[1.0, 0.0], [0.0, -1.0]];
pub const E2: Mat2 = [[0.0, 1.0], [1.0, 0.0]];
pub const E3: Mat2 = [[0.0, 1.0], [-1.0, 0.0]];

const DET_TOL: f64 = 1e-9;

/// [[a, b], [c, d]] with ad − bc = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SL2Point {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl SL2Point {
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !((det - 1.0).abs() <= DET_TOL) {
            return Err(Error::InvalidInput(format!("determinant {det} is not 1")));
        }
        Ok(SL2Point { a, b, c, d })
    }

    pub fn identity() -> Self {
        SL2Point {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    /// The matrix with columns `t` and `n`.
    pub fn from_columns(t: Vec2, n: Vec2) -> Result<Self> {
        SL2Point::new(t[0], n[0], t[1], n[1])
    }

    pub fn matrix(&self) -> Mat2 {
        [[self.a, self.b], [self.c, self.d]]
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn mul(&self, o: &SL2Point) -> SL2Point {
        let m = mat_mul(&self.matrix(), &o.matrix());
        SL2Point {
            a: m[0][0],
            b: m[0][1],
            c: m[1][0],
            d: m[1][1],
        }
    }

    pub fn inverse(&self) -> SL2Point {
        SL2Point {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        [self.a * p[0] + self.b * p[1], self.c * p[0] + self.d * p[1]]
    }
}

pub fn mat_mul(x: &Mat2, y: &Mat2) -> Mat2 {
    let mut m = [[0.0; 2]; 2];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = x[i][0] * y[0][j] + x[i][1] * y[1][j];
        }
    }
    m
}

fn mat_det(v: &Mat2) -> f64 {
    v[0][0] * v[1][1] - v[0][1] * v[1][0]
}

/// g(v, v) = −det v for a tangent vector at any point.
pub fn metric(v: &Mat2) -> f64 {
    -mat_det(v)
}

/// exp(t v) for traceless v, which is the geodesic from the identity.
pub fn sl2_geodesic(v: &Mat2, t: f64) -> Result<SL2Point> {
    let scale = v
        .iter()
        .flatten()
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1.0);
    if (v[0][0] + v[1][1]).abs() > 1e-12 * scale {
        return Err(Error::InvalidInput(
            "tangent vector must be traceless".into(),
        ));
    }
    // (tv)² = −det(tv)·I.
    let q = -mat_det(v) * t * t;
    let (c0, c1) = if q > 0.0 {
        let w = q.sqrt();
        (w.cosh(), w.sinh() / w)
    } else if q < 0.0 {
        let w = (-q).sqrt();
        (w.cos(), w.sin() / w)
    } else {
        (1.0, 1.0)
    };
    Ok(SL2Point {
        a: c0 + c1 * t * v[0][0],
        b: c1 * t * v[0][1],
        c: c1 * t * v[1][0],
        d: c0 + c1 * t * v[1][1],
    })
}

/// Equi-affine map of the standard pointed parabola onto the osculating
/// parabola at sample `i`: linear part [T N], translation γ(s_i).
pub fn osculating_parabola(c: &CurveSamples, i: usize) -> Result<(SL2Point, Vec2)> {
    if i >= c.len() {
        return Err(Error::InvalidInput(format!("index {i} out of range")));
    }
    let t = c.deriv(1)[i];
    let n = c.deriv(2)[i];
    if !(t.iter().chain(&n).all(|v| v.is_finite())) {
        return Err(Error::InvalidInput(format!(
            "frame is not finite at sample {i}"
        )));
    }
    // Finite differences leave det slightly off 1; renormalize N.
    let det = det2(t, n);
    let n = [n[0] / det, n[1] / det];
    Ok((SL2Point::from_columns(t, n)?, c.point(i)))
}

/// Points L(t, t²/2) + b for t in [−r, r].
pub fn parabola_points(l: &SL2Point, b: Vec2, r: f64, n: usize) -> Vec<Vec2> {
    (0..n)
        .map(|k| {
            let t = -r + 2.0 * r * k as f64 / (n.max(2) - 1) as f64;
            let p = l.apply([t, 0.5 * t * t]);
            [p[0] + b[0], p[1] + b[1]]
        })
        .collect()
}

/// Points of the osculating conic at sample `i` for σ in [−r, r]: an ellipse
/// when κ > 0, a hyperbola when κ < 0, the osculating parabola when κ = 0.
pub fn osculating_conic(c: &CurveSamples, i: usize, r: f64, n: usize) -> Vec<Vec2> {
    let t = c.deriv(1)[i];
    let nn = c.deriv(2)[i];
    let k = c.kappa()[i];
    let p = c.point(i);
    let w = k.abs().sqrt();
    (0..n)
        .map(|j| {
            let sg = -r + 2.0 * r * j as f64 / (n.max(2) - 1) as f64;
            let (ft, fnn) = if k > 0.0 {
                ((w * sg).sin() / w, (1.0 - (w * sg).cos()) / k)
            } else if k < 0.0 {
                ((w * sg).sinh() / w, ((w * sg).cosh() - 1.0) / -k)
            } else {
                (sg, 0.5 * sg * sg)
            };
            [
                p[0] + ft * t[0] + fnn * nn[0],
                p[1] + ft * t[1] + fnn * nn[1],
            ]
        })
        .collect()
}

/// The osculating pointed parabolas along a curve.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointedParabolaPath {
    pub samples: Vec<(SL2Point, Vec2)>,
    pub t: Vec<f64>,
}

pub fn osculating_congruence(c: &CurveSamples) -> Result<PointedParabolaPath> {
    let samples = (0..c.len())
        .map(|i| osculating_parabola(c, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(PointedParabolaPath {
        samples,
        t: c.s.clone(),
    })
}

impl PointedParabolaPath {
    /// g(𝒫′, 𝒫′) at every sample, 𝒫′ by finite differences of the SL(2)
    /// part along a uniformly sampled curve.
    pub fn speed_squared(&self, c: &CurveSamples) -> Vec<f64> {
        let entry = |f: fn(&SL2Point) -> f64| -> Vec<f64> {
            let v: Vec<f64> = self.samples.iter().map(|(p, _)| f(p)).collect();
            c.differentiate(&v, 1)
        };
        let da = entry(|p| p.a);
        let db = entry(|p| p.b);
        let dc = entry(|p| p.c);
        let dd = entry(|p| p.d);
        (0..self.samples.len())
            .map(|i| metric(&[[da[i], db[i]], [dc[i], dd[i]]]))
            .collect()
    }
}

/// Causal character of the congruence velocity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Signature {
    Timelike,
    Spacelike,
    Null,
    Mixed,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CongruenceLength {
    /// ∫√|g(𝒫′, 𝒫′)| ds.
    pub length: f64,
    pub signature: Signature,
}

/// Pseudo-Riemannian length of the osculating parabolic congruence.
///
/// κ may have either sign but must not vanish; the sign of g(𝒫′, 𝒫′) is
/// reported and √|·| integrated.
pub fn congruence_arclength(c: &CurveSamples) -> Result<CongruenceLength> {
    let k = c.kappa();
    let scale = k.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let sign = k.first().copied().unwrap_or(0.0).signum();
    for (i, &v) in k.iter().enumerate() {
        if !(v.abs() > 1e-10 * scale) || v.signum() != sign {
            return Err(Error::NonConvex { index: i, kappa: v });
        }
    }
    let path = osculating_congruence(c)?;
    let g = path.speed_squared(c);
    let idx = c.interior();
    let gmax = g[idx.clone()].iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let null = 1e-10 * gmax.max(1e-300);
    let (mut neg, mut pos) = (false, false);
    for &v in &g[idx] {
        neg |= v < -null;
        pos |= v > null;
    }
    let signature = match (neg, pos) {
        (true, false) => Signature::Timelike,
        (false, true) => Signature::Spacelike,
        (false, false) => Signature::Null,
        (true, true) => Signature::Mixed,
    };
    let speed: Vec<f64> = g.iter().map(|v| v.abs().sqrt()).collect();
    Ok(CongruenceLength {
        length: integrate_uniform(&speed, c.h(), c.closed),
        signature,
    })
}
