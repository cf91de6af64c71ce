//! Affine maps fitted to sampled curves, the Euclidean display transform
//! and the double point of Case F.

use nalgebra::{DMatrix, DVector, Matrix2, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::curvature::{det2, CurveSamples, Vec2};
use crate::elliptic::{Invariants, Weierstrass};
use crate::numeric::brent;
use crate::{Error, Result};

use super::ClosureSolution;

/// p ↦ Lp + b.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub l: [[f64; 2]; 2],
    pub b: Vec2,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap {
            l: [[1.0, 0.0], [0.0, 1.0]],
            b: [0.0, 0.0],
        }
    }

    pub fn apply(&self, p: Vec2) -> Vec2 {
        [
            self.l[0][0] * p[0] + self.l[0][1] * p[1] + self.b[0],
            self.l[1][0] * p[0] + self.l[1][1] * p[1] + self.b[1],
        ]
    }

    /// self ∘ other.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let a = &self.l;
        let b = &other.l;
        let mut l = [[0.0; 2]; 2];
        for (i, row) in l.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        let t = self.apply(other.b);
        AffineMap { l, b: t }
    }

    pub fn pow(&self, k: u32) -> AffineMap {
        (0..k).fold(AffineMap::identity(), |acc, _| self.compose(&acc))
    }

    pub fn det(&self) -> f64 {
        self.l[0][0] * self.l[1][1] - self.l[0][1] * self.l[1][0]
    }

    /// max(‖L − I‖_max, ‖b‖/scale).
    pub fn identity_defect(&self, scale: f64) -> f64 {
        let dl = (self.l[0][0] - 1.0)
            .abs()
            .max(self.l[0][1].abs())
            .max(self.l[1][0].abs())
            .max((self.l[1][1] - 1.0).abs());
        dl.max(self.b[0].hypot(self.b[1]) / scale)
    }
}

/// Least-squares ψ with γ(s + shift) ≈ ψ(γ(s)).
pub fn fit_period_map(c: &CurveSamples, shift: f64) -> Result<AffineMap> {
    let n = c.len();
    let (s0, s1) = (c.s[0], c.s[n - 1]);
    let idx: Vec<usize> = (0..n)
        .filter(|&i| c.closed || c.s[i] + shift <= s1 && c.s[i] + shift >= s0)
        .collect();
    if idx.len() < 3 {
        return Err(Error::EllipseFitFailed {
            reason: "shift exceeds the sampled range".into(),
        });
    }
    let a = DMatrix::from_fn(idx.len(), 3, |r, col| match col {
        0 => c.x[idx[r]],
        1 => c.y[idx[r]],
        _ => 1.0,
    });
    let targets: Vec<Vec2> = idx.iter().map(|&i| c.interpolate(c.s[i] + shift)).collect();
    let svd = a.svd(true, true);
    let mut rows = [[0.0; 3]; 2];
    for (k, row) in rows.iter_mut().enumerate() {
        let rhs = DVector::from_iterator(idx.len(), targets.iter().map(|t| t[k]));
        let sol = svd
            .solve(&rhs, 1e-14)
            .map_err(|e| Error::EllipseFitFailed {
                reason: e.to_string(),
            })?;
        *row = [sol[0], sol[1], sol[2]];
    }
    Ok(AffineMap {
        l: [[rows[0][0], rows[0][1]], [rows[1][0], rows[1][1]]],
        b: [rows[0][2], rows[1][2]],
    })
}

/// Center and positive-definite S (det S = 1) with LᵀSL = S.
fn invariant_form(psi: &AffineMap) -> Result<(Vec2, Matrix2<f64>)> {
    let l = Matrix2::new(psi.l[0][0], psi.l[0][1], psi.l[1][0], psi.l[1][1]);
    let center = (Matrix2::identity() - l)
        .try_inverse()
        .map(|m| m * nalgebra::Vector2::new(psi.b[0], psi.b[1]))
        .ok_or_else(|| Error::EllipseFitFailed {
            reason: "period map has no unique fixed point".into(),
        })?;
    // Unknowns (a, b, c) of S = [[a, b], [b, c]]; LᵀSL − S = 0.
    let basis = [
        Matrix2::new(1.0, 0.0, 0.0, 0.0),
        Matrix2::new(0.0, 1.0, 1.0, 0.0),
        Matrix2::new(0.0, 0.0, 0.0, 1.0),
    ];
    let m = DMatrix::from_fn(4, 3, |r, col| {
        let e = l.transpose() * basis[col] * l - basis[col];
        e[(r / 2, r % 2)]
    });
    let svd = m.svd(false, true);
    let vt = svd.v_t.ok_or_else(|| Error::EllipseFitFailed {
        reason: "SVD failed".into(),
    })?;
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(2);
    let (a, b, c) = (vt[(k, 0)], vt[(k, 1)], vt[(k, 2)]);
    let mut s = Matrix2::new(a, b, b, c);
    if s[(0, 0)] < 0.0 {
        s = -s;
    }
    let det = s.determinant();
    if !(det > 0.0 && s[(0, 0)] > 0.0) {
        return Err(Error::EllipseFitFailed {
            reason: "period map preserves no ellipse".into(),
        });
    }
    Ok(([center[0], center[1]], s / det.sqrt()))
}

/// Maps the ellipse through the κ-maxima (the orbit of the 2ϖ₁ rotation)
/// to a circle centered at the origin. The linear part is S^{1/2} for the
/// invariant form S with det S = 1, so |det| = 1 and the parameter is kept;
/// the output is flagged as display-normalized.
pub fn euclidean_display_transform(
    c: &CurveSamples,
    sol: &ClosureSolution,
) -> Result<CurveSamples> {
    let psi = fit_period_map(c, 2.0 * sol.w1())?;
    let (o, s) = invariant_form(&psi)?;
    let eig = SymmetricEigen::new(s);
    let sqrt = eig.eigenvectors
        * Matrix2::from_diagonal(&eig.eigenvalues.map(|v| v.max(0.0).sqrt()))
        * eig.eigenvectors.transpose();
    let d = [[sqrt[(0, 0)], sqrt[(0, 1)]], [sqrt[(1, 0)], sqrt[(1, 1)]]];
    let b = [
        -(d[0][0] * o[0] + d[0][1] * o[1]),
        -(d[1][0] * o[0] + d[1][1] * o[1]),
    ];
    let mut out = c.transformed(d, b)?;
    out.display_normalized = true;
    out.meta
        .insert("display_map".into(), serde_json::json!({ "l": d, "b": b }));
    Ok(out)
}

/// Self-intersection of the Case-F arc between two consecutive poles.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DoublePoint {
    /// The arc meets itself at s = ϖ₁ ± u.
    pub u: f64,
    /// Double point minus γ(ϖ₁), in units of the affine normal γ″(ϖ₁).
    pub factor: f64,
    pub w1: f64,
}

/// Locate the double point of the Case-F curve with the given g₃.
pub fn case_f_double_point(g3: f64) -> Result<DoublePoint> {
    let wf = Weierstrass::new(Invariants::new(0.0, g3))?;
    let w1 = wf.lattice().w1;
    let r = 1.0 / g3.abs().sqrt();
    let sg = (-g3).signum();
    let pos = |s: f64| -> Result<Vec2> {
        let j = wf.jet(Complex64::new(s, 0.0))?;
        let (p, z) = (j.wp.re, j.zeta.re);
        Ok([r * z, sg * r * (p - z * z)])
    };
    let j = wf.jet(Complex64::new(w1, 0.0))?;
    let (p, dp, z) = (j.wp.re, j.wp_prime.re, j.zeta.re);
    let t = [-r * p, sg * r * (dp + 2.0 * z * p)];
    let nrm = [-r * dp, sg * r * (4.0 * p * p + 2.0 * z * dp)];
    let origin = pos(w1)?;
    let tn = det2(t, nrm);
    let along_t = |u: f64| -> f64 {
        match (pos(w1 + u), pos(w1 - u)) {
            (Ok(a), Ok(b)) => det2([a[0] - b[0], a[1] - b[1]], nrm) / tn,
            _ => f64::NAN,
        }
    };
    let mut prev = (1e-3 * w1, along_t(1e-3 * w1));
    let mut found = None;
    for k in 1..=999 {
        let u = w1 * (1e-3 + k as f64 * 0.998e-3);
        let v = along_t(u);
        if prev.1 * v < 0.0 {
            found = brent(prev.0, u, 1e-15, along_t);
            break;
        }
        prev = (u, v);
    }
    let u = found.ok_or_else(|| Error::InvalidInput(format!("no double point for g3 = {g3}")))?;
    let q = pos(w1 + u)?;
    let factor = det2(t, [q[0] - origin[0], q[1] - origin[1]]) / tn;
    Ok(DoublePoint { u, factor, w1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn affine_map_power() {
        let (c, s) = (0.3f64.cos(), 0.3f64.sin());
        let rot = AffineMap {
            l: [[c, -s], [s, c]],
            b: [1.0, 2.0],
        };
        let k = (2.0 * std::f64::consts::PI / 0.3).round() as u32;
        assert!(rot.pow(k).det() - 1.0 < 1e-12);
        let full = AffineMap {
            l: [[0.0, -1.0], [1.0, 0.0]],
            b: [1.0, 0.0],
        };
        assert!(full.pow(4).identity_defect(1.0) < 1e-14);
    }

    #[test]
    fn circle_period_map_is_rotation() {
        let c = CurveSamples::circle(512).unwrap();
        let psi = fit_period_map(&c, 1.0).unwrap();
        assert!((psi.l[0][0] - 1f64.cos()).abs() < 1e-10);
        assert!((psi.l[1][0] - 1f64.sin()).abs() < 1e-10);
        let (o, s) = invariant_form(&psi).unwrap();
        assert!(o[0].abs() < 1e-10 && o[1].abs() < 1e-10);
        assert!((s - Matrix2::identity()).norm() < 1e-8);
    }

    #[test]
    fn case_f_double_point_factor() {
        let dp = case_f_double_point(-1.0).unwrap();
        assert!((dp.w1 - 2.649958125428175).abs() < 1e-12);
        assert!((dp.u - 1.6697969485).abs() < 1e-8, "{}", dp.u);
        assert!(
            (dp.factor.abs() - 1.031854994).abs() < 1e-8,
            "{}",
            dp.factor
        );
    }
}
