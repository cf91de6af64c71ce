//! Closure of the oval branch with q = 1 normalization.
//!
//! Over one step of 2ϖ₁ the curve is mapped to itself by an equi-affine
//! rotation; the rotation number is the real quantity returned by
//! [`closure_lhs`], and the curve closes after finitely many steps exactly
//! when it is a rational n/m.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::classifier::{classify, Branch};
use crate::curvature::{CurveSamples, Grid};
use crate::elliptic::{invariants_from_qQ, Invariants, LatticeData, Weierstrass};
use crate::numeric::brent;
use crate::{Error, Result};

use super::synthesize;

pub const CLOSURE_Q_MIN: f64 = 1.0 + 1e-3;
pub const CLOSURE_Q_MAX: f64 = 1e3;
const SCAN_POINTS: usize = 400;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClosureSolution {
    pub m: u32,
    pub n: u32,
    #[serde(rename = "Q")]
    pub big_q: f64,
    pub inv: Invariants,
    pub lattice: LatticeData,
    /// c = ϖ₁ + di; negative, as in the published table.
    pub d: f64,
    pub lhs: f64,
}

impl ClosureSolution {
    pub fn w1(&self) -> f64 {
        self.lattice.w1
    }

    /// |ϖ₂|.
    pub fn w2_abs(&self) -> f64 {
        self.lattice.w2_im
    }

    pub fn c(&self) -> Complex64 {
        Complex64::new(self.lattice.w1, self.d)
    }

    /// 4mϖ₁, after which the curve is closed.
    pub fn period(&self) -> f64 {
        4.0 * self.m as f64 * self.lattice.w1
    }
}

/// Solve ℘(ϖ₁ + di) = −g₃/g₂ for d ∈ [0, |ϖ₂|].
fn c_on_vertical_ray(wf: &Weierstrass) -> Result<f64> {
    let inv = wf.invariants();
    let target = -inv.g3() / inv.g2();
    let lat = wf.lattice();
    let f = |d: f64| {
        wf.wp(Complex64::new(lat.w1, d))
            .map(|p| p.re - target)
            .unwrap_or(f64::NAN)
    };
    let (a, b) = (0.0, lat.w2_im);
    let (fa, fb) = (f(a), f(b));
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if !(fa * fb < 0.0) {
        return Err(Error::NoSuchC { target });
    }
    brent(a, b, 1e-15, f).ok_or(Error::NoSuchC { target })
}

/// The closure quantity with its imaginary part, and |d|, for q = 1.
pub fn closure_lhs_complex(big_q: f64) -> Result<(Complex64, f64)> {
    if !(big_q > 1.0) {
        return Err(Error::InvalidInput(format!(
            "closure needs Q > 1, got {big_q}"
        )));
    }
    let wf = Weierstrass::new(invariants_from_qQ(1.0, big_q))?;
    let d = c_on_vertical_ray(&wf)?;
    let lat = wf.lattice();
    let c = Complex64::new(lat.w1, d);
    let j = wf.jet(c)?;
    let inner = (j.wp_prime / (2.0 * j.wp) + j.zeta) * lat.w1 - lat.eta1 * c;
    Ok((inner * Complex64::new(0.0, 2.0 / PI), d))
}

/// Rotation number of the 2ϖ₁ step for q = 1 and the given Q.
pub fn closure_lhs(big_q: f64) -> Result<f64> {
    Ok(closure_lhs_complex(big_q)?.0.re)
}

fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    let (la, lb) = (a.ln(), b.ln());
    (0..n)
        .map(|i| (la + (lb - la) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Q with closure_lhs(Q) = n/m, found by a log-grid scan over
/// [1 + 10⁻³, 10³] and Brent refinement.
pub fn solve_closure(m: u32, n: u32) -> Result<ClosureSolution> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidInput("m and n must be positive".into()));
    }
    let target = n as f64 / m as f64;
    let f = |q: f64| closure_lhs(q).map(|v| v - target).unwrap_or(f64::NAN);
    let grid = log_grid(CLOSURE_Q_MIN, CLOSURE_Q_MAX, SCAN_POINTS);
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for &q in &grid {
        let v = f(q);
        if !v.is_finite() {
            prev = None;
            continue;
        }
        if let Some((qp, vp)) = prev {
            if vp * v <= 0.0 {
                bracket = Some((qp, q));
                break;
            }
        }
        prev = Some((q, v));
    }
    let (a, b) = bracket.ok_or(Error::NotBracketed { m, n })?;
    let big_q = brent(a, b, 1e-13, f).ok_or(Error::NotBracketed { m, n })?;
    let inv = invariants_from_qQ(1.0, big_q);
    let lattice = *Weierstrass::new(inv)?.lattice();
    let (lhs, d) = closure_lhs_complex(big_q)?;
    Ok(ClosureSolution {
        m,
        n,
        big_q,
        inv,
        lattice,
        d: -d,
        lhs: lhs.re,
    })
}

/// The closed curve of a solution, sampled over 4mϖ₁ with `n` points.
pub fn synthesize_closure(sol: &ClosureSolution, n: usize) -> Result<CurveSamples> {
    let label = classify(sol.inv, Branch::Closed)?;
    let mut c = synthesize(&label, &Grid::closed(0.0, sol.period(), n))?;
    c.meta.insert("m".into(), sol.m.into());
    c.meta.insert("n".into(), sol.n.into());
    c.meta.insert("Q".into(), sol.big_q.into());
    Ok(c)
}

/// The bracket that would have to vanish for a periodic Case-A.3 curve
/// (q = −1), as a real number: 2R/π with
/// R = ϖ₁√(−g₃/g₂) − ζ(ϖ₁)d + ϖ₁(ζ(ϖ₂+d) − ζ(ϖ₂)) and ℘(ϖ₂+d) = −g₃/g₂.
pub fn a3_nonperiodicity(big_q: f64) -> Result<f64> {
    let inv = invariants_from_qQ(-1.0, big_q);
    let wf = Weierstrass::new(inv)?;
    let lat = *wf.lattice();
    let target = -inv.g3() / inv.g2();
    if target < 0.0 {
        return Err(Error::InvalidInput(format!(
            "Q = {big_q} is not a Case-A.3 value"
        )));
    }
    let w2 = lat.w2();
    let f = |d: f64| wf.wp(w2 + d).map(|p| p.re - target).unwrap_or(f64::NAN);
    let d = brent(0.0, lat.w1, 1e-15, f).ok_or(Error::NoSuchC { target })?;
    let zd = wf.zeta(w2 + d)?;
    let z2 = wf.zeta(w2)?;
    let r = lat.w1 * target.sqrt() - lat.eta1 * d + lat.w1 * (zd - z2);
    Ok(2.0 * r.re / PI)
}
