//! Jets of the critical curves for each case tag.
//!
//! Every constructor returns exact jets in an equi-affine parameter, so
//! |γ′, γ″| = 1 holds to rounding.

use num_complex::Complex64;

use crate::classifier::{Branch, CaseLabel, CaseTag};
use crate::curvature::{Grid, PointJet};
use crate::elliptic::{Invariants, LatticeData, Weierstrass};
use crate::{Error, Result};

use super::lame::{real_solutions, LameSolutionParams};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Jets plus bookkeeping for one synthesized curve.
pub(crate) struct Built {
    pub jets: Vec<PointJet>,
    pub method: &'static str,
    pub flips: Vec<f64>,
    pub c: Option<Complex64>,
    pub c0: Option<Complex64>,
}

impl Built {
    fn plain(jets: Vec<PointJet>, method: &'static str) -> Self {
        Built {
            jets,
            method,
            flips: Vec::new(),
            c: None,
            c0: None,
        }
    }
}

/// Real parameter values s with s − c₀ on the lattice, as (offset, period).
pub fn real_poles(lat: &LatticeData, c0: Complex64) -> Option<(f64, f64)> {
    let rect = lat.roots[1].im == 0.0;
    let step = if rect { 2.0 * lat.w2_im } else { lat.w2_im };
    let t = c0.im / step;
    let k = t.round();
    if (t - k).abs() > 1e-9 {
        return None;
    }
    let shift = if rect { 0.0 } else { k * lat.w1 };
    Some(((c0.re + shift).rem_euclid(2.0 * lat.w1), 2.0 * lat.w1))
}

/// Fail when the grid contains or straddles a point of the progression
/// offset + k·period.
pub(crate) fn check_poles(grid: &Grid, offset: f64, period: f64) -> Result<()> {
    if grid.closed {
        return Err(Error::GridHitsPole { s: offset });
    }
    let tol = 1e-9 * period;
    let k = ((grid.start - tol - offset) / period).ceil();
    let pole = offset + k * period;
    if pole <= grid.end + tol {
        return Err(Error::GridHitsPole { s: pole });
    }
    Ok(())
}

fn check_single_pole(grid: &Grid, at: f64) -> Result<()> {
    let tol = 1e-9 * (grid.end - grid.start).abs().max(1.0);
    if grid.start - tol <= at && at <= grid.end + tol {
        return Err(Error::GridHitsPole { s: at });
    }
    Ok(())
}

pub(crate) fn check_grid(grid: &Grid) -> Result<()> {
    if grid.n < crate::curvature::MIN_SAMPLES || !(grid.end > grid.start) {
        return Err(Error::InvalidInput(format!(
            "grid [{}, {}] with {} samples",
            grid.start, grid.end, grid.n
        )));
    }
    Ok(())
}

fn jet_from_tangent(p: [f64; 2], t: [f64; 2], dt: [f64; 2], kappa: f64, dkappa: f64) -> PointJet {
    PointJet {
        p,
        d1: t,
        d2: dt,
        d3: [-kappa * t[0], -kappa * t[1]],
        kappa,
        dkappa,
    }
}

/// Generic cases: tangent from two real Lamé solutions.
pub(crate) fn lame_case(inv: Invariants, branch: Branch, grid: &Grid) -> Result<Built> {
    let p = LameSolutionParams::new(inv, branch, *grid)?;
    if let Some((o, per)) = real_poles(p.weierstrass().lattice(), p.c0) {
        check_poles(grid, o, per)?;
    }
    let pair = real_solutions(&p)?;
    let cc = 3.0 * inv.g2();
    let jets = (0..pair.t.len())
        .map(|i| {
            let (t, dt) = (pair.t[i], pair.dt[i]);
            let (k, dk) = (pair.kappa[i], pair.dkappa[i]);
            // γ = (κ′T − κT′)/C differentiates to T when κ″ + κ² = C.
            let pos = match &pair.positions {
                Some(ps) => ps[i],
                None => [(dk * t[0] - k * dt[0]) / cc, (dk * t[1] - k * dt[1]) / cc],
            };
            jet_from_tangent(pos, t, dt, k, dk)
        })
        .collect();
    Ok(Built {
        jets,
        method: pair.method,
        flips: Vec::new(),
        c: Some(p.c),
        c0: Some(p.c0),
    })
}

/// g₃ = 0 cases: γ = k(s)·(1, s) with k² = σκ, σ = ±1 the sign of κ.
///
/// k changes sign at the zeros of κ, which keeps it smooth; those parameter
/// values are returned as flips.
pub(crate) fn sqrt_kappa_case(inv: Invariants, branch: Branch, grid: &Grid) -> Result<Built> {
    let wf = Weierstrass::new(inv)?;
    let lat = *wf.lattice();
    let c0 = match branch {
        Branch::Closed => lat.w2(),
        Branch::Open => Complex64::new(0.0, 0.0),
    };
    if let Some((o, per)) = real_poles(&lat, c0) {
        check_poles(grid, o, per)?;
    }
    let g2 = inv.g2();
    let pts = grid.points();
    let vals: Vec<(f64, f64)> = pts
        .iter()
        .map(|&s| {
            wf.jet(Complex64::new(s, 0.0) - c0)
                .map(|j| (-6.0 * j.wp.re, -6.0 * j.wp_prime.re))
        })
        .collect::<Result<_>>()?;
    let kmax = vals
        .iter()
        .fold(0.0f64, |m, v| if v.0.abs() > m.abs() { v.0 } else { m });
    let sigma = if kmax >= 0.0 { 1.0 } else { -1.0 };
    // κ vanishes at the odd multiples of ϖ₁ unless it keeps a strict sign.
    let vanishes = match branch {
        Branch::Closed => true,
        Branch::Open => lat.roots[0].im != 0.0,
    };
    let w1 = lat.w1;
    let mut flips = Vec::new();
    if vanishes {
        let first = ((grid.start - w1) / (2.0 * w1)).ceil();
        let mut f = w1 + first * 2.0 * w1;
        while f <= grid.end {
            if pts.iter().any(|&s| (s - f).abs() < 1e-9 * w1) {
                return Err(Error::GridHitsPole { s: f });
            }
            flips.push(f);
            f += 2.0 * w1;
        }
    }
    let r = 1.0 / (3.0 * g2.abs()).sqrt();
    let flip_x = if sigma * g2 < 0.0 { -1.0 } else { 1.0 };
    let jets = pts
        .iter()
        .zip(&vals)
        .map(|(&s, &(kappa, dkappa))| {
            let eps = if vanishes && ((s + w1) / (2.0 * w1)).floor().rem_euclid(2.0) == 1.0 {
                -1.0
            } else {
                1.0
            };
            let k = eps * (sigma * kappa).max(0.0).sqrt();
            let dk_sign = (eps * sigma * dkappa).signum();
            let k1 = dk_sign * (sigma * (1.5 * g2 - k.powi(4) / 6.0)).max(0.0).sqrt();
            let k2 = -sigma * k.powi(3) / 3.0;
            let k3 = -sigma * k * k * k1;
            let v = |a: f64, b: f64| [flip_x * r * a, r * b];
            PointJet {
                p: v(k, k * s),
                d1: v(k1, k1 * s + k),
                d2: v(k2, k2 * s + 2.0 * k1),
                d3: v(k3, k3 * s + 3.0 * k2),
                kappa,
                dkappa,
            }
        })
        .collect();
    Ok(Built {
        jets,
        method: "sqrt_kappa",
        flips,
        c: None,
        c0: Some(c0),
    })
}

/// Normalizes a pair of real tangent solutions to unit Wronskian and builds
/// positions from γ = (κ′T − κT′)/C.
fn closed_form_tangent(
    grid: &Grid,
    cc: f64,
    f: impl Fn(f64) -> ([f64; 2], [f64; 2], f64, f64),
) -> Vec<PointJet> {
    let raw: Vec<_> = grid.points().into_iter().map(&f).collect();
    let w = raw
        .iter()
        .map(|(t, dt, _, _)| t[0] * dt[1] - t[1] * dt[0])
        .sum::<f64>()
        / raw.len() as f64;
    let r = 1.0 / w.abs().sqrt();
    let sg = w.signum();
    raw.into_iter()
        .map(|(t, dt, k, dk)| {
            let t = [r * t[0], sg * r * t[1]];
            let dt = [r * dt[0], sg * r * dt[1]];
            let p = [(dk * t[0] - k * dt[0]) / cc, (dk * t[1] - k * dt[1]) / cc];
            jet_from_tangent(p, t, dt, k, dk)
        })
        .collect()
}

/// Case D: κ = 9E w² − 6E with w = coth(as) (D.a) or tanh(as) (D.c),
/// a = √(−3E/2), E < 0.
pub(crate) fn case_d(e: f64, hyperbolic_tan: bool, grid: &Grid) -> Result<Built> {
    if !(e < 0.0) {
        return Err(Error::InvalidInput(format!("case D needs E < 0, got {e}")));
    }
    if !hyperbolic_tan {
        check_single_pole(grid, 0.0)?;
    }
    let a = (-1.5 * e).sqrt();
    let b = (-3.0 * e).sqrt();
    let cc = 9.0 * e * e;
    let jets = closed_form_tangent(grid, cc, |s| {
        let w = if hyperbolic_tan {
            (a * s).tanh()
        } else {
            1.0 / (a * s).tanh()
        };
        let dw = a * (1.0 - w * w);
        let (ep, em) = ((b * s).exp(), (-b * s).exp());
        let (p1, p2) = (
            1.0 - 3.0 * SQRT2 * w + 3.0 * w * w,
            1.0 + 3.0 * SQRT2 * w + 3.0 * w * w,
        );
        let (dp1, dp2) = ((-3.0 * SQRT2 + 6.0 * w) * dw, (3.0 * SQRT2 + 6.0 * w) * dw);
        let t = [ep * p1, em * p2];
        let dt = [ep * (b * p1 + dp1), em * (-b * p2 + dp2)];
        (t, dt, 9.0 * e * w * w - 6.0 * e, 18.0 * e * w * dw)
    });
    Ok(Built::plain(
        jets,
        if hyperbolic_tan {
            "closed_form_tanh"
        } else {
            "closed_form_coth"
        },
    ))
}

/// Case E: κ = −9E tan²(as) − 6E, a = √(3E/2), E > 0.
pub(crate) fn case_e(e: f64, grid: &Grid) -> Result<Built> {
    if !(e > 0.0) {
        return Err(Error::InvalidInput(format!("case E needs E > 0, got {e}")));
    }
    let a = (1.5 * e).sqrt();
    let b = (3.0 * e).sqrt();
    check_poles(
        grid,
        std::f64::consts::FRAC_PI_2 / a,
        std::f64::consts::PI / a,
    )?;
    let cc = 9.0 * e * e;
    let jets = closed_form_tangent(grid, cc, |s| {
        let w = (a * s).tan();
        let dw = a * (1.0 + w * w);
        let (sn, cs) = (b * s).sin_cos();
        let q = 1.0 - 3.0 * w * w;
        let dq = -6.0 * w * dw;
        let t = [
            cs * q + 3.0 * SQRT2 * sn * w,
            -sn * q + 3.0 * SQRT2 * cs * w,
        ];
        let dt = [
            -b * sn * q + cs * dq + 3.0 * SQRT2 * (b * cs * w + sn * dw),
            -b * cs * q - sn * dq + 3.0 * SQRT2 * (-b * sn * w + cs * dw),
        ];
        (t, dt, -9.0 * e * w * w - 6.0 * e, -18.0 * e * w * dw)
    });
    Ok(Built::plain(jets, "closed_form_tan"))
}

/// κ ≡ 3E: the circle of radius (3E)^{−3/4}, an ellipse up to equi-affine maps.
pub(crate) fn case_ellipse(e: f64, grid: &Grid) -> Result<Built> {
    if !(e > 0.0) {
        return Err(Error::InvalidInput(format!("ellipse needs E > 0, got {e}")));
    }
    let w = (3.0 * e).sqrt();
    let r = w.powf(-1.5);
    let jets = grid
        .points()
        .into_iter()
        .map(|s| {
            let (sn, cs) = (w * s).sin_cos();
            PointJet {
                p: [r * cs, r * sn],
                d1: [-r * w * sn, r * w * cs],
                d2: [-r * w * w * cs, -r * w * w * sn],
                d3: [r * w.powi(3) * sn, -r * w.powi(3) * cs],
                kappa: w * w,
                dkappa: 0.0,
            }
        })
        .collect();
    Ok(Built::plain(jets, "closed_form_circle"))
}

/// Case F: (ζ(s), ℘(s) − ζ(s)²) scaled by 1/√|g₃|, with |X′, X″| = −g₃.
pub(crate) fn case_f(g3: f64, grid: &Grid) -> Result<Built> {
    let wf = Weierstrass::new(Invariants::new(0.0, g3))?;
    let lat = *wf.lattice();
    check_poles(grid, 0.0, 2.0 * lat.w1)?;
    let w = -g3;
    let r = 1.0 / w.abs().sqrt();
    let sg = w.signum();
    let jets = grid
        .points()
        .into_iter()
        .map(|s| {
            let j = wf.jet(Complex64::new(s, 0.0))?;
            let (p, dp, z) = (j.wp.re, j.wp_prime.re, j.zeta.re);
            let ddp = 6.0 * p * p;
            let v = |a: f64, b: f64| [r * a, sg * r * b];
            Ok(PointJet {
                p: v(z, p - z * z),
                d1: v(-p, dp + 2.0 * z * p),
                d2: v(-dp, 4.0 * p * p + 2.0 * z * dp),
                d3: v(-ddp, 6.0 * p * dp + 2.0 * z * ddp),
                kappa: -6.0 * p,
                dkappa: -6.0 * dp,
            })
        })
        .collect::<Result<_>>()?;
    Ok(Built {
        jets,
        method: "zeta_wp",
        flips: Vec::new(),
        c: None,
        c0: Some(Complex64::new(0.0, 0.0)),
    })
}

/// Case G: (s⁴, s⁻¹)/√20 with κ = −6/s².
pub(crate) fn case_g(grid: &Grid) -> Result<Built> {
    check_single_pole(grid, 0.0)?;
    let r = 1.0 / 20f64.sqrt();
    let jets = grid
        .points()
        .into_iter()
        .map(|s| PointJet {
            p: [r * s.powi(4), r / s],
            d1: [4.0 * r * s.powi(3), -r / (s * s)],
            d2: [12.0 * r * s * s, 2.0 * r / s.powi(3)],
            d3: [24.0 * r * s, -6.0 * r / s.powi(4)],
            kappa: -6.0 / (s * s),
            dkappa: 12.0 / s.powi(3),
        })
        .collect();
    Ok(Built::plain(jets, "closed_form_power"))
}

pub(crate) fn build(label: &CaseLabel, grid: &Grid) -> Result<Built> {
    check_grid(grid)?;
    let inv = label.invariants();
    let e = || label.params.e.unwrap_or_else(|| label.g3.cbrt());
    match label.tag {
        CaseTag::A1 | CaseTag::A3 => lame_case(inv, Branch::Closed, grid),
        CaseTag::B1 | CaseTag::B3 | CaseTag::C1 | CaseTag::C2 | CaseTag::C4 | CaseTag::C5 => {
            lame_case(inv, Branch::Open, grid)
        }
        CaseTag::A2 => sqrt_kappa_case(inv, Branch::Closed, grid),
        CaseTag::B2 | CaseTag::C3 => sqrt_kappa_case(inv, Branch::Open, grid),
        CaseTag::Da => case_d(e(), false, grid),
        CaseTag::Dc => case_d(e(), true, grid),
        CaseTag::ECase => case_e(e(), grid),
        CaseTag::Ellipse => case_ellipse(e(), grid),
        CaseTag::F => case_f(label.g3, grid),
        CaseTag::G => case_g(grid),
    }
}
