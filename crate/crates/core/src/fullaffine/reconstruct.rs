//! Curves with prescribed full-affine curvature.
//!
//! With s the equi-affine parameter, the system
//!   s_F′ = √κ,  κ′ = 2κ^{3/2} κ_F(s_F),  γ′ = T,  T′ = N,  N′ = −κT
//! is integrated by RK4 from the gauge κ(0) = 1, γ(0) = 0, T(0) = e₁,
//! N(0) = e₂ at s = 0.

use crate::curvature::{CurveSamples, Grid, PointJet};
use crate::{Error, Result};

/// κ beyond this counts as a blow-up.
pub const BLOW_UP_KAPPA: f64 = 1e12;
pub const TANH_CURVE_HALF_RANGE: f64 = 0.75;
/// RK4 step at κ = 1; shortened where κ or κ_F is large.
const BASE_STEP: f64 = 1e-3;

type State = [f64; 8];

fn rhs(kf: &dyn Fn(f64) -> f64, y: &State) -> State {
    let [sf, k, _, _, tx, ty, nx, ny] = *y;
    let r = k.max(0.0).sqrt();
    [r, 2.0 * k * r * kf(sf), tx, ty, nx, ny, -k * tx, -k * ty]
}

fn rk4(kf: &dyn Fn(f64) -> f64, y: &State, h: f64) -> State {
    let add = |a: &State, b: &State, f: f64| -> State {
        let mut o = *a;
        for (o, b) in o.iter_mut().zip(b) {
            *o += f * b;
        }
        o
    };
    let k1 = rhs(kf, y);
    let k2 = rhs(kf, &add(y, &k1, 0.5 * h));
    let k3 = rhs(kf, &add(y, &k2, 0.5 * h));
    let k4 = rhs(kf, &add(y, &k3, h));
    let mut o = *y;
    for i in 0..8 {
        o[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    o
}

/// Integrate from parameter `s` to `target`, returning the new state.
fn advance(kf: &dyn Fn(f64) -> f64, mut y: State, mut s: f64, target: f64) -> Result<State> {
    let dir = (target - s).signum();
    while (target - s) * dir > 0.0 {
        let k = y[1];
        if !k.is_finite() || k > BLOW_UP_KAPPA || y.iter().any(|v| !v.is_finite()) {
            return Err(Error::BlowUp { s });
        }
        let rate = 1.0 + k.sqrt() * (1.0 + kf(y[0]).abs());
        let h = (BASE_STEP / rate).min((target - s).abs());
        y = rk4(kf, &y, dir * h);
        s += dir * h;
        if (target - s).abs() < 1e-15 * (1.0 + s.abs()) {
            s = target;
        }
    }
    if !(y[1] > 0.0) || y[1] > BLOW_UP_KAPPA || y.iter().any(|v| !v.is_finite()) {
        return Err(Error::BlowUp { s });
    }
    Ok(y)
}

/// Samples over `grid` of the curve with full-affine curvature `kf` as a
/// function of s_F, in the gauge fixed at s = 0. Jets are attached; the
/// s_F values go to meta["s_F"].
pub fn curve_from_full_affine_curvature(
    kf: &dyn Fn(f64) -> f64,
    grid: &Grid,
) -> Result<CurveSamples> {
    let pts = grid.points();
    let y0: State = [0.0, 1.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0];
    let mut states: Vec<Option<State>> = vec![None; pts.len()];
    // Forward from 0 over the nodes at s ≥ 0, then backward.
    let split = pts.partition_point(|&s| s < 0.0);
    let (mut y, mut s) = (y0, 0.0);
    for i in split..pts.len() {
        y = advance(kf, y, s, pts[i])?;
        s = pts[i];
        states[i] = Some(y);
    }
    let (mut y, mut s) = (y0, 0.0);
    for i in (0..split).rev() {
        y = advance(kf, y, s, pts[i])?;
        s = pts[i];
        states[i] = Some(y);
    }
    let states: Vec<State> = states
        .into_iter()
        .map(|v| v.expect("every node visited"))
        .collect();
    let jets: Vec<PointJet> = states
        .iter()
        .map(|y| {
            let [sf, k, x, yy, tx, ty, nx, ny] = *y;
            PointJet {
                p: [x, yy],
                d1: [tx, ty],
                d2: [nx, ny],
                d3: [-k * tx, -k * ty],
                kappa: k,
                dkappa: 2.0 * k.powf(1.5) * kf(sf),
            }
        })
        .collect();
    let mut c = CurveSamples::from_jets(grid, &jets)?;
    c.meta.insert(
        "s_F".into(),
        serde_json::json!(states.iter().map(|y| y[0]).collect::<Vec<_>>()),
    );
    Ok(c)
}

/// κ_F(s_F) = (3/√2) tanh(√2 s_F).
pub fn tanh_kappa_f(s_f: f64) -> f64 {
    3.0 * std::f64::consts::FRAC_1_SQRT_2 * (std::f64::consts::SQRT_2 * s_f).tanh()
}

/// The critical curve with κ_F = (3/√2) tanh(√2 s_F) on s ∈ [−0.75, 0.75].
///
/// κ = cosh³(√2 s_F) here, so both ends of the curve are reached at finite
/// s = ±(1/√2)∫₀^∞ sech^{3/2} ≈ ±0.8472; the sampled range stays clear of them.
pub fn tanh_curve(n: usize) -> Result<CurveSamples> {
    let mut c = curve_from_full_affine_curvature(
        &tanh_kappa_f,
        &Grid::open(-TANH_CURVE_HALF_RANGE, TANH_CURVE_HALF_RANGE, n),
    )?;
    c.meta.insert("tag".into(), "tanh_kappa_f".into());
    Ok(c)
}
