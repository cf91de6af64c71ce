#![allow(dead_code)]

use std::f64::consts::PI;

use affine_elastica::curvature::reparametrize_equiaffine;
use affine_elastica::elliptic::{invariants_from_Ptau, invariants_from_qQ};
use affine_elastica::{classify, Branch, CaseLabel, CurveSamples, Invariants};

/// One label per case tag, from every family.
pub fn case_labels() -> Vec<CaseLabel> {
    let closed = |i| classify(i, Branch::Closed).unwrap();
    let open = |i| classify(i, Branch::Open).unwrap();
    let mut v = vec![
        closed(invariants_from_qQ(1.0, 3.940854279)),
        closed(invariants_from_qQ(0.0, 2.0)),
        closed(invariants_from_qQ(-1.0, 6.0)),
        open(invariants_from_qQ(0.2, 0.8)),
        open(invariants_from_qQ(0.0, 1.0)),
        open(invariants_from_qQ(-0.5, 1.5)),
    ];
    for (p, t) in [(1.0, 2.0), (1.0, 0.5), (0.0, 1.0), (-1.0, 2.0), (-1.0, 0.5)] {
        v.push(open(invariants_from_Ptau(p, t)));
    }
    v.push(open(Invariants::new(0.75, -0.125)));
    v.push(closed(Invariants::new(0.75, -0.125)));
    v.push(open(Invariants::new(0.75, 0.125)));
    v.push(closed(Invariants::new(0.75, 0.125)));
    v.push(open(Invariants::new(0.0, -1.0)));
    v.push(open(Invariants::new(0.0, 0.0)));
    v
}

/// z(t) = e^{it} + d·e^{−2it}, a three-cusped hypotrochoid rounded off;
/// convex for d < 1/4.
pub fn hypotrochoid(d: f64, n: usize) -> CurveSamples {
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            [t.cos() + d * (2.0 * t).cos(), t.sin() - d * (2.0 * t).sin()]
        })
        .collect();
    reparametrize_equiaffine(&pts, true).unwrap()
}

/// Closed curve r(θ) = 1 + Σ a_k cos(kθ + φ_k), sampled in θ.
pub fn polar_curve(coeffs: &[(usize, f64, f64)], n: usize) -> CurveSamples {
    let pts: Vec<[f64; 2]> = (0..n)
        .map(|i| {
            let t = 2.0 * PI * i as f64 / n as f64;
            let r = 1.0
                + coeffs
                    .iter()
                    .map(|&(k, a, ph)| a * (k as f64 * t + ph).cos())
                    .sum::<f64>();
            [r * t.cos(), r * t.sin()]
        })
        .collect();
    reparametrize_equiaffine(&pts, true).unwrap()
}

/// Rotation·shear·diag(λ, 1/λ), so det = 1.
pub fn unimodular(theta: f64, shear: f64, lambda: f64) -> [[f64; 2]; 2] {
    let (s, c) = theta.sin_cos();
    let m = [[lambda, shear / lambda], [0.0, 1.0 / lambda]];
    [
        [c * m[0][0] - s * m[1][0], c * m[0][1] - s * m[1][1]],
        [s * m[0][0] + c * m[1][0], s * m[0][1] + c * m[1][1]],
    ]
}

pub fn scaled(a: [[f64; 2]; 2], f: f64) -> [[f64; 2]; 2] {
    [[a[0][0] * f, a[0][1] * f], [a[1][0] * f, a[1][1] * f]]
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
