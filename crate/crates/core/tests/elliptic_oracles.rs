//! Weierstrass kernel against oracles that share no code with it: the
//! Laurent series at the origin, the half-period as an elliptic integral,
//! finite differences and the Legendre relation.

mod common;

use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;

use affine_elastica::numeric::gauss_legendre;
use affine_elastica::{Invariants, Weierstrass};

fn generic_sets() -> Vec<Invariants> {
    let mut v: Vec<Invariants> = common::case_labels()
        .iter()
        .map(|l| l.invariants())
        .filter(|i| !i.is_degenerate())
        .collect();
    v.push(Invariants::new(1.0 / 12.0, -0.15));
    v.push(Invariants::new(4.0, 0.3));
    v.push(Invariants::new(-2.0, 1.0));
    v
}

/// c_k in ℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2}.
fn laurent(inv: Invariants, terms: usize) -> Vec<f64> {
    let mut c = vec![0.0; terms + 1];
    c[2] = inv.g2() / 20.0;
    c[3] = inv.g3() / 28.0;
    for k in 4..=terms {
        let s: f64 = (2..=k - 2).map(|m| c[m] * c[k - m]).sum();
        c[k] = 3.0 * s / ((2 * k + 1) as f64 * (k - 3) as f64);
    }
    c
}

#[test]
fn matches_laurent_series_near_origin() {
    for inv in generic_sets() {
        let wf = Weierstrass::new(inv).unwrap();
        let lat = *wf.lattice();
        let r = 0.25 * lat.w1.min(lat.w2_im);
        let c = laurent(inv, 40);
        for i in 0..16 {
            let z = Complex64::from_polar(r * (0.3 + 0.7 * i as f64 / 15.0), 0.37 * i as f64);
            let mut series = 1.0 / (z * z);
            let z2 = z * z;
            let mut pw = z2;
            for ck in c.iter().skip(2) {
                series += ck * pw;
                pw *= z2;
            }
            let got = wf.wp(z).unwrap();
            assert!(
                (got - series).norm() < 1e-12 * series.norm(),
                "{inv:?} z = {z}: {got} vs {series}"
            );
        }
    }
}

#[test]
fn real_half_period_is_the_elliptic_integral() {
    // ϖ₁ = ∫_{e₁}^∞ dt/√(4t³ − g₂t − g₃); with t = e₁ + x² and
    // 4t³ − g₂t − g₃ = (t − e₁)(4t² + 4e₁t + 4e₁² − g₂) this is
    // ∫₀^∞ 2dx/√q(e₁ + x²), and x = tan θ removes the infinite range.
    let nodes = gauss_legendre(200);
    for inv in generic_sets() {
        let wf = Weierstrass::new(inv).unwrap();
        let lat = *wf.lattice();
        let e1 = lat.top_real_root();
        assert!(inv.cubic(e1).abs() < 1e-12 * (1.0 + e1.abs().powi(3)));
        let q = |t: f64| 4.0 * t * t + 4.0 * e1 * t + 4.0 * e1 * e1 - inv.g2();
        let half = PI / 4.0;
        let integral: f64 = nodes
            .iter()
            .map(|&(u, w)| {
                let th = half * (u + 1.0);
                let x = th.tan();
                let sec2 = 1.0 + x * x;
                w * half * 2.0 * sec2 / q(e1 + x * x).sqrt()
            })
            .sum();
        assert!(
            (integral - lat.w1).abs() < 1e-10 * lat.w1,
            "{inv:?}: {integral} vs {}",
            lat.w1
        );
        let p = wf.wp(Complex64::new(lat.w1, 0.0)).unwrap();
        assert!((p.re - e1).abs() < 1e-10 * e1.abs().max(1.0) && p.im.abs() < 1e-10);
    }
}

#[test]
fn legendre_relation_on_rectangular_lattices() {
    for inv in generic_sets()
        .into_iter()
        .filter(|i| i.discriminant() > 0.0)
    {
        let lat = *Weierstrass::new(inv).unwrap().lattice();
        let lhs = lat.eta1 * lat.w2_im - lat.eta2_im * lat.w1;
        assert!((lhs - PI / 2.0).abs() < 1e-11, "{inv:?}: {lhs}");
    }
}

#[test]
fn derivatives_agree_with_differences() {
    let h = 1e-4;
    for inv in generic_sets() {
        let wf = Weierstrass::new(inv).unwrap();
        let lat = *wf.lattice();
        for z in [
            Complex64::new(0.6 * lat.w1, 0.3 * lat.w2_im),
            Complex64::new(1.3 * lat.w1, -0.7 * lat.w2_im),
        ] {
            let d = |f: &dyn Fn(Complex64) -> Complex64| {
                (-f(z + 2.0 * h) + 8.0 * f(z + h) - 8.0 * f(z - h) + f(z - 2.0 * h)) / (12.0 * h)
            };
            let dwp = d(&|w| wf.wp(w).unwrap());
            let dzeta = d(&|w| wf.zeta(w).unwrap());
            let dls = d(&|w| wf.ln_sigma(w).unwrap());
            let j = wf.jet(z).unwrap();
            let scale = j.wp_prime.norm().max(1.0);
            assert!((dwp - j.wp_prime).norm() < 1e-8 * scale, "{inv:?}");
            assert!((dzeta + j.wp).norm() < 1e-8 * j.wp.norm().max(1.0));
            assert!((dls - j.zeta).norm() < 1e-8 * j.zeta.norm().max(1.0));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// ℘(z/λ; λ⁴g₂, λ⁶g₃) = λ²℘(z; g₂, g₃).
    #[test]
    fn homogeneity(g2 in -3.0f64..3.0, g3 in -1.0f64..1.0, lam in 0.3f64..3.0,
                   u in 0.05f64..0.95, v in 0.05f64..0.95) {
        let inv = Invariants::new(g2, g3);
        prop_assume!(!inv.is_degenerate() && inv.discriminant().abs() > 1e-3);
        let wf = Weierstrass::new(inv).unwrap();
        let lat = *wf.lattice();
        let z = Complex64::new(u * lat.w1, v * lat.w2_im);
        let scaled = Weierstrass::new(inv.rescaled(lam)).unwrap();
        let a = wf.wp(z).unwrap();
        let b = scaled.wp(z / lam);
        prop_assume!(b.is_ok());
        let b = b.unwrap();
        prop_assert!((b / (lam * lam) - a).norm() < 1e-9 * a.norm().max(1.0), "{a} vs {b}");
    }

    /// ℘ is even and ℘(z̄) = conj ℘(z) for real invariants.
    #[test]
    fn parity_and_reality(g2 in -3.0f64..3.0, g3 in -1.0f64..1.0,
                          x in -2.0f64..2.0, y in -2.0f64..2.0) {
        let inv = Invariants::new(g2, g3);
        prop_assume!(inv.discriminant().abs() > 1e-3);
        let wf = Weierstrass::new(inv).unwrap();
        let z = Complex64::new(x, y);
        if let (Ok(a), Ok(b), Ok(c)) = (wf.wp(z), wf.wp(-z), wf.wp(z.conj())) {
            prop_assert!((a - b).norm() < 1e-9 * a.norm().max(1.0));
            prop_assert!((a.conj() - c).norm() < 1e-9 * a.norm().max(1.0));
        }
    }
}
