//! Solutions of the Lamé equation φ″ = 6℘(z)φ.
//!
//! φ₁ is the derivative of Φ(z) = σ(z+c)/σ(z)·e^{λz} with ℘(c) = −g₃/g₂ and
//! λ = −℘′(c)/(2℘(c)) − ζ(c); φ₂ follows by reduction of order.

use num_complex::Complex64;

use crate::classifier::Branch;
use crate::curvature::Grid;
use crate::elliptic::{ComplexPoint, Invariants, Weierstrass};
use crate::numeric::{brent, gauss_legendre};
use crate::{Error, Result};

const GL_NODES: usize = 16;

/// Data fixing one family of Lamé solutions along a real grid.
#[derive(Clone, Debug)]
pub struct LameSolutionParams {
    pub inv: Invariants,
    /// Solution of ℘(c) = −g₃/g₂.
    pub c: ComplexPoint,
    /// Branch shift; the curve uses z = s − c₀.
    pub c0: ComplexPoint,
    pub s_grid: Grid,
    wf: Weierstrass,
    lambda: ComplexPoint,
}

/// Φ, φ₁ = Φ′, φ₁′ and ℘ at one point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LameJet {
    pub big_phi: ComplexPoint,
    pub phi: ComplexPoint,
    pub dphi: ComplexPoint,
    pub wp: ComplexPoint,
    pub wp_prime: ComplexPoint,
}

impl LameSolutionParams {
    /// Pick c on one of the rays where ℘ is real and the shift c₀ for the
    /// branch (ϖ₂ for the oval, 0 otherwise).
    pub fn new(inv: Invariants, branch: Branch, s_grid: Grid) -> Result<Self> {
        let wf = Weierstrass::new(inv)?;
        let mut c = solve_c(&wf)?;
        let c0 = match branch {
            Branch::Closed => {
                // Deterministic representative with Im c ∈ (−|ϖ₂|, 0].
                if c.im > 0.0 {
                    c = c.conj();
                }
                wf.lattice().w2()
            }
            Branch::Open => Complex64::new(0.0, 0.0),
        };
        Self::with_c(wf, c, c0, s_grid)
    }

    pub fn with_c(
        wf: Weierstrass,
        c: ComplexPoint,
        c0: ComplexPoint,
        s_grid: Grid,
    ) -> Result<Self> {
        let j = wf.jet(c)?;
        if j.wp.norm() < 1e-300 {
            return Err(Error::InvalidInput("℘(c) = 0 has no Lamé parameter".into()));
        }
        let lambda = -j.wp_prime / (2.0 * j.wp) - j.zeta;
        Ok(LameSolutionParams {
            inv: wf.invariants(),
            c,
            c0,
            s_grid,
            wf,
            lambda,
        })
    }

    pub fn lambda(&self) -> ComplexPoint {
        self.lambda
    }

    pub fn weierstrass(&self) -> &Weierstrass {
        &self.wf
    }

    /// |℘(c) + g₃/g₂|.
    pub fn c_defect(&self) -> f64 {
        let target = -self.inv.g3() / self.inv.g2();
        self.wf
            .wp(self.c)
            .map(|p| (p - target).norm())
            .unwrap_or(f64::INFINITY)
    }

    /// ln μ for the multiplier Φ(z + 2ϖ₁) = μΦ(z).
    pub fn ln_multiplier(&self) -> ComplexPoint {
        let lat = self.wf.lattice();
        2.0 * lat.eta1 * self.c + 2.0 * self.lambda * lat.w1
    }

    /// Φ, φ₁, φ₁′ at z.
    ///
    /// Re z is first reduced to [−ϖ₁, ϖ₁] and the multiplier applied, which
    /// keeps σ away from large arguments.
    pub fn jet(&self, z: ComplexPoint) -> Result<LameJet> {
        let w1 = self.wf.lattice().w1;
        let k = (z.re / (2.0 * w1)).round();
        if k == 0.0 {
            return self.jet_reduced(z);
        }
        let j = self.jet_reduced(z - 2.0 * k * w1)?;
        let mu = (k * self.ln_multiplier()).exp();
        Ok(LameJet {
            big_phi: mu * j.big_phi,
            phi: mu * j.phi,
            dphi: mu * j.dphi,
            ..j
        })
    }

    fn jet_reduced(&self, z: ComplexPoint) -> Result<LameJet> {
        let j0 = self.wf.jet(z)?;
        let j1 = self.wf.jet(z + self.c)?;
        let ls = self.wf.ln_sigma(z + self.c)? - self.wf.ln_sigma(z)? + self.lambda * z;
        let big_phi = ls.exp();
        let g = j1.zeta - j0.zeta + self.lambda;
        Ok(LameJet {
            big_phi,
            phi: big_phi * g,
            dphi: big_phi * (g * g - j1.wp + j0.wp),
            wp: j0.wp,
            wp_prime: j0.wp_prime,
        })
    }
}

/// Find c with ℘(c) = −g₃/g₂ on the ray where ℘ takes that real value.
pub fn solve_c(wf: &Weierstrass) -> Result<ComplexPoint> {
    let inv = wf.invariants();
    let target = -inv.g3() / inv.g2();
    let lat = *wf.lattice();
    let (w1, w2) = (lat.w1, lat.w2_im);
    // Each ray is d ↦ base + dir·d on [lo, hi]; ℘ is real and monotone there.
    let (base, dir, lo, hi) = if lat.roots[0].im == 0.0 && lat.roots[1].im == 0.0 {
        let [e1, e2, e3] = [lat.roots[0].re, lat.roots[1].re, lat.roots[2].re];
        if target > e1 {
            (
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                1e-4 * w1,
                w1,
            )
        } else if target >= e2 {
            (Complex64::new(w1, 0.0), Complex64::new(0.0, 1.0), 0.0, w2)
        } else if target >= e3 {
            (Complex64::new(0.0, w2), Complex64::new(1.0, 0.0), 0.0, w1)
        } else {
            (
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 1.0),
                1e-4 * w2,
                w2,
            )
        }
    } else if target >= lat.top_real_root() {
        (
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 0.0),
            1e-4 * w1,
            w1,
        )
    } else {
        (
            Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 1.0),
            1e-4 * w2,
            w2,
        )
    };
    let f = |d: f64| {
        wf.wp(base + dir * d)
            .map(|p| p.re - target)
            .unwrap_or(f64::NAN)
    };
    let (flo, fhi) = (f(lo), f(hi));
    let scale = target.abs().max(inv.g2().abs().sqrt()).max(1e-300);
    let d = if flo.abs() <= 1e-14 * scale {
        lo
    } else if fhi.abs() <= 1e-14 * scale {
        hi
    } else {
        brent(lo, hi, 1e-15 * (hi - lo).max(1.0), f).ok_or(Error::NoSuchC { target })?
    };
    Ok(base + dir * d)
}

/// φ₁(z).
pub fn lame_phi1(z: ComplexPoint, p: &LameSolutionParams) -> Result<ComplexPoint> {
    Ok(p.jet(z)?.phi)
}

/// Gauss–Legendre integral of 1/φ₁² along the segment [a, b] split into
/// `panels` equal pieces.
fn segment(
    p: &LameSolutionParams,
    a: Complex64,
    b: Complex64,
    panels: usize,
    floor: f64,
) -> Result<Complex64> {
    let gl = gauss_legendre(GL_NODES);
    let mut acc = Complex64::new(0.0, 0.0);
    let panels = panels.max(1);
    for k in 0..panels {
        let pa = a + (b - a) * (k as f64 / panels as f64);
        let pb = a + (b - a) * ((k + 1) as f64 / panels as f64);
        let half = (pb - pa) * 0.5;
        let mid = (pa + pb) * 0.5;
        for &(x, w) in gl.iter() {
            let z = mid + half * x;
            let phi = p.jet(z)?.phi;
            if phi.norm() < floor {
                return Err(Error::PathThroughZero { s: z.re });
            }
            acc += half * w / (phi * phi);
        }
    }
    Ok(acc)
}

/// Integral of 1/φ₁² from a to b with panels graded geometrically toward b,
/// where φ₁ may be small.
fn graded_segment(
    p: &LameSolutionParams,
    a: Complex64,
    b: Complex64,
    end: LameJet,
) -> Result<Complex64> {
    let len = (b - a).norm();
    if len == 0.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    // Distance from b to a nearby zero of φ₁, to first order.
    let dist = if end.dphi.norm() > 0.0 {
        end.phi.norm() / end.dphi.norm()
    } else {
        len
    };
    let mut acc = Complex64::new(0.0, 0.0);
    let mut t0 = 0.0;
    let mut rest = 1.0;
    for _ in 0..60 {
        if rest * len <= 0.5 * dist {
            break;
        }
        let t1 = 1.0 - 0.5 * rest;
        acc += segment(p, a + (b - a) * t0, a + (b - a) * t1, 1, 0.0)?;
        t0 = t1;
        rest = 1.0 - t1;
    }
    acc += segment(p, a + (b - a) * t0, b, 1, 0.0)?;
    Ok(acc)
}

fn default_offset(p: &LameSolutionParams) -> f64 {
    let lat = p.wf.lattice();
    0.25 * lat.w1.min(lat.w2_im)
}

/// φ₂(z) = φ₁(z)·∫ 1/φ₁² along z_b → z_b + iδ → z + iδ → z, with z_b the
/// start of the parameter grid shifted by −c₀. The Wronskian φ₁φ₂′ − φ₂φ₁′
/// equals 1.
pub fn lame_phi2(z: ComplexPoint, p: &LameSolutionParams) -> Result<ComplexPoint> {
    let zb = Complex64::new(p.s_grid.start, 0.0) - p.c0;
    let delta = Complex64::new(0.0, default_offset(p));
    let end = p.jet(z)?;
    let h = (z - zb).norm();
    let panels = (h / (0.5 * delta.im)).ceil() as usize + 1;
    let floor = 1e-12 * end.phi.norm().max(1e-300);
    let zb_jet = p.jet(zb)?;
    let i = -graded_segment(p, zb + delta, zb, zb_jet)?
        + segment(p, zb + delta, z + delta, panels, floor)?
        + graded_segment(p, z + delta, z, end)?;
    Ok(end.phi * i)
}

/// Two real solutions with their derivatives on a real grid.
#[derive(Clone, Debug)]
pub struct RealPair {
    /// (u, v) per node.
    pub t: Vec<[f64; 2]>,
    /// (u′, v′) per node.
    pub dt: Vec<[f64; 2]>,
    /// Curve positions when a closed-form antiderivative is available.
    pub positions: Option<Vec<[f64; 2]>>,
    /// κ = −6℘(s − c₀) and κ′.
    pub kappa: Vec<f64>,
    pub dkappa: Vec<f64>,
    /// "eq12" when Re φ₁ and Im φ₁ are independent, "eq11" otherwise.
    pub method: &'static str,
}

/// Real, unimodular pair (u, v) with uv′ − vu′ = 1 along the grid.
///
/// Uses (Re φ₁, Im φ₁) when these are independent. Otherwise φ₁ is a
/// constant phase times a real function f, and the pair (f, f∫1/f²) is used.
pub fn real_solutions(p: &LameSolutionParams) -> Result<RealPair> {
    let pts = p.s_grid.points();
    let jets: Vec<LameJet> = pts
        .iter()
        .map(|&s| p.jet(Complex64::new(s, 0.0) - p.c0))
        .collect::<Result<_>>()?;
    let kappa: Vec<f64> = jets.iter().map(|j| -6.0 * j.wp.re).collect();
    let dkappa: Vec<f64> = jets.iter().map(|j| -6.0 * j.wp_prime.re).collect();
    let ws: Vec<f64> = jets.iter().map(|j| (j.phi.conj() * j.dphi).im).collect();
    let w = ws.iter().sum::<f64>() / ws.len() as f64;
    let scale = jets
        .iter()
        .map(|j| j.phi.norm() * j.dphi.norm())
        .fold(0.0f64, f64::max);
    let spread = ws.iter().map(|v| (v - w).abs()).fold(0.0f64, f64::max);
    if w.abs() > 1e-6 * scale && spread <= 1e-6 * w.abs() {
        let r = 1.0 / w.abs().sqrt();
        let sg = w.signum();
        return Ok(RealPair {
            t: jets
                .iter()
                .map(|j| [r * j.phi.re, sg * r * j.phi.im])
                .collect(),
            dt: jets
                .iter()
                .map(|j| [r * j.dphi.re, sg * r * j.dphi.im])
                .collect(),
            positions: Some(
                jets.iter()
                    .map(|j| [r * j.big_phi.re, sg * r * j.big_phi.im])
                    .collect(),
            ),
            kappa,
            dkappa,
            method: "eq12",
        });
    }
    // φ₁ = e^{iα}f with f real. Unless c is a half-period, φ₁ for −c is a
    // second, independent real solution.
    if let Some(pair) = partner_pair(p, &jets, &kappa, &dkappa)? {
        return Ok(pair);
    }
    let imax = (0..jets.len())
        .max_by(|&a, &b| jets[a].phi.norm().total_cmp(&jets[b].phi.norm()))
        .unwrap_or(0);
    let rot = Complex64::from_polar(1.0, -jets[imax].phi.arg());
    let phi2 = reduction_of_order(p, &pts, &jets, imax, rot)?;
    let t = jets
        .iter()
        .zip(&phi2)
        .map(|(j, q)| [(rot * j.phi).re, q[0]])
        .collect();
    let dt = jets
        .iter()
        .zip(&phi2)
        .map(|(j, q)| [(rot * j.dphi).re, q[1]])
        .collect();
    Ok(RealPair {
        t,
        dt,
        positions: None,
        kappa,
        dkappa,
        method: "eq11",
    })
}

/// (f₊, f₋) from φ₁ with c and with −c, each rotated to be real, when
/// they are independent along the grid.
fn partner_pair(
    p: &LameSolutionParams,
    jets: &[LameJet],
    kappa: &[f64],
    dkappa: &[f64],
) -> Result<Option<RealPair>> {
    let q = LameSolutionParams::with_c(p.wf.clone(), -p.c, p.c0, p.s_grid)?;
    let other: Vec<LameJet> = p
        .s_grid
        .points()
        .iter()
        .map(|&s| q.jet(Complex64::new(s, 0.0) - q.c0))
        .collect::<Result<_>>()?;
    let align = |js: &[LameJet]| {
        let big = js
            .iter()
            .max_by(|a, b| a.phi.norm().total_cmp(&b.phi.norm()))
            .map(|j| j.phi)
            .unwrap_or(Complex64::new(1.0, 0.0));
        Complex64::from_polar(1.0, -big.arg())
    };
    let (ra, rb) = (align(jets), align(&other));
    let ws: Vec<f64> = jets
        .iter()
        .zip(&other)
        .map(|(a, b)| ((ra * a.phi) * (rb * b.dphi) - (rb * b.phi) * (ra * a.dphi)).re)
        .collect();
    let w = ws.iter().sum::<f64>() / ws.len() as f64;
    let scale = jets
        .iter()
        .zip(&other)
        .map(|(a, b)| a.phi.norm() * b.dphi.norm() + b.phi.norm() * a.dphi.norm())
        .fold(0.0f64, f64::max);
    let spread = ws.iter().map(|v| (v - w).abs()).fold(0.0f64, f64::max);
    if !(w.abs() > 1e-6 * scale && spread <= 1e-6 * w.abs()) {
        return Ok(None);
    }
    let r = 1.0 / w.abs().sqrt();
    let sg = w.signum();
    let pick = |f: &dyn Fn(&LameJet) -> Complex64| -> Vec<[f64; 2]> {
        jets.iter()
            .zip(&other)
            .map(|(a, b)| [r * (ra * f(a)).re, sg * r * (rb * f(b)).re])
            .collect()
    };
    Ok(Some(RealPair {
        t: pick(&|j| j.phi),
        dt: pick(&|j| j.dphi),
        positions: Some(pick(&|j| j.big_phi)),
        kappa: kappa.to_vec(),
        dkappa: dkappa.to_vec(),
        method: "partner",
    }))
}

/// f·∫_{s₀}^{s} f⁻² and its derivative at every grid node, for f = rot·φ₁;
/// s₀ is the node with the largest |φ₁|. The path detours through the line
/// Im z = δ so that it stays off the real zeros of f.
fn reduction_of_order(
    p: &LameSolutionParams,
    pts: &[f64],
    jets: &[LameJet],
    i0: usize,
    rot: Complex64,
) -> Result<Vec<[f64; 2]>> {
    let base = default_offset(p);
    let mut last_err = Error::PathThroughZero { s: pts[i0] };
    for delta in [base, -base, 0.5 * base, -0.5 * base, 0.8 * base] {
        match detour(p, pts, jets, i0, rot, delta) {
            Ok(v) => return Ok(v),
            Err(e @ Error::PathThroughZero { .. }) => last_err = e,
            Err(e @ Error::NearPole { .. }) => last_err = e,
            Err(e) => return Err(e),
        }
    }
    Err(last_err)
}

fn detour(
    p: &LameSolutionParams,
    pts: &[f64],
    jets: &[LameJet],
    i0: usize,
    rot: Complex64,
    delta: f64,
) -> Result<Vec<[f64; 2]>> {
    let n = pts.len();
    let d = Complex64::new(0.0, delta);
    let z = |s: f64| Complex64::new(s, 0.0) - p.c0;
    // Values along the shifted line at the nodes, for the zero check.
    let line: Vec<Complex64> = pts
        .iter()
        .map(|&s| p.jet(z(s) + d).map(|j| j.phi))
        .collect::<Result<_>>()?;
    let mut mags: Vec<f64> = line.iter().map(|v| v.norm()).collect();
    mags.sort_by(f64::total_cmp);
    let floor = 1e-3 * mags[n / 2];
    if mags[0] < floor {
        return Err(Error::PathThroughZero { s: pts[0] });
    }
    // Cumulative integral along the line from node i0.
    let mut h_int = vec![Complex64::new(0.0, 0.0); n];
    let per = |a: f64, b: f64| ((b - a).abs() / (0.5 * delta.abs())).ceil() as usize;
    for i in i0 + 1..n {
        h_int[i] = h_int[i - 1]
            + segment(
                p,
                z(pts[i - 1]) + d,
                z(pts[i]) + d,
                per(pts[i - 1], pts[i]),
                floor,
            )?;
    }
    for i in (0..i0).rev() {
        h_int[i] = h_int[i + 1]
            - segment(
                p,
                z(pts[i]) + d,
                z(pts[i + 1]) + d,
                per(pts[i], pts[i + 1]),
                floor,
            )?;
    }
    let up = -graded_segment(p, z(pts[i0]) + d, z(pts[i0]), jets[i0])?;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let down = graded_segment(p, z(pts[i]) + d, z(pts[i]), jets[i])?;
        // ∫ 1/f² = rot⁻² ∫ 1/φ₁².
        let integral = (up + h_int[i] + down) / (rot * rot);
        let f = rot * jets[i].phi;
        let df = rot * jets[i].dphi;
        let v = f * integral;
        let dv = df * integral + 1.0 / f;
        out.push([v.re, dv.re]);
    }
    Ok(out)
}
