//! Case taxonomy of the invariants (g₂, g₃).
//!
//! Along a critical curve (κ, κ′) traces the phase-plane cubic
//! (κ′)² = −⅔κ³ + 6g₂κ − 36g₃, whose real intersections with the κ-axis are
//! −6e for the roots e of 4t³ − g₂t − g₃. The tags below follow from the
//! signs of g₂, g₃, Δ, the chosen branch and those intersections.

use serde::{Deserialize, Serialize};

use crate::elliptic::{CubicRoots, Invariants};
use crate::{Error, Result};

/// Δ counts as zero below this multiple of max(|g₂|³, 1).
pub const DELTA_ZERO_TOL: f64 = 1e-12;
/// Relative size below which q (or P) counts as zero.
pub const Q_ZERO_TOL: f64 = 1e-10;

const SQRT3_2: f64 = 0.866_025_403_784_438_6;

/// Which component of the phase-plane cubic the curve follows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// The oval: κ oscillates between q and Q (shift c₀ = ϖ₂).
    Closed,
    /// The unbounded branch (shift c₀ = 0).
    Open,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseTag {
    A1,
    A2,
    A3,
    B1,
    B2,
    B3,
    C1,
    C2,
    C3,
    C4,
    C5,
    Da,
    Dc,
    #[serde(rename = "E")]
    ECase,
    F,
    G,
    Ellipse,
}

impl CaseTag {
    pub fn name(&self) -> &'static str {
        match self {
            CaseTag::A1 => "A1",
            CaseTag::A2 => "A2",
            CaseTag::A3 => "A3",
            CaseTag::B1 => "B1",
            CaseTag::B2 => "B2",
            CaseTag::B3 => "B3",
            CaseTag::C1 => "C1",
            CaseTag::C2 => "C2",
            CaseTag::C3 => "C3",
            CaseTag::C4 => "C4",
            CaseTag::C5 => "C5",
            CaseTag::Da => "Da",
            CaseTag::Dc => "Dc",
            CaseTag::ECase => "E",
            CaseTag::F => "F",
            CaseTag::G => "G",
            CaseTag::Ellipse => "Ellipse",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let t = s.replace(['.', '_', '-'], "").to_ascii_uppercase();
        Some(match t.as_str() {
            "A1" => CaseTag::A1,
            "A2" => CaseTag::A2,
            "A3" => CaseTag::A3,
            "B1" => CaseTag::B1,
            "B2" => CaseTag::B2,
            "B3" => CaseTag::B3,
            "C1" => CaseTag::C1,
            "C2" => CaseTag::C2,
            "C3" => CaseTag::C3,
            "C4" => CaseTag::C4,
            "C5" => CaseTag::C5,
            "DA" => CaseTag::Da,
            "DC" => CaseTag::Dc,
            "E" | "ECASE" => CaseTag::ECase,
            "F" => CaseTag::F,
            "G" => CaseTag::G,
            "ELLIPSE" => CaseTag::Ellipse,
            _ => return None,
        })
    }

    pub fn is_a(&self) -> bool {
        matches!(self, CaseTag::A1 | CaseTag::A2 | CaseTag::A3)
    }

    pub fn is_b(&self) -> bool {
        matches!(self, CaseTag::B1 | CaseTag::B2 | CaseTag::B3)
    }

    pub fn is_c(&self) -> bool {
        matches!(
            self,
            CaseTag::C1 | CaseTag::C2 | CaseTag::C3 | CaseTag::C4 | CaseTag::C5
        )
    }
}

/// Case parameters; only those meaningful for the tag are set.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CaseParams {
    /// Middle κ-intersection (A/B).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<f64>,
    /// Rightmost κ-intersection (A/B).
    #[serde(rename = "Q", skip_serializing_if = "Option::is_none")]
    pub big_q: Option<f64>,
    /// Leftmost intersection (B) or the only real one (C).
    #[serde(rename = "P", skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    /// Imaginary part of the complex intersections −P/2 ± τi (C).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    /// ∛g₃ (D, E, ellipse).
    #[serde(rename = "E", skip_serializing_if = "Option::is_none")]
    pub e: Option<f64>,
    /// g₃ (F).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub g3: Option<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseLabel {
    pub tag: CaseTag,
    pub g2: f64,
    pub g3: f64,
    pub discriminant: f64,
    pub branch: Branch,
    pub params: CaseParams,
}

impl CaseLabel {
    pub fn invariants(&self) -> Invariants {
        Invariants::new(self.g2, self.g3)
    }
}

fn delta_is_zero(inv: &Invariants) -> bool {
    inv.discriminant().abs() < DELTA_ZERO_TOL * inv.g2().abs().powi(3).max(1.0)
}

fn g2_is_zero(inv: &Invariants) -> bool {
    inv.g2().abs() <= DELTA_ZERO_TOL * inv.g3().abs().powf(2.0 / 3.0)
}

/// Assign the case tag and its parameters.
pub fn classify(inv: Invariants, branch: Branch) -> Result<CaseLabel> {
    let (g2, g3) = (inv.g2(), inv.g3());
    if !g2.is_finite() || !g3.is_finite() {
        return Err(Error::InvalidInput("non-finite invariants".into()));
    }
    let mk = |tag, params| CaseLabel {
        tag,
        g2,
        g3,
        discriminant: inv.discriminant(),
        branch,
        params,
    };
    if g2 == 0.0 && g3 == 0.0 {
        return Ok(mk(CaseTag::G, CaseParams::default()));
    }
    if g2_is_zero(&inv) {
        return Ok(mk(
            CaseTag::F,
            CaseParams {
                g3: Some(g3),
                ..Default::default()
            },
        ));
    }
    if delta_is_zero(&inv) {
        let e = g3.cbrt();
        let params = CaseParams {
            e: Some(e),
            ..Default::default()
        };
        let tag = match (g3 < 0.0, branch) {
            (true, Branch::Open) => CaseTag::Da,
            (true, Branch::Closed) => CaseTag::Dc,
            (false, Branch::Open) => CaseTag::ECase,
            (false, Branch::Closed) => CaseTag::Ellipse,
        };
        return Ok(mk(tag, params));
    }
    match inv.roots() {
        CubicRoots::Real([e1, e2, e3]) => {
            let (p, q, big_q) = (-6.0 * e1, -6.0 * e2, -6.0 * e3);
            let zero = q.abs() < Q_ZERO_TOL * big_q.abs().max(p.abs());
            let sign = if zero {
                0
            } else if q > 0.0 {
                1
            } else {
                -1
            };
            let tag = match (branch, sign) {
                (Branch::Closed, 1) => CaseTag::A1,
                (Branch::Closed, 0) => CaseTag::A2,
                (Branch::Closed, _) => CaseTag::A3,
                (Branch::Open, 1) => CaseTag::B1,
                (Branch::Open, 0) => CaseTag::B2,
                (Branch::Open, _) => CaseTag::B3,
            };
            let q = if zero { 0.0 } else { q };
            let params = CaseParams {
                q: Some(q),
                big_q: Some(big_q),
                p: (branch == Branch::Open).then_some(p),
                ..Default::default()
            };
            Ok(mk(tag, params))
        }
        CubicRoots::OneReal { real, pair } => {
            if branch == Branch::Closed {
                return Err(Error::BranchUnavailable);
            }
            let p = -6.0 * real;
            let tau = 6.0 * pair.im;
            let tag = if p.abs() < Q_ZERO_TOL * tau {
                CaseTag::C3
            } else {
                let wide = tau > SQRT3_2 * p.abs();
                match (p > 0.0, wide) {
                    (true, true) => CaseTag::C1,
                    (true, false) => CaseTag::C2,
                    (false, true) => CaseTag::C4,
                    (false, false) => CaseTag::C5,
                }
            };
            let p = if tag == CaseTag::C3 { 0.0 } else { p };
            Ok(mk(
                tag,
                CaseParams {
                    p: Some(p),
                    tau: Some(tau),
                    ..Default::default()
                },
            ))
        }
    }
}

/// Equi-affine rescaling κ → λ²κ bringing the label to its normal form:
/// q = 1 (A1), q = −1 (A3), Q = 1 (A2), P = −1 (B), P = ±1 or τ = 1 (C),
/// |E| = 1 (D, E, ellipse), |g₃| = 1 (F). Case G is scale invariant.
pub fn rescale_to_normal_form(inv: Invariants, label: &CaseLabel) -> Result<(f64, CaseLabel)> {
    let p = &label.params;
    // λ² making the reference curvature value unit size.
    let kappa_ref = match label.tag {
        CaseTag::A1 | CaseTag::A3 => p.q,
        CaseTag::A2 => p.big_q,
        CaseTag::B1 | CaseTag::B2 | CaseTag::B3 => p.p,
        CaseTag::C3 => p.tau,
        CaseTag::C1 | CaseTag::C2 | CaseTag::C4 | CaseTag::C5 => p.p,
        CaseTag::Da | CaseTag::Dc | CaseTag::ECase | CaseTag::Ellipse => p.e,
        CaseTag::F => p.g3.map(|g| g.abs().cbrt().sqrt()),
        CaseTag::G => Some(1.0),
    }
    .ok_or_else(|| Error::InvalidInput("label lacks its defining parameter".into()))?;
    let lambda = 1.0 / kappa_ref.abs().sqrt();
    let normalized = classify(inv.rescaled(lambda), label.branch)?;
    Ok((lambda, normalized))
}
