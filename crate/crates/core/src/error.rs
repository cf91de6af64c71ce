use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Every failure mode of the library.
///
/// The CLI maps these onto exit codes, so variants carry enough context to
/// print a one-line diagnostic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate discriminant: g2 = {g2}, g3 = {g3}, delta = {delta:e} ({boundary})")]
    DegenerateDiscriminant {
        g2: f64,
        g3: f64,
        delta: f64,
        boundary: &'static str,
    },
    #[error("argument {re} + {im}i lies within tolerance of a lattice point")]
    NearPole { re: f64, im: f64 },
    #[error("|x' y'' - x'' y'| vanishes or changes sign near sample {index}")]
    InflectionPoint { index: usize },
    #[error("curve is not critical: kappa'' + kappa^2 spread {spread:e}")]
    NotCritical { spread: f64 },
    #[error("the constant C in kappa'' + kappa^2 = C vanishes")]
    ZeroC,
    #[error("closed branch is unavailable for a negative discriminant")]
    BranchUnavailable,
    #[error("sampling grid hits a curvature pole at s = {s}")]
    GridHitsPole { s: f64 },
    #[error("real solutions are linearly dependent; no unimodular frame")]
    UnimodularizationFailed,
    #[error("first Lame solution vanishes on the integration path near s = {s}")]
    PathThroughZero { s: f64 },
    #[error("no root of wp(c) = {target} on the candidate line")]
    NoSuchC { target: f64 },
    #[error("closure condition n/m = {n}/{m} not bracketed on the Q scan")]
    NotBracketed { m: u32, n: u32 },
    #[error("ellipse fit through curvature maxima failed: {reason}")]
    EllipseFitFailed { reason: String },
    #[error("curvature is not positive (min kappa = {min_kappa:e})")]
    NegativeCurvature { min_kappa: f64 },
    #[error("curve is not strictly convex (kappa = {kappa:e} at sample {index})")]
    NonConvex { index: usize, kappa: f64 },
    #[error("curvature blows up at s = {s}")]
    BlowUp { s: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Variant name, stable across releases; used in CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DegenerateDiscriminant { .. } => "DegenerateDiscriminant",
            Error::NearPole { .. } => "NearPole",
            Error::InflectionPoint { .. } => "InflectionPoint",
            Error::NotCritical { .. } => "NotCritical",
            Error::ZeroC => "ZeroC",
            Error::BranchUnavailable => "BranchUnavailable",
            Error::GridHitsPole { .. } => "GridHitsPole",
            Error::UnimodularizationFailed => "UnimodularizationFailed",
            Error::PathThroughZero { .. } => "PathThroughZero",
            Error::NoSuchC { .. } => "NoSuchC",
            Error::NotBracketed { .. } => "NotBracketed",
            Error::EllipseFitFailed { .. } => "EllipseFitFailed",
            Error::NegativeCurvature { .. } => "NegativeCurvature",
            Error::NonConvex { .. } => "NonConvex",
            Error::BlowUp { .. } => "BlowUp",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }

    /// True for errors caused by the caller's parameters rather than by a
    /// numerical failure downstream.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDiscriminant { .. }
                | Error::BranchUnavailable
                | Error::InvalidInput(_)
        )
    }
}
