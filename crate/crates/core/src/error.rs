use thiserror::Error;

/// Failure modes of the numerical routines.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unknown unit tag `{0}`")]
    UnknownUnit(String),
    #[error("singular input: {0}")]
    Singular(String),
    #[error("no bound plasmon mode at q = {q:e} 1/cm")]
    NoMode { q: f64 },
    #[error("root ω = {omega:e} rad/s lies in the Landau-damping region (v_F q = {vq:e})")]
    LandauRegion { omega: f64, vq: f64 },
    #[error("anomalous dispersion: Re ∂χ/∂ω = {0:e} is not positive")]
    AnomalousDispersion(f64),
    #[error("no phase-matched plasmon for idler angle {theta_deg:.3}°")]
    NoPhaseMatch { theta_deg: f64 },
    #[error("total internal reflection at θ₁ = {theta1:.6} rad (n₁ = {n1}, n₂ = {n2})")]
    TotalInternalReflection { theta1: f64, n1: f64, n2: f64 },
    #[error("no instability threshold: gain coefficient {0:e} is not positive")]
    NoThreshold(f64),
    #[error("permutation relations do not hold with nonzero broadening")]
    LossyPermutation,
    #[error("quadrature not converged: coarse {coarse:?}, fine {fine:?}, relative change {rel_change:e}")]
    NotConverged {
        coarse: [num_complex::Complex64; 2],
        fine: [num_complex::Complex64; 2],
        rel_change: f64,
    },
    #[error("step-size constraint violated: {0}")]
    StepSize(String),
}

pub type Result<T> = std::result::Result<T, Error>;
