//! Error type shared by every module.

use thiserror::Error;

/// Failures surfaced by model construction and the numerical operators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum SchifferError {
    #[error("curve is not a Jordan curve: {0}")]
    NonJordan(String),
    #[error("map is not univalent: {0}")]
    NonUnivalent(String),
    #[error("invalid genus {0}; supported values are 0 and 1")]
    InvalidGenus(u32),
    #[error("invalid modulus tau = {re} + {im}i; Im(tau) must be positive")]
    InvalidModulus { re: f64, im: f64 },
    #[error("parameters do not define a supported surface: {0}")]
    UnsupportedSurface(String),
    #[error("base point q lies on or too close to the curve (distance {0:.3e})")]
    QNearCurve(f64),
    #[error("conformal-map iteration did not converge: {0}")]
    IterationDiverged(String),
    #[error("inverse chart evaluation did not converge at {0}")]
    InverseMapDiverged(String),
    #[error("operation needs the welding / complementary map, which was not computed")]
    WeldingUnavailable,
    #[error("component {0} is not simply connected")]
    NotSimplyConnected(u8),
    #[error("coincident points")]
    CoincidentPoints,
    #[error("level value {0} is outside the collar")]
    EpsilonTooLarge(f64),
    #[error("welding is not monotone")]
    NonMonotone,
    #[error("forms live on different components")]
    ComponentMismatch,
    #[error("cycle leaves the component")]
    CycleOutsideComponent,
    #[error("function is not admissible jump data (residual {0:.3e})")]
    NotAdmissible(f64),
    #[error("Gram matrix is singular")]
    SingularGram,
    #[error("form is not holomorphic to tolerance (residual {0:.3e})")]
    NotHolomorphic(f64),
    #[error("form is not exact: period {0:.3e}")]
    NotExact(f64),
    #[error("operator unavailable: {0}")]
    OperatorUnavailable(String),
    #[error("numerical limit did not stabilize (spread {0:.3e})")]
    LimitUnstable(f64),
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, SchifferError>;
