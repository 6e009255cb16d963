use thiserror::Error;

/// Errors raised by state construction, Fisher-information evaluation and analysis.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("state violates {0}")]
    InvalidState(&'static str),

    #[error("matrix is not symplectic (max deviation {deviation:e})")]
    NotSymplectic { deviation: f64 },

    #[error(
        "phase derivative of the covariance is singular (condition {condition:e}); \
         use a closed-form expression instead"
    )]
    SingularDerivative { condition: f64 },

    #[error("no closed-form expression covers this configuration: {0}")]
    NoClosedForm(&'static str),

    #[error("denominator {which} vanished in closed-form evaluation")]
    DegenerateDenominator { which: &'static str },

    #[error("exponent 8r + 4g = {exponent} exceeds the supported range")]
    OutOfRange { exponent: f64 },

    #[error("Fisher information never exceeds the shot-noise limit (QFI at L=0 is {qfi_at_zero}, N = {photons})")]
    NoCrossing { qfi_at_zero: f64, photons: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
