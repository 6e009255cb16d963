//! Phase-estimation precision bounds for two-mode Gaussian states sent
//! through a parametric amplifier, a phase shift and photon loss.
//!
//! Everything numeric is generic over [`scalar::Real`]; the aliases below
//! fix `f64`.

pub mod analysis;
#[allow(clippy::approx_constant)]
pub mod dd;
pub mod error;
pub mod gaussian;
pub mod linalg;
pub mod qfi;
pub mod scalar;
pub mod table;

pub use analysis::Scheme;
pub use dd::DoubleDouble;
pub use error::{Error, Result};
pub use gaussian::InputFamily;
pub use table::SweepTable;

pub type Config = gaussian::InterferometerConfig<f64>;
pub type State = gaussian::GaussianState<f64>;
pub type Transform = gaussian::SymplecticTransform<f64>;
pub type Qfi = qfi::QfiResult<f64>;
pub type Threshold = analysis::ThresholdResult<f64>;
pub type Asymptotic = analysis::AsymptoticEstimate<f64>;
pub type Advantage = analysis::AdvantageCurve<f64>;
