use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Argument outside the admissible domain of a kernel or band function.
    #[error("{what} = {value} is outside the admissible domain {domain}")]
    Domain {
        what: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("invalid parameter: {0}")]
    Validation(String),

    #[error("quadrature did not converge: estimate {estimate:e}, error {error:e} > tolerance {tolerance:e}")]
    Quadrature {
        estimate: f64,
        error: f64,
        tolerance: f64,
    },

    #[error("resonance denominator |1 - nu^2 R| = {magnitude:e} below floor {floor:e} at x = {x}")]
    DegenerateDenominator { x: f64, magnitude: f64, floor: f64 },

    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// The mode amplitudes left the representable range during integration.
    #[error("integration unstable at t = {time}: amplitude {amplitude:e}")]
    Instability { time: f64, amplitude: f64 },

    #[error("invalid sweep: {0}")]
    Sweep(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    /// True for errors caused by bad input rather than a numerical failure.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Domain { .. } | Error::Validation(_) | Error::Sweep(_)
        )
    }
}
