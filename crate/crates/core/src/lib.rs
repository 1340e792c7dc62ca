//! Photon-pair emission from a fiber whose optical length is modulated by a
//! standing laser wave.
//!
//! - [`kernel`]: the spectral kernel `G(x)`, the response `R(x)` and a
//!   principal-value quadrature oracle for `G`.
//! - [`fiber`]: laboratory parameters and the dimensionless drive ν.
//! - [`spectrum`]: weak and resonance-enhanced spectra, photon numbers,
//!   yield, the resonance ν₀ and parameter sweeps.
//! - [`bogolyubov`]: a time-domain mode simulation that extracts Bogolyubov
//!   coefficients and checks the analytic spectra against them.

pub mod bogolyubov;
pub mod constants;
pub mod error;
pub mod fiber;
pub mod kernel;
pub mod quad;
pub mod spectrum;
pub mod verify;

pub use bogolyubov::{
    BogolyubovCoefficients, ComparisonReport, ComparisonTolerances, ModeSystem, OracleSpectrum,
    Reference,
};
pub use error::{Error, Result};
pub use fiber::{DriveParams, FiberParams, PulseDesign};
pub use kernel::{KernelValue, KernelVariant, NormalizedFrequency};
pub use spectrum::{
    EmissionMode, EmissionSummary, FloorPolicy, SpectralCurve, SpectrumOptions, SweepAxis,
    SweepParameter, SweepRow, SweepSpec, YieldReport,
};
