//! Physical constants (CODATA 2018 exact/recommended values) and the
//! reference figures quoted for the silica-fiber scenario.

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Half-width of the excluded neighbourhoods around x = 0 and x = 2.
pub const BAND_EPSILON: f64 = 1e-6;

/// Published resonance drive amplitude.
pub const PUBLISHED_RESONANCE: f64 = 2.944;

/// Published spectral width of the near-resonant peak, in units of ω₀.
pub const PUBLISHED_PEAK_WIDTH: f64 = 0.11;

/// Published rate amplitude for the reference fiber at I = 1e6 W/m².
pub const PUBLISHED_REFERENCE_NU: f64 = 0.01;

/// Published yield for the reference fiber at I = 1e6 W/m².
pub const PUBLISHED_REFERENCE_YIELD: f64 = 1e-8;

/// Published optimal pulse energy, J.
pub const PUBLISHED_OPTIMAL_ENERGY: f64 = 10e-6;

/// Typical photon-pair yield of down-conversion sources.
pub const SPDC_TYPICAL_YIELD: f64 = 1e-12;
