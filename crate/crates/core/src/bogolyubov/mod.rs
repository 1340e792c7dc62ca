//! Time-domain oracle: a truncated set of fiber modes driven through the
//! rank-one parametric coupling
//!
//! ```text
//! Ä_k + ω_k² A_k = ω_k · env(t) cos(Ω t) · g · Σ_k' ω_k' A_k'
//! ```
//!
//! integrated for classical complex amplitudes. The equations are linear,
//! so the evolution of one positive-frequency seed per mode yields the full
//! Bogolyubov transformation, and `n_k = Σ_k' |ν_kk'|²` counts the photons
//! created in mode k.
//!
//! Units: `c = ω₀ = 1`. Modes sit at `ω_k = kΔω` (k = 1..K) with
//! `Δω = cutoff/K = π/L`. The coupling is tied to the drive amplitude ν
//! through `g = νΔω/π`, for which the self-consistent response of the mode
//! sum reproduces the resonance denominator `1 − ν²R(x)` of the principal-
//! value kernel. With this coupling the first-order density is
//! `ν²x(2−x)/(8π)`, i.e. the weak rate `πν²x(2−x)/2` times
//! [`ORACLE_DENSITY_NORMALIZATION`].
//!
//! The truncated system is a closed cavity: after the round-trip time `2L`
//! emitted photons return to the mirror, exactly resonant pairs keep
//! growing and the continuum rate no longer applies. Horizons shorter than
//! `2L` reproduce the open-fiber rates.

mod coefficients;
mod integrator;

pub use coefficients::{
    compare_coefficients, compare_to_analytic, enhancement_profile, extract_coefficients,
    oracle_spectrum, BandRow, BogolyubovCoefficients, ComparisonReport, ComparisonTolerances,
    EnhancementRow, OracleSpectrum, Reference,
};
pub use integrator::{evolve, evolve_state, undriven_energy, ModeState};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ratio of the oracle's first-order spectral density to `πν²x(2−x)/2`.
pub const ORACLE_DENSITY_NORMALIZATION: f64 = 1.0 / (4.0 * PI * PI);

/// Default number of drive periods over which the coupling is switched on.
pub const DEFAULT_RAMP_PERIODS: f64 = 5.0;

/// Default horizon in units of `L/c`.
pub const DEFAULT_HORIZON: f64 = 40.0;

/// Horizon inside the open-fiber window `T < 2L/c`.
pub const OPEN_WINDOW_HORIZON: f64 = 1.9;

/// Largest admissible step, as a fraction of the shortest mode period.
pub const STEPS_PER_PERIOD: f64 = 40.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeSystem {
    pub mode_count: usize,
    /// Highest mode frequency, in units of ω₀.
    pub cutoff: f64,
    /// Drive amplitude ν.
    pub drive: f64,
    /// Modulation frequency Ω (2ω₀).
    pub drive_frequency: f64,
    pub ramp_time: f64,
    pub total_time: f64,
    /// Upper bound on the integration step; the actual step divides the
    /// interval evenly.
    pub time_step: f64,
    /// Flip the sign of the coupling force on one mode. Breaks the
    /// Hamiltonian structure; used as a negative control.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coupling_defect: Option<usize>,
}

impl ModeSystem {
    /// `mode_count` modes up to `cutoff`, drive ν, default ramp, horizon
    /// 40 L/c and the largest admissible step.
    pub fn new(mode_count: usize, cutoff: f64, drive: f64) -> Result<Self> {
        if mode_count == 0 {
            return Err(Error::validation("mode_count must be positive"));
        }
        let drive_frequency = 2.0;
        let spacing = cutoff / mode_count as f64;
        let system = ModeSystem {
            mode_count,
            cutoff,
            drive,
            drive_frequency,
            ramp_time: DEFAULT_RAMP_PERIODS * 2.0 * PI / drive_frequency,
            total_time: DEFAULT_HORIZON * PI / spacing,
            time_step: 2.0 * PI / cutoff / STEPS_PER_PERIOD,
            coupling_defect: None,
        };
        system.validate()?;
        Ok(system)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::validation(msg));
        if self.mode_count == 0 {
            return fail("mode_count must be positive".into());
        }
        if !(self.drive_frequency.is_finite() && self.drive_frequency > 0.0) {
            return fail(format!(
                "drive_frequency must be positive, got {}",
                self.drive_frequency
            ));
        }
        if !(self.cutoff.is_finite() && self.cutoff >= self.drive_frequency) {
            return fail(format!(
                "cutoff {} must cover the pair band [0, {}]",
                self.cutoff, self.drive_frequency
            ));
        }
        if !(self.drive.is_finite() && self.drive >= 0.0) {
            return fail(format!(
                "drive must be finite and non-negative, got {}",
                self.drive
            ));
        }
        if !(self.total_time.is_finite() && self.total_time >= 10.0 * 2.0 * PI) {
            return fail(format!(
                "total_time {} must span at least ten laser periods",
                self.total_time
            ));
        }
        if !(self.ramp_time >= 0.0 && self.ramp_time < self.total_time) {
            return fail(format!(
                "ramp_time {} must lie in [0, total_time)",
                self.ramp_time
            ));
        }
        let max_step = 2.0 * PI / self.cutoff / STEPS_PER_PERIOD;
        if !(self.time_step > 0.0 && self.time_step <= max_step * (1.0 + 1e-12)) {
            return fail(format!(
                "time_step {} must lie in (0, {max_step}]",
                self.time_step
            ));
        }
        if let Some(k) = self.coupling_defect {
            if k >= self.mode_count {
                return fail(format!("coupling_defect index {k} out of range"));
            }
        }
        Ok(())
    }

    /// Mode spacing Δω = cutoff/K.
    pub fn spacing(&self) -> f64 {
        self.cutoff / self.mode_count as f64
    }

    /// Fiber length L = π/Δω in units of c/ω₀.
    pub fn fiber_length(&self) -> f64 {
        PI / self.spacing()
    }

    /// Coupling constant g = νΔω/π of the rank-one drive term.
    pub fn coupling(&self) -> f64 {
        self.drive * self.spacing() / PI
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let dw = self.spacing();
        (1..=self.mode_count).map(|k| dw * k as f64).collect()
    }

    /// Driven time after the ramp, used to convert photon numbers to rates.
    pub fn effective_time(&self) -> f64 {
        self.total_time - self.ramp_time
    }

    /// Half-width of the pair-frequency window `|ω + ω' − Ω| ≤ 4π/T_eff`.
    pub fn pair_window(&self) -> f64 {
        4.0 * PI / self.effective_time()
    }

    pub fn with_drive(self, drive: f64) -> Self {
        ModeSystem { drive, ..self }
    }

    /// Sets the horizon to `multiple` round-trip units `L/c`.
    pub fn with_horizon(self, multiple: f64) -> Self {
        ModeSystem {
            total_time: multiple * self.fiber_length(),
            ..self
        }
    }

    pub fn with_total_time(self, total_time: f64) -> Self {
        ModeSystem { total_time, ..self }
    }

    pub fn with_ramp_time(self, ramp_time: f64) -> Self {
        ModeSystem { ramp_time, ..self }
    }

    pub fn with_time_step(self, time_step: f64) -> Self {
        ModeSystem { time_step, ..self }
    }

    pub fn with_coupling_defect(self, mode: usize) -> Self {
        ModeSystem {
            coupling_defect: Some(mode),
            ..self
        }
    }

    /// Raised-cosine switch-on of the drive.
    pub fn envelope(&self, t: f64) -> f64 {
        if t >= self.ramp_time {
            1.0
        } else if t <= 0.0 {
            0.0
        } else {
            0.5 * (1.0 - (PI * t / self.ramp_time).cos())
        }
    }

    /// Time-dependent factor `g · env(t) · cos(Ωt)` multiplying the mode sum.
    pub fn modulation(&self, t: f64) -> f64 {
        self.coupling() * self.envelope(t) * (self.drive_frequency * t).cos()
    }
}
