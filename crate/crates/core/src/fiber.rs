//! Laboratory parameters of the fiber and laser, and the dimensionless
//! drive they produce.
//!
//! A standing wave of intensity `I` modulates the optical length as
//! `δL(t) = 2 n₂ I L cos²(ω₀t)`, so the oscillation amplitude is
//! `a = n₂ I L` and the rate amplitude is `ν = ω₀ a / c`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};

/// Largest index modulation `n₂ I` accepted; the model assumes `|δn| ≪ 1`.
pub const MAX_INDEX_MODULATION: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiberParams {
    /// Nonlinear refractive index n₂, m²/W.
    pub n2: f64,
    /// Fiber length, m.
    pub length: f64,
    /// Cross-section area, m².
    pub area: f64,
    /// Laser vacuum wavelength, m.
    pub wavelength: f64,
    /// Laser intensity, W/m².
    pub intensity: f64,
}

impl Default for FiberParams {
    /// Silica fiber, 100 m long, 1e-10 m², pumped at 0.5 μm with 1e6 W/m².
    fn default() -> Self {
        FiberParams {
            n2: 3.5e-20,
            length: 100.0,
            area: 1e-10,
            wavelength: 0.5e-6,
            intensity: 1e6,
        }
    }
}

impl FiberParams {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("n2", self.n2),
            ("length", self.length),
            ("area", self.area),
            ("wavelength", self.wavelength),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::validation(format!(
                    "{name} must be finite and strictly positive, got {value}"
                )));
            }
        }
        if !(self.intensity.is_finite() && self.intensity >= 0.0) {
            return Err(Error::validation(format!(
                "intensity must be finite and non-negative, got {}",
                self.intensity
            )));
        }
        let dn = self.index_modulation();
        if dn > MAX_INDEX_MODULATION {
            return Err(Error::validation(format!(
                "index modulation n2*I = {dn:e} exceeds {MAX_INDEX_MODULATION:e}"
            )));
        }
        Ok(())
    }

    /// δn = n₂ I.
    pub fn index_modulation(&self) -> f64 {
        self.n2 * self.intensity
    }

    pub fn with_intensity(self, intensity: f64) -> Self {
        FiberParams { intensity, ..self }
    }

    /// Laser angular frequency ω₀ = 2πc/λ₀.
    pub fn omega0(&self) -> f64 {
        2.0 * PI * SPEED_OF_LIGHT / self.wavelength
    }

    /// Γ = c/L, the inverse duration of the standing wave.
    pub fn gamma(&self) -> f64 {
        SPEED_OF_LIGHT / self.length
    }

    /// Γ/ω₀ = λ₀ / (2πL).
    pub fn gamma_over_omega0(&self) -> f64 {
        self.wavelength / (2.0 * PI * self.length)
    }

    /// Intensity at which the rate amplitude equals `nu`.
    pub fn intensity_for_nu(&self, nu: f64) -> f64 {
        nu * self.wavelength / (2.0 * PI * self.n2 * self.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Optical-length oscillation amplitude a = n₂IL, m.
    pub a: f64,
    /// Rate amplitude ν = ω₀a/c.
    pub nu: f64,
    /// ω₀, rad/s.
    pub omega0: f64,
    /// Γ = c/L, 1/s.
    pub gamma: f64,
}

impl DriveParams {
    pub fn gamma_over_omega0(&self) -> f64 {
        self.gamma / self.omega0
    }

    /// Replaces the intensity-derived drive by `nu`, keeping ω₀ and Γ.
    pub fn with_nu(self, nu: f64) -> Result<Self> {
        if !(nu.is_finite() && nu >= 0.0) {
            return Err(Error::validation(format!(
                "nu must be finite and non-negative, got {nu}"
            )));
        }
        Ok(DriveParams {
            a: nu * SPEED_OF_LIGHT / self.omega0,
            nu,
            ..self
        })
    }
}

pub fn derive_drive(p: &FiberParams) -> Result<DriveParams> {
    p.validate()?;
    let a = p.n2 * p.intensity * p.length;
    Ok(DriveParams {
        a,
        nu: 2.0 * PI * a / p.wavelength,
        omega0: p.omega0(),
        gamma: p.gamma(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PulseDesign {
    /// Intensity λ₀/(2n₂L) that brings the full excursion to λ₀/2, W/m².
    pub intensity_opt: f64,
    /// Pulse energy λ₀S/(2n₂c), J.
    pub energy_opt: f64,
    /// Laser power I_opt·S, W.
    pub power_opt: f64,
    /// Standing-wave duration L/c, s.
    pub duration: f64,
    /// Excitation quanta S·I/(Γħω₀) at the configured intensity.
    pub n0_quanta: f64,
    /// Rate amplitude reached at `intensity_opt` (π by construction).
    pub nu_at_opt: f64,
}

pub fn design_pulse(p: &FiberParams) -> Result<PulseDesign> {
    p.validate()?;
    let intensity_opt = p.wavelength / (2.0 * p.n2 * p.length);
    let duration = p.length / SPEED_OF_LIGHT;
    let nu_at_opt = derive_drive(&p.with_intensity(intensity_opt))?.nu;
    Ok(PulseDesign {
        intensity_opt,
        energy_opt: p.wavelength * p.area / (2.0 * p.n2 * SPEED_OF_LIGHT),
        power_opt: intensity_opt * p.area,
        duration,
        n0_quanta: p.area * p.intensity * duration * p.wavelength
            / (2.0 * PI * HBAR * SPEED_OF_LIGHT),
        nu_at_opt,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn reference_scenario_drive() {
        let d = derive_drive(&FiberParams::default()).unwrap();
        assert!(rel(d.a, 3.5e-12) < 1e-12);
        assert!(rel(d.nu, 4.398e-5) < 1e-3);
        assert!(rel(d.gamma, 2.997_924_58e6) < 1e-12);
        assert!(rel(d.omega0, 3.767e15) < 1e-3);
    }

    #[test]
    fn zero_intensity_gives_zero_drive() {
        let d = derive_drive(&FiberParams::default().with_intensity(0.0)).unwrap();
        assert_eq!(d.nu, 0.0);
        assert_eq!(d.a, 0.0);
    }

    #[test]
    fn drive_at_optimum_is_pi() {
        let p = FiberParams::default();
        let design = design_pulse(&p).unwrap();
        assert!(rel(design.intensity_opt, 7.1429e10) < 1e-4);
        let d = derive_drive(&p.with_intensity(design.intensity_opt)).unwrap();
        assert!(rel(d.a, p.wavelength / 2.0) < 1e-12);
        assert!(rel(d.nu, PI) < 1e-12);
        assert!(rel(design.nu_at_opt, PI) < 1e-12);
    }

    #[test]
    fn reference_pulse_design() {
        let d = design_pulse(&FiberParams::default()).unwrap();
        assert!(rel(d.energy_opt, 2.3826e-6) < 1e-4);
        assert!(rel(d.n0_quanta, 8.4e7) < 0.01);
        assert!(rel(d.intensity_opt * d.duration * 1e-10, d.energy_opt) < 1e-12);
        assert!(rel(d.power_opt, d.intensity_opt * 1e-10) < 1e-15);
    }

    #[test]
    fn area_scaling() {
        let p = FiberParams::default();
        let a = design_pulse(&p).unwrap();
        let b = design_pulse(&FiberParams {
            area: 2.0 * p.area,
            ..p
        })
        .unwrap();
        assert!(rel(b.energy_opt, 2.0 * a.energy_opt) < 1e-15);
        assert!(rel(b.power_opt, 2.0 * a.power_opt) < 1e-15);
        assert_eq!(a.intensity_opt, b.intensity_opt);
    }

    #[test]
    fn doubling_length_halves_intensity_keeps_energy() {
        let p = FiberParams::default();
        let a = design_pulse(&p).unwrap();
        let b = design_pulse(&FiberParams {
            length: 2.0 * p.length,
            ..p
        })
        .unwrap();
        assert!(rel(b.intensity_opt, 0.5 * a.intensity_opt) < 1e-15);
        assert_eq!(a.energy_opt, b.energy_opt);
    }

    #[test]
    fn nu_scales_with_each_parameter() {
        let p = FiberParams::default();
        let base = derive_drive(&p).unwrap().nu;
        let doubled = [
            FiberParams {
                n2: 2.0 * p.n2,
                ..p
            },
            FiberParams {
                intensity: 2.0 * p.intensity,
                ..p
            },
            FiberParams {
                length: 2.0 * p.length,
                ..p
            },
        ];
        for q in doubled {
            assert!(rel(derive_drive(&q).unwrap().nu, 2.0 * base) < 1e-14);
        }
        let q = FiberParams {
            wavelength: 2.0 * p.wavelength,
            ..p
        };
        assert!(rel(derive_drive(&q).unwrap().nu, 0.5 * base) < 1e-14);
    }

    #[test]
    fn gamma_times_length_over_c_is_one() {
        let d = derive_drive(&FiberParams::default()).unwrap();
        assert_eq!(d.gamma * 100.0 / SPEED_OF_LIGHT, 1.0);
    }

    #[test]
    fn validation_failures() {
        let p = FiberParams::default();
        for bad in [
            FiberParams { area: 0.0, ..p },
            FiberParams { length: -1.0, ..p },
            FiberParams { n2: f64::NAN, ..p },
            FiberParams {
                wavelength: 0.0,
                ..p
            },
            FiberParams {
                intensity: -1.0,
                ..p
            },
            FiberParams {
                intensity: 1e17,
                ..p
            },
        ] {
            assert!(
                matches!(derive_drive(&bad), Err(Error::Validation(_))),
                "{bad:?}"
            );
            assert!(design_pulse(&bad).is_err());
        }
    }

    #[test]
    fn nu_override_keeps_frequencies() {
        let d = derive_drive(&FiberParams::default()).unwrap();
        let o = d.with_nu(2.0).unwrap();
        assert_eq!(o.omega0, d.omega0);
        assert!(rel(o.omega0 * o.a / SPEED_OF_LIGHT, 2.0) < 1e-15);
        assert!(d.with_nu(-1.0).is_err());
    }

    #[test]
    fn intensity_for_nu_inverts_drive() {
        let p = FiberParams::default();
        let i = p.intensity_for_nu(2.5);
        assert!(rel(derive_drive(&p.with_intensity(i)).unwrap().nu, 2.5) < 1e-14);
    }
}
