//! Photon-pair spectra, integrated photon numbers, yield and resonance.
//!
//! Spectral densities are dimensionless: photons per unit time per unit
//! angular frequency, with time measured in 1/ω₀ and frequency in ω₀.
//! Integrating over `x` gives a total rate in units of ω₀; dividing by
//! `Γ/ω₀` gives the photon number emitted by one standing-wave pulse.

mod sweep;

pub use sweep::{sweep, SweepAxis, SweepParameter, SweepRow, SweepSpec, MAX_SWEEP_POINTS};

use std::f64::consts::PI;

use roots::{find_root_brent, SimpleConvergency};
use serde::{Deserialize, Serialize};

use crate::constants::{BAND_EPSILON, HBAR, SPEED_OF_LIGHT};
use crate::error::{Error, Result};
use crate::fiber::{derive_drive, design_pulse, FiberParams};
use crate::kernel::{response_r, weak_band_shape, KernelVariant, NormalizedFrequency};
use crate::quad::Adaptive;

pub const DEFAULT_GRID_POINTS: usize = 2001;
pub const DEFAULT_DENOMINATOR_FLOOR: f64 = 1e-12;
/// Relative tolerance of the band integral.
pub const TOTAL_REL_TOL: f64 = 1e-8;
/// Fallback tolerance within ~1e-10 of ν₀, where `|1 − ν²R|` is a difference
/// of O(1) terms and the peak samples carry ~1e-6 relative rounding noise.
/// The achieved error is reported in [`EmissionSummary::quadrature_error`].
pub const NEAR_RESONANCE_REL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmissionMode {
    Weak,
    #[default]
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FloorPolicy {
    /// Replace `|1 − ν²R|` by the floor and flag saturation.
    #[default]
    Clamp,
    Reject,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DenominatorFloor {
    pub floor: f64,
    pub policy: FloorPolicy,
}

impl Default for DenominatorFloor {
    fn default() -> Self {
        DenominatorFloor {
            floor: DEFAULT_DENOMINATOR_FLOOR,
            policy: FloorPolicy::Clamp,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumOptions {
    pub variant: KernelVariant,
    pub floor: DenominatorFloor,
    pub grid_points: usize,
    /// Count emission from both reflecting ends (×2).
    pub two_end: bool,
}

impl Default for SpectrumOptions {
    fn default() -> Self {
        SpectrumOptions {
            variant: KernelVariant::Pv,
            floor: DenominatorFloor::default(),
            grid_points: DEFAULT_GRID_POINTS,
            two_end: false,
        }
    }
}

impl SpectrumOptions {
    pub fn with_variant(variant: KernelVariant) -> Self {
        SpectrumOptions {
            variant,
            ..Default::default()
        }
    }

    fn end_factor(&self) -> f64 {
        if self.two_end {
            2.0
        } else {
            1.0
        }
    }
}

fn check_nu(nu: f64) -> Result<()> {
    if nu.is_finite() && nu >= 0.0 {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "nu must be finite and non-negative, got {nu}"
        )))
    }
}

/// Weak-excitation spectral rate `πν²x(2−x)/2`.
#[inline]
pub fn rate_weak(x: NormalizedFrequency, nu: f64) -> f64 {
    nu * nu * weak_band_shape(x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullRate {
    pub value: f64,
    /// `|1 − ν²R(x)|` before flooring.
    pub denominator: f64,
    /// Denominator actually applied, `max(|1 − ν²R|, floor)`.
    pub applied: f64,
    pub saturated: bool,
}

impl FullRate {
    /// Ratio to the weak-excitation rate, `|1 − ν²R|⁻²` (floored).
    pub fn enhancement(&self) -> f64 {
        1.0 / (self.applied * self.applied)
    }
}

/// Nonperturbative rate `Ṅ₀(x) / |1 − ν²R(x)|²` with an explicit floor policy.
pub fn rate_full_with(
    x: NormalizedFrequency,
    nu: f64,
    variant: KernelVariant,
    floor: &DenominatorFloor,
) -> Result<FullRate> {
    check_nu(nu)?;
    let r = response_r(x, variant)?;
    let denominator = (1.0 - nu * nu * r).norm();
    let saturated = denominator < floor.floor;
    if saturated && floor.policy == FloorPolicy::Reject {
        return Err(Error::DegenerateDenominator {
            x: x.value(),
            magnitude: denominator,
            floor: floor.floor,
        });
    }
    let d = denominator.max(floor.floor);
    Ok(FullRate {
        value: rate_weak(x, nu) / (d * d),
        denominator,
        applied: d,
        saturated,
    })
}

/// Nonperturbative rate with the default (clamping) floor.
pub fn rate_full(x: NormalizedFrequency, nu: f64, variant: KernelVariant) -> Result<f64> {
    rate_full_with(x, nu, variant, &DenominatorFloor::default()).map(|r| r.value)
}

/// Uniform grid of `points` samples on `[ε, 2−ε]`, mirror-exact about x = 1:
/// every lower-half sample is computed as `2 − x` of its upper-half partner.
pub fn symmetric_grid(points: usize) -> Result<Vec<NormalizedFrequency>> {
    if points < 3 || points % 2 == 0 {
        return Err(Error::validation(format!(
            "grid_points must be odd and at least 3, got {points}"
        )));
    }
    let half = points / 2;
    let step = (1.0 - BAND_EPSILON) / half as f64;
    let mut xs = vec![0.0; points];
    xs[half] = 1.0;
    for j in 1..=half {
        let upper = if j == half {
            2.0 - BAND_EPSILON
        } else {
            1.0 + step * j as f64
        };
        xs[half + j] = upper;
        xs[half - j] = 2.0 - upper;
    }
    xs.into_iter().map(NormalizedFrequency::new).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralCurve {
    pub grid: Vec<NormalizedFrequency>,
    pub values: Vec<f64>,
    pub nu: f64,
    pub variant: KernelVariant,
    pub mode: EmissionMode,
    /// Some sample hit the denominator floor.
    pub saturated: bool,
}

impl SpectralCurve {
    pub fn compute(nu: f64, mode: EmissionMode, opts: &SpectrumOptions) -> Result<Self> {
        check_nu(nu)?;
        let grid = symmetric_grid(opts.grid_points)?;
        let factor = opts.end_factor();
        let mut saturated = false;
        let mut values = Vec::with_capacity(grid.len());
        for &x in &grid {
            let v = match mode {
                EmissionMode::Weak => rate_weak(x, nu),
                EmissionMode::Full => {
                    let r = rate_full_with(x, nu, opts.variant, &opts.floor)?;
                    saturated |= r.saturated;
                    r.value
                }
            };
            values.push(factor * v);
        }
        Ok(SpectralCurve {
            grid,
            values,
            nu,
            variant: opts.variant,
            mode,
            saturated,
        })
    }

    /// Sample with the largest value (first one on ties).
    pub fn peak(&self) -> (NormalizedFrequency, f64) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (self.grid[best], self.values[best])
    }

    /// Full width at half maximum by linear interpolation between samples.
    /// `None` if the curve is flat zero or never falls to half maximum on
    /// one side of the peak.
    pub fn fwhm(&self) -> Option<f64> {
        let (_, max) = self.peak();
        if max.is_nan() || max <= 0.0 {
            return None;
        }
        let half = 0.5 * max;
        let top = self.values.iter().position(|&v| v == max)?;
        let xs: Vec<f64> = self.grid.iter().map(|x| x.value()).collect();
        let ys = &self.values;
        let crossing =
            |i: usize, j: usize| xs[i] + (half - ys[i]) * (xs[j] - xs[i]) / (ys[j] - ys[i]);

        let left = (0..top)
            .rev()
            .find(|&i| ys[i] < half)
            .map(|i| crossing(i, i + 1))?;
        let right = (top + 1..ys.len())
            .find(|&i| ys[i] < half)
            .map(|i| crossing(i - 1, i))?;
        Some(right - left)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmissionSummary {
    pub nu: f64,
    pub mode: EmissionMode,
    pub variant: KernelVariant,
    /// Band-integrated rate, in units of ω₀.
    pub total_rate: f64,
    /// Photons per pulse, `total_rate / (Γ/ω₀)`.
    pub total_photons: f64,
    /// Photons per excitation quantum; filled by [`photon_yield`].
    #[serde(rename = "yield")]
    pub yield_: Option<f64>,
    pub peak_frequency: NormalizedFrequency,
    pub fwhm: Option<f64>,
    /// `9π⁴ω₀²/(4ν₀²Γ²)` for the variant's resonance.
    pub n_max: f64,
    pub saturated: bool,
    pub quadrature_error: f64,
}

/// Integrates the selected spectral density over the band and summarises it.
pub fn total_photons(
    nu: f64,
    gamma_over_omega0: f64,
    mode: EmissionMode,
    opts: &SpectrumOptions,
) -> Result<EmissionSummary> {
    check_nu(nu)?;
    if !(gamma_over_omega0.is_finite() && gamma_over_omega0 > 0.0) {
        return Err(Error::validation(format!(
            "gamma/omega0 must be positive, got {gamma_over_omega0}"
        )));
    }
    let curve = SpectralCurve::compute(nu, mode, opts)?;
    let factor = opts.end_factor();
    let density = |x: f64| -> f64 {
        let x = NormalizedFrequency::new(x).expect("integration stays inside the band");
        match mode {
            EmissionMode::Weak => rate_weak(x, nu),
            EmissionMode::Full => rate_full_with(x, nu, opts.variant, &opts.floor)
                .map(|r| r.value)
                .unwrap_or(f64::NAN),
        }
    };
    let breaks = band_breaks();
    let quad = |rel_tol: f64| Adaptive {
        abs_tol: 0.0,
        rel_tol,
        max_intervals: 20_000,
    };
    let integral = if nu == 0.0 {
        crate::quad::QuadResult {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        }
    } else {
        match quad(TOTAL_REL_TOL).integrate_with_breaks(density, &breaks) {
            Err(Error::Quadrature { .. }) if mode == EmissionMode::Full => {
                quad(NEAR_RESONANCE_REL_TOL).integrate_with_breaks(density, &breaks)?
            }
            other => other?,
        }
    };
    if mode == EmissionMode::Weak && nu > 0.0 {
        let closed = weak_total_rate(nu);
        if ((integral.value - closed) / closed).abs() > 1e-6 {
            return Err(Error::Quadrature {
                estimate: integral.value,
                error: (integral.value - closed).abs(),
                tolerance: 1e-6 * closed,
            });
        }
    }
    let total_rate = factor * integral.value;
    let nu0 = find_resonance(opts.variant)?;
    let (peak_frequency, _) = curve.peak();
    Ok(EmissionSummary {
        nu,
        mode,
        variant: opts.variant,
        total_rate,
        total_photons: total_rate / gamma_over_omega0,
        yield_: None,
        peak_frequency,
        fwhm: curve.fwhm(),
        n_max: n_max(nu0, gamma_over_omega0),
        saturated: curve.saturated,
        quadrature_error: factor * integral.error,
    })
}

/// Band edges, x = 1, and decades `1 ± 10⁻ᵏ` (k = 1..=15) so that a
/// near-resonant peak at band centre is sampled on every scale.
fn band_breaks() -> Vec<f64> {
    let decades = (1..=15).map(|k| 10f64.powi(-k));
    let mut b = vec![BAND_EPSILON];
    b.extend(decades.clone().map(|d| 1.0 - d));
    b.push(1.0);
    b.extend(decades.rev().map(|d| 1.0 + d));
    b.push(2.0 - BAND_EPSILON);
    b
}

/// `∫₀² πν²x(2−x)/2 dx = 2πν²/3`.
pub fn weak_total_rate(nu: f64) -> f64 {
    2.0 * PI * nu * nu / 3.0
}

/// Peak photon number `9π⁴ω₀² / (4ν₀²Γ²)` quoted for near-resonant drive.
pub fn n_max(nu0: f64, gamma_over_omega0: f64) -> f64 {
    9.0 * PI.powi(4) / (4.0 * nu0 * nu0 * gamma_over_omega0 * gamma_over_omega0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct YieldReport {
    pub nu: f64,
    /// Photons per pulse from the band integral.
    pub n_photons: f64,
    /// Excitation quanta `S·I/(Γħω₀)`.
    pub n0_quanta: f64,
    pub eta: f64,
    /// `π³(4L/λ₀)²n₂²I²ω₀/(3Γ)` as printed.
    pub n_printed: f64,
    /// `π³(4L/λ₀)²n₂²Iħω₀²/(3S)` as printed.
    pub eta_printed: f64,
    pub summary: EmissionSummary,
}

/// Yield `N/N₀` from first principles, alongside the printed closed forms.
pub fn photon_yield(
    p: &FiberParams,
    mode: EmissionMode,
    opts: &SpectrumOptions,
) -> Result<YieldReport> {
    let drive = derive_drive(p)?;
    let design = design_pulse(p)?;
    let mut summary = total_photons(drive.nu, drive.gamma_over_omega0(), mode, opts)?;
    let n = summary.total_photons;
    let eta = if n == 0.0 { 0.0 } else { n / design.n0_quanta };
    summary.yield_ = Some(eta);

    let omega0 = drive.omega0;
    let geometric = PI.powi(3) * (4.0 * p.length / p.wavelength).powi(2) * p.n2 * p.n2 / 3.0;
    let n_printed = geometric * p.intensity * p.intensity * omega0 / drive.gamma;
    let eta_printed = geometric * p.intensity * HBAR * omega0 * omega0 / p.area;
    debug_assert!((drive.gamma - SPEED_OF_LIGHT / p.length).abs() <= 1e-9 * drive.gamma);
    Ok(YieldReport {
        nu: drive.nu,
        n_photons: n,
        n0_quanta: design.n0_quanta,
        eta,
        n_printed,
        eta_printed,
        summary,
    })
}

/// Drive amplitude ν₀ at which `1 − ν²R(1)` vanishes.
///
/// `R(1) = |G(1)|²` is real and positive, so the minimum over x of
/// `|1 − ν²R(x)|` reaches zero only at band centre; ν₀ is the bracketed
/// root of `Re(1 − ν²R(1))`.
pub fn find_resonance(variant: KernelVariant) -> Result<f64> {
    let r1 = response_r(NormalizedFrequency::BAND_CENTER, variant)?;
    let f = |nu: f64| 1.0 - nu * nu * r1.re;
    let mut convergency = SimpleConvergency {
        eps: 1e-14,
        max_iter: 200,
    };
    find_root_brent(0.0, 100.0, f, &mut convergency)
        .map_err(|e| Error::RootFinding(format!("{e:?} for variant {variant}")))
}
