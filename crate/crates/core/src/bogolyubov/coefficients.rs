use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::integrator::evolve;
use super::{ModeSystem, ORACLE_DENSITY_NORMALIZATION};
use crate::constants::BAND_EPSILON;
use crate::error::{Error, Result};
use crate::kernel::{KernelVariant, NormalizedFrequency};
use crate::spectrum::{rate_full_with, rate_weak, DenominatorFloor};

/// Bogolyubov matrices of one evolution, stored row-major:
/// entry `[k][k']` at `k * K + k'` maps the initial mode `k'` to the final
/// mode `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct BogolyubovCoefficients {
    pub frequencies: Vec<f64>,
    pub mu: Vec<Complex64>,
    pub nu: Vec<Complex64>,
}

impl BogolyubovCoefficients {
    pub fn mode_count(&self) -> usize {
        self.frequencies.len()
    }

    pub fn mu(&self, k: usize, k_from: usize) -> Complex64 {
        self.mu[k * self.mode_count() + k_from]
    }

    pub fn nu(&self, k: usize, k_from: usize) -> Complex64 {
        self.nu[k * self.mode_count() + k_from]
    }

    /// `n_k = Σ_k' |ν_kk'|²`.
    pub fn photon_numbers(&self) -> Vec<f64> {
        let k = self.mode_count();
        self.nu
            .chunks_exact(k)
            .map(|row| row.iter().map(|z| z.norm_sqr()).sum())
            .collect()
    }

    /// `Σ_k' (|μ_kk'|² − |ν_kk'|²) − 1` for every final mode k.
    pub fn row_residuals(&self) -> Vec<f64> {
        let k = self.mode_count();
        self.mu
            .chunks_exact(k)
            .zip(self.nu.chunks_exact(k))
            .map(|(m, n)| {
                m.iter().map(|z| z.norm_sqr()).sum::<f64>()
                    - n.iter().map(|z| z.norm_sqr()).sum::<f64>()
                    - 1.0
            })
            .collect()
    }

    /// `Σ_k (|μ_kk'|² − |ν_kk'|²) − 1` for every initial mode k'.
    pub fn column_residuals(&self) -> Vec<f64> {
        let k = self.mode_count();
        let mut out = vec![-1.0; k];
        for (row_m, row_n) in self.mu.chunks_exact(k).zip(self.nu.chunks_exact(k)) {
            for (j, acc) in out.iter_mut().enumerate() {
                *acc += row_m[j].norm_sqr() - row_n[j].norm_sqr();
            }
        }
        out
    }

    /// Largest row residual in magnitude.
    pub fn canonical_residual(&self) -> f64 {
        self.row_residuals()
            .into_iter()
            .map(f64::abs)
            .fold(0.0, f64::max)
    }

    /// Fraction of `Σ|ν_kk'|²` carried by pairs with
    /// `|ω_k + ω_k' − Ω| ≤ window`. Returns 1 when no photons were created.
    pub fn pair_concentration(&self, drive_frequency: f64, window: f64) -> f64 {
        let k = self.mode_count();
        let (mut inside, mut total) = (0.0, 0.0);
        for (i, row) in self.nu.chunks_exact(k).enumerate() {
            for (j, z) in row.iter().enumerate() {
                let w = z.norm_sqr();
                total += w;
                if (self.frequencies[i] + self.frequencies[j] - drive_frequency).abs() <= window {
                    inside += w;
                }
            }
        }
        if total == 0.0 {
            1.0
        } else {
            inside / total
        }
    }
}

/// Evolves one seed per mode (in parallel) and splits every final amplitude
/// into its positive- and negative-frequency parts.
pub fn extract_coefficients(system: &ModeSystem) -> Result<BogolyubovCoefficients> {
    system.validate()?;
    let k = system.mode_count;
    let w = system.frequencies();
    let t = system.total_time;
    let columns = (0..k)
        .into_par_iter()
        .map(|seed| evolve(system, seed))
        .collect::<Result<Vec<_>>>()?;

    let zero = Complex64::new(0.0, 0.0);
    let i = Complex64::i();
    let mut mu = vec![zero; k * k];
    let mut nu = vec![zero; k * k];
    for (seed, state) in columns.iter().enumerate() {
        for row in 0..k {
            let a = state.amplitude[row];
            let v = state.velocity[row] * i / w[row];
            let phase = Complex64::from_polar(1.0, w[row] * t);
            let positive = 0.5 * (a + v) * phase;
            let negative = 0.5 * (a - v) * phase.conj();
            let weight = (w[row] / w[seed]).sqrt();
            mu[row * k + seed] = weight * positive;
            nu[row * k + seed] = weight * negative.conj();
        }
    }
    Ok(BogolyubovCoefficients {
        frequencies: w,
        mu,
        nu,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpectrum {
    /// ω_k in units of ω₀, equal to the normalized frequency x.
    pub frequencies: Vec<f64>,
    pub photon_numbers: Vec<f64>,
    /// `n_k / T_eff`.
    pub rates: Vec<f64>,
    /// `rate_k / Δω`, comparable with the continuum spectral densities.
    pub densities: Vec<f64>,
    pub effective_time: f64,
    pub spacing: f64,
    pub drive: f64,
}

impl OracleSpectrum {
    pub fn from_coefficients(system: &ModeSystem, coefficients: &BogolyubovCoefficients) -> Self {
        let t_eff = system.effective_time();
        let dw = system.spacing();
        let photon_numbers = coefficients.photon_numbers();
        let rates: Vec<f64> = photon_numbers.iter().map(|n| n / t_eff).collect();
        let densities = rates.iter().map(|r| r / dw).collect();
        OracleSpectrum {
            frequencies: coefficients.frequencies.clone(),
            photon_numbers,
            rates,
            densities,
            effective_time: t_eff,
            spacing: dw,
            drive: system.drive,
        }
    }
}

pub fn oracle_spectrum(system: &ModeSystem) -> Result<OracleSpectrum> {
    let coefficients = extract_coefficients(system)?;
    Ok(OracleSpectrum::from_coefficients(system, &coefficients))
}

/// Analytic rate the oracle is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    /// First-order rate `πν²x(2−x)/2`.
    Weak,
    /// Resonance-enhanced rate, weak rate over `|1 − ν²R(x)|²`.
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTolerances {
    /// Closed range of x over which band deviations are gated.
    pub band: (f64, f64),
    /// Largest allowed `|oracle/reference − 1|` inside the band.
    pub rel_tol: f64,
    /// Largest allowed canonical row residual.
    pub canonical_tol: f64,
    pub reference: Reference,
}

impl ComparisonTolerances {
    /// 10% against the first-order rate on x ∈ [0.3, 1.7].
    pub fn weak_drive() -> Self {
        ComparisonTolerances {
            band: (0.3, 1.7),
            rel_tol: 0.10,
            canonical_tol: 1e-6,
            reference: Reference::Weak,
        }
    }

    /// 20% against the resonance-enhanced rate on x ∈ [0.5, 1.5].
    pub fn moderate_drive() -> Self {
        ComparisonTolerances {
            band: (0.5, 1.5),
            rel_tol: 0.20,
            canonical_tol: 1e-6,
            reference: Reference::Full,
        }
    }

    fn validate(&self) -> Result<()> {
        let (lo, hi) = self.band;
        if !(lo >= BAND_EPSILON && hi <= 2.0 - BAND_EPSILON && lo <= hi) {
            return Err(Error::validation(format!(
                "comparison band [{lo}, {hi}] must lie inside (0, 2)"
            )));
        }
        if !(self.rel_tol > 0.0 && self.canonical_tol > 0.0) {
            return Err(Error::validation("comparison tolerances must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandRow {
    pub x: f64,
    pub oracle_density: f64,
    /// Analytic rate times [`ORACLE_DENSITY_NORMALIZATION`].
    pub reference_density: f64,
    pub relative_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub drive: f64,
    pub variant: KernelVariant,
    pub tolerances: ComparisonTolerances,
    pub rows: Vec<BandRow>,
    pub max_deviation: f64,
    pub canonical_residual: f64,
    pub column_residual: f64,
    pub pair_concentration: f64,
    pub band_passed: bool,
    pub canonical_passed: bool,
    pub passed: bool,
}

/// Runs the oracle on `system` and compares its in-band densities with the
/// analytic rate selected by `tolerances.reference`.
pub fn compare_to_analytic(
    system: &ModeSystem,
    variant: KernelVariant,
    tolerances: &ComparisonTolerances,
) -> Result<ComparisonReport> {
    let coefficients = extract_coefficients(system)?;
    compare_coefficients(system, &coefficients, variant, tolerances)
}

/// As [`compare_to_analytic`], reusing already extracted coefficients.
pub fn compare_coefficients(
    system: &ModeSystem,
    coefficients: &BogolyubovCoefficients,
    variant: KernelVariant,
    tolerances: &ComparisonTolerances,
) -> Result<ComparisonReport> {
    tolerances.validate()?;
    let spectrum = OracleSpectrum::from_coefficients(system, coefficients);
    let floor = DenominatorFloor::default();
    let (lo, hi) = tolerances.band;
    let mut rows = Vec::new();
    for (&x, &density) in spectrum.frequencies.iter().zip(&spectrum.densities) {
        if x < lo || x > hi {
            continue;
        }
        let xf = NormalizedFrequency::new(x)?;
        let rate = match tolerances.reference {
            Reference::Weak => rate_weak(xf, system.drive),
            Reference::Full => rate_full_with(xf, system.drive, variant, &floor)?.value,
        };
        let reference_density = rate * ORACLE_DENSITY_NORMALIZATION;
        let relative_deviation = if reference_density == 0.0 {
            // Photon numbers below the canonical tolerance are rounding noise.
            if density * spectrum.spacing * spectrum.effective_time <= tolerances.canonical_tol {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            density / reference_density - 1.0
        };
        rows.push(BandRow {
            x,
            oracle_density: density,
            reference_density,
            relative_deviation,
        });
    }
    let max_deviation = rows
        .iter()
        .map(|r| r.relative_deviation.abs())
        .fold(0.0, f64::max);
    let canonical_residual = coefficients.canonical_residual();
    let column_residual = coefficients
        .column_residuals()
        .into_iter()
        .map(f64::abs)
        .fold(0.0, f64::max);
    let band_passed = !rows.is_empty() && max_deviation <= tolerances.rel_tol;
    let canonical_passed = canonical_residual <= tolerances.canonical_tol;
    Ok(ComparisonReport {
        drive: system.drive,
        variant,
        tolerances: *tolerances,
        rows,
        max_deviation,
        canonical_residual,
        column_residual,
        pair_concentration: coefficients
            .pair_concentration(system.drive_frequency, system.pair_window()),
        band_passed,
        canonical_passed,
        passed: band_passed && canonical_passed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnhancementRow {
    pub x: f64,
    /// Ratio of the two oracle densities, each divided by its ν².
    pub measured: f64,
    /// The same ratio from the resonance denominators, `|1 − ν_w²R|² / |1 − ν_s²R|²`.
    pub predicted: f64,
    pub relative_deviation: f64,
}

/// Resonance enhancement seen by the oracle between a weak and a strong
/// drive on the same mode set, against the analytic denominators. The
/// comparison is free of the overall density normalization.
pub fn enhancement_profile(
    weak: &OracleSpectrum,
    strong: &OracleSpectrum,
    variant: KernelVariant,
    band: (f64, f64),
) -> Result<Vec<EnhancementRow>> {
    if weak.frequencies != strong.frequencies {
        return Err(Error::validation("oracle spectra use different mode sets"));
    }
    if !(weak.drive > 0.0 && strong.drive > 0.0) {
        return Err(Error::validation("enhancement needs two non-zero drives"));
    }
    let floor = DenominatorFloor::default();
    let mut rows = Vec::new();
    for (k, &x) in weak.frequencies.iter().enumerate() {
        if x < band.0 || x > band.1 {
            continue;
        }
        let xf = NormalizedFrequency::new(x)?;
        let gain = |nu: f64| -> Result<f64> {
            Ok(rate_full_with(xf, nu, variant, &floor)?.value / rate_weak(xf, nu))
        };
        let measured = (strong.densities[k] / (strong.drive * strong.drive))
            / (weak.densities[k] / (weak.drive * weak.drive));
        let predicted = gain(strong.drive)? / gain(weak.drive)?;
        rows.push(EnhancementRow {
            x,
            measured,
            predicted,
            relative_deviation: measured / predicted - 1.0,
        });
    }
    Ok(rows)
}
