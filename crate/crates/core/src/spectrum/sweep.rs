use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{total_photons, EmissionMode, SpectrumOptions};
use crate::error::{Error, Result};
use crate::fiber::{derive_drive, design_pulse, FiberParams};

pub const MAX_SWEEP_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepParameter {
    /// Rate amplitude ν, overriding the intensity-derived value.
    Nu,
    Intensity,
    Length,
    Wavelength,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            SweepParameter::Nu => "nu",
            SweepParameter::Intensity => "intensity",
            SweepParameter::Length => "length",
            SweepParameter::Wavelength => "wavelength",
        }
    }
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nu" => Ok(SweepParameter::Nu),
            "intensity" | "I" => Ok(SweepParameter::Intensity),
            "length" | "L" => Ok(SweepParameter::Length),
            "wavelength" | "lambda0" => Ok(SweepParameter::Wavelength),
            other => Err(Error::Sweep(format!("unknown sweep parameter `{other}`"))),
        }
    }
}

/// `steps` values from `start` to `stop` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepAxis {
    pub param: SweepParameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.start.is_finite() && self.stop.is_finite()) {
            return Err(Error::Sweep(format!(
                "{} range must be finite",
                self.param.name()
            )));
        }
        match self.steps {
            0 => Err(Error::Sweep(format!(
                "{} range is empty",
                self.param.name()
            ))),
            1 => Ok(vec![self.start]),
            n => {
                if self.start == self.stop {
                    return Err(Error::Sweep(format!(
                        "{} range is empty: start == stop with {n} steps",
                        self.param.name()
                    )));
                }
                let step = (self.stop - self.start) / (n - 1) as f64;
                Ok((0..n)
                    .map(|i| {
                        if i == n - 1 {
                            self.stop
                        } else {
                            self.start + step * i as f64
                        }
                    })
                    .collect())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub axes: Vec<SweepAxis>,
    pub base: FiberParams,
    /// Fixed ν for every row unless ν itself is swept.
    pub nu_override: Option<f64>,
    pub mode: EmissionMode,
    pub options: SpectrumOptions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub parameters: Vec<(SweepParameter, f64)>,
    pub nu: f64,
    pub n_photons: f64,
    #[serde(rename = "yield")]
    pub yield_: f64,
    pub peak: f64,
    pub fwhm: Option<f64>,
    pub saturated: bool,
}

fn evaluate(spec: &SweepSpec, point: &[(SweepParameter, f64)]) -> Result<SweepRow> {
    let mut fiber = spec.base;
    let mut nu = spec.nu_override;
    for &(param, value) in point {
        match param {
            SweepParameter::Nu => nu = Some(value),
            SweepParameter::Intensity => fiber.intensity = value,
            SweepParameter::Length => fiber.length = value,
            SweepParameter::Wavelength => fiber.wavelength = value,
        }
    }
    let mut drive = derive_drive(&fiber)?;
    if let Some(nu) = nu {
        drive = drive.with_nu(nu)?;
    }
    let summary = total_photons(
        drive.nu,
        drive.gamma_over_omega0(),
        spec.mode,
        &spec.options,
    )?;
    let n0 = design_pulse(&fiber)?.n0_quanta;
    let n = summary.total_photons;
    Ok(SweepRow {
        parameters: point.to_vec(),
        nu: drive.nu,
        n_photons: n,
        yield_: if n == 0.0 { 0.0 } else { n / n0 },
        peak: summary.peak_frequency.value(),
        fwhm: summary.fwhm,
        saturated: summary.saturated,
    })
}

/// Evaluates the emission summary on the Cartesian product of the axes.
///
/// Rows are ordered with the last axis varying fastest. Each row is an
/// independent computation, so the parallel evaluation is bitwise identical
/// to a sequential one.
pub fn sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.axes.is_empty() || spec.axes.len() > 2 {
        return Err(Error::Sweep(format!(
            "expected one or two sweep axes, got {}",
            spec.axes.len()
        )));
    }
    if spec.axes.len() == 2 && spec.axes[0].param == spec.axes[1].param {
        return Err(Error::Sweep("both axes sweep the same parameter".into()));
    }
    let values = spec
        .axes
        .iter()
        .map(SweepAxis::values)
        .collect::<Result<Vec<_>>>()?;
    let total = values
        .iter()
        .try_fold(1usize, |acc, v| acc.checked_mul(v.len()))
        .filter(|&n| n <= MAX_SWEEP_POINTS)
        .ok_or_else(|| Error::Sweep(format!("sweep exceeds {MAX_SWEEP_POINTS} points")))?;

    let points: Vec<Vec<(SweepParameter, f64)>> = (0..total)
        .map(|flat| {
            let mut rem = flat;
            let mut point = vec![(spec.axes[0].param, 0.0); spec.axes.len()];
            for (k, axis) in spec.axes.iter().enumerate().rev() {
                let n = values[k].len();
                point[k] = (axis.param, values[k][rem % n]);
                rem /= n;
            }
            point
        })
        .collect();

    points.par_iter().map(|p| evaluate(spec, p)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::KernelVariant;
    use crate::spectrum::find_resonance;

    fn nu_spec(start: f64, stop: f64, steps: usize) -> SweepSpec {
        SweepSpec {
            axes: vec![SweepAxis {
                param: SweepParameter::Nu,
                start,
                stop,
                steps,
            }],
            base: FiberParams::default(),
            nu_override: None,
            mode: EmissionMode::Full,
            options: SpectrumOptions {
                grid_points: 401,
                ..Default::default()
            },
        }
    }

    #[test]
    fn nu_sweep_peaks_nearest_resonance() {
        let rows = sweep(&nu_spec(0.5, 5.0, 10)).unwrap();
        assert_eq!(rows.len(), 10);
        let best = rows
            .iter()
            .max_by(|a, b| a.n_photons.total_cmp(&b.n_photons))
            .unwrap();
        let nu0 = find_resonance(KernelVariant::Pv).unwrap();
        let nearest = rows
            .iter()
            .min_by(|a, b| (a.nu - nu0).abs().total_cmp(&(b.nu - nu0).abs()))
            .unwrap();
        assert_eq!(best.nu, nearest.nu);
        assert_eq!(best.nu, 3.0);
    }

    #[test]
    fn empty_range_is_rejected() {
        assert!(matches!(sweep(&nu_spec(0.5, 5.0, 0)), Err(Error::Sweep(_))));
        assert!(matches!(sweep(&nu_spec(1.0, 1.0, 5)), Err(Error::Sweep(_))));
        let mut spec = nu_spec(0.5, 5.0, 3);
        spec.axes.clear();
        assert!(sweep(&spec).is_err());
    }

    #[test]
    fn oversize_grid_is_rejected() {
        let mut spec = nu_spec(0.5, 5.0, 1001);
        spec.axes.push(SweepAxis {
            param: SweepParameter::Length,
            start: 10.0,
            stop: 100.0,
            steps: 1000,
        });
        assert!(matches!(sweep(&spec), Err(Error::Sweep(_))));
    }

    #[test]
    fn single_point_matches_direct_call() {
        let spec = nu_spec(1.7, 1.7, 1);
        let rows = sweep(&spec).unwrap();
        let g = derive_drive(&FiberParams::default())
            .unwrap()
            .gamma_over_omega0();
        let direct = total_photons(1.7, g, EmissionMode::Full, &spec.options).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].n_photons, direct.total_photons);
        assert_eq!(rows[0].fwhm, direct.fwhm);
    }

    #[test]
    fn two_axis_order_is_row_major() {
        let spec = SweepSpec {
            axes: vec![
                SweepAxis {
                    param: SweepParameter::Length,
                    start: 50.0,
                    stop: 100.0,
                    steps: 2,
                },
                SweepAxis {
                    param: SweepParameter::Intensity,
                    start: 1e5,
                    stop: 1e6,
                    steps: 3,
                },
            ],
            base: FiberParams::default(),
            nu_override: None,
            mode: EmissionMode::Weak,
            options: SpectrumOptions {
                grid_points: 101,
                ..Default::default()
            },
        };
        let rows = sweep(&spec).unwrap();
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1].parameters[0].1, 50.0);
        assert_eq!(rows[1].parameters[1].1, 5.5e5);
        assert_eq!(rows[3].parameters[0].1, 100.0);
        // ν ∝ I L
        assert!((rows[5].nu / rows[0].nu - 20.0).abs() < 1e-12);
    }

    #[test]
    fn parallel_matches_sequential() {
        let spec = nu_spec(0.2, 4.0, 12);
        let par = sweep(&spec).unwrap();
        let values = spec.axes[0].values().unwrap();
        for (row, v) in par.iter().zip(values) {
            let seq = evaluate(&spec, &[(SweepParameter::Nu, v)]).unwrap();
            assert_eq!(row, &seq);
        }
    }
}
