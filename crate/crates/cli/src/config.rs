//! Run configuration: a flat JSON document, every field optional.
//!
//! ```json
//! {
//!   "n2": 3.5e-20, "length": 100.0, "area": 1e-10,
//!   "wavelength": 0.5e-6, "intensity": 1e6,
//!   "nu": null, "grid_points": 2001, "kernel_variant": "pv",
//!   "two_end_factor": false, "denominator_floor": 1e-12,
//!   "floor_policy": "clamp", "mode": "full",
//!   "sweep": [{"param": "nu", "start": 0.1, "stop": 3.0, "steps": 30}],
//!   "oracle": {"mode_count": 200, "horizon": 40.0},
//!   "format": "csv"
//! }
//! ```
//!
//! A JSON output file of any subcommand is also accepted: its `config`
//! member is used.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use vpl_core::spectrum::{DenominatorFloor, DEFAULT_DENOMINATOR_FLOOR, DEFAULT_GRID_POINTS};
use vpl_core::verify::{OracleSettings, SuiteConfig};
use vpl_core::{EmissionMode, FiberParams, FloorPolicy, KernelVariant, SpectrumOptions, SweepAxis};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// m²/W
    pub n2: f64,
    /// m
    pub length: f64,
    /// m²
    pub area: f64,
    /// m
    pub wavelength: f64,
    /// W/m²
    pub intensity: f64,
    /// Overrides the intensity-derived drive.
    pub nu: Option<f64>,
    pub grid_points: usize,
    pub kernel_variant: KernelVariant,
    pub two_end_factor: bool,
    pub denominator_floor: f64,
    pub floor_policy: FloorPolicy,
    pub mode: EmissionMode,
    pub sweep: Vec<SweepAxis>,
    pub oracle: OracleSettings,
    pub format: Format,
    /// Not serialized, so JSON outputs do not depend on where they are written.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        let f = FiberParams::default();
        RunConfig {
            n2: f.n2,
            length: f.length,
            area: f.area,
            wavelength: f.wavelength,
            intensity: f.intensity,
            nu: None,
            grid_points: DEFAULT_GRID_POINTS,
            kernel_variant: KernelVariant::Pv,
            two_end_factor: false,
            denominator_floor: DEFAULT_DENOMINATOR_FLOOR,
            floor_policy: FloorPolicy::Clamp,
            mode: EmissionMode::Full,
            sweep: Vec::new(),
            oracle: OracleSettings::default(),
            format: Format::Csv,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Validation(msg) => CliError::Validation(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let mut value: Value = serde_json::from_str(text)
            .map_err(|e| CliError::Validation(format!("invalid JSON: {e}")))?;
        if let Some(inner) = value.get_mut("config").filter(|c| c.is_object()) {
            value = inner.take();
        }
        serde_json::from_value(value).map_err(|e| CliError::Validation(e.to_string()))
    }

    pub fn fiber(&self) -> FiberParams {
        FiberParams {
            n2: self.n2,
            length: self.length,
            area: self.area,
            wavelength: self.wavelength,
            intensity: self.intensity,
        }
    }

    pub fn spectrum_options(&self) -> SpectrumOptions {
        SpectrumOptions {
            variant: self.kernel_variant,
            floor: DenominatorFloor {
                floor: self.denominator_floor,
                policy: self.floor_policy,
            },
            grid_points: self.grid_points,
            two_end: self.two_end_factor,
        }
    }

    pub fn suite(&self) -> SuiteConfig {
        SuiteConfig {
            variant: self.kernel_variant,
            fiber: self.fiber(),
            grid_points: self.grid_points,
            oracle: self.oracle,
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let invalid = |msg: String| Err(CliError::Validation(msg));
        if self.grid_points < 3 || self.grid_points % 2 == 0 {
            return invalid(format!(
                "grid_points must be odd and at least 3, got {}",
                self.grid_points
            ));
        }
        if !(self.denominator_floor.is_finite() && self.denominator_floor > 0.0) {
            return invalid(format!(
                "denominator_floor must be finite and positive, got {}",
                self.denominator_floor
            ));
        }
        if let Some(nu) = self.nu {
            if !(nu.is_finite() && nu >= 0.0) {
                return invalid(format!("nu must be finite and non-negative, got {nu}"));
            }
        }
        self.fiber().validate()?;
        for drive in [self.oracle.weak_drive, self.oracle.moderate_drive] {
            self.oracle.system(drive)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_gives_defaults() {
        assert_eq!(RunConfig::from_json("{}").unwrap(), RunConfig::default());
        RunConfig::default().validate().unwrap();
    }

    #[test]
    fn output_document_is_accepted() {
        let c = RunConfig {
            nu: Some(0.5),
            kernel_variant: KernelVariant::Paper,
            ..Default::default()
        };
        let doc = serde_json::json!({ "config": c, "rows": [] });
        assert_eq!(RunConfig::from_json(&doc.to_string()).unwrap(), c);
    }

    #[test]
    fn unknown_field_rejected() {
        let e = RunConfig::from_json(r#"{"lenght": 10}"#).unwrap_err();
        assert!(matches!(e, CliError::Validation(_)));
    }

    #[test]
    fn even_grid_rejected() {
        let c = RunConfig {
            grid_points: 100,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(CliError::Validation(_))));
    }

    #[test]
    fn zero_area_rejected() {
        let c = RunConfig {
            area: 0.0,
            ..Default::default()
        };
        assert!(matches!(c.validate(), Err(CliError::Validation(_))));
    }
}
