//! Dimensionless spectral kernels on the pair band `x = ω/ω₀ ∈ [0, 2]`.
//!
//! Two forms of the kernel `G(x)` are provided:
//!
//! * [`KernelVariant::Pv`]: the principal-value integral of the mode sum,
//!   `(1/2π)[PV∫₀² y²/(y² − x²) dy + iπx/2]`, whose closed form carries a
//!   coefficient `x/2` on the logarithm. This is the default.
//! * [`KernelVariant::Paper`]: the closed form as printed, with
//!   coefficient `x` on the logarithm.
//!
//! The two agree at `x → 0` and in their imaginary parts, and differ by a
//! factor of two in the logarithmic term. [`g_pv`] evaluates the PV form by
//! quadrature and serves as an independent check on [`g_pv_closed`].

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::constants::BAND_EPSILON;
use crate::error::{Error, Result};
use crate::quad::{principal_value, Adaptive};

/// Kernel values are plain complex numbers.
pub type KernelValue = Complex64;

/// Frequency in units of the laser frequency, restricted to the pair band.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
#[serde(transparent)]
pub struct NormalizedFrequency(f64);

impl NormalizedFrequency {
    pub const BAND_CENTER: NormalizedFrequency = NormalizedFrequency(1.0);

    pub fn new(x: f64) -> Result<Self> {
        if x.is_finite() && (0.0..=2.0).contains(&x) {
            Ok(NormalizedFrequency(x))
        } else {
            Err(Error::Domain {
                what: "normalized frequency",
                value: x,
                domain: "[0, 2]",
            })
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// The pair partner `2 − x`.
    #[inline]
    pub fn partner(self) -> Self {
        NormalizedFrequency(2.0 - self.0)
    }

    /// Whether the kernels can be evaluated here, i.e. `ε ≤ x ≤ 2 − ε`.
    /// The lower edge is taken as the partner of the upper one so that the
    /// band is closed under [`partner`](Self::partner).
    #[inline]
    pub fn is_interior(self) -> bool {
        let upper = 2.0 - BAND_EPSILON;
        self.0 >= 2.0 - upper && self.0 <= upper
    }

    fn interior(self) -> Result<f64> {
        if self.is_interior() {
            Ok(self.0)
        } else {
            Err(Error::Domain {
                what: "kernel argument",
                value: self.0,
                domain: "[1e-6, 2 - 1e-6]",
            })
        }
    }
}

impl<'de> Deserialize<'de> for NormalizedFrequency {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let x = f64::deserialize(d)?;
        NormalizedFrequency::new(x).map_err(serde::de::Error::custom)
    }
}

impl TryFrom<f64> for NormalizedFrequency {
    type Error = Error;
    fn try_from(x: f64) -> Result<Self> {
        NormalizedFrequency::new(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelVariant {
    #[default]
    Pv,
    Paper,
}

impl KernelVariant {
    pub const ALL: [KernelVariant; 2] = [KernelVariant::Pv, KernelVariant::Paper];

    pub fn name(self) -> &'static str {
        match self {
            KernelVariant::Pv => "pv",
            KernelVariant::Paper => "paper",
        }
    }

    /// Coefficient multiplying `x ln((2−x)/(2+x))` in the real part.
    pub fn log_coefficient(self) -> f64 {
        match self {
            KernelVariant::Pv => 0.5,
            KernelVariant::Paper => 1.0,
        }
    }
}

impl fmt::Display for KernelVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for KernelVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pv" => Ok(KernelVariant::Pv),
            "paper" => Ok(KernelVariant::Paper),
            other => Err(Error::validation(format!(
                "unknown kernel variant `{other}` (expected `pv` or `paper`)"
            ))),
        }
    }
}

#[inline]
fn closed_form(x: f64, log_coefficient: f64) -> Complex64 {
    let re = (2.0 + log_coefficient * x * ((2.0 - x) / (2.0 + x)).ln()) / (2.0 * PI);
    Complex64::new(re, 0.25 * x)
}

/// `G(x) = (2 + x ln((2−x)/(2+x)) + iπx/2) / 2π`, evaluated as printed.
pub fn g_paper(x: NormalizedFrequency) -> Result<KernelValue> {
    Ok(closed_form(x.interior()?, 1.0))
}

/// Closed form of the principal-value kernel,
/// `(2 + (x/2) ln((2−x)/(2+x)) + iπx/2) / 2π`.
pub fn g_pv_closed(x: NormalizedFrequency) -> Result<KernelValue> {
    Ok(closed_form(x.interior()?, 0.5))
}

/// Absolute tolerance on the raw principal-value integral.
const PV_ABS_TOL: f64 = 1e-10;

/// Principal-value kernel computed by quadrature of
/// `PV∫₀² y²/(y² − x²) dy`; the imaginary part `πx/2` is the pole's
/// half-residue contribution under the `ω + i0` prescription.
pub fn g_pv(x: NormalizedFrequency) -> Result<KernelValue> {
    let x = x.interior()?;
    let quad = Adaptive::with_tolerances(PV_ABS_TOL, 0.0);
    let pv = principal_value(|y| y * y / (y + x), 0.0, 2.0, x, &quad)?;
    if pv.error > PV_ABS_TOL {
        return Err(Error::Quadrature {
            estimate: pv.value,
            error: pv.error,
            tolerance: PV_ABS_TOL,
        });
    }
    Ok(Complex64::new(pv.value / (2.0 * PI), 0.25 * x))
}

/// Kernel of the given variant (closed forms).
pub fn kernel(x: NormalizedFrequency, variant: KernelVariant) -> Result<KernelValue> {
    match variant {
        KernelVariant::Pv => g_pv_closed(x),
        KernelVariant::Paper => g_paper(x),
    }
}

/// `R(x) = G(x) · conj(G(2 − x))`.
pub fn response_r(x: NormalizedFrequency, variant: KernelVariant) -> Result<KernelValue> {
    let g = kernel(x, variant)?;
    let g_partner = kernel(x.partner(), variant)?;
    Ok(g * g_partner.conj())
}

/// The drive-independent factor `πx(2−x)/2` of the weak spectral rate.
#[inline]
pub fn weak_band_shape(x: NormalizedFrequency) -> f64 {
    let x = x.value();
    0.5 * PI * x * (2.0 - x)
}
