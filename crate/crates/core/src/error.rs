use thiserror::Error;

use crate::units::Dimension;

/// Errors raised by the matterwave library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside its admissible range.
    #[error("invalid {name}: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// Two quantities with different dimensions were combined.
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: Dimension, right: Dimension },

    /// The generalized index diverges at U = ħω_v.
    #[error("singular index: potential {potential:e} J equals the particle energy ħω_v")]
    SingularIndex { potential: f64 },

    #[error("both indices are evanescent; no propagating incident wave")]
    NoPropagatingWave,

    /// A grid or time step is too coarse for the requested accuracy.
    #[error("under-resolved {what}: {detail}")]
    UnderResolved { what: &'static str, detail: String },

    /// A tunneling layer is too opaque for double-precision transfer matrices.
    #[error("transfer matrix saturated: layer {layer} has opacity {opacity:.1} > {limit}")]
    Saturation { layer: usize, opacity: f64, limit: f64 },

    #[error("frequency shift {shift:e} rad/s exceeds half a free spectral range ({half_fsr:e} rad/s)")]
    ModeAmbiguous { shift: f64, half_fsr: f64 },

    #[error("drive frequency {omega0:e} rad/s is not locked to a resonator mode (nearest N = {nearest})")]
    NotOnResonance { omega0: f64, nearest: u64 },

    /// A perturbative formula was asked to leave its validity range.
    #[error("outside perturbative range: {0}")]
    NonPerturbative(String),

    /// A serialized record failed to parse or is internally inconsistent.
    #[error("invalid record: {0}")]
    Record(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    /// True for failures caused by the physics of the request (singular
    /// points, unresolved grids, saturation) rather than malformed input.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::SingularIndex { .. }
                | Error::NoPropagatingWave
                | Error::UnderResolved { .. }
                | Error::Saturation { .. }
                | Error::ModeAmbiguous { .. }
                | Error::NotOnResonance { .. }
                | Error::NonPerturbative(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite and > 0, got {value}")))
    }
}

pub(crate) fn require_non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite and >= 0, got {value}")))
    }
}

pub(crate) fn require_finite(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::invalid(name, format!("must be finite, got {value}")))
    }
}
