//! Step and multilayer reflection/transmission of matter waves.
//!
//! Both wave pictures share one engine. A region at potential U is
//! described by a complex index and a base wavenumber:
//!
//! | convention | index            | wavenumber in region |
//! |------------|------------------|----------------------|
//! | Maxwell    | n(U)             | n(U)·k₀              |
//! | de Broglie | ñ(U) = 1/n(U)    | ñ(U)·2k₀ = k_v(U)    |
//!
//! with n(U) = n·(1 − U/ħω_v)^(−1/2). Above the particle energy the index
//! is imaginary; the branch is taken so that the region's wavenumber has a
//! positive imaginary part (decaying into the barrier).
//!
//! Flux reflectance is |r|²; flux transmittance carries the index ratio,
//! T = Re(n_exit)/n_in·|t|², so that R + T = 1 for lossless stacks in both
//! pictures. The bare |t|² is available separately.

mod numerov;

pub use numerov::{numerov_oracle, numerov_oracle_with, OracleFlux, DEFAULT_POINTS_PER_WAVELENGTH, MIN_POINTS_PER_WAVELENGTH};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require_finite, require_positive, Error, Result};
use crate::mode::MatterWaveMode;
use crate::Convention;

/// |1 − U/ħω_v| below this is treated as the singular point.
const SINGULAR_TOLERANCE: f64 = 1e-12;

/// Largest |Im(phase)| a single layer may carry before cosh/sinh products
/// overflow double precision.
pub const MAX_OPACITY: f64 = 700.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneralizedIndex {
    pub value: Complex64,
    pub evanescent: bool,
    pub convention: Convention,
}

impl GeneralizedIndex {
    pub fn propagating(value: f64, convention: Convention) -> Result<Self> {
        require_positive("index", value)?;
        Ok(Self {
            value: Complex64::new(value, 0.0),
            evanescent: false,
            convention,
        })
    }

    /// Purely imaginary index i·`magnitude`.
    pub fn evanescent(magnitude: f64, convention: Convention) -> Result<Self> {
        require_positive("index magnitude", magnitude)?;
        Ok(Self {
            value: Complex64::new(0.0, magnitude),
            evanescent: true,
            convention,
        })
    }
}

/// Base wavenumber multiplying the index in each convention.
fn base_wavenumber(mode: &MatterWaveMode, convention: Convention) -> f64 {
    match convention {
        Convention::Maxwell => mode.k0(),
        Convention::DeBroglie => 2.0 * mode.k0(),
    }
}

/// Index of a region at potential `u` (J).
pub fn generalized_index(
    mode: &MatterWaveMode,
    u: f64,
    convention: Convention,
) -> Result<GeneralizedIndex> {
    require_finite("potential", u)?;
    let s = 1.0 - u / mode.vacuum_energy();
    if s.abs() < SINGULAR_TOLERANCE {
        return Err(Error::SingularIndex { potential: u });
    }
    let root = s.abs().sqrt();
    let magnitude = match convention {
        Convention::Maxwell => mode.n() / root,
        Convention::DeBroglie => root / mode.n(),
    };
    if s > 0.0 {
        GeneralizedIndex::propagating(magnitude, convention)
    } else {
        GeneralizedIndex::evanescent(magnitude, convention)
    }
}

/// Wavenumber of a region at potential `u` in the given convention.
pub fn region_wavenumber(mode: &MatterWaveMode, u: f64, convention: Convention) -> Result<Complex64> {
    Ok(generalized_index(mode, u, convention)?.value * base_wavenumber(mode, convention))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScatterResult {
    /// Amplitude reflection coefficient.
    pub r: Complex64,
    /// Amplitude transmission coefficient.
    pub t: Complex64,
    /// Flux reflectance.
    pub reflectance: f64,
    /// Flux transmittance.
    pub transmittance: f64,
    pub convention: Convention,
}

impl ScatterResult {
    /// Bare |t|², without the index ratio.
    pub fn t_amplitude_sq(&self) -> f64 {
        self.t.norm_sqr()
    }
}

/// Fresnel coefficients r = (n₁−n₂)/(n₁+n₂), t = 2n₁/(n₁+n₂) at a single
/// interface, using each index in its own convention.
pub fn step_coefficients(n1: &GeneralizedIndex, n2: &GeneralizedIndex) -> Result<ScatterResult> {
    if n1.convention != n2.convention {
        return Err(Error::invalid(
            "indices",
            format!("convention mismatch: {} vs {}", n1.convention, n2.convention),
        ));
    }
    if n1.evanescent && n2.evanescent {
        return Err(Error::NoPropagatingWave);
    }
    if n1.evanescent {
        return Err(Error::invalid("incident index", "must be propagating"));
    }
    let sum = n1.value + n2.value;
    let r = (n1.value - n2.value) / sum;
    let t = 2.0 * n1.value / sum;
    let transmittance = if n2.evanescent {
        0.0
    } else {
        n2.value.re / n1.value.re * t.norm_sqr()
    };
    Ok(ScatterResult {
        r,
        t,
        reflectance: r.norm_sqr(),
        transmittance,
        convention: n1.convention,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    /// Potential energy, J.
    pub potential: f64,
    /// Thickness, m.
    pub length: f64,
}

/// Finite layers between a U = 0 incident half-space and a semi-infinite
/// exit region.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LayerStack {
    pub layers: Vec<Layer>,
    /// Potential of the exit half-space, J.
    pub exit_potential: f64,
}

impl LayerStack {
    pub fn step(exit_potential: f64) -> Self {
        Self {
            layers: Vec::new(),
            exit_potential,
        }
    }

    pub fn new(layers: Vec<Layer>, exit_potential: f64) -> Result<Self> {
        let s = Self {
            layers,
            exit_potential,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        require_finite("exit potential", self.exit_potential)?;
        for l in &self.layers {
            require_finite("layer potential", l.potential)?;
            require_positive("layer length", l.length)?;
        }
        Ok(())
    }

    /// Layers in reverse order, same exit potential.
    pub fn reversed(&self) -> Self {
        Self {
            layers: self.layers.iter().rev().copied().collect(),
            exit_potential: self.exit_potential,
        }
    }

    pub fn total_length(&self) -> f64 {
        self.layers.iter().fold(0.0, |acc, l| acc + l.length)
    }
}

/// Multilayer response from the product of characteristic matrices
///
/// ```text
/// M_j = [ cos δ_j        −i sin δ_j / Y_j ]      δ_j = Y_j·β·L_j
///       [ −i Y_j sin δ_j   cos δ_j        ]
/// ```
///
/// where Y_j is the layer's index and β the convention's base wavenumber.
pub fn transfer_matrix(
    stack: &LayerStack,
    mode: &MatterWaveMode,
    convention: Convention,
) -> Result<ScatterResult> {
    stack.validate()?;
    let beta = base_wavenumber(mode, convention);
    let y0 = generalized_index(mode, 0.0, convention)?.value;
    let exit = generalized_index(mode, stack.exit_potential, convention)?;

    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::i();
    let (mut m11, mut m12, mut m21, mut m22) = (one, Complex64::default(), Complex64::default(), one);
    for (idx, layer) in stack.layers.iter().enumerate() {
        let y = generalized_index(mode, layer.potential, convention)?.value;
        let delta = y * beta * layer.length;
        if delta.im.abs() > MAX_OPACITY {
            return Err(Error::Saturation {
                layer: idx,
                opacity: delta.im.abs(),
                limit: MAX_OPACITY,
            });
        }
        let (c, s) = (delta.cos(), delta.sin());
        let (a11, a12, a21, a22) = (c, -i * s / y, -i * y * s, c);
        (m11, m12, m21, m22) = (
            m11 * a11 + m12 * a21,
            m11 * a12 + m12 * a22,
            m21 * a11 + m22 * a21,
            m21 * a12 + m22 * a22,
        );
    }
    let ys = exit.value;
    let b = m11 + m12 * ys;
    let c = m21 + m22 * ys;
    let denom = y0 * b + c;
    let r = (y0 * b - c) / denom;
    let t = 2.0 * y0 / denom;
    let transmittance = if exit.evanescent {
        0.0
    } else {
        4.0 * y0.re * ys.re / denom.norm_sqr()
    };
    Ok(ScatterResult {
        r,
        t,
        reflectance: r.norm_sqr(),
        transmittance,
        convention,
    })
}

/// How a layer's potential is written in a stack file.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_over_hbar_omega_v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u_joule: Option<f64>,
    pub length_m: f64,
}

/// Stack file contents:
///
/// ```toml
/// exit_u_over_hbar_omega_v = 0.0
///
/// [[layer]]
/// u_over_hbar_omega_v = 0.75
/// length_m = 3.8e-7
/// ```
///
/// Each potential is given either relative to the particle energy ħω_v or
/// in joules, never both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct StackSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_u_over_hbar_omega_v: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exit_u_joule: Option<f64>,
    #[serde(default, rename = "layer")]
    pub layers: Vec<LayerSpec>,
}

fn resolve_potential(
    what: &'static str,
    relative: Option<f64>,
    joule: Option<f64>,
    energy: f64,
) -> Result<f64> {
    match (relative, joule) {
        (Some(_), Some(_)) => Err(Error::Record(format!(
            "{what}: give either a relative or an absolute potential, not both"
        ))),
        (Some(r), None) => Ok(r * energy),
        (None, Some(j)) => Ok(j),
        (None, None) => Ok(0.0),
    }
}

impl StackSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Record(e.to_string()))
    }

    pub fn to_stack(&self, mode: &MatterWaveMode) -> Result<LayerStack> {
        let e = mode.vacuum_energy();
        let exit = resolve_potential("exit", self.exit_u_over_hbar_omega_v, self.exit_u_joule, e)?;
        let layers = self
            .layers
            .iter()
            .map(|l| {
                if l.u_over_hbar_omega_v.is_none() && l.u_joule.is_none() {
                    return Err(Error::Record("layer without a potential".into()));
                }
                Ok(Layer {
                    potential: resolve_potential("layer", l.u_over_hbar_omega_v, l.u_joule, e)?,
                    length: l.length_m,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        LayerStack::new(layers, exit)
    }
}
