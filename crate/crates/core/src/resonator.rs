//! Fabry-Perot matter-wave cavity and its use as an accelerometer.
//!
//! Resonances sit at kL = πN with k = ω/v_v, so ω_N = Nπv_v/L and the free
//! spectral range is πv_v/L. Under a uniform acceleration the index along
//! the cavity becomes n(1 + ax/(mω_vZ₀))^(−1/2); the optical length and the
//! resonance move accordingly, giving Δω_N ≈ κa with κ = πN/(2v_v).

use std::f64::consts::PI;

use crate::error::{require_finite, require_positive, Error, Result};
use crate::mode::MatterWaveMode;

/// Relative tolerance for "ω₀ sits on a comb line".
const LOCK_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Resonator {
    mode: MatterWaveMode,
    length: f64,
    reflectance: f64,
    finesse: f64,
}

/// π√R/(1−R).
pub fn finesse(reflectance: f64) -> Result<f64> {
    if !(reflectance > 0.0 && reflectance < 1.0) {
        return Err(Error::invalid("mirror reflectance", format!("{reflectance} not in (0, 1)")));
    }
    Ok(PI * reflectance.sqrt() / (1.0 - reflectance))
}

/// Mirror reflectance giving finesse `f`.
pub fn reflectance_for_finesse(f: f64) -> Result<f64> {
    require_positive("finesse", f)?;
    let root = (-PI + (PI * PI + 4.0 * f * f).sqrt()) / (2.0 * f);
    Ok(root * root)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveLength {
    /// Closed-form integral of the index along the cavity, m.
    pub exact: f64,
    /// nL(1 − aL/(4mω_vZ₀)), m.
    pub first_order: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccelerometerReading {
    pub n_index: u64,
    /// Scale factor κ, rad·s/m.
    pub kappa: f64,
    pub delta_omega: f64,
    pub acceleration: f64,
    pub resolution: f64,
}

fn require_index(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("N", "mode index must be >= 1"));
    }
    Ok(n as f64)
}

impl Resonator {
    pub fn new(mode: MatterWaveMode, length: f64, reflectance: f64) -> Result<Self> {
        require_positive("cavity length", length)?;
        let finesse = finesse(reflectance)?;
        Ok(Self {
            mode,
            length,
            reflectance,
            finesse,
        })
    }

    /// Builds the cavity from a target finesse; the stored finesse is the
    /// requested value, not the round trip through R.
    pub fn with_finesse(mode: MatterWaveMode, length: f64, f: f64) -> Result<Self> {
        require_positive("cavity length", length)?;
        let reflectance = reflectance_for_finesse(f)?;
        Ok(Self {
            mode,
            length,
            reflectance,
            finesse: f,
        })
    }

    pub fn mode(&self) -> &MatterWaveMode {
        &self.mode
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn reflectance(&self) -> f64 {
        self.reflectance
    }

    pub fn finesse(&self) -> f64 {
        self.finesse
    }

    /// πv_v/L, rad/s.
    pub fn fsr(&self) -> f64 {
        PI * self.mode.v_v() / self.length
    }

    /// fsr / F, rad/s.
    pub fn linewidth(&self) -> f64 {
        self.fsr() / self.finesse
    }

    pub fn resonance_frequency(&self, n: u64) -> Result<f64> {
        Ok(require_index(n)? * self.fsr())
    }

    /// Closest comb index to `omega`; at least 1.
    pub fn nearest_mode(&self, omega: f64) -> u64 {
        let n = (omega / self.fsr()).round();
        if n < 1.0 {
            1
        } else {
            n as u64
        }
    }

    /// Lossless Airy lineshape relative to the nearest comb line.
    pub fn airy_transmission(&self, omega: f64) -> Result<f64> {
        require_positive("omega", omega)?;
        let fsr = self.fsr();
        let detuning = omega - (omega / fsr).round() * fsr;
        let s = (PI * detuning / fsr).sin();
        let c = 2.0 * self.finesse / PI;
        Ok(1.0 / (1.0 + c * c * s * s))
    }

    /// mω_vZ₀, the acceleration-length scale of the index gradient.
    fn gradient_scale(&self) -> f64 {
        self.mode.mass() * self.mode.omega_v() * self.mode.z0()
    }

    pub fn effective_length(&self, accel: f64) -> Result<EffectiveLength> {
        require_finite("acceleration", accel)?;
        let nl = self.mode.n() * self.length;
        let x = accel * self.length / self.gradient_scale();
        if x <= -1.0 {
            return Err(Error::SingularIndex {
                potential: -self.mode.mass() * accel * self.length,
            });
        }
        // (2c/a)·n·(√(1+x) − 1) rewritten without the a → 0 cancellation
        Ok(EffectiveLength {
            exact: 2.0 * nl / (1.0 + (1.0 + x).sqrt()),
            first_order: nl * (1.0 - 0.25 * x),
        })
    }

    /// Comb line N under acceleration: k(ω′)·L_eff/n = πN.
    pub fn shifted_resonance(&self, n: u64, accel: f64) -> Result<f64> {
        let omega_n = self.resonance_frequency(n)?;
        let ratio = self.effective_length(accel)?.exact / (self.mode.n() * self.length);
        Ok(omega_n / ratio)
    }

    /// κ = πN/(2v_v).
    pub fn accel_scale_factor(&self, n: u64) -> Result<f64> {
        Ok(PI * require_index(n)? / (2.0 * self.mode.v_v()))
    }

    /// Comb index the mode's ω₀ is locked to.
    pub fn locked_index(&self) -> Result<u64> {
        let omega0 = self.mode.omega0();
        let n = self.nearest_mode(omega0);
        let omega_n = n as f64 * self.fsr();
        if ((omega0 - omega_n) / omega_n).abs() > LOCK_TOLERANCE {
            return Err(Error::NotOnResonance { omega0, nearest: n });
        }
        Ok(n)
    }

    /// (2π/F)·v_v³/(ω₀L²).
    pub fn accel_resolution(&self) -> Result<f64> {
        self.locked_index()?;
        let v = self.mode.v_v();
        Ok(2.0 * PI / self.finesse * v * v * v / (self.mode.omega0() * self.length * self.length))
    }

    /// Inverts Δω = κa for comb line N. The reported resolution is one
    /// linewidth expressed as an acceleration at that N.
    pub fn accel_from_shift(&self, n: u64, delta_omega: f64) -> Result<AccelerometerReading> {
        require_finite("delta_omega", delta_omega)?;
        let kappa = self.accel_scale_factor(n)?;
        let half_fsr = 0.5 * self.fsr();
        if delta_omega.abs() > half_fsr {
            return Err(Error::ModeAmbiguous {
                shift: delta_omega,
                half_fsr,
            });
        }
        Ok(AccelerometerReading {
            n_index: n,
            kappa,
            delta_omega,
            acceleration: delta_omega / kappa,
            resolution: self.linewidth() / kappa,
        })
    }
}
