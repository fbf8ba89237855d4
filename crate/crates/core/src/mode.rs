//! Matter-wave modes and their analog-optics quantities.
//!
//! A mode is fixed by a particle species, the drive (matteron) frequency ω₀
//! and the particle's vacuum frequency ω_v. Index, wavenumbers, impedance
//! and velocities are derived once at construction.

use serde::{Deserialize, Serialize};

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::units::{
    natural_impedance, vacuum_frequency, velocity_from_vacuum_frequency, Constants, Dimension,
    ParticleSpecies, Quantity,
};

/// How the particle side of a mode is specified.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ParticleMotion {
    /// Group velocity v_v in m/s.
    Velocity(f64),
    /// Vacuum energy E_v = ħω_v in J.
    Energy(f64),
}

/// A single Maxwell matter-wave mode.
#[derive(Debug, Clone, PartialEq)]
pub struct MatterWaveMode {
    species: ParticleSpecies,
    constants: Constants,
    omega0: f64,
    omega_v: f64,
    n: f64,
    k0: f64,
    k: f64,
    k_v: f64,
    z0: f64,
    z: f64,
    v0: f64,
    v_a: f64,
    v_v: f64,
}

impl MatterWaveMode {
    /// Builds a mode with CODATA constants.
    pub fn new(species: ParticleSpecies, omega0: f64, particle: ParticleMotion) -> Result<Self> {
        Self::with_constants(Constants::default(), species, omega0, particle)
    }

    pub fn with_constants(
        constants: Constants,
        species: ParticleSpecies,
        omega0: f64,
        particle: ParticleMotion,
    ) -> Result<Self> {
        require_positive("omega0", omega0)?;
        let hbar = constants.hbar_quantity();
        let mass = species.mass_quantity();

        let (omega_v, v_v) = match particle {
            ParticleMotion::Velocity(v) => {
                let w = vacuum_frequency(&constants, &species, v)?;
                (w, Quantity::new(v, Dimension::VELOCITY))
            }
            ParticleMotion::Energy(e) => {
                require_positive("particle energy", e)?;
                let w = Quantity::new(e, Dimension::ENERGY) / hbar;
                if !(w.value.is_normal() && w.value > 0.0) {
                    return Err(Error::invalid(
                        "particle energy",
                        format!("{e:e} J is below the representable floor (ω_v = {})", w.value),
                    ));
                }
                let v = velocity_from_vacuum_frequency(&constants, &species, w.value)?;
                (w, v)
            }
        };
        if !(omega_v.value.is_normal() && omega_v.value > 0.0) {
            return Err(Error::invalid(
                "particle velocity",
                "vacuum frequency underflows to zero",
            ));
        }

        let w0 = Quantity::new(omega0, Dimension::ANGULAR_FREQUENCY);
        let n = (w0 / omega_v).sqrt()?;
        let z0 = natural_impedance(&constants, &species);
        let k0 = (w0 / (mass * z0 * 2.0)).sqrt()?;
        let k = n * k0;
        // de Broglie dispersion, p_v/ħ
        let k_v = (mass * omega_v * 2.0 / hbar).sqrt()?;
        let v0 = (mass * w0 * z0 * 2.0).sqrt()?;
        let v_a = v0 / n;

        Ok(Self {
            omega0,
            omega_v: omega_v.expect(Dimension::ANGULAR_FREQUENCY)?,
            n: n.expect(Dimension::DIMENSIONLESS)?,
            k0: k0.expect(Dimension::WAVENUMBER)?,
            k: k.expect(Dimension::WAVENUMBER)?,
            k_v: k_v.expect(Dimension::WAVENUMBER)?,
            z0: z0.expect(Dimension::IMPEDANCE)?,
            z: (n * n * z0).expect(Dimension::IMPEDANCE)?,
            v0: v0.expect(Dimension::VELOCITY)?,
            v_a: v_a.expect(Dimension::VELOCITY)?,
            v_v: v_v.expect(Dimension::VELOCITY)?,
            species,
            constants,
        })
    }

    /// Same particle, different drive frequency.
    pub fn with_omega0(&self, omega0: f64) -> Result<Self> {
        Self::with_constants(
            self.constants,
            self.species.clone(),
            omega0,
            ParticleMotion::Velocity(self.v_v),
        )
    }

    pub fn species(&self) -> &ParticleSpecies {
        &self.species
    }
    pub fn constants(&self) -> &Constants {
        &self.constants
    }
    pub fn mass(&self) -> f64 {
        self.species.mass()
    }
    pub fn hbar(&self) -> f64 {
        self.constants.hbar
    }
    /// Drive frequency ω₀, rad/s.
    pub fn omega0(&self) -> f64 {
        self.omega0
    }
    /// Vacuum frequency ω_v, rad/s.
    pub fn omega_v(&self) -> f64 {
        self.omega_v
    }
    /// Refractive index √(ω₀/ω_v).
    pub fn n(&self) -> f64 {
        self.n
    }
    pub fn k0(&self) -> f64 {
        self.k0
    }
    /// Maxwell wavenumber n·k₀, 1/m.
    pub fn k(&self) -> f64 {
        self.k
    }
    /// de Broglie wavenumber, 1/m.
    pub fn k_v(&self) -> f64 {
        self.k_v
    }
    /// Natural impedance ħ/m².
    pub fn z0(&self) -> f64 {
        self.z0
    }
    /// Characteristic impedance n²·Z₀.
    pub fn z(&self) -> f64 {
        self.z
    }
    pub fn v0(&self) -> f64 {
        self.v0
    }
    /// Maxwell wave velocity v₀/n.
    pub fn v_a(&self) -> f64 {
        self.v_a
    }
    /// Particle group velocity.
    pub fn v_v(&self) -> f64 {
        self.v_v
    }
    /// Vacuum energy ħω_v, J.
    pub fn vacuum_energy(&self) -> f64 {
        self.constants.hbar * self.omega_v
    }
    /// de Broglie wavelength 2π/k_v.
    pub fn de_broglie_wavelength(&self) -> f64 {
        std::f64::consts::TAU / self.k_v
    }

    /// Energy of a particle carrying one matteron, ħ(ω_v + ω₀).
    pub fn excited_energy(&self) -> f64 {
        self.constants.hbar * (self.omega_v + self.omega0)
    }

    pub fn matteron(&self) -> Matteron {
        Matteron {
            energy: self.constants.hbar * self.omega0,
            momentum: self.constants.hbar * self.k,
        }
    }

    /// Permeability/permittivity analogs υ₀, υ, ξ₀, ξ.
    pub fn medium_constants(&self) -> MediumConstants {
        let two_m_w0 = 2.0 * self.mass() * self.omega0;
        let upsilon0 = (self.z0 / two_m_w0).sqrt();
        let xi0 = 1.0 / (self.z0 * (two_m_w0 * self.z0).sqrt());
        MediumConstants {
            upsilon0,
            upsilon: self.n.powi(3) * upsilon0,
            xi0,
            xi: xi0 / self.n,
        }
    }

    /// Current and potential wave amplitudes for a particle flux (particles/s).
    pub fn amplitudes_from_flux(&self, flux: f64) -> Result<WaveAmplitudes> {
        require_non_negative("flux", flux)?;
        let current0 = self.mass() / self.n * (2.0 * self.omega0 * flux).sqrt();
        Ok(WaveAmplitudes {
            current0,
            potential0: self.z * current0,
            flux,
        })
    }

    /// Mean energy (|α|² + ½)ħω₀ of a coherent excitation.
    pub fn coherent_mean_energy(&self, alpha_sq: f64) -> Result<f64> {
        require_non_negative("alpha_sq", alpha_sq)?;
        Ok((alpha_sq + 0.5) * self.constants.hbar * self.omega0)
    }

    pub fn to_record(&self) -> ModeRecord {
        ModeRecord {
            species: self.species.name.clone(),
            mass_kg: self.mass(),
            omega0_rad_s: self.omega0,
            v_v_m_s: self.v_v,
            hbar_j_s: Some(self.constants.hbar),
            derived: Some(DerivedRecord {
                omega_v_rad_s: self.omega_v,
                n: self.n,
                k0_per_m: self.k0,
                k_per_m: self.k,
                k_v_per_m: self.k_v,
                z0: self.z0,
                z: self.z,
                v0_m_s: self.v0,
                v_a_m_s: self.v_a,
            }),
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(&self.to_record()).expect("mode record is always serializable")
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let record: ModeRecord = toml::from_str(text).map_err(|e| Error::Record(e.to_string()))?;
        record.into_mode()
    }
}

/// Permeability and permittivity analogs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumConstants {
    /// υ₀, m/kg.
    pub upsilon0: f64,
    /// υ = n³υ₀, m/kg.
    pub upsilon: f64,
    /// ξ₀, kg·s²/m³.
    pub xi0: f64,
    /// ξ = ξ₀/n, kg·s²/m³.
    pub xi: f64,
}

impl MediumConstants {
    /// Phase velocity 1/√(υξ).
    pub fn phase_velocity(&self) -> f64 {
        1.0 / (self.upsilon * self.xi).sqrt()
    }

    /// 1/√(υ₀ξ₀).
    pub fn base_velocity(&self) -> f64 {
        1.0 / (self.upsilon0 * self.xi0).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveAmplitudes {
    /// Current amplitude 𝓘₀, kg/s.
    pub current0: f64,
    /// Potential amplitude 𝓥₀ = Z·𝓘₀, m²/s².
    pub potential0: f64,
    /// Particle flux, particles/s.
    pub flux: f64,
}

/// Field quantum of a mode.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matteron {
    /// ħω₀, J.
    pub energy: f64,
    /// ħk, kg·m/s.
    pub momentum: f64,
}

/// Text form of a mode. Derived fields are informational; parsing
/// recomputes them and rejects records that disagree.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeRecord {
    pub species: String,
    pub mass_kg: f64,
    pub omega0_rad_s: f64,
    pub v_v_m_s: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hbar_j_s: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derived: Option<DerivedRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DerivedRecord {
    pub omega_v_rad_s: f64,
    pub n: f64,
    pub k0_per_m: f64,
    pub k_per_m: f64,
    pub k_v_per_m: f64,
    pub z0: f64,
    pub z: f64,
    pub v0_m_s: f64,
    pub v_a_m_s: f64,
}

const RECORD_TOLERANCE: f64 = 1e-12;

impl ModeRecord {
    pub fn into_mode(self) -> Result<MatterWaveMode> {
        let mut constants = Constants::default();
        if let Some(h) = self.hbar_j_s {
            constants.hbar = require_positive("hbar", h)?;
        }
        let species = ParticleSpecies::new(self.species, self.mass_kg)?;
        let mode = MatterWaveMode::with_constants(
            constants,
            species,
            self.omega0_rad_s,
            ParticleMotion::Velocity(self.v_v_m_s),
        )?;
        if let Some(d) = self.derived {
            let checks = [
                ("omega_v_rad_s", d.omega_v_rad_s, mode.omega_v),
                ("n", d.n, mode.n),
                ("k0_per_m", d.k0_per_m, mode.k0),
                ("k_per_m", d.k_per_m, mode.k),
                ("k_v_per_m", d.k_v_per_m, mode.k_v),
                ("z0", d.z0, mode.z0),
                ("z", d.z, mode.z),
                ("v0_m_s", d.v0_m_s, mode.v0),
                ("v_a_m_s", d.v_a_m_s, mode.v_a),
            ];
            for (name, stored, computed) in checks {
                if !(((stored - computed) / computed).abs() <= RECORD_TOLERANCE) {
                    return Err(Error::Record(format!(
                        "derived field {name} = {stored:e} disagrees with recomputed {computed:e}"
                    )));
                }
            }
        }
        Ok(mode)
    }
}
