//! Run configuration: a TOML file with one flat table per concern, merged
//! with command-line overrides.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use matterwave::resonator::Resonator;
use matterwave::{MatterWaveMode, ParticleMotion, ParticleSpecies};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub species: SpeciesSection,
    #[serde(default)]
    pub mode: ModeSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cavity: Option<CavitySection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fields: Option<FieldsSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub classical: Option<ClassicalSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scatter: Option<ScatterSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mzi: Option<MziSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub resonator: Option<ResonatorSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub accel: Option<AccelSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub interact: Option<InteractSection>,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SpeciesSection {
    pub name: String,
    pub mass_kg: f64,
}

impl Default for SpeciesSection {
    fn default() -> Self {
        let r = ParticleSpecies::reference();
        Self {
            name: r.name.clone(),
            mass_kg: r.mass(),
        }
    }
}

/// Drive frequency and particle motion; exactly one of each pair.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ModeSection {
    /// rad/s
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<f64>,
    /// Hz
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_hz: Option<f64>,
    /// m/s
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub v_v: Option<f64>,
    /// Kinetic energy, J.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_v: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_m: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub finesse: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reflectance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FieldsSection {
    /// Vector-potential amplitude, m/s.
    pub a0: f64,
    /// Grid points per axis on the coarsest grid.
    pub points: usize,
    pub refinements: usize,
}

impl Default for FieldsSection {
    fn default() -> Self {
        Self {
            a0: 1e-4,
            points: 33,
            refinements: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ClassicalSection {
    /// mA₀/p_res with p_res = mω₀/k.
    pub epsilon: f64,
    /// Initial canonical momentum in units of p_res.
    pub p0_factor: f64,
    pub x0: f64,
    pub periods: f64,
    pub steps_per_period: usize,
    /// Write every n-th step to the trajectory table.
    pub sample_every: usize,
}

impl Default for ClassicalSection {
    fn default() -> Self {
        Self {
            epsilon: 1e-3,
            p0_factor: 1.0,
            x0: 0.0,
            periods: 100.0,
            steps_per_period: 200,
            sample_every: 100,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ScatterSection {
    /// Layer-stack file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stack: Option<PathBuf>,
    /// Single step of this height instead of a stack file.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_u_over_hbar_omega_v: Option<f64>,
    /// "maxwell", "debroglie" or "both".
    pub convention: String,
    pub numerov: bool,
    pub points_per_wavelength: usize,
}

impl Default for ScatterSection {
    fn default() -> Self {
        Self {
            stack: None,
            step_u_over_hbar_omega_v: None,
            convention: "both".into(),
            numerov: true,
            points_per_wavelength: matterwave::scattering::DEFAULT_POINTS_PER_WAVELENGTH,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct MziSection {
    pub flux: f64,
    pub split_ratio: f64,
    pub delta_l_min: f64,
    /// Defaults to two Maxwell fringe periods.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta_l_max: Option<f64>,
    pub points: usize,
    pub log: bool,
}

impl Default for MziSection {
    fn default() -> Self {
        Self {
            flux: 1.0,
            split_ratio: 0.5,
            delta_l_min: 0.0,
            delta_l_max: None,
            points: 201,
            log: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ResonatorSection {
    /// Comb lines listed on each side of the line nearest ω₀.
    pub comb_half_width: u64,
    /// Width of the Airy scan in free spectral ranges, centred on that line.
    pub scan_fsr: f64,
    pub points: usize,
    pub log: bool,
}

impl Default for ResonatorSection {
    fn default() -> Self {
        Self {
            comb_half_width: 5,
            scan_fsr: 1.0,
            points: 401,
            log: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields, default)]
pub struct AccelSection {
    /// Comb line; defaults to the one ω₀ is locked to.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    pub report_resolution: bool,
    /// CSV with columns t, delta_omega.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shifts: Option<PathBuf>,
    /// A single shift, rad/s.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InteractSection {
    pub flux: f64,
    pub area_m2: f64,
    pub scattering_length_m: f64,
}

impl Default for InteractSection {
    fn default() -> Self {
        Self {
            flux: 1e3,
            area_m2: 1e-10,
            scattering_length_m: 5e-9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputSection {
    /// Directory for summary.txt and CSV tables; stdout when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    pub format: String,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: None,
            format: "csv".into(),
        }
    }
}

fn absolute(path: &Path) -> Result<PathBuf> {
    std::path::absolute(path).map_err(|e| CliError::io(path, e))
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CliError::config(e.to_string()))
    }

    /// Reads a config file. Relative paths inside it are taken relative to
    /// the file's own directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut cfg = Self::from_toml_str(&text)
            .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        let fix = |p: &mut Option<PathBuf>| -> Result<()> {
            if let Some(inner) = p.as_mut() {
                if inner.is_relative() {
                    *inner = absolute(&base.join(&*inner))?;
                }
            }
            Ok(())
        };
        if let Some(s) = cfg.scatter.as_mut() {
            fix(&mut s.stack)?;
        }
        if let Some(a) = cfg.accel.as_mut() {
            fix(&mut a.shifts)?;
        }
        fix(&mut cfg.output.dir)?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::config(e.to_string()))
    }

    pub fn validate_output(&self) -> Result<()> {
        if self.output.format != "csv" {
            return Err(CliError::config(format!(
                "output.format = {:?}; only \"csv\" is supported",
                self.output.format
            )));
        }
        Ok(())
    }

    pub fn species(&self) -> Result<ParticleSpecies> {
        Ok(ParticleSpecies::new(
            self.species.name.clone(),
            self.species.mass_kg,
        )?)
    }

    pub fn build_mode(&self) -> Result<MatterWaveMode> {
        let m = &self.mode;
        let omega0 = match (m.omega0, m.omega0_hz) {
            (Some(w), None) => w,
            (None, Some(f)) => TAU * f,
            (Some(_), Some(_)) => return Err(CliError::config("give omega0 or omega0_hz, not both")),
            (None, None) => return Err(CliError::config("missing drive frequency (omega0 or omega0_hz)")),
        };
        let motion = match (m.v_v, m.e_v) {
            (Some(v), None) => ParticleMotion::Velocity(v),
            (None, Some(e)) => ParticleMotion::Energy(e),
            (Some(_), Some(_)) => return Err(CliError::config("give v_v or e_v, not both")),
            (None, None) => return Err(CliError::config("missing particle motion (v_v or e_v)")),
        };
        Ok(MatterWaveMode::new(self.species()?, omega0, motion)?)
    }

    pub fn build_resonator(&self, mode: &MatterWaveMode) -> Result<Resonator> {
        let c = self
            .cavity
            .as_ref()
            .ok_or_else(|| CliError::config("missing cavity section (length, finesse or reflectance)"))?;
        let length = c
            .length_m
            .ok_or_else(|| CliError::config("missing cavity length"))?;
        let res = match (c.finesse, c.reflectance) {
            (Some(f), None) => Resonator::with_finesse(mode.clone(), length, f)?,
            (None, Some(r)) => Resonator::new(mode.clone(), length, r)?,
            (Some(_), Some(_)) => return Err(CliError::config("give finesse or reflectance, not both")),
            (None, None) => return Err(CliError::config("missing cavity finesse or reflectance")),
        };
        Ok(res)
    }
}

/// Inclusive grid of `points` values from `min` to `max`, linear or
/// logarithmic.
pub fn sweep(min: f64, max: f64, points: usize, log: bool) -> Result<Vec<f64>> {
    if points < 2 {
        return Err(CliError::config(format!("sweep needs at least 2 points, got {points}")));
    }
    if !(min.is_finite() && max.is_finite()) || max <= min {
        return Err(CliError::config(format!("empty sweep range [{min}, {max}]")));
    }
    if log && min <= 0.0 {
        return Err(CliError::config("log sweep needs a positive lower bound"));
    }
    let last = (points - 1) as f64;
    let (a, b) = if log { (min.ln(), max.ln()) } else { (min, max) };
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                min
            } else if i == points - 1 {
                max
            } else {
                let v = a + (b - a) * i as f64 / last;
                if log {
                    v.exp()
                } else {
                    v
                }
            }
        })
        .collect())
}
