//! Maxwell matter waves: matter-wave modes with transmission-line and
//! optical analogs, step and multilayer scattering, Mach-Zehnder and
//! Fabry-Perot interferometry, interaction-induced index shifts, and the
//! classical particle dynamics underneath.

pub mod classical;
pub mod error;
pub mod fields;
pub mod interactions;
pub mod interferometer;
pub mod mode;
pub mod resonator;
pub mod scattering;
pub mod units;

pub use error::{Error, Result};
pub use mode::{MatterWaveMode, ParticleMotion};
pub use units::{Constants, ParticleSpecies};

/// Maxwell (drive-frequency) or de Broglie (particle-energy) wave picture.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Maxwell,
    DeBroglie,
}

impl Convention {
    pub const BOTH: [Convention; 2] = [Convention::Maxwell, Convention::DeBroglie];

    pub fn as_str(self) -> &'static str {
        match self {
            Convention::Maxwell => "maxwell",
            Convention::DeBroglie => "debroglie",
        }
    }
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
