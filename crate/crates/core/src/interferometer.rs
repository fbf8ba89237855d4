//! Two-port Mach-Zehnder output versus arm-length difference.

use std::f64::consts::TAU;

use crate::error::{require_finite, require_non_negative, Error, Result};
use crate::mode::MatterWaveMode;
use crate::Convention;

#[derive(Debug, Clone, PartialEq)]
pub struct MachZehnderConfig {
    pub mode: MatterWaveMode,
    /// Input flux I_v, particles/s.
    pub input_flux: f64,
    /// Arm-length difference ΔL, m.
    pub delta_l: f64,
    /// Power fraction sent into the first arm by the input splitter.
    pub split_ratio: f64,
}

impl MachZehnderConfig {
    pub fn new(mode: MatterWaveMode, input_flux: f64, delta_l: f64) -> Result<Self> {
        Self::with_split_ratio(mode, input_flux, delta_l, 0.5)
    }

    pub fn with_split_ratio(
        mode: MatterWaveMode,
        input_flux: f64,
        delta_l: f64,
        split_ratio: f64,
    ) -> Result<Self> {
        require_non_negative("input flux", input_flux)?;
        require_finite("delta_L", delta_l)?;
        if !(split_ratio > 0.0 && split_ratio < 1.0) {
            return Err(Error::invalid("split ratio", format!("{split_ratio} not in (0, 1)")));
        }
        Ok(Self {
            mode,
            input_flux,
            delta_l,
            split_ratio,
        })
    }

    /// 2√(s(1−s)); 1 for a balanced splitter.
    pub fn visibility(&self) -> f64 {
        2.0 * (self.split_ratio * (1.0 - self.split_ratio)).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MziOutput {
    pub bright: f64,
    pub dark: f64,
}

fn wavenumber(mode: &MatterWaveMode, convention: Convention) -> f64 {
    match convention {
        Convention::Maxwell => mode.k(),
        Convention::DeBroglie => mode.k_v(),
    }
}

/// Phase difference k·ΔL accumulated between the arms.
pub fn phase(config: &MachZehnderConfig, convention: Convention) -> f64 {
    wavenumber(&config.mode, convention) * config.delta_l
}

/// Port fluxes. The input splitter sends a fraction s into one arm and the
/// recombiner is balanced, so bright = I(1 + V cos φ)/2 with V = 2√(s(1−s)).
/// The dark port is computed as I − bright so the two sum to I to rounding.
pub fn mzi_output(config: &MachZehnderConfig, convention: Convention) -> MziOutput {
    let phi = phase(config, convention);
    let i = config.input_flux;
    let bright = if config.split_ratio == 0.5 {
        i * (0.5 * phi).cos().powi(2)
    } else {
        0.5 * i * (1.0 + config.visibility() * phi.cos())
    };
    MziOutput {
        bright,
        dark: i - bright,
    }
}

/// Arm-length difference for one full fringe.
pub fn fringe_period(mode: &MatterWaveMode, convention: Convention) -> f64 {
    TAU / wavenumber(mode, convention)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mode::ParticleMotion;
    use crate::units::ParticleSpecies;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn mode() -> MatterWaveMode {
        MatterWaveMode::new(ParticleSpecies::reference(), TAU * 1000.0, ParticleMotion::Velocity(0.01))
            .unwrap()
    }

    #[test]
    fn balanced_and_half_fringe() {
        let m = mode();
        for c in Convention::BOTH {
            let o = mzi_output(&MachZehnderConfig::new(m.clone(), 1e3, 0.0).unwrap(), c);
            assert_eq!((o.bright, o.dark), (1e3, 0.0));
        }
        let cfg = MachZehnderConfig::new(m.clone(), 1.0, PI / m.k()).unwrap();
        let o = mzi_output(&cfg, Convention::Maxwell);
        assert!(o.bright < 1e-30);
        assert!((o.dark - 1.0).abs() < 1e-15);
    }

    #[test]
    fn conventions_disagree_at_same_path_difference() {
        let m = mode();
        let cfg = MachZehnderConfig::new(m, 1.0, 3.3130e-7).unwrap();
        let mx = mzi_output(&cfg, Convention::Maxwell);
        let db = mzi_output(&cfg, Convention::DeBroglie);
        assert!((phase(&cfg, Convention::Maxwell) - 0.208_161_929_226_86).abs() < 1e-12);
        assert!((mx.bright - 0.989_206_213_208_69).abs() < 1e-12);
        assert!((mx.dark - 0.010_793_786_791_31).abs() < 1e-12);
        assert!((phase(&cfg, Convention::DeBroglie) - 3.141_559_395_570_3).abs() < 1e-12);
        assert!(db.bright < 1e-9);
        assert!((db.dark - 0.999_999_999_723_48).abs() < 1e-12);
    }

    #[test]
    fn fringe_periods() {
        let m = mode();
        assert!((fringe_period(&m, Convention::Maxwell) - 1e-5).abs() < 1e-19);
        assert!((fringe_period(&m, Convention::DeBroglie) - 6.626_070_145_940_08e-7).abs() < 1e-20);
        let ratio = fringe_period(&m, Convention::DeBroglie) / fringe_period(&m, Convention::Maxwell);
        assert!((ratio / (0.5 * m.n() * m.n()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        let m = mode();
        assert!(MachZehnderConfig::new(m.clone(), -1.0, 0.0).is_err());
        assert!(MachZehnderConfig::new(m.clone(), 1.0, f64::NAN).is_err());
        assert!(MachZehnderConfig::with_split_ratio(m.clone(), 1.0, 0.0, 0.0).is_err());
        assert!(MachZehnderConfig::with_split_ratio(m, 1.0, 0.0, 1.0).is_err());
    }

    proptest! {
        #[test]
        fn flux_conserved_and_periodic(dl in -1e-4f64..1e-4, s in 0.01f64..0.99, flux in 0.0f64..1e6) {
            let m = mode();
            for c in Convention::BOTH {
                let cfg = MachZehnderConfig::with_split_ratio(m.clone(), flux, dl, s).unwrap();
                let o = mzi_output(&cfg, c);
                prop_assert!((o.bright + o.dark - flux).abs() <= f64::EPSILON * flux);
                let shifted = MachZehnderConfig { delta_l: dl + fringe_period(&m, c), ..cfg };
                let p = mzi_output(&shifted, c);
                prop_assert!((p.bright - o.bright).abs() <= 1e-12 * flux.max(1.0) * (1.0 + dl.abs() * m.k_v()));
            }
        }

        #[test]
        fn visibility_matches_split(s in 0.01f64..0.99) {
            let m = mode();
            let period = fringe_period(&m, Convention::Maxwell);
            let at = |dl| mzi_output(&MachZehnderConfig::with_split_ratio(m.clone(), 1.0, dl, s).unwrap(), Convention::Maxwell).bright;
            let swing = at(0.0) - at(0.5 * period);
            prop_assert!((swing - 2.0 * (s * (1.0 - s)).sqrt()).abs() < 1e-12);
        }
    }
}
