//! Unit-checked quantities, physical constants and particle species.
//!
//! Quantities carry an exponent vector over the SI base dimensions kg, m
//! and s. Products and quotients add or subtract exponents; sums and
//! differences of unlike quantities are rejected. Angular frequencies are
//! stored in rad/s, with the radian treated as dimensionless.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Div, Mul};

use serde::{Deserialize, Serialize};

use crate::error::{require_positive, Error, Result};

/// Exponents of kg, m and s.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct Dimension {
    pub kg: i8,
    pub m: i8,
    pub s: i8,
}

impl Dimension {
    pub const fn new(kg: i8, m: i8, s: i8) -> Self {
        Self { kg, m, s }
    }

    pub const DIMENSIONLESS: Dimension = Dimension::new(0, 0, 0);
    pub const MASS: Dimension = Dimension::new(1, 0, 0);
    pub const LENGTH: Dimension = Dimension::new(0, 1, 0);
    pub const TIME: Dimension = Dimension::new(0, 0, 1);
    pub const ANGULAR_FREQUENCY: Dimension = Dimension::new(0, 0, -1);
    pub const WAVENUMBER: Dimension = Dimension::new(0, -1, 0);
    pub const VELOCITY: Dimension = Dimension::new(0, 1, -1);
    pub const ACCELERATION: Dimension = Dimension::new(0, 1, -2);
    pub const MOMENTUM: Dimension = Dimension::new(1, 1, -1);
    pub const ENERGY: Dimension = Dimension::new(1, 2, -2);
    pub const ACTION: Dimension = Dimension::new(1, 2, -1);
    /// Matter-wave impedance, m²·kg⁻¹·s⁻¹.
    pub const IMPEDANCE: Dimension = Dimension::new(-1, 2, -1);
    /// Matter-wave permeability υ, m·kg⁻¹.
    pub const PERMEABILITY: Dimension = Dimension::new(-1, 1, 0);
    /// Matter-wave permittivity ξ, kg·s²·m⁻³.
    pub const PERMITTIVITY: Dimension = Dimension::new(1, -3, 2);
    /// Matter current, kg·s⁻¹.
    pub const CURRENT: Dimension = Dimension::new(1, 0, -1);
    /// Matter potential, m²·s⁻².
    pub const POTENTIAL: Dimension = Dimension::new(0, 2, -2);

    fn combine(self, other: Dimension, sign: i8) -> Dimension {
        Dimension::new(
            self.kg + sign * other.kg,
            self.m + sign * other.m,
            self.s + sign * other.s,
        )
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if *self == Dimension::DIMENSIONLESS {
            return write!(f, "1");
        }
        let mut parts = Vec::new();
        for (sym, exp) in [("kg", self.kg), ("m", self.m), ("s", self.s)] {
            match exp {
                0 => {}
                1 => parts.push(sym.to_string()),
                e => parts.push(format!("{sym}^{e}")),
            }
        }
        write!(f, "{}", parts.join("·"))
    }
}

/// A real value tagged with its SI dimension.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quantity {
    pub value: f64,
    pub dim: Dimension,
}

impl Quantity {
    pub const fn new(value: f64, dim: Dimension) -> Self {
        Self { value, dim }
    }

    pub const fn dimensionless(value: f64) -> Self {
        Self::new(value, Dimension::DIMENSIONLESS)
    }

    pub fn checked_add(self, rhs: Quantity) -> Result<Quantity> {
        self.same_dim(rhs)?;
        Ok(Quantity::new(self.value + rhs.value, self.dim))
    }

    pub fn checked_sub(self, rhs: Quantity) -> Result<Quantity> {
        self.same_dim(rhs)?;
        Ok(Quantity::new(self.value - rhs.value, self.dim))
    }

    /// Square root; every exponent must be even.
    pub fn sqrt(self) -> Result<Quantity> {
        let d = self.dim;
        if d.kg % 2 != 0 || d.m % 2 != 0 || d.s % 2 != 0 {
            return Err(Error::invalid(
                "quantity",
                format!("cannot take the square root of dimension {d}"),
            ));
        }
        Ok(Quantity::new(
            self.value.sqrt(),
            Dimension::new(d.kg / 2, d.m / 2, d.s / 2),
        ))
    }

    pub fn powi(self, n: i8) -> Quantity {
        Quantity::new(
            self.value.powi(n as i32),
            Dimension::new(self.dim.kg * n, self.dim.m * n, self.dim.s * n),
        )
    }

    pub fn recip(self) -> Quantity {
        self.powi(-1)
    }

    pub fn scale(self, factor: f64) -> Quantity {
        Quantity::new(self.value * factor, self.dim)
    }

    /// Returns the raw value after confirming the dimension.
    pub fn expect(self, dim: Dimension) -> Result<f64> {
        if self.dim == dim {
            Ok(self.value)
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: dim,
            })
        }
    }

    fn same_dim(self, rhs: Quantity) -> Result<()> {
        if self.dim == rhs.dim {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            })
        }
    }
}

impl Mul for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value * rhs.value, self.dim.combine(rhs.dim, 1))
    }
}

impl Div for Quantity {
    type Output = Quantity;
    fn div(self, rhs: Quantity) -> Quantity {
        Quantity::new(self.value / rhs.value, self.dim.combine(rhs.dim, -1))
    }
}

impl Mul<f64> for Quantity {
    type Output = Quantity;
    fn mul(self, rhs: f64) -> Quantity {
        self.scale(rhs)
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e} {}", self.value, self.dim)
    }
}

/// Physical constants. Defaults are CODATA 2018.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Constants {
    /// Reduced Planck constant, J·s.
    pub hbar: f64,
    /// Boltzmann constant, J/K.
    pub boltzmann: f64,
}

impl Constants {
    pub const CODATA_2018: Constants = Constants {
        hbar: 1.054_571_817e-34,
        boltzmann: 1.380_649e-23,
    };

    pub fn new(hbar: f64, boltzmann: f64) -> Result<Self> {
        require_positive("hbar", hbar)?;
        require_positive("boltzmann", boltzmann)?;
        Ok(Self { hbar, boltzmann })
    }

    pub fn hbar_quantity(&self) -> Quantity {
        Quantity::new(self.hbar, Dimension::ACTION)
    }

    /// Planck constant h = 2πħ.
    pub fn planck(&self) -> f64 {
        std::f64::consts::TAU * self.hbar
    }
}

impl Default for Constants {
    fn default() -> Self {
        Self::CODATA_2018
    }
}

/// A massive particle type.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParticleSpecies {
    pub name: String,
    #[serde(rename = "mass_kg")]
    mass: f64,
}

impl ParticleSpecies {
    pub fn new(name: impl Into<String>, mass: f64) -> Result<Self> {
        require_positive("mass", mass)?;
        Ok(Self {
            name: name.into(),
            mass,
        })
    }

    /// The documented reference species used throughout the examples, m = 1e-25 kg.
    pub fn reference() -> Self {
        Self {
            name: "reference".into(),
            mass: 1.0e-25,
        }
    }

    /// Mass in kg.
    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn mass_quantity(&self) -> Quantity {
        Quantity::new(self.mass, Dimension::MASS)
    }

    fn validate(&self) -> Result<()> {
        require_positive("mass", self.mass).map(|_| ())
    }
}

/// Natural impedance Z₀ = ħ/m².
pub fn natural_impedance(constants: &Constants, species: &ParticleSpecies) -> Quantity {
    constants.hbar_quantity() / species.mass_quantity().powi(2)
}

/// Vacuum angular frequency ω_v = m·v_v²/(2ħ) of a free particle moving at `v_v`.
pub fn vacuum_frequency(constants: &Constants, species: &ParticleSpecies, v_v: f64) -> Result<Quantity> {
    require_positive("particle velocity", v_v)?;
    let v = Quantity::new(v_v, Dimension::VELOCITY);
    let energy = species.mass_quantity() * v.powi(2) * 0.5;
    Ok(energy / constants.hbar_quantity())
}

/// Particle velocity √(2ħω_v/m) corresponding to a vacuum frequency.
pub fn velocity_from_vacuum_frequency(
    constants: &Constants,
    species: &ParticleSpecies,
    omega_v: f64,
) -> Result<Quantity> {
    require_positive("vacuum frequency", omega_v)?;
    let w = Quantity::new(omega_v, Dimension::ANGULAR_FREQUENCY);
    (constants.hbar_quantity() * w * 2.0 / species.mass_quantity()).sqrt()
}

/// Named species plus the constants they should be used with.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SpeciesRegistry {
    pub constants: Constants,
    species: BTreeMap<String, ParticleSpecies>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RegistryFile {
    #[serde(default)]
    constants: Constants,
    #[serde(default)]
    species: Vec<ParticleSpecies>,
}

impl SpeciesRegistry {
    /// Parses a registry from TOML:
    ///
    /// ```toml
    /// [constants]
    /// hbar = 1.054571817e-34
    ///
    /// [[species]]
    /// name = "rb87"
    /// mass_kg = 1.443160648e-25
    /// ```
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let file: RegistryFile = toml::from_str(text).map_err(|e| Error::Record(e.to_string()))?;
        let constants = Constants::new(file.constants.hbar, file.constants.boltzmann)?;
        let mut species = BTreeMap::new();
        for s in file.species {
            s.validate()?;
            if species.insert(s.name.clone(), s.clone()).is_some() {
                return Err(Error::Record(format!("duplicate species {:?}", s.name)));
            }
        }
        Ok(Self { constants, species })
    }

    pub fn insert(&mut self, species: ParticleSpecies) {
        self.species.insert(species.name.clone(), species);
    }

    pub fn get(&self, name: &str) -> Option<&ParticleSpecies> {
        self.species.get(name)
    }

    pub fn len(&self) -> usize {
        self.species.len()
    }

    pub fn is_empty(&self) -> bool {
        self.species.is_empty()
    }
}
