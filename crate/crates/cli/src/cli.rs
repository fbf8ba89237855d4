use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "matterwave", version, about = "Matter-wave mode, scattering, interferometer and resonator calculations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Derived quantities of a single matter-wave mode.
    Mode(ModeCmd),
    /// Finite-difference check of the plane-wave field equations.
    Fields(FieldsCmd),
    /// Classical particle driven by the travelling potential.
    Classical(ClassicalCmd),
    /// Reflection and transmission of a step or layer stack.
    Scatter(ScatterCmd),
    /// Mach-Zehnder output versus path-length difference.
    Mzi(MziCmd),
    /// Fabry-Perot comb, linewidth and Airy scan.
    Resonator(ResonatorCmd),
    /// Accelerometer readout from resonance shifts.
    Accel(AccelCmd),
    /// Mean-field index shift, resonance pull and parametric branches.
    Interact(InteractCmd),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Mode(_) => "mode",
            Command::Fields(_) => "fields",
            Command::Classical(_) => "classical",
            Command::Scatter(_) => "scatter",
            Command::Mzi(_) => "mzi",
            Command::Resonator(_) => "resonator",
            Command::Accel(_) => "accel",
            Command::Interact(_) => "interact",
        }
    }

    pub fn common(&self) -> &Common {
        match self {
            Command::Mode(c) => &c.common,
            Command::Fields(c) => &c.common,
            Command::Classical(c) => &c.common,
            Command::Scatter(c) => &c.common,
            Command::Mzi(c) => &c.common,
            Command::Resonator(c) => &c.common,
            Command::Accel(c) => &c.common,
            Command::Interact(c) => &c.common,
        }
    }
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML run configuration; flags override its values.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Particle mass, kg.
    #[arg(long)]
    pub mass: Option<f64>,
    #[arg(long)]
    pub species_name: Option<String>,
    /// Drive frequency, rad/s.
    #[arg(long, conflicts_with = "omega0_hz")]
    pub omega0: Option<f64>,
    /// Drive frequency, Hz.
    #[arg(long)]
    pub omega0_hz: Option<f64>,
    /// Particle velocity, m/s.
    #[arg(long, conflicts_with = "ev")]
    pub vv: Option<f64>,
    /// Particle kinetic energy, J.
    #[arg(long)]
    pub ev: Option<f64>,
    /// Write summary.txt and CSV tables here instead of stdout.
    #[arg(long)]
    pub out_dir: Option<PathBuf>,
    /// Print the effective configuration and exit.
    #[arg(long)]
    pub dump_config: bool,
}

#[derive(Debug, Args)]
pub struct CavityArgs {
    /// Cavity length, m.
    #[arg(long = "L")]
    pub length: Option<f64>,
    #[arg(long, conflicts_with = "reflectance")]
    pub finesse: Option<f64>,
    /// Mirror reflectance in (0, 1).
    #[arg(long)]
    pub reflectance: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ModeCmd {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FieldsCmd {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub a0: Option<f64>,
    /// Points per axis on the coarsest grid.
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub refinements: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ClassicalCmd {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Initial canonical momentum in units of the resonant momentum.
    #[arg(long)]
    pub p0_factor: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub x0: Option<f64>,
    #[arg(long)]
    pub periods: Option<f64>,
    #[arg(long)]
    pub steps_per_period: Option<usize>,
    #[arg(long)]
    pub sample_every: Option<usize>,
}

#[derive(Debug, Args)]
pub struct ScatterCmd {
    #[command(flatten)]
    pub common: Common,
    /// Layer-stack TOML file.
    #[arg(long, conflicts_with = "step")]
    pub stack: Option<PathBuf>,
    /// Single step of height U/ħω_v.
    #[arg(long, allow_negative_numbers = true)]
    pub step: Option<f64>,
    /// maxwell, debroglie or both.
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long)]
    pub no_numerov: bool,
    #[arg(long)]
    pub points_per_wavelength: Option<usize>,
}

#[derive(Debug, Args)]
pub struct MziCmd {
    #[command(flatten)]
    pub common: Common,
    #[arg(long)]
    pub flux: Option<f64>,
    #[arg(long)]
    pub split_ratio: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dl_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub dl_max: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Args)]
pub struct ResonatorCmd {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub cavity: CavityArgs,
    #[arg(long)]
    pub comb_half_width: Option<u64>,
    /// Airy scan width in free spectral ranges.
    #[arg(long)]
    pub scan_fsr: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    #[arg(long)]
    pub log: bool,
}

#[derive(Debug, Args)]
pub struct AccelCmd {
    #[command(flatten)]
    pub common: Common,
    #[command(flatten)]
    pub cavity: CavityArgs,
    /// Comb line index; defaults to the line ω₀ is locked to.
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long)]
    pub report_resolution: bool,
    /// CSV file with columns t, delta_omega.
    #[arg(long, conflicts_with = "shift")]
    pub shifts: Option<PathBuf>,
    /// A single frequency shift, rad/s.
    #[arg(long, allow_negative_numbers = true)]
    pub shift: Option<f64>,
}

#[derive(Debug, Args)]
pub struct InteractCmd {
    #[command(flatten)]
    pub common: Common,
    /// Cavity for the resonance pull; omitted when no length is given.
    #[command(flatten)]
    pub cavity: CavityArgs,
    #[arg(long)]
    pub flux: Option<f64>,
    /// Effective cross-section, m².
    #[arg(long)]
    pub area: Option<f64>,
    /// s-wave scattering length, m.
    #[arg(long, allow_negative_numbers = true)]
    pub scattering_length: Option<f64>,
}
