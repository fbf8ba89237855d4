//! Config assembly and the per-subcommand runners.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use matterwave::classical::{integrate, DriveField, ParticleState};
use matterwave::fields::{wave_equation_residual, Grid, PlaneWaveField};
use matterwave::interactions::{
    energy_density, index_shift, mean_field_energy, parametric_branch, resonance_pull, CounterPropPair,
};
use matterwave::interferometer::{fringe_period, mzi_output, MachZehnderConfig};
use matterwave::scattering::{numerov_oracle_with, transfer_matrix, LayerStack, StackSpec};
use matterwave::{Convention, MatterWaveMode};
use rayon::prelude::*;
use serde::Deserialize;

use crate::cli::{CavityArgs, Command, Common};
use crate::config::{
    sweep, AccelSection, CavitySection, ClassicalSection, FieldsSection, InteractSection, MziSection,
    ResonatorSection, RunConfig, ScatterSection,
};
use crate::error::{CliError, Result};
use crate::output::{Report, Table, Value};

fn absolute(path: &Path) -> Result<PathBuf> {
    std::path::absolute(path).map_err(|e| CliError::io(path, e))
}

fn set<T>(slot: &mut T, value: &Option<T>)
where
    T: Clone,
{
    if let Some(v) = value {
        *slot = v.clone();
    }
}

fn apply_common(cfg: &mut RunConfig, c: &Common) -> Result<()> {
    set(&mut cfg.species.mass_kg, &c.mass);
    set(&mut cfg.species.name, &c.species_name);
    if c.omega0.is_some() {
        cfg.mode.omega0 = c.omega0;
        cfg.mode.omega0_hz = None;
    }
    if c.omega0_hz.is_some() {
        cfg.mode.omega0_hz = c.omega0_hz;
        cfg.mode.omega0 = None;
    }
    if c.vv.is_some() {
        cfg.mode.v_v = c.vv;
        cfg.mode.e_v = None;
    }
    if c.ev.is_some() {
        cfg.mode.e_v = c.ev;
        cfg.mode.v_v = None;
    }
    if let Some(d) = &c.out_dir {
        cfg.output.dir = Some(absolute(d)?);
    }
    Ok(())
}

fn apply_cavity(cfg: &mut RunConfig, a: &CavityArgs) {
    if a.length.is_none() && a.finesse.is_none() && a.reflectance.is_none() {
        return;
    }
    let c = cfg.cavity.get_or_insert_with(CavitySection::default);
    if a.length.is_some() {
        c.length_m = a.length;
    }
    if a.finesse.is_some() {
        c.finesse = a.finesse;
        c.reflectance = None;
    }
    if a.reflectance.is_some() {
        c.reflectance = a.reflectance;
        c.finesse = None;
    }
}

/// Effective configuration: file (if any), then command-line overrides.
pub fn assemble(command: &Command) -> Result<RunConfig> {
    let common = command.common();
    let mut cfg = match &common.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    apply_common(&mut cfg, common)?;
    match command {
        Command::Mode(_) => {}
        Command::Fields(a) => {
            let s = cfg.fields.get_or_insert_with(FieldsSection::default);
            set(&mut s.a0, &a.a0);
            set(&mut s.points, &a.points);
            set(&mut s.refinements, &a.refinements);
        }
        Command::Classical(a) => {
            let s = cfg.classical.get_or_insert_with(ClassicalSection::default);
            set(&mut s.epsilon, &a.epsilon);
            set(&mut s.p0_factor, &a.p0_factor);
            set(&mut s.x0, &a.x0);
            set(&mut s.periods, &a.periods);
            set(&mut s.steps_per_period, &a.steps_per_period);
            set(&mut s.sample_every, &a.sample_every);
        }
        Command::Scatter(a) => {
            let s = cfg.scatter.get_or_insert_with(ScatterSection::default);
            if let Some(p) = &a.stack {
                s.stack = Some(absolute(p)?);
                s.step_u_over_hbar_omega_v = None;
            }
            if a.step.is_some() {
                s.step_u_over_hbar_omega_v = a.step;
                s.stack = None;
            }
            set(&mut s.convention, &a.convention);
            if a.no_numerov {
                s.numerov = false;
            }
            set(&mut s.points_per_wavelength, &a.points_per_wavelength);
        }
        Command::Mzi(a) => {
            let s = cfg.mzi.get_or_insert_with(MziSection::default);
            set(&mut s.flux, &a.flux);
            set(&mut s.split_ratio, &a.split_ratio);
            set(&mut s.delta_l_min, &a.dl_min);
            if a.dl_max.is_some() {
                s.delta_l_max = a.dl_max;
            }
            set(&mut s.points, &a.points);
            s.log |= a.log;
        }
        Command::Resonator(a) => {
            apply_cavity(&mut cfg, &a.cavity);
            let s = cfg.resonator.get_or_insert_with(ResonatorSection::default);
            set(&mut s.comb_half_width, &a.comb_half_width);
            set(&mut s.scan_fsr, &a.scan_fsr);
            set(&mut s.points, &a.points);
            s.log |= a.log;
        }
        Command::Accel(a) => {
            apply_cavity(&mut cfg, &a.cavity);
            let s = cfg.accel.get_or_insert_with(AccelSection::default);
            if a.n.is_some() {
                s.n = a.n;
            }
            s.report_resolution |= a.report_resolution;
            if let Some(p) = &a.shifts {
                s.shifts = Some(absolute(p)?);
                s.shift = None;
            }
            if a.shift.is_some() {
                s.shift = a.shift;
                s.shifts = None;
            }
        }
        Command::Interact(a) => {
            apply_cavity(&mut cfg, &a.cavity);
            let s = cfg.interact.get_or_insert_with(InteractSection::default);
            set(&mut s.flux, &a.flux);
            set(&mut s.area_m2, &a.area);
            set(&mut s.scattering_length_m, &a.scattering_length);
        }
    }
    cfg.validate_output()?;
    Ok(cfg)
}

/// Runs `name` on an assembled configuration.
pub fn run(name: &str, cfg: &RunConfig) -> Result<Report> {
    let mode = cfg.build_mode()?;
    match name {
        "mode" => Ok(run_mode(&mode)),
        "fields" => run_fields(&mode, cfg.fields.clone().unwrap_or_default()),
        "classical" => run_classical(&mode, cfg.classical.clone().unwrap_or_default()),
        "scatter" => run_scatter(&mode, cfg.scatter.clone().unwrap_or_default()),
        "mzi" => run_mzi(&mode, cfg.mzi.clone().unwrap_or_default()),
        "resonator" => run_resonator(cfg, &mode, cfg.resonator.clone().unwrap_or_default()),
        "accel" => run_accel(cfg, &mode, cfg.accel.clone().unwrap_or_default()),
        "interact" => run_interact(cfg, &mode, cfg.interact.clone().unwrap_or_default()),
        other => Err(CliError::config(format!("unknown subcommand {other}"))),
    }
}

fn put_mode_header(r: &mut Report, m: &MatterWaveMode) {
    r.put("species", m.species().name.as_str());
    r.put("mass_kg", m.mass());
    r.put("omega0", m.omega0());
    r.put("v_v", m.v_v());
    r.put("n", m.n());
}

fn run_mode(m: &MatterWaveMode) -> Report {
    let mut r = Report::new("mode");
    put_mode_header(&mut r, m);
    r.put("hbar", m.hbar());
    r.put("omega_v", m.omega_v());
    r.put("k0", m.k0());
    r.put("k", m.k());
    r.put("k_v", m.k_v());
    r.put("z0", m.z0());
    r.put("z", m.z());
    r.put("v0", m.v0());
    r.put("v_a", m.v_a());
    r.put("de_broglie_wavelength", m.de_broglie_wavelength());
    r.put("maxwell_wavelength", fringe_period(m, Convention::Maxwell));
    r.put("vacuum_energy", m.vacuum_energy());
    r.put("excited_energy", m.excited_energy());
    let q = m.matteron();
    r.put("matteron_energy", q.energy);
    r.put("matteron_momentum", q.momentum);
    let med = m.medium_constants();
    r.put("upsilon0", med.upsilon0);
    r.put("upsilon", med.upsilon);
    r.put("xi0", med.xi0);
    r.put("xi", med.xi);
    r.put("phase_velocity", med.phase_velocity());
    if let Ok(a) = m.amplitudes_from_flux(1.0) {
        r.put("current0_unit_flux", a.current0);
        r.put("potential0_unit_flux", a.potential0);
    }
    r
}

fn run_fields(m: &MatterWaveMode, s: FieldsSection) -> Result<Report> {
    let field = PlaneWaveField::from_potential(s.a0, m)?;
    let med = m.medium_constants();
    let mut grids = vec![Grid {
        x_span: field.wavelength(),
        t_span: 0.5 * field.period(),
        nx: s.points,
        nt: s.points,
    }];
    for _ in 0..s.refinements {
        let g = grids.last().expect("non-empty").refined();
        grids.push(g);
    }
    let residuals = grids
        .par_iter()
        .map(|g| wave_equation_residual(&field, &med, g))
        .collect::<matterwave::Result<Vec<_>>>()?;

    let mut r = Report::new("fields");
    put_mode_header(&mut r, m);
    r.put("a0", field.a0);
    r.put("f0", field.f0);
    r.put("g0", field.g0);
    r.put("phase_velocity", med.phase_velocity());
    r.put("v_a", m.v_a());
    r.put("phase_velocity_rel_error", (med.phase_velocity() - m.v_a()).abs() / m.v_a());

    let mut t = Table::new(
        "residuals",
        &["level", "nx", "nt", "dx", "dt", "wave_equation", "faraday", "ampere", "ratio_wave_equation"],
    );
    for (i, (g, res)) in grids.iter().zip(&residuals).enumerate() {
        let ratio: Value = if i == 0 {
            "".into()
        } else {
            (residuals[i - 1].wave_equation / res.wave_equation).into()
        };
        t.push(vec![
            i.into(),
            g.nx.into(),
            g.nt.into(),
            g.dx().into(),
            g.dt().into(),
            res.wave_equation.into(),
            res.faraday.into(),
            res.ampere.into(),
            ratio,
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

fn run_classical(m: &MatterWaveMode, s: ClassicalSection) -> Result<Report> {
    if s.steps_per_period == 0 || s.sample_every == 0 {
        return Err(CliError::config("steps_per_period and sample_every must be >= 1"));
    }
    if !(s.periods > 0.0 && s.periods.is_finite()) {
        return Err(CliError::config("periods must be positive"));
    }
    let p_res = m.mass() * m.omega0() / m.k();
    let a0 = s.epsilon * p_res / m.mass();
    let drive = DriveField::from_mode(m, a0)?;
    let p0 = s.p0_factor * p_res;
    let state = ParticleState::new(s.x0, p0, 0.0)?;
    let period = std::f64::consts::TAU / m.omega0();
    let dt = period / s.steps_per_period as f64;
    let steps = (s.periods * s.steps_per_period as f64).round() as usize;
    let traj = integrate(&state, &drive, m.species(), dt, steps)?;

    let mut r = Report::new("classical");
    put_mode_header(&mut r, m);
    r.put("epsilon", s.epsilon);
    r.put("a0", a0);
    r.put("p_resonant", p_res);
    r.put("p0", p0);
    r.put("dt", dt);
    r.put("steps", steps);
    let drift = traj.max_relative_momentum_drift();
    r.put("max_relative_drift", drift);
    r.put("drift_over_epsilon_sq", drift / (s.epsilon * s.epsilon));
    r.put("relative_peak_to_peak", traj.momentum_peak_to_peak() / p0.abs());
    let first = traj.samples[0];
    let last = *traj.last();
    r.put("kinetic_initial", first.kinetic);
    r.put("kinetic_final", last.kinetic);
    r.put("energy_initial", first.energy);
    r.put("energy_final", last.energy);

    let mut t = Table::new("trajectory", &["t", "x", "p", "kinetic", "energy"]);
    for (i, smp) in traj.samples.iter().enumerate() {
        if i % s.sample_every == 0 || i == traj.samples.len() - 1 {
            t.push(vec![smp.t.into(), smp.x.into(), smp.p.into(), smp.kinetic.into(), smp.energy.into()]);
        }
    }
    r.tables.push(t);
    Ok(r)
}

fn conventions(choice: &str) -> Result<Vec<Convention>> {
    match choice {
        "both" => Ok(Convention::BOTH.to_vec()),
        "maxwell" => Ok(vec![Convention::Maxwell]),
        "debroglie" => Ok(vec![Convention::DeBroglie]),
        other => Err(CliError::config(format!(
            "convention {other:?}; expected maxwell, debroglie or both"
        ))),
    }
}

fn load_stack(m: &MatterWaveMode, s: &ScatterSection) -> Result<LayerStack> {
    match (&s.stack, s.step_u_over_hbar_omega_v) {
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            let spec = StackSpec::from_toml_str(&text)
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?;
            Ok(spec.to_stack(m)?)
        }
        (None, Some(u)) => Ok(LayerStack::step(u * m.vacuum_energy())),
        (Some(_), Some(_)) => Err(CliError::config("give a stack file or a step, not both")),
        (None, None) => Err(CliError::config("scatter needs a stack file or a step height")),
    }
}

fn run_scatter(m: &MatterWaveMode, s: ScatterSection) -> Result<Report> {
    let stack = load_stack(m, &s)?;
    let convs = conventions(&s.convention)?;

    let mut r = Report::new("scatter");
    put_mode_header(&mut r, m);
    r.put("layers", stack.layers.len());
    r.put("total_length", stack.total_length());
    r.put("exit_u_over_hbar_omega_v", stack.exit_potential / m.vacuum_energy());

    let mut t = Table::new(
        "scatter",
        &["method", "reflectance", "transmittance", "r_plus_t", "t_amplitude_sq", "r_re", "r_im"],
    );
    for c in convs {
        let res = transfer_matrix(&stack, m, c)?;
        t.push(vec![
            c.as_str().into(),
            res.reflectance.into(),
            res.transmittance.into(),
            (res.reflectance + res.transmittance).into(),
            res.t_amplitude_sq().into(),
            res.r.re.into(),
            res.r.im.into(),
        ]);
    }
    if s.numerov {
        let o = numerov_oracle_with(&stack, m, s.points_per_wavelength)?;
        r.put("numerov_steps", o.steps);
        t.push(vec![
            "numerov".into(),
            o.reflectance.into(),
            o.transmittance.into(),
            (o.reflectance + o.transmittance).into(),
            "".into(),
            "".into(),
            "".into(),
        ]);
    }
    r.tables.push(t);
    Ok(r)
}

fn run_mzi(m: &MatterWaveMode, s: MziSection) -> Result<Report> {
    let max = s
        .delta_l_max
        .unwrap_or(2.0 * fringe_period(m, Convention::Maxwell));
    let grid = sweep(s.delta_l_min, max, s.points, s.log)?;
    // validates flux and split ratio once up front
    let base = MachZehnderConfig::with_split_ratio(m.clone(), s.flux, 0.0, s.split_ratio)?;

    let rows: Vec<Vec<Value>> = grid
        .par_iter()
        .map(|&dl| {
            let cfg = MachZehnderConfig {
                delta_l: dl,
                ..base.clone()
            };
            let a = mzi_output(&cfg, Convention::Maxwell);
            let b = mzi_output(&cfg, Convention::DeBroglie);
            vec![dl.into(), a.bright.into(), a.dark.into(), b.bright.into(), b.dark.into()]
        })
        .collect();

    let mut r = Report::new("mzi");
    put_mode_header(&mut r, m);
    let pm = fringe_period(m, Convention::Maxwell);
    let pd = fringe_period(m, Convention::DeBroglie);
    r.put("fringe_period_maxwell", pm);
    r.put("fringe_period_debroglie", pd);
    r.put("fringe_ratio", pd / pm);
    r.put("n_sq_over_2", 0.5 * m.n() * m.n());
    r.put("visibility", base.visibility());
    let mut t = Table::new(
        "mzi",
        &["delta_L", "bright_maxwell", "dark_maxwell", "bright_debroglie", "dark_debroglie"],
    );
    t.rows = rows;
    r.tables.push(t);
    Ok(r)
}

fn run_resonator(cfg: &RunConfig, m: &MatterWaveMode, s: ResonatorSection) -> Result<Report> {
    let res = cfg.build_resonator(m)?;
    let n0 = res.nearest_mode(m.omega0());
    let center = res.resonance_frequency(n0)?;
    let half = 0.5 * s.scan_fsr * res.fsr();
    if !(s.scan_fsr > 0.0) || center - half <= 0.0 {
        return Err(CliError::config("scan_fsr must be positive and keep the scan above zero frequency"));
    }
    let grid = sweep(center - half, center + half, s.points, s.log)?;
    let airy = grid
        .par_iter()
        .map(|&w| res.airy_transmission(w).map(|t| vec![Value::from(w), Value::from(t)]))
        .collect::<matterwave::Result<Vec<_>>>()?;

    let mut r = Report::new("resonator");
    put_mode_header(&mut r, m);
    r.put("length", res.length());
    r.put("finesse", res.finesse());
    r.put("reflectance", res.reflectance());
    r.put("fsr", res.fsr());
    r.put("linewidth", res.linewidth());
    r.put("nearest_n", n0);
    r.put("omega_nearest", center);
    let locked = res.locked_index().is_ok();
    r.put("locked", locked);
    r.put("kappa", res.accel_scale_factor(n0)?);
    if locked {
        r.put("a_res", res.accel_resolution()?);
    }

    let mut comb = Table::new("comb", &["N", "omega_N", "kL_over_pi"]);
    let lo = n0.saturating_sub(s.comb_half_width).max(1);
    for n in lo..=n0 + s.comb_half_width {
        let w = res.resonance_frequency(n)?;
        let kl = m.with_omega0(w)?.k() * res.length() / PI;
        comb.push(vec![n.into(), w.into(), kl.into()]);
    }
    r.tables.push(comb);
    let mut t = Table::new("airy", &["omega", "T_cav"]);
    t.rows = airy;
    r.tables.push(t);
    Ok(r)
}

#[derive(Debug, Deserialize)]
struct ShiftRow {
    t: f64,
    delta_omega: f64,
}

fn read_shifts(path: &Path) -> Result<Vec<ShiftRow>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut rdr = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    rdr.deserialize()
        .map(|row| row.map_err(|e| CliError::config(format!("{}: {e}", path.display()))))
        .collect()
}

fn run_accel(cfg: &RunConfig, m: &MatterWaveMode, s: AccelSection) -> Result<Report> {
    let res = cfg.build_resonator(m)?;
    let n = match s.n {
        Some(n) => n,
        None => res.locked_index()?,
    };
    let kappa = res.accel_scale_factor(n)?;

    let mut r = Report::new("accel");
    put_mode_header(&mut r, m);
    r.put("length", res.length());
    r.put("finesse", res.finesse());
    r.put("N", n);
    r.put("kappa", kappa);
    r.put("fsr", res.fsr());
    r.put("linewidth", res.linewidth());
    if s.report_resolution {
        r.put("a_res", res.accel_resolution()?);
    }
    if let Some(dw) = s.shift {
        let reading = res.accel_from_shift(n, dw)?;
        r.put("delta_omega", reading.delta_omega);
        r.put("acceleration", reading.acceleration);
        r.put("resolution", reading.resolution);
    }
    if let Some(path) = &s.shifts {
        let rows = read_shifts(path)?;
        let mut t = Table::new("readings", &["t", "delta_omega", "acceleration", "resolution"]);
        for row in rows {
            let reading = res.accel_from_shift(n, row.delta_omega)?;
            t.push(vec![
                row.t.into(),
                reading.delta_omega.into(),
                reading.acceleration.into(),
                reading.resolution.into(),
            ]);
        }
        r.put("readings", t.rows.len());
        r.tables.push(t);
    }
    Ok(r)
}

fn run_interact(cfg: &RunConfig, m: &MatterWaveMode, s: InteractSection) -> Result<Report> {
    let pair = CounterPropPair::new(m.clone(), s.flux, s.area_m2, s.scattering_length_m)?;
    let shift = index_shift(&pair)?;

    let mut r = Report::new("interact");
    put_mode_header(&mut r, m);
    r.put("flux", pair.flux);
    r.put("area", pair.area);
    r.put("scattering_length", pair.scattering_length);
    r.put("energy_density", energy_density(&pair));
    r.put("mean_field_energy", mean_field_energy(&pair));
    r.put("relative_energy", shift.relative_energy);
    r.put("delta_n", shift.exact);
    r.put("delta_n_first_order", shift.first_order);
    r.put("delta_n_flux_form", shift.flux_form);

    if cfg.cavity.as_ref().and_then(|c| c.length_m).is_some() {
        let res = cfg.build_resonator(m)?;
        let pull = resonance_pull(&res, &pair)?;
        r.put("pull_n", pull.n_index);
        r.put("pull", pull.exact);
        r.put("pull_first_order", pull.first_order);
        r.put("pull_beyond_half_fsr", pull.beyond_half_fsr);
    }

    match parametric_branch(m) {
        Ok(b) => {
            let mut t = Table::new(
                "branches",
                &[
                    "n",
                    "n_plus",
                    "n_minus",
                    "delta_p_exact",
                    "delta_p_approx",
                    "relative_gap",
                    "energy_plus",
                    "energy_minus",
                ],
            );
            t.push(vec![
                m.n().into(),
                b.n_plus.into(),
                b.n_minus.into(),
                b.delta_p_exact.into(),
                b.delta_p_approx.into(),
                ((b.delta_p_exact - b.delta_p_approx) / b.delta_p_approx).abs().into(),
                b.energy_plus.into(),
                b.energy_minus.into(),
            ]);
            r.tables.push(t);
        }
        Err(e) => r.put("parametric_branch", format!("unavailable: {e}")),
    }
    Ok(r)
}
