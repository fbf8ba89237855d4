//! Acceptance suite. Each criterion is evaluated at its stated tolerance and
//! runtime limit and reported on one PASS/FAIL line.
//!
//! Two criteria cannot be met as stated (see `KNOWN_RED`). They are still
//! evaluated and printed as FAIL; the process exits non-zero if any other
//! criterion fails or if a known-red criterion starts passing.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fs;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use matterwave::classical::{integrate, DriveField, ParticleState};
use matterwave::fields::{wave_equation_residual, Grid, PlaneWaveField};
use matterwave::interactions::{index_shift, mean_field_energy, parametric_branch, resonance_pull, CounterPropPair};
use matterwave::interferometer::fringe_period;
use matterwave::resonator::Resonator;
use matterwave::scattering::{numerov_oracle, region_wavenumber, transfer_matrix, Layer, LayerStack};
use matterwave::{Convention, MatterWaveMode, ParticleMotion, ParticleSpecies};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria that fail as stated; the analysis lives in the project's
/// decisions notes and the README.
const KNOWN_RED: [u32; 2] = [3, 5];

const SEED: u64 = 0x6d61_7474_6572;

struct Outcome {
    passed: bool,
    detail: String,
    notes: Vec<String>,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
            notes: Vec::new(),
        }
    }

    fn note(mut self, line: impl Into<String>) -> Self {
        self.notes.push(line.into());
        self
    }
}

fn reference_mode() -> MatterWaveMode {
    MatterWaveMode::new(ParticleSpecies::reference(), TAU * 1000.0, ParticleMotion::Velocity(0.01)).unwrap()
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn log_uniform(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

fn c1_resolution_figure() -> Outcome {
    let res = Resonator::with_finesse(reference_mode(), 0.01, 100.0).unwrap();
    let a = res.accel_resolution().unwrap();
    let err = rel(a, 1e-7);
    Outcome::new(err <= 1e-3, format!("a_res = {a:.6e} m/s², rel err {err:.1e} (tol 1e-3)"))
}

fn c2_fringe_ratio() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let mass = log_uniform(&mut rng, 1e-27, 1e-24);
        let ratio = log_uniform(&mut rng, 1e-4, 0.9);
        let v = log_uniform(&mut rng, 1e-3, 1.0);
        let species = ParticleSpecies::new("random", mass).unwrap();
        let probe = MatterWaveMode::new(species, 1.0, ParticleMotion::Velocity(v)).unwrap();
        let m = probe.with_omega0(ratio * probe.omega_v()).unwrap();
        let r = fringe_period(&m, Convention::DeBroglie) / fringe_period(&m, Convention::Maxwell);
        worst = worst.max(rel(r, 0.5 * m.n() * m.n()));
    }
    Outcome::new(worst <= 1e-12, format!("100 modes, max rel err {worst:.1e} (tol 1e-12)"))
}

fn random_stack(rng: &mut ChaCha8Rng, m: &MatterWaveMode) -> LayerStack {
    let e = m.vacuum_energy();
    let lam = m.de_broglie_wavelength();
    let count = rng.gen_range(1..=8);
    let layers = (0..count)
        .map(|_| Layer {
            potential: rng.gen_range(0.0..0.9) * e,
            length: rng.gen_range(0.05..2.0) * lam,
        })
        .collect();
    LayerStack::new(layers, rng.gen_range(0.0..0.9) * e).unwrap()
}

fn tunneling_stack(rng: &mut ChaCha8Rng, m: &MatterWaveMode) -> LayerStack {
    let e = m.vacuum_energy();
    let lam = m.de_broglie_wavelength();
    let count = rng.gen_range(1..=3);
    let mut layers = Vec::with_capacity(count);
    for i in 0..count {
        if i % 2 == 0 {
            let u = rng.gen_range(1.1..3.0) * e;
            let kappa = region_wavenumber(m, u, Convention::DeBroglie).unwrap().im;
            layers.push(Layer {
                potential: u,
                length: rng.gen_range(0.2..3.0) / kappa,
            });
        } else {
            layers.push(Layer {
                potential: rng.gen_range(0.0..0.9) * e,
                length: rng.gen_range(0.1..1.0) * lam,
            });
        }
    }
    LayerStack::new(layers, 0.0).unwrap()
}

fn c3_scattering_equivalence() -> Outcome {
    let m = reference_mode();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut stacks: Vec<LayerStack> = (0..50).map(|_| random_stack(&mut rng, &m)).collect();
    stacks.extend((0..10).map(|_| tunneling_stack(&mut rng, &m)));

    let (mut mx_db, mut mx_nu, mut db_nu, mut unitarity) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for s in &stacks {
        let a = transfer_matrix(s, &m, Convention::Maxwell).unwrap();
        let b = transfer_matrix(s, &m, Convention::DeBroglie).unwrap();
        let c = numerov_oracle(s, &m).unwrap();
        let gap = |r1: f64, t1: f64, r2: f64, t2: f64| (r1 - r2).abs().max((t1 - t2).abs());
        mx_db = mx_db.max(gap(a.reflectance, a.transmittance, b.reflectance, b.transmittance));
        mx_nu = mx_nu.max(gap(a.reflectance, a.transmittance, c.reflectance, c.transmittance));
        db_nu = db_nu.max(gap(b.reflectance, b.transmittance, c.reflectance, c.transmittance));
        for sum in [
            a.reflectance + a.transmittance,
            b.reflectance + b.transmittance,
            c.reflectance + c.transmittance,
        ] {
            unitarity = unitarity.max((sum - 1.0).abs());
        }
    }
    let ok = |x: f64, tol: f64| if x <= tol { "ok" } else { "FAIL" };
    let passed = mx_db <= 1e-6 && mx_nu <= 1e-6 && db_nu <= 1e-6 && unitarity <= 1e-8;
    Outcome::new(passed, format!("{} stacks (50 random, 10 tunneling)", stacks.len()))
        .note(format!("maxwell vs debroglie  max |dR|,|dT| = {mx_db:.3e}  [{}]", ok(mx_db, 1e-6)))
        .note(format!("maxwell vs numerov    max |dR|,|dT| = {mx_nu:.3e}  [{}]", ok(mx_nu, 1e-6)))
        .note(format!("debroglie vs numerov  max |dR|,|dT| = {db_nu:.3e}  [{}]", ok(db_nu, 1e-6)))
        .note(format!("R + T - 1             max           = {unitarity:.3e}  [{}]", ok(unitarity, 1e-8)))
        .note("in-layer phase is n(U)k0L in the Maxwell picture and k_v(U)L otherwise; stacks disagree by construction")
}

fn c4_step() -> Outcome {
    let m = reference_mode();
    let s = LayerStack::step(0.75 * m.vacuum_energy());
    let a = transfer_matrix(&s, &m, Convention::Maxwell).unwrap().reflectance;
    let b = transfer_matrix(&s, &m, Convention::DeBroglie).unwrap().reflectance;
    let c = numerov_oracle(&s, &m).unwrap().reflectance;
    let worst = [a, b, c].iter().map(|r| (r - 1.0 / 9.0).abs()).fold(0.0, f64::max);
    Outcome::new(
        worst <= 1e-8,
        format!("R = {a:.12} / {b:.12} / {c:.12}, max |R - 1/9| = {worst:.1e} (tol 1e-8)"),
    )
}

fn drift(m: &MatterWaveMode, p_factor: f64, x0: f64, eps: f64) -> f64 {
    let p_res = m.mass() * m.omega0() / m.k();
    let drive = DriveField::from_mode(m, eps * p_res / m.mass()).unwrap();
    let state = ParticleState::new(x0, p_factor * p_res, 0.0).unwrap();
    let dt = TAU / m.omega0() / 200.0;
    integrate(&state, &drive, m.species(), dt, 200 * 100)
        .unwrap()
        .max_relative_momentum_drift()
}

fn c5_canonical_momentum() -> Outcome {
    let m = reference_mode();
    let eps = 1e-3;
    let bound = 10.0 * eps * eps;
    let resonant = drift(&m, 1.0, 0.0, eps);
    let control = drift(&m, 0.5, 0.0, eps);
    let quadrature = drift(&m, 1.0, FRAC_PI_2 / m.k(), eps);
    let passed = resonant <= bound && control >= 10.0 * bound;
    Outcome::new(
        passed,
        format!("resonant drift {resonant:.3e} vs bound {bound:.1e}; off-resonant {control:.3e} vs >= {:.1e}", 10.0 * bound),
    )
    .note(format!(
        "resonant start at phase pi/2 (fixed point of the slow phase drift): drift {quadrature:.3e}; not used for the verdict"
    ))
    .note("start x0 = 0: phase creeps at k*A0 per unit time, giving drift eps*(1 - cos(200*pi*eps)) ~ 1.9e-4")
}

fn c6_residual_convergence() -> Outcome {
    let m = reference_mode();
    let f = PlaneWaveField::from_potential(1e-4, &m).unwrap();
    let med = m.medium_constants();
    let mut g = Grid {
        x_span: f.wavelength(),
        t_span: 0.5 * f.period(),
        nx: 33,
        nt: 33,
    };
    let mut prev = wave_equation_residual(&f, &med, &g).unwrap();
    let mut ratios = Vec::new();
    for _ in 0..3 {
        g = g.refined();
        let next = wave_equation_residual(&f, &med, &g).unwrap();
        ratios.push(prev.wave_equation / next.wave_equation);
        ratios.push(prev.faraday / next.faraday);
        ratios.push(prev.ampere / next.ampere);
        prev = next;
    }
    let in_band = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    let identity = rel(med.phase_velocity(), m.v_a());
    let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let hi = ratios.iter().cloned().fold(0.0, f64::max);
    Outcome::new(
        in_band && identity <= 1e-12,
        format!("ratios in [{lo:.4}, {hi:.4}] over 3 refinements; 1/sqrt(upsilon*xi) vs v_a rel err {identity:.1e}"),
    )
}

fn c7_identity_chain() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 7);
    let (mut chain, mut round): (f64, f64) = (0.0, 0.0);
    for _ in 0..100 {
        let v = log_uniform(&mut rng, 1e-3, 1.0);
        let len = log_uniform(&mut rng, 1e-3, 1.0);
        let fin = log_uniform(&mut rng, 2.0, 1e4);
        let n: u64 = rng.gen_range(1..1_000_000);
        let fsr = PI * v / len;
        let m = MatterWaveMode::new(ParticleSpecies::reference(), n as f64 * fsr, ParticleMotion::Velocity(v)).unwrap();
        let res = Resonator::with_finesse(m, len, fin).unwrap();
        let kappa = res.accel_scale_factor(n).unwrap();
        let a1 = res.accel_resolution().unwrap();
        let a2 = res.linewidth() / kappa;
        let a3 = 2.0 * PI / fin * v.powi(3) / (res.mode().omega0() * len * len);
        chain = chain.max(rel(a1, a2)).max(rel(a1, a3)).max(rel(a2, a3));
        let a = rng.gen_range(-0.45..0.45) * fsr / kappa;
        let back = res.accel_from_shift(n, kappa * a).unwrap().acceleration;
        round = round.max(rel(back, a));
    }
    Outcome::new(
        chain <= 1e-12 && round <= 1e-14,
        format!("100 resonators: identity chain max rel {chain:.1e} (tol 1e-12); shift round trip {round:.1e} (tol 1e-14)"),
    )
}

fn c8_momentum_compensation() -> Outcome {
    let base = reference_mode();
    let mut worst_margin: f64 = 0.0;
    let mut passed = true;
    for n in [0.05, 0.1, 0.2, 0.3, 0.5] {
        let m = base.with_omega0(n * n * base.omega_v()).unwrap();
        let b = parametric_branch(&m).unwrap();
        let gap = rel(b.delta_p_exact, b.delta_p_approx);
        passed &= gap <= n.powi(4);
        worst_margin = worst_margin.max(gap / n.powi(4));
    }
    Outcome::new(passed, format!("max gap/n^4 = {worst_margin:.4} (must be <= 1)"))
}

fn c9_interaction_perturbation() -> Outcome {
    let m = reference_mode();
    let res = Resonator::with_finesse(m.clone(), 0.01, 100.0).unwrap();
    let base = CounterPropPair::new(m.clone(), 1e3, 1e-10, 5e-9).unwrap();
    let unit = mean_field_energy(&base) / m.vacuum_energy() / base.flux;
    let wn = res.resonance_frequency(2000).unwrap();
    let mut passed = true;
    let mut out = Outcome::new(true, "");
    for x in [1e-4, 1e-3, 1e-2] {
        let pair = CounterPropPair {
            flux: x / unit,
            ..base.clone()
        };
        let s = index_shift(&pair).unwrap();
        let dn_err = (s.exact - s.first_order).abs() / m.n();
        let pull = resonance_pull(&res, &pair).unwrap();
        let dn_rel = s.exact / m.n();
        let pull_err = (pull.exact - pull.first_order).abs() / wn;
        let ok = dn_err <= x * x && pull_err <= dn_rel * dn_rel;
        passed &= ok;
        out = out.note(format!(
            "x = {x:.0e}: |dn - dn1|/n = {dn_err:.3e} (<= {:.1e}); |pull - pull1|/omega_N = {pull_err:.3e} (<= {:.3e})",
            x * x,
            dn_rel * dn_rel
        ));
    }
    out.passed = passed;
    out.detail = "errors measured relative to the unperturbed index n and line frequency omega_N".into();
    out
}

fn c10_cli_determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_matterwave");
    let cfg = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/run.toml");
    let subs = ["mode", "fields", "classical", "scatter", "mzi", "resonator", "accel", "interact"];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let mut mismatches = Vec::new();
    let mut files = 0;
    for sub in subs {
        let mut outputs = Vec::new();
        for root in [a.path(), b.path()] {
            let dir = root.join(sub);
            let status = Command::new(bin)
                .args([sub, "--config", cfg.to_str().unwrap(), "--out-dir", dir.to_str().unwrap()])
                .status()
                .unwrap();
            let stdout = Command::new(bin).args([sub, "--config", cfg.to_str().unwrap()]).output().unwrap();
            outputs.push((status.code(), stdout.stdout, dir));
        }
        let (ref s1, ref o1, ref d1) = outputs[0];
        let (ref s2, ref o2, ref d2) = outputs[1];
        if s1 != &Some(0) || s2 != &Some(0) || o1 != o2 {
            mismatches.push(format!("{sub}: status/stdout"));
            continue;
        }
        let mut names: Vec<_> = fs::read_dir(d1).unwrap().map(|e| e.unwrap().file_name()).collect();
        names.sort();
        for name in names {
            files += 1;
            if fs::read(d1.join(&name)).unwrap() != fs::read(d2.join(&name)).ok().unwrap_or_default() {
                mismatches.push(format!("{sub}: {}", name.to_string_lossy()));
            }
        }
    }
    Outcome::new(
        mismatches.is_empty(),
        format!("{} subcommands, {files} output files compared; mismatches: {mismatches:?}", subs.len()),
    )
}

type Criterion = (u32, &'static str, Duration, fn() -> Outcome);

fn main() {
    // Flags passed by `cargo test` (e.g. --quiet, filters) are ignored.
    let criteria: [Criterion; 10] = [
        (1, "acceleration resolution figure", Duration::from_millis(1), c1_resolution_figure),
        (2, "fringe-ratio law", Duration::from_secs(1), c2_fringe_ratio),
        (3, "scattering oracle equivalence", Duration::from_secs(30), c3_scattering_equivalence),
        (4, "analytic step benchmark", Duration::from_secs(1), c4_step),
        (5, "canonical-momentum conservation", Duration::from_secs(5), c5_canonical_momentum),
        (6, "wave-equation residual convergence", Duration::from_secs(5), c6_residual_convergence),
        (7, "accelerometer identity chain", Duration::from_secs(1), c7_identity_chain),
        (8, "parametric momentum compensation", Duration::from_secs(1), c8_momentum_compensation),
        (9, "interaction perturbation consistency", Duration::from_secs(1), c9_interaction_perturbation),
        (10, "CLI determinism", Duration::from_secs(10), c10_cli_determinism),
    ];

    let mut unexpected = Vec::new();
    let mut failed = 0;
    for (id, name, limit, run) in criteria {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = elapsed <= limit;
        let passed = outcome.passed && in_time;
        let known = KNOWN_RED.contains(&id);
        let verdict = match (passed, known) {
            (true, false) => "PASS",
            (true, true) => "PASS (listed as known failure)",
            (false, true) => "FAIL (known, unattainable as stated)",
            (false, false) => "FAIL",
        };
        println!(
            "{verdict:<5} [{id:>2}] {name}: {}; {:.3} ms (limit {} ms{})",
            outcome.detail,
            elapsed.as_secs_f64() * 1e3,
            limit.as_millis(),
            if in_time { "" } else { ", EXCEEDED" }
        );
        for n in &outcome.notes {
            println!("          {n}");
        }
        if !passed {
            failed += 1;
        }
        if passed == known {
            unexpected.push(id);
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed ({} known)",
        10 - failed,
        KNOWN_RED.len()
    );
    if !unexpected.is_empty() {
        println!("unexpected outcome for criteria {unexpected:?}");
        std::process::exit(1);
    }
}
