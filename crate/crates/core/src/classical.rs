//! Classical particle in the travelling matter vector potential
//! A = A₀cos(kx − ω₀t), integrated through Hamilton's equations.

use crate::error::{require_finite, require_non_negative, require_positive, Error, Result};
use crate::mode::MatterWaveMode;
use crate::units::ParticleSpecies;

/// Largest allowed ω₀·dt.
pub const MAX_PHASE_STEP: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParticleState {
    /// Position, m.
    pub x: f64,
    /// Canonical momentum, kg·m/s.
    pub p: f64,
    /// Time, s.
    pub t: f64,
}

impl ParticleState {
    pub fn new(x: f64, p: f64, t: f64) -> Result<Self> {
        Ok(Self {
            x: require_finite("x", x)?,
            p: require_finite("p", p)?,
            t: require_finite("t", t)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveField {
    /// Vector-potential amplitude, m/s.
    pub a0: f64,
    pub k: f64,
    pub omega0: f64,
}

impl DriveField {
    pub fn new(a0: f64, k: f64, omega0: f64) -> Result<Self> {
        Ok(Self {
            a0: require_non_negative("A0", a0)?,
            k: require_positive("k", k)?,
            omega0: require_positive("omega0", omega0)?,
        })
    }

    /// Drive matching a mode's Maxwell wavenumber and frequency.
    pub fn from_mode(mode: &MatterWaveMode, a0: f64) -> Result<Self> {
        Self::new(a0, mode.k(), mode.omega0())
    }

    /// θ = kx − ω₀t
    pub fn phase(&self, x: f64, t: f64) -> f64 {
        self.k * x - self.omega0 * t
    }

    /// Wave velocity ω₀/k.
    pub fn phase_velocity(&self) -> f64 {
        self.omega0 / self.k
    }
}

/// Full Hamiltonian (1/2m)(p − mA₀cosθ)² + (mω₀/k)A₀cosθ.
pub fn hamiltonian(state: &ParticleState, drive: &DriveField, species: &ParticleSpecies) -> f64 {
    let m = species.mass();
    let c = drive.phase(state.x, state.t).cos();
    let kin = state.p - m * drive.a0 * c;
    kin * kin / (2.0 * m) + m * drive.phase_velocity() * drive.a0 * c
}

/// Kinetic momentum P = mẋ = p − mA₀cosθ.
pub fn kinetic_momentum(state: &ParticleState, drive: &DriveField, species: &ParticleSpecies) -> f64 {
    state.p - species.mass() * drive.a0 * drive.phase(state.x, state.t).cos()
}

/// (ẋ, ṗ) = (∂H/∂p, −∂H/∂x).
fn rates(x: f64, p: f64, t: f64, drive: &DriveField, m: f64) -> (f64, f64) {
    let (s, c) = drive.phase(x, t).sin_cos();
    let a = drive.a0;
    let xdot = p / m - a * c;
    let pdot = (m * drive.omega0 - p * drive.k) * a * s + drive.k * m * a * a * c * s;
    (xdot, pdot)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectorySample {
    pub t: f64,
    pub x: f64,
    pub p: f64,
    /// Kinetic momentum P.
    pub kinetic: f64,
    /// Hamiltonian H.
    pub energy: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub dt: f64,
    pub samples: Vec<TrajectorySample>,
}

impl Trajectory {
    pub fn last(&self) -> &TrajectorySample {
        self.samples.last().expect("trajectory has at least the initial sample")
    }

    /// max |p(t) − p(0)| / |p(0)|
    pub fn max_relative_momentum_drift(&self) -> f64 {
        let p0 = self.samples[0].p;
        self.samples
            .iter()
            .map(|s| (s.p - p0).abs())
            .fold(0.0, f64::max)
            / p0.abs()
    }

    /// max p − min p
    pub fn momentum_peak_to_peak(&self) -> f64 {
        let (lo, hi) = self
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.p), hi.max(s.p))
            });
        hi - lo
    }
}

/// Fixed-step RK4 integration of Hamilton's equations. Returns `steps + 1`
/// samples including the initial state.
pub fn integrate(
    state0: &ParticleState,
    drive: &DriveField,
    species: &ParticleSpecies,
    dt: f64,
    steps: usize,
) -> Result<Trajectory> {
    require_positive("dt", dt)?;
    if steps == 0 {
        return Err(Error::invalid("steps", "must be >= 1"));
    }
    if drive.omega0 * dt >= MAX_PHASE_STEP {
        return Err(Error::UnderResolved {
            what: "time step",
            detail: format!(
                "ω₀·dt = {:.3e} must be < {MAX_PHASE_STEP}",
                drive.omega0 * dt
            ),
        });
    }
    let m = species.mass();
    let sample = |x: f64, p: f64, t: f64| {
        let s = ParticleState { x, p, t };
        TrajectorySample {
            t,
            x,
            p,
            kinetic: kinetic_momentum(&s, drive, species),
            energy: hamiltonian(&s, drive, species),
        }
    };

    let mut samples = Vec::with_capacity(steps + 1);
    let (mut x, mut p) = (state0.x, state0.p);
    samples.push(sample(x, p, state0.t));
    for i in 0..steps {
        // t from the step index avoids accumulated rounding in t += dt
        let t = state0.t + i as f64 * dt;
        let h = dt;
        let (k1x, k1p) = rates(x, p, t, drive, m);
        let (k2x, k2p) = rates(x + 0.5 * h * k1x, p + 0.5 * h * k1p, t + 0.5 * h, drive, m);
        let (k3x, k3p) = rates(x + 0.5 * h * k2x, p + 0.5 * h * k2p, t + 0.5 * h, drive, m);
        let (k4x, k4p) = rates(x + h * k3x, p + h * k3p, t + h, drive, m);
        x += h / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        p += h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if !(x.is_finite() && p.is_finite()) {
            return Err(Error::UnderResolved {
                what: "trajectory",
                detail: format!("state became non-finite at step {}", i + 1),
            });
        }
        samples.push(sample(x, p, state0.t + (i + 1) as f64 * dt));
    }
    Ok(Trajectory { dt, samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, TAU};

    const M: f64 = 1e-25;
    const W0: f64 = TAU * 1000.0;

    fn species() -> ParticleSpecies {
        ParticleSpecies::new("t", M).unwrap()
    }

    fn drive(a0: f64) -> DriveField {
        // k chosen so ω₀/k = 0.01 m/s
        DriveField::new(a0, W0 / 0.01, W0).unwrap()
    }

    /// Closed-form solution. The Lagrangian force vanishes identically
    /// (mẍ = mA₀ sinθ (kv − ω₀) with v = ω₀/k), so ẋ is constant and
    /// p = mẋ + mA₀cosθ along the straight-line path.
    fn exact(s0: &ParticleState, d: &DriveField, t: f64) -> (f64, f64) {
        let xdot = s0.p / M - d.a0 * d.phase(s0.x, s0.t).cos();
        let x = s0.x + xdot * (t - s0.t);
        (x, M * xdot + M * d.a0 * d.phase(x, t).cos())
    }

    #[test]
    fn hamiltonian_examples() {
        let sp = species();
        let p = 1e-27;
        let free = ParticleState::new(0.3, p, 0.1).unwrap();
        let h0 = hamiltonian(&free, &drive(0.0), &sp);
        assert!((h0 - p * p / (2.0 * M)).abs() < 1e-15 * h0);

        let d = drive(1e-4);
        let node = ParticleState::new(FRAC_PI_2 / d.k, p, 0.0).unwrap();
        assert!((hamiltonian(&node, &d, &sp) - p * p / (2.0 * M)).abs() < 1e-12 * h0);

        // phase 0 on resonance: p²/2m − pA₀ + mA₀²/2 + (mω₀/k)A₀ = 5e-30 + 5e-34
        let s = ParticleState::new(0.0, M * W0 / d.k, 0.0).unwrap();
        let h = hamiltonian(&s, &d, &sp);
        assert!(((h - 5.0005e-30) / 5.0005e-30).abs() < 1e-12, "{h:e}");
    }

    #[test]
    fn kinetic_momentum_examples() {
        let sp = species();
        let p = 1e-27;
        let s = ParticleState::new(0.0, p, 0.0).unwrap();
        assert_eq!(kinetic_momentum(&s, &drive(0.0), &sp), p);
        let d = drive(1e-4);
        let node = ParticleState::new(FRAC_PI_2 / d.k, p, 0.0).unwrap();
        assert!((kinetic_momentum(&node, &d, &sp) - p).abs() < 1e-15 * p);
        assert!((kinetic_momentum(&s, &d, &sp) - (p - 1e-29)).abs() < 1e-15 * p);
    }

    #[test]
    fn rates_match_finite_difference_of_hamiltonian() {
        let sp = species();
        let d = drive(3e-3);
        for &(x, p, t) in &[(1.3e-6, 1.1e-27, 2e-4), (4.0e-6, 0.4e-27, 7e-4)] {
            let (xd, pd) = rates(x, p, t, &d, M);
            let hx = 1e-10;
            let hp = 1e-33;
            let h = |x, p| hamiltonian(&ParticleState { x, p, t }, &d, &sp);
            let dh_dp = (h(x, p + hp) - h(x, p - hp)) / (2.0 * hp);
            let dh_dx = (h(x + hx, p) - h(x - hx, p)) / (2.0 * hx);
            assert!(((xd - dh_dp) / xd).abs() < 1e-5, "{xd} {dh_dp}");
            assert!(((pd + dh_dx) / pd).abs() < 1e-5, "{pd} {dh_dx}");
        }
    }

    #[test]
    fn free_particle_is_exact() {
        let sp = species();
        let d = drive(0.0);
        let p = 1e-27;
        let s0 = ParticleState::new(1e-3, p, 0.0).unwrap();
        let dt = 0.05 / W0;
        let traj = integrate(&s0, &d, &sp, dt, 10_000).unwrap();
        for s in traj.samples.iter().step_by(997) {
            let x = 1e-3 + p / M * s.t;
            assert!(((s.x - x) / x).abs() < 1e-10);
            assert_eq!(s.p, p);
        }
    }

    #[test]
    fn matches_closed_form_on_and_off_resonance() {
        let sp = species();
        let d = drive(1e-5);
        let dt = 0.02 / W0;
        let steps = (100.0 * TAU / W0 / dt).round() as usize;
        for (x0, p0) in [(0.0, 1e-27), (2.3e-6, 1e-27), (0.0, 0.5e-27), (1e-6, 0.37e-27)] {
            let s0 = ParticleState::new(x0, p0, 0.0).unwrap();
            let traj = integrate(&s0, &d, &sp, dt, steps).unwrap();
            let mut worst: f64 = 0.0;
            for s in &traj.samples {
                let (xe, pe) = exact(&s0, &d, s.t);
                worst = worst.max(((s.p - pe) / p0).abs());
                assert!((s.x - xe).abs() < 1e-9 * d.k.recip());
            }
            assert!(worst < 1e-10, "worst {worst:e}");
        }
    }

    #[test]
    fn resonant_canonical_momentum_drift_is_slow() {
        // On resonance θ drifts at rate kA₀cosθ₀ and |p − p₀| ≤ mA₀|cosθ − cosθ₀|.
        let sp = species();
        let p0 = 1e-27;
        let eps = 1e-3;
        let d = drive(eps * p0 / M);
        let dt = 0.02 / W0;
        let steps = (100.0 * TAU / W0 / dt).round() as usize;

        // at a node of the cosine the particle rides the wave with fixed p
        let node = ParticleState::new(FRAC_PI_2 / d.k, p0, 0.0).unwrap();
        let at_node = integrate(&node, &d, &sp, dt, steps).unwrap();
        assert!(at_node.max_relative_momentum_drift() < 1e-12);

        let crest = ParticleState::new(0.0, p0, 0.0).unwrap();
        let on = integrate(&crest, &d, &sp, dt, steps).unwrap();
        let theta_end = -eps * 100.0 * TAU;
        let predicted = eps * (1.0 - theta_end.cos());
        assert!((on.max_relative_momentum_drift() - predicted).abs() < 1e-3 * predicted);

        // step-size independence
        let fine = integrate(&crest, &d, &sp, dt / 10.0, steps * 10).unwrap();
        let (a, b) = (on.max_relative_momentum_drift(), fine.max_relative_momentum_drift());
        assert!(((a - b) / b).abs() < 1e-6);
    }

    #[test]
    fn off_resonance_oscillates() {
        let sp = species();
        let p_res = 1e-27;
        let a0 = 1e-3 * p_res / M;
        let d = drive(a0);
        let s0 = ParticleState::new(0.0, 0.5 * p_res, 0.0).unwrap();
        let dt = 0.02 / W0;
        let steps = (100.0 * TAU / W0 / dt).round() as usize;
        let traj = integrate(&s0, &d, &sp, dt, steps).unwrap();
        let fine = integrate(&s0, &d, &sp, dt / 10.0, steps * 10).unwrap();
        let scale = 2.0 * M * a0;
        for t in [&traj, &fine] {
            let pp = t.momentum_peak_to_peak();
            assert!(pp > scale / 3.0 && pp < 3.0 * scale, "{pp:e} vs {scale:e}");
        }
    }

    #[test]
    fn kinetic_momentum_is_constant_and_energy_tracks_resonant_form() {
        let sp = species();
        let p0 = 1e-27;
        let eps = 1e-3;
        let a0 = eps * p0 / M;
        let d = drive(a0);
        let s0 = ParticleState::new(0.0, p0, 0.0).unwrap();
        let dt = 0.02 / W0;
        let steps = (100.0 * TAU / W0 / dt).round() as usize;
        let traj = integrate(&s0, &d, &sp, dt, steps).unwrap();
        let p_kin = traj.samples[0].kinetic;
        for s in &traj.samples {
            assert!(((s.kinetic - p_kin) / p0).abs() < 1e-10);
            // H − [p²/2m + ½mA₀²cos²θ] = −mA₀²cosθ(cosθ − cosθ₀), i.e. O(ε²)·p²/2m
            let c = d.phase(s.x, s.t).cos();
            let resonant = s.p * s.p / (2.0 * M) + 0.5 * M * a0 * a0 * c * c;
            let scale = s.p * s.p / (2.0 * M);
            assert!((s.energy - resonant).abs() <= 4.0 * eps * eps * scale);
        }
        // the Hamiltonian is not conserved (explicit time dependence) but
        // K = H − v·p is
        let v = d.phase_velocity();
        let k0 = traj.samples[0].energy - v * traj.samples[0].p;
        for s in &traj.samples {
            assert!(((s.energy - v * s.p) - k0).abs() < 1e-12 * (p0 * p0 / (2.0 * M)));
        }
    }

    #[test]
    fn rk4_converges_at_fourth_order() {
        // driven, off-resonant; reference is the closed form
        let sp = species();
        let d = drive(2e-3);
        let s0 = ParticleState::new(0.0, 0.5e-27, 0.0).unwrap();
        let t_end = 10.0 * TAU / W0;
        let err = |dt: f64| {
            let steps = (t_end / dt).round() as usize;
            let traj = integrate(&s0, &d, &sp, dt, steps).unwrap();
            let last = traj.last();
            let (xe, _) = exact(&s0, &d, last.t);
            (last.x - xe).abs()
        };
        let dt = 0.08 / W0;
        let (e1, e2) = (err(dt), err(dt / 2.0));
        let ratio = e1 / e2;
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn rejects_under_resolved_step() {
        let sp = species();
        let s0 = ParticleState::new(0.0, 1e-27, 0.0).unwrap();
        let d = drive(1e-5);
        assert!(matches!(
            integrate(&s0, &d, &sp, 0.1 / W0, 10),
            Err(Error::UnderResolved { .. })
        ));
        assert!(integrate(&s0, &d, &sp, 0.01 / W0, 0).is_err());
        assert!(integrate(&s0, &d, &sp, -1.0, 1).is_err());
        assert!(ParticleState::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(DriveField::new(1.0, 0.0, 1.0).is_err());
    }
}
