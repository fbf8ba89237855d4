//! Mean-field coupling between counter-propagating waves and the
//! momentum bookkeeping of a single matteron exchange.

use std::f64::consts::PI;

use crate::error::{require_finite, require_non_negative, require_positive, Error, Result};
use crate::mode::MatterWaveMode;
use crate::resonator::Resonator;
use crate::scattering::generalized_index;
use crate::Convention;

/// |H_int|/ħω_v at or above this is outside the perturbative regime.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct CounterPropPair {
    pub mode: MatterWaveMode,
    /// Flux per wave, particles/s.
    pub flux: f64,
    /// Effective cross-section, m².
    pub area: f64,
    /// s-wave scattering length, m. Negative is attractive.
    pub scattering_length: f64,
}

impl CounterPropPair {
    pub fn new(mode: MatterWaveMode, flux: f64, area: f64, scattering_length: f64) -> Result<Self> {
        require_non_negative("flux", flux)?;
        require_positive("area", area)?;
        require_finite("scattering length", scattering_length)?;
        Ok(Self {
            mode,
            flux,
            area,
            scattering_length,
        })
    }
}

/// u = ħkI/𝒜, J/m³.
pub fn energy_density(pair: &CounterPropPair) -> f64 {
    pair.mode.hbar() * pair.mode.k() * pair.flux / pair.area
}

/// H_int = 8πa_s·u/k₀², J.
pub fn mean_field_energy(pair: &CounterPropPair) -> f64 {
    let k0 = pair.mode.k0();
    8.0 * PI * pair.scattering_length * energy_density(pair) / (k0 * k0)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IndexShift {
    /// H_int/ħω_v.
    pub relative_energy: f64,
    /// n(H_int) − n(0).
    pub exact: f64,
    /// n·H_int/(2ħω_v).
    pub first_order: f64,
    /// 4πn⁴(a_s/k₀)(I/𝒜). Carries units of 1/s; reported for comparison only.
    pub flux_form: f64,
}

pub fn index_shift(pair: &CounterPropPair) -> Result<IndexShift> {
    let m = &pair.mode;
    let h = mean_field_energy(pair);
    let x = h / m.vacuum_energy();
    if x.abs() >= PERTURBATIVE_LIMIT {
        return Err(Error::NonPerturbative(format!(
            "H_int/hbar*omega_v = {x:.3e} exceeds {PERTURBATIVE_LIMIT}"
        )));
    }
    // The index itself validates U; the difference is taken in a form that
    // keeps full relative precision for small x.
    generalized_index(m, h, Convention::Maxwell)?;
    let n = m.n();
    let exact = n * (-0.5 * (-x).ln_1p()).exp_m1();
    Ok(IndexShift {
        relative_energy: x,
        exact,
        first_order: 0.5 * n * x,
        flux_form: 4.0 * PI * n.powi(4) * (pair.scattering_length / m.k0()) * (pair.flux / pair.area),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResonancePull {
    pub n_index: u64,
    /// ω′ − ω_N from the resonance condition, rad/s.
    pub exact: f64,
    /// −ω_N·δn/n, rad/s.
    pub first_order: f64,
    /// The pulled line has moved past the midpoint to a neighbour.
    pub beyond_half_fsr: bool,
}

/// Shift of the locked comb line when the cavity index becomes n + δn.
/// Solves (ω/v_v)(1 + δn/n)L = πN for the same N by bisection.
pub fn resonance_pull(res: &Resonator, pair: &CounterPropPair) -> Result<ResonancePull> {
    if res.mode() != &pair.mode {
        return Err(Error::invalid("pair", "mode differs from the resonator's mode"));
    }
    let shift = index_shift(pair)?;
    let ratio = 1.0 + shift.exact / pair.mode.n();
    let n_index = res.locked_index()?;
    let omega_n = res.resonance_frequency(n_index)?;
    let target = PI * n_index as f64;
    let v = pair.mode.v_v();
    let len = res.length();
    let residual = |w: f64| (w / v) * ratio * len - target;

    // The line keeps its index N even when the pull exceeds half an FSR, so
    // the bracket is widened until it straddles the root.
    let half = 0.5 * res.fsr();
    let mut width = half;
    let (mut lo, mut hi) = (omega_n - width, omega_n + width);
    while residual(lo) > 0.0 || residual(hi) < 0.0 {
        width *= 2.0;
        if width >= omega_n {
            return Err(Error::invalid("pair", "index shift leaves no resonance for line N"));
        }
        (lo, hi) = (omega_n - width, omega_n + width);
    }
    while hi - lo > 0.0 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = if residual(hi).abs() < residual(lo).abs() { hi } else { lo };
    Ok(ResonancePull {
        n_index,
        exact: root - omega_n,
        first_order: -omega_n * shift.exact / pair.mode.n(),
        beyond_half_fsr: (root - omega_n).abs() > half,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParametricBranch {
    /// n/√(1+n²), the branch raised by ħω₀.
    pub n_plus: f64,
    /// n/√(1−n²), the branch lowered by ħω₀.
    pub n_minus: f64,
    /// 2(1/n₊ − 1/n₋)ħk₀.
    pub delta_p_exact: f64,
    /// 2ħk.
    pub delta_p_approx: f64,
    /// ħ(ω_v + ω₀).
    pub energy_plus: f64,
    /// ħ(ω_v − ω₀).
    pub energy_minus: f64,
}

pub fn parametric_branch(mode: &MatterWaveMode) -> Result<ParametricBranch> {
    let n = mode.n();
    if n >= 1.0 {
        return Err(Error::invalid("n", format!("{n} >= 1 leaves no real lower branch")));
    }
    let (sp, sm) = ((1.0 + n * n).sqrt(), (1.0 - n * n).sqrt());
    // 1/n₊ − 1/n₋ = (sp − sm)/n = 2n/(sp + sm)
    let factor = 2.0 * n / (sp + sm);
    let hbar = mode.hbar();
    Ok(ParametricBranch {
        n_plus: n / sp,
        n_minus: n / sm,
        delta_p_exact: 2.0 * factor * hbar * mode.k0(),
        delta_p_approx: 2.0 * hbar * mode.k(),
        energy_plus: hbar * (mode.omega_v() + mode.omega0()),
        energy_minus: hbar * (mode.omega_v() - mode.omega0()),
    })
}
