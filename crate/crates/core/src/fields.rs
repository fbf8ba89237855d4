//! Plane-wave matter fields A, F, G and a finite-difference check of the
//! wave equation they satisfy.
//!
//! Phase convention: θ = kx − ω₀t, with A = A₀cosθ, F = F₀sinθ and
//! G = G₀sinθ, where F₀ = ω₀A₀ and G₀ = kA₀. The F–G pair obeys the scalar
//! (transmission-line) form of the matter-Maxwell equations
//!
//! ```text
//! ∂F/∂x = −∂G/∂t        ∂G/∂x = −υξ ∂F/∂t
//! ```

use crate::error::{require_non_negative, require_positive, Error, Result};
use crate::mode::{MatterWaveMode, MediumConstants};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlaneWaveField {
    /// Vector-potential amplitude, m/s.
    pub a0: f64,
    /// Force-field amplitude, m/s².
    pub f0: f64,
    /// G-field amplitude, 1/s.
    pub g0: f64,
    pub k: f64,
    pub omega0: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldSample {
    pub a: f64,
    pub f: f64,
    pub g: f64,
}

impl PlaneWaveField {
    pub fn from_potential(a0: f64, mode: &MatterWaveMode) -> Result<Self> {
        require_non_negative("A0", a0)?;
        Ok(Self {
            a0,
            f0: mode.omega0() * a0,
            g0: mode.k() * a0,
            k: mode.k(),
            omega0: mode.omega0(),
        })
    }

    pub fn phase(&self, x: f64, t: f64) -> f64 {
        self.k * x - self.omega0 * t
    }

    pub fn evaluate(&self, x: f64, t: f64) -> FieldSample {
        let (s, c) = self.phase(x, t).sin_cos();
        FieldSample {
            a: self.a0 * c,
            f: self.f0 * s,
            g: self.g0 * s,
        }
    }

    pub fn wavelength(&self) -> f64 {
        std::f64::consts::TAU / self.k
    }

    pub fn period(&self) -> f64 {
        std::f64::consts::TAU / self.omega0
    }
}

/// Rectangular space-time sampling grid starting at (0, 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub x_span: f64,
    pub t_span: f64,
    pub nx: usize,
    pub nt: usize,
}

impl Grid {
    fn validate(&self) -> Result<()> {
        require_positive("x_span", self.x_span)?;
        require_positive("t_span", self.t_span)?;
        if self.nx < 4 || self.nt < 4 {
            return Err(Error::UnderResolved {
                what: "field grid",
                detail: format!("need nx, nt >= 4, got {} x {}", self.nx, self.nt),
            });
        }
        Ok(())
    }

    pub fn dx(&self) -> f64 {
        self.x_span / (self.nx - 1) as f64
    }

    pub fn dt(&self) -> f64 {
        self.t_span / (self.nt - 1) as f64
    }

    /// Same spans with both steps halved.
    pub fn refined(&self) -> Grid {
        Grid {
            nx: 2 * self.nx - 1,
            nt: 2 * self.nt - 1,
            ..*self
        }
    }
}

/// Normalized maximum residuals over the grid interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WaveResidual {
    /// max |∂²F/∂t² − (1/υξ)∂²F/∂x²| / (ω₀²F₀)
    pub wave_equation: f64,
    /// max |∂F/∂x + ∂G/∂t| / (kF₀)
    pub faraday: f64,
    /// max |∂G/∂x + υξ∂F/∂t| / (kG₀)
    pub ampere: f64,
}

/// Samples the field on `grid` and measures how well centered finite
/// differences satisfy the wave equation and the first-order pair in the
/// given medium. All residuals are zero for a null field.
pub fn wave_equation_residual(
    field: &PlaneWaveField,
    medium: &MediumConstants,
    grid: &Grid,
) -> Result<WaveResidual> {
    grid.validate()?;
    let (dx, dt) = (grid.dx(), grid.dt());
    let (nx, nt) = (grid.nx, grid.nt);
    let uxi = medium.upsilon * medium.xi;

    let mut f = vec![0.0; nx * nt];
    let mut g = vec![0.0; nx * nt];
    for j in 0..nt {
        let t = j as f64 * dt;
        for i in 0..nx {
            let s = field.evaluate(i as f64 * dx, t);
            f[j * nx + i] = s.f;
            g[j * nx + i] = s.g;
        }
    }
    let at = |v: &[f64], i: usize, j: usize| v[j * nx + i];

    let mut out = WaveResidual {
        wave_equation: 0.0,
        faraday: 0.0,
        ampere: 0.0,
    };
    if field.a0 == 0.0 {
        return Ok(out);
    }
    let wave_norm = field.omega0 * field.omega0 * field.f0;
    let faraday_norm = field.k * field.f0;
    let ampere_norm = field.k * field.g0;

    for j in 1..nt - 1 {
        for i in 1..nx - 1 {
            let f_c = at(&f, i, j);
            let f_tt = (at(&f, i, j + 1) - 2.0 * f_c + at(&f, i, j - 1)) / (dt * dt);
            let f_xx = (at(&f, i + 1, j) - 2.0 * f_c + at(&f, i - 1, j)) / (dx * dx);
            let f_x = (at(&f, i + 1, j) - at(&f, i - 1, j)) / (2.0 * dx);
            let f_t = (at(&f, i, j + 1) - at(&f, i, j - 1)) / (2.0 * dt);
            let g_x = (at(&g, i + 1, j) - at(&g, i - 1, j)) / (2.0 * dx);
            let g_t = (at(&g, i, j + 1) - at(&g, i, j - 1)) / (2.0 * dt);

            out.wave_equation = out.wave_equation.max((f_tt - f_xx / uxi).abs() / wave_norm);
            out.faraday = out.faraday.max((f_x + g_t).abs() / faraday_norm);
            out.ampere = out.ampere.max((g_x + uxi * f_t).abs() / ampere_norm);
        }
    }
    Ok(out)
}
