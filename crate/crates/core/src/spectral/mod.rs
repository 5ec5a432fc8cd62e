//! Reservoir and system parameters, the Ohmic-family spectral density, and
//! the time-dependent decay rates of the two dressed transitions.
//!
//! Units: the atomic frequency ω₀ is the frequency unit and 1/ω₀ the time
//! unit throughout the crate.

mod beta;
mod rates;

pub use beta::{beta_series, beta_series_with, cumulative_simpson, BetaSeries};
pub use rates::{
    decay_rate, decay_rate_closed, decay_rate_quadrature, decay_rate_quadrature_with,
    decay_rate_series, has_closed_form, RatePath, SolverOptions,
};

use num_complex::Complex64 as C64;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ohmicity {
    SubOhmic,
    Ohmic,
    SuperOhmic,
}

/// Ohmic-family reservoir J(ω) = η ω^s ω_c^{1-s} e^{-ω/ω_c}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReservoirSpec {
    s: f64,
    eta: f64,
    omega_c: f64,
}

impl ReservoirSpec {
    pub fn new(s: f64, eta: f64, omega_c: f64) -> Result<Self> {
        if !(s.is_finite() && s > 0.0) {
            return Err(Error::domain("s", format!("Ohmicity exponent must be > 0, got {s}")));
        }
        if !(eta.is_finite() && eta >= 0.0) {
            return Err(Error::domain("eta", format!("coupling must be >= 0, got {eta}")));
        }
        if !(omega_c.is_finite() && omega_c > 0.0) {
            return Err(Error::domain("omega_c", format!("cutoff must be > 0, got {omega_c}")));
        }
        Ok(ReservoirSpec { s, eta, omega_c })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn omega_c(&self) -> f64 {
        self.omega_c
    }

    pub fn with_s(self, s: f64) -> Result<Self> {
        Self::new(s, self.eta, self.omega_c)
    }

    pub fn with_eta(self, eta: f64) -> Result<Self> {
        Self::new(self.s, eta, self.omega_c)
    }

    pub fn with_omega_c(self, omega_c: f64) -> Result<Self> {
        Self::new(self.s, self.eta, omega_c)
    }

    pub fn ohmicity(&self) -> Ohmicity {
        match self.s.partial_cmp(&1.0) {
            Some(std::cmp::Ordering::Less) => Ohmicity::SubOhmic,
            Some(std::cmp::Ordering::Equal) => Ohmicity::Ohmic,
            _ => Ohmicity::SuperOhmic,
        }
    }

    /// Reservoir correlation time τ_B ≈ 1/ω_c.
    pub fn correlation_time(&self) -> f64 {
        1.0 / self.omega_c
    }

    /// Relaxation time τ_R ≈ 1/η (infinite for a decoupled reservoir).
    pub fn relaxation_time(&self) -> f64 {
        1.0 / self.eta
    }

    /// Upper end of the frequency integration domain. The neglected tail of
    /// ω^s e^{-ω/ω_c} beyond it is below 1e-18 of the full integral.
    pub fn omega_max(&self) -> f64 {
        self.omega_c * (10.0 * self.s).max(50.0)
    }

    /// Position of the maximum of J(ω).
    pub fn peak_frequency(&self) -> f64 {
        self.s * self.omega_c
    }

    pub(crate) fn density_unchecked(&self, omega: f64) -> f64 {
        if omega <= 0.0 || self.eta == 0.0 {
            return 0.0;
        }
        let x = omega / self.omega_c;
        self.eta * self.omega_c * (self.s * x.ln() - x).exp()
    }

    /// Bath correlation function C(τ) = ∫₀^∞ J(ω) e^{-iωτ} dω
    /// = η ω_c^{1-s} Γ(s+1) (1/ω_c + iτ)^{-(s+1)}.
    pub fn correlation(&self, tau: f64) -> C64 {
        let base = C64::new(1.0 / self.omega_c, tau);
        let prefactor = self.eta * self.omega_c.powf(1.0 - self.s) * libm::tgamma(self.s + 1.0);
        prefactor * base.powf(-(self.s + 1.0))
    }
}

/// J(ω) for ω ≥ 0.
pub fn spectral_density(omega: f64, r: &ReservoirSpec) -> Result<f64> {
    if omega.is_nan() || omega < 0.0 {
        return Err(Error::domain(
            "omega",
            format!("spectral density is defined for omega >= 0, got {omega}"),
        ));
    }
    Ok(r.density_unchecked(omega))
}

/// Two-level atom with transition frequency ω₀ coupled to the cavity mode
/// with strength Ω.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SystemSpec {
    omega0: f64,
    coupling: f64,
}

impl SystemSpec {
    pub fn new(omega0: f64, coupling: f64) -> Result<Self> {
        if !(omega0.is_finite() && omega0 > 0.0) {
            return Err(Error::domain("omega0", format!("must be > 0, got {omega0}")));
        }
        if !(coupling.is_finite() && coupling >= 0.0) {
            return Err(Error::domain("coupling", format!("must be >= 0, got {coupling}")));
        }
        Ok(SystemSpec { omega0, coupling })
    }

    /// ω₀ = 1.
    pub fn with_coupling(coupling: f64) -> Result<Self> {
        Self::new(1.0, coupling)
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    /// ω₁ = ω₀ − Ω, transition |φ₁,−⟩ ↔ |φ₀⟩. Negative when Ω > ω₀.
    pub fn omega1(&self) -> f64 {
        self.omega0 - self.coupling
    }

    /// ω₂ = ω₀ + Ω, transition |φ₁,+⟩ ↔ |φ₀⟩.
    pub fn omega2(&self) -> f64 {
        self.omega0 + self.coupling
    }

    /// E₀ = −ω₀/2.
    pub fn ground_energy(&self) -> f64 {
        -0.5 * self.omega0
    }

    /// E₁,₋ = ω₀/2 − Ω.
    pub fn lower_dressed_energy(&self) -> f64 {
        0.5 * self.omega0 - self.coupling
    }

    /// E₁,₊ = ω₀/2 + Ω.
    pub fn upper_dressed_energy(&self) -> f64 {
        0.5 * self.omega0 + self.coupling
    }
}

/// Uniform time grid on [0, t_max] with `n_steps` samples, both ends included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TimeGrid {
    t_max: f64,
    n_steps: usize,
}

impl TimeGrid {
    pub fn new(t_max: f64, n_steps: usize) -> Result<Self> {
        if !(t_max.is_finite() && t_max > 0.0) {
            return Err(Error::domain("t_max", format!("horizon must be > 0, got {t_max}")));
        }
        if n_steps < 2 {
            return Err(Error::domain("n_steps", format!("need at least 2 samples, got {n_steps}")));
        }
        Ok(TimeGrid { t_max, n_steps })
    }

    /// Grid with spacing as close as possible to `dt` (never coarser).
    pub fn with_spacing(t_max: f64, dt: f64) -> Result<Self> {
        if !(dt.is_finite() && dt > 0.0) {
            return Err(Error::domain("dt", format!("spacing must be > 0, got {dt}")));
        }
        let intervals = (t_max / dt - 1e-9).ceil().max(1.0) as usize;
        Self::new(t_max, intervals + 1)
    }

    pub fn t_max(&self) -> f64 {
        self.t_max
    }

    pub fn len(&self) -> usize {
        self.n_steps
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn dt(&self) -> f64 {
        self.t_max / (self.n_steps - 1) as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        if k + 1 == self.n_steps {
            self.t_max
        } else {
            k as f64 * self.dt()
        }
    }

    pub fn times(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n_steps).map(move |k| self.time(k))
    }

    /// Same spacing, shorter horizon: the first `n` samples.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        if n > self.n_steps {
            return Err(Error::domain("n_steps", "cannot extend a grid by truncation"));
        }
        Self::new(self.time(n - 1), n)
    }
}
