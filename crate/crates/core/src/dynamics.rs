//! Excited-state amplitude p(t), the reduced atom state, and the rates of
//! the equivalent time-local master equation.
//!
//! For a single excitation and a vacuum reservoir the atom evolves as
//!
//! ```text
//! ρ(t) = [ |p|² ρ₁₁(0)     p ρ₁₀(0)         ]
//!        [ p* ρ₀₁(0)       1 − |p|² ρ₁₁(0)  ]
//! p(t) = ½ Σ_j exp(−iω_j t − β_j(t)/4)
//! ```
//!
//! and the generator of that evolution has a Lamb shift S = −2 Im(ṗ/p) and
//! a decoherence rate Γ = −2 Re(ṗ/p).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::{beta_series_with, ReservoirSpec, SolverOptions, SystemSpec, TimeGrid};
use crate::state::Density2;

/// Atom state at t = 0: excited population ρ₁₁ and coherence ρ₁₀ = ⟨e|ρ|g⟩.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct InitialAtomState {
    rho11: f64,
    rho10: C64,
}

impl InitialAtomState {
    pub fn new(rho11: f64, rho10: C64) -> Result<Self> {
        if !(0.0..=1.0).contains(&rho11) {
            return Err(Error::domain("rho11", format!("population must lie in [0, 1], got {rho11}")));
        }
        if !(rho10.re.is_finite() && rho10.im.is_finite())
            || rho10.norm_sqr() > rho11 * (1.0 - rho11) + 1e-14
        {
            return Err(Error::domain(
                "rho10",
                format!("|rho10|^2 = {} exceeds rho11 (1 - rho11)", rho10.norm_sqr()),
            ));
        }
        Ok(InitialAtomState { rho11, rho10 })
    }

    pub fn excited() -> Self {
        InitialAtomState {
            rho11: 1.0,
            rho10: C64::new(0.0, 0.0),
        }
    }

    pub fn ground() -> Self {
        InitialAtomState {
            rho11: 0.0,
            rho10: C64::new(0.0, 0.0),
        }
    }

    /// (|e⟩ + |g⟩)/√2.
    pub fn plus() -> Self {
        InitialAtomState {
            rho11: 0.5,
            rho10: C64::new(0.5, 0.0),
        }
    }

    /// State with Bloch vector (x, y, z), |r| ≤ 1, z = ρ₁₁ − ρ₀₀.
    pub fn from_bloch(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::new(0.5 * (1.0 + z), C64::new(0.5 * x, -0.5 * y))
    }

    pub fn rho11(&self) -> f64 {
        self.rho11
    }

    pub fn rho10(&self) -> C64 {
        self.rho10
    }

    pub fn density(&self) -> Density2 {
        Density2::from_parts(self.rho11, self.rho10, 1.0 - self.rho11)
    }
}

/// p(t) on a grid, with the decay rates and exponents it was built from.
#[derive(Clone, Debug)]
pub struct AmplitudeTrajectory {
    pub grid: TimeGrid,
    pub omega1: f64,
    pub omega2: f64,
    pub p: Vec<C64>,
    pub beta1: Vec<f64>,
    pub beta2: Vec<f64>,
    pub gamma1: Vec<f64>,
    pub gamma2: Vec<f64>,
    /// |p(t_k)|²
    pub pop: Vec<f64>,
}

impl AmplitudeTrajectory {
    pub fn len(&self) -> usize {
        self.p.len()
    }

    pub fn is_empty(&self) -> bool {
        self.p.is_empty()
    }

    /// Analytic ṗ(t_k) using β̇_j = γ(ω_j, t).
    pub fn p_dot(&self, k: usize) -> C64 {
        let t = self.grid.time(k);
        let term = |w: f64, beta: f64, gamma: f64| {
            C64::new(-0.25 * gamma, -w) * C64::from_polar((-0.25 * beta).exp(), -w * t)
        };
        0.5 * (term(self.omega1, self.beta1[k], self.gamma1[k])
            + term(self.omega2, self.beta2[k], self.gamma2[k]))
    }

    /// σ(t_k) = d|p|²/dt = 2 Re(p* ṗ).
    pub fn sigma(&self, k: usize) -> f64 {
        2.0 * (self.p[k].conj() * self.p_dot(k)).re
    }

    /// First `n` samples as a trajectory over the shorter horizon.
    pub fn truncated(&self, n: usize) -> Result<Self> {
        let grid = self.grid.truncated(n)?;
        Ok(AmplitudeTrajectory {
            grid,
            omega1: self.omega1,
            omega2: self.omega2,
            p: self.p[..n].to_vec(),
            beta1: self.beta1[..n].to_vec(),
            beta2: self.beta2[..n].to_vec(),
            gamma1: self.gamma1[..n].to_vec(),
            gamma2: self.gamma2[..n].to_vec(),
            pop: self.pop[..n].to_vec(),
        })
    }
}

pub fn amplitude(sys: &SystemSpec, r: &ReservoirSpec, grid: &TimeGrid) -> Result<AmplitudeTrajectory> {
    amplitude_with(sys, r, grid, &SolverOptions::default())
}

pub fn amplitude_with(
    sys: &SystemSpec,
    r: &ReservoirSpec,
    grid: &TimeGrid,
    opts: &SolverOptions,
) -> Result<AmplitudeTrajectory> {
    let (omega1, omega2) = (sys.omega1(), sys.omega2());
    let b1 = beta_series_with(omega1, grid, r, opts)?;
    let b2 = if omega1 == omega2 {
        b1.clone()
    } else {
        beta_series_with(omega2, grid, r, opts)?
    };
    let p: Vec<C64> = grid
        .times()
        .enumerate()
        .map(|(k, t)| {
            if k == 0 {
                return C64::new(1.0, 0.0);
            }
            0.5 * (C64::from_polar((-0.25 * b1.values[k]).exp(), -omega1 * t)
                + C64::from_polar((-0.25 * b2.values[k]).exp(), -omega2 * t))
        })
        .collect();
    let pop = p.iter().map(|z| z.norm_sqr()).collect();
    Ok(AmplitudeTrajectory {
        grid: *grid,
        omega1,
        omega2,
        p,
        beta1: b1.values,
        beta2: b2.values,
        gamma1: b1.rates,
        gamma2: b2.rates,
        pop,
    })
}

#[derive(Clone, Debug)]
pub struct AtomStateSeries {
    pub grid: TimeGrid,
    pub rho: Vec<Density2>,
}

pub fn atom_state(traj: &AmplitudeTrajectory, init: &InitialAtomState) -> AtomStateSeries {
    let rho = traj
        .p
        .iter()
        .zip(&traj.pop)
        .map(|(&p, &pop)| {
            let excited = pop * init.rho11;
            Density2::from_parts(excited, p * init.rho10, 1.0 - excited)
        })
        .collect();
    AtomStateSeries { grid: traj.grid, rho }
}

/// S(t_k) and Γ(t_k); `None` where |p| is at or below the amplitude floor.
#[derive(Clone, Debug)]
pub struct RateSeries {
    pub grid: TimeGrid,
    pub lamb: Vec<Option<f64>>,
    pub gamma: Vec<Option<f64>>,
}

/// (S, Γ) at one sample, or an underflow error when |p| ≤ `floor`.
pub fn rates_at(traj: &AmplitudeTrajectory, k: usize, floor: f64) -> Result<(f64, f64)> {
    let p = traj.p[k];
    let magnitude = p.norm();
    if magnitude <= floor {
        return Err(Error::AmplitudeUnderflow {
            t: traj.grid.time(k),
            magnitude,
        });
    }
    let ratio = traj.p_dot(k) / p;
    Ok((-2.0 * ratio.im, -2.0 * ratio.re))
}

pub fn rate_series(traj: &AmplitudeTrajectory, floor: f64) -> RateSeries {
    let (lamb, gamma) = (0..traj.len())
        .map(|k| match rates_at(traj, k, floor) {
            Ok((s, g)) => (Some(s), Some(g)),
            Err(_) => (None, None),
        })
        .unzip();
    RateSeries {
        grid: traj.grid,
        lamb,
        gamma,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn free(coupling: f64, grid: TimeGrid) -> AmplitudeTrajectory {
        let sys = SystemSpec::new(1.0, coupling).unwrap();
        let r = ReservoirSpec::new(1.0, 0.0, 2.0).unwrap();
        amplitude(&sys, &r, &grid).unwrap()
    }

    #[test]
    fn initial_amplitude_is_one() {
        let sys = SystemSpec::new(1.0, 3.0).unwrap();
        let r = ReservoirSpec::new(1.0, 0.1, 2.0).unwrap();
        let traj = amplitude(&sys, &r, &TimeGrid::new(1.0, 101).unwrap()).unwrap();
        assert_eq!(traj.p[0], C64::new(1.0, 0.0));
        assert_eq!(traj.pop[0], 1.0);
    }

    #[test]
    fn decoupled_reservoir_gives_vacuum_rabi() {
        let traj = free(1.3, TimeGrid::new(10.0, 1001).unwrap());
        for (k, t) in traj.grid.times().enumerate() {
            assert!((traj.pop[k] - (1.3 * t).cos().powi(2)).abs() < 1e-12);
        }
    }

    #[test]
    fn phase_convention_without_reservoir() {
        let traj = free(0.4, TimeGrid::new(3.0, 301).unwrap());
        for (k, t) in traj.grid.times().enumerate() {
            if (0.4 * t).cos() > 0.0 {
                let expected = C64::from_polar(1.0, -t);
                let got = traj.p[k] / traj.p[k].norm();
                assert!((got - expected).norm() < 1e-12, "t={t}");
            }
        }
    }

    #[test]
    fn degenerate_frequencies() {
        let sys = SystemSpec::new(1.0, 0.0).unwrap();
        let r = ReservoirSpec::new(1.0, 0.2, 2.0).unwrap();
        let traj = amplitude(&sys, &r, &TimeGrid::new(2.0, 201).unwrap()).unwrap();
        assert_eq!(traj.beta1, traj.beta2);
        for (k, t) in traj.grid.times().enumerate() {
            let expected = C64::from_polar((-0.25 * traj.beta1[k]).exp(), -t);
            assert!((traj.p[k] - expected).norm() < 1e-14);
        }
    }

    #[test]
    fn free_rates_are_tangent() {
        let omega = 0.8;
        let traj = free(omega, TimeGrid::new(5.0, 501).unwrap());
        let rates = rate_series(&traj, 1e-8);
        for (k, t) in traj.grid.times().enumerate() {
            let expected = 2.0 * omega * (omega * t).tan();
            let g = rates.gamma[k].unwrap();
            assert!((g - expected).abs() <= 1e-9 * (1.0 + expected.abs()), "t={t}");
            assert!((rates.lamb[k].unwrap() - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn masked_samples_at_rabi_zero() {
        // |p| vanishes exactly at t = π/(2Ω) when Ω = π/2 and t = 1.
        let traj = free(PI / 2.0, TimeGrid::new(1.0, 11).unwrap());
        let rates = rate_series(&traj, 1e-8);
        assert!(rates.gamma[10].is_none());
        assert!(matches!(rates_at(&traj, 10, 1e-8), Err(Error::AmplitudeUnderflow { .. })));
    }

    #[test]
    fn atom_state_examples() {
        let traj = free(0.7, TimeGrid::new(4.0, 81).unwrap());
        let series = atom_state(&traj, &InitialAtomState::excited());
        for (rho, pop) in series.rho.iter().zip(&traj.pop) {
            assert_eq!(rho.m[0][0].re, *pop);
            assert_eq!(rho.m[0][1], C64::new(0.0, 0.0));
        }
        let init = InitialAtomState::plus();
        let series = atom_state(&traj, &init);
        assert_eq!(series.rho[0], init.density());
        assert!(series.rho.iter().all(|r| r.min_eigenvalue() >= -1e-15));
    }

    #[test]
    fn initial_state_validation() {
        assert!(InitialAtomState::new(1.2, C64::new(0.0, 0.0)).is_err());
        assert!(InitialAtomState::new(0.5, C64::new(0.6, 0.0)).is_err());
        assert!(InitialAtomState::from_bloch(0.0, 0.0, 1.0).is_ok());
        let s = InitialAtomState::from_bloch(0.6, 0.0, 0.8).unwrap();
        assert!((s.rho11() - 0.9).abs() < 1e-15);
    }
}
