//! Trace distance, its rate σ, BLP non-Markovianity and the quantum speed
//! limit ratio for the optimal pair {|e⟩⟨e|, |g⟩⟨g|}.
//!
//! Both N and τ_QSL/τ need integrals of σ = d|p|²/dt. Between samples σ is
//! taken to be the derivative of the cubic Hermite interpolant of |p|² (values
//! |p|², slopes σ), so ∫σ over a step is exactly the change in |p|² and the
//! positive part can be integrated exactly between the roots of a quadratic.

mod critical;

pub use critical::{critical_coupling, critical_coupling_with, CriticalScan, ScanPoint};

use serde::Serialize;

use crate::dynamics::{rates_at, AmplitudeTrajectory};
use crate::error::{Error, Result};
use crate::spectral::TimeGrid;
use crate::state::{trace_norm, Density2};

/// D(t) for the optimal pair: equal to |p(t)|².
pub fn trace_distance_optimal(traj: &AmplitudeTrajectory) -> Vec<f64> {
    traj.pop.clone()
}

/// ½‖ρ_a − ρ_b‖₁ after checking both inputs are density matrices.
pub fn trace_distance_general(rho_a: &Density2, rho_b: &Density2) -> Result<f64> {
    const TOL: f64 = 1e-10;
    rho_a.validate(TOL)?;
    rho_b.validate(TOL)?;
    Ok(0.5 * trace_norm(&rho_a.sub(rho_b)))
}

#[derive(Clone, Debug)]
pub struct SigmaSeries {
    pub grid: TimeGrid,
    pub sigma: Vec<f64>,
    /// Sign changes of σ, linearly interpolated between samples.
    pub crossings: Vec<f64>,
}

pub fn sigma_series(traj: &AmplitudeTrajectory) -> SigmaSeries {
    let sigma: Vec<f64> = (0..traj.len()).map(|k| traj.sigma(k)).collect();
    let mut crossings = Vec::new();
    for k in 1..sigma.len() {
        let (a, b) = (sigma[k - 1], sigma[k]);
        if (a < 0.0 && b > 0.0) || (a > 0.0 && b < 0.0) {
            let (ta, tb) = (traj.grid.time(k - 1), traj.grid.time(k));
            crossings.push(ta + (tb - ta) * a / (a - b));
        }
    }
    SigmaSeries {
        grid: traj.grid,
        sigma,
        crossings,
    }
}

/// max |Γ + σ/|p|²| over samples where |p| exceeds `floor`.
pub fn gamma_sigma_consistency(traj: &AmplitudeTrajectory, floor: f64) -> f64 {
    (0..traj.len())
        .filter_map(|k| {
            let (_, gamma) = rates_at(traj, k, floor).ok()?;
            Some((gamma + traj.sigma(k) / traj.pop[k]).abs())
        })
        .fold(0.0, f64::max)
}

/// Signed changes of the Hermite interpolant over each monotone piece of one
/// step, in time order.
fn hermite_pieces(h: f64, y0: f64, y1: f64, m0: f64, m1: f64, out: &mut Vec<f64>) {
    out.clear();
    let value = |u: f64| {
        let u2 = u * u;
        let u3 = u2 * u;
        (2.0 * u3 - 3.0 * u2 + 1.0) * y0
            + (u3 - 2.0 * u2 + u) * h * m0
            + (-2.0 * u3 + 3.0 * u2) * y1
            + (u3 - u2) * h * m1
    };
    // H′(u)·h = a u² + b u + c
    let d = y1 - y0;
    let a = 3.0 * h * (m0 + m1) - 6.0 * d;
    let b = 6.0 * d - h * (4.0 * m0 + 2.0 * m1);
    let c = h * m0;
    let mut roots = [0.0; 2];
    let mut n = 0;
    let mut push = |u: f64| {
        if u > 0.0 && u < 1.0 {
            roots[n] = u;
            n += 1;
        }
    };
    let scale = a.abs().max(b.abs()).max(c.abs());
    if scale == 0.0 {
        // flat step
    } else if a.abs() <= 1e-14 * scale {
        if b != 0.0 {
            push(-c / b);
        }
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc > 0.0 {
            let q = -0.5 * (b + b.signum() * disc.sqrt());
            let (r1, r2) = (q / a, if q != 0.0 { c / q } else { 0.0 });
            push(r1.min(r2));
            push(r1.max(r2));
        }
    }
    let mut prev = y0;
    for &u in &roots[..n] {
        let v = value(u);
        out.push(v - prev);
        prev = v;
    }
    out.push(y1 - prev);
}

/// Running sums over the Hermite pieces of |p|² with slopes `slope`.
struct Accumulated {
    /// ∫₀^{t_k} σ⁺ dt
    positive: Vec<f64>,
    /// ∫₀^τ |σ| dt
    total_variation: f64,
}

fn accumulate(grid: &TimeGrid, pop: &[f64], slope: &[f64]) -> Accumulated {
    let h = grid.dt();
    let mut positive = Vec::with_capacity(pop.len());
    let mut running = 0.0;
    let mut tv = 0.0;
    let mut pieces = Vec::with_capacity(3);
    if !pop.is_empty() {
        positive.push(0.0);
    }
    for k in 1..pop.len() {
        hermite_pieces(h, pop[k - 1], pop[k], slope[k - 1], slope[k], &mut pieces);
        for &delta in &pieces {
            if delta > 0.0 {
                running += delta;
            }
            tv += delta.abs();
        }
        positive.push(running);
    }
    Accumulated {
        positive,
        total_variation: tv,
    }
}

/// σ rebuilt from the decoherence rate, σ = −|p|²Γ, falling back to the
/// direct form where Γ is masked.
fn sigma_from_gamma(traj: &AmplitudeTrajectory, floor: f64) -> Vec<f64> {
    (0..traj.len())
        .map(|k| match rates_at(traj, k, floor) {
            Ok((_, gamma)) => -traj.pop[k] * gamma,
            Err(_) => traj.sigma(k),
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NonMarkovianity {
    /// −∫_{Γ<0} |p|²Γ dt
    pub backflow: f64,
    /// ½[∫|∂_t|p|²| dt + |p(τ)|² − 1]
    pub variation: f64,
    pub residual: f64,
}

impl NonMarkovianity {
    pub fn value(&self) -> f64 {
        self.variation
    }
}

pub fn non_markovianity(traj: &AmplitudeTrajectory) -> NonMarkovianity {
    non_markovianity_with_floor(traj, crate::spectral::SolverOptions::default().amplitude_floor)
}

pub fn non_markovianity_with_floor(traj: &AmplitudeTrajectory, floor: f64) -> NonMarkovianity {
    let backflow = accumulate(&traj.grid, &traj.pop, &sigma_from_gamma(traj, floor))
        .positive
        .last()
        .copied()
        .unwrap_or(0.0);
    let sigma: Vec<f64> = (0..traj.len()).map(|k| traj.sigma(k)).collect();
    let acc = accumulate(&traj.grid, &traj.pop, &sigma);
    let end = traj.pop.last().copied().unwrap_or(1.0);
    let variation = (0.5 * (acc.total_variation + end - 1.0)).max(0.0);
    NonMarkovianity {
        backflow,
        variation,
        residual: (backflow - variation).abs(),
    }
}

/// N(t_k) = ∫₀^{t_k} σ⁺ dt for every sample.
pub fn cumulative_non_markovianity(traj: &AmplitudeTrajectory) -> Vec<f64> {
    let sigma: Vec<f64> = (0..traj.len()).map(|k| traj.sigma(k)).collect();
    accumulate(&traj.grid, &traj.pop, &sigma).positive
}

const NO_EVOLUTION: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QslRatio {
    /// (1 − |p(τ)|²) / ∫₀^τ |∂_t|p|²| dt
    pub ratio: f64,
    /// (1 − |p(τ)|²) / (1 − |p(τ)|² + 2N)
    pub from_n: f64,
    pub residual: f64,
}

pub fn qslt_ratio(traj: &AmplitudeTrajectory) -> Result<QslRatio> {
    let sigma: Vec<f64> = (0..traj.len()).map(|k| traj.sigma(k)).collect();
    let acc = accumulate(&traj.grid, &traj.pop, &sigma);
    let end = traj.pop.last().copied().unwrap_or(1.0);
    let drop = 1.0 - end;
    // Anything below this is round-off in |p|² rather than evolution.
    if acc.total_variation <= NO_EVOLUTION {
        return Err(Error::UndefinedRatio);
    }
    let n = non_markovianity(traj).variation;
    let backflow = acc.positive.last().copied().unwrap_or(0.0);
    // Without a backflow piece the variation is exactly the net drop.
    let ratio = if backflow == 0.0 {
        1.0
    } else {
        (drop / acc.total_variation).clamp(0.0, 1.0)
    };
    let denom = drop + 2.0 * n;
    let from_n = if n == 0.0 || denom <= 0.0 { 1.0 } else { drop / denom };
    Ok(QslRatio {
        ratio,
        from_n,
        residual: (ratio - from_n).abs(),
    })
}

/// |τ_QSL/τ (direct) − τ_QSL/τ (from N)|
pub fn qslt_identity_residual(traj: &AmplitudeTrajectory) -> Result<f64> {
    Ok(qslt_ratio(traj)?.residual)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MeasureReport {
    pub n_markov: f64,
    pub qsl_ratio: f64,
    pub pop_tau: f64,
    pub residual_n: f64,
    pub residual_qsl: f64,
    pub tau: f64,
}

pub fn measure_report(traj: &AmplitudeTrajectory) -> Result<MeasureReport> {
    let n = non_markovianity(traj);
    let q = qslt_ratio(traj)?;
    Ok(MeasureReport {
        n_markov: n.value(),
        qsl_ratio: q.ratio,
        pop_tau: traj.pop.last().copied().unwrap_or(1.0),
        residual_n: n.residual,
        residual_qsl: q.residual,
        tau: traj.grid.t_max(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::amplitude;
    use crate::spectral::{ReservoirSpec, SystemSpec};
    use num_complex::Complex64 as C64;
    use std::f64::consts::PI;

    fn traj(coupling: f64, eta: f64, t_max: f64, n: usize) -> AmplitudeTrajectory {
        let sys = SystemSpec::new(1.0, coupling).unwrap();
        let r = ReservoirSpec::new(1.0, eta, 2.0).unwrap();
        amplitude(&sys, &r, &TimeGrid::new(t_max, n).unwrap()).unwrap()
    }

    #[test]
    fn hermite_pieces_sum_to_the_step() {
        let mut out = Vec::new();
        hermite_pieces(0.1, 0.3, 0.35, -2.0, 2.5, &mut out);
        assert_eq!(out.len(), 2);
        assert!(out[0] < 0.0 && out[1] > 0.0);
        assert!((out.iter().sum::<f64>() - 0.05).abs() < 1e-16);
        hermite_pieces(0.1, 0.3, 0.2, -1.0, -1.0, &mut out);
        assert_eq!(out, vec![0.2 - 0.3]);
    }

    #[test]
    fn general_distance_examples() {
        let e = Density2::excited();
        let g = Density2::ground();
        assert_eq!(trace_distance_general(&e, &e).unwrap(), 0.0);
        assert!((trace_distance_general(&e, &g).unwrap() - 1.0).abs() < 1e-15);
        let bad = Density2::from_parts(0.7, C64::new(0.0, 0.0), 0.7);
        assert!(trace_distance_general(&bad, &g).is_err());
    }

    #[test]
    fn half_rabi_period_has_unit_backflow_share() {
        // cos²(Ωt) on [0, π/Ω]: falls 1 → 0, rises 0 → 1.
        let omega = 2.0;
        let t = traj(omega, 0.0, PI / omega, 2001);
        let n = non_markovianity(&t);
        assert!((n.backflow - 1.0).abs() < 1e-9, "{n:?}");
        assert!(n.residual < 1e-12);
        let q = qslt_ratio(&t).unwrap();
        assert!(q.ratio.abs() < 1e-9 && q.residual < 1e-12);
    }

    #[test]
    fn no_evolution_has_undefined_ratio() {
        let t = traj(0.0, 0.0, 2.0, 11);
        assert!(matches!(qslt_ratio(&t), Err(Error::UndefinedRatio)));
        assert!(non_markovianity(&t).variation < 1e-15);
    }

    #[test]
    fn sigma_crossing_of_free_rabi() {
        let t = traj(1.0, 0.0, 3.0, 301);
        let s = sigma_series(&t);
        assert_eq!(s.sigma[0], 0.0);
        assert_eq!(s.crossings.len(), 1);
        assert!((s.crossings[0] - PI / 2.0).abs() < 1e-4);
        assert!(gamma_sigma_consistency(&t, 1e-8) < 1e-10);
    }

    #[test]
    fn cumulative_is_monotone_and_ends_at_n() {
        let t = traj(3.0, 0.1, 1.0, 1001);
        let c = cumulative_non_markovianity(&t);
        assert!(c.windows(2).all(|w| w[1] >= w[0]));
        let n = non_markovianity(&t);
        assert!((c.last().unwrap() - n.variation).abs() < 1e-12);
        assert!(n.residual < 1e-10);
    }
}
