use super::rates::{decay_rate_closed, decay_rate_series, has_closed_form, RatePath, SolverOptions};
use super::{ReservoirSpec, TimeGrid};
use crate::error::{Error, Result};

/// β_j(t_k) = ∫₀^{t_k} γ(ω_j, t′) dt′ together with the rates it was built from.
#[derive(Clone, Debug)]
pub struct BetaSeries {
    pub rates: Vec<f64>,
    pub values: Vec<f64>,
    /// max_k |β on the grid − β on the 2×-coarser subgrid| over shared samples.
    pub refinement_change: f64,
}

/// Cumulative composite Simpson integral of uniformly spaced samples.
///
/// Even indices are plain Simpson sums; an odd index adds the half-panel
/// rule on the three nearest samples (exact for quadratics).
/// Two samples fall back to the trapezoid rule.
pub fn cumulative_simpson(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    let mut out = vec![0.0; n];
    if n < 2 {
        return out;
    }
    if n == 2 {
        out[1] = 0.5 * h * (f[0] + f[1]);
        return out;
    }
    for k in 1..n {
        out[k] = if k % 2 == 0 {
            out[k - 2] + h / 3.0 * (f[k - 2] + 4.0 * f[k - 1] + f[k])
        } else if k + 1 < n {
            out[k - 1] + h / 12.0 * (5.0 * f[k - 1] + 8.0 * f[k] - f[k + 1])
        } else {
            out[k - 1] + h / 12.0 * (-f[k - 2] + 8.0 * f[k - 1] + 5.0 * f[k])
        };
    }
    out
}

pub fn beta_series(omega_j: f64, grid: &TimeGrid, r: &ReservoirSpec) -> Result<BetaSeries> {
    beta_series_with(omega_j, grid, r, &SolverOptions::default())
}

pub fn beta_series_with(
    omega_j: f64,
    grid: &TimeGrid,
    r: &ReservoirSpec,
    opts: &SolverOptions,
) -> Result<BetaSeries> {
    let closed = match opts.rate_path {
        RatePath::Quadrature => false,
        RatePath::Closed => true,
        RatePath::Auto => has_closed_form(r.s()),
    };
    let rates = if closed {
        grid.times()
            .map(|t| decay_rate_closed(omega_j, t, r))
            .collect::<Result<Vec<_>>>()?
    } else {
        decay_rate_series(omega_j, grid, r)
    };
    let h = grid.dt();
    let values = cumulative_simpson(&rates, h);

    let refinement_change = if rates.len() >= 5 {
        let coarse_rates: Vec<f64> = rates.iter().step_by(2).copied().collect();
        let coarse = cumulative_simpson(&coarse_rates, 2.0 * h);
        coarse
            .iter()
            .zip(values.iter().step_by(2))
            .map(|(c, f)| (c - f).abs())
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    if refinement_change > opts.beta_tolerance {
        return Err(Error::Accuracy {
            what: "beta grid refinement",
            achieved: refinement_change,
            requested: opts.beta_tolerance,
        });
    }
    Ok(BetaSeries {
        rates,
        values,
        refinement_change,
    })
}
