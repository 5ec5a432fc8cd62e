use rayon::prelude::*;
use serde::Serialize;

use super::non_markovianity;
use crate::dynamics::amplitude_with;
use crate::error::{Error, Result};
use crate::spectral::{ReservoirSpec, SolverOptions, SystemSpec, TimeGrid};

const SCAN_STEP: f64 = 0.02;
const BRACKET_WIDTH: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ScanPoint {
    pub coupling: f64,
    pub n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriticalScan {
    pub s: f64,
    pub eta: f64,
    pub omega_c_ratio: f64,
    pub critical_coupling: f64,
    /// Final bisection interval; the indicator N > ε_N differs at its ends.
    pub bracket: (f64, f64),
    /// N at the non-Markovian end of the bracket.
    pub n_at_probe: f64,
    /// true when N switches on as Ω increases through Ω_c.
    pub rising: bool,
    /// Approximate locations of every indicator change in the coarse scan.
    pub transitions: Vec<f64>,
    pub scan: Vec<ScanPoint>,
}

fn n_at(coupling: f64, omega0: f64, r: &ReservoirSpec, grid: &TimeGrid, opts: &SolverOptions) -> Result<f64> {
    let sys = SystemSpec::new(omega0, coupling)?;
    Ok(non_markovianity(&amplitude_with(&sys, r, grid, opts)?).value())
}

pub fn critical_coupling(
    r: &ReservoirSpec,
    omega0: f64,
    grid: &TimeGrid,
    range: (f64, f64),
    eps_n: f64,
) -> Result<CriticalScan> {
    critical_coupling_with(r, omega0, grid, range, eps_n, &SolverOptions::default())
}

/// Finds the largest Ω in `range` where N(Ω) > `eps_n` switches on or off.
pub fn critical_coupling_with(
    r: &ReservoirSpec,
    omega0: f64,
    grid: &TimeGrid,
    range: (f64, f64),
    eps_n: f64,
    opts: &SolverOptions,
) -> Result<CriticalScan> {
    let (lo, hi) = range;
    if !(lo.is_finite() && hi.is_finite() && lo >= 0.0 && lo < hi) {
        return Err(Error::domain("omega_range", format!("need 0 <= lo < hi, got [{lo}, {hi}]")));
    }
    if !(eps_n.is_finite() && eps_n >= 0.0) {
        return Err(Error::domain("eps_n", format!("must be finite and >= 0, got {eps_n}")));
    }
    let intervals = ((hi - lo) / SCAN_STEP).ceil().max(1.0) as usize;
    let couplings: Vec<f64> = (0..=intervals)
        .map(|i| if i == intervals { hi } else { lo + i as f64 * SCAN_STEP })
        .collect();
    let scan = couplings
        .par_iter()
        .map(|&c| Ok(ScanPoint { coupling: c, n: n_at(c, omega0, r, grid, opts)? }))
        .collect::<Result<Vec<_>>>()?;

    let on = |n: f64| n > eps_n;
    let transitions: Vec<usize> = (1..scan.len())
        .filter(|&i| on(scan[i - 1].n) != on(scan[i].n))
        .collect();
    let Some(&last) = transitions.last() else {
        return Err(Error::NotFound {
            lo,
            hi,
            scan: scan.iter().map(|p| (p.coupling, p.n)).collect(),
        });
    };

    let rising = on(scan[last].n);
    let (mut a, mut b) = (scan[last - 1].coupling, scan[last].coupling);
    let mut n_on = if rising { scan[last].n } else { scan[last - 1].n };
    while b - a > BRACKET_WIDTH {
        let mid = 0.5 * (a + b);
        let n = n_at(mid, omega0, r, grid, opts)?;
        if on(n) == rising {
            b = mid;
            if rising {
                n_on = n;
            }
        } else {
            a = mid;
            if !rising {
                n_on = n;
            }
        }
    }
    log::debug!("critical coupling bracket [{a}, {b}] after {} scan points", scan.len());

    Ok(CriticalScan {
        s: r.s(),
        eta: r.eta(),
        omega_c_ratio: r.omega_c() / omega0,
        critical_coupling: 0.5 * (a + b),
        bracket: (a, b),
        n_at_probe: n_on,
        rising,
        transitions: transitions
            .iter()
            .map(|&i| 0.5 * (scan[i - 1].coupling + scan[i].coupling))
            .collect(),
        scan,
    })
}
