//! One line per acceptance criterion; exits non-zero if any fails.

use std::time::Instant;

use dissipative_jc::oracle::dressed_ode_oracle;
use dissipative_jc::{
    amplitude, atom_state, critical_coupling, decay_rate_closed, decay_rate_quadrature, non_markovianity,
    qslt_ratio, rate_series, InitialAtomState, ReservoirSpec, SystemSpec, TimeGrid,
};
use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;

const EPS_N: f64 = 1e-4;
const RANGE: (f64, f64) = (0.1, 4.0);

struct Report {
    failed: Vec<String>,
}

impl Report {
    fn check(&mut self, id: &str, passed: bool, detail: String) {
        println!("[{}] {id}: {detail}", if passed { "PASS" } else { "FAIL" });
        if !passed {
            self.failed.push(id.to_string());
        }
    }

    fn info(&self, detail: String) {
        println!("[INFO] {detail}");
    }
}

fn reservoir(s: f64, eta: f64, omega_c: f64) -> ReservoirSpec {
    ReservoirSpec::new(s, eta, omega_c).unwrap()
}

fn n_value(s: f64, eta: f64, omega_c: f64, coupling: f64, grid: &TimeGrid) -> f64 {
    let sys = SystemSpec::new(1.0, coupling).unwrap();
    non_markovianity(&amplitude(&sys, &reservoir(s, eta, omega_c), grid).unwrap()).value()
}

fn preset_grid() -> TimeGrid {
    TimeGrid::with_spacing(1.0, 1e-3).unwrap()
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

fn closed_vs_quadrature(rep: &mut Report) {
    let start = Instant::now();
    let mut worst = [0.0f64; 3];
    for (slot, s) in [0.5, 1.0, 3.0].into_iter().enumerate() {
        let r = reservoir(s, 0.1, 2.0);
        for w in linspace(-2.0, 4.0, 10) {
            for t in linspace(0.0, 25.0, 10) {
                let c = decay_rate_closed(w, t, &r).unwrap();
                let q = decay_rate_quadrature(w, t, &r).unwrap();
                let rel = if c == q { 0.0 } else { (c - q).abs() / q.abs().max(f64::MIN_POSITIVE) };
                worst[slot] = worst[slot].max(rel);
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    let max = worst.iter().cloned().fold(0.0, f64::max);
    rep.check(
        "1 closed form vs quadrature",
        max < 1e-6 && secs < 10.0,
        format!(
            "max rel dev s=1/2 {:.3e}, s=1 {:.3e}, s=3 {:.3e} (tol 1e-6), {secs:.2} s",
            worst[0], worst[1], worst[2]
        ),
    );
    let r = reservoir(1.0, 0.1, 2.0);
    let zero = linspace(0.0, 25.0, 10)
        .into_iter()
        .map(|t| {
            let q = decay_rate_quadrature(0.0, t, &r).unwrap();
            (decay_rate_closed(0.0, t, &r).unwrap() - q).abs() / q.abs().max(1e-300)
        })
        .fold(0.0, f64::max);
    rep.info(format!("closed vs quadrature at omega_j = 0 only: max rel dev {zero:.3e}"));
}

fn ode_oracle(rep: &mut Report) {
    let start = Instant::now();
    let sys = SystemSpec::new(1.0, 3.0).unwrap();
    let r = reservoir(1.0, 0.1, 2.0);
    let grid = TimeGrid::with_spacing(25.0, 0.01).unwrap();
    let traj = amplitude(&sys, &r, &grid).unwrap();
    let oracle = dressed_ode_oracle(&sys, &r, &grid, &InitialAtomState::excited()).unwrap();
    let dev = oracle
        .excited
        .iter()
        .zip(&traj.pop)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    rep.check(
        "2 ODE oracle",
        dev < 1e-5 && secs < 5.0,
        format!("max |rho_ee - |p|^2| = {dev:.3e} over t in [0, 25] (tol 1e-5), {secs:.2} s"),
    );
}

fn critical(rep: &mut Report) {
    let start = Instant::now();
    let grid = preset_grid();
    let found: Vec<(f64, f64, f64)> = [0.1, 0.5, 0.9]
        .into_iter()
        .map(|eta| {
            let scan = critical_coupling(&reservoir(1.0, eta, 2.0), 1.0, &grid, RANGE, EPS_N).unwrap();
            (eta, scan.critical_coupling, scan.bracket.1 - scan.bracket.0)
        })
        .collect();
    let secs = start.elapsed().as_secs_f64();
    let listing = found
        .iter()
        .map(|(eta, c, _)| format!("eta={eta}: {c:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    let base = found[0].1;
    rep.check(
        "3a critical coupling 1.55 +/- 0.05",
        (base - 1.55).abs() <= 0.05 && secs < 60.0,
        format!("Omega_c = {base:.4} (eta=0.1, tau=1), {secs:.2} s for three scans"),
    );
    let spread = found.iter().map(|f| (f.1 - base).abs()).fold(0.0, f64::max);
    let bracket = found.iter().map(|f| f.2).fold(0.0, f64::max);
    rep.check(
        "3b critical coupling independent of eta",
        spread <= 1e-3,
        format!("{listing}; spread {spread:.4} (tol 1e-3, bracket {bracket:.1e})"),
    );
}

fn n_value_at_horizons(rep: &mut Report) {
    let values: Vec<(f64, f64)> = [15.0, 20.0, 25.0, 30.0]
        .into_par_iter()
        .map(|tau| (tau, n_value(1.0, 0.1, 2.0, 3.0, &TimeGrid::with_spacing(tau, 1e-3).unwrap())))
        .collect();
    let hit = values.iter().any(|(_, n)| (0.90..=1.00).contains(n));
    let listing = values
        .iter()
        .map(|(tau, n)| format!("tau={tau}: {n:.4}"))
        .collect::<Vec<_>>()
        .join(", ");
    rep.check("4 N value in [0.90, 1.00]", hit, listing);
    rep.info(format!(
        "N(s=1, Omega=3, eta=0.1, omega_c=2) at the preset horizon tau=1: {:.6}",
        n_value(1.0, 0.1, 2.0, 3.0, &preset_grid())
    ));
}

fn identities(rep: &mut Report) {
    let sets = [
        (0.1, 2.0, 3.0),
        (0.5, 2.0, 3.0),
        (0.9, 1.0, 2.0),
        (0.6, 0.5, 0.1),
        (0.3, 2.0, 1.0),
        (0.9, 2.0, 1.6),
        (0.05, 4.0, 0.5),
    ];
    let cases: Vec<(f64, (f64, f64, f64))> = [0.5, 1.0, 3.0]
        .into_iter()
        .flat_map(|s| sets.into_iter().map(move |p| (s, p)))
        .collect();
    let grid = TimeGrid::with_spacing(25.0, 1e-3).unwrap();
    let residuals: Vec<(f64, f64)> = cases
        .par_iter()
        .map(|&(s, (eta, omega_c, coupling))| {
            let sys = SystemSpec::new(1.0, coupling).unwrap();
            let traj = amplitude(&sys, &reservoir(s, eta, omega_c), &grid).unwrap();
            (non_markovianity(&traj).residual, qslt_ratio(&traj).unwrap().residual)
        })
        .collect();
    let n_res = residuals.iter().map(|r| r.0).fold(0.0, f64::max);
    let q_res = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
    rep.check(
        "5 formula identities",
        n_res < 1e-8 && q_res < 1e-10,
        format!(
            "{} trajectories, max |N_a - N_b| = {n_res:.3e} (tol 1e-8), max ratio residual = {q_res:.3e} (tol 1e-10)",
            cases.len()
        ),
    );
}

fn markovian(rep: &mut Report) {
    let sys = SystemSpec::new(1.0, 1.0).unwrap();
    let traj = amplitude(&sys, &reservoir(1.0, 0.1, 2.0), &preset_grid()).unwrap();
    let n = non_markovianity(&traj).value();
    let ratio = qslt_ratio(&traj).unwrap().ratio;
    rep.check(
        "6 Markovian regime",
        n < 1e-6 && (ratio - 1.0).abs() <= 1e-6,
        format!("N = {n:.3e} (tol 1e-6), tau_QSL/tau = {ratio:.9} (tau=1)"),
    );
    rep.info(format!(
        "same parameters at tau=25: N = {:.4}",
        n_value(1.0, 0.1, 2.0, 1.0, &TimeGrid::with_spacing(25.0, 1e-3).unwrap())
    ));
}

fn trends(rep: &mut Report) {
    let grid = preset_grid();
    let by_eta: Vec<f64> = [0.1, 0.5, 0.9].iter().map(|&eta| n_value(1.0, eta, 2.0, 3.0, &grid)).collect();
    rep.check(
        "7a N decreases with eta",
        by_eta[0] > by_eta[1] && by_eta[1] > by_eta[2],
        format!("N(eta=0.1, 0.5, 0.9) = {:.4}, {:.4}, {:.4}", by_eta[0], by_eta[1], by_eta[2]),
    );
    let by_wc: Vec<f64> = [0.5, 1.0, 2.0].iter().map(|&wc| n_value(1.0, 0.9, wc, 3.0, &grid)).collect();
    rep.check(
        "7b N decreases with omega_c",
        by_wc[0] > by_wc[1] && by_wc[1] > by_wc[2],
        format!("N(omega_c=0.5, 1, 2) = {:.4}, {:.4}, {:.4}", by_wc[0], by_wc[1], by_wc[2]),
    );
    let couplings: Vec<f64> = (0..=58).map(|i| 0.1 + 0.05 * i as f64).collect();
    let mut details = Vec::new();
    let mut all = true;
    for wc in [1.0, 0.5] {
        let ns: Vec<f64> = couplings.par_iter().map(|&c| n_value(1.0, 0.9, wc, c, &grid)).collect();
        let low = ns[0];
        let high = *ns.last().unwrap();
        let window = ns.iter().any(|&n| n < EPS_N);
        all &= low > EPS_N && window && high > EPS_N;
        details.push(format!(
            "omega_c={wc}: N(0.1) = {low:.3e}, window {}, N(3) = {high:.4}",
            if window { "yes" } else { "no" }
        ));
    }
    rep.check("7c re-entrance", all, details.join("; "));
}

fn sub_ohmic(rep: &mut Report) {
    let grid = preset_grid();
    let sys = SystemSpec::new(1.0, 0.1).unwrap();
    let traj = amplitude(&sys, &reservoir(0.5, 0.6, 2.0), &grid).unwrap();
    let ratio = qslt_ratio(&traj).unwrap().ratio;
    let sub = critical_coupling(&reservoir(0.5, 0.6, 2.0), 1.0, &grid, RANGE, EPS_N).unwrap();
    let ohmic = critical_coupling(&reservoir(1.0, 0.6, 2.0), 1.0, &grid, RANGE, EPS_N).unwrap();
    rep.check(
        "8a sub-Ohmic speed-limit ratio",
        (0.2..=0.45).contains(&ratio),
        format!("tau_QSL/tau(s=1/2, Omega=0.1) = {ratio:.6} (want [0.2, 0.45])"),
    );
    rep.check(
        "8b sub-Ohmic critical coupling below Ohmic",
        sub.critical_coupling < ohmic.critical_coupling,
        format!(
            "Omega_c(s=1/2) = {:.4}, Omega_c(s=1) = {:.4} (eta=0.6)",
            sub.critical_coupling, ohmic.critical_coupling
        ),
    );
}

fn physicality(rep: &mut Report) {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let params: Vec<(f64, f64, f64, f64)> = (0..20)
        .map(|_| {
            let s = [0.5, 1.0, 3.0, 2.0][rng.gen_range(0..4)];
            (s, rng.gen_range(0.0..1.0), rng.gen_range(0.5..4.0), rng.gen_range(0.0..4.0))
        })
        .collect();
    let states: Vec<InitialAtomState> = (0..10_000)
        .map(|_| loop {
            let v: [f64; 3] = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
            if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                break InitialAtomState::from_bloch(v[0], v[1], v[2]).unwrap();
            }
        })
        .collect();
    let grid = TimeGrid::with_spacing(4.0, 1e-3).unwrap();
    let worst: Vec<(f64, f64, f64, f64)> = params
        .par_iter()
        .map(|&(s, eta, omega_c, coupling)| {
            let sys = SystemSpec::new(1.0, coupling).unwrap();
            let traj = amplitude(&sys, &reservoir(s, eta, omega_c), &grid).unwrap();
            let pop_excess = traj
                .pop
                .iter()
                .map(|&x| (x - 1.0).max(-x).max(0.0))
                .fold(0.0, f64::max);
            let (mut herm, mut trace, mut eig) = (0.0f64, 0.0f64, f64::INFINITY);
            for init in &states {
                for rho in atom_state(&traj, init).rho {
                    herm = herm.max(rho.hermiticity_defect());
                    let tr = rho.trace();
                    trace = trace.max((tr - C64::new(1.0, 0.0)).norm());
                    eig = eig.min(rho.min_eigenvalue());
                }
            }
            (herm, trace, eig, pop_excess)
        })
        .collect();
    let fold = |f: fn(&(f64, f64, f64, f64)) -> f64| worst.iter().map(f).fold(0.0, f64::max);
    let (herm, trace, pop) = (fold(|w| w.0), fold(|w| w.1), fold(|w| w.3));
    let eig = worst.iter().map(|w| w.2).fold(f64::INFINITY, f64::min);
    let secs = start.elapsed().as_secs_f64();
    rep.check(
        "9 physicality",
        herm == 0.0 && trace <= 1e-12 && eig > -1e-12 && pop == 0.0,
        format!(
            "1e4 states x 20 sets x {} samples: Hermitian defect {herm:.1e}, trace dev {trace:.1e}, \
             min eigenvalue {eig:.1e}, |p|^2 outside [0,1] by {pop:.1e}, {secs:.2} s",
            grid.len(),
        ),
    );
}

fn decoupled(rep: &mut Report) {
    let coupling = 1.3;
    let sys = SystemSpec::new(1.0, coupling).unwrap();
    let traj = amplitude(&sys, &reservoir(1.0, 0.0, 2.0), &TimeGrid::with_spacing(25.0, 1e-3).unwrap()).unwrap();
    let pop_dev = traj
        .grid
        .times()
        .zip(&traj.pop)
        .map(|(t, p)| (p - (coupling * t).cos().powi(2)).abs())
        .fold(0.0, f64::max);
    let rates = rate_series(&traj, 1e-8);
    let (mut gamma_dev, mut unmasked) = (0.0f64, 0);
    for (t, g) in traj.grid.times().zip(&rates.gamma) {
        if let Some(g) = g {
            let exact = 2.0 * coupling * (coupling * t).tan();
            gamma_dev = gamma_dev.max((g - exact).abs() / exact.abs().max(1.0));
            unmasked += 1;
        }
    }
    rep.check(
        "10 decoupled reservoir",
        pop_dev <= 1e-12 && gamma_dev <= 1e-8,
        format!(
            "max ||p|^2 - cos^2| = {pop_dev:.1e} (tol 1e-12), max rel Gamma dev = {gamma_dev:.1e} \
             over {unmasked} unmasked points (tol 1e-8)"
        ),
    );
}

fn main() {
    let mut rep = Report { failed: Vec::new() };
    closed_vs_quadrature(&mut rep);
    ode_oracle(&mut rep);
    critical(&mut rep);
    n_value_at_horizons(&mut rep);
    identities(&mut rep);
    markovian(&mut rep);
    trends(&mut rep);
    sub_ohmic(&mut rep);
    physicality(&mut rep);
    decoupled(&mut rep);
    if rep.failed.is_empty() {
        println!("acceptance: all criteria pass");
    } else {
        println!("acceptance: {} failing: {}", rep.failed.len(), rep.failed.join(", "));
        std::process::exit(1);
    }
}
