//! Excited-state amplitude, reduced atom state and the time-local rates
//! S(t), Γ(t) for an Ohmic reservoir and strong atom-cavity coupling.

use dissipative_jc::{amplitude, atom_state, rate_series, InitialAtomState, ReservoirSpec, SystemSpec, TimeGrid};

fn main() -> dissipative_jc::Result<()> {
    let sys = SystemSpec::with_coupling(3.0)?;
    let r = ReservoirSpec::new(1.0, 0.1, 2.0)?;
    let grid = TimeGrid::new(1.0, 1001)?;
    let traj = amplitude(&sys, &r, &grid)?;
    let rates = rate_series(&traj, 1e-8);
    let states = atom_state(&traj, &InitialAtomState::plus());

    println!("{:>5} {:>10} {:>10} {:>12} {:>10}", "t", "|p|²", "Γ", "S", "λ_min(ρ)");
    for k in (0..grid.len()).step_by(100) {
        let show = |x: Option<f64>| x.map_or("masked".to_string(), |v| format!("{v:.4}"));
        println!(
            "{:>5.2} {:>10.6} {:>10} {:>12} {:>10.2e}",
            grid.time(k),
            traj.pop[k],
            show(rates.gamma[k]),
            show(rates.lamb[k]),
            states.rho[k].min_eigenvalue(),
        );
    }
    Ok(())
}
