//! Cross-check of |p(t)|² against a direct integration of the dressed-state
//! master equation.

use dissipative_jc::oracle::dressed_ode_oracle;
use dissipative_jc::{amplitude, InitialAtomState, ReservoirSpec, SystemSpec, TimeGrid};

fn main() -> dissipative_jc::Result<()> {
    let sys = SystemSpec::with_coupling(3.0)?;
    let r = ReservoirSpec::new(1.0, 0.1, 2.0)?;
    let grid = TimeGrid::new(25.0, 2501)?;

    let traj = amplitude(&sys, &r, &grid)?;
    let oracle = dressed_ode_oracle(&sys, &r, &grid, &InitialAtomState::excited())?;
    let worst = oracle
        .excited
        .iter()
        .zip(&traj.pop)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("max |ρ_ee − |p|²| over [0, 25] = {worst:.3e}");
    println!(
        "integrator: {} accepted, {} rejected steps",
        oracle.stats.accepted, oracle.stats.rejected
    );
    Ok(())
}
