//! Critical atom-cavity coupling Ω_c where N switches on, for several
//! reservoir couplings and Ohmicity exponents.

use dissipative_jc::{critical_coupling, ReservoirSpec, TimeGrid};

fn main() -> dissipative_jc::Result<()> {
    let grid = TimeGrid::new(1.0, 1001)?;
    for (s, eta) in [(1.0, 0.1), (1.0, 0.5), (1.0, 0.9), (0.5, 0.6), (3.0, 0.6)] {
        let r = ReservoirSpec::new(s, eta, 2.0)?;
        let scan = critical_coupling(&r, 1.0, &grid, (0.1, 4.0), 1e-4)?;
        let transitions: Vec<String> = scan.transitions.iter().map(|t| format!("{t:.3}")).collect();
        println!(
            "s = {s}, η = {eta}: Ω_c = {:.4} (bracket {:.4}..{:.4}), transitions [{}]",
            scan.critical_coupling,
            scan.bracket.0,
            scan.bracket.1,
            transitions.join(", ")
        );
    }
    Ok(())
}
