//! Quantum speed limit ratio τ_QSL/τ and its relation to N.

use dissipative_jc::{amplitude, measure_report, ReservoirSpec, SystemSpec, TimeGrid};

fn main() -> dissipative_jc::Result<()> {
    let grid = TimeGrid::new(1.0, 1001)?;
    println!("{:>4} {:>6} {:>10} {:>10} {:>10}", "s", "Ω", "N", "τ_QSL/τ", "|p(τ)|²");
    for s in [0.5, 1.0, 3.0] {
        let r = ReservoirSpec::new(s, 0.6, 2.0)?;
        for coupling in [0.1, 1.0, 2.0, 3.0] {
            let m = measure_report(&amplitude(&SystemSpec::with_coupling(coupling)?, &r, &grid)?)?;
            println!(
                "{s:>4} {coupling:>6} {:>10.5} {:>10.5} {:>10.5}",
                m.n_markov, m.qsl_ratio, m.pop_tau
            );
        }
    }
    Ok(())
}
