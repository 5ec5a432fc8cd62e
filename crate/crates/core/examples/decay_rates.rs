//! Time-dependent decay rates γ(ω_j, t) from the frequency integral, the
//! closed forms, and the accumulated exponent β_j(t).

use dissipative_jc::spectral::{beta_series, decay_rate_closed, decay_rate_quadrature};
use dissipative_jc::{ReservoirSpec, SystemSpec, TimeGrid};

fn main() -> dissipative_jc::Result<()> {
    let r = ReservoirSpec::new(1.0, 0.1, 2.0)?;
    let sys = SystemSpec::with_coupling(3.0)?;
    println!("ω₁ = {}, ω₂ = {}", sys.omega1(), sys.omega2());

    println!("{:>6} {:>12} {:>12} {:>12}", "t", "γ(ω₁,t)", "γ(ω₂,t)", "closed ω=0");
    for t in [0.0, 0.25, 0.5, 1.0, 2.0, 5.0] {
        println!(
            "{t:>6} {:>12.6} {:>12.6} {:>12.6}",
            decay_rate_quadrature(sys.omega1(), t, &r)?,
            decay_rate_quadrature(sys.omega2(), t, &r)?,
            decay_rate_closed(0.0, t, &r)?,
        );
    }

    // Away from ω = 0 the closed forms leave out the pole contribution.
    let (w, t) = (1.0, 2.0);
    println!(
        "ω = {w}, t = {t}: quadrature {:.6}, closed {:.6}",
        decay_rate_quadrature(w, t, &r)?,
        decay_rate_closed(w, t, &r)?
    );

    let grid = TimeGrid::new(5.0, 5001)?;
    let beta = beta_series(sys.omega1(), &grid, &r)?;
    println!(
        "β₁(5) = {:.8} (grid refinement change {:.1e})",
        beta.values.last().unwrap(),
        beta.refinement_change
    );
    Ok(())
}
