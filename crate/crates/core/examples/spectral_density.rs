//! The three Ohmic-family spectral densities and their bath correlation
//! functions.

use dissipative_jc::{spectral_density, ReservoirSpec};

fn main() -> dissipative_jc::Result<()> {
    for s in [0.5, 1.0, 3.0] {
        let r = ReservoirSpec::new(s, 0.6, 2.0)?;
        println!("s = {s} ({:?}), peak at ω = {}", r.ohmicity(), r.peak_frequency());
        for w in [0.5, 1.0, 2.0, 4.0, 8.0] {
            println!("  J({w:>3}) = {:.6}", spectral_density(w, &r)?);
        }
        for tau in [0.0, 0.5, 2.0] {
            let c = r.correlation(tau);
            println!("  C({tau}) = {:.6} {:+.6}i", c.re, c.im);
        }
    }
    Ok(())
}
