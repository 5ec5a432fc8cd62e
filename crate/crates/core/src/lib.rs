//! Dynamics, non-Markovianity and quantum speed limit of a two-level atom in
//! a leaky single-mode cavity coupled to an Ohmic-family reservoir
//! J(ω) = η ω^s ω_c^{1−s} e^{−ω/ω_c}, restricted to the one-excitation sector.

pub mod dynamics;
pub mod error;
pub mod measures;
pub mod ode;
pub mod oracle;
pub mod quadrature;
pub mod run;
pub mod spectral;
pub mod state;

pub use dynamics::{
    amplitude, amplitude_with, atom_state, rate_series, rates_at, AmplitudeTrajectory,
    AtomStateSeries, InitialAtomState, RateSeries,
};
pub use error::{Error, Result};
pub use spectral::{
    beta_series, decay_rate, decay_rate_closed, decay_rate_quadrature, spectral_density,
    ReservoirSpec, SolverOptions, RatePath, SystemSpec, TimeGrid,
};
pub use state::{trace_norm, Density2};
pub use measures::{
    critical_coupling, measure_report, non_markovianity, qslt_ratio, sigma_series,
    trace_distance_general, trace_distance_optimal, CriticalScan, MeasureReport,
};
