use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{RatePath, ReservoirSpec, SolverOptions, SystemSpec, TimeGrid};

pub const DEFAULT_TAU: f64 = 25.0;
pub const DEFAULT_DT: f64 = 1e-3;
/// Horizon used by the figure presets.
pub const PRESET_TAU: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum Parameter {
    Coupling,
    Eta,
    OmegaC,
    S,
}

impl Parameter {
    pub fn name(self) -> &'static str {
        match self {
            Parameter::Coupling => "coupling",
            Parameter::Eta => "eta",
            Parameter::OmegaC => "omega_c",
            Parameter::S => "s",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
    Fig4,
    Fig5,
}

impl Preset {
    pub fn from_number(n: u8) -> Result<Self> {
        match n {
            1 => Ok(Preset::Fig1),
            2 => Ok(Preset::Fig2),
            3 => Ok(Preset::Fig3),
            4 => Ok(Preset::Fig4),
            5 => Ok(Preset::Fig5),
            _ => Err(Error::Config(format!("figure must be 1-5, got {n}"))),
        }
    }

    /// Fig. 1 is a time series; the rest are coupling sweeps.
    pub fn is_sweep(self) -> bool {
        self != Preset::Fig1
    }

    pub fn config(self) -> RunConfig {
        let coupling_sweep = Some(Sweep {
            parameter: Parameter::Coupling,
            start: 0.1,
            stop: 4.0,
            steps: 79,
        });
        let base = RunConfig {
            s: 1.0,
            eta: 0.1,
            omega_c: 2.0,
            coupling: 3.0,
            tau: PRESET_TAU,
            dt: DEFAULT_DT,
            preset: Some(self),
            ..RunConfig::default()
        };
        match self {
            Preset::Fig1 => base,
            Preset::Fig2 => RunConfig {
                sweep: coupling_sweep,
                ..base
            },
            Preset::Fig3 => RunConfig {
                sweep: coupling_sweep,
                series: Some(Series {
                    parameter: Parameter::Eta,
                    values: vec![0.1, 0.5, 0.9],
                }),
                ..base
            },
            Preset::Fig4 => RunConfig {
                eta: 0.9,
                sweep: coupling_sweep,
                series: Some(Series {
                    parameter: Parameter::OmegaC,
                    values: vec![2.0, 1.0, 0.5],
                }),
                ..base
            },
            Preset::Fig5 => RunConfig {
                eta: 0.6,
                sweep: coupling_sweep,
                series: Some(Series {
                    parameter: Parameter::S,
                    values: vec![0.5, 1.0, 3.0],
                }),
                ..base
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sweep {
    pub parameter: Parameter,
    pub start: f64,
    pub stop: f64,
    pub steps: usize,
}

impl Sweep {
    pub fn values(&self) -> Vec<f64> {
        let last = self.steps - 1;
        (0..self.steps)
            .map(|i| {
                if i == last {
                    self.stop
                } else {
                    self.start + (self.stop - self.start) * i as f64 / last as f64
                }
            })
            .collect()
    }
}

/// A family of sweeps, one per value of a second parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Series {
    pub parameter: Parameter,
    pub values: Vec<f64>,
}

/// Fully resolved run settings. Frequencies are in units of ω₀ (ω₀ = 1),
/// times in units of 1/ω₀.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub s: f64,
    pub eta: f64,
    pub omega_c: f64,
    pub coupling: f64,
    pub tau: f64,
    pub dt: f64,
    /// Number of time samples including t = 0; overrides `dt` when set.
    pub steps: Option<usize>,
    pub rate_path: RatePath,
    pub sweep: Option<Sweep>,
    pub series: Option<Series>,
    pub range: (f64, f64),
    pub eps_n: f64,
    /// Replaces every validation tolerance when set.
    pub tolerance: Option<f64>,
    pub output: Option<PathBuf>,
    pub format: Format,
    pub preset: Option<Preset>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            s: 1.0,
            eta: 0.1,
            omega_c: 2.0,
            coupling: 3.0,
            tau: DEFAULT_TAU,
            dt: DEFAULT_DT,
            steps: None,
            rate_path: RatePath::Quadrature,
            sweep: None,
            series: None,
            range: (0.1, 4.0),
            eps_n: 1e-4,
            tolerance: None,
            output: None,
            format: Format::Csv,
            preset: None,
        }
    }
}

impl RunConfig {
    pub fn reservoir(&self) -> Result<ReservoirSpec> {
        ReservoirSpec::new(self.s, self.eta, self.omega_c)
    }

    pub fn system(&self) -> Result<SystemSpec> {
        SystemSpec::with_coupling(self.coupling)
    }

    pub fn grid(&self) -> Result<TimeGrid> {
        match self.steps {
            Some(n) => TimeGrid::new(self.tau, n),
            None => TimeGrid::with_spacing(self.tau, self.dt),
        }
    }

    pub fn solver_options(&self) -> SolverOptions {
        SolverOptions {
            rate_path: self.rate_path,
            ..SolverOptions::default()
        }
    }

    /// Checks everything a command could need, so bad input fails before any work.
    pub fn validate(&self) -> Result<()> {
        self.reservoir()?;
        self.system()?;
        self.grid()?;
        if let Some(sw) = &self.sweep {
            if sw.steps < 2 {
                return Err(Error::Config(format!("sweep_steps must be >= 2, got {}", sw.steps)));
            }
            if !(sw.start.is_finite() && sw.stop.is_finite() && sw.start < sw.stop) {
                return Err(Error::Config(format!(
                    "sweep needs start < stop, got [{}, {}]",
                    sw.start, sw.stop
                )));
            }
        }
        if let Some(series) = &self.series {
            if series.values.is_empty() {
                return Err(Error::Config("series_values must not be empty".into()));
            }
        }
        if !(self.eps_n.is_finite() && self.eps_n >= 0.0) {
            return Err(Error::Config(format!("eps_n must be >= 0, got {}", self.eps_n)));
        }
        if let Some(t) = self.tolerance {
            if !(t.is_finite() && t >= 0.0) {
                return Err(Error::Config(format!("tolerance must be >= 0, got {t}")));
            }
        }
        Ok(())
    }

    pub fn set(&mut self, parameter: Parameter, value: f64) {
        match parameter {
            Parameter::Coupling => self.coupling = value,
            Parameter::Eta => self.eta = value,
            Parameter::OmegaC => self.omega_c = value,
            Parameter::S => self.s = value,
        }
    }

    pub fn get(&self, parameter: Parameter) -> f64 {
        match parameter {
            Parameter::Coupling => self.coupling,
            Parameter::Eta => self.eta,
            Parameter::OmegaC => self.omega_c,
            Parameter::S => self.s,
        }
    }
}

/// Flat settings as they appear in a JSON config file or on the command
/// line. Unset fields leave the preset or default value alone.
#[derive(Clone, Debug, Default, PartialEq, Deserialize, Args)]
#[serde(deny_unknown_fields)]
pub struct Overrides {
    /// Ohmicity exponent s of J(ω) = η ω^s ω_c^(1-s) e^(-ω/ω_c)
    #[arg(long, allow_negative_numbers = true)]
    pub s: Option<f64>,
    /// Cavity-reservoir coupling η
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Cutoff frequency ω_c (units of ω₀)
    #[arg(long, allow_negative_numbers = true)]
    pub omega_c: Option<f64>,
    /// Atom-cavity coupling Ω (units of ω₀)
    #[arg(long, allow_negative_numbers = true)]
    pub coupling: Option<f64>,
    /// Evolution horizon τ (units of 1/ω₀)
    #[arg(long, allow_negative_numbers = true)]
    pub tau: Option<f64>,
    /// Time step (units of 1/ω₀); ignored when --steps is given
    #[arg(long, allow_negative_numbers = true)]
    pub dt: Option<f64>,
    /// Number of time samples including t = 0
    #[arg(long, allow_negative_numbers = true)]
    pub steps: Option<usize>,
    #[arg(long, value_enum)]
    pub rate_path: Option<RatePath>,

    /// Parameter to sweep
    #[arg(long = "sweep", value_enum)]
    #[serde(rename = "sweep")]
    pub sweep_parameter: Option<Parameter>,
    #[arg(long = "start", allow_negative_numbers = true)]
    #[serde(rename = "start")]
    pub sweep_start: Option<f64>,
    #[arg(long = "stop", allow_negative_numbers = true)]
    #[serde(rename = "stop")]
    pub sweep_stop: Option<f64>,
    /// Number of sweep points
    #[arg(long, allow_negative_numbers = true)]
    pub sweep_steps: Option<usize>,
    /// Second parameter giving one sweep per value
    #[arg(long, value_enum)]
    pub series_parameter: Option<Parameter>,
    #[arg(long, allow_negative_numbers = true, value_delimiter = ',')]
    #[serde(default)]
    pub series_values: Option<Vec<f64>>,

    /// Lower end of the coupling range searched for Ω_c
    #[arg(long, allow_negative_numbers = true)]
    pub range_lo: Option<f64>,
    /// Upper end of the coupling range searched for Ω_c
    #[arg(long, allow_negative_numbers = true)]
    pub range_hi: Option<f64>,
    /// N above this counts as non-Markovian
    #[arg(long, allow_negative_numbers = true)]
    pub eps_n: Option<f64>,
    /// Single tolerance applied to every validation check
    #[arg(long, allow_negative_numbers = true)]
    pub tolerance: Option<f64>,

    /// Output file (default: standard output)
    #[arg(long, short)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
}

impl Overrides {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("config file: {e}")))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Fields set in `other` win.
    pub fn merged(self, other: Overrides) -> Overrides {
        macro_rules! pick {
            ($($f:ident),*) => {
                Overrides { $($f: other.$f.or(self.$f)),* }
            };
        }
        pick!(
            s, eta, omega_c, coupling, tau, dt, steps, rate_path, sweep_parameter, sweep_start,
            sweep_stop, sweep_steps, series_parameter, series_values, range_lo, range_hi, eps_n,
            tolerance, output, format, preset
        )
    }

    /// Starts from the preset (or the defaults) and applies every set field.
    pub fn resolve(&self) -> Result<RunConfig> {
        let mut cfg = self.preset.map(Preset::config).unwrap_or_default();
        macro_rules! apply {
            ($($f:ident),*) => {
                $(if let Some(v) = self.$f.clone() { cfg.$f = v; })*
            };
        }
        apply!(s, eta, omega_c, coupling, tau, dt, rate_path, format);
        if self.steps.is_some() {
            cfg.steps = self.steps;
        } else if self.dt.is_some() {
            cfg.steps = None;
        }
        if self.tolerance.is_some() {
            cfg.tolerance = self.tolerance;
        }
        if self.output.is_some() {
            cfg.output = self.output.clone();
        }

        let any_sweep = self.sweep_parameter.is_some()
            || self.sweep_start.is_some()
            || self.sweep_stop.is_some()
            || self.sweep_steps.is_some();
        if any_sweep {
            let current = cfg.sweep;
            let parameter = self
                .sweep_parameter
                .or(current.map(|s| s.parameter))
                .ok_or_else(|| Error::Config("sweep bounds given without --sweep <parameter>".into()))?;
            let field = |v: Option<f64>, old: Option<f64>, name: &str| {
                v.or(old).ok_or_else(|| Error::Config(format!("sweep needs {name}")))
            };
            cfg.sweep = Some(Sweep {
                parameter,
                start: field(self.sweep_start, current.map(|s| s.start), "start")?,
                stop: field(self.sweep_stop, current.map(|s| s.stop), "stop")?,
                steps: self
                    .sweep_steps
                    .or(current.map(|s| s.steps))
                    .ok_or_else(|| Error::Config("sweep needs sweep_steps".into()))?,
            });
        }
        if self.series_parameter.is_some() || self.series_values.is_some() {
            let current = cfg.series.take();
            let parameter = self
                .series_parameter
                .or(current.as_ref().map(|s| s.parameter))
                .ok_or_else(|| Error::Config("series_values given without series_parameter".into()))?;
            let values = self
                .series_values
                .clone()
                .or(current.map(|s| s.values))
                .ok_or_else(|| Error::Config("series_parameter given without series_values".into()))?;
            cfg.series = Some(Series { parameter, values });
        }
        if let Some(lo) = self.range_lo {
            cfg.range.0 = lo;
        }
        if let Some(hi) = self.range_hi {
            cfg.range.1 = hi;
        }
        if let Some(e) = self.eps_n {
            cfg.eps_n = e;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_and_preset() {
        let file = Overrides::from_json(r#"{"preset": "fig3", "eta": 0.4, "tau": 2.0}"#).unwrap();
        let flags = Overrides {
            tau: Some(3.0),
            ..Default::default()
        };
        let cfg = file.merged(flags).resolve().unwrap();
        assert_eq!(cfg.eta, 0.4);
        assert_eq!(cfg.tau, 3.0);
        assert_eq!(cfg.omega_c, 2.0);
        assert_eq!(cfg.series.unwrap().values, vec![0.1, 0.5, 0.9]);
    }

    #[test]
    fn unknown_fields_are_config_errors() {
        let err = Overrides::from_json(r#"{"etaa": 0.4}"#).unwrap_err();
        assert_eq!(err.exit_code(), 1);
    }

    #[test]
    fn sweep_bounds_are_checked() {
        let o = Overrides {
            sweep_parameter: Some(Parameter::Coupling),
            sweep_start: Some(2.0),
            sweep_stop: Some(1.0),
            sweep_steps: Some(5),
            ..Default::default()
        };
        assert!(matches!(o.resolve(), Err(Error::Config(_))));
        let o = Overrides {
            sweep_stop: Some(3.0),
            sweep_steps: Some(1),
            ..o
        };
        assert!(matches!(o.resolve(), Err(Error::Config(_))));
    }

    #[test]
    fn sweep_values_hit_both_ends() {
        let sw = Sweep {
            parameter: Parameter::Coupling,
            start: 0.1,
            stop: 4.0,
            steps: 79,
        };
        let v = sw.values();
        assert_eq!(v.len(), 79);
        assert_eq!(v[0], 0.1);
        assert_eq!(v[78], 4.0);
        assert!((v[1] - 0.15).abs() < 1e-15);
    }

    #[test]
    fn steps_override_spacing() {
        let o = Overrides {
            steps: Some(2),
            tau: Some(1.0),
            ..Default::default()
        };
        assert_eq!(o.resolve().unwrap().grid().unwrap().len(), 2);
        let cfg = Overrides::default().resolve().unwrap();
        assert_eq!(cfg.grid().unwrap().len(), 25001);
    }
}
