//! Command-line layer: configuration, figure presets, sweeps and
//! CSV/JSON output.

mod commands;
mod config;
mod output;

pub use commands::{
    cmd_critical, cmd_dynamics, cmd_sweep, cmd_validate, critical_scan, critical_summary,
    dynamics_table, json_17, sweep_rows, sweep_table, validation_report, validation_table,
    SweepRow, ValidationCheck, ValidationReport,
};
pub use config::{
    Format, Overrides, Parameter, Preset, RunConfig, Series, Sweep, DEFAULT_DT, DEFAULT_TAU,
    PRESET_TAU,
};
pub use output::{fmt_float, Cell, Table};
