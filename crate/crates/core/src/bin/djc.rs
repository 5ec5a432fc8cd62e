//! djc: dynamics, non-Markovianity and speed-limit data for an atom in a
//! leaky cavity. Frequencies are in units of ω₀ (ω₀ = 1), times in 1/ω₀.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use dissipative_jc::error::{Error, Result};
use dissipative_jc::run::{self, Overrides, Preset};

#[derive(Parser)]
#[command(name = "djc", version, about, long_about = None)]
#[command(after_help = "Units: omega0 = 1; frequencies in units of omega0, times in 1/omega0.\n\
Exit codes: 0 ok, 1 config error, 2 I/O error, 3 not found, 4 validation failure.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct Common {
    /// JSON config file with the same (snake_case) field names as the flags
    #[arg(long, short)]
    config: Option<PathBuf>,
    #[command(flatten)]
    flags: Overrides,
}

impl Common {
    fn overrides(self, base: Overrides) -> Result<Overrides> {
        let file = match &self.config {
            Some(path) => Overrides::from_file(path)?,
            None => Overrides::default(),
        };
        Ok(base.merged(file).merged(self.flags))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Time series of p, |p|², σ, Γ, S, β₁, β₂ and the running N
    Dynamics(Common),
    /// N and τ_QSL/τ over a range of one parameter
    Sweep(Common),
    /// Locate the critical coupling Ω_c by scan and bisection
    Critical(Common),
    /// Run the built-in consistency checks
    Validate(Common),
    /// Regenerate the data behind one of the five figures
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=5))]
        number: u8,
        #[command(flatten)]
        common: Common,
    },
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Dynamics(c) => {
            let mut cfg = c.overrides(Overrides::default())?.resolve()?;
            if cfg.preset.is_some_and(Preset::is_sweep) {
                cfg.sweep = None;
                cfg.series = None;
            }
            run::cmd_dynamics(&cfg)
        }
        Command::Sweep(c) => run::cmd_sweep(&c.overrides(Overrides::default())?.resolve()?).map(drop),
        Command::Critical(c) => {
            let cfg = c.overrides(Overrides::default())?.resolve()?;
            run::cmd_critical(&cfg).map(drop)
        }
        Command::Validate(c) => {
            let cfg = c.overrides(Overrides::default())?.resolve()?;
            run::cmd_validate(&cfg).map(drop)
        }
        Command::Figure { number, common } => {
            let preset = Preset::from_number(number)?;
            let base = Overrides {
                preset: Some(preset),
                ..Default::default()
            };
            let cfg = common.overrides(base)?.resolve()?;
            if preset.is_sweep() {
                run::cmd_sweep(&cfg).map(drop)
            } else {
                run::cmd_dynamics(&cfg)
            }
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("djc: {e}");
            if let Error::NotFound { scan, .. } = &e {
                let peak = scan.iter().map(|p| p.1).fold(0.0, f64::max);
                eprintln!("djc: scanned {} couplings, largest N = {peak:.3e}", scan.len());
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
