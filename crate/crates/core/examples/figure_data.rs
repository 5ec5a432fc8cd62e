//! Writes the data of all five figure presets as CSV files into a
//! directory (default: ./figures).

use std::path::PathBuf;

use dissipative_jc::run::{cmd_dynamics, cmd_sweep, Preset, RunConfig};

fn main() -> dissipative_jc::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "figures".into()));
    std::fs::create_dir_all(&dir)?;
    for preset in [Preset::Fig1, Preset::Fig2, Preset::Fig3, Preset::Fig4, Preset::Fig5] {
        let path = dir.join(format!("{preset:?}.csv").to_lowercase());
        let cfg = RunConfig {
            output: Some(path.clone()),
            ..preset.config()
        };
        if preset.is_sweep() {
            let rows = cmd_sweep(&cfg)?;
            println!("{} ({} rows)", path.display(), rows.len());
        } else {
            cmd_dynamics(&cfg)?;
            println!("{}", path.display());
        }
    }
    Ok(())
}
