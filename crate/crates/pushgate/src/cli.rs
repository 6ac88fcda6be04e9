use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use pushgate_core::figures::{FigurePreset, DEFAULT_POINTS, SEPARATIONS_UM};
use pushgate_core::scenario::SweepParam;

use crate::commands;
use crate::config::Config;
use crate::error::CliError;
use crate::table::Table;

#[derive(Debug, Parser)]
#[command(name = "pushgate", version, about = "Fidelity budget of the trapped-ion pushing gate")]
pub struct Cli {
    #[command(flatten)]
    pub common: Common,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Common {
    /// Scenario file (`key = value` lines); defaults to the 100 mW travelling-wave point.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Write CSV here instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    /// Exit 0 even when rows fail validity checks.
    #[arg(long, global = true)]
    pub force: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Total infidelity and its breakdown for one scenario.
    Fidelity,
    /// Vary one parameter over a grid.
    Sweep {
        /// omega (Hz), d (um), P (mW), w (um), T (uK), Delta (Hz), x0 (fraction of w), z0 (rad)
        #[arg(long)]
        param: String,
        #[arg(long, allow_negative_numbers = true)]
        min: f64,
        #[arg(long, allow_negative_numbers = true)]
        max: f64,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
        /// Logarithmic spacing.
        #[arg(long)]
        log: bool,
    },
    /// Sweet-spot trap frequency and its budget for several separations.
    Sweetspot {
        /// Trap separations, um.
        #[arg(long, value_delimiter = ',', default_values_t = SEPARATIONS_UM.to_vec())]
        d_um: Vec<f64>,
        /// Relative intensity noise ΔI/I.
        #[arg(long, default_value_t = 1e-3)]
        noise: f64,
    },
    /// Monte Carlo check of the thermal closed forms.
    Oracle {
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Total infidelity against trap frequency for a figure preset.
    Figure {
        /// fig5, fig6, fig7 or fig8
        #[arg(long)]
        preset: String,
        #[arg(long, default_value_t = DEFAULT_POINTS)]
        points: usize,
    },
}

/// Builds the table for a parsed command line.
pub fn table(cli: &Cli) -> Result<Table, CliError> {
    let config = match &cli.common.config {
        Some(path) => Config::load(path).map_err(|e| match e {
            CliError::Io(io) => CliError::Config { origin: path.display().to_string(), line: 0, message: io.to_string() },
            other => other,
        })?,
        None => Config::default(),
    };
    let scenario = config.to_scenario()?;
    let pool = commands::pool(cli.common.threads)?;
    match &cli.command {
        Command::Fidelity => commands::fidelity_table(&scenario),
        Command::Sweep { param, min, max, points, log } => {
            let param = SweepParam::parse(param).ok_or_else(|| {
                let names: Vec<_> = SweepParam::ALL.iter().map(|p| p.name()).collect();
                CliError::Usage(format!("unknown sweep parameter `{param}` (expected one of {})", names.join(", ")))
            })?;
            let values = commands::sweep_values(*min, *max, *points, *log)?;
            commands::sweep_table(&scenario, param, &values, &pool)
        }
        Command::Sweetspot { d_um, noise } => commands::sweetspot_table(&scenario, d_um, *noise, &pool),
        Command::Oracle { samples, seed } => commands::oracle_table(&scenario, *samples, *seed, &pool),
        Command::Figure { preset, points } => {
            let preset = FigurePreset::parse(preset)
                .ok_or_else(|| CliError::Usage(format!("unknown preset `{preset}` (expected fig5..fig8)")))?;
            commands::figure_table(preset, *points, &pool)
        }
    }
}

/// Writes the CSV, then reports flagged rows unless `--force` is set.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let table = table(cli)?;
    match &cli.common.out {
        Some(path) => {
            let mut w = BufWriter::new(File::create(path)?);
            table.write_csv(&mut w)?;
            w.flush()?;
        }
        None => table.write_csv(io::stdout().lock())?,
    }
    if table.flagged > 0 && !cli.common.force {
        return Err(CliError::Validity(table.flagged));
    }
    Ok(())
}
