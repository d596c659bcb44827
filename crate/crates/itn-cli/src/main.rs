mod commands;
mod config;
mod manifest;
mod presets;

use clap::{Parser, Subcommand};

/// Torsion-noise dephasing toolkit: simulate the suspended-box dynamics,
/// evaluate spectra and transfer functions, and scan parameter space.
#[derive(Parser)]
#[command(name = "itn", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone)]
struct CommonArgs {
    /// Path to a TOML run configuration.
    #[arg(long, conflicts_with = "preset")]
    config: Option<std::path::PathBuf>,
    /// Built-in configuration (fig2..fig8).
    #[arg(long)]
    preset: Option<String>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: std::path::PathBuf,
    /// Override the master seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Cap the worker pool (0 = library default).
    #[arg(long, default_value_t = 0)]
    threads: usize,
    /// Overwrite existing output files.
    #[arg(long)]
    force: bool,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
enum MethodArg {
    Spectral,
    Mc,
    Both,
}

#[derive(clap::ValueEnum, Clone, Copy, PartialEq, Eq)]
enum ConventionArg {
    Paper,
    Calibrated,
}

impl From<ConventionArg> for itn_core::Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => itn_core::Convention::PaperLiteral,
            ConventionArg::Calibrated => itn_core::Convention::Calibrated,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Simulate box trajectories and write them as CSV.
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Estimate the trajectory PSD and write estimated + analytic spectra.
    Psd {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = ConventionArg::Calibrated)]
        convention: ConventionArg,
    },
    /// Evaluate the interferometer transfer function (exact, numeric, approximate).
    Transfer {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Compute the dephasing factor and threshold verdicts.
    Dephasing {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Spectral)]
        method: MethodArg,
        #[arg(long, value_enum, default_value_t = ConventionArg::Paper)]
        convention: ConventionArg,
    },
    /// Run a parameter sweep described by a sweep spec file or preset.
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Sweep spec TOML (defaults to the preset's bundled sweep).
        #[arg(long)]
        sweep: Option<std::path::PathBuf>,
    },
    /// Gas-collision chain: damping rate, thermal amplitude, dephasing.
    Gas {
        #[command(flatten)]
        common: CommonArgs,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err:#}");
            exit_code_for(&err)
        }
    };
    std::process::exit(code);
}

fn exit_code_for(err: &anyhow::Error) -> i32 {
    for cause in err.chain() {
        if let Some(core) = cause.downcast_ref::<itn_core::Error>() {
            return match core {
                itn_core::Error::Unconverged { .. } | itn_core::Error::InsufficientSamples { .. } => 3,
                _ => 2,
            };
        }
        if cause.downcast_ref::<config::ConfigError>().is_some() {
            return 2;
        }
    }
    1
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Simulate { common } => commands::simulate(&common),
        Command::Psd { common, convention } => commands::psd(&common, convention.into()),
        Command::Transfer { common } => commands::transfer(&common),
        Command::Dephasing { common, method, convention } => {
            commands::dephasing(&common, method, convention.into())
        }
        Command::Sweep { common, sweep } => commands::sweep(&common, sweep.as_deref()),
        Command::Gas { common } => commands::gas(&common),
    }
}
