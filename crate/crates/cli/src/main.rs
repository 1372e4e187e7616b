use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spinboson_cli::config::Job;
use spinboson_cli::{presets, runner, CliError, Config, Result};

#[derive(Parser)]
#[command(
    name = "spinboson",
    version,
    about = "Driven spin-boson coherence dynamics"
)]
struct Cli {
    /// Worker threads for sweep points (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every job in a configuration file.
    Run {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run a named preset.
    Preset {
        name: String,
        /// Output directory (default: out/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the preset's configuration instead of running it.
        #[arg(long)]
        print: bool,
    },
    /// List the presets.
    List,
    /// Tabulate influence coefficients without propagating.
    Kernel {
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

fn load(path: &PathBuf) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.clone(),
        source: e,
    })?;
    text.parse()
}

fn report_warnings(config: &Config) -> Result<()> {
    for job in &config.jobs {
        let scenarios = match job {
            Job::Scenario(s) => vec![s.clone()],
            Job::Sweep(sw) => sw.points()?,
            _ => continue,
        };
        for w in scenarios.iter().flat_map(runner::warnings) {
            eprintln!("warning: {w}");
        }
    }
    Ok(())
}

fn execute(config: &Config, out: &Path, threads: Option<usize>) -> Result<()> {
    report_warnings(config)?;
    let pool = runner::thread_pool(threads)?;
    let manifest = runner::run(config, out, &pool)?;
    for entry in &manifest.outputs {
        println!("{}", out.join(&entry.file).display());
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, out } => execute(&load(&config)?, &out, cli.threads),
        Command::Preset { name, out, print } => {
            let preset = presets::find(&name)?;
            if print {
                print!("{}", preset.text());
                return Ok(());
            }
            let out = out.unwrap_or_else(|| PathBuf::from("out").join(preset.name));
            execute(&preset.config(), &out, cli.threads)
        }
        Command::List => {
            let width = presets::PRESETS
                .iter()
                .map(|p| p.name.len())
                .max()
                .unwrap_or(0);
            for p in presets::PRESETS {
                println!("{:width$}  {}", p.name, p.description);
            }
            Ok(())
        }
        Command::Kernel { config, out } => {
            for file in runner::write_kernels(&load(&config)?, &out)? {
                println!("{}", out.join(file).display());
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
