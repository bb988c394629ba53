use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use ncsa_core::montecarlo::DEFAULT_FRAMES;
use ncsa_core::{
    de_iterate, parse_config, report, run_trials, simulate_frame, sweep_load, AlohaVariant, Mixture, SystemConfig,
};

mod grid;

#[derive(Parser)]
#[command(name = "ncsa", version, about = "Network-coding slotted Aloha simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Monte Carlo trials for one configuration.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = DEFAULT_FRAMES)]
        frames: usize,
        /// Overrides the seed in the config file.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Throughput and loss over a range of normalized loads.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// `start:stop:step` or a comma-separated list.
        #[arg(long)]
        g: String,
        #[arg(long, default_value_t = DEFAULT_FRAMES)]
        frames: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Density-evolution trajectory.
    De {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Round-by-round decoder trace of a single frame.
    Trace {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        frame_index: u64,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analytic Aloha throughput curve.
    Baseline {
        #[arg(long, value_enum, default_value_t = Variant::Slotted)]
        variant: Variant,
        #[arg(long)]
        g: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Variant {
    Slotted,
    Pure,
}

fn load_config(path: &Path, seed: Option<u64>) -> Result<SystemConfig, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let cfg = parse_config(&text).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(match seed {
        Some(s) => cfg.with_seed(s),
        None => cfg,
    })
}

fn emit(out: Option<&Path>, body: Vec<u8>) -> Result<(), String> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => io::stdout().write_all(&body).map_err(|e| format!("stdout: {e}")),
    }
}

fn positive_frames(frames: usize) -> Result<usize, String> {
    if frames == 0 {
        Err("--frames must be at least 1".to_string())
    } else {
        Ok(frames)
    }
}

fn run(command: Command) -> Result<(), String> {
    let mut buf = Vec::new();
    let out = match command {
        Command::Simulate {
            config,
            frames,
            seed,
            out,
        } => {
            let cfg = load_config(&config, seed)?;
            let agg = run_trials(&cfg, positive_frames(frames)?);
            report::write_trial(&mut buf, &cfg, &agg).map_err(|e| e.to_string())?;
            out
        }
        Command::Sweep {
            config,
            g,
            frames,
            seed,
            out,
        } => {
            let cfg = load_config(&config, seed)?;
            let loads = grid::parse(&g)?;
            let frames = positive_frames(frames)?;
            let result = sweep_load(&Mixture::from_config(&cfg), cfg.ns(), &loads, frames, cfg.seed());
            for g in &result.skipped {
                eprintln!("warning: G={g} yields no users on {} slots, skipped", cfg.ns());
            }
            if result.points.is_empty() {
                return Err(format!("--g {g}: no load point yields at least one user"));
            }
            report::write_sweep(&mut buf, &result).map_err(|e| e.to_string())?;
            out
        }
        Command::De { config, out } => {
            let cfg = load_config(&config, None)?;
            report::write_de(&mut buf, &de_iterate(&cfg)).map_err(|e| e.to_string())?;
            out
        }
        Command::Trace {
            config,
            frame_index,
            seed,
            out,
        } => {
            let cfg = load_config(&config, seed)?;
            report::write_trace(&mut buf, &simulate_frame(&cfg, frame_index)).map_err(|e| e.to_string())?;
            out
        }
        Command::Baseline { variant, g, out } => {
            let variant = match variant {
                Variant::Slotted => AlohaVariant::Slotted,
                Variant::Pure => AlohaVariant::Pure,
            };
            report::write_baseline(&mut buf, variant, &grid::parse(&g)?).map_err(|e| e.to_string())?;
            out
        }
    };
    emit(out.as_deref(), buf)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            eprintln!("{}", text.lines().next().unwrap_or("error: invalid arguments"));
            return ExitCode::from(2);
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::FAILURE
        }
    }
}
