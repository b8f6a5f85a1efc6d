use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rankflow::scenario::{run, ScenarioConfig};

#[derive(Parser)]
#[command(version, about = "Run rank-based particle / PDE experiments from a JSON config")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write CSVs plus manifest.json
    Run {
        config: PathBuf,
        /// Output directory (overrides `output_dir` in the config)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Master seed (overrides `seed` in the config)
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn main() -> ExitCode {
    let Command::Run { config, out, seed } = Cli::parse().command;
    let result = std::fs::read_to_string(&config)
        .map_err(rankflow::Error::from)
        .and_then(|text| ScenarioConfig::from_json(&text))
        .and_then(|mut cfg| {
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let dir = out.or_else(|| cfg.output_dir.clone()).unwrap_or_else(|| PathBuf::from("out"));
            run(&cfg, &dir).map(|m| (dir, m))
        });
    match result {
        Ok((dir, manifest)) => {
            println!("{} files written to {}", manifest.files.len() + 1, dir.display());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
