use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use conbandit_cli::commands::{cmd_analyze, cmd_presets, cmd_run};
use conbandit_cli::{load_config, Overrides};

#[derive(Parser)]
#[command(name = "conbandit", version, about = "Fixed-budget constrained bandit experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate error probabilities over algorithms x horizons and write CSV.
    Run(RunArgs),
    /// Report classes, gaps, hardness and lower-bound rates of an instance.
    Analyze(AnalyzeArgs),
    /// List the built-in instances.
    Presets,
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Preset name (instance-a .. instance-d) or path to a TOML file with an [instance] table.
    #[arg(long)]
    instance: Option<String>,
    /// Comma-separated subset of csr, if, sr.
    #[arg(long)]
    algorithms: Option<String>,
    /// Comma-separated budgets, or start:stop:step.
    #[arg(long)]
    horizons: Option<String>,
    #[arg(long)]
    runs: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads, or `auto`.
    #[arg(long)]
    threads: Option<String>,
    /// `per-pull` (default) or `aggregated`.
    #[arg(long)]
    sampling: Option<String>,
    /// CSV destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a JSON mirror with run metadata.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Write the rejection trace of replication 0 of every cell.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    instance: Option<String>,
    /// Report destination (stdout if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let result = match cli.command {
        Command::Run(a) => {
            let overrides = Overrides {
                instance: a.instance,
                algorithms: a.algorithms,
                horizons: a.horizons,
                runs: a.runs,
                seed: a.seed,
                threads: a.threads,
                sampling: a.sampling,
                out: a.out,
                json: a.json,
                trace: a.trace,
            };
            load_config(a.config.as_deref(), &overrides)
                .map_err(anyhow::Error::from)
                .and_then(|cfg| cmd_run(&cfg, &mut stdout).map(|_| ()))
        }
        Command::Analyze(a) => {
            let overrides = Overrides {
                instance: a.instance,
                out: a.out,
                ..Default::default()
            };
            load_config(a.config.as_deref(), &overrides)
                .map_err(anyhow::Error::from)
                .and_then(|cfg| cmd_analyze(&cfg, &mut stdout))
        }
        Command::Presets => cmd_presets(&mut stdout),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        // Reader went away (`conbandit presets | head`).
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain()
        .filter_map(|c| c.downcast_ref::<std::io::Error>())
        .any(|io| io.kind() == std::io::ErrorKind::BrokenPipe)
}
