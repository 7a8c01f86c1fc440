use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use envtheory_cli::config::{self, TaskKind, TaskSection};
use envtheory_cli::runner::{self, RunOptions};

/// Approximate eigenvalues of N-body Hamiltonians with K-body forces, with
/// variational bound character where provable.
#[derive(Parser)]
#[command(name = "envtheory", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single configured state.
    Solve(TaskArgs),
    /// Solve every configured state.
    Spectrum(TaskArgs),
    /// Critical coupling constants of an attractive well.
    Critical(TaskArgs),
    /// Re-solve while sweeping one named parameter.
    Scan(TaskArgs),
    /// Verify the regular-simplex geometry identities for the system.
    SimplexCheck(TaskArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Jsonl,
}

#[derive(Args)]
struct TaskArgs {
    /// Configuration file (see docs/config.md).
    #[arg(long)]
    config: PathBuf,
    /// Output file; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Table format.
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Relative tolerance of the stationary-radius refinement.
    #[arg(long, default_value_t = 1e-12)]
    tolerance: f64,
    /// Points of the stationarity scan grid.
    #[arg(long, default_value_t = 400)]
    scan_grid: usize,
}

impl Command {
    fn kind(&self) -> TaskKind {
        match self {
            Command::Solve(_) => TaskKind::Solve,
            Command::Spectrum(_) => TaskKind::Spectrum,
            Command::Critical(_) => TaskKind::Critical,
            Command::Scan(_) => TaskKind::Scan,
            Command::SimplexCheck(_) => TaskKind::SimplexCheck,
        }
    }

    fn args(&self) -> &TaskArgs {
        match self {
            Command::Solve(a)
            | Command::Spectrum(a)
            | Command::Critical(a)
            | Command::Scan(a)
            | Command::SimplexCheck(a) => a,
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let kind = cli.command.kind();
    let args = cli.command.args();
    let mut config = config::load_config(&args.config)?;
    match &mut config.task {
        Some(task) => {
            if task.kind != kind {
                bail!(
                    "config task kind `{}` does not match subcommand `{}`",
                    task.kind.name(),
                    kind.name()
                );
            }
        }
        None => {
            config.task = Some(TaskSection {
                kind,
                scan: None,
                radius: None,
            });
            config.validate()?;
        }
    }
    let opts = RunOptions {
        tolerance: args.tolerance,
        scan_grid: args.scan_grid,
    };
    let out = runner::execute(&config, &opts)?;
    for line in &out.diagnostics {
        eprintln!("envtheory: {line}");
    }
    let rendered = match args.format {
        OutputFormat::Csv => out.table.to_csv(),
        OutputFormat::Jsonl => out.table.to_jsonl(),
    };
    match &args.output {
        Some(path) => std::fs::write(path, rendered.as_bytes())?,
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(rendered.as_bytes())?;
            stdout.flush()?;
        }
    }
    Ok(out.exit_code())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(u8::try_from(code).unwrap_or(1)),
        Err(e) => {
            eprintln!("envtheory: error: {e:#}");
            ExitCode::from(1)
        }
    }
}
