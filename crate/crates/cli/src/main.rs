use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use shuffle_blanket::check;
use shuffle_blanket::commands::{self, CommandOutput};
use shuffle_blanket::config::{parse_config_text, RawConfig, RunConfig};
use shuffle_blanket::{CliError, CliResult};

#[derive(Parser)]
#[command(name = "shuffle-blanket", version, about = "Shuffle-model (ε, δ) blanket accounting for k-RR")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Blanket constants κ₁..κ₅ for every input element
    Kappas(Flags),
    /// Which branch of the bound applies at each ε
    Case(Flags),
    /// The δ bound at each ε
    Bound(Flags),
    /// Tightness regions, hypotheses and per-ε classification
    Regions(Flags),
    /// Exact tight δ from the shuffled-histogram oracle next to the bound
    Oracle(Flags),
    /// Flat table over a grid of (ε₀, n, ε)
    Sweep(Flags),
    /// Run the self-check suite
    Check,
}

#[derive(Args, Default)]
struct Flags {
    /// Local privacy level of the randomizer (comma list for sweep)
    #[arg(long, allow_hyphen_values = true)]
    eps0: Option<String>,
    /// Number of users (comma list for sweep)
    #[arg(long, allow_hyphen_values = true)]
    n: Option<String>,
    /// Alphabet size
    #[arg(long, allow_hyphen_values = true)]
    k: Option<String>,
    /// Input distribution: comma list or `uniform`
    #[arg(long, allow_hyphen_values = true)]
    pi: Option<String>,
    /// Central privacy levels to evaluate (comma list)
    #[arg(long, allow_hyphen_values = true)]
    eps: Option<String>,
    /// Target pair `x0,x1`; several pairs separated by `;`
    #[arg(long, allow_hyphen_values = true)]
    pair: Option<String>,
    /// Inputs of the other n-1 users: comma list or `all:c`
    #[arg(long, allow_hyphen_values = true)]
    others: Option<String>,
    /// Monte Carlo sample count (oracle)
    #[arg(long, allow_hyphen_values = true)]
    samples: Option<String>,
    /// Monte Carlo seed
    #[arg(long, allow_hyphen_values = true)]
    seed: Option<String>,
    /// Grid points used to bracket roots of the critical equation
    #[arg(long = "scan-points", allow_hyphen_values = true)]
    scan_points: Option<String>,
    /// Output format: csv or text
    #[arg(long)]
    format: Option<String>,
    /// Config file with flat `flag = value` entries
    #[arg(long)]
    config: Option<PathBuf>,
    /// Write output here instead of standard output
    #[arg(long)]
    out: Option<String>,
}

impl Flags {
    fn raw(&self) -> CliResult<RawConfig> {
        let file = match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).map_err(|e| {
                    CliError::Invalid(format!("config: cannot read {}: {e}", path.display()))
                })?;
                parse_config_text(&text)?
            }
            None => RawConfig::default(),
        };
        let mut flags = RawConfig::default();
        for (key, value) in [
            ("eps0", &self.eps0),
            ("n", &self.n),
            ("k", &self.k),
            ("pi", &self.pi),
            ("eps", &self.eps),
            ("pair", &self.pair),
            ("others", &self.others),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("scan-points", &self.scan_points),
            ("format", &self.format),
            ("out", &self.out),
        ] {
            if let Some(v) = value {
                flags.set(key, v.clone());
            }
        }
        Ok(file.overridden_by(flags))
    }
}

fn emit(config: &RunConfig, output: CommandOutput) -> CliResult<()> {
    for w in &output.warnings {
        eprintln!("warning: {w}");
    }
    match &config.out {
        Some(path) => fs::write(path, output.body)?,
        None => std::io::stdout().write_all(output.body.as_bytes())?,
    }
    Ok(())
}

fn run_check() -> ExitCode {
    let start = Instant::now();
    let mut failed = 0;
    for criterion in check::all_criteria() {
        let report = criterion();
        if !report.passed {
            failed += 1;
        }
        println!("{report}");
    }
    println!(
        "{} criteria failed, total {:.1}s",
        failed,
        start.elapsed().as_secs_f64()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(3)
    }
}

fn run(command: Command) -> CliResult<()> {
    let (flags, action): (Flags, fn(&RunConfig) -> CliResult<CommandOutput>) = match command {
        Command::Kappas(f) => (f, commands::kappas),
        Command::Case(f) => (f, commands::case),
        Command::Bound(f) => (f, commands::bound),
        Command::Regions(f) => (f, commands::regions),
        Command::Oracle(f) => (f, commands::oracle),
        Command::Sweep(f) => (f, commands::sweep),
        Command::Check => unreachable!("handled before"),
    };
    let config = RunConfig::from_raw(&flags.raw()?)?;
    let output = action(&config)?;
    emit(&config, output)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Command::Check = cli.command {
        return run_check();
    }
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("shuffle-blanket: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
