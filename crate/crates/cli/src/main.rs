mod render;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use trajent::generators::ChainFamily;
use trajent::mc::{self, McConfig};
use trajent::report::report_from_analysis;
use trajent::{io, ChainAnalysis, ChainError, DEFAULT_CHECK_TOL, DEFAULT_ROW_TOL, DEFAULT_STRUCTURE_TOL};

use render::{Format, LogBase, SimulationView};

/// Trajectory entropy and hitting times of finite Markov chains.
#[derive(Debug, Parser)]
#[command(name = "trajent", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Logarithm base used when displaying entropies.
    #[arg(long = "log-base", value_enum, default_value = "e")]
    log_base: LogBase,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute stationary distribution, hitting times and entropies.
    Analyze {
        matrix: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
    /// Check the entropy/hitting-time identities; exit 1 if any fails.
    Verify {
        matrix: PathBuf,
        #[command(flatten)]
        out: OutputArgs,
        #[arg(long, default_value_t = DEFAULT_CHECK_TOL)]
        tol: f64,
    },
    /// Emit a chain from one of the built-in families.
    Generate(GenerateArgs),
    /// Estimate trajectory entropy and hitting time by simulation.
    Simulate {
        matrix: PathBuf,
        #[arg(long)]
        from: usize,
        #[arg(long)]
        to: usize,
        #[arg(long, default_value_t = 100_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long = "step-cap", default_value_t = mc::DEFAULT_STEP_CAP)]
        step_cap: u64,
        /// Worker threads (0 = all cores). Results do not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Family {
    TwoState,
    Complete,
    RankOne,
    Cycle,
    Circulant,
    RandomIrreducible,
    RandomReversible,
    RandomSymmetric,
    RandomCirculant,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[arg(value_enum)]
    family: Family,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    /// Comma-separated distribution for rank-one.
    #[arg(long)]
    pi: Option<String>,
    /// Comma-separated first row for circulant.
    #[arg(long)]
    row: Option<String>,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// `text` prints the same CSV layout as `csv`.
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

enum Failure {
    Usage(String),
    Chain(ChainError),
}

impl From<ChainError> for Failure {
    fn from(e: ChainError) -> Self {
        Self::Chain(e)
    }
}

fn required<T>(value: Option<T>, flag: &str) -> Result<T, Failure> {
    value.ok_or_else(|| Failure::Usage(format!("missing required --{flag}")))
}

fn parse_list(text: &str, flag: &str) -> Result<Vec<f64>, Failure> {
    text.split(',')
        .map(|s| {
            s.trim()
                .parse()
                .map_err(|_| Failure::Usage(format!("--{flag}: cannot parse {s:?}")))
        })
        .collect()
}

fn family(args: &GenerateArgs) -> Result<ChainFamily, Failure> {
    let n = || required(args.n, "n");
    Ok(match args.family {
        Family::TwoState => ChainFamily::TwoState { p: required(args.p, "p")? },
        Family::Complete => ChainFamily::Complete { n: n()? },
        Family::RankOne => ChainFamily::RankOne {
            pi: parse_list(&required(args.pi.clone(), "pi")?, "pi")?,
        },
        Family::Cycle => ChainFamily::Cycle { n: n()? },
        Family::Circulant => ChainFamily::Circulant {
            first_row: parse_list(&required(args.row.clone(), "row")?, "row")?,
        },
        Family::RandomIrreducible => ChainFamily::RandomIrreducible {
            n: n()?,
            density: args.density,
            seed: args.seed,
        },
        Family::RandomReversible => ChainFamily::RandomReversible { n: n()?, seed: args.seed },
        Family::RandomSymmetric => ChainFamily::RandomSymmetric { n: n()?, seed: args.seed },
        Family::RandomCirculant => ChainFamily::RandomCirculant { n: n()?, seed: args.seed },
    })
}

fn load(path: &PathBuf) -> Result<ChainAnalysis, Failure> {
    let p = io::read_matrix(path, DEFAULT_ROW_TOL)?;
    Ok(ChainAnalysis::new(&p, DEFAULT_STRUCTURE_TOL)?)
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol >= 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--tol must be a nonnegative number, got {tol}")))
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Analyze { matrix, out, tol } => {
            check_tol(tol)?;
            let a = load(&matrix)?;
            let text = match out.format {
                Format::Json => render::to_json_string(&render::analyze_json(&a, out.log_base, tol)),
                Format::Csv => render::analyze_csv(&a, out.log_base),
                Format::Text => render::analyze_text(&a, out.log_base),
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { matrix, out, tol } => {
            check_tol(tol)?;
            let a = load(&matrix)?;
            let report = report_from_analysis(&a, tol);
            let text = match out.format {
                Format::Json => {
                    render::to_json_string(&render::verify_json(&a, &report, out.log_base))
                }
                Format::Csv => render::verify_csv(&report),
                Format::Text => render::verify_text(&a, &report, out.log_base),
            };
            print!("{text}");
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Command::Generate(args) => {
            let p = family(&args)?.build()?;
            match args.format {
                Format::Json => println!("{}", io::to_json(&p)),
                Format::Csv | Format::Text => print!("{}", io::to_csv(&p)),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Simulate {
            matrix,
            from,
            to,
            samples,
            seed,
            step_cap,
            workers,
            out,
        } => {
            let p = io::read_matrix(&matrix, DEFAULT_ROW_TOL)?;
            for s in [from, to] {
                if s >= p.n() {
                    return Err(ChainError::StateOutOfRange { state: s, n: p.n() }.into());
                }
            }
            let a = ChainAnalysis::new(&p, DEFAULT_STRUCTURE_TOL)?;
            let cfg = McConfig {
                samples,
                seed,
                step_cap,
                workers,
            };
            let pair = mc::estimate(&p, from, to, &cfg)?;
            let view = SimulationView {
                pair: &pair,
                n: p.n(),
                from,
                to,
                workers,
                analytic_entropy: a.trajectory.get(from, to),
                analytic_hitting: if from == to {
                    a.hitting.return_times()[from]
                } else {
                    a.hitting.get(from, to)
                },
            };
            let text = match out.format {
                Format::Json => render::to_json_string(&render::simulate_json(&view, out.log_base)),
                Format::Csv => render::simulate_csv(&view, out.log_base),
                Format::Text => render::simulate_text(&view, out.log_base),
            };
            print!("{text}");
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Chain(ChainError::NotIrreducible)) => {
            eprintln!("error: {}", ChainError::NotIrreducible);
            ExitCode::from(3)
        }
        Err(Failure::Chain(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
