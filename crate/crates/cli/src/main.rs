use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use revival::scenario::{run_scenario, sweep, write_sweep_csv, ScenarioConfig};
use revival::selftest;
use revival::Error;

/// Two-qubit entanglement under classical noise: scenario runner.
#[derive(Parser)]
#[command(name = "revival", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one scenario and write its time series as CSV.
    Simulate(Common),
    /// Run a scenario once per value of a model parameter.
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Parameter to vary, e.g. `g`, `width`, `correlation_time`.
        #[arg(long)]
        param: String,
        /// Comma-separated values; an empty list produces no output.
        #[arg(long, default_value = "")]
        values: String,
    },
    /// Run the acceptance criteria and print one line per criterion.
    Selftest {
        /// Comma-separated criterion numbers (default: all).
        #[arg(long)]
        only: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Output file (default: standard output).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed in the config.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
}

const EXIT_CONFIG: u8 = 1;
const EXIT_NUMERICAL: u8 = 2;
const EXIT_SELFTEST: u8 = 3;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Convergence { .. }
        | Error::NotHermitian(_)
        | Error::NotPositive(_)
        | Error::InvalidTrace(_) => EXIT_NUMERICAL,
        _ => EXIT_CONFIG,
    }
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>, Error> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse().map_err(|_| Error::Config {
                field: what.to_string(),
                message: format!("cannot parse `{s}`"),
            })
        })
        .collect()
}

fn load(common: &Common) -> Result<ScenarioConfig, Error> {
    let mut cfg = ScenarioConfig::from_path(&common.config)?;
    if let Some(seed) = common.seed {
        cfg.seed = seed;
        cfg.validate()?;
    }
    Ok(cfg)
}

fn emit(out: &Option<PathBuf>, bytes: &[u8]) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, bytes).map_err(|e| Error::Config {
            field: "--out".to_string(),
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn in_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        if n == 0 {
            return Err(Error::Config {
                field: "--threads".to_string(),
                message: "must be positive".to_string(),
            });
        }
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| Error::Config {
        field: "--threads".to_string(),
        message: e.to_string(),
    })?;
    Ok(pool.install(f))
}

fn run(command: Command) -> Result<u8, Error> {
    match command {
        Command::Simulate(common) => {
            let cfg = load(&common)?;
            let table = in_pool(common.threads, || run_scenario(&cfg))??;
            emit(&common.out, table.to_csv_string().as_bytes())?;
            Ok(0)
        }
        Command::Sweep {
            common,
            param,
            values,
        } => {
            let cfg = load(&common)?;
            let values: Vec<f64> = parse_list(&values, "--values")?;
            let blocks = in_pool(common.threads, || sweep(&cfg, &param, &values))??;
            let mut buf = Vec::new();
            write_sweep_csv(&param, &blocks, &mut buf)?;
            emit(&common.out, &buf)?;
            Ok(0)
        }
        Command::Selftest { only, out, threads } => {
            let ids: Vec<u8> = match only {
                Some(list) => parse_list(&list, "--only")?,
                None => (1..=10).collect(),
            };
            let mut text = String::new();
            let mut all_passed = true;
            for id in ids {
                let report =
                    in_pool(threads, || selftest::criterion(id))?.ok_or_else(|| Error::Config {
                        field: "--only".to_string(),
                        message: format!("no criterion {id}"),
                    })?;
                all_passed &= report.passed();
                let line = format!("{report}\n");
                if out.is_none() {
                    print!("{line}");
                }
                text.push_str(&line);
            }
            if out.is_some() {
                emit(&out, text.as_bytes())?;
            }
            Ok(if all_passed { 0 } else { EXIT_SELFTEST })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
