use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use casimir::checks::{criterion, Suite};
use casimir::config::{Format, SCHEMA};
use casimir::exec::PoolExecutor;
use casimir::output::{write_integrand, write_records};
use casimir::run::{exit_code, Overrides, Scenario, Status};
use casimir::{CliError, CliResult};
use clap::{Args, Parser, Subcommand};

/// Exit status for malformed command lines.
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(name = "casimir", version, about = "Casimir energies from scattering amplitudes and translation matrices")]
#[command(after_help = "Exit status: 0 converged, 2 some point reached a cap, 1 error, 64 usage error.\n\
Threads: CASIMIR_THREADS (default: available parallelism).")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Energy (or force) of the configuration as given.
    Energy(RunArgs),
    /// One record per point of the configured sweep grid.
    Sweep(RunArgs),
    /// Run acceptance checks and print one line per criterion.
    Check {
        #[arg(value_enum)]
        suite: Suite,
    },
    /// Dump ln det against κ (or p) for one configuration.
    Integrand {
        #[command(flatten)]
        run: RunArgs,
        /// Number of log-spaced sample points.
        #[arg(long, default_value_t = 64)]
        points: usize,
        /// Partial-wave order; defaults to the starting order of the
        /// truncation schedule.
        #[arg(long)]
        order: Option<usize>,
    },
    /// Print the JSON schema of run configurations.
    Schema,
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    config: PathBuf,
    /// Output file; defaults to the configured path, else standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Relative tolerance for quadrature and truncation.
    #[arg(long)]
    rtol: Option<f64>,
    /// Largest partial-wave order.
    #[arg(long)]
    lmax_cap: Option<usize>,
}

struct Target {
    path: Option<PathBuf>,
    format: Format,
}

impl RunArgs {
    fn scenario(&self) -> CliResult<Scenario> {
        Scenario::from_file(&self.config, Overrides { rtol: self.rtol, lmax_cap: self.lmax_cap })
    }

    fn target(&self, s: &Scenario) -> Target {
        let path = self.out.clone().or_else(|| {
            let base = self.config.parent().unwrap_or(Path::new("."));
            s.config.output.path.as_ref().map(|p| base.join(p))
        });
        let by_extension = path
            .as_ref()
            .and_then(|p| p.extension())
            .filter(|e| e.eq_ignore_ascii_case("json"))
            .map(|_| Format::Json);
        let format = self.format.or(s.config.output.format).or(by_extension).unwrap_or_default();
        Target { path, format }
    }
}

fn open(target: &Target) -> CliResult<Box<dyn Write>> {
    Ok(match &target.path {
        Some(p) => Box::new(BufWriter::new(File::create(p).map_err(|source| CliError::Io { path: p.clone(), source })?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Schema => {
            print!("{SCHEMA}");
            Ok(0)
        }
        Command::Check { suite } => {
            let exec = PoolExecutor::from_env()?;
            let mut failed = 0;
            for n in suite.criteria() {
                let o = criterion(n, &exec);
                if !o.passed() {
                    failed += 1;
                }
                println!("{o}");
            }
            Ok(if failed == 0 { 0 } else { 1 })
        }
        Command::Energy(args) => records(&args, false),
        Command::Sweep(args) => records(&args, true),
        Command::Integrand { run, points, order } => {
            let s = run.scenario()?;
            let exec = PoolExecutor::from_env()?;
            let table = s.integrand_table(points, order, &exec)?;
            let target = run.target(&s);
            write_integrand(open(&target)?, target.format, &table)?;
            Ok(0)
        }
    }
}

fn records(args: &RunArgs, sweep: bool) -> CliResult<u8> {
    let s = args.scenario()?;
    let exec = PoolExecutor::from_env()?;
    let recs = if sweep { s.run_sweep(&exec)? } else { vec![s.run_single(&exec)] };
    let target = args.target(&s);
    let mut w = open(&target)?;
    write_records(&mut w, target.format, &s.config, &recs)?;
    w.flush().map_err(|e| CliError::Output(e.to_string()))?;
    for r in recs.iter().filter(|r| r.status != Status::Converged) {
        eprintln!("{} = {:e}: {}", r.sweep_param, r.value, r.message.as_deref().unwrap_or("not converged"));
    }
    Ok(exit_code(&recs) as u8)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if matches!(e, CliError::Usage(_)) { EXIT_USAGE } else { 1 })
        }
    }
}
