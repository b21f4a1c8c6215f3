use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use trackcoh::cohomology::Fault;
use trackcoh::jobs::{self, Kind, Outcome};

#[derive(Parser)]
#[command(name = "trackcoh", version, about = "Resolutions and cohomology of finite n-track categories")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the JSON report here; without it the report goes to stdout and the summary to stderr.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Schema and structural checks on any input document.
    Validate { input: PathBuf },
    /// Build the comonad resolution and audit it.
    Resolve {
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// Cohomology groups up to a degree.
    Cohomology {
        input: PathBuf,
        #[arg(long)]
        coeffs: String,
        #[arg(long, value_enum, default_value_t = KindArg::Alg)]
        kind: KindArg,
        #[arg(long, default_value_t = 1)]
        degree: usize,
        #[arg(long, default_value_t = 2)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        bound: usize,
    },
    /// The long exact sequence with an exactness verdict per slot.
    Les {
        input: PathBuf,
        #[arg(long)]
        coeffs: String,
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 2)]
        bound: usize,
        /// Corrupt the connecting map before checking exactness.
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    Alg,
    Aq,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Zero,
    Double,
}

fn run(cmd: Command) -> Outcome {
    match cmd {
        Command::Validate { input } => jobs::validate(&input),
        Command::Resolve { input, depth, bound } => jobs::resolve(&input, depth, bound),
        Command::Cohomology { input, coeffs, kind, degree, depth, bound } => {
            let kind = match kind {
                KindArg::Alg => Kind::Alg,
                KindArg::Aq => Kind::Aq,
            };
            jobs::cohomology(&input, &coeffs, kind, degree, depth, bound)
        }
        Command::Les { input, coeffs, depth, bound, inject_fault } => {
            let fault = match inject_fault {
                None => Fault::None,
                Some(FaultArg::Zero) => Fault::ZeroConnecting,
                Some(FaultArg::Double) => Fault::DoubleConnecting,
            };
            jobs::les_report(&input, &coeffs, depth, bound, fault)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let outcome = run(cli.command);
    let json = jobs::render(&outcome.report);
    let timing = format!("wall-clock {:.3}s\n", start.elapsed().as_secs_f64());
    match &cli.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &json) {
                eprintln!("cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
            let _ = write!(std::io::stdout(), "{}{timing}", outcome.summary);
        }
        None => {
            let _ = std::io::stdout().write_all(json.as_bytes());
            let _ = write!(std::io::stderr(), "{}{timing}", outcome.summary);
        }
    }
    ExitCode::from(outcome.exit_code as u8)
}
