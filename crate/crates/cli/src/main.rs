use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use afcond_cli::commands::{run, Input};
use afcond_cli::corpus::run_corpus;
use afcond_cli::report::{Flags, Report};

#[derive(Parser)]
#[command(
    name = "afcond",
    version,
    about = "Conormal spaces and the A_f condition, exactly"
)]
struct Cli {
    /// Print the report as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Groebner reduction-step budget.
    #[arg(long, global = true, env = "AFCOND_MAX_STEPS")]
    max_steps: Option<u64>,
    /// Truncation order for arc series.
    #[arg(long, global = true)]
    precision: Option<usize>,
    /// Largest exponent for generated monomial arcs.
    #[arg(long, global = true)]
    arc_degree_bound: Option<u32>,
    /// Parallel workers for `corpus`.
    #[arg(long, global = true, default_value_t = 1)]
    workers: usize,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reduced Groebner basis of [ideal] (or the equations).
    Gb { file: PathBuf },
    /// Krull dimension of [ideal] (or the equations).
    Dim { file: PathBuf },
    /// Conormal space C(X) and its fiber over 0.
    Conormal { file: PathBuf },
    /// Relative conormal C(X,f) and its fiber over 0.
    Relconormal { file: PathBuf },
    /// Fiber of C(X,f) over [point].
    Fiber { file: PathBuf },
    /// Join of the covector [covector] with the cone [set].
    Join { file: PathBuf },
    /// Check C(X,f)_0 against the exceptional image plus the join.
    Decompose { file: PathBuf },
    /// A_f along the parameter space by exact elimination.
    AfExact { file: PathBuf },
    /// A_f by strict dependence along arcs on X.
    AfArcs { file: PathBuf },
    /// Whitney condition for the special fiber along arcs.
    WhitneyFiber { file: PathBuf },
    /// Fiber C_y of the Rees presentation over [point].
    ReesFiber { file: PathBuf },
    /// Compare C_y with C(M(y)) before and after saturation.
    RemarkCheck { file: PathBuf },
    /// Compare the central fiber components with C(M(0)).
    ComponentsCheck { file: PathBuf },
    /// Closed-form Whitney criterion for w^a - y^b v^c - v^d.
    Trotman { a: u32, b: u32, c: u32, d: u32 },
    /// Dimension hypothesis, Whitney fiber check and A_f conclusion.
    Pipeline { file: PathBuf },
    /// Run every *.prob in a directory against its .expect sidecar.
    Corpus { dir: PathBuf },
}

impl Command {
    fn split(self) -> (&'static str, Option<PathBuf>) {
        use Command::*;
        match self {
            Gb { file } => ("gb", Some(file)),
            Dim { file } => ("dim", Some(file)),
            Conormal { file } => ("conormal", Some(file)),
            Relconormal { file } => ("relconormal", Some(file)),
            Fiber { file } => ("fiber", Some(file)),
            Join { file } => ("join", Some(file)),
            Decompose { file } => ("decompose", Some(file)),
            AfExact { file } => ("af-exact", Some(file)),
            AfArcs { file } => ("af-arcs", Some(file)),
            WhitneyFiber { file } => ("whitney-fiber", Some(file)),
            ReesFiber { file } => ("rees-fiber", Some(file)),
            RemarkCheck { file } => ("remark-check", Some(file)),
            ComponentsCheck { file } => ("components-check", Some(file)),
            Pipeline { file } => ("pipeline", Some(file)),
            Trotman { .. } | Corpus { .. } => unreachable!("handled separately"),
        }
    }
}

fn emit(report: &Report, json: bool) -> ExitCode {
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    ExitCode::from(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let defaults = Flags::default();
    let flags = Flags {
        max_steps: cli.max_steps.unwrap_or(defaults.max_steps),
        precision: cli.precision.unwrap_or(defaults.precision),
        arc_degree_bound: cli.arc_degree_bound.unwrap_or(defaults.arc_degree_bound),
    };
    let report = match cli.command {
        Command::Corpus { dir } => run_corpus(&dir, &flags, cli.workers, cli.timing),
        Command::Trotman { a, b, c, d } => {
            run("trotman", &Input::Trotman([a, b, c, d]), &flags, cli.timing)
        }
        other => {
            let (name, file) = other.split();
            let file = file.expect("file commands carry a path");
            match std::fs::read(&file) {
                Ok(bytes) => {
                    let input = Input::File {
                        name: file.display().to_string(),
                        bytes,
                    };
                    run(name, &input, &flags, cli.timing)
                }
                Err(e) => {
                    eprintln!("afcond: cannot read {}: {e}", file.display());
                    return ExitCode::from(1);
                }
            }
        }
    };
    emit(&report, cli.json)
}
