//! `minimize`: reads a problem file, minimizes its CAD and prints a report.
//!
//! Exit codes: 0 success, 2 parse error, 3 continuity undecided, 4 node
//! budget exhausted, 1 anything else.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use mincad::minimize::{run_exhaustive, run_greedy};
use mincad::problem::Mode;
use mincad::report::{self, Format};
use mincad::{Error, Problem};

#[derive(Parser)]
#[command(name = "minimize", version, about = "Minimize a cylindrical algebraic decomposition")]
struct Args {
    /// Problem file (JSON).
    problem: PathBuf,
    /// greedy or exhaustive; defaults to the problem's own option.
    #[arg(long)]
    mode: Option<Mode>,
    /// text, json or dot.
    #[arg(long, default_value = "text")]
    out: Format,
    /// Node cap for exhaustive exploration.
    #[arg(long)]
    budget_nodes: Option<usize>,
    /// Write the reduction trace (greedy) or graph edges (exhaustive) as JSON.
    #[arg(long)]
    trace: Option<PathBuf>,
}

enum Failure {
    Core(Error),
    Io(String),
    Budget,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn write_trace(path: &Option<PathBuf>, value: serde_json::Value) -> Result<(), Failure> {
    if let Some(p) = path {
        let text = serde_json::to_string_pretty(&value).map_err(|e| Failure::Io(e.to_string()))?;
        std::fs::write(p, text + "\n").map_err(|e| Failure::Io(format!("{}: {e}", p.display())))?;
    }
    Ok(())
}

fn run(args: &Args) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.problem)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.problem.display())))?;
    let mut problem = Problem::parse(&text)?;
    if let Some(n) = args.budget_nodes {
        problem.options.budget_nodes = n;
    }
    match args.mode.unwrap_or(problem.options.mode) {
        Mode::Greedy => {
            let r = run_greedy(&problem)?;
            write_trace(&args.trace, serde_json::json!(r.trace))?;
            let out = match args.out {
                Format::Text => report::greedy_text(&r),
                Format::Json => report::greedy_json(&r),
                Format::Dot => report::greedy_dot(&r),
            };
            print!("{out}");
        }
        Mode::Exhaustive => {
            let g = run_exhaustive(&problem)?;
            write_trace(&args.trace, serde_json::json!(g.edges))?;
            let out = match args.out {
                Format::Text => report::graph_text(&g),
                Format::Json => report::graph_json(&g),
                Format::Dot => report::graph_dot(&g),
            };
            print!("{out}");
            if g.incomplete {
                return Err(Failure::Budget);
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = Args::parse();
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Budget) => {
            eprintln!("minimize: node budget exhausted, graph is incomplete");
            ExitCode::from(4)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("minimize: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Core(e)) => {
            eprintln!("minimize: {e}");
            ExitCode::from(match e {
                Error::Parse(_) | Error::InvalidProblem(_) => 2,
                Error::ContinuityUndecided { .. } => 3,
                _ => 1,
            })
        }
    }
}
