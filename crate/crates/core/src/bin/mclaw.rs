//! Command-line front end. Run `mclaw help` for the subcommands.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use meshless_claw::bench::ProblemId;
use meshless_claw::cli::{self, ErrorReference, FaultOptions};
use meshless_claw::Error;

const CONFIG_HELP: &str = "\
Configuration files hold one `key = value` per line; `#` starts a comment.

  problem         burgers_corner | burgers_smooth | rotating_wave (required)
  algorithm       none | constant | adaptive, or 1 | 2 | 3      [adaptive]
  node_kind       halton | grid | random                        [halton]
  h               node spacing                                  [per problem]
  T               final time, an integer multiple of dt         [per problem]
  v0              characteristic speed max |F'(u0)|             [per problem]
  dt              time step                                     [0.2 h / v0]
  mu              viscosity factor                              [0.5 h v0]
  n_min, n_max    influence set sizes                           [10, 100]
  n_F             fault indicator stencil size                  [10]
  C1, C2          fault detection thresholds                    [1, 2]
  C3              viscosity ramp width in units of h            [5]
  seed            seed for random nodes                         [0]
  output_dir      output directory                              [out]
  reference       reference grid for the error report           [none]
  snapshot_every  steps between solution snapshots, 0 = off     [0]

Problem defaults: burgers_corner h = 0.01, T = 0.5; burgers_smooth
h = 0.0025, T = 0.1; rotating_wave h = 0.01, T = 1; v0 = 1 for all.

Exit codes: 0 ok, 1 usage, 2 data error, 3 numerical failure.";

#[derive(Parser)]
#[command(name = "mclaw", version, about = "Positive meshless schemes for scalar conservation laws", after_help = CONFIG_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a benchmark problem and write solution, diagnostics and metadata.
    Run { config: PathBuf },
    /// Print the node set of a configuration as CSV `x1,..,xd,boundary`.
    Nodes {
        config: PathBuf,
        /// Write to this file instead of standard output.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Detect faults in a scattered solution CSV.
    Faults(FaultArgs),
    /// Compare a solution CSV with a reference grid or the exact solution.
    Errors(ErrorArgs),
}

#[derive(Args)]
struct FaultArgs {
    solution: PathBuf,
    /// Node spacing of the dataset.
    #[arg(long)]
    h: f64,
    #[arg(long = "nF", default_value_t = 10)]
    n_f: usize,
    #[arg(long = "C1", default_value_t = 1.0)]
    c1: f64,
    #[arg(long = "C2", default_value_t = 2.0)]
    c2: f64,
    #[arg(long = "C3", default_value_t = 5.0)]
    c3: f64,
    /// Viscosity factor of the mu field [0.5 h].
    #[arg(long)]
    mu: Option<f64>,
    /// Use this benchmark's (possibly periodic) domain instead of the bounding box.
    #[arg(long)]
    problem: Option<ProblemId>,
    /// Directory for faults.csv and mu.csv.
    #[arg(long, default_value = ".")]
    out: PathBuf,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("against").required(true).args(["reference", "exact"]))]
struct ErrorArgs {
    solution: PathBuf,
    /// Reference grid file.
    #[arg(long)]
    reference: Option<PathBuf>,
    /// Problem whose exact solution is the reference.
    #[arg(long, requires = "t")]
    exact: Option<ProblemId>,
    /// Time of the exact solution.
    #[arg(long)]
    t: Option<f64>,
    /// Also write the report as CSV `e1,e2,n`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn dispatch(cmd: Command) -> Result<(), Error> {
    match cmd {
        Command::Run { config } => {
            let cfg = cli::parse_config(&config)?;
            let s = cli::cmd_run(&cfg)?;
            println!(
                "{} nodes, {} steps, {:.1} s, {} nodes with dropped constraints, max influence set {}",
                s.nodes, s.steps, s.wall_s, s.dropped_nodes, s.max_influence
            );
            if let Some(r) = s.report {
                println!("E1 = {:.4e}  E2 = {:.4e}", r.e1, r.e2);
            }
            println!("outputs in {}", cfg.output_dir.display());
        }
        Command::Nodes { config, output } => {
            let text = cli::cmd_nodes(&cli::parse_config(&config)?)?;
            match output {
                Some(p) => std::fs::write(&p, text).map_err(|e| Error::Io { path: p, source: e })?,
                None => print!("{text}"),
            }
        }
        Command::Faults(a) => {
            let opts = FaultOptions {
                h: a.h,
                n_f: a.n_f,
                n_max: 100,
                c1: a.c1,
                c2: a.c2,
                c3: a.c3,
                mu: a.mu,
                problem: a.problem,
            };
            let f = cli::cmd_faults(&a.solution, &opts, &a.out)?;
            println!("{} fault nodes (alpha1 = {:e}, alpha2 = {:e})", f.len(), f.alpha1, f.alpha2);
        }
        Command::Errors(a) => {
            let reference = match (a.reference, a.exact) {
                (Some(p), _) => ErrorReference::Grid(p),
                (None, Some(problem)) => ErrorReference::Exact { problem, t: a.t.expect("clap enforces --t") },
                (None, None) => unreachable!("clap enforces one of --reference and --exact"),
            };
            let r = cli::cmd_errors(&a.solution, &reference)?;
            println!("E1 = {:e}\nE2 = {:e}\nN = {}", r.e1, r.e2, r.n);
            if let Some(p) = a.out {
                std::fs::write(&p, cli::error_report_csv(&r)).map_err(|e| Error::Io { path: p, source: e })?;
            }
        }
    }
    Ok(())
}
