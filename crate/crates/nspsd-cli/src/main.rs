//! Command-line front end: solve problems from matrix files, generate
//! synthetic instances, run benchmark batches, and export the bundled
//! example problems.
//!
//! Exit codes: 0 on success, 1 on solver/runtime errors, 2 on usage errors
//! (bad flags, malformed input files).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use nspsd::bench::{
    all_scenarios, bench_csv_string, bench_json_string, complex_example, compliance_example,
    gen_instance, run_bench, Regime, Scenario, Shape,
};
use nspsd::io::{read_matrix, write_matrix, MatrixData, SolveReport};
use nspsd::{solve, solve_complex, Error, InitStrategy, SolveOptions};

#[derive(Parser)]
#[command(
    name = "nspsd",
    version,
    about = "Least-squares solver for min ||AX - B||_F over matrices with positive semidefinite symmetric part"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum InitArg {
    /// Scaled-identity start.
    Scaled,
    /// Block-diagonal pre-solve start (default).
    Block,
}

#[derive(Clone, Copy, ValueEnum)]
enum RegimeArg {
    Well,
    Ill,
    Rankdef,
}

impl From<RegimeArg> for Regime {
    fn from(r: RegimeArg) -> Regime {
        match r {
            RegimeArg::Well => Regime::WellConditioned,
            RegimeArg::Ill => Regime::IllConditioned,
            RegimeArg::Rankdef => Regime::RankDeficient,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ShapeArg {
    Square,
    Wide,
    Tall,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Square => Shape::Square,
            ShapeArg::Wide => Shape::Wide,
            ShapeArg::Tall => Shape::Tall,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ExampleArg {
    /// Real 3×12 compliance-estimation pair.
    Compliance,
    /// Complex 4×4 pair.
    Complex,
}

#[derive(Subcommand)]
enum Command {
    /// Solve min ||AX - B||_F with A + A^T (or A + A*) positive semidefinite
    Solve {
        /// Path to the X matrix (.mtx Matrix Market array, or .csv)
        #[arg(long)]
        x: PathBuf,
        /// Path to the B matrix
        #[arg(long)]
        b: PathBuf,
        /// Solve the complex problem (real inputs are promoted)
        #[arg(long)]
        complex: bool,
        /// Write the solution matrix here
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write the JSON report here (also printed to stdout)
        #[arg(long)]
        report: Option<PathBuf>,
        /// Relative-change stopping threshold
        #[arg(long, default_value_t = 1e-6)]
        delta: f64,
        /// Suboptimality budget for non-attained instances
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: usize,
        /// Wall-clock budget in seconds
        #[arg(long = "max-seconds")]
        max_seconds: Option<f64>,
        #[arg(long, value_enum, default_value_t = InitArg::Block)]
        init: InitArg,
    },
    /// Generate one synthetic benchmark instance and write X and B files
    Gen {
        #[arg(long, value_enum)]
        regime: RegimeArg,
        #[arg(long, value_enum)]
        shape: ShapeArg,
        /// Larger dimension of the generated pair
        #[arg(long = "max-dim", default_value_t = 60)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Trial index within the scenario's random stream
        #[arg(long, default_value_t = 0)]
        trial: usize,
        /// Files are written as <prefix>_x.mtx and <prefix>_b.mtx
        #[arg(long = "out-prefix")]
        out_prefix: String,
    },
    /// Run benchmark scenarios and write an aggregated CSV table
    Bench {
        /// "all" or a comma-separated list like "well/square,rankdef/tall"
        #[arg(long, default_value = "all")]
        scenarios: String,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long = "max-dim", default_value_t = 60)]
        max_dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// CSV output path
        #[arg(long)]
        out: PathBuf,
        /// Optional JSON mirror of the table
        #[arg(long = "json-out")]
        json_out: Option<PathBuf>,
    },
    /// Write a bundled example problem to matrix files
    Example {
        #[arg(long, value_enum)]
        name: ExampleArg,
        /// Files are written as <prefix>_x.mtx and <prefix>_b.mtx
        #[arg(long = "out-prefix")]
        out_prefix: String,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn run(command: Command) -> Result<(), Error> {
    match command {
        Command::Solve {
            x,
            b,
            complex,
            out,
            report,
            delta,
            epsilon,
            max_iter,
            max_seconds,
            init,
        } => {
            let opts = SolveOptions {
                delta,
                max_iterations: max_iter,
                max_seconds,
                epsilon,
                rank_tolerance: None,
                init: match init {
                    InitArg::Scaled => InitStrategy::ScaledIdentity,
                    InitArg::Block => InitStrategy::BlockDiagonal,
                },
            };
            let x_data = read_matrix(&x)?;
            let b_data = read_matrix(&b)?;
            let (solution_data, report_struct) = if complex {
                let xc = x_data.into_complex();
                let bc = b_data.into_complex();
                let sol = solve_complex(&xc, &bc, &opts)?;
                let rep = SolveReport::from_complex(&sol, &xc, &bc)?;
                (MatrixData::Complex(sol.a), rep)
            } else {
                let xr = require_real(x_data, &x)?;
                let br = require_real(b_data, &b)?;
                let sol = solve(&xr, &br, &opts)?;
                let rep = SolveReport::from_real(&sol, &xr, &br)?;
                (MatrixData::Real(sol.a), rep)
            };
            let json = report_struct.to_json()?;
            println!("{json}");
            if let Some(out_path) = out {
                write_matrix(&solution_data, &out_path)?;
            }
            if let Some(report_path) = report {
                std::fs::write(&report_path, format!("{json}\n")).map_err(|e| Error::Io {
                    path: report_path.display().to_string(),
                    source: e,
                })?;
            }
            Ok(())
        }
        Command::Gen {
            regime,
            shape,
            max_dim,
            seed,
            trial,
            out_prefix,
        } => {
            let scenario = Scenario {
                regime: regime.into(),
                shape: shape.into(),
                max_dim,
                trials: trial + 1,
                seed,
            };
            let (x, b) = gen_instance(&scenario, trial)?;
            let x_path = format!("{out_prefix}_x.mtx");
            let b_path = format!("{out_prefix}_b.mtx");
            write_matrix(&MatrixData::Real(x), &x_path)?;
            write_matrix(&MatrixData::Real(b), &b_path)?;
            println!("{x_path}");
            println!("{b_path}");
            Ok(())
        }
        Command::Bench {
            scenarios,
            trials,
            max_dim,
            seed,
            out,
            json_out,
        } => {
            let list = parse_scenarios(&scenarios, max_dim, trials, seed)?;
            let rows = run_bench(&list, &SolveOptions::default())?;
            for row in &rows {
                if row.failures > 0 {
                    eprintln!(
                        "warning: {} trial(s) of {} failed and were excluded",
                        row.failures, row.scenario
                    );
                }
            }
            let csv = bench_csv_string(&rows);
            std::fs::write(&out, &csv).map_err(|e| Error::Io {
                path: out.display().to_string(),
                source: e,
            })?;
            if let Some(json_path) = json_out {
                let json = bench_json_string(&rows)?;
                std::fs::write(&json_path, format!("{json}\n")).map_err(|e| Error::Io {
                    path: json_path.display().to_string(),
                    source: e,
                })?;
            }
            print!("{csv}");
            Ok(())
        }
        Command::Example { name, out_prefix } => {
            let (x_data, b_data) = match name {
                ExampleArg::Compliance => {
                    let (x, b) = compliance_example();
                    (MatrixData::Real(x), MatrixData::Real(b))
                }
                ExampleArg::Complex => {
                    let (x, b) = complex_example();
                    (MatrixData::Complex(x), MatrixData::Complex(b))
                }
            };
            let x_path = format!("{out_prefix}_x.mtx");
            let b_path = format!("{out_prefix}_b.mtx");
            write_matrix(&x_data, &x_path)?;
            write_matrix(&b_data, &b_path)?;
            println!("{x_path}");
            println!("{b_path}");
            Ok(())
        }
    }
}

fn require_real(data: MatrixData, path: &std::path::Path) -> Result<nspsd::DenseMatrix, Error> {
    match data {
        MatrixData::Real(m) => Ok(m),
        MatrixData::Complex(_) => Err(Error::Argument(format!(
            "{} holds a complex matrix; pass --complex to solve the complex problem",
            path.display()
        ))),
    }
}

fn parse_scenarios(
    spec: &str,
    max_dim: usize,
    trials: usize,
    seed: u64,
) -> Result<Vec<Scenario>, Error> {
    let all = all_scenarios(max_dim, trials, seed);
    if spec.trim().eq_ignore_ascii_case("all") {
        return Ok(all);
    }
    let mut picked = Vec::new();
    for token in spec.split(',') {
        let token = token.trim();
        let wanted = format!("{token}/{max_dim}");
        match all.iter().find(|s| s.id() == wanted) {
            Some(s) => picked.push(*s),
            None => {
                return Err(Error::Argument(format!(
                    "unknown scenario {token:?}; use \"all\" or regime/shape pairs like \
                     \"well/square\" with regimes well|ill|rankdef and shapes square|wide|tall"
                )));
            }
        }
    }
    Ok(picked)
}
