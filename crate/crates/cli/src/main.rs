use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::error::ErrorKind;
use clap::{Parser, Subcommand, ValueEnum};

use hybrid_simplex::bench::{emit_csv, run_bench, run_theta_sweep, BenchReport};
use hybrid_simplex::engine::{run_simplex, EngineConfig, ExecutionMode};
use hybrid_simplex::generator::{generate_dense, GenSpec};
use hybrid_simplex::lp_core::{standardize, LpProblem, PivotRule, SimplexOptions, Standardized, Status, Tolerances};
use hybrid_simplex::mps::{read_mps, to_raw_lp, write_mps};
use hybrid_simplex::partition::LaneLayout;

const EXIT_USAGE: u8 = 1;

#[derive(Parser)]
#[command(name = "hsimplex", version, about = "Dense tableau simplex over partitioned compute lanes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Mps,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Dantzig,
    Bland,
}

impl From<Rule> for PivotRule {
    fn from(rule: Rule) -> Self {
        match rule {
            Rule::Dantzig => PivotRule::Dantzig,
            Rule::Bland => PivotRule::Bland,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Solve an LP and print status, objective and primal values.
    Solve {
        /// MPS file, or `-` for standard input.
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value = "mps")]
        format: Format,
        /// Lane layout, e.g. `cpu:4,dev:0.45,dev:0.55`.
        #[arg(long, default_value = "cpu:1")]
        lanes: LaneLayout,
        /// Share of columns given to device lanes.
        #[arg(long, default_value_t = 0.0)]
        theta: f64,
        #[arg(long, value_enum, default_value = "dantzig")]
        rule: Rule,
        #[arg(long, default_value_t = Tolerances::default().optimality)]
        tol_opt: f64,
        #[arg(long, default_value_t = Tolerances::default().pivot)]
        tol_pivot: f64,
        /// Pivot cap per phase; defaults to 20 (m + n).
        #[arg(long)]
        max_iters: Option<usize>,
        /// Write `iter,k,r,pivot_value,objective` per pivot.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Write a seeded dense random LP as MPS.
    Generate {
        #[arg(long)]
        rows: usize,
        #[arg(long)]
        cols: usize,
        #[arg(long)]
        seed: u64,
        /// Output file; standard output when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time the CPU pool at several lane counts.
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4,8")]
        lane_counts: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        reps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dantzig")]
        rule: Rule,
        #[arg(long)]
        max_iters: Option<usize>,
    },
    /// Time one lane layout across a theta grid.
    Sweep {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        lanes: LaneLayout,
        #[arg(long, default_value_t = 0.1)]
        theta_step: f64,
        #[arg(long, default_value_t = 1)]
        reps: usize,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "dantzig")]
        rule: Rule,
        #[arg(long)]
        max_iters: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn exit_code(status: Status) -> ExitCode {
    ExitCode::from(match status {
        Status::Optimal => 0,
        Status::Unbounded => 2,
        Status::Infeasible => 3,
        Status::IterationLimit => 4,
    })
}

fn load(input: &Path) -> Result<(Standardized, Vec<String>)> {
    let model = read_mps(input)?;
    for warning in &model.warnings {
        eprintln!("warning: {warning}");
    }
    let raw = to_raw_lp(&model)?;
    let names = raw.column_names.clone();
    let standardized = standardize(&raw).with_context(|| format!("standardizing {}", input.display()))?;
    Ok((standardized, names))
}

fn load_problem(input: &Path) -> Result<LpProblem> {
    Ok(load(input)?.0.problem)
}

fn options(rule: Rule, max_iters: Option<usize>) -> SimplexOptions {
    SimplexOptions {
        rule: rule.into(),
        max_iterations: max_iters,
        ..SimplexOptions::default()
    }
}

fn write_output(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => match std::io::stdout().write_all(text.as_bytes()) {
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
            _ => Ok(()),
        },
    }
}

fn print_report(report: &BenchReport) {
    println!("{} ({}x{})", report.label, report.rows, report.cols);
    println!("{:<24} {:>4} {:>6} {:>14} {:>6} {:>8} {:>8}", "config", "p", "theta", "time/iter [s]", "iters", "Sp", "Ep");
    for row in &report.entries {
        println!(
            "{:<24} {:>4} {:>6.2} {:>14.6} {:>6} {:>8.4} {:>7.2}%",
            row.label,
            row.p,
            row.theta,
            row.time_per_iter,
            row.iterations,
            row.speedup,
            100.0 * row.efficiency
        );
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Solve {
            input,
            format: Format::Mps,
            lanes,
            theta,
            rule,
            tol_opt,
            tol_pivot,
            max_iters,
            trace,
        } => {
            if !(tol_opt > 0.0 && tol_pivot > 0.0) {
                bail!("tolerances must be positive");
            }
            let (std, names) = load(&input)?;
            let mut config = EngineConfig::from_layout(&lanes, theta).with_mode(ExecutionMode::Threaded);
            config.options = options(rule, max_iters);
            config.options.tolerances.optimality = tol_opt;
            config.options.tolerances.pivot = tol_pivot;
            config.trace = trace.is_some();
            let run = run_simplex(&std.problem, &config)?;
            let solution = std.transform.recover(&run.solution);

            if let Some(path) = trace {
                let mut text = String::new();
                for p in &solution.pivot_trace {
                    text.push_str(&format!(
                        "{},{},{},{:?},{:?}\n",
                        p.iteration,
                        p.entering_col,
                        p.leaving_row,
                        p.pivot_value,
                        std.transform.objective(p.objective_after)
                    ));
                }
                write_output(Some(&path), &text)?;
            }

            let mut out = String::new();
            let _ = writeln!(out, "status: {}", solution.status);
            if !solution.objective.is_nan() {
                let _ = writeln!(out, "objective: {:.10}", solution.objective);
            }
            let _ = writeln!(
                out,
                "iterations: {} (phase one {})",
                solution.iterations, solution.phase_one_iterations
            );
            let _ = writeln!(out, "time/iter: {:.6} s", run.stats.time_per_iter().as_secs_f64());
            if solution.status == Status::Optimal {
                for (name, value) in names.iter().zip(&solution.primal) {
                    if *value != 0.0 {
                        let _ = writeln!(out, "  {name} = {value:.10}");
                    }
                }
            }
            write_output(None, &out)?;
            Ok(exit_code(solution.status))
        }
        Command::Generate { rows, cols, seed, out } => {
            let problem = generate_dense(&GenSpec::new(rows, cols, seed))?;
            write_output(out.as_deref(), &write_mps(&problem))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bench {
            input,
            lane_counts,
            reps,
            csv,
            rule,
            max_iters,
        } => {
            let problem = load_problem(&input)?;
            let report = run_bench(&problem, &lane_counts, reps, &options(rule, max_iters))?;
            print_report(&report);
            if let Some(path) = csv {
                write_output(Some(&path), &emit_csv(&report)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Sweep {
            input,
            lanes,
            theta_step,
            reps,
            csv,
            rule,
            max_iters,
        } => {
            let problem = load_problem(&input)?;
            let sweep = run_theta_sweep(&problem, &lanes, theta_step, reps, &options(rule, max_iters))?;
            print_report(&sweep.report);
            println!("best theta: {:.2}", sweep.best_theta);
            if let Some(path) = csv {
                write_output(Some(&path), &emit_csv(&sweep.report)?)?;
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
