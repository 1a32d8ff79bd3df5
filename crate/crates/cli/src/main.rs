use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fraccable::config::{Run, RunConfig};
use fraccable::emit::{self, Table};
use fraccable::presets::{self, DERIVATIVE_ORDERS, DERIVATIVE_REFERENCE_ERRORS};
use fraccable::solver1d::solve_1d;
use fraccable::solver2d::solve_2d;
use fraccable::stability::{perturbation_1d, perturbation_2d};
use fraccable::study::{
    aligned_derivative_study, run_study, shifted_derivative_study, RefinementStudy, StudyProblem,
};
use fraccable::weights::midpoint_weights_recurrence;
use fraccable::{Error, ErrorNorm};

#[derive(Parser)]
#[command(
    name = "fraccable",
    version,
    about = "Fractional Cable solvers and convergence studies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the midpoint quadrature weights w_0..w_{count-1}.
    Weights {
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Accuracy of the midpoint derivative on a monomial at t = 1/2.
    DerivativeTest {
        #[arg(long)]
        alpha: f64,
        /// Comma-separated steps, each a number or `1/d`.
        #[arg(long, value_delimiter = ',', value_parser = parse_step)]
        taus: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = Convention::Aligned)]
        convention: Convention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// March a 1D problem and dump the trajectory.
    Solve1d(SolveArgs),
    /// March a 2D problem and dump the final level.
    Solve2d(SolveArgs),
    /// Coupled refinement study of the 1D preset.
    Study1d(StudyArgs),
    /// Coupled refinement study of the 2D preset.
    Study2d(StudyArgs),
    /// Random initial perturbations of a source-free preset.
    Stability {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u8).range(1..=2))]
        dim: u8,
        #[arg(long, value_parser = parse_pair, default_value = "0.5,0.5")]
        pair: (f64, f64),
        #[arg(long, default_value_t = 64)]
        n: usize,
        #[arg(long, default_value_t = 16)]
        m: usize,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    /// `u = t^{2+alpha}`, steps with 1/2 on a half-grid point.
    Aligned,
    /// `u = t^{3-alpha}`, evaluated half a step early (reference table layout).
    Shifted,
}

#[derive(clap::Args)]
struct SolveArgs {
    #[arg(long, conflicts_with_all = ["preset", "pair"])]
    config: Option<PathBuf>,
    /// example2 (1D) or example3 (2D).
    #[arg(long)]
    preset: Option<String>,
    #[arg(long, value_parser = parse_pair)]
    pair: Option<(f64, f64)>,
    /// Time levels (overrides the config).
    #[arg(long)]
    n: Option<usize>,
    /// Cells per side (overrides the config).
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    norm: Option<ErrorNorm>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(clap::Args)]
struct StudyArgs {
    /// table2 for the 1D study, table3 for the 2D one.
    #[arg(long)]
    preset: String,
    #[arg(long, value_parser = parse_pair)]
    pair: (f64, f64),
    #[arg(long, default_value_t = 5)]
    levels: usize,
    #[arg(long, default_value_t = ErrorNorm::MaxAll)]
    norm: ErrorNorm,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_step(s: &str) -> Result<f64, String> {
    let s = s.trim();
    let v = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad step `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad step `{s}`"))?;
            a / b
        }
        None => s.parse().map_err(|_| format!("bad step `{s}`"))?,
    };
    if v.is_finite() && v > 0.0 {
        Ok(v)
    } else {
        Err(format!("step must be positive, got `{s}`"))
    }
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| format!("expected `a1,a2`, got `{s}`"))?;
    let a = a.trim().parse().map_err(|_| format!("bad order `{a}`"))?;
    let b = b.trim().parse().map_err(|_| format!("bad order `{b}`"))?;
    Ok((a, b))
}

/// Writes `table` to `dir/name` or, without a directory, to stdout.
fn deliver(table: &Table, out: Option<&Path>, name: &str) -> Result<(), Error> {
    match out {
        Some(dir) => {
            let path = dir.join(name);
            table.write_file(&path)?;
            println!("wrote {}", path.display());
            Ok(())
        }
        None => {
            print!("{}", table.to_csv_string());
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Weights { beta, count, out } => {
            if count == 0 {
                return Err(Error::Domain("count must be positive".into()));
            }
            let w = midpoint_weights_recurrence(beta, count - 1)?;
            deliver(&emit::weights_table(&w), out.as_deref(), "weights.csv")
        }
        Command::DerivativeTest {
            alpha,
            taus,
            convention,
            out,
        } => derivative_test(alpha, taus, convention, out.as_deref()),
        Command::Solve1d(args) => solve(args, false),
        Command::Solve2d(args) => solve(args, true),
        Command::Study1d(args) => study(args, false),
        Command::Study2d(args) => study(args, true),
        Command::Stability {
            seed,
            dim,
            pair: (a1, a2),
            n,
            m,
            trials,
            out,
        } => {
            let outcome = if dim == 1 {
                perturbation_1d(&presets::example2(a1, a2)?, n, m, trials, seed)?
            } else {
                perturbation_2d(&presets::example3(a1, a2)?, n, m, m, trials, seed)?
            };
            let mut table = Table::new(vec!["trial", "ratio", "bound"]);
            for (i, r) in outcome.ratios.iter().enumerate() {
                table.push(vec![
                    i.to_string(),
                    emit::fmt_float(*r),
                    emit::fmt_float(outcome.bound),
                ]);
            }
            deliver(&table, out.as_deref(), "stability.csv")?;
            eprintln!(
                "worst ratio {:.6} against bound {:.6}: {} violation(s)",
                outcome.worst(),
                outcome.bound,
                outcome.violations()
            );
            Ok(())
        }
    }
}

fn derivative_test(
    alpha: f64,
    taus: Option<Vec<f64>>,
    convention: Convention,
    out: Option<&Path>,
) -> Result<(), Error> {
    let reference_row = DERIVATIVE_ORDERS
        .iter()
        .position(|&b| (b - alpha).abs() < 1e-12);
    let table = match convention {
        Convention::Aligned => {
            let taus = taus.unwrap_or_else(|| {
                presets::DERIVATIVE_ALIGNED_DENOMINATORS
                    .iter()
                    .map(|&d| 1.0 / d as f64)
                    .collect()
            });
            emit::derivative_table(&aligned_derivative_study(alpha, &taus)?)
        }
        Convention::Shifted => match taus {
            Some(taus) => emit::derivative_table(&shifted_derivative_study(alpha, &taus)?),
            None => {
                let taus: Vec<f64> = presets::DERIVATIVE_REFERENCE_DENOMINATORS
                    .iter()
                    .map(|&d| 1.0 / d as f64)
                    .collect();
                let rows = shifted_derivative_study(alpha, &taus)?;
                match reference_row {
                    Some(i) => {
                        emit::derivative_reference_table(&rows, &DERIVATIVE_REFERENCE_ERRORS[i])
                    }
                    None => emit::derivative_table(&rows),
                }
            }
        },
    };
    deliver(&table, out, "derivative.csv")
}

fn solve(args: SolveArgs, two_d: bool) -> Result<(), Error> {
    let (run, mut norm, mut out) = match &args.config {
        Some(path) => {
            let cfg = RunConfig::from_file(path)?;
            (cfg.build()?, cfg.norm(), cfg.output.clone())
        }
        None => {
            let (a1, a2) = args
                .pair
                .ok_or_else(|| Error::Config("need --config or --pair".into()))?;
            let preset = args
                .preset
                .clone()
                .unwrap_or_else(|| if two_d { "example3" } else { "example2" }.into());
            let (n, m) = (args.n.unwrap_or(125), args.m.unwrap_or(25));
            let run = match (preset.as_str(), two_d) {
                ("example2", false) => Run::OneD {
                    problem: presets::example2(a1, a2)?,
                    steps: n,
                    cells: m,
                },
                ("example3", true) => Run::TwoD {
                    problem: presets::example3(a1, a2)?,
                    steps: n,
                    cells_x: m,
                    cells_y: m,
                },
                _ => {
                    return Err(Error::Config(format!(
                        "preset {preset} does not fit this command"
                    )))
                }
            };
            (run, ErrorNorm::default(), None)
        }
    };
    if let Some(n) = args.norm {
        norm = n;
    }
    if args.out.is_some() {
        out = args.out.clone();
    }
    match run {
        Run::OneD {
            problem,
            mut steps,
            mut cells,
        } => {
            if two_d {
                return Err(Error::Config(
                    "configured problem is 1D; use solve1d".into(),
                ));
            }
            steps = args.n.unwrap_or(steps);
            cells = args.m.unwrap_or(cells);
            let sol = solve_1d(&problem, steps, cells)?;
            let table = emit::trajectory_table_1d(&sol, problem.exact.as_deref());
            deliver(&table, out.as_deref(), "trajectory.csv")?;
            if let Some(r) = sol.report {
                eprintln!("error ({norm}) = {}", emit::fmt_float(r.get(norm)));
            }
        }
        Run::TwoD {
            problem,
            mut steps,
            mut cells_x,
            mut cells_y,
        } => {
            if !two_d {
                return Err(Error::Config(
                    "configured problem is 2D; use solve2d".into(),
                ));
            }
            steps = args.n.unwrap_or(steps);
            if let Some(m) = args.m {
                (cells_x, cells_y) = (m, m);
            }
            let sol = solve_2d(&problem, steps, cells_x, cells_y)?;
            let table = emit::snapshot_table_2d(&sol, steps, problem.exact.as_deref());
            deliver(&table, out.as_deref(), "snapshot.csv")?;
            if let Some(r) = sol.report {
                eprintln!("error ({norm}) = {}", emit::fmt_float(r.get(norm)));
            }
        }
    }
    Ok(())
}

fn study(args: StudyArgs, two_d: bool) -> Result<(), Error> {
    let (a1, a2) = args.pair;
    let problem = match (args.preset.as_str(), two_d) {
        ("table2", false) => StudyProblem::OneD(presets::example2(a1, a2)?),
        ("table3", true) => StudyProblem::TwoD(presets::example3(a1, a2)?),
        (p, _) => {
            return Err(Error::Config(format!(
                "preset {p} does not fit this command"
            )))
        }
    };
    let report = run_study(&RefinementStudy::coupled(problem, args.levels, args.norm)?)?;
    let name = if two_d { "study2d.csv" } else { "study1d.csv" };
    deliver(&emit::study_table(&report), args.out.as_deref(), name)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_validation() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
