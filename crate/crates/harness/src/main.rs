use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use knotfit_core::Parameterization;
use knotfit_harness::csv_io::{save_csv, write_points};
use knotfit_harness::{
    emit_outputs, run_experiment, AngleUnit, CurveKind, CurveSpec, ExperimentConfig, HarnessError,
    MethodChoice, OutputPaths,
};

/// Cubic B-spline curve approximation with optimizer-selected knots.
#[derive(Debug, Parser)]
#[command(name = "knotfit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Fit a curve over a sweep of iteration counts and write the results.
    Fit(FitArgs),
    /// Write a benchmark curve as CSV without fitting.
    Generate(GenerateArgs),
}

#[derive(Debug, Args)]
struct CurveArgs {
    /// Target curve.
    #[arg(long, value_parser = parse_kind)]
    curve: CurveKind,
    /// Input points for `--curve csv`.
    #[arg(long)]
    csv: Option<PathBuf>,
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    b: Option<f64>,
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_min: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    t_max: Option<f64>,
    #[arg(long)]
    samples: Option<usize>,
    /// Unit of t-min/t-max: deg or rad. Defaults to degrees for the
    /// epitrochoid and Vivaldi curves and radians for the spiral.
    #[arg(long, value_parser = parse_unit)]
    angle_unit: Option<AngleUnit>,
}

impl CurveArgs {
    fn spec(&self) -> CurveSpec {
        let mut spec = CurveSpec::defaults_for(self.curve);
        spec.csv_path = self.csv.clone();
        spec.a = self.a.unwrap_or(spec.a);
        spec.b = self.b.unwrap_or(spec.b);
        spec.h = self.h.unwrap_or(spec.h);
        spec.t_range = (
            self.t_min.unwrap_or(spec.t_range.0),
            self.t_max.unwrap_or(spec.t_range.1),
        );
        spec.sample_count = self.samples.unwrap_or(spec.sample_count);
        spec.unit = self.angle_unit.unwrap_or(spec.unit);
        spec
    }
}

#[derive(Debug, Args)]
struct FitArgs {
    #[command(flatten)]
    curve: CurveArgs,
    #[arg(long, default_value = "dea", value_parser = parse_method)]
    method: MethodChoice,
    /// Comma-separated loop counts, ascending.
    #[arg(long, value_delimiter = ',', required = true)]
    iterations: Vec<usize>,
    /// Dolphin locations (DEA) and population size (GA).
    #[arg(long, default_value_t = 40)]
    locations: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Convergence factor of the first loop.
    #[arg(long, default_value_t = 0.1)]
    pp1: f64,
    /// Exponent of the convergence curve.
    #[arg(long, default_value_t = 1.0)]
    power: f64,
    /// Effective radius of cumulative fitness spreading.
    #[arg(long, default_value_t = 0)]
    re: usize,
    #[arg(long, default_value = "centripetal", value_parser = parse_param)]
    param: Parameterization,
    #[arg(long, default_value_t = 3)]
    degree: usize,
    /// Runs per iteration count, each with its own derived seed.
    #[arg(long, default_value_t = 1)]
    repeats: usize,
    /// Results table as CSV; a JSON copy is written alongside.
    #[arg(long)]
    out_table: PathBuf,
    #[arg(long)]
    out_svg: PathBuf,
    /// Lowest-cost fitted curve as JSON.
    #[arg(long)]
    out_curve: PathBuf,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    #[command(flatten)]
    curve: CurveArgs,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<CurveKind, String> {
    s.parse()
}

fn parse_unit(s: &str) -> Result<AngleUnit, String> {
    s.parse()
}

fn parse_method(s: &str) -> Result<MethodChoice, String> {
    s.parse()
}

fn parse_param(s: &str) -> Result<Parameterization, String> {
    s.parse().map_err(|e: knotfit_core::Error| e.to_string())
}

const EXIT_ALL_INFEASIBLE: u8 = 4;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Fit(args) => fit(args),
        Command::Generate(args) => generate(args).map(|_| ExitCode::SUCCESS),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

fn fit(args: FitArgs) -> Result<ExitCode, HarnessError> {
    let mut config = ExperimentConfig::new(args.curve.spec());
    config.method = args.method;
    config.iteration_sweep = args.iterations;
    config.dea.locations_count = args.locations;
    config.dea.pp_first = args.pp1;
    config.dea.power = args.power;
    config.dea.effective_radius = args.re;
    config.parameterization = args.param;
    config.degree = args.degree;
    config.repeats = args.repeats;
    config.seed = args.seed;

    let outcome = run_experiment(&config)?;
    for row in &outcome.table.rows {
        match row.euclidean_distance {
            Some(d) => eprintln!(
                "{:>6} {:<3} D={:<12.6} cp={:<5} cost={:<12.6} ({:.0} ms)",
                row.iterations,
                row.method,
                d,
                row.control_points,
                row.cost.unwrap_or(f64::NAN),
                row.wall_time_ms
            ),
            None => eprintln!("{:>6} {:<3} infeasible", row.iterations, row.method),
        }
    }
    emit_outputs(
        &outcome.table,
        outcome.best_fit.as_ref(),
        &outcome.points,
        &OutputPaths {
            table: Some(args.out_table),
            svg: Some(args.out_svg),
            curve: Some(args.out_curve),
        },
    )?;
    if outcome.all_infeasible() {
        eprintln!("error: no feasible knot selection was found for any seed");
        return Ok(ExitCode::from(EXIT_ALL_INFEASIBLE));
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(args: GenerateArgs) -> Result<(), HarnessError> {
    let points = args.curve.spec().points()?;
    match args.out {
        Some(path) => save_csv(&points, path),
        None => write_points(&points, io::stdout().lock()),
    }
}
