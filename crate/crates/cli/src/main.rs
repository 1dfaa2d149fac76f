//! `centrality`: forecast rationality tests and confidence sets for the
//! measure of central tendency behind a forecast.
//!
//! Exit codes: 0 success, 1 usage error, 2 data or numeric error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use centrality::io::{
    emit_confidence_set, grid_from_json, load_column, load_csv, random_walk_forecasts, render_svg,
    simulation_json, test_json, write_dataset_csv, TestReport,
};
use centrality::numerics::RandomStream;
use centrality::simulation::{
    build_dataset, optimal_forecasts, run_experiment, simulate_path, Dgp, DgpConfig, Distortion,
    DistortionKind, ExperimentKind, ExperimentSpec, InstrumentSet,
};
use centrality::{
    confidence_set, rationality_test, ConfidenceSetOptions, ForecastDataset, Functional, Kernel,
};
use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(
    name = "centrality",
    version,
    about = "Rationality tests for mean, median and mode forecasts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test rationality of the forecasts for one functional.
    Test(TestArgs),
    /// Confidence set for the central-tendency weights on a simplex grid.
    Cset(CsetArgs),
    /// Simulate a design: write a dataset and/or run a Monte Carlo experiment.
    Simulate(SimulateArgs),
    /// Render a confidence-set JSON file as an SVG ternary diagram.
    Plot(PlotArgs),
}

#[derive(Args, Debug)]
struct DataArgs {
    /// CSV file with `y`, `x` and instrument columns.
    #[arg(long)]
    input: PathBuf,
    /// Instrument columns, comma separated.
    #[arg(long, value_delimiter = ',')]
    instruments: Vec<String>,
    /// Add a constant instrument named `const`.
    #[arg(long)]
    with_const: bool,
    /// Integer column of cluster labels.
    #[arg(long)]
    cluster: Option<String>,
    /// Treat this column as a price series and test random-walk forecasts
    /// X_t = p_t of Y_t = p_{t+1} with instruments (1, X_t).
    #[arg(long, conflicts_with_all = ["instruments", "with_const", "cluster"])]
    prices: Option<String>,
    /// Significance levels, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.10,0.05")]
    alpha: Vec<f64>,
    /// Bandwidth override; rule of thumb otherwise.
    #[arg(long)]
    bandwidth: Option<f64>,
    #[arg(long, default_value = "gaussian")]
    kernel: Kernel,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct TestArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value = "mode")]
    functional: Functional,
}

#[derive(Args, Debug)]
struct CsetArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Grid resolution m; the grid has (m+1)(m+2)/2 points.
    #[arg(long, default_value_t = 50)]
    grid_m: usize,
    #[arg(long)]
    out_csv: Option<PathBuf>,
    #[arg(long)]
    out_svg: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Design: a (iid), b (heteroskedastic), c (AR(1)), d (AR-GARCH).
    #[arg(long, default_value = "a")]
    dgp: Dgp,
    /// Moment skewness of the innovations.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    skewness: f64,
    #[arg(long, default_value_t = 500)]
    sample_size: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Forecast weights on (mean, median, mode) of the innovation.
    #[arg(long, value_delimiter = ',', default_value = "0,0,1")]
    beta: Vec<f64>,
    /// Instrument set: 1 = (1), 2 = (1, X), 3 = (1, X, extra).
    #[arg(long, default_value = "2")]
    instrument_set: InstrumentSet,
    /// Write one simulated dataset (stream 0 of the seed) as CSV.
    #[arg(long)]
    emit_dataset: Option<PathBuf>,
    /// Run a Monte Carlo experiment.
    #[arg(long)]
    experiment: Option<ExperimentKind>,
    #[arg(long, default_value_t = 1000)]
    replications: usize,
    /// Test level (size, power; default 0.05) or one minus the confidence
    /// level (coverage; default 0.10).
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long, default_value = "bias")]
    distortion: DistortionKind,
    #[arg(long, default_value_t = 0.0)]
    kappa: f64,
    /// Evaluate coverage at this θ instead of the implied one.
    #[arg(long, value_delimiter = ',')]
    theta: Option<Vec<f64>>,
    #[arg(long, default_value = "gaussian")]
    kernel: Kernel,
    #[arg(long)]
    out_json: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct PlotArgs {
    /// Confidence-set JSON written by `cset`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out_svg: PathBuf,
}

enum Failure {
    Usage(String),
    Data(String),
}

impl From<centrality::Error> for Failure {
    fn from(e: centrality::Error) -> Self {
        Failure::Data(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn check_alphas(alpha: &[f64]) -> Result<(), Failure> {
    if alpha.is_empty() {
        return Err(usage("--alpha needs at least one level"));
    }
    match alpha.iter().find(|a| !(**a > 0.0 && **a < 1.0)) {
        Some(a) => Err(usage(format!("alpha level {a} must lie in (0, 1)"))),
        None => Ok(()),
    }
}

fn load(args: &DataArgs) -> Result<ForecastDataset, Failure> {
    check_alphas(&args.alpha)?;
    if let Some(d) = args.bandwidth {
        if !(d > 0.0 && d.is_finite()) {
            return Err(usage(format!("--bandwidth must be positive, got {d}")));
        }
    }
    if let Some(col) = &args.prices {
        return Ok(random_walk_forecasts(&load_column(&args.input, col)?)?);
    }
    if args.instruments.is_empty() && !args.with_const {
        return Err(usage(
            "select instruments with --instruments and/or --with-const",
        ));
    }
    Ok(load_csv(
        &args.input,
        &args.instruments,
        args.with_const,
        args.cluster.as_deref(),
    )?)
}

fn write_or_print(path: Option<&Path>, body: &str) -> Result<(), Failure> {
    match path {
        Some(p) => {
            std::fs::write(p, body).map_err(|e| Failure::Data(format!("{}: {e}", p.display())))
        }
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn run_test(args: TestArgs) -> Result<(), Failure> {
    let data = load(&args.data)?;
    let result = rationality_test(
        args.functional,
        &data,
        args.data.bandwidth,
        args.data.kernel,
    )?;
    let report = TestReport::new(result, data.instrument_names().to_vec(), &args.data.alpha)?;
    write_or_print(args.data.out_json.as_deref(), &test_json(&report)?)
}

fn run_cset(args: CsetArgs) -> Result<(), Failure> {
    if args.grid_m == 0 {
        return Err(usage("--grid-m must be at least 1"));
    }
    let data = load(&args.data)?;
    let opts = ConfidenceSetOptions {
        resolution: args.grid_m,
        alpha_levels: args.data.alpha.clone(),
        bandwidth: args.data.bandwidth,
        kernel: args.data.kernel,
        clustered: args.data.cluster.is_some(),
    };
    let grid = confidence_set(&data, &opts)?;
    let json = centrality::io::grid_json(&grid)?;
    emit_confidence_set(
        &grid,
        None,
        args.out_csv.as_deref(),
        args.out_svg.as_deref(),
    )?;
    write_or_print(args.data.out_json.as_deref(), &json)
}

fn run_simulate(args: SimulateArgs) -> Result<(), Failure> {
    if args.emit_dataset.is_none() && args.experiment.is_none() {
        return Err(usage(
            "nothing to do: pass --emit-dataset and/or --experiment",
        ));
    }
    let beta: [f64; 3] = args
        .beta
        .as_slice()
        .try_into()
        .map_err(|_| usage("--beta takes three comma-separated weights"))?;
    let alpha = args.alpha.unwrap_or(match args.experiment {
        Some(ExperimentKind::Coverage) => 0.10,
        _ => 0.05,
    });
    check_alphas(&[alpha])?;
    let theta = match &args.theta {
        Some(t) => Some(
            <[f64; 3]>::try_from(t.as_slice()).map_err(|_| usage("--theta takes three weights"))?,
        ),
        None => None,
    };
    let config = DgpConfig::new(args.dgp, args.skewness, args.sample_size, args.seed);
    config.validate()?;

    if let Some(path) = &args.emit_dataset {
        let sim = simulate_path(&config, RandomStream::new(args.seed, 0))?;
        let x = optimal_forecasts(&sim, &beta)?;
        write_dataset_csv(path, &build_dataset(&sim, x, args.instrument_set)?)?;
    }
    if let Some(kind) = args.experiment {
        let spec = ExperimentSpec {
            kind,
            dgp: config,
            instrument_set: args.instrument_set,
            replications: args.replications,
            alpha,
            kernel: args.kernel,
            beta,
            distortion: (kind == ExperimentKind::Power).then_some(Distortion {
                kind: args.distortion,
                kappa: args.kappa,
            }),
            theta,
            implied_draws: centrality::simulation::experiments::DEFAULT_IMPLIED_DRAWS,
        };
        let report = run_experiment(&spec)?;
        write_or_print(args.out_json.as_deref(), &simulation_json(&report)?)?;
    }
    Ok(())
}

fn run_plot(args: PlotArgs) -> Result<(), Failure> {
    let text = std::fs::read_to_string(&args.input)
        .map_err(|e| Failure::Data(format!("{}: {e}", args.input.display())))?;
    let grid = grid_from_json(&text)?;
    write_or_print(Some(&args.out_svg), &render_svg(&grid))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::Test(a) => run_test(a),
        Command::Cset(a) => run_cset(a),
        Command::Simulate(a) => run_simulate(a),
        Command::Plot(a) => run_plot(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Data(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
