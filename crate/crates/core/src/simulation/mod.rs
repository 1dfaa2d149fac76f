//! Monte Carlo study of the tests: designs, forecasts, implied weights and
//! experiment drivers.

pub mod dgp;
pub mod experiments;
pub mod implied;
pub mod skew_normal;

pub use dgp::{
    build_dataset, distort_forecasts, optimal_forecasts, simulate_dgp, simulate_path, Dgp,
    DgpConfig, Distortion, DistortionKind, InstrumentSet, SimulatedPath,
};
pub use experiments::{
    run_coverage_experiment, run_experiment, run_power_experiment, run_size_experiment,
    ExperimentKind, ExperimentSpec, SimulationReport,
};
pub use implied::{implied_theta, implied_theta_with, median_line_closed_form, ImpliedTheta};
pub use skew_normal::{skew_normal_params, SkewNormalSpec};
