//! Rationality tests for mean, median and mode point forecasts, and
//! confidence sets for the measure of central tendency a forecaster targets.
//!
//! ```
//! use centrality::{ForecastDataset, Functional, Kernel, rationality_test};
//!
//! let y = vec![0.3, -1.2, 0.8, 1.9, -0.4, 0.1, -0.7, 1.1];
//! let x = vec![0.1, -0.9, 0.5, 1.2, -0.2, 0.4, -0.3, 0.7];
//! let data = ForecastDataset::with_constant_and_forecast(y, x).unwrap();
//! let r = rationality_test(Functional::Mean, &data, None, Kernel::Gaussian).unwrap();
//! assert!(r.p_value > 0.0 && r.p_value <= 1.0);
//! ```

pub mod bandwidth;
pub mod central_tendency;
pub mod error;
pub mod identification;
pub mod io;
pub mod numerics;
pub mod rationality;
pub mod simulation;

pub use bandwidth::{bandwidth_rule_of_thumb, BandwidthReport};
pub use central_tendency::{
    confidence_set, gmm_objective, simplex_grid, ConfidenceSetGrid, ConfidenceSetOptions,
    GridPoint, SimplexWeights,
};
pub use error::{Error, Result};
pub use identification::{ForecastDataset, Functional, StackedMoments};
pub use numerics::Kernel;
pub use rationality::{instrument_moment_test, mode_test, rationality_test, TestResult};
