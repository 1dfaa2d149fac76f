//! CSV, JSON and SVG input/output.

mod dataset;
mod format;
mod report;
mod svg;

pub use dataset::{load_column, load_csv, random_walk_forecasts, read_csv, write_dataset_csv};
pub use format::{format_data_float, format_significant};
pub use report::{
    emit_confidence_set, grid_csv, grid_from_json, grid_json, report_json, simulation_json,
    test_json, TestReport, SCHEMA_VERSION,
};
pub use svg::render_svg;
