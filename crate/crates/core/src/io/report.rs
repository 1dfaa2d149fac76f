use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::format::format_data_float;
use super::svg::render_svg;
use crate::central_tendency::ConfidenceSetGrid;
use crate::error::{Error, Result};
use crate::numerics::chi_square_critical;
use crate::rationality::TestResult;
use crate::simulation::SimulationReport;

pub const SCHEMA_VERSION: u64 = 1;

/// JSON body of the `test` subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    #[serde(flatten)]
    pub result: TestResult,
    pub instruments: Vec<String>,
    pub alpha_levels: Vec<f64>,
    /// `Q_k(1 - α)` per level.
    pub critical_values: Vec<f64>,
    /// Decision per level, keyed by the level as written.
    pub reject_at: BTreeMap<String, bool>,
}

impl TestReport {
    pub fn new(result: TestResult, instruments: Vec<String>, alpha_levels: &[f64]) -> Result<Self> {
        let mut reject_at = BTreeMap::new();
        let mut critical_values = Vec::new();
        for &a in alpha_levels {
            critical_values.push(chi_square_critical(result.df, a)?);
            reject_at.insert(a.to_string(), result.rejects_at(a)?);
        }
        Ok(Self {
            result,
            instruments,
            alpha_levels: alpha_levels.to_vec(),
            critical_values,
            reject_at,
        })
    }
}

/// Serialize with a top-level `schema` field; keys come out sorted.
pub fn report_json<T: Serialize>(kind: &str, body: &T) -> Result<String> {
    let mut v = serde_json::to_value(body).map_err(|e| Error::Io(e.to_string()))?;
    let obj = v
        .as_object_mut()
        .ok_or_else(|| Error::domain("report body must serialize to an object"))?;
    obj.insert("schema".into(), Value::from(SCHEMA_VERSION));
    obj.insert("kind".into(), Value::from(kind));
    let mut s = serde_json::to_string_pretty(&v).map_err(|e| Error::Io(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn test_json(report: &TestReport) -> Result<String> {
    report_json("test", report)
}

pub fn grid_json(grid: &ConfidenceSetGrid) -> Result<String> {
    report_json("cset", grid)
}

pub fn simulation_json(report: &SimulationReport) -> Result<String> {
    report_json("simulate", report)
}

/// Parse a confidence-set grid written by [`grid_json`].
pub fn grid_from_json(text: &str) -> Result<ConfidenceSetGrid> {
    let v: Value =
        serde_json::from_str(text).map_err(|e| Error::Io(format!("invalid JSON: {e}")))?;
    match v.get("schema").and_then(Value::as_u64) {
        Some(SCHEMA_VERSION) => {}
        other => return Err(Error::domain(format!("unsupported schema {other:?}"))),
    }
    serde_json::from_value(v).map_err(|e| Error::Io(format!("not a confidence-set grid: {e}")))
}

/// One row per grid point: indices, `θ`, `S_T`, p-value and a 0/1
/// membership column per level. Undefined values are left empty.
pub fn grid_csv(grid: &ConfidenceSetGrid) -> String {
    let mut out = String::from("i,j,theta_mean,theta_median,theta_mode,objective,p_value");
    for a in &grid.alpha_levels {
        out.push_str(&format!(",member_{a}"));
    }
    out.push('\n');
    let opt = |v: Option<f64>| v.map(format_data_float).unwrap_or_default();
    for p in &grid.points {
        let mut row = vec![
            p.i.to_string(),
            p.j.to_string(),
            format_data_float(p.theta.theta[0]),
            format_data_float(p.theta.theta[1]),
            format_data_float(p.theta.theta[2]),
            opt(p.objective),
            opt(p.p_value),
        ];
        row.extend(p.members.iter().map(|&m| (m as u8).to_string()));
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn write(path: &Path, body: &str) -> Result<()> {
    std::fs::write(path, body).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// Write the grid in each requested format.
pub fn emit_confidence_set(
    grid: &ConfidenceSetGrid,
    json: Option<&Path>,
    csv: Option<&Path>,
    svg: Option<&Path>,
) -> Result<()> {
    if let Some(p) = json {
        write(p, &grid_json(grid)?)?;
    }
    if let Some(p) = csv {
        write(p, &grid_csv(grid))?;
    }
    if let Some(p) = svg {
        write(p, &render_svg(grid))?;
    }
    Ok(())
}
