use std::io::{Read, Write};
use std::path::Path;

use super::format::format_data_float;
use crate::error::{Error, Result};
use crate::identification::ForecastDataset;

/// Load `y`, `x`, the named instrument columns and an optional integer
/// cluster column from a CSV file. `with_const` prepends an instrument
/// named `const`.
pub fn load_csv(
    path: impl AsRef<Path>,
    instrument_columns: &[String],
    with_const: bool,
    cluster_column: Option<&str>,
) -> Result<ForecastDataset> {
    let path = path.as_ref();
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    read_csv(file, instrument_columns, with_const, cluster_column)
}

/// [`load_csv`] from any reader.
pub fn read_csv(
    reader: impl Read,
    instrument_columns: &[String],
    with_const: bool,
    cluster_column: Option<&str>,
) -> Result<ForecastDataset> {
    if instrument_columns.is_empty() && !with_const {
        return Err(Error::domain("no instruments selected"));
    }
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let col = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| Error::MissingColumn(name.to_string()))
    };
    let iy = col("y")?;
    let ix = col("x")?;
    let iz = instrument_columns
        .iter()
        .map(|c| col(c))
        .collect::<Result<Vec<_>>>()?;
    let ic = cluster_column.map(col).transpose()?;

    let mut y = Vec::new();
    let mut x = Vec::new();
    let mut z: Vec<Vec<f64>> = vec![Vec::new(); iz.len()];
    let mut clusters = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        // 1-based data row, header excluded
        let row = r + 1;
        let num = |i: usize| -> Result<f64> {
            let cell = rec.get(i).unwrap_or("");
            cell.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    row,
                    column: headers[i].to_string(),
                    value: cell.to_string(),
                })
        };
        y.push(num(iy)?);
        x.push(num(ix)?);
        for (zc, &i) in z.iter_mut().zip(&iz) {
            zc.push(num(i)?);
        }
        if let Some(i) = ic {
            let cell = rec.get(i).unwrap_or("");
            clusters.push(cell.parse::<i64>().map_err(|_| Error::Parse {
                row,
                column: headers[i].to_string(),
                value: cell.to_string(),
            })?);
        }
    }
    if y.len() < 2 {
        return Err(Error::domain(format!(
            "need at least 2 data rows, found {}",
            y.len()
        )));
    }
    let mut columns = Vec::with_capacity(iz.len() + 1);
    let mut names = Vec::with_capacity(iz.len() + 1);
    if with_const {
        columns.push(vec![1.0; y.len()]);
        names.push("const".to_string());
    }
    columns.extend(z);
    names.extend(instrument_columns.iter().cloned());
    let mut data = ForecastDataset::from_columns(y, x, &columns)?.with_instrument_names(names)?;
    if ic.is_some() {
        data = data.with_clusters(clusters)?;
    }
    Ok(data)
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(e.to_string())
}

/// Write `y`, `x`, every instrument other than `x` itself, and the cluster
/// labels (as `cluster`) with 17 significant digits.
pub fn write_dataset_csv(path: impl AsRef<Path>, data: &ForecastDataset) -> Result<()> {
    let path = path.as_ref();
    let mut out = String::new();
    let keep: Vec<usize> = (0..data.k())
        .filter(|&j| data.instrument_names()[j] != "x")
        .collect();
    let mut header = vec!["y".to_string(), "x".to_string()];
    header.extend(keep.iter().map(|&j| data.instrument_names()[j].clone()));
    if data.cluster_labels().is_some() {
        header.push("cluster".into());
    }
    out.push_str(&header.join(","));
    out.push('\n');
    for t in 0..data.len() {
        let mut row = vec![
            format_data_float(data.realizations()[t]),
            format_data_float(data.forecasts()[t]),
        ];
        row.extend(
            keep.iter()
                .map(|&j| format_data_float(data.instruments()[(t, j)])),
        );
        if let Some(c) = data.cluster_labels() {
            row.push(c[t].to_string());
        }
        out.push_str(&row.join(","));
        out.push('\n');
    }
    let mut f =
        std::fs::File::create(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    f.write_all(out.as_bytes())?;
    Ok(())
}

/// One numeric column of a CSV file, such as a price series.
pub fn load_column(path: impl AsRef<Path>, column: &str) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let file =
        std::fs::File::open(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = rdr.headers().map_err(csv_err)?.clone();
    let i = headers
        .iter()
        .position(|h| h == column)
        .ok_or_else(|| Error::MissingColumn(column.to_string()))?;
    let mut out = Vec::new();
    for (r, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(csv_err)?;
        let cell = rec.get(i).unwrap_or("");
        out.push(
            cell.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Parse {
                    row: r + 1,
                    column: column.to_string(),
                    value: cell.to_string(),
                })?,
        );
    }
    Ok(out)
}

/// Random-walk forecasts of a price series: `X_t = p_t` for `Y_t = p_{t+1}`,
/// with instruments `(1, X_t)`.
pub fn random_walk_forecasts(prices: &[f64]) -> Result<ForecastDataset> {
    if prices.len() < 3 {
        return Err(Error::domain(
            "random-walk forecasts need at least 3 prices",
        ));
    }
    let x = prices[..prices.len() - 1].to_vec();
    let y = prices[1..].to_vec();
    ForecastDataset::with_constant_and_forecast(y, x)
}
