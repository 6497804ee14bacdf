//! Output rows and serialization.
//!
//! Every command builds plain row structs and hands them to an emitter, so
//! the bytes written are a pure function of the computed values: CSV with a
//! fixed header order (struct field order) or JSON with the same field
//! names. Floats are serialized at full round-trip precision in both
//! formats; non-finite values (possible e.g. for ratios at p = 1) appear as
//! `inf`/`NaN` in CSV and as `null` in JSON.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use clap::ValueEnum;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// `exact`: one parameter point, the exact expectation.
#[derive(Serialize)]
pub struct ExactRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    pub p: f64,
    #[serde(rename = "F")]
    pub f: f64,
}

/// `bounds`: the bracketing pair.
#[derive(Serialize)]
pub struct BoundsRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    pub p: f64,
    #[serde(rename = "F_lower")]
    pub f_lower: f64,
    #[serde(rename = "F_upper")]
    pub f_upper: f64,
}

/// `sparse`: point-like closed form with its logarithmic envelope.
#[derive(Serialize)]
pub struct SparseRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "F0_low")]
    pub f0_low: f64,
    #[serde(rename = "F0_high")]
    pub f0_high: f64,
}

/// `sweep`: one grid cell with every analytic quantity and the ratios.
#[derive(Serialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    pub p: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "F_lower")]
    pub f_lower: f64,
    #[serde(rename = "F_upper")]
    pub f_upper: f64,
    #[serde(rename = "ratio_F0_F")]
    pub ratio_f0_f: f64,
    #[serde(rename = "ratio_Fupper_F")]
    pub ratio_fupper_f: f64,
    #[serde(rename = "ratio_Flower_F")]
    pub ratio_flower_f: f64,
}

/// `simulate`: Monte Carlo estimate next to the analytic reference.
#[derive(Serialize)]
pub struct SimulateRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    pub p: f64,
    pub kind: String,
    pub law: String,
    pub replications: usize,
    pub seed: u64,
    pub mean: f64,
    pub stderr: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub z: f64,
}

/// `scaling`: one population along the p(N) schedule.
#[derive(Serialize)]
pub struct ScalingRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub p: f64,
    #[serde(rename = "F")]
    pub f: f64,
    pub normalized: f64,
}

/// `oracle`: chain value side by side with the analytic quantities.
#[derive(Serialize)]
pub struct OracleRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub lambda: f64,
    pub mu: f64,
    pub p: f64,
    #[serde(rename = "F_ctmc")]
    pub f_ctmc: f64,
    #[serde(rename = "F")]
    pub f: f64,
    #[serde(rename = "F_lower")]
    pub f_lower: f64,
    #[serde(rename = "F_upper")]
    pub f_upper: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "rel_dev_ctmc_F")]
    pub rel_dev_ctmc_f: f64,
    #[serde(rename = "rel_dev_ctmc_Flower")]
    pub rel_dev_ctmc_flower: f64,
    #[serde(rename = "rel_dev_ctmc_Fupper")]
    pub rel_dev_ctmc_fupper: f64,
    #[serde(rename = "rel_dev_ctmc_F0")]
    pub rel_dev_ctmc_f0: f64,
    pub ctmc_within_bounds: bool,
}

#[derive(Serialize)]
struct CrossoverOut {
    n_hat: Option<usize>,
}

/// Emit one record: CSV header plus a single row, or one JSON object.
pub fn emit_single<T: Serialize>(
    row: &T,
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<()> {
    let bytes = match format {
        OutputFormat::Csv => csv_bytes(std::slice::from_ref(row))?,
        OutputFormat::Json => json_bytes(row)?,
    };
    write_out(&bytes, output)
}

/// Emit a table: CSV header plus one line per row, or a JSON array.
pub fn emit_rows<T: Serialize>(
    rows: &[T],
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<()> {
    let bytes = match format {
        OutputFormat::Csv => csv_bytes(rows)?,
        OutputFormat::Json => json_bytes(&rows)?,
    };
    write_out(&bytes, output)
}

/// The crossover threshold is a single scalar; CSV mode prints the bare
/// value (`2`, `17`, …) or `none`, JSON mode an object with a nullable
/// `n_hat` field.
pub fn emit_crossover(
    n_hat: Option<usize>,
    format: OutputFormat,
    output: Option<&Path>,
) -> Result<()> {
    let bytes = match format {
        OutputFormat::Csv => match n_hat {
            Some(threshold) => format!("{threshold}\n").into_bytes(),
            None => b"none\n".to_vec(),
        },
        OutputFormat::Json => json_bytes(&CrossoverOut { n_hat })?,
    };
    write_out(&bytes, output)
}

fn csv_bytes<T: Serialize>(rows: &[T]) -> Result<Vec<u8>> {
    let mut writer = csv::Writer::from_writer(Vec::new());
    for row in rows {
        writer.serialize(row).context("serializing CSV row")?;
    }
    writer
        .into_inner()
        .map_err(|err| anyhow::anyhow!("finalizing CSV output: {err}"))
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>> {
    let mut bytes = serde_json::to_vec_pretty(value).context("serializing JSON output")?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn write_out(bytes: &[u8], output: Option<&Path>) -> Result<()> {
    match output {
        Some(path) => fs::write(path, bytes)
            .with_context(|| format!("writing output file {}", path.display())),
        None => io::stdout()
            .write_all(bytes)
            .context("writing to standard output"),
    }
}
