//! Dataset ingestion, result tables and serialization.
//!
//! Two input layouts are supported: `tidy` (one row per response, columns
//! `stimulus_id,score`) and `counts` (one row per stimulus, columns
//! `stimulus_id,n1..n5`). Results are emitted as CSV or JSON with a stable
//! column order; floats carry 12 significant digits, so an ingest/serialize
//! round trip is lossless at that precision.

use std::io::Write;
use std::path::Path;

use crate::bootstrap_eval::{ComparisonResult, DiffHistogram};
use crate::distributions::{GsdParams, ParamMapRow};
use crate::error::{Error, Result};
use crate::estimation::{FitResult, FittedParams, Model};
use crate::gof::{GofResult, PpPlotData, PvalueHistogram};
use crate::types::ResponseCounts;

/// Version stamp written into every JSON document.
pub const SCHEMA_VERSION: u32 = 1;

/// One stimulus and its response tally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stimulus {
    pub id: String,
    pub counts: ResponseCounts,
}

/// A named collection of stimuli, in first-appearance order.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub name: String,
    pub stimuli: Vec<Stimulus>,
}

/// Input file layout.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// One row per response: `stimulus_id,score`.
    Tidy,
    /// One row per stimulus: `stimulus_id,n1,n2,n3,n4,n5`.
    Counts,
}

/// Run parameters shared by the randomized pipelines.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mc: u32,
    pub seed: u64,
    pub model: Model,
    pub small_sizes: Vec<u64>,
    pub alpha_step: f64,
    pub bin_width: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            mc: 10_000,
            seed: 0,
            model: Model::Gsd,
            small_sizes: vec![12, 24, 50],
            alpha_step: 0.001,
            bin_width: 0.05,
        }
    }
}

/// Load a dataset, tallying tidy rows or validating count rows.
pub fn load_responses(path: &Path, format: InputFormat) -> Result<Dataset> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);

    let headers = reader
        .headers()
        .map_err(|e| data_err(path, 1, e.to_string()))?
        .clone();
    let col = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| data_err(path, 1, format!("missing column '{name}'")))
    };

    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());

    let mut order: Vec<String> = Vec::new();
    let mut tallies: std::collections::HashMap<String, [u64; 5]> =
        std::collections::HashMap::new();

    match format {
        InputFormat::Tidy => {
            let id_col = col("stimulus_id")?;
            let score_col = col("score")?;
            for record in reader.records() {
                let record = record.map_err(|e| data_err(path, 0, e.to_string()))?;
                let line = record.position().map_or(0, |p| p.line());
                let id = record
                    .get(id_col)
                    .ok_or_else(|| data_err(path, line, "missing stimulus_id"))?;
                let raw = record
                    .get(score_col)
                    .ok_or_else(|| data_err(path, line, "missing score"))?;
                let score: i64 = raw
                    .parse()
                    .map_err(|_| data_err(path, line, format!("score '{raw}' is not an integer")))?;
                if !(1..=5).contains(&score) {
                    return Err(data_err(path, line, format!("score {score} outside 1..5")));
                }
                let entry = tallies.entry(id.to_string()).or_insert_with(|| {
                    order.push(id.to_string());
                    [0; 5]
                });
                entry[(score - 1) as usize] += 1;
            }
        }
        InputFormat::Counts => {
            let id_col = col("stimulus_id")?;
            let count_cols = [col("n1")?, col("n2")?, col("n3")?, col("n4")?, col("n5")?];
            for record in reader.records() {
                let record = record.map_err(|e| data_err(path, 0, e.to_string()))?;
                let line = record.position().map_or(0, |p| p.line());
                let id = record
                    .get(id_col)
                    .ok_or_else(|| data_err(path, line, "missing stimulus_id"))?;
                if tallies.contains_key(id) {
                    return Err(data_err(path, line, format!("duplicate stimulus_id '{id}'")));
                }
                let mut counts = [0u64; 5];
                for (k, &c) in count_cols.iter().enumerate() {
                    let raw = record
                        .get(c)
                        .ok_or_else(|| data_err(path, line, format!("missing n{}", k + 1)))?;
                    counts[k] = raw.parse().map_err(|_| {
                        data_err(path, line, format!("count '{raw}' is not a non-negative integer"))
                    })?;
                }
                if counts.iter().sum::<u64>() == 0 {
                    return Err(data_err(path, line, "all counts are zero"));
                }
                order.push(id.to_string());
                tallies.insert(id.to_string(), counts);
            }
        }
    }

    if order.is_empty() {
        return Err(data_err(path, 1, "no data rows"));
    }
    let stimuli = order
        .into_iter()
        .map(|id| {
            let counts = ResponseCounts::new(tallies[&id])?;
            Ok(Stimulus { id, counts })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Dataset { name, stimuli })
}

fn data_err(path: &Path, line: u64, msg: impl Into<String>) -> Error {
    Error::Data {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

/// Format a float with 12 significant digits, locale-independent.
pub fn fmt_f64(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    format!("{x:.11e}")
}

/// One value in a result table.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Str(String),
    U64(u64),
    F64(f64),
    Bool(bool),
}

impl Cell {
    fn csv_field(&self) -> String {
        match self {
            Cell::Str(s) => s.clone(),
            Cell::U64(v) => v.to_string(),
            Cell::F64(v) => fmt_f64(*v),
            Cell::Bool(b) => b.to_string(),
        }
    }

    fn json_value(&self) -> String {
        match self {
            Cell::Str(s) => json_string(s),
            Cell::U64(v) => v.to_string(),
            Cell::F64(v) if v.is_finite() => fmt_f64(*v),
            Cell::F64(_) => "null".to_string(),
            Cell::Bool(b) => b.to_string(),
        }
    }
}

fn json_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// A result table with a fixed column order, ready for CSV or JSON output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    /// Table kind, stamped into JSON output.
    pub kind: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

/// Key/value pairs echoed into the JSON `config` object.
pub type ConfigEcho = Vec<(&'static str, Cell)>;

/// Output serialization format.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Write a table in the requested format.
pub fn write_results(
    table: &Table,
    config: &ConfigEcho,
    format: OutputFormat,
    w: &mut dyn Write,
) -> std::io::Result<()> {
    match format {
        OutputFormat::Csv => write_csv(table, w),
        OutputFormat::Json => write_json(table, config, w),
    }
}

/// Convenience wrapper writing to a file path.
pub fn write_results_to_path(
    table: &Table,
    config: &ConfigEcho,
    format: OutputFormat,
    path: &Path,
) -> Result<()> {
    let mut file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_results(table, config, format, &mut file).map_err(|e| Error::io(path, e))?;
    file.flush().map_err(|e| Error::io(path, e))
}

fn write_csv(table: &Table, w: &mut dyn Write) -> std::io::Result<()> {
    let mut writer = csv::Writer::from_writer(w);
    writer.write_record(&table.columns)?;
    for row in &table.rows {
        writer.write_record(row.iter().map(|c| c.csv_field()))?;
    }
    writer.flush()
}

fn write_json(table: &Table, config: &ConfigEcho, w: &mut dyn Write) -> std::io::Result<()> {
    writeln!(w, "{{")?;
    writeln!(w, "  \"schema_version\": {SCHEMA_VERSION},")?;
    writeln!(w, "  \"kind\": {},", json_string(table.kind))?;
    write!(w, "  \"config\": {{")?;
    for (i, (key, value)) in config.iter().enumerate() {
        let sep = if i + 1 < config.len() { "," } else { "" };
        write!(w, "\n    {}: {}{sep}", json_string(key), value.json_value())?;
    }
    writeln!(w, "\n  }},")?;
    writeln!(w, "  \"results\": [")?;
    for (i, row) in table.rows.iter().enumerate() {
        write!(w, "    {{")?;
        for (j, (col, cell)) in table.columns.iter().zip(row).enumerate() {
            let sep = if j + 1 < row.len() { ", " } else { "" };
            write!(w, "{}: {}{sep}", json_string(col), cell.json_value())?;
        }
        let sep = if i + 1 < table.rows.len() { "," } else { "" };
        writeln!(w, "}}{sep}")?;
    }
    writeln!(w, "  ]")?;
    writeln!(w, "}}")
}

/// Per-stimulus goodness-of-fit results.
pub fn gof_table(results: &[(String, GofResult)]) -> Table {
    Table {
        kind: "gof",
        columns: vec!["stimulus_id", "model", "t", "p_value", "mc", "seed"],
        rows: results
            .iter()
            .map(|(id, r)| {
                vec![
                    Cell::Str(id.clone()),
                    Cell::Str(r.model.as_str().to_string()),
                    Cell::F64(r.t_statistic),
                    Cell::F64(r.p_value),
                    Cell::U64(r.mc as u64),
                    Cell::U64(r.seed),
                ]
            })
            .collect(),
    }
}

/// Per-stimulus fitted parameters. Column names depend on the model.
pub fn fit_table(model: Model, results: &[(String, FitResult)]) -> Table {
    let columns = match model {
        Model::Gsd => vec!["stimulus_id", "model", "psi", "rho", "log_likelihood"],
        Model::Probit => vec!["stimulus_id", "model", "mu", "sigma", "log_likelihood"],
        Model::Sli => vec![
            "stimulus_id",
            "model",
            "mos",
            "s2",
            "sigma_eff",
            "log_likelihood",
        ],
    };
    let rows = results
        .iter()
        .map(|(id, r)| {
            let mut row = vec![
                Cell::Str(id.clone()),
                Cell::Str(r.model.as_str().to_string()),
            ];
            match r.params {
                FittedParams::Gsd(p) => {
                    row.push(Cell::F64(p.psi()));
                    row.push(Cell::F64(p.rho()));
                }
                FittedParams::Probit(p) => {
                    row.push(Cell::F64(p.mu()));
                    row.push(Cell::F64(p.sigma()));
                }
                FittedParams::Sli(p) => {
                    row.push(Cell::F64(p.mos));
                    row.push(Cell::F64(p.s2));
                    row.push(Cell::F64(p.sigma_eff));
                }
            }
            row.push(Cell::F64(r.log_likelihood));
            row
        })
        .collect();
    Table {
        kind: "fit",
        columns,
        rows,
    }
}

/// Per-stimulus bootstrapping effectiveness results.
pub fn comparison_table(results: &[(String, ComparisonResult)]) -> Table {
    Table {
        kind: "compare",
        columns: vec![
            "stimulus_id",
            "model",
            "n_small",
            "mc",
            "seed",
            "p_m_hat",
            "p_e_hat",
            "diff",
            "ci_low",
            "ci_high",
            "verdict",
            "w_positive",
            "w_negative",
            "w_zero",
            "w_infinite",
        ],
        rows: results
            .iter()
            .map(|(id, r)| {
                vec![
                    Cell::Str(id.clone()),
                    Cell::Str(r.model.as_str().to_string()),
                    Cell::U64(r.n_small),
                    Cell::U64(r.mc as u64),
                    Cell::U64(r.seed),
                    Cell::F64(r.p_m_hat),
                    Cell::F64(r.p_e_hat),
                    Cell::F64(r.diff),
                    Cell::F64(r.ci_low),
                    Cell::F64(r.ci_high),
                    Cell::Str(r.verdict.as_str().to_string()),
                    Cell::U64(r.w_summary.positive),
                    Cell::U64(r.w_summary.negative),
                    Cell::U64(r.w_summary.zero),
                    Cell::U64(r.w_summary.infinite),
                ]
            })
            .collect(),
    }
}

/// P-value histogram rows; the marker and reference level ride along on
/// every row so the CSV is self-contained for plotting.
pub fn histogram_table(h: &PvalueHistogram) -> Table {
    Table {
        kind: "pvalue_histogram",
        columns: vec![
            "bin_start",
            "bin_end",
            "count",
            "significance_marker",
            "reference_level",
        ],
        rows: h
            .bins
            .iter()
            .map(|&(start, count)| {
                vec![
                    Cell::F64(start),
                    Cell::F64(start + h.bin_width),
                    Cell::U64(count),
                    Cell::F64(h.significance_marker),
                    Cell::F64(h.reference_level),
                ]
            })
            .collect(),
    }
}

/// P-P plot rows.
pub fn pp_plot_table(data: &PpPlotData) -> Table {
    Table {
        kind: "pp_plot",
        columns: vec!["alpha", "theoretical_cdf", "ecdf", "significance_line"],
        rows: data
            .rows
            .iter()
            .map(|r| {
                vec![
                    Cell::F64(r.alpha),
                    Cell::F64(r.theoretical_cdf),
                    Cell::F64(r.ecdf),
                    Cell::F64(r.significance_line),
                ]
            })
            .collect(),
    }
}

/// Probability-difference histogram rows (the per-size bootstrapping
/// effectiveness summary).
pub fn diff_histogram_table(h: &DiffHistogram) -> Table {
    Table {
        kind: "difference_histogram",
        columns: vec![
            "bin_start",
            "bin_end",
            "significant",
            "insignificant",
            "model_better_total",
            "empirical_better_total",
            "no_difference_total",
        ],
        rows: h
            .bins
            .iter()
            .map(|b| {
                vec![
                    Cell::F64(b.bin_start),
                    Cell::F64(b.bin_start + h.bin_width),
                    Cell::U64(b.significant),
                    Cell::U64(b.insignificant),
                    Cell::U64(h.model_better),
                    Cell::U64(h.empirical_better),
                    Cell::U64(h.no_significant_difference),
                ]
            })
            .collect(),
    }
}

/// Parameter-space map rows.
pub fn param_map_table(rows: &[ParamMapRow], param_names: (&'static str, &'static str)) -> Table {
    Table {
        kind: "param_map",
        columns: vec![param_names.0, param_names.1, "mean", "variance"],
        rows: rows
            .iter()
            .map(|r| {
                vec![
                    Cell::F64(r.param1),
                    Cell::F64(r.param2),
                    Cell::F64(r.mean),
                    Cell::F64(r.variance),
                ]
            })
            .collect(),
    }
}

/// Counts-format table of a dataset, ingestible by [`load_responses`].
pub fn counts_table(dataset: &Dataset) -> Table {
    Table {
        kind: "counts",
        columns: vec!["stimulus_id", "n1", "n2", "n3", "n4", "n5"],
        rows: dataset
            .stimuli
            .iter()
            .map(|s| {
                let mut row = vec![Cell::Str(s.id.clone())];
                row.extend(s.counts.as_array().iter().map(|&c| Cell::U64(c)));
                row
            })
            .collect(),
    }
}

/// True GSD parameters of a simulated study.
pub fn true_params_table(params: &[(String, GsdParams)]) -> Table {
    Table {
        kind: "true_params",
        columns: vec!["stimulus_id", "psi", "rho"],
        rows: params
            .iter()
            .map(|(id, p)| {
                vec![
                    Cell::Str(id.clone()),
                    Cell::F64(p.psi()),
                    Cell::F64(p.rho()),
                ]
            })
            .collect(),
    }
}
