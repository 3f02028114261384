//! Command-line front end: fitting, batch goodness-of-fit runs, plot-data
//! emission, the bootstrapping effectiveness comparison, synthetic study
//! generation and parameter-space maps.
//!
//! Exit codes: 0 success, 1 validation error (arguments or data), 2 I/O
//! error. Randomized commands take `--seed`; without one a seed is generated
//! and printed to stderr so the run can be reproduced.

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use gsd::bootstrap_eval::{difference_histogram, run_comparison_batch};
use gsd::dataio::{
    self, comparison_table, counts_table, diff_histogram_table, fit_table, gof_table,
    histogram_table, param_map_table, pp_plot_table, true_params_table, Cell, ConfigEcho,
    Dataset, InputFormat, OutputFormat, RunConfig, Table,
};
use gsd::distributions::{parameter_space_map, GridSpec, MapModel};
use gsd::error::{Error, Result};
use gsd::estimation::{fit_model, GsdGrid, Model};
use gsd::gof::{pp_plot, pvalue_histogram, run_gof_batch};
use gsd::svg::{render_histogram_svg, render_pp_plot_svg};
use gsd::synth::simulate_study;

#[derive(Parser)]
#[command(
    name = "gsd",
    version,
    about = "Model 5-level opinion scores with the Generalised Score Distribution",
    after_help = "Exit codes: 0 success, 1 validation error, 2 i/o error."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelArg {
    Gsd,
    Probit,
    Sli,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Model {
        match m {
            ModelArg::Gsd => Model::Gsd,
            ModelArg::Probit => Model::Probit,
            ModelArg::Sli => Model::Sli,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum FormatArg {
    /// One row per response: stimulus_id,score
    #[default]
    Tidy,
    /// One row per stimulus: stimulus_id,n1..n5
    Counts,
}

impl From<FormatArg> for InputFormat {
    fn from(f: FormatArg) -> InputFormat {
        match f {
            FormatArg::Tidy => InputFormat::Tidy,
            FormatArg::Counts => InputFormat::Counts,
        }
    }
}

#[derive(Clone, Copy, ValueEnum, Default)]
enum OutFormatArg {
    #[default]
    Csv,
    Json,
}

impl From<OutFormatArg> for OutputFormat {
    fn from(f: OutFormatArg) -> OutputFormat {
        match f {
            OutFormatArg::Csv => OutputFormat::Csv,
            OutFormatArg::Json => OutputFormat::Json,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum MapModelArg {
    Gsd,
    Probit,
}

#[derive(Subcommand)]
enum Command {
    /// Fit a model to each stimulus by maximum likelihood
    Fit {
        /// Input CSV
        #[arg(long)]
        input: PathBuf,
        /// Input layout
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        /// Model to fit
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Output path (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output serialization
        #[arg(long, value_enum, default_value_t)]
        out_format: OutFormatArg,
    },
    /// Bootstrapped G-test of goodness-of-fit per stimulus
    Gof {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Bootstrap replicates per stimulus
        #[arg(long, default_value_t = 10_000)]
        mc: u32,
        /// RNG seed (generated and printed when absent)
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (library default when absent)
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        out_format: OutFormatArg,
    },
    /// Histogram of p-values from a gof results CSV
    Hist {
        /// gof output CSV (reads the p_value column)
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0.05)]
        bin_width: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        out_format: OutFormatArg,
        /// Also render the histogram as SVG to this path
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// P-P plot of p-values against the uniform diagonal
    PpPlot {
        /// gof output CSV (reads the p_value column)
        #[arg(long)]
        input: PathBuf,
        /// Confidence of the one-sided significance line
        #[arg(long, default_value_t = 0.95)]
        confidence: f64,
        /// Spacing of the alpha grid
        #[arg(long, default_value_t = 0.001)]
        alpha_step: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        out_format: OutFormatArg,
        /// Also render the plot as SVG to this path
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Bootstrapping effectiveness test: model vs empirical distribution
    Compare {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: FormatArg,
        /// Model to compare against the empirical distribution (gsd or sli)
        #[arg(long, value_enum)]
        model: ModelArg,
        /// Subsample size, smaller than each stimulus's response count
        #[arg(long)]
        n_small: u64,
        #[arg(long, default_value_t = 10_000)]
        mc: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        threads: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        out_format: OutFormatArg,
        /// Also write the probability-difference histogram table here
        #[arg(long)]
        hist_out: Option<PathBuf>,
    },
    /// Generate a synthetic study with GSD truths from the feasible region
    Simulate {
        /// Number of stimuli
        #[arg(long)]
        stimuli: u32,
        /// Responses per stimulus
        #[arg(long)]
        n: u64,
        #[arg(long)]
        seed: Option<u64>,
        /// Counts CSV output (stdout when absent)
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write the true (psi, rho) per stimulus here
        #[arg(long)]
        params_out: Option<PathBuf>,
    },
    /// Map a model's parameter grid to response mean/variance
    ParamMap {
        #[arg(long, value_enum)]
        model: MapModelArg,
        /// First parameter grid as min:max:step (psi or mu)
        #[arg(long)]
        p1: String,
        /// Second parameter grid as min:max:step (rho or sigma)
        #[arg(long)]
        p2: String,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t)]
        out_format: OutFormatArg,
    },
}

fn main() {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    if let Err(err) = run(cli.command) {
        eprintln!("error: {err}");
        let code = match err {
            Error::Io { .. } => 2,
            _ => 1,
        };
        std::process::exit(code);
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Fit {
            input,
            format,
            model,
            out,
            out_format,
        } => cmd_fit(&input, format.into(), model.into(), out, out_format.into()),
        Command::Gof {
            input,
            format,
            model,
            mc,
            seed,
            threads,
            out,
            out_format,
        } => {
            let seed = resolve_seed(seed);
            with_threads(threads, || {
                cmd_gof(
                    &input,
                    format.into(),
                    model.into(),
                    mc,
                    seed,
                    out,
                    out_format.into(),
                )
            })?
        }
        Command::Hist {
            input,
            bin_width,
            out,
            out_format,
            svg,
        } => cmd_hist(&input, bin_width, out, out_format.into(), svg),
        Command::PpPlot {
            input,
            confidence,
            alpha_step,
            out,
            out_format,
            svg,
        } => cmd_pp_plot(&input, confidence, alpha_step, out, out_format.into(), svg),
        Command::Compare {
            input,
            format,
            model,
            n_small,
            mc,
            seed,
            threads,
            out,
            out_format,
            hist_out,
        } => {
            let seed = resolve_seed(seed);
            with_threads(threads, || {
                cmd_compare(
                    &input,
                    format.into(),
                    model.into(),
                    n_small,
                    mc,
                    seed,
                    out,
                    out_format.into(),
                    hist_out,
                )
            })?
        }
        Command::Simulate {
            stimuli,
            n,
            seed,
            out,
            params_out,
        } => {
            let seed = resolve_seed(seed);
            cmd_simulate(stimuli, n, seed, out, params_out)
        }
        Command::ParamMap {
            model,
            p1,
            p2,
            out,
            out_format,
        } => cmd_param_map(model, &p1, &p2, out, out_format.into()),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    match seed {
        Some(s) => s,
        None => {
            let nanos = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_nanos() as u64)
                .unwrap_or(0);
            let s = gsd::rng::mix64(nanos ^ (std::process::id() as u64) << 32);
            eprintln!("seed: {s}");
            s
        }
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::domain("--threads must be at least 1")),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::domain(format!("cannot build thread pool: {e}"))),
    }
}

fn emit(table: &Table, config: &ConfigEcho, format: OutputFormat, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => dataio::write_results_to_path(table, config, format, path),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            dataio::write_results(table, config, format, &mut lock)
                .map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn write_svg(path: &Path, content: &str) -> Result<()> {
    std::fs::write(path, content).map_err(|e| Error::io(path, e))
}

fn load(input: &Path, format: InputFormat) -> Result<Dataset> {
    dataio::load_responses(input, format)
}

fn cmd_fit(
    input: &Path,
    format: InputFormat,
    model: Model,
    out: Option<PathBuf>,
    out_format: OutputFormat,
) -> Result<()> {
    let dataset = load(input, format)?;
    let grid = GsdGrid::shared();
    let results: Vec<_> = dataset
        .stimuli
        .iter()
        .map(|s| (s.id.clone(), fit_model(model, &s.counts, grid)))
        .collect();
    let table = fit_table(model, &results);
    let config = vec![
        ("model", Cell::Str(model.as_str().into())),
        ("input", Cell::Str(input.display().to_string())),
    ];
    emit(&table, &config, out_format, &out)
}

fn cmd_gof(
    input: &Path,
    format: InputFormat,
    model: Model,
    mc: u32,
    seed: u64,
    out: Option<PathBuf>,
    out_format: OutputFormat,
) -> Result<()> {
    let dataset = load(input, format)?;
    let config = RunConfig {
        mc,
        seed,
        model,
        ..RunConfig::default()
    };
    let results = run_gof_batch(&dataset, &config, GsdGrid::shared())?;
    let table = gof_table(&results);
    let config = vec![
        ("model", Cell::Str(model.as_str().into())),
        ("mc", Cell::U64(mc as u64)),
        ("seed", Cell::U64(seed)),
        ("input", Cell::Str(input.display().to_string())),
    ];
    emit(&table, &config, out_format, &out)
}

fn read_pvalues(input: &Path) -> Result<Vec<f64>> {
    let file = std::fs::File::open(input).map_err(|e| Error::io(input, e))?;
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(file);
    let headers = reader
        .headers()
        .map_err(|e| Error::domain(format!("cannot read header of {}: {e}", input.display())))?;
    let col = headers
        .iter()
        .position(|h| h == "p_value")
        .ok_or_else(|| Error::domain(format!("{} has no p_value column", input.display())))?;
    let mut out = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| Error::domain(format!("bad row: {e}")))?;
        let line = record.position().map_or(0, |p| p.line());
        let raw = record
            .get(col)
            .ok_or_else(|| Error::domain(format!("line {line}: missing p_value")))?;
        let p: f64 = raw
            .parse()
            .map_err(|_| Error::domain(format!("line {line}: p_value '{raw}' is not a number")))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "line {line}: p_value {p} outside [0, 1]"
            )));
        }
        out.push(p);
    }
    Ok(out)
}

fn cmd_hist(
    input: &Path,
    bin_width: f64,
    out: Option<PathBuf>,
    out_format: OutputFormat,
    svg: Option<PathBuf>,
) -> Result<()> {
    let p_values = read_pvalues(input)?;
    let hist = pvalue_histogram(&p_values, bin_width)?;
    let table = histogram_table(&hist);
    let config = vec![
        ("bin_width", Cell::F64(bin_width)),
        ("input", Cell::Str(input.display().to_string())),
    ];
    emit(&table, &config, out_format, &out)?;
    if let Some(path) = svg {
        write_svg(&path, &render_histogram_svg(&hist))?;
    }
    Ok(())
}

fn alpha_grid(step: f64) -> Result<Vec<f64>> {
    if !(1e-6..=1.0).contains(&step) {
        return Err(Error::domain(format!("alpha step {step} outside [1e-6, 1]")));
    }
    let mut out = Vec::new();
    let mut i = 1u64;
    loop {
        let alpha = i as f64 * step;
        if alpha > 1.0 + 1e-12 {
            break;
        }
        out.push(alpha.min(1.0));
        i += 1;
    }
    Ok(out)
}

fn cmd_pp_plot(
    input: &Path,
    confidence: f64,
    alpha_step: f64,
    out: Option<PathBuf>,
    out_format: OutputFormat,
    svg: Option<PathBuf>,
) -> Result<()> {
    let p_values = read_pvalues(input)?;
    let data = pp_plot(&p_values, &alpha_grid(alpha_step)?, confidence)?;
    eprintln!(
        "verdict: {} (ecdf vs significance line on alpha in [{}, {}])",
        if data.verdict {
            "not contradicted"
        } else {
            "contradicted"
        },
        data.inspection_range.0,
        data.inspection_range.1
    );
    let table = pp_plot_table(&data);
    let config = vec![
        ("confidence", Cell::F64(confidence)),
        ("alpha_step", Cell::F64(alpha_step)),
        ("verdict", Cell::Bool(data.verdict)),
        ("input", Cell::Str(input.display().to_string())),
    ];
    emit(&table, &config, out_format, &out)?;
    if let Some(path) = svg {
        write_svg(&path, &render_pp_plot_svg(&data))?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_compare(
    input: &Path,
    format: InputFormat,
    model: Model,
    n_small: u64,
    mc: u32,
    seed: u64,
    out: Option<PathBuf>,
    out_format: OutputFormat,
    hist_out: Option<PathBuf>,
) -> Result<()> {
    let dataset = load(input, format)?;
    let config = RunConfig {
        mc,
        seed,
        model,
        ..RunConfig::default()
    };
    let results = run_comparison_batch(&dataset, n_small, &config, GsdGrid::shared())?;
    let table = comparison_table(&results);
    let config = vec![
        ("model", Cell::Str(model.as_str().into())),
        ("n_small", Cell::U64(n_small)),
        ("mc", Cell::U64(mc as u64)),
        ("seed", Cell::U64(seed)),
        ("input", Cell::Str(input.display().to_string())),
    ];
    emit(&table, &config, out_format, &out)?;

    if let Some(path) = hist_out {
        let bare: Vec<_> = results.iter().map(|(_, r)| r.clone()).collect();
        let hist = difference_histogram(&bare, 0.1)?;
        dataio::write_results_to_path(&diff_histogram_table(&hist), &config, out_format, &path)?;
    }
    Ok(())
}

fn cmd_simulate(
    stimuli: u32,
    n: u64,
    seed: u64,
    out: Option<PathBuf>,
    params_out: Option<PathBuf>,
) -> Result<()> {
    let (dataset, truths) = simulate_study(stimuli, n, seed)?;
    let config = vec![
        ("stimuli", Cell::U64(stimuli as u64)),
        ("n", Cell::U64(n)),
        ("seed", Cell::U64(seed)),
    ];
    emit(&counts_table(&dataset), &config, OutputFormat::Csv, &out)?;
    if let Some(path) = params_out {
        dataio::write_results_to_path(
            &true_params_table(&truths),
            &config,
            OutputFormat::Csv,
            &path,
        )?;
    }
    Ok(())
}

fn parse_grid(spec: &str) -> Result<GridSpec> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::domain(format!(
            "grid '{spec}' must be min:max:step"
        )));
    }
    let nums: Vec<f64> = parts
        .iter()
        .map(|p| {
            p.parse::<f64>()
                .map_err(|_| Error::domain(format!("grid component '{p}' is not a number")))
        })
        .collect::<Result<_>>()?;
    GridSpec::new(nums[0], nums[1], nums[2])
}

fn cmd_param_map(
    model: MapModelArg,
    p1: &str,
    p2: &str,
    out: Option<PathBuf>,
    out_format: OutputFormat,
) -> Result<()> {
    let (map_model, names) = match model {
        MapModelArg::Gsd => (MapModel::Gsd, ("psi", "rho")),
        MapModelArg::Probit => (MapModel::Probit, ("mu", "sigma")),
    };
    let rows = parameter_space_map(map_model, parse_grid(p1)?, parse_grid(p2)?)?;
    let table = param_map_table(&rows, names);
    let config = vec![
        ("model", Cell::Str(names.0.to_string() + "/" + names.1)),
        ("p1", Cell::Str(p1.to_string())),
        ("p2", Cell::Str(p2.to_string())),
    ];
    emit(&table, &config, out_format, &out)
}
