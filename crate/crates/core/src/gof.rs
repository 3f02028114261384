//! Bootstrapped G-test of goodness-of-fit, generic over the three models,
//! plus p-value histogram and P-P plot construction.
//!
//! Small per-category counts rule out the asymptotic chi-squared reference,
//! so the p-value is estimated by a parametric bootstrap: fit, resample from
//! the fit, refit each replicate with the same estimator, and count how often
//! the replicate statistic reaches the observed one.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dataio::{Dataset, RunConfig};
use crate::distributions::sample;
use crate::error::{Error, Result};
use crate::estimation::{fit_model, GsdGrid, Model};
use crate::rng::derive_stream;
use crate::types::{ProbVector, ResponseCounts};

/// Outcome of one bootstrapped G-test.
#[derive(Debug, Clone, PartialEq)]
pub struct GofResult {
    pub model: Model,
    /// Observed G statistic.
    pub t_statistic: f64,
    /// Fraction of bootstrap statistics at or above the observed one.
    pub p_value: f64,
    /// Number of bootstrap replicates.
    pub mc: u32,
    pub seed: u64,
}

/// G statistic `T = sum over k of n_k ln(n_k / (n p_k))`, with the
/// convention that zero-count categories contribute nothing.
///
/// `T` is `n` times the KL divergence from the fitted distribution to the
/// empirical one, so it is non-negative; tiny negative rounding residue is
/// clamped. A zero fitted probability under a positive count makes the
/// statistic infinite.
pub fn g_statistic(counts: &ResponseCounts, fitted: &ProbVector) -> f64 {
    let n = counts.total() as f64;
    let mut acc = 0.0;
    for k in 0..5 {
        let c = counts[k];
        if c == 0 {
            continue;
        }
        if fitted[k] <= 0.0 {
            return f64::INFINITY;
        }
        acc += c as f64 * (c as f64 / (n * fitted[k])).ln();
    }
    acc.max(0.0)
}

/// Bootstrapped G-test of `counts` against `model`.
///
/// Replicate `r` draws from the substream `derive(seed, stimulus_id, r)`, so
/// the result is a pure function of its arguments and independent of thread
/// scheduling. Replicates are deduplicated before refitting; the p-value is
/// the multiplicity-weighted exceedance count.
pub fn bootstrap_gof(
    counts: &ResponseCounts,
    model: Model,
    mc: u32,
    seed: u64,
    stimulus_id: &str,
    grid: &GsdGrid,
) -> Result<GofResult> {
    if mc == 0 {
        return Err(Error::domain("mc must be at least 1"));
    }
    let n = counts.total();
    let fit = fit_model(model, counts, grid);
    let t = g_statistic(counts, &fit.pmf);

    let mut unique: HashMap<ResponseCounts, u32> = HashMap::new();
    for r in 0..mc {
        let mut stream = derive_stream(seed, stimulus_id, r as u64);
        let replicate = sample(&fit.pmf, n, &mut stream);
        *unique.entry(replicate).or_insert(0) += 1;
    }

    let entries: Vec<(ResponseCounts, u32)> = unique.into_iter().collect();
    let exceed: u64 = entries
        .par_iter()
        .map(|(replicate, mult)| {
            let refit = fit_model(model, replicate, grid);
            let t_r = g_statistic(replicate, &refit.pmf);
            if t_r >= t {
                *mult as u64
            } else {
                0
            }
        })
        .sum();

    Ok(GofResult {
        model,
        t_statistic: t,
        p_value: exceed as f64 / mc as f64,
        mc,
        seed,
    })
}

/// Run the bootstrapped G-test over a whole dataset, in parallel across
/// stimuli. Output is a pure function of `(dataset, config)`.
pub fn run_gof_batch(
    dataset: &Dataset,
    config: &RunConfig,
    grid: &GsdGrid,
) -> Result<Vec<(String, GofResult)>> {
    dataset
        .stimuli
        .par_iter()
        .map(|s| {
            bootstrap_gof(&s.counts, config.model, config.mc, config.seed, &s.id, grid)
                .map(|r| (s.id.clone(), r))
        })
        .collect()
}

/// Histogram of p-values with plot metadata.
#[derive(Debug, Clone, PartialEq)]
pub struct PvalueHistogram {
    pub bin_width: f64,
    /// `(bin_start, count)` per bin; the final bin is closed at 1.
    pub bins: Vec<(f64, u64)>,
    /// Position of the significance marker line.
    pub significance_marker: f64,
    /// Expected count per 5% of stimuli, the reference level drawn on plots.
    pub reference_level: f64,
    pub total: u64,
}

/// Bin p-values into equal-width bins over `[0, 1]`.
///
/// `bin_width` must divide 1 evenly. A p-value of exactly 1 lands in the last
/// bin. The metadata carries the 0.05 significance marker and the
/// 5%-of-stimuli reference level.
pub fn pvalue_histogram(p_values: &[f64], bin_width: f64) -> Result<PvalueHistogram> {
    if !(1e-6..=1.0).contains(&bin_width) {
        return Err(Error::domain(format!(
            "bin width {bin_width} outside [1e-6, 1]"
        )));
    }
    let k = (1.0 / bin_width).round();
    if (k * bin_width - 1.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "bin width {bin_width} does not divide 1 evenly"
        )));
    }
    let k = k as usize;
    let mut counts = vec![0u64; k];
    for (i, &p) in p_values.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "p-value #{} is {p}, outside [0, 1]",
                i + 1
            )));
        }
        let idx = ((p / bin_width) as usize).min(k - 1);
        counts[idx] += 1;
    }
    Ok(PvalueHistogram {
        bin_width,
        bins: counts
            .iter()
            .enumerate()
            .map(|(i, &c)| (i as f64 * bin_width, c))
            .collect(),
        significance_marker: 0.05,
        reference_level: 0.05 * p_values.len() as f64,
        total: p_values.len() as u64,
    })
}

/// One row of a p-value P-P plot.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PpPlotRow {
    pub alpha: f64,
    /// CDF of the uniform reference, i.e. `alpha` itself.
    pub theoretical_cdf: f64,
    /// Fraction of p-values at or below `alpha`.
    pub ecdf: f64,
    /// One-sided acceptance line `alpha + z sqrt(alpha (1 - alpha) / S)`.
    pub significance_line: f64,
}

/// P-P plot data plus the verdict over the inspection range.
#[derive(Debug, Clone, PartialEq)]
pub struct PpPlotData {
    pub rows: Vec<PpPlotRow>,
    pub confidence: f64,
    /// Alpha range over which the verdict is evaluated.
    pub inspection_range: (f64, f64),
    /// True when the ECDF stays at or below the significance line across the
    /// inspection range: the model is not contradicted by the p-values.
    pub verdict: bool,
    pub n_pvalues: u64,
}

/// Default verdict inspection range: the low p-value region.
pub const PP_INSPECTION_RANGE: (f64, f64) = (0.0, 0.2);

/// Alpha grid from 0.001 to 1 in steps of 0.001.
pub fn default_alpha_grid() -> Vec<f64> {
    (1..=1000).map(|i| i as f64 / 1000.0).collect()
}

/// Build P-P plot data for a batch of per-stimulus p-values.
///
/// The ECDF of the p-values is compared against the uniform diagonal with a
/// one-sided normal-approximation band at the given confidence.
pub fn pp_plot(p_values: &[f64], alpha_grid: &[f64], confidence: f64) -> Result<PpPlotData> {
    if !(confidence > 0.0 && confidence < 1.0) {
        return Err(Error::domain(format!(
            "confidence {confidence} outside (0, 1)"
        )));
    }
    for (i, &p) in p_values.iter().enumerate() {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!(
                "p-value #{} is {p}, outside [0, 1]",
                i + 1
            )));
        }
    }
    let z = crate::distributions::normal::norm_quantile(confidence);
    let s = p_values.len() as f64;

    let mut sorted = p_values.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("validated finite"));

    let mut rows = Vec::with_capacity(alpha_grid.len());
    let mut verdict = true;
    for &alpha in alpha_grid {
        let below = sorted.partition_point(|&p| p <= alpha);
        let ecdf = if sorted.is_empty() {
            0.0
        } else {
            below as f64 / s
        };
        let line = if sorted.is_empty() {
            alpha
        } else {
            alpha + z * (alpha * (1.0 - alpha) / s).sqrt()
        };
        if alpha >= PP_INSPECTION_RANGE.0 && alpha <= PP_INSPECTION_RANGE.1 && ecdf > line {
            verdict = false;
        }
        rows.push(PpPlotRow {
            alpha,
            theoretical_cdf: alpha,
            ecdf,
            significance_line: line,
        });
    }
    Ok(PpPlotData {
        rows,
        confidence,
        inspection_range: PP_INSPECTION_RANGE,
        verdict,
        n_pvalues: p_values.len() as u64,
    })
}
