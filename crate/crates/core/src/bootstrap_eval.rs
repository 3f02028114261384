//! Bootstrapping effectiveness test: does a model fitted to small subsamples
//! reconstruct a large sample's distribution better than the subsample's own
//! corrected empirical PMF?
//!
//! For each of `mc` subsamples drawn from the large sample's raw empirical
//! PMF, both candidate estimates are scored by their log-likelihood on the
//! large sample; the sign of the log-ratio `W` decides the round. The final
//! verdict comes from a 95% confidence interval on the difference between
//! the two win probabilities.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::dataio::{Dataset, RunConfig};
use crate::distributions::sample;
use crate::error::{Error, Result};
use crate::estimation::{corrected_empirical_pmf, fit_model, GsdGrid, Model};
use crate::rng::derive_stream;
use crate::types::{ProbVector, ResponseCounts};

/// Sentinel for an infinite likelihood ratio (empirical estimate assigns zero
/// mass to an observed category while the model does not).
pub const W_SENTINEL: f64 = 1e10;

/// Who won the comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ModelBetter,
    EmpiricalBetter,
    NoSignificantDifference,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::ModelBetter => "model_better",
            Verdict::EmpiricalBetter => "empirical_better",
            Verdict::NoSignificantDifference => "no_significant_difference",
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Tally of replicate statistics by sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WSummary {
    pub positive: u64,
    pub negative: u64,
    pub zero: u64,
    /// Replicates that hit the [`W_SENTINEL`] path; these also count as
    /// positive.
    pub infinite: u64,
}

/// Outcome of the comparison for one stimulus.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonResult {
    pub model: Model,
    pub n_small: u64,
    pub mc: u32,
    pub seed: u64,
    /// Estimated probability that the model's likelihood beats the
    /// empirical one.
    pub p_m_hat: f64,
    /// Estimated probability that the empirical likelihood wins.
    pub p_e_hat: f64,
    /// `p_m_hat - p_e_hat`.
    pub diff: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub verdict: Verdict,
    pub w_summary: WSummary,
}

/// Log-likelihood-ratio statistic
/// `W = sum over observed k of N_k (ln q_k - ln v_k)`.
///
/// When the (uncorrected) empirical estimate `v` has zero mass on an observed
/// category, the ratio is infinite and the sentinel `1e10` is returned. The
/// corrected estimators used by [`compare_vs_empirical`] never trigger this
/// path.
pub fn w_statistic(
    large: &ResponseCounts,
    model_probs: &ProbVector,
    empirical_probs: &ProbVector,
) -> f64 {
    let mut acc = 0.0;
    for k in 0..5 {
        let n = large[k];
        if n == 0 {
            continue;
        }
        if empirical_probs[k] <= 0.0 {
            return W_SENTINEL;
        }
        acc += n as f64 * (model_probs[k].ln() - empirical_probs[k].ln());
    }
    acc
}

/// Statistic for one bootstrap subsample, with the GSD-only exception: when
/// the subsample occupies a single category or two neighbouring categories,
/// the model and the empirical distribution perform identically and `W = 0`.
pub fn replicate_w(
    large: &ResponseCounts,
    subsample: &ResponseCounts,
    model: Model,
    grid: &GsdGrid,
) -> f64 {
    if model == Model::Gsd
        && (subsample.is_single_category() || subsample.is_two_neighbouring_categories())
    {
        return 0.0;
    }
    let fit = fit_model(model, subsample, grid);
    let empirical = corrected_empirical_pmf(subsample);
    w_statistic(large, &fit.pmf, &empirical)
}

/// 95% confidence interval for the difference of win probabilities,
/// `d ± 1.96 sqrt((p_m + p_e - d^2) / mc)`.
pub fn comparison_ci(p_m_hat: f64, p_e_hat: f64, mc: u32) -> (f64, f64) {
    let d = p_m_hat - p_e_hat;
    let var = (p_m_hat + p_e_hat - d * d).max(0.0) / mc as f64;
    let half = 1.96 * var.sqrt();
    (d - half, d + half)
}

fn verdict_from_ci(ci_low: f64, ci_high: f64) -> Verdict {
    if ci_low > 0.0 {
        Verdict::ModelBetter
    } else if ci_high < 0.0 {
        Verdict::EmpiricalBetter
    } else {
        Verdict::NoSignificantDifference
    }
}

/// Run the bootstrapping effectiveness test for one stimulus.
///
/// Subsamples of size `n_small` are drawn from the raw (uncorrected)
/// empirical PMF of `large`; each is scored by [`replicate_w`] with the
/// corrected estimators. Only the GSD and SLI models enter this comparison.
pub fn compare_vs_empirical(
    large: &ResponseCounts,
    n_small: u64,
    model: Model,
    mc: u32,
    seed: u64,
    stimulus_id: &str,
    grid: &GsdGrid,
) -> Result<ComparisonResult> {
    if model == Model::Probit {
        return Err(Error::domain(
            "the bootstrapping effectiveness test compares gsd or sli against the empirical distribution",
        ));
    }
    if mc == 0 {
        return Err(Error::domain("mc must be at least 1"));
    }
    if n_small == 0 {
        return Err(Error::domain("subsample size must be at least 1"));
    }
    if n_small >= large.total() {
        return Err(Error::domain(format!(
            "subsample size {n_small} must be smaller than the large sample ({})",
            large.total()
        )));
    }

    let epmf = large.empirical_pmf();
    let mut unique: HashMap<ResponseCounts, u64> = HashMap::new();
    for r in 0..mc {
        let mut stream = derive_stream(seed, stimulus_id, r as u64);
        let subsample = sample(&epmf, n_small, &mut stream);
        *unique.entry(subsample).or_insert(0) += 1;
    }

    let entries: Vec<(ResponseCounts, u64)> = unique.into_iter().collect();
    let summary = entries
        .par_iter()
        .map(|(subsample, mult)| {
            let w = replicate_w(large, subsample, model, grid);
            let mut s = WSummary::default();
            if w == W_SENTINEL {
                s.infinite = *mult;
                s.positive = *mult;
            } else if w > 0.0 {
                s.positive = *mult;
            } else if w < 0.0 {
                s.negative = *mult;
            } else {
                s.zero = *mult;
            }
            s
        })
        .reduce(WSummary::default, |a, b| WSummary {
            positive: a.positive + b.positive,
            negative: a.negative + b.negative,
            zero: a.zero + b.zero,
            infinite: a.infinite + b.infinite,
        });

    let p_m_hat = summary.positive as f64 / mc as f64;
    let p_e_hat = summary.negative as f64 / mc as f64;
    let (ci_low, ci_high) = comparison_ci(p_m_hat, p_e_hat, mc);
    Ok(ComparisonResult {
        model,
        n_small,
        mc,
        seed,
        p_m_hat,
        p_e_hat,
        diff: p_m_hat - p_e_hat,
        ci_low,
        ci_high,
        verdict: verdict_from_ci(ci_low, ci_high),
        w_summary: summary,
    })
}

/// Run the comparison for every stimulus of a dataset at one subsample
/// size, in parallel across stimuli. Output is a pure function of
/// `(dataset, n_small, config)`.
pub fn run_comparison_batch(
    dataset: &Dataset,
    n_small: u64,
    config: &RunConfig,
    grid: &GsdGrid,
) -> Result<Vec<(String, ComparisonResult)>> {
    dataset
        .stimuli
        .par_iter()
        .map(|s| {
            compare_vs_empirical(
                &s.counts,
                n_small,
                config.model,
                config.mc,
                config.seed,
                &s.id,
                grid,
            )
            .map(|r| (s.id.clone(), r))
        })
        .collect()
}

/// One bin of the probability-difference histogram.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiffBin {
    pub bin_start: f64,
    /// Stimuli in this bin whose comparison was statistically significant.
    pub significant: u64,
    pub insignificant: u64,
}

/// Histogram of per-stimulus probability differences with the
/// significant/insignificant split and side totals.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffHistogram {
    pub bin_width: f64,
    pub bins: Vec<DiffBin>,
    pub model_better: u64,
    pub empirical_better: u64,
    pub no_significant_difference: u64,
}

/// Bin the probability differences of a batch of comparisons over `[-1, 1]`.
pub fn difference_histogram(results: &[ComparisonResult], bin_width: f64) -> Result<DiffHistogram> {
    if !(1e-6..=2.0).contains(&bin_width) {
        return Err(Error::domain(format!(
            "bin width {bin_width} outside [1e-6, 2]"
        )));
    }
    let k = (2.0 / bin_width).round();
    if (k * bin_width - 2.0).abs() > 1e-9 {
        return Err(Error::domain(format!(
            "bin width {bin_width} does not divide [-1, 1] evenly"
        )));
    }
    let k = k as usize;
    let mut bins: Vec<DiffBin> = (0..k)
        .map(|i| DiffBin {
            bin_start: -1.0 + i as f64 * bin_width,
            significant: 0,
            insignificant: 0,
        })
        .collect();
    let mut model_better = 0;
    let mut empirical_better = 0;
    let mut no_diff = 0;
    for r in results {
        let idx = (((r.diff + 1.0) / bin_width) as usize).min(k - 1);
        match r.verdict {
            Verdict::ModelBetter => model_better += 1,
            Verdict::EmpiricalBetter => empirical_better += 1,
            Verdict::NoSignificantDifference => no_diff += 1,
        }
        if r.verdict == Verdict::NoSignificantDifference {
            bins[idx].insignificant += 1;
        } else {
            bins[idx].significant += 1;
        }
    }
    Ok(DiffHistogram {
        bin_width,
        bins,
        model_better,
        empirical_better,
        no_significant_difference: no_diff,
    })
}
