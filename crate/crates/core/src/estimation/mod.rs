//! Maximum-likelihood fitting of the three response models to a single
//! stimulus's counts, with the corrections that keep every fitted category
//! probability strictly positive: the two-most-probable-categories cap for
//! the GSD and the standard-deviation floor for the Simplified Li2020 model.

mod gsd_fit;
mod probit_fit;

pub use gsd_fit::{fit_gsd, GsdGrid};
pub use probit_fit::{fit_probit, PROBIT_MU_RANGE, PROBIT_SIGMA_RANGE};

use crate::distributions::normal::norm_quantile;
use crate::distributions::{discretized_normal_pmf, GsdParams, ProbitParams, SliParams};
use crate::types::{ProbVector, ResponseCounts};

/// The three response models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Model {
    Gsd,
    Probit,
    Sli,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Gsd => "gsd",
            Model::Probit => "probit",
            Model::Sli => "sli",
        }
    }
}

impl std::str::FromStr for Model {
    type Err = crate::error::Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "gsd" => Ok(Model::Gsd),
            "probit" => Ok(Model::Probit),
            "sli" => Ok(Model::Sli),
            other => Err(crate::error::Error::domain(format!(
                "unknown model '{other}' (expected gsd, probit or sli)"
            ))),
        }
    }
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fitted parameters, tagged by model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FittedParams {
    Gsd(GsdParams),
    Probit(ProbitParams),
    Sli(SliParams),
}

/// Result of fitting one model to one stimulus.
#[derive(Debug, Clone, PartialEq)]
pub struct FitResult {
    pub model: Model,
    pub params: FittedParams,
    pub pmf: ProbVector,
    pub log_likelihood: f64,
}

/// Log-likelihood of counts under a category distribution:
/// `sum over observed k of n_k ln p_k`. Categories with zero counts
/// contribute nothing; an observed category with zero probability makes the
/// data impossible and the result is negative infinity.
pub fn log_likelihood(probs: &ProbVector, counts: &ResponseCounts) -> f64 {
    let mut acc = 0.0;
    for k in 0..5 {
        let n = counts[k];
        if n == 0 {
            continue;
        }
        if probs[k] <= 0.0 {
            return f64::NEG_INFINITY;
        }
        acc += n as f64 * probs[k].ln();
    }
    acc
}

/// Empirical PMF with half a response added to every category count,
/// `(n_k + 0.5) / (n + 2.5)`, so no category ever gets zero probability.
pub fn corrected_empirical_pmf(counts: &ResponseCounts) -> ProbVector {
    let n = counts.total() as f64;
    let mut p = [0.0; 5];
    for k in 0..5 {
        p[k] = (counts[k] as f64 + 0.5) / (n + 2.5);
    }
    ProbVector::new_unchecked(p)
}

/// Sum of the two largest category probabilities.
pub fn p_max(probs: &ProbVector) -> f64 {
    let mut top = 0.0f64;
    let mut second = 0.0f64;
    for p in probs.iter() {
        if p > top {
            second = top;
            top = p;
        } else if p > second {
            second = p;
        }
    }
    top + second
}

/// Lower limit on the SLI standard deviation,
/// `c_n = 1 / (2 Q(1 - 1/(2n)))` with `Q` the standard-normal quantile.
///
/// A single response carries no spread information and would make the floor
/// infinite (`Q(1/2) = 0`), so `c_1` is capped at 10, the top of the probit
/// search box.
pub fn sigma_floor(n: u64) -> f64 {
    if n <= 1 {
        return 10.0;
    }
    1.0 / (2.0 * norm_quantile(1.0 - 1.0 / (2.0 * n as f64)))
}

/// Fit the Simplified Li2020 model: a normal with mean equal to the MOS and
/// variance equal to the unbiased sample variance, discretized onto the
/// scale, with the standard deviation floored at `sigma_floor(n)`.
pub fn fit_sli(counts: &ResponseCounts) -> FitResult {
    let n = counts.total();
    let mos = counts.mos();
    let s2 = counts.sample_variance();
    let sigma_eff = s2.sqrt().max(sigma_floor(n));
    let pmf = discretized_normal_pmf(mos, sigma_eff).expect("sigma_eff > 0 by construction");
    let log_lik = log_likelihood(&pmf, counts);
    FitResult {
        model: Model::Sli,
        params: FittedParams::Sli(SliParams { mos, s2, sigma_eff }),
        pmf,
        log_likelihood: log_lik,
    }
}

/// Fit `model` to `counts`. The GSD route needs the precomputed grid.
pub fn fit_model(model: Model, counts: &ResponseCounts, grid: &GsdGrid) -> FitResult {
    match model {
        Model::Gsd => fit_gsd(counts, grid),
        Model::Probit => fit_probit(counts),
        Model::Sli => fit_sli(counts),
    }
}
