//! Probability models on the 5-level response scale: the Generalised Score
//! Distribution, the discretized normal shared by the Ordered Probit and
//! Simplified Li2020 models, multinomial sampling and parameter-space maps.

mod gsd;
pub mod normal;

pub use gsd::{
    beta_binomial_branch, gsd_moments, gsd_pmf, mixture_branch, rho_from_variance,
    shifted_binomial_pmf, variance_bounds, GsdParams, VarianceBounds,
};

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::types::{ProbVector, ResponseCounts};
use normal::norm_cdf;

/// Ordered Probit parameters: latent normal mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbitParams {
    mu: f64,
    sigma: f64,
}

impl ProbitParams {
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if sigma <= 0.0 || sigma.is_nan() || mu.is_nan() {
            return Err(Error::domain(format!(
                "invalid probit parameters mu = {mu}, sigma = {sigma}"
            )));
        }
        Ok(ProbitParams { mu, sigma })
    }

    pub fn mu(&self) -> f64 {
        self.mu
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

/// Simplified Li2020 parameters: sample mean, sample variance and the
/// floored standard deviation actually used for discretization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SliParams {
    pub mos: f64,
    pub s2: f64,
    pub sigma_eff: f64,
}

/// Discretize and censor a normal distribution onto the 5-level scale.
///
/// Interior categories take the CDF mass of `(s - 0.5, s + 0.5]`; the end
/// categories absorb the tails below 1.5 and above 4.5. Computed as CDF
/// differences, so the five masses telescope to exactly one.
pub fn discretized_normal_pmf(mu: f64, sigma: f64) -> Result<ProbVector> {
    if sigma <= 0.0 || sigma.is_nan() || mu.is_nan() {
        return Err(Error::domain(format!(
            "discretized normal needs sigma > 0, got mu = {mu}, sigma = {sigma}"
        )));
    }
    let cdf_at = |cut: f64| norm_cdf((cut - mu) / sigma);
    let c = [cdf_at(1.5), cdf_at(2.5), cdf_at(3.5), cdf_at(4.5)];
    let pmf = [
        c[0],
        (c[1] - c[0]).max(0.0),
        (c[2] - c[1]).max(0.0),
        (c[3] - c[2]).max(0.0),
        1.0 - c[3],
    ];
    Ok(ProbVector::new_unchecked(pmf))
}

/// Draw a multinomial sample of size `n` from `probs`.
///
/// One categorical draw per response via inverse-CDF walk; identical streams
/// give identical counts on every platform and thread count.
pub fn sample(probs: &ProbVector, n: u64, stream: &mut Stream) -> ResponseCounts {
    let mut cum = [0.0f64; 5];
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for k in 0..5 {
        acc += probs[k];
        cum[k] = acc;
        if probs[k] > 0.0 {
            last_nonzero = k;
        }
    }

    let mut counts = [0u64; 5];
    'draw: for _ in 0..n {
        let u = stream.next_f64();
        for k in 0..5 {
            if u < cum[k] {
                counts[k] += 1;
                continue 'draw;
            }
        }
        // u fell into the rounding slack above cum[4]; assign to the last
        // category that carries mass.
        counts[last_nonzero] += 1;
    }
    ResponseCounts::new_unchecked(counts)
}

/// Which model a parameter-space map walks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapModel {
    Gsd,
    Probit,
}

/// One grid point of a parameter-space map: parameters and the induced
/// discrete moments.
#[derive(Debug, Clone, Copy)]
pub struct ParamMapRow {
    pub param1: f64,
    pub param2: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Inclusive linear grid specification `start..=stop` by `step`.
#[derive(Debug, Clone, Copy)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl GridSpec {
    pub fn new(start: f64, stop: f64, step: f64) -> Result<Self> {
        if !(start.is_finite() && stop.is_finite() && step.is_finite())
            || stop < start
            || step <= 0.0
        {
            return Err(Error::domain(format!(
                "invalid grid {start}:{stop}:{step}"
            )));
        }
        Ok(GridSpec { start, stop, step })
    }

    pub fn values(&self) -> Vec<f64> {
        let mut out = Vec::new();
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        for i in 0..=n {
            out.push(self.start + i as f64 * self.step);
        }
        out
    }
}

/// Map a model's parameter grid to the mean/variance plane of the induced
/// response distribution. For the GSD the grid is (psi, rho); for the
/// Ordered Probit it is (mu, sigma).
pub fn parameter_space_map(
    model: MapModel,
    param1: GridSpec,
    param2: GridSpec,
) -> Result<Vec<ParamMapRow>> {
    let mut rows = Vec::new();
    for a in param1.values() {
        for b in param2.values() {
            let (mean, variance) = match model {
                MapModel::Gsd => {
                    let params = GsdParams::new(a, b)?;
                    let pmf = gsd_pmf(&params);
                    (pmf.mean(), pmf.variance())
                }
                MapModel::Probit => {
                    let pmf = discretized_normal_pmf(a, b)?;
                    (pmf.mean(), pmf.variance())
                }
            };
            rows.push(ParamMapRow {
                param1: a,
                param2: b,
                mean,
                variance,
            });
        }
    }
    Ok(rows)
}
