//! Ordered Probit maximum-likelihood estimation.
//!
//! The latent-normal likelihood is maximised over a bounded box,
//! mu in [-2, 8] and sigma in [0.02, 10]: a coarse scan (mu step 0.05,
//! sigma log-spaced step 0.05) followed by a Nelder-Mead refinement in
//! (mu, ln sigma) with a fixed iteration budget. Degenerate samples push
//! sigma towards zero, so the hard lower bound keeps likelihoods finite.

use std::sync::OnceLock;

use super::{log_likelihood, FitResult, FittedParams, Model};
use crate::distributions::{discretized_normal_pmf, ProbitParams};
use crate::types::{ProbVector, ResponseCounts};

/// Search box for the latent mean.
pub const PROBIT_MU_RANGE: (f64, f64) = (-2.0, 8.0);
/// Search box for the latent standard deviation.
pub const PROBIT_SIGMA_RANGE: (f64, f64) = (0.02, 10.0);

const MU_STEP: f64 = 0.05;
const LN_SIGMA_STEP: f64 = 0.05;
const NM_MAX_ITER: usize = 200;
const NM_TOL: f64 = 1e-8;

struct CoarseGrid {
    points: Vec<(f64, f64)>, // (mu, sigma)
    ln_pmf: Vec<[f64; 5]>,
}

const LN_ZERO: f64 = -1e300;

fn coarse_grid() -> &'static CoarseGrid {
    static GRID: OnceLock<CoarseGrid> = OnceLock::new();
    GRID.get_or_init(|| {
        let n_mu = ((PROBIT_MU_RANGE.1 - PROBIT_MU_RANGE.0) / MU_STEP).round() as usize + 1;
        let ln_lo = PROBIT_SIGMA_RANGE.0.ln();
        let ln_hi = PROBIT_SIGMA_RANGE.1.ln();
        let mut ln_sigmas: Vec<f64> = Vec::new();
        let mut ls = ln_lo;
        while ls < ln_hi - 1e-12 {
            ln_sigmas.push(ls);
            ls += LN_SIGMA_STEP;
        }
        ln_sigmas.push(ln_hi);

        let mut points = Vec::new();
        let mut ln_pmf = Vec::new();
        for i in 0..n_mu {
            let mu = PROBIT_MU_RANGE.0 + i as f64 * MU_STEP;
            for &ls in &ln_sigmas {
                let sigma = ls.exp();
                let pmf = discretized_normal_pmf(mu, sigma).expect("sigma in box");
                let mut ln = [0.0; 5];
                for k in 0..5 {
                    ln[k] = if pmf[k] > 0.0 { pmf[k].ln() } else { LN_ZERO };
                }
                points.push((mu, sigma));
                ln_pmf.push(ln);
            }
        }
        CoarseGrid { points, ln_pmf }
    })
}

fn neg_log_lik(mu: f64, ln_sigma: f64, counts: &ResponseCounts) -> f64 {
    let mu = mu.clamp(PROBIT_MU_RANGE.0, PROBIT_MU_RANGE.1);
    let ln_sigma = ln_sigma.clamp(PROBIT_SIGMA_RANGE.0.ln(), PROBIT_SIGMA_RANGE.1.ln());
    let pmf = discretized_normal_pmf(mu, ln_sigma.exp()).expect("sigma in box");
    let mut acc = 0.0;
    for k in 0..5 {
        let n = counts[k];
        if n == 0 {
            continue;
        }
        acc += n as f64 * if pmf[k] > 0.0 { pmf[k].ln() } else { LN_ZERO };
    }
    -acc
}

/// Nelder-Mead in (mu, ln sigma), clamped to the search box. Returns the best
/// vertex seen. Entirely deterministic for a fixed start.
fn nelder_mead(start: (f64, f64), counts: &ResponseCounts) -> ((f64, f64), f64) {
    type Pt = [f64; 2];
    let f = |p: Pt| neg_log_lik(p[0], p[1], counts);

    let mut simplex: Vec<(Pt, f64)> = vec![
        ([start.0, start.1], 0.0),
        ([start.0 + MU_STEP, start.1], 0.0),
        ([start.0, start.1 + LN_SIGMA_STEP], 0.0),
    ];
    for v in &mut simplex {
        v.1 = f(v.0);
    }

    let mut best = simplex[0];
    for _ in 0..NM_MAX_ITER {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is finite"));
        if simplex[0].1 < best.1 {
            best = simplex[0];
        }
        if (simplex[2].1 - simplex[0].1).abs() < NM_TOL * (simplex[0].1.abs() + 1.0) {
            break;
        }

        let centroid = [
            0.5 * (simplex[0].0[0] + simplex[1].0[0]),
            0.5 * (simplex[0].0[1] + simplex[1].0[1]),
        ];
        let worst = simplex[2];
        let reflect = |t: f64| -> Pt {
            [
                centroid[0] + t * (centroid[0] - worst.0[0]),
                centroid[1] + t * (centroid[1] - worst.0[1]),
            ]
        };

        let xr = reflect(1.0);
        let fr = f(xr);
        if fr < simplex[0].1 {
            let xe = reflect(2.0);
            let fe = f(xe);
            simplex[2] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (xr, fr);
        } else {
            let xc = reflect(-0.5);
            let fc = f(xc);
            if fc < worst.1 {
                simplex[2] = (xc, fc);
            } else {
                // Shrink towards the best vertex.
                for i in 1..3 {
                    let p = [
                        0.5 * (simplex[0].0[0] + simplex[i].0[0]),
                        0.5 * (simplex[0].0[1] + simplex[i].0[1]),
                    ];
                    simplex[i] = (p, f(p));
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).expect("objective is finite"));
    if simplex[0].1 < best.1 {
        best = simplex[0];
    }
    ((best.0[0], best.0[1]), best.1)
}

/// Maximum-likelihood Ordered Probit fit over the bounded search box.
pub fn fit_probit(counts: &ResponseCounts) -> FitResult {
    let grid = coarse_grid();
    let c = [
        counts[0] as f64,
        counts[1] as f64,
        counts[2] as f64,
        counts[3] as f64,
        counts[4] as f64,
    ];

    let mut best_idx = 0;
    let mut best_ll = f64::NEG_INFINITY;
    for (idx, lp) in grid.ln_pmf.iter().enumerate() {
        let ll = c[0] * lp[0] + c[1] * lp[1] + c[2] * lp[2] + c[3] * lp[3] + c[4] * lp[4];
        if ll > best_ll {
            best_ll = ll;
            best_idx = idx;
        }
    }

    let (mu0, sigma0) = grid.points[best_idx];
    let ((mu, ln_sigma), _) = nelder_mead((mu0, sigma0.ln()), counts);
    let mu = mu.clamp(PROBIT_MU_RANGE.0, PROBIT_MU_RANGE.1);
    let sigma = ln_sigma
        .exp()
        .clamp(PROBIT_SIGMA_RANGE.0, PROBIT_SIGMA_RANGE.1);

    let pmf = discretized_normal_pmf(mu, sigma).expect("sigma in box");
    let refined_ll = log_likelihood(&pmf, counts);

    // Refinement must never end worse than the coarse optimum.
    let coarse_pmf =
        discretized_normal_pmf(mu0, sigma0).expect("sigma in box");
    let coarse_ll = log_likelihood(&coarse_pmf, counts);
    let (params, pmf, ll) = if refined_ll >= coarse_ll {
        (ProbitParams::new(mu, sigma).expect("valid"), pmf, refined_ll)
    } else {
        (
            ProbitParams::new(mu0, sigma0).expect("valid"),
            coarse_pmf,
            coarse_ll,
        )
    };

    FitResult {
        model: Model::Probit,
        params: FittedParams::Probit(params),
        pmf,
        log_likelihood: ll,
    }
}

/// Fitted probit PMF without the surrounding bookkeeping, for callers that
/// only need probabilities.
#[allow(dead_code)]
pub(crate) fn fit_probit_pmf(counts: &ResponseCounts) -> ProbVector {
    fit_probit(counts).pmf
}
