//! Constrained maximum-likelihood GSD estimator.
//!
//! The likelihood is maximised over a fixed parameter grid (psi step 0.01,
//! rho step 0.005) filtered by the sample-size cap on the two most probable
//! categories, `p_max <= 1 - 1/n`. The grid of log-PMFs is precomputed once
//! and shared; a full scan is a few hundred thousand fused multiply-adds, so
//! single fits are cheap and bootstrap refits batch well.

use std::sync::OnceLock;

use super::{log_likelihood, p_max, FitResult, FittedParams, Model};
use crate::distributions::{gsd_pmf, GsdParams};
use crate::types::ResponseCounts;

/// Stand-in for `ln 0` that keeps `0 * LN_ZERO == 0` (IEEE `0 * -inf` is NaN)
/// while making any positive count at a zero-probability cell lose every
/// comparison against a finite likelihood.
const LN_ZERO: f64 = -1e300;

const PSI_STEP: f64 = 0.01;
const RHO_STEP: f64 = 0.005;
const N_PSI: usize = 401;
const N_RHO: usize = 201;

/// Precomputed GSD PMFs and log-PMFs over the fitting grid. Immutable after
/// construction and shareable across threads.
pub struct GsdGrid {
    psi: Vec<f64>,
    rho: Vec<f64>,
    pmf: Vec<[f64; 5]>,
    ln_pmf: Vec<[f64; 5]>,
    p_max: Vec<f64>,
}

impl GsdGrid {
    pub fn new() -> Self {
        let psi: Vec<f64> = (0..N_PSI).map(|i| 1.0 + i as f64 * PSI_STEP).collect();
        let rho: Vec<f64> = (0..N_RHO).map(|j| j as f64 * RHO_STEP).collect();

        let mut pmf = Vec::with_capacity(N_PSI * N_RHO);
        let mut ln_pmf = Vec::with_capacity(N_PSI * N_RHO);
        let mut pmax = Vec::with_capacity(N_PSI * N_RHO);
        for &a in &psi {
            for &b in &rho {
                let p = gsd_pmf(&GsdParams::new(a, b).expect("grid point in range"));
                let arr = *p.as_array();
                let mut ln = [0.0; 5];
                for k in 0..5 {
                    ln[k] = if arr[k] > 0.0 { arr[k].ln() } else { LN_ZERO };
                }
                pmf.push(arr);
                ln_pmf.push(ln);
                pmax.push(p_max(&p));
            }
        }
        GsdGrid {
            psi,
            rho,
            pmf,
            ln_pmf,
            p_max: pmax,
        }
    }

    /// Process-wide shared instance, built on first use.
    pub fn shared() -> &'static GsdGrid {
        static GRID: OnceLock<GsdGrid> = OnceLock::new();
        GRID.get_or_init(GsdGrid::new)
    }

    fn params_at(&self, idx: usize) -> GsdParams {
        let i = idx / N_RHO;
        let j = idx % N_RHO;
        GsdParams::new(self.psi[i], self.rho[j]).expect("grid point in range")
    }
}

impl Default for GsdGrid {
    fn default() -> Self {
        Self::new()
    }
}

/// Maximum-likelihood GSD fit under the constraint
/// `p_max(pmf) <= 1 - 1/n`.
///
/// Ties break towards smaller psi, then smaller rho. For `n = 1` the
/// constraint bound is zero, below the smallest two-category mass any
/// distribution on five categories can have (0.4), so the cap is dropped and
/// the unconstrained grid maximum is returned.
pub fn fit_gsd(counts: &ResponseCounts, grid: &GsdGrid) -> FitResult {
    let n = counts.total();
    let bound = 1.0 - 1.0 / n as f64;
    let unconstrained = n == 1;

    let c = [
        counts[0] as f64,
        counts[1] as f64,
        counts[2] as f64,
        counts[3] as f64,
        counts[4] as f64,
    ];

    let mut best_idx = usize::MAX;
    let mut best_ll = f64::NEG_INFINITY;
    for idx in 0..grid.ln_pmf.len() {
        if !unconstrained && grid.p_max[idx] > bound {
            continue;
        }
        let lp = &grid.ln_pmf[idx];
        let ll = c[0] * lp[0] + c[1] * lp[1] + c[2] * lp[2] + c[3] * lp[3] + c[4] * lp[4];
        if ll > best_ll {
            best_ll = ll;
            best_idx = idx;
        }
    }
    debug_assert!(best_idx != usize::MAX, "no grid point selected");

    let params = grid.params_at(best_idx);
    let pmf = crate::types::ProbVector::new_unchecked(grid.pmf[best_idx]);
    FitResult {
        model: Model::Gsd,
        params: FittedParams::Gsd(params),
        log_likelihood: log_likelihood(&pmf, counts),
        pmf,
    }
}
