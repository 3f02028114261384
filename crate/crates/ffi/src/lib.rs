//! C ABI for the `gsd` crate.
//!
//! The surface follows the usual C conventions: an opaque context handle
//! owning the precomputed fitting grid, plain `repr(C)` output structs,
//! status codes instead of panics, and caller-provided buffers. All functions
//! are safe to call from any thread; the context is immutable after
//! construction.
//!
//! The matching header is generated into `include/gsd_ffi.h` by the build
//! script.

use std::ffi::{c_char, CStr};

use gsd::bootstrap_eval::{compare_vs_empirical, Verdict};
use gsd::distributions::{discretized_normal_pmf, gsd_pmf, variance_bounds, GsdParams};
use gsd::estimation::{fit_gsd, fit_probit, fit_sli, FittedParams, GsdGrid, Model};
use gsd::gof::bootstrap_gof;
use gsd::types::ResponseCounts;

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsdStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullPointer = 1,
    /// An argument was outside its domain (parameter range, empty counts,
    /// zero replicates, subsample not smaller than the sample).
    InvalidArgument = 2,
    /// A string argument was not valid UTF-8.
    InvalidUtf8 = 3,
}

/// Model selector mirroring the core enum.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsdModel {
    Gsd = 0,
    Probit = 1,
    Sli = 2,
}

impl From<GsdModel> for Model {
    fn from(m: GsdModel) -> Model {
        match m {
            GsdModel::Gsd => Model::Gsd,
            GsdModel::Probit => Model::Probit,
            GsdModel::Sli => Model::Sli,
        }
    }
}

/// Opaque handle owning the precomputed GSD fitting grid.
pub struct GsdContext {
    grid: GsdGrid,
}

/// GSD fit output.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsdFitGsdResult {
    pub psi: f64,
    pub rho: f64,
    pub log_likelihood: f64,
    pub pmf: [f64; 5],
}

/// Ordered Probit fit output.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsdFitProbitResult {
    pub mu: f64,
    pub sigma: f64,
    pub log_likelihood: f64,
    pub pmf: [f64; 5],
}

/// Simplified Li2020 fit output.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsdFitSliResult {
    pub mos: f64,
    pub s2: f64,
    pub sigma_eff: f64,
    pub log_likelihood: f64,
    pub pmf: [f64; 5],
}

/// Bootstrapped G-test output.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsdGofResult {
    pub t_statistic: f64,
    pub p_value: f64,
}

/// Comparison verdict.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsdVerdict {
    ModelBetter = 0,
    EmpiricalBetter = 1,
    NoSignificantDifference = 2,
}

/// Bootstrapping effectiveness test output.
#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct GsdComparisonResult {
    pub p_m_hat: f64,
    pub p_e_hat: f64,
    pub diff: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub verdict: GsdVerdict,
    pub w_positive: u64,
    pub w_negative: u64,
    pub w_zero: u64,
    pub w_infinite: u64,
}

/// Create a context. Free with [`gsd_context_free`].
#[no_mangle]
pub extern "C" fn gsd_context_new() -> *mut GsdContext {
    Box::into_raw(Box::new(GsdContext {
        grid: GsdGrid::new(),
    }))
}

/// Free a context created by [`gsd_context_new`]. Null is a no-op.
///
/// # Safety
/// `ctx` must be a pointer previously returned by [`gsd_context_new`] that
/// has not been freed yet.
#[no_mangle]
pub unsafe extern "C" fn gsd_context_free(ctx: *mut GsdContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Human-readable message for a status code. The returned pointer is static.
#[no_mangle]
pub extern "C" fn gsd_status_message(status: GsdStatus) -> *const c_char {
    let msg: &'static [u8] = match status {
        GsdStatus::Ok => b"ok\0",
        GsdStatus::NullPointer => b"null pointer argument\0",
        GsdStatus::InvalidArgument => b"argument outside its domain\0",
        GsdStatus::InvalidUtf8 => b"string argument is not valid UTF-8\0",
    };
    msg.as_ptr() as *const c_char
}

unsafe fn counts_from_ptr(counts: *const u64) -> Result<ResponseCounts, GsdStatus> {
    if counts.is_null() {
        return Err(GsdStatus::NullPointer);
    }
    let arr = *(counts as *const [u64; 5]);
    ResponseCounts::new(arr).map_err(|_| GsdStatus::InvalidArgument)
}

unsafe fn str_from_ptr<'a>(s: *const c_char) -> Result<&'a str, GsdStatus> {
    if s.is_null() {
        return Err(GsdStatus::NullPointer);
    }
    CStr::from_ptr(s).to_str().map_err(|_| GsdStatus::InvalidUtf8)
}

/// GSD probability mass function. Writes five probabilities to `out`.
///
/// # Safety
/// `out` must point to an array of at least five doubles.
#[no_mangle]
pub unsafe extern "C" fn gsd_pmf_eval(psi: f64, rho: f64, out: *mut f64) -> GsdStatus {
    if out.is_null() {
        return GsdStatus::NullPointer;
    }
    let params = match GsdParams::new(psi, rho) {
        Ok(p) => p,
        Err(_) => return GsdStatus::InvalidArgument,
    };
    let pmf = gsd_pmf(&params);
    std::ptr::copy_nonoverlapping(pmf.as_array().as_ptr(), out, 5);
    GsdStatus::Ok
}

/// Variance bounds and branch cutoff for a GSD mean.
///
/// # Safety
/// `v_min`, `v_max` and `c_cutoff` must be valid writable pointers.
#[no_mangle]
pub unsafe extern "C" fn gsd_variance_bounds(
    psi: f64,
    v_min: *mut f64,
    v_max: *mut f64,
    c_cutoff: *mut f64,
) -> GsdStatus {
    if v_min.is_null() || v_max.is_null() || c_cutoff.is_null() {
        return GsdStatus::NullPointer;
    }
    match variance_bounds(psi) {
        Ok(b) => {
            *v_min = b.v_min;
            *v_max = b.v_max;
            *c_cutoff = b.c_cutoff;
            GsdStatus::Ok
        }
        Err(_) => GsdStatus::InvalidArgument,
    }
}

/// Discretized-censored normal PMF on the 5-level scale.
///
/// # Safety
/// `out` must point to an array of at least five doubles.
#[no_mangle]
pub unsafe extern "C" fn gsd_discretized_normal_pmf(
    mu: f64,
    sigma: f64,
    out: *mut f64,
) -> GsdStatus {
    if out.is_null() {
        return GsdStatus::NullPointer;
    }
    match discretized_normal_pmf(mu, sigma) {
        Ok(pmf) => {
            std::ptr::copy_nonoverlapping(pmf.as_array().as_ptr(), out, 5);
            GsdStatus::Ok
        }
        Err(_) => GsdStatus::InvalidArgument,
    }
}

/// Constrained maximum-likelihood GSD fit.
///
/// # Safety
/// `ctx` must be a live context, `counts` an array of five category counts,
/// `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gsd_fit_gsd(
    ctx: *const GsdContext,
    counts: *const u64,
    out: *mut GsdFitGsdResult,
) -> GsdStatus {
    if ctx.is_null() || out.is_null() {
        return GsdStatus::NullPointer;
    }
    let counts = match counts_from_ptr(counts) {
        Ok(c) => c,
        Err(s) => return s,
    };
    let fit = fit_gsd(&counts, &(*ctx).grid);
    let FittedParams::Gsd(p) = fit.params else {
        unreachable!("gsd fit returns gsd params")
    };
    *out = GsdFitGsdResult {
        psi: p.psi(),
        rho: p.rho(),
        log_likelihood: fit.log_likelihood,
        pmf: *fit.pmf.as_array(),
    };
    GsdStatus::Ok
}

/// Maximum-likelihood Ordered Probit fit over the bounded search box.
///
/// # Safety
/// `counts` must be an array of five category counts, `out` a valid writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gsd_fit_probit(
    counts: *const u64,
    out: *mut GsdFitProbitResult,
) -> GsdStatus {
    if out.is_null() {
        return GsdStatus::NullPointer;
    }
    let counts = match counts_from_ptr(counts) {
        Ok(c) => c,
        Err(s) => return s,
    };
    let fit = fit_probit(&counts);
    let FittedParams::Probit(p) = fit.params else {
        unreachable!("probit fit returns probit params")
    };
    *out = GsdFitProbitResult {
        mu: p.mu(),
        sigma: p.sigma(),
        log_likelihood: fit.log_likelihood,
        pmf: *fit.pmf.as_array(),
    };
    GsdStatus::Ok
}

/// Simplified Li2020 fit (moment matching with the floored deviation).
///
/// # Safety
/// `counts` must be an array of five category counts, `out` a valid writable
/// pointer.
#[no_mangle]
pub unsafe extern "C" fn gsd_fit_sli(counts: *const u64, out: *mut GsdFitSliResult) -> GsdStatus {
    if out.is_null() {
        return GsdStatus::NullPointer;
    }
    let counts = match counts_from_ptr(counts) {
        Ok(c) => c,
        Err(s) => return s,
    };
    let fit = fit_sli(&counts);
    let FittedParams::Sli(p) = fit.params else {
        unreachable!("sli fit returns sli params")
    };
    *out = GsdFitSliResult {
        mos: p.mos,
        s2: p.s2,
        sigma_eff: p.sigma_eff,
        log_likelihood: fit.log_likelihood,
        pmf: *fit.pmf.as_array(),
    };
    GsdStatus::Ok
}

/// Bootstrapped G-test of goodness-of-fit. Deterministic in
/// `(counts, model, mc, seed, stimulus_id)`.
///
/// # Safety
/// `ctx` must be a live context, `counts` an array of five category counts,
/// `stimulus_id` a NUL-terminated string, `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gsd_bootstrap_gof(
    ctx: *const GsdContext,
    counts: *const u64,
    model: GsdModel,
    mc: u32,
    seed: u64,
    stimulus_id: *const c_char,
    out: *mut GsdGofResult,
) -> GsdStatus {
    if ctx.is_null() || out.is_null() {
        return GsdStatus::NullPointer;
    }
    let counts = match counts_from_ptr(counts) {
        Ok(c) => c,
        Err(s) => return s,
    };
    let id = match str_from_ptr(stimulus_id) {
        Ok(s) => s,
        Err(s) => return s,
    };
    match bootstrap_gof(&counts, model.into(), mc, seed, id, &(*ctx).grid) {
        Ok(r) => {
            *out = GsdGofResult {
                t_statistic: r.t_statistic,
                p_value: r.p_value,
            };
            GsdStatus::Ok
        }
        Err(_) => GsdStatus::InvalidArgument,
    }
}

/// Bootstrapping effectiveness test of a model (gsd or sli) against the
/// empirical distribution.
///
/// # Safety
/// `ctx` must be a live context, `large` an array of five category counts,
/// `stimulus_id` a NUL-terminated string, `out` a valid writable pointer.
#[no_mangle]
pub unsafe extern "C" fn gsd_compare_vs_empirical(
    ctx: *const GsdContext,
    large: *const u64,
    n_small: u64,
    model: GsdModel,
    mc: u32,
    seed: u64,
    stimulus_id: *const c_char,
    out: *mut GsdComparisonResult,
) -> GsdStatus {
    if ctx.is_null() || out.is_null() {
        return GsdStatus::NullPointer;
    }
    let large = match counts_from_ptr(large) {
        Ok(c) => c,
        Err(s) => return s,
    };
    let id = match str_from_ptr(stimulus_id) {
        Ok(s) => s,
        Err(s) => return s,
    };
    match compare_vs_empirical(&large, n_small, model.into(), mc, seed, id, &(*ctx).grid) {
        Ok(r) => {
            *out = GsdComparisonResult {
                p_m_hat: r.p_m_hat,
                p_e_hat: r.p_e_hat,
                diff: r.diff,
                ci_low: r.ci_low,
                ci_high: r.ci_high,
                verdict: match r.verdict {
                    Verdict::ModelBetter => GsdVerdict::ModelBetter,
                    Verdict::EmpiricalBetter => GsdVerdict::EmpiricalBetter,
                    Verdict::NoSignificantDifference => GsdVerdict::NoSignificantDifference,
                },
                w_positive: r.w_summary.positive,
                w_negative: r.w_summary.negative,
                w_zero: r.w_summary.zero,
                w_infinite: r.w_summary.infinite,
            };
            GsdStatus::Ok
        }
        Err(_) => GsdStatus::InvalidArgument,
    }
}
