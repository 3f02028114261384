//! The Generalised Score Distribution: a two-parameter discrete distribution
//! on the 5-level scale.
//!
//! `psi` in `[1, 5]` is the expected response; `rho` in `[0, 1]` is a
//! confidence parameter linear in variance (`rho = 1` gives the smallest
//! variance achievable at that mean, `rho = 0` the largest). The distribution
//! has two regimes split at the cutoff `C(psi)` where its variance equals the
//! variance of a shifted binomial: below the cutoff it is a reparameterised
//! beta-binomial, above it a mixture of the shifted binomial with the
//! minimum-variance distribution.

use crate::error::{Error, Result};
use crate::types::ProbVector;

/// GSD parameters: mean response and confidence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GsdParams {
    psi: f64,
    rho: f64,
}

impl GsdParams {
    pub fn new(psi: f64, rho: f64) -> Result<Self> {
        if !(1.0..=5.0).contains(&psi) || psi.is_nan() {
            return Err(Error::domain(format!("psi = {psi} outside [1, 5]")));
        }
        if !(0.0..=1.0).contains(&rho) || rho.is_nan() {
            return Err(Error::domain(format!("rho = {rho} outside [0, 1]")));
        }
        Ok(GsdParams { psi, rho })
    }

    pub fn psi(&self) -> f64 {
        self.psi
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Variance range achievable by a distribution on `{1..5}` with mean `psi`,
/// plus the branch cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceBounds {
    pub v_min: f64,
    pub v_max: f64,
    /// `rho` value at which the GSD variance equals the shifted-binomial
    /// variance `v_max / 4`; the beta-binomial/mixture branch point.
    pub c_cutoff: f64,
}

/// Smallest and largest variance for mean `psi`, with the branch cutoff
/// `C(psi) = (3/4) v_max / (v_max - v_min)`.
///
/// At `psi` in `{1, 5}` the variance interval collapses to `{0}` and the
/// cutoff is fixed at `3/4` by convention.
pub fn variance_bounds(psi: f64) -> Result<VarianceBounds> {
    if !(1.0..=5.0).contains(&psi) || psi.is_nan() {
        return Err(Error::domain(format!("psi = {psi} outside [1, 5]")));
    }
    let v_min = (psi.ceil() - psi) * (psi - psi.floor());
    let v_max = (psi - 1.0) * (5.0 - psi);
    let c_cutoff = if v_max > v_min {
        0.75 * v_max / (v_max - v_min)
    } else {
        0.75
    };
    Ok(VarianceBounds {
        v_min,
        v_max,
        c_cutoff,
    })
}

/// Shifted binomial on `{1..5}`: `Binomial(4, (psi - 1)/4)` moved up by one.
/// This is the GSD at `rho = C(psi)`.
pub fn shifted_binomial_pmf(psi: f64) -> [f64; 5] {
    const CHOOSE_4: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];
    let p = (psi - 1.0) / 4.0;
    let q = (5.0 - psi) / 4.0;
    let mut out = [0.0; 5];
    for (k, o) in out.iter_mut().enumerate() {
        *o = CHOOSE_4[k] * p.powi(k as i32) * q.powi(4 - k as i32);
    }
    out
}

/// Minimum-variance distribution with mean `psi`: mass on the one or two
/// integers nearest `psi`.
fn min_variance_pmf(psi: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    for (k, o) in out.iter_mut().enumerate() {
        let s = k as f64 + 1.0;
        *o = (1.0 - (s - psi).abs()).max(0.0);
    }
    out
}

/// Maximum-variance distribution with mean `psi`: the two-point distribution
/// on `{1, 5}`. This is the GSD limit at `rho = 0`.
fn max_variance_pmf(psi: f64) -> [f64; 5] {
    let mut out = [0.0; 5];
    out[0] = (5.0 - psi) / 4.0;
    out[4] = (psi - 1.0) / 4.0;
    out
}

/// Beta-binomial branch, valid for `psi` in `(1, 5)` and `rho` in
/// `(0, C(psi)]`. At `rho = C(psi)` it reduces to the shifted binomial.
pub fn beta_binomial_branch(psi: f64, rho: f64) -> [f64; 5] {
    const CHOOSE_4: [f64; 5] = [1.0, 4.0, 6.0, 4.0, 1.0];
    let c = variance_bounds(psi).expect("psi validated by caller").c_cutoff;
    let gap = c - rho;
    let succ = (psi - 1.0) * rho / 4.0;
    let fail = (5.0 - psi) * rho / 4.0;

    let mut denom = 1.0;
    for i in 0..4 {
        denom *= rho + i as f64 * gap;
    }

    let mut out = [0.0; 5];
    for (k, o) in out.iter_mut().enumerate() {
        let mut num = CHOOSE_4[k];
        for i in 0..k {
            num *= succ + i as f64 * gap;
        }
        for j in 0..(4 - k) {
            num *= fail + j as f64 * gap;
        }
        *o = num / denom;
    }
    out
}

/// Mixture branch, valid for `psi` in `(1, 5)` and `rho` in `[C(psi), 1]`:
/// a blend of the minimum-variance distribution and the shifted binomial.
pub fn mixture_branch(psi: f64, rho: f64) -> [f64; 5] {
    let c = variance_bounds(psi).expect("psi validated by caller").c_cutoff;
    let w = (rho - c) / (1.0 - c);
    let near = min_variance_pmf(psi);
    let binom = shifted_binomial_pmf(psi);
    let mut out = [0.0; 5];
    for k in 0..5 {
        out[k] = w * near[k] + (1.0 - w) * binom[k];
    }
    out
}

/// Probability mass function of the GSD.
pub fn gsd_pmf(params: &GsdParams) -> ProbVector {
    let (psi, rho) = (params.psi, params.rho);

    // Degenerate means: the variance interval is {0}, so the distribution is
    // a point mass whatever rho says.
    if psi == 1.0 {
        return ProbVector::new_unchecked([1.0, 0.0, 0.0, 0.0, 0.0]);
    }
    if psi == 5.0 {
        return ProbVector::new_unchecked([0.0, 0.0, 0.0, 0.0, 1.0]);
    }

    let c = variance_bounds(psi).expect("params validated").c_cutoff;
    let pmf = if rho >= c {
        mixture_branch(psi, rho)
    } else if rho == 0.0 {
        max_variance_pmf(psi)
    } else {
        beta_binomial_branch(psi, rho)
    };
    ProbVector::new_unchecked(pmf)
}

/// Mean and variance of the GSD, in closed form: the mean is `psi` and the
/// variance interpolates linearly between the bounds,
/// `rho * v_min + (1 - rho) * v_max`.
pub fn gsd_moments(params: &GsdParams) -> (f64, f64) {
    let b = variance_bounds(params.psi).expect("params validated");
    (
        params.psi,
        params.rho * b.v_min + (1.0 - params.rho) * b.v_max,
    )
}

/// Invert the variance line: the `rho` for which a GSD with mean `psi` has
/// the given variance.
pub fn rho_from_variance(psi: f64, variance: f64) -> Result<f64> {
    let b = variance_bounds(psi)?;
    if b.v_max <= b.v_min {
        return Err(Error::domain(format!(
            "psi = {psi} has a zero-width variance interval; rho is undefined"
        )));
    }
    const TOL: f64 = 1e-12;
    if variance < b.v_min - TOL || variance > b.v_max + TOL {
        return Err(Error::domain(format!(
            "variance {variance} outside [{}, {}] for psi = {psi}",
            b.v_min, b.v_max
        )));
    }
    let v = variance.clamp(b.v_min, b.v_max);
    Ok((b.v_max - v) / (b.v_max - b.v_min))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn variance_bounds_examples() {
        let b = variance_bounds(3.0).unwrap();
        assert_eq!((b.v_min, b.v_max, b.c_cutoff), (0.0, 4.0, 0.75));

        let b = variance_bounds(1.3).unwrap();
        assert_abs_diff_eq!(b.v_min, 0.21, epsilon = 1e-15);
        assert_abs_diff_eq!(b.v_max, 1.11, epsilon = 1e-15);
        assert_abs_diff_eq!(b.c_cutoff, 0.925, epsilon = 1e-15);

        let b = variance_bounds(1.0).unwrap();
        assert_eq!((b.v_min, b.v_max, b.c_cutoff), (0.0, 0.0, 0.75));
    }

    #[test]
    fn variance_bounds_rejects_out_of_range() {
        assert!(variance_bounds(0.9).is_err());
        assert!(variance_bounds(5.1).is_err());
        assert!(variance_bounds(f64::NAN).is_err());
    }

    #[test]
    fn pmf_mixture_branch_golden() {
        // psi = 1.30, rho = 0.95 sits above the cutoff C(1.3) = 0.925.
        let p = gsd_pmf(&GsdParams::new(1.30, 0.95).unwrap());
        let expected = [
            0.72139609375,
            0.258290625,
            0.0192515625,
            0.001040625,
            2.109375e-05,
        ];
        for k in 0..5 {
            assert_abs_diff_eq!(p[k], expected[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn pmf_beta_binomial_branch_golden() {
        // psi = 2.10, rho = 0.72 sits below the cutoff C(2.1) ~ 0.7718.
        let p = gsd_pmf(&GsdParams::new(2.10, 0.72).unwrap());
        let expected = [
            0.316802044146678,
            0.37043976700906,
            0.221868434092756,
            0.0777356542005991,
            0.0131541005509078,
        ];
        for k in 0..5 {
            assert_abs_diff_eq!(p[k], expected[k], epsilon = 1e-12);
        }
    }

    #[test]
    fn pmf_point_mass_at_full_confidence() {
        let p = gsd_pmf(&GsdParams::new(3.0, 1.0).unwrap());
        assert_eq!(*p.as_array(), [0.0, 0.0, 1.0, 0.0, 0.0]);
    }

    #[test]
    fn pmf_two_point_at_zero_confidence() {
        let p = gsd_pmf(&GsdParams::new(3.0, 0.0).unwrap());
        assert_eq!(*p.as_array(), [0.5, 0.0, 0.0, 0.0, 0.5]);
    }

    #[test]
    fn pmf_degenerate_means() {
        for rho in [0.0, 0.3, 1.0] {
            let p = gsd_pmf(&GsdParams::new(1.0, rho).unwrap());
            assert_eq!(*p.as_array(), [1.0, 0.0, 0.0, 0.0, 0.0]);
            let p = gsd_pmf(&GsdParams::new(5.0, rho).unwrap());
            assert_eq!(*p.as_array(), [0.0, 0.0, 0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn moments_examples() {
        let (m, v) = gsd_moments(&GsdParams::new(2.1, 0.61).unwrap());
        assert_abs_diff_eq!(m, 2.1, epsilon = 1e-15);
        assert_abs_diff_eq!(v, 0.61 * 0.09 + 0.39 * 3.19, epsilon = 1e-12);

        let (m, v) = gsd_moments(&GsdParams::new(3.0, 0.5).unwrap());
        assert_eq!((m, v), (3.0, 2.0));

        // rho = 1 pins the variance at its minimum.
        for psi in [1.2, 2.7, 4.4] {
            let (_, v) = gsd_moments(&GsdParams::new(psi, 1.0).unwrap());
            assert_abs_diff_eq!(v, variance_bounds(psi).unwrap().v_min, epsilon = 1e-15);
        }
    }

    #[test]
    fn numeric_moments_match_closed_form() {
        let mut psi: f64 = 1.0;
        while psi <= 5.0 + 1e-9 {
            let mut rho: f64 = 0.0;
            while rho <= 1.0 + 1e-9 {
                let params = GsdParams::new(psi.min(5.0), rho.min(1.0)).unwrap();
                let pmf = gsd_pmf(&params);
                let (m, v) = gsd_moments(&params);
                if params.psi() == 1.0 || params.psi() == 5.0 {
                    // Point mass: zero variance irrespective of rho.
                    assert_abs_diff_eq!(pmf.variance(), 0.0, epsilon = 1e-12);
                } else {
                    assert_abs_diff_eq!(pmf.mean(), m, epsilon = 1e-9);
                    assert_abs_diff_eq!(pmf.variance(), v, epsilon = 1e-9);
                }
                rho += 0.05;
            }
            psi += 0.05;
        }
    }

    #[test]
    fn rho_from_variance_examples() {
        assert_eq!(rho_from_variance(3.0, 4.0).unwrap(), 0.0);
        assert_eq!(rho_from_variance(3.0, 0.0).unwrap(), 1.0);
        assert_eq!(rho_from_variance(3.0, 2.0).unwrap(), 0.5);
        assert!(rho_from_variance(3.0, 4.5).is_err());
        assert!(rho_from_variance(1.0, 0.0).is_err());
        assert!(rho_from_variance(5.0, 0.0).is_err());
    }

    #[test]
    fn rho_round_trips_through_variance() {
        for psi in [1.1, 1.85, 2.5, 3.3, 4.9] {
            for rho in [0.0, 0.2, 0.5, 0.77, 1.0] {
                let (_, v) = gsd_moments(&GsdParams::new(psi, rho).unwrap());
                let back = rho_from_variance(psi, v).unwrap();
                assert_abs_diff_eq!(back, rho, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn branches_agree_with_shifted_binomial_at_cutoff() {
        let mut psi: f64 = 1.1;
        while psi < 4.95 {
            let c = variance_bounds(psi).unwrap().c_cutoff;
            let binom = shifted_binomial_pmf(psi);
            let g = beta_binomial_branch(psi, c);
            let f = mixture_branch(psi, c);
            for k in 0..5 {
                assert_abs_diff_eq!(g[k], binom[k], epsilon = 1e-12);
                assert_abs_diff_eq!(f[k], binom[k], epsilon = 1e-12);
            }
            psi += 0.1;
        }
    }

    #[test]
    fn pmf_continuous_across_cutoff() {
        let mut psi: f64 = 1.1;
        while psi < 4.95 {
            let c = variance_bounds(psi).unwrap().c_cutoff;
            let below = gsd_pmf(&GsdParams::new(psi, c - 1e-9).unwrap());
            let at = gsd_pmf(&GsdParams::new(psi, c).unwrap());
            for k in 0..5 {
                assert!(
                    (below[k] - at[k]).abs() < 1e-6,
                    "discontinuity at psi={psi}, k={k}"
                );
            }
            psi += 0.1;
        }
    }

    #[test]
    fn confidence_limits() {
        for psi in [1.3, 2.4, 3.0, 4.6] {
            // rho -> 0: two-point on {1, 5}.
            let p0 = gsd_pmf(&GsdParams::new(psi, 0.0).unwrap());
            assert_abs_diff_eq!(p0[0], (5.0 - psi) / 4.0, epsilon = 1e-12);
            assert_abs_diff_eq!(p0[4], (psi - 1.0) / 4.0, epsilon = 1e-12);
            assert_eq!(p0[1] + p0[2] + p0[3], 0.0);

            // rho = 1: mass split between the integers around psi,
            // 1 - |s - psi| on each.
            let p1 = gsd_pmf(&GsdParams::new(psi, 1.0).unwrap());
            for k in 0..5 {
                let s = k as f64 + 1.0;
                assert_abs_diff_eq!(p1[k], (1.0 - (s - psi).abs()).max(0.0), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn pmf_sums_to_one_on_fine_grid() {
        let mut psi: f64 = 1.0;
        while psi <= 5.0 + 1e-9 {
            let mut rho: f64 = 0.0;
            while rho <= 1.0 + 1e-9 {
                let p = gsd_pmf(&GsdParams::new(psi.min(5.0), rho.min(1.0)).unwrap());
                let sum: f64 = p.iter().sum();
                assert!((sum - 1.0).abs() < 1e-12, "sum {sum} at ({psi}, {rho})");
                assert!(p.iter().all(|x| x >= 0.0), "negative mass at ({psi}, {rho})");
                rho += 0.05;
            }
            psi += 0.05;
        }
    }
}
