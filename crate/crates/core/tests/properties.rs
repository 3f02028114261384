//! Property tests over the parameter spaces the unit tests sample only
//! pointwise.

use proptest::prelude::*;

use gsd::distributions::{
    discretized_normal_pmf, gsd_moments, gsd_pmf, rho_from_variance, GsdParams,
};
use gsd::estimation::{corrected_empirical_pmf, log_likelihood, p_max};
use gsd::gof::pvalue_histogram;
use gsd::types::ResponseCounts;

proptest! {
    #[test]
    fn gsd_pmf_is_a_distribution(psi in 1.0f64..=5.0, rho in 0.0f64..=1.0) {
        let pmf = gsd_pmf(&GsdParams::new(psi, rho).unwrap());
        let sum: f64 = pmf.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(pmf.iter().all(|p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn gsd_variance_stays_in_bounds(psi in 1.0f64..=5.0, rho in 0.0f64..=1.0) {
        let params = GsdParams::new(psi, rho).unwrap();
        let pmf = gsd_pmf(&params);
        let b = gsd::distributions::variance_bounds(psi).unwrap();
        prop_assert!(pmf.variance() >= b.v_min - 1e-9);
        prop_assert!(pmf.variance() <= b.v_max + 1e-9);
    }

    #[test]
    fn rho_round_trips_from_moments(psi in 1.001f64..=4.999, rho in 0.0f64..=1.0) {
        let params = GsdParams::new(psi, rho).unwrap();
        let (_, variance) = gsd_moments(&params);
        let back = rho_from_variance(psi, variance).unwrap();
        prop_assert!((back - rho).abs() <= 1e-9, "rho {rho} -> {back}");
    }

    #[test]
    fn discretized_normal_is_a_distribution(
        mu in -5.0f64..=11.0,
        sigma in 0.01f64..=20.0,
    ) {
        let pmf = discretized_normal_pmf(mu, sigma).unwrap();
        let sum: f64 = pmf.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(pmf.iter().all(|p| (0.0..=1.0).contains(&p)));
    }

    #[test]
    fn discretized_normal_symmetric_at_centre(sigma in 0.01f64..=20.0) {
        let pmf = discretized_normal_pmf(3.0, sigma).unwrap();
        prop_assert!((pmf[0] - pmf[4]).abs() <= 1e-15);
        prop_assert!((pmf[1] - pmf[3]).abs() <= 1e-15);
    }

    #[test]
    fn corrected_empirical_is_interior(counts in proptest::array::uniform5(0u64..500)) {
        prop_assume!(counts.iter().sum::<u64>() >= 1);
        let counts = ResponseCounts::new(counts).unwrap();
        let v = corrected_empirical_pmf(&counts);
        let sum: f64 = v.iter().sum();
        prop_assert!((sum - 1.0).abs() <= 1e-12);
        prop_assert!(v.iter().all(|p| p > 0.0 && p < 1.0));
        // The corrected estimate never zeroes out an observed category, so
        // the likelihood of the data under it is finite.
        prop_assert!(log_likelihood(&v, &counts).is_finite());
    }

    #[test]
    fn p_max_bounds(psi in 1.0f64..=5.0, rho in 0.0f64..=1.0) {
        let pmf = gsd_pmf(&GsdParams::new(psi, rho).unwrap());
        let pm = p_max(&pmf);
        // Two of five categories carry at least 2/5 of the mass.
        prop_assert!(pm >= 0.4 - 1e-12);
        prop_assert!(pm <= 1.0 + 1e-12);
    }

    #[test]
    fn histogram_conserves_counts(
        ps in proptest::collection::vec(0.0f64..=1.0, 0..200),
        k in 1usize..=20,
    ) {
        let width = 1.0 / k as f64;
        let h = pvalue_histogram(&ps, width).unwrap();
        let total: u64 = h.bins.iter().map(|&(_, c)| c).sum();
        prop_assert_eq!(total, ps.len() as u64);
        prop_assert_eq!(h.bins.len(), k);
    }
}
