//! Synthetic study generation: the calibration workhorse behind the
//! `simulate` command and the statistical test suites.

use crate::dataio::{Dataset, Stimulus};
use crate::distributions::{gsd_pmf, sample, GsdParams};
use crate::error::{Error, Result};
use crate::estimation::p_max;
use crate::rng::derive_stream;

/// Generate a synthetic study of `n_stimuli` stimuli with `n_responses`
/// responses each.
///
/// Per-stimulus truths `(psi, rho)` are drawn uniformly from the fitting
/// feasible region for the given sample size, i.e. rejection-sampled until
/// the two most probable categories carry at most `1 - 1/n`. Fully
/// deterministic in `seed`.
pub fn simulate_study(
    n_stimuli: u32,
    n_responses: u64,
    seed: u64,
) -> Result<(Dataset, Vec<(String, GsdParams)>)> {
    if n_stimuli == 0 {
        return Err(Error::domain("need at least one stimulus"));
    }
    if n_responses == 0 {
        return Err(Error::domain("need at least one response per stimulus"));
    }
    let bound = 1.0 - 1.0 / n_responses as f64;

    let width = (n_stimuli as f64).log10().floor() as usize + 1;
    let mut stimuli = Vec::with_capacity(n_stimuli as usize);
    let mut truths = Vec::with_capacity(n_stimuli as usize);
    for i in 0..n_stimuli {
        let id = format!("sim{:0width$}", i + 1);
        let mut stream = derive_stream(seed, &id, 0);
        let (params, pmf) = loop {
            let psi = stream.next_range(1.0, 5.0);
            let rho = stream.next_range(0.0, 1.0);
            let params = GsdParams::new(psi, rho).expect("draw in range");
            let pmf = gsd_pmf(&params);
            if p_max(&pmf) <= bound {
                break (params, pmf);
            }
        };
        let counts = sample(&pmf, n_responses, &mut stream);
        stimuli.push(Stimulus {
            id: id.clone(),
            counts,
        });
        truths.push((id, params));
    }
    Ok((
        Dataset {
            name: format!("simulated-{n_stimuli}x{n_responses}"),
            stimuli,
        },
        truths,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::gsd_pmf;

    #[test]
    fn deterministic_in_seed() {
        let (a, ta) = simulate_study(10, 24, 5).unwrap();
        let (b, tb) = simulate_study(10, 24, 5).unwrap();
        assert_eq!(a, b);
        assert_eq!(ta, tb);
        let (c, _) = simulate_study(10, 24, 6).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn truths_are_feasible_for_sample_size() {
        let n = 24u64;
        let (ds, truths) = simulate_study(50, n, 123).unwrap();
        assert_eq!(ds.stimuli.len(), 50);
        for (i, (id, params)) in truths.iter().enumerate() {
            assert_eq!(&ds.stimuli[i].id, id);
            let pmf = gsd_pmf(params);
            assert!(p_max(&pmf) <= 1.0 - 1.0 / n as f64);
            assert_eq!(ds.stimuli[i].counts.total(), n);
        }
    }

    #[test]
    fn ids_are_zero_padded_and_unique() {
        let (ds, _) = simulate_study(12, 5, 1).unwrap();
        assert_eq!(ds.stimuli[0].id, "sim01");
        assert_eq!(ds.stimuli[11].id, "sim12");
    }

    #[test]
    fn rejects_empty_requests() {
        assert!(simulate_study(0, 24, 1).is_err());
        assert!(simulate_study(5, 0, 1).is_err());
    }
}
