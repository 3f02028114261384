//! Acceptance suite: one test per release criterion, each printing a
//! PASS line when its assertions hold. Run with `cargo test --test
//! acceptance`; the longest test is the bootstrapping effectiveness trend
//! (criterion 7, a couple of minutes on two cores).

use rayon::prelude::*;

use gsd::bootstrap_eval::{compare_vs_empirical, comparison_ci, replicate_w, Verdict};
use gsd::distributions::normal::norm_quantile;
use gsd::distributions::{
    beta_binomial_branch, discretized_normal_pmf, gsd_moments, gsd_pmf, mixture_branch,
    shifted_binomial_pmf, variance_bounds, GsdParams,
};
use gsd::estimation::{fit_gsd, fit_probit, fit_sli, p_max, FittedParams, GsdGrid, Model};
use gsd::gof::bootstrap_gof;
use gsd::rng::derive_stream;
use gsd::synth::simulate_study;
use gsd::types::ResponseCounts;

fn grid() -> &'static GsdGrid {
    GsdGrid::shared()
}

/// Eighteen reference PMF series:
/// psi in {1.30, 2.10, 2.85} crossed with
/// rho in {0.95, 0.88, 0.81, 0.72, 0.61, 0.38}.
const GOLDEN_PMFS: [(f64, f64, [f64; 5]); 18] = [
    (1.30, 0.95, [0.72139609375, 0.258290625, 0.0192515625, 0.001040625, 2.109375e-05]),
    (1.30, 0.88, [0.748496941750038, 0.208222542278198, 0.038350722665177, 0.00464316083489919, 0.000286632471687573]),
    (1.30, 0.81, [0.77096417921922, 0.171207946584666, 0.0460910849306944, 0.0103372735077423, 0.00139951575767982]),
    (1.30, 0.72, [0.795829157800537, 0.134191333399622, 0.0484510529979119, 0.017207262603162, 0.00432119319876703]),
    (1.30, 0.61, [0.821895746624118, 0.0996567312454621, 0.0451553265189036, 0.0231361667293331, 0.0101560288821829]),
    (1.30, 0.38, [0.866684689952905, 0.0497367503924647, 0.0296816091051805, 0.0246877708006279, 0.0292091797488226]),
    (2.10, 0.95, [0.0605281332818022, 0.794662643551237, 0.130343269655477, 0.0132129969081272, 0.00125295660335689]),
    (2.10, 0.88, [0.145267519876325, 0.647190344522968, 0.172823847173145, 0.0317111925795053, 0.00300709584805654]),
    (2.10, 0.81, [0.230006906470848, 0.4997180454947, 0.215304424690813, 0.0502093882508834, 0.00476123509275618]),
    (2.10, 0.72, [0.316802044146678, 0.37043976700906, 0.221868434092756, 0.0777356542005991, 0.0131541005509078]),
    (2.10, 0.61, [0.394171811991077, 0.285141337039146, 0.184045116936097, 0.0997985070460573, 0.0368432269876218]),
    (2.10, 0.38, [0.532202936822452, 0.153334274334812, 0.107779556060854, 0.0956263175840495, 0.111056915197833]),
    (2.85, 0.95, [0.0185348096301595, 0.18048492784562, 0.743586358682183, 0.0472332605781363, 0.0101606432639014]),
    (2.85, 0.88, [0.0444835431123828, 0.223163826829488, 0.594607260837239, 0.113359825387527, 0.0243855438333634]),
    (2.85, 0.81, [0.0704322765946062, 0.265842725813356, 0.445628162992295, 0.179486390196918, 0.0386104444028254]),
    (2.85, 0.72, [0.114405372370277, 0.276308916717531, 0.323641015625745, 0.216169729114808, 0.0694749661716385]),
    (2.85, 0.61, [0.178081405530565, 0.244367463186289, 0.249159177257745, 0.206253633803385, 0.122138320222017]),
    (2.85, 0.38, [0.313469658678537, 0.158680186692613, 0.136641487850938, 0.146797829506136, 0.244410837271775]),
];

#[test]
fn criterion_01_golden_pmfs() {
    for &(psi, rho, expected) in &GOLDEN_PMFS {
        let pmf = gsd_pmf(&GsdParams::new(psi, rho).unwrap());
        for k in 0..5 {
            let err = (pmf[k] - expected[k]).abs();
            assert!(
                err <= 1e-9,
                "psi={psi}, rho={rho}, category {}: error {err:e}",
                k + 1
            );
        }
    }
    println!("criterion 01 (golden PMFs, 18 series, |err| <= 1e-9): PASS");
}

#[test]
fn criterion_02_moment_identities() {
    for i in 0..=80u32 {
        let psi = 1.0 + i as f64 * 0.05;
        let bounds = variance_bounds(psi).unwrap();
        for j in 0..=20u32 {
            let rho = j as f64 * 0.05;
            let params = GsdParams::new(psi.min(5.0), rho.min(1.0)).unwrap();
            let pmf = gsd_pmf(&params);
            let (mean, variance) = gsd_moments(&params);
            if params.psi() == 1.0 || params.psi() == 5.0 {
                // Degenerate mean: point mass whatever rho says.
                assert!((pmf.variance()).abs() <= 1e-9);
                continue;
            }
            assert!(
                (pmf.mean() - params.psi()).abs() <= 1e-9,
                "mean mismatch at ({psi}, {rho})"
            );
            assert!(
                (pmf.variance() - variance).abs() <= 1e-9,
                "variance mismatch at ({psi}, {rho})"
            );
            let line = params.rho() * bounds.v_min + (1.0 - params.rho()) * bounds.v_max;
            assert!((variance - line).abs() <= 1e-12);
            assert!((mean - params.psi()).abs() <= 1e-12);
        }
    }
    println!("criterion 02 (moment identities on 0.05 grid, |err| <= 1e-9): PASS");
}

#[test]
fn criterion_03_branch_continuity() {
    for i in 1..=39u32 {
        let psi = 1.0 + i as f64 * 0.1;
        let c = variance_bounds(psi).unwrap().c_cutoff;
        let binom = shifted_binomial_pmf(psi);
        let g_limit = beta_binomial_branch(psi, c);
        let f_value = mixture_branch(psi, c);
        for k in 0..5 {
            assert!(
                (g_limit[k] - binom[k]).abs() <= 1e-9,
                "beta-binomial branch off at psi={psi}, k={k}"
            );
            assert!(
                (f_value[k] - binom[k]).abs() <= 1e-9,
                "mixture branch off at psi={psi}, k={k}"
            );
        }
    }
    println!("criterion 03 (branch agreement with shifted binomial at the cutoff): PASS");
}

#[test]
fn criterion_04_estimator_consistency() {
    let (dataset, truths) = simulate_study(100, 10_000, 1001).unwrap();
    let recovered = dataset
        .stimuli
        .par_iter()
        .zip(&truths)
        .filter(|(s, (_, truth))| {
            let fit = fit_gsd(&s.counts, grid());
            let FittedParams::Gsd(p) = fit.params else {
                unreachable!()
            };
            (p.psi() - truth.psi()).abs() <= 0.03 && (p.rho() - truth.rho()).abs() <= 0.03
        })
        .count();
    assert!(
        recovered >= 95,
        "only {recovered}/100 fits within +-0.03 of the truth"
    );
    println!("criterion 04 (estimator consistency, {recovered}/100 within +-0.03): PASS");
}

#[test]
fn criterion_05_gtest_calibration() {
    let seed = 2001;
    let (dataset, _) = simulate_study(200, 24, seed).unwrap();
    let p_values: Vec<f64> = dataset
        .stimuli
        .par_iter()
        .map(|s| {
            bootstrap_gof(&s.counts, Model::Gsd, 1000, seed, &s.id, grid())
                .unwrap()
                .p_value
        })
        .collect();

    let s = p_values.len() as f64;
    let fraction = p_values.iter().filter(|&&p| p <= 0.05).count() as f64 / s;
    let z99 = norm_quantile(0.995);
    let half = z99 * (0.05 * 0.95 / s).sqrt();
    assert!(
        (fraction - 0.05).abs() <= half,
        "rejection rate {fraction} outside 0.05 +- {half:.4}"
    );

    let mut sorted = p_values.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut ks = 0.0f64;
    for (i, &p) in sorted.iter().enumerate() {
        ks = ks.max((p - i as f64 / s).abs());
        ks = ks.max(((i + 1) as f64 / s - p).abs());
    }
    assert!(ks < 0.08, "Kolmogorov distance {ks} >= 0.08");
    println!(
        "criterion 05 (G-test calibration: rejection rate {fraction:.4} in 99% band, KS {ks:.4} < 0.08): PASS"
    );
}

#[test]
fn criterion_06_comparison_ci_and_w_exceptions() {
    let (l, r) = comparison_ci(0.7, 0.2, 10_000);
    assert!((l - 0.48420).abs() <= 1e-5, "L = {l}");
    assert!((r - 0.51580).abs() <= 1e-5, "R = {r}");

    let large = ResponseCounts::new([40, 80, 50, 20, 10]).unwrap();
    let single = ResponseCounts::new([0, 0, 12, 0, 0]).unwrap();
    assert_eq!(replicate_w(&large, &single, Model::Gsd, grid()), 0.0);
    let neighbouring = ResponseCounts::new([5, 7, 0, 0, 0]).unwrap();
    assert_eq!(replicate_w(&large, &neighbouring, Model::Gsd, grid()), 0.0);
    println!("criterion 06 (confidence-interval arithmetic and W exceptions): PASS");
}

#[test]
fn criterion_07_bootstrapping_effectiveness_trend() {
    let sizes = [12u64, 24, 50];
    let mut passing_seeds = 0;
    for seed in 4001u64..=4010 {
        let (dataset, _) = simulate_study(50, 200, seed).unwrap();
        let mut model_better = [0i64; 3];
        let mut empirical_better = [0i64; 3];
        for (i, &n_small) in sizes.iter().enumerate() {
            let verdicts: Vec<Verdict> = dataset
                .stimuli
                .par_iter()
                .map(|s| {
                    compare_vs_empirical(&s.counts, n_small, Model::Gsd, 2000, seed, &s.id, grid())
                        .unwrap()
                        .verdict
                })
                .collect();
            model_better[i] = verdicts.iter().filter(|&&v| v == Verdict::ModelBetter).count() as i64;
            empirical_better[i] =
                verdicts.iter().filter(|&&v| v == Verdict::EmpiricalBetter).count() as i64;
        }
        let pass = model_better[0] > empirical_better[0]
            && model_better[0] >= model_better[1]
            && model_better[1] >= model_better[2];
        if pass {
            passing_seeds += 1;
        }
        println!(
            "  seed {seed}: model_better {model_better:?}, empirical_better {empirical_better:?}, trend {}",
            if pass { "ok" } else { "violated" }
        );
    }
    assert!(
        passing_seeds >= 9,
        "trend held for only {passing_seeds}/10 seeds"
    );
    println!(
        "criterion 07 (bootstrapping effectiveness trend, {passing_seeds}/10 seeds): PASS"
    );
}

#[test]
fn criterion_08_probability_caps_under_fuzz() {
    let mut stream = derive_stream(8008, "fuzz", 0);
    let mut checked = 0;
    while checked < 1000 {
        let mut raw = [0u64; 5];
        for c in &mut raw {
            *c = (stream.next_f64() * 41.0) as u64;
        }
        let total: u64 = raw.iter().sum();
        if total < 2 {
            continue;
        }
        checked += 1;
        let counts = ResponseCounts::new(raw).unwrap();
        let n = total as f64;

        let sli = fit_sli(&counts);
        let top = sli.pmf.iter().fold(0.0f64, f64::max);
        assert!(
            top <= 1.0 - 1.0 / n + 1e-9,
            "sli max probability {top} exceeds 1 - 1/{total} for {raw:?}"
        );

        let gsd_fit = fit_gsd(&counts, grid());
        let pm = p_max(&gsd_fit.pmf);
        assert!(
            pm <= 1.0 - 1.0 / n + 1e-12,
            "gsd p_max {pm} exceeds 1 - 1/{total} for {raw:?}"
        );
    }
    println!("criterion 08 (SLI floor and GSD p_max caps over 1000 fuzz cases): PASS");
}

#[test]
fn criterion_09_thread_count_determinism() {
    let bin = env!("CARGO_BIN_EXE_gsd");
    let dir = std::env::temp_dir().join(format!("gsd-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let input = dir.join("counts.csv");
    std::fs::write(
        &input,
        "stimulus_id,n1,n2,n3,n4,n5\n\
         s1,5,10,5,4,0\n\
         s2,0,2,10,9,3\n\
         s3,24,0,0,0,0\n\
         s4,3,6,6,6,3\n\
         s5,1,2,20,1,0\n\
         s6,10,5,4,3,2\n",
    )
    .unwrap();

    let run = |args: &[&str]| -> Vec<u8> {
        let out = std::process::Command::new(bin)
            .args(args)
            .output()
            .expect("binary runs");
        assert!(out.status.success(), "command failed: {args:?}");
        out.stdout
    };

    let input_str = input.to_str().unwrap();
    for (name, base) in [
        (
            "gof",
            vec![
                "gof", "--input", input_str, "--format", "counts", "--model", "gsd", "--mc",
                "400", "--seed", "11",
            ],
        ),
        (
            "compare",
            vec![
                "compare", "--input", input_str, "--format", "counts", "--model", "gsd",
                "--n-small", "8", "--mc", "400", "--seed", "11",
            ],
        ),
    ] {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "8"] {
            let mut args = base.clone();
            args.push("--threads");
            args.push(threads);
            outputs.push(run(&args));
        }
        assert_eq!(outputs[0], outputs[1], "{name}: threads 1 vs 4 differ");
        assert_eq!(outputs[0], outputs[2], "{name}: threads 1 vs 8 differ");
        assert!(!outputs[0].is_empty());
    }
    std::fs::remove_dir_all(&dir).ok();
    println!("criterion 09 (byte-identical gof and compare across --threads 1/4/8): PASS");
}

#[test]
fn criterion_10_ordered_probit_sanity() {
    for counts in [[2u64, 5, 10, 5, 2], [1, 1, 1, 1, 1], [0, 7, 3, 7, 0]] {
        let fit = fit_probit(&ResponseCounts::new(counts).unwrap());
        let FittedParams::Probit(p) = fit.params else {
            unreachable!()
        };
        assert!(
            (p.mu() - 3.0).abs() <= 0.05,
            "mu = {} for symmetric counts {counts:?}",
            p.mu()
        );
    }

    let pmf = discretized_normal_pmf(3.0, 1.0).unwrap();
    assert!(
        (pmf[2] - 0.382925).abs() <= 1e-6,
        "central mass {} off the CDF oracle",
        pmf[2]
    );
    println!("criterion 10 (probit symmetry and discretized-normal central mass): PASS");
}
