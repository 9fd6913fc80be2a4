use proptest::prelude::*;
use seqest::case_study::musec_design;
use seqest::design::{NormalEndpointSpec, TwoStageDesign};
use seqest::estimators::{
    conditional_bias_stage1_stop, conditional_bias_stage2, estimate_outcome, mue, stagewise_pvalue,
    unconditional_bias, Estimator, ObservedOutcome,
};
use seqest::numerics::{
    bivariate_normal_cdf, std_normal_cdf, std_normal_quantile, truncated_normal_mean, TruncationSide,
};
use seqest::simulation::{bias_sweep, simulate_records, stop_probability, Scenario};

fn design_strategy() -> impl Strategy<Value = TwoStageDesign> {
    (5.0..800.0f64, 0.2..0.9f64, 1.0..4.0f64, 1.0..3.0f64)
        .prop_map(|(i1, f, e1, e2)| TwoStageDesign::new(e1, e2, i1, i1 / f).unwrap())
}

proptest! {
    #[test]
    fn cdf_is_symmetric(x in -30.0..30.0f64) {
        let s = std_normal_cdf(x) + std_normal_cdf(-x);
        prop_assert!((s - 1.0).abs() <= 2e-16);
    }

    #[test]
    fn quantile_inverts_cdf(x in -8.0..8.0f64) {
        let back = std_normal_quantile(std_normal_cdf(x)).unwrap();
        // The cdf flattens in the upper tail, so compare on the probability scale there.
        if x < 3.0 {
            prop_assert!((back - x).abs() <= 1e-9 * (1.0 + x.abs()), "{} -> {}", x, back);
        } else {
            let p = std_normal_cdf(x);
            prop_assert!((std_normal_cdf(back) - p).abs() <= 1e-15);
        }
    }

    #[test]
    fn bivariate_cdf_is_symmetric_and_bounded(h in -6.0..6.0f64, k in -6.0..6.0f64, r in -0.99..0.99f64) {
        let p = bivariate_normal_cdf(h, k, r).unwrap();
        prop_assert!((p - bivariate_normal_cdf(k, h, r).unwrap()).abs() <= 1e-15);
        prop_assert!(p >= 0.0 && p <= std_normal_cdf(h).min(std_normal_cdf(k)) + 1e-15);
        // Φ(h) = P(X ≤ h, Y ≤ k) + P(X ≤ h, -Y < -k)
        let split = p + bivariate_normal_cdf(h, -k, -r).unwrap();
        prop_assert!((split - std_normal_cdf(h)).abs() <= 1e-14);
    }

    #[test]
    fn bivariate_cdf_is_monotone(h in -5.0..5.0f64, dh in 0.0..2.0f64, k in -5.0..5.0f64, r in -0.95..0.95f64) {
        let lo = bivariate_normal_cdf(h, k, r).unwrap();
        let hi = bivariate_normal_cdf(h + dh, k, r).unwrap();
        prop_assert!(hi >= lo - 1e-15);
    }

    #[test]
    fn mixing_identity(theta in -0.5..1.0f64, design in design_strategy()) {
        let p = stop_probability(theta, &design);
        let mixed = p * conditional_bias_stage1_stop(theta, &design)
            + (1.0 - p) * conditional_bias_stage2(theta, &design);
        prop_assert!((mixed - unconditional_bias(theta, &design)).abs() <= 1e-10);
    }

    #[test]
    fn truncated_mean_is_location_equivariant(mu in -3.0..3.0f64, sigma in 0.05..3.0f64, cut in -3.0..3.0f64, shift in -10.0..10.0f64) {
        for side in [TruncationSide::AboveCut, TruncationSide::BelowCut] {
            let a = truncated_normal_mean(mu, sigma, side, cut).unwrap();
            let b = truncated_normal_mean(mu + shift, sigma, side, cut + shift).unwrap();
            prop_assert!((b - a - shift).abs() <= 1e-12 * (1.0 + shift.abs() + a.abs()));
        }
    }

    #[test]
    fn stage2_estimates_are_coherent(design in design_strategy(), gap in 0.05..3.0f64, noise in -2.5..2.5f64) {
        let z1 = design.e1 - gap;
        let rho = design.rho();
        let z2 = rho * z1 + (1.0 - rho * rho).sqrt() * noise;
        let o = ObservedOutcome::from_canonical(design, z1, Some(z2)).unwrap();
        let set = estimate_outcome(&o).unwrap();
        let get = |e| set.get(e).unwrap();
        // Overall MLE is the information-weighted mix of stage-wise MLEs, and
        // so are the two Rao-Blackwellized estimators.
        let (i1, i2) = (design.i1, design.i2);
        let mix = |a: f64, b: f64| (i1 * a + (i2 - i1) * b) / i2;
        let mle = get(Estimator::MleOverall);
        prop_assert!((mix(get(Estimator::MleStage1), get(Estimator::MleStage2Increment)) - mle).abs() <= 1e-12);
        prop_assert!((mix(get(Estimator::Umvue), get(Estimator::Umvcue)) - mle).abs() <= 1e-10);
        // Bias-corrected estimators solve their fixed-point equations.
        let ubc = get(Estimator::UbcMle);
        prop_assert!((ubc + unconditional_bias(ubc, &design) - mle).abs() <= 1e-9);
        let cbc = get(Estimator::CbcMle);
        prop_assert!((cbc + conditional_bias_stage2(cbc, &design) - mle).abs() <= 1e-9);
        // The MUE is where the stage-wise p-value crosses one half.
        let m = mue(&o).unwrap();
        prop_assert!((stagewise_pvalue(m, &o) - 0.5).abs() <= 1e-9);
    }
}

#[test]
fn mixing_identity_on_sweep_grid() {
    let sizes: Vec<_> = [40, 100, 620, 200]
        .into_iter()
        .map(|n| NormalEndpointSpec::new(n, 1.0).unwrap())
        .collect();
    let grid: Vec<f64> = (0..50).map(|i| -0.5 + 1.5 * i as f64 / 49.0).collect();
    let rows = bias_sweep(&sizes, 0.05, &grid, None).unwrap();
    assert_eq!(rows.len(), 200);
    for r in rows {
        let mixed = r.prob_stop * r.bias_stop_stage1 + (1.0 - r.prob_stop) * r.bias_continue_stage2;
        assert!((mixed - r.bias_unconditional).abs() <= 1e-10, "{r:?}");
    }
}

#[test]
fn simulation_is_identical_across_thread_counts() {
    let scenario = Scenario::new(0.14, musec_design(), 3_000, 9);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| simulate_records(&scenario).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(7));
}
