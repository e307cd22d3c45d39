use asymdl::design::build;
use asymdl::{
    compare, fit, select_lags, simulate_dgp, Criterion, Dataset, DgpConfig, Family, FitOptions, LagOrders, ModelFrame,
    ModelSpec, TimeSeries,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// y_t = 0.5 y_{t-1} + 2 x_t + e_t with an i.i.d. regressor.
fn ardl_1_0(seed: u64, t: usize) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x: Vec<f64> = (0..t).map(|_| StandardNormal.sample(&mut rng)).collect();
    let mut y = vec![0.0; t];
    for i in 1..t {
        let e: f64 = StandardNormal.sample(&mut rng);
        y[i] = 0.5 * y[i - 1] + 2.0 * x[i] + 0.3 * e;
    }
    Dataset::new(TimeSeries::new("y", 1, y).unwrap(), vec![TimeSeries::new("x", 1, x).unwrap()]).unwrap()
}

#[test]
fn bic_recovers_strong_ardl_1_0() {
    let opts = FitOptions { criterion: Criterion::Bic, ..FitOptions::default() };
    let hits = (0..50)
        .filter(|&s| {
            let (spec, _) = select_lags(&ardl_1_0(s, 200), Family::Ardl, &opts).unwrap();
            spec.p == 1 && spec.lags == LagOrders::Ardl { q: 0 }
        })
        .count();
    assert!(hits >= 40, "ARDL(1, 0) selected in {hits}/50 runs");
}

#[test]
fn selected_model_minimizes_criterion_on_common_sample() {
    let data = ardl_1_0(3, 120);
    let opts = FitOptions::default();
    let (best_spec, best) = select_lags(&data, Family::Nsb, &opts).unwrap();
    assert_eq!(best_spec.family(), Family::Nsb);
    assert_eq!(best.n_effective, 120 - 3);
    for p in 1..=3 {
        for q in 0..=3 {
            let spec = ModelSpec::nsb(p, q, q, vec!["x".into()]).unwrap();
            let dm = ModelFrame::new(&data, &spec).unwrap().design(3..120).unwrap();
            let m = fit(&dm).unwrap();
            assert!(m.aic >= best.aic, "{spec} beats the selection");
        }
    }
}

#[test]
fn asymmetric_process_favours_nsb_by_aic() {
    let cfg = DgpConfig::single_lag();
    let wins = (0..40)
        .filter(|&s| {
            let data = simulate_dgp(&cfg, 1000 + s).unwrap();
            let regs = vec!["x".to_string()];
            let a = fit(&build(&data, &ModelSpec::ardl(1, 1, regs.clone()).unwrap()).unwrap()).unwrap();
            let b = fit(&build(&data, &ModelSpec::nsb(1, 1, 1, regs).unwrap()).unwrap()).unwrap();
            let c = compare(&a, &b).unwrap();
            c.aic.1 < c.aic.0
        })
        .count();
    assert!(wins >= 36, "NSB-ARDL lower AIC in {wins}/40 runs");
}
