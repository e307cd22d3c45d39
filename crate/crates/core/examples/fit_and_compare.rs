//! Fits symmetric and asymmetric models to the same simulated sample and
//! compares them side by side.

use asymdl::{build_ardl, build_nsb, compare, fit, simulate_dgp, DgpConfig, ModelSpec};

pub fn run() -> asymdl::Result<()> {
    let data = simulate_dgp(&DgpConfig::single_lag(), 2024)?;
    let regs = data.regressor_names();
    let ardl = fit(&build_ardl(&data, &ModelSpec::ardl(1, 1, regs.clone())?)?)?;
    let nsb = fit(&build_nsb(&data, &ModelSpec::nsb(1, 1, 1, regs)?)?)?;
    let report = compare(&ardl, &nsb)?;

    println!("{:<10} {:>10} {:>10}", "term", report.first_label, report.second_label);
    let cell = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
    for row in &report.coefficients {
        println!("{:<10} {:>10} {:>10}", row.term, cell(row.first), cell(row.second));
    }
    println!("{:<10} {:>10.3} {:>10.3}", "aic", report.aic.0, report.aic.1);
    println!("{:<10} {:>10.3} {:>10.3}", "loglik", report.loglik.0, report.loglik.1);
    println!("lower AIC: {:?} on {} observations", report.lower_aic, report.n_effective);
    Ok(())
}

fn main() -> asymdl::Result<()> {
    run()
}
