//! A small seeded Monte Carlo comparison of forecast accuracy across lag
//! orders.

use asymdl::{run_campaign, DgpConfig, McConfig};

pub fn run() -> asymdl::Result<()> {
    let mc = McConfig { replications: 100, lag_grid: vec![1, 2, 3], base_seed: 42, ..McConfig::default() };
    let report = run_campaign(&DgpConfig::three_lag(), &mc)?;
    println!("{:<6} {:>4} {:>10} {:>10} {:>9}", "family", "lag", "mean_rmse", "std_rmse", "failures");
    for c in &report.cells {
        println!("{:<6} {:>4} {:>10.4} {:>10.4} {:>9}", c.family.to_string(), c.lag, c.mean, c.std, c.failures);
    }
    Ok(())
}

fn main() -> asymdl::Result<()> {
    run()
}
