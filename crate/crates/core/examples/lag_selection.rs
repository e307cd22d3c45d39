//! Chooses lag orders by AIC and BIC over a small grid.

use asymdl::{select_lags, select_lags_over, simulate_dgp, Criterion, DgpConfig, Family, FitOptions};

pub fn run() -> asymdl::Result<()> {
    let data = simulate_dgp(&DgpConfig::three_lag(), 7)?;
    for criterion in [Criterion::Aic, Criterion::Bic] {
        let opts = FitOptions { criterion, max_p: 4, max_q: 3, ..FitOptions::default() };
        for family in [Family::Ardl, Family::Nsb] {
            let (spec, m) = select_lags(&data, family, &opts)?;
            println!("{criterion:?} {family}: {spec} (criterion {:.3}, n = {})", m.criterion(criterion), m.n_effective);
        }
        let (spec, _) = select_lags_over(&data, &[Family::Ardl, Family::Nsb], &opts)?;
        println!("{criterion:?} overall: {spec}");
    }
    Ok(())
}

fn main() -> asymdl::Result<()> {
    run()
}
