//! Holds out the last ten periods, forecasts them recursively, and
//! reproduces the same path from a model fit on the history alone.

use asymdl::{fit, fixed_split_eval, forecast, simulate_dgp, DgpConfig, ModelSpec};

pub fn run() -> asymdl::Result<()> {
    let data = simulate_dgp(&DgpConfig::single_lag(), 11)?;
    let spec = ModelSpec::nsb(1, 1, 1, data.regressor_names())?;
    let (model, split) = fixed_split_eval(&data, &spec, 90, 10)?;
    println!("{spec} trained on {} rows, holdout RMSE {:.4}", model.n_effective, split.rmse.unwrap_or(f64::NAN));

    let history = data.head(90)?;
    let future = data.regressor("x")?.slice(91, 100)?;
    let refit = fit(&asymdl::design::build(&history, &spec)?)?;
    let fc = forecast(&refit, &history, &[future], 10)?;
    let actual = data.dependent().values();
    for (i, p) in fc.predictions.iter().enumerate() {
        let t = fc.first_index + i as i64;
        println!("t = {t:>3}  forecast {p:>8.3}  actual {:>8.3}", actual[(t - 1) as usize]);
    }
    Ok(())
}

fn main() -> asymdl::Result<()> {
    run()
}
