//! Rolling-window evaluation on the bundled annual demo data after a log
//! and standardization pass over every column.

use std::path::Path;

use asymdl::cli::data::{ingest, preprocess, ColumnSpec, Role, Transform};
use asymdl::{rolling_eval, Family, ModelSpec};

pub fn run() -> asymdl::Result<()> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/demo.csv");
    let both = vec![Transform::Log, Transform::Standardize];
    let mut specs = vec![
        ColumnSpec::new("year", Role::Index, vec![]),
        ColumnSpec::new("co2", Role::Dependent, both.clone()),
    ];
    for r in ["energy", "gdp", "density"] {
        specs.push(ColumnSpec::new(r, Role::Regressor, both.clone()));
    }
    let (data, transforms) = preprocess(&ingest(&path, &specs)?, &specs)?;
    for t in &transforms {
        if t.interpolated > 0 {
            println!("{}: {} gap(s) filled by interpolation", t.name, t.interpolated);
        }
    }

    for family in [Family::Ardl, Family::Nsb] {
        let spec = ModelSpec::symmetric(family, 1, 1, data.regressor_names())?;
        let report = rolling_eval(&data, &spec, 22, 5)?;
        println!("{spec}: {} windows, {} failed", report.windows.len(), report.failures);
        for w in &report.windows {
            match (&w.rmse, &w.error) {
                (Some(r), _) => println!("  {}-{}  rmse {r:.4}", w.train_start, w.train_end),
                (None, Some(e)) => println!("  {}-{}  failed: {e}", w.train_start, w.train_end),
                (None, None) => {}
            }
        }
        if let Some(m) = report.mean_rmse {
            println!("  mean rmse {m:.4}");
        }
    }
    Ok(())
}

fn main() -> asymdl::Result<()> {
    run()
}
