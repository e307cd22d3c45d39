//! Reads a CSV with gaps, interpolates interior missing values, applies
//! per-column transforms and shows how to map new raw values onto the same
//! scale.

use asymdl::cli::data::{ingest_str, preprocess, ColumnSpec, Role, Transform};

const CSV: &str = "year,sales,price,income\n\
2015,120,10.0,50\n\
2016,125,,52\n\
2017,131,10.8,55\n\
2019,140,11.5,57\n\
2020,138,11.1,58\n";

pub fn run() -> asymdl::Result<()> {
    let specs = [
        ColumnSpec::new("year", Role::Index, vec![]),
        ColumnSpec::new("sales", Role::Dependent, vec![Transform::Log]),
        ColumnSpec::new("price", Role::Regressor, vec![Transform::Log, Transform::Standardize]),
        ColumnSpec::new("income", Role::Regressor, vec![Transform::Standardize]),
    ];
    // 2018 is absent from the index, so every column has a gap there
    let raw = ingest_str(CSV, &specs)?;
    let (data, transforms) = preprocess(&raw, &specs)?;
    for s in data.series() {
        let vals: Vec<String> = s.values().iter().map(|v| format!("{v:.3}")).collect();
        println!("{:<7} {}", s.name(), vals.join(" "));
    }
    for t in &transforms {
        println!("{}: interpolated {}, log {}, mean {:?}, sd {:?}", t.name, t.interpolated, t.log, t.mean, t.sd);
    }
    let price = transforms.iter().find(|t| t.name == "price").expect("price is a regressor");
    println!("raw price 12.0 maps to {:.3}", price.apply(12.0)?);
    Ok(())
}

fn main() -> asymdl::Result<()> {
    run()
}
