//! Splits a series into cumulative upward and downward moves.

use asymdl::{decompose, TimeSeries};

pub fn run() -> asymdl::Result<()> {
    let x = TimeSeries::new("x", 1, vec![0.0, 1.0, -1.0, 2.0, 1.5])?;
    let pair = decompose(&x)?;
    println!("{:>3} {:>6} {:>6} {:>6}", "t", "x", "x_pos", "x_neg");
    for (i, t) in (x.start_index()..=x.end_index()).enumerate() {
        println!("{t:>3} {:>6.2} {:>6.2} {:>6.2}", x.values()[i], pair.pos.values()[i], pair.neg.values()[i]);
    }
    Ok(())
}

fn main() -> asymdl::Result<()> {
    run()
}
