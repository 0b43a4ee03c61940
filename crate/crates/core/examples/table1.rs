//! Merged spectrum of the ten Q = 3 sectors at L = 2, x = 5.
//!
//!     cargo run --example table1 -- [x] [L]

use potts_rsos::spectra::table1;

fn main() -> potts_rsos::Result<()> {
    let mut args = std::env::args().skip(1);
    let x: f64 = args.next().map_or(5.0, |s| s.parse().expect("x"));
    let width: usize = args.next().map_or(2, |s| s.parse().expect("L"));
    let report = table1(x, width)?;
    print!("{}", report.to_text());
    println!("column sums: {:?}", report.column_sums());
    Ok(())
}
