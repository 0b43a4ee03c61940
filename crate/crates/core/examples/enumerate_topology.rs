//! Topological census of all colourings of a small torus.
//!
//!     cargo run --example enumerate_topology -- [L] [N]

use potts_rsos::lattice::build_torus;
use potts_rsos::topology::{Census, Degeneracy, DEFAULT_EDGE_CAP};

fn main() -> potts_rsos::Result<()> {
    let mut args = std::env::args().skip(1);
    let l: usize = args.next().map_or(2, |s| s.parse().expect("L"));
    let n: usize = args.next().map_or(3, |s| s.parse().expect("N"));
    let lat = build_torus(l, n)?;
    let census = Census::build(&lat, DEFAULT_EDGE_CAP)?;

    let mut by_class = std::collections::BTreeMap::new();
    let (mut direct, mut dual) = (0u64, 0u64);
    for (s, count) in census.iter() {
        match s.degenerate {
            Degeneracy::Direct => direct += count,
            Degeneracy::Dual => dual += count,
            Degeneracy::None => *by_class.entry(s.homotopy).or_insert(0u64) += count,
        }
    }
    println!(
        "{l}x{n} torus: {} colourings, {} distinct summaries",
        census.total(),
        census.iter().count()
    );
    println!("degenerate direct: {direct}, degenerate dual: {dual}");
    for ((i1, i2), count) in by_class {
        if (i1, i2) == (0, 0) {
            println!("no wrapping loops: {count}");
        } else {
            println!("class ({i1}, {i2}): {count}");
        }
    }
    Ok(())
}
