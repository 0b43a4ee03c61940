//! Runs the identity suite over a small grid in both backends.

use potts_rsos::algebra::NumericPolicy;
use potts_rsos::identities::{verify_suite, Grid};

fn main() {
    let grid = Grid {
        widths: vec![2],
        lengths: vec![2, 3],
        ..Grid::default()
    };
    for policy in [NumericPolicy::exact(), NumericPolicy::float()] {
        let summary = verify_suite(&grid, &policy);
        for r in summary.reports.iter().filter(|r| !r.pass) {
            println!("FAIL {} {:?}: {}", r.id, r.params, r.residual);
        }
        println!(
            "{:?}: {} passed, {} failed",
            policy.backend, summary.passed, summary.failed
        );
    }
}
