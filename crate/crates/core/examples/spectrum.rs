//! Free energies and multiplicities of a single transfer matrix.

use potts_rsos::spectra::{spectrum, DEFAULT_GROUP_TOL};
use potts_rsos::transfer::{rsos_transfer, spin_transfer};
use potts_rsos::weights::{Parity, RsosTwist, SpinTwist};

fn main() -> potts_rsos::Result<()> {
    let t = rsos_transfer(3, 6, Parity::Even, RsosTwist::Z2, 1.5)?;
    let s = spectrum(&t, DEFAULT_GROUP_TOL)?;
    println!("dimension {}", t.dim());
    print!("{}", s.to_text());

    let spin = spectrum(
        &spin_transfer(2, 4, SpinTwist::None, 1.0)?,
        DEFAULT_GROUP_TOL,
    )?;
    print!("{}", spin.to_text());
    Ok(())
}
