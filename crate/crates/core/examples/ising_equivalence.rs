//! At p = 4 the RSOS transfer matrices are the Ising ones, exactly.

use potts_rsos::transfer::{exact_rsos_transfer, exact_spin_transfer, poly_dual, poly_transpose};
use potts_rsos::weights::{Parity, RsosTwist, SpinTwist};

fn main() -> potts_rsos::Result<()> {
    for width in [2, 3] {
        for (rt, st) in [
            (RsosTwist::None, SpinTwist::None),
            (RsosTwist::Z2, SpinTwist::Z2Swap),
        ] {
            let spin = exact_spin_transfer(width, 2, st)?;
            let even = exact_rsos_transfer(width, 4, Parity::Even, rt)?;
            let odd = exact_rsos_transfer(width, 4, Parity::Odd, rt)?;
            let dual = poly_transpose(&poly_dual(&spin, 2 * width as i32));
            println!(
                "L={width} {rt:?}: even == spin: {}, odd == dual^T: {}",
                even == spin,
                odd == dual
            );
        }
    }
    let t = exact_spin_transfer(2, 2, SpinTwist::None)?;
    println!("T_spin[0][0] = {}", t[0][0]);
    Ok(())
}
