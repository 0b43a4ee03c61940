//! Twisted cluster models against twisted Q = 3 spin models, and their
//! duality relations at a non-integer Q.

use potts_rsos::algebra::NumericPolicy;
use potts_rsos::lattice::{build_torus, SeamSpec};
use potts_rsos::weights::{
    partition_by_enumeration, spin_partition, Coupling, ModelSpec, Q0Mode, SpinTwist,
};

fn main() -> potts_rsos::Result<()> {
    let lat = build_torus(2, 3)?;
    let e = lat.num_edges() as i32;
    let float = NumericPolicy::float();
    let x = 0.8;

    for (q0, twist) in [
        (Q0Mode::One, SpinTwist::Z2Swap),
        (Q0Mode::Zero, SpinTwist::Z3Cycle),
    ] {
        let cluster = partition_by_enumeration(
            &lat,
            &ModelSpec::twisted_cluster(Coupling::Integer(3), q0),
            &float,
        )?;
        let spin = spin_partition::<f64>(&lat, 3, twist, SeamSpec::Default)?;
        println!(
            "Q=3 {q0:?}: cluster {:.12}  spin {twist:?} {:.12}",
            cluster.eval_f64(x)?,
            spin.eval_at(&x)?
        );
    }

    let q = Coupling::Rsos(5);
    let z1 = partition_by_enumeration(&lat, &ModelSpec::twisted_cluster(q, Q0Mode::One), &float)?
        .to_float();
    println!(
        "Q={:.6} Q0=1: Z(x) = {:.12}, x^E Z(1/x) = {:.12}",
        q.q(),
        z1.eval_at(&x)?,
        z1.dual_transform(e).eval_at(&x)?
    );
    Ok(())
}
