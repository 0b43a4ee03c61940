//! The main duality relation as an exact Laurent polynomial identity:
//! (Q-1)(Z_even - Z_odd) = Z_cluster(x) - x^E Z_cluster(1/x) at Q = 3.

use potts_rsos::algebra::{NumericPolicy, QuadValue};
use potts_rsos::lattice::build_torus;
use potts_rsos::weights::{partition_by_enumeration, Coupling, ModelSpec, Parity, RsosTwist};

fn main() -> potts_rsos::Result<()> {
    let lat = build_torus(2, 3)?;
    let e = lat.num_edges() as i32;
    let exact = NumericPolicy::exact();
    let z = |spec| {
        partition_by_enumeration(&lat, &spec, &exact).map(|z| z.as_exact().cloned().unwrap())
    };

    let even = z(ModelSpec::rsos(6, Parity::Even, RsosTwist::None))?;
    let odd = z(ModelSpec::rsos(6, Parity::Odd, RsosTwist::None))?;
    let cluster = z(ModelSpec::cluster(Coupling::Rsos(6)))?;

    let lhs = (&even - &odd).scale(&QuadValue::integer(2));
    let rhs = &cluster - &cluster.dual_transform(e);
    println!("Z_even - Z_odd       = {}", &even - &odd);
    println!("Z_cl - x^E Z_cl(1/x) = {rhs}");
    println!("residual             = {}", &lhs - &rhs);
    Ok(())
}
