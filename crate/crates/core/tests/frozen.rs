//! Partition functions and counts frozen from exhaustive enumeration.

use potts_rsos::algebra::{LaurentPoly, NumericPolicy, QuadValue};
use potts_rsos::lattice::build_torus;
use potts_rsos::topology::{Census, Degeneracy, DEFAULT_EDGE_CAP};
use potts_rsos::weights::{
    partition_by_enumeration, Coupling, ModelSpec, Parity, Q0Mode, RsosTwist,
};

/// Coefficients `(a, b)` of `a + b sqrt(r)` for `x^0, x^1, ...`.
fn poly(r: u64, coeffs: &[(i64, i64)]) -> LaurentPoly<QuadValue> {
    LaurentPoly::from_terms(
        coeffs
            .iter()
            .enumerate()
            .map(|(k, &(a, b))| (k as i32, QuadValue::from_ints(a, b, r))),
    )
}

fn exact_2x2(spec: ModelSpec) -> LaurentPoly<QuadValue> {
    let lat = build_torus(2, 2).unwrap();
    partition_by_enumeration(&lat, &spec, &NumericPolicy::exact())
        .unwrap()
        .as_exact()
        .unwrap()
        .clone()
}

#[test]
fn cluster_q3_2x2() {
    let expect = poly(
        3,
        &[
            (81, 0),
            (0, 216),
            (972, 0),
            (0, 936),
            (2214, 0),
            (0, 1512),
            (2268, 0),
            (0, 648),
            (243, 0),
        ],
    );
    assert_eq!(exact_2x2(ModelSpec::cluster(Coupling::Integer(3))), expect);
    assert_eq!(exact_2x2(ModelSpec::loop_form(Coupling::Rsos(6))), expect);
}

#[test]
fn rsos_p6_2x2() {
    let even = poly(
        3,
        &[
            (162, 0),
            (0, 432),
            (1728, 0),
            (0, 1440),
            (2880, 0),
            (0, 1728),
            (2376, 0),
            (0, 648),
            (243, 0),
        ],
    );
    assert_eq!(
        exact_2x2(ModelSpec::rsos(6, Parity::Even, RsosTwist::None)),
        even
    );
    let e = 8;
    assert_eq!(
        exact_2x2(ModelSpec::rsos(6, Parity::Odd, RsosTwist::None)).dual_transform(e),
        even
    );
    let odd_z2 = poly(
        3,
        &[
            (81, 0),
            (0, 216),
            (756, 0),
            (0, 504),
            (684, 0),
            (0, 216),
            (108, 0),
        ],
    );
    assert_eq!(
        exact_2x2(ModelSpec::rsos(6, Parity::Odd, RsosTwist::Z2)),
        odd_z2
    );
}

#[test]
fn ising_point_2x2() {
    let even = poly(
        2,
        &[
            (16, 0),
            (0, 64),
            (256, 0),
            (0, 320),
            (608, 0),
            (0, 448),
            (448, 0),
            (0, 128),
            (32, 0),
        ],
    );
    assert_eq!(
        exact_2x2(ModelSpec::rsos(4, Parity::Even, RsosTwist::None)),
        even
    );
    let q00 = poly(
        2,
        &[
            (16, 0),
            (0, 64),
            (224, 0),
            (0, 224),
            (272, 0),
            (0, 96),
            (32, 0),
        ],
    );
    assert_eq!(
        exact_2x2(ModelSpec::twisted_cluster(Coupling::Rsos(4), Q0Mode::Zero)),
        q00
    );
}

#[test]
fn irrational_q_float_value() {
    let lat = build_torus(2, 2).unwrap();
    let z = partition_by_enumeration(
        &lat,
        &ModelSpec::rsos(5, Parity::Even, RsosTwist::None),
        &NumericPolicy::float(),
    )
    .unwrap()
    .eval_f64(0.7)
    .unwrap();
    assert!((z - 2276.069247002464).abs() < 1e-9);
}

#[test]
fn census_2x3() {
    let lat = build_torus(2, 3).unwrap();
    let census = Census::build(&lat, DEFAULT_EDGE_CAP).unwrap();
    assert_eq!(census.total(), 4096);
    assert_eq!(census.iter().count(), 51);
    let mut direct = 0;
    let mut dual = 0;
    let mut classes = std::collections::BTreeMap::new();
    for (s, count) in census.iter() {
        match s.degenerate {
            Degeneracy::Direct => direct += count,
            Degeneracy::Dual => dual += count,
            Degeneracy::None => *classes.entry(s.homotopy).or_insert(0) += count,
        }
    }
    assert_eq!((direct, dual), (1017, 1017));
    assert_eq!(classes.get(&(0, 1)), Some(&1633));
    assert_eq!(classes.get(&(1, 0)), Some(&357));
    assert_eq!(classes.get(&(1, 1)), Some(&72));
}
