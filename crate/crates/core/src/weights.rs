//! Statistical weights of colourings and partition functions by enumeration.
//!
//! Every weight factors as `x^e` times an `x`-independent topological factor,
//! so a partition function is a Laurent polynomial accumulated over the
//! [`Census`] of a lattice. Cycle weights of the RSOS model are integer
//! counts of closed paths on the `A_{p-1}` Dynkin diagram, computed from
//! integer matrix powers.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::algebra::{Backend, Coeff, LaurentPoly, NumericPolicy, QuadValue};
use crate::error::{Error, Result};
use crate::lattice::{Direction, SeamSpec, TorusLattice};
use crate::topology::{Census, Degeneracy, TopologySummary, DEFAULT_EDGE_CAP};

/// Where the Potts parameter `Q` comes from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coupling {
    /// `sqrt(Q) = 2 cos(pi/p)`.
    Rsos(u32),
    Integer(u32),
    Real(f64),
}

impl Coupling {
    pub fn q(&self) -> f64 {
        let s = self.sqrt_q_f64();
        s * s
    }

    pub fn sqrt_q_f64(&self) -> f64 {
        match *self {
            Coupling::Rsos(p) => 2.0 * (PI / p as f64).cos(),
            Coupling::Integer(q) => (q as f64).sqrt(),
            Coupling::Real(q) => q.sqrt(),
        }
    }

    pub fn p(&self) -> Option<u32> {
        match *self {
            Coupling::Rsos(p) => Some(p),
            _ => None,
        }
    }

    /// True when `sqrt(Q)` lies in a quadratic field with integer `Q`.
    pub fn is_exact(&self) -> bool {
        matches!(self, Coupling::Rsos(3 | 4 | 6) | Coupling::Integer(_))
    }
}

/// Coefficient types that can host `sqrt(Q)`.
pub trait Scalar: Coeff {
    fn sqrt_q(coupling: &Coupling) -> Result<Self>;
}

impl Scalar for QuadValue {
    fn sqrt_q(coupling: &Coupling) -> Result<Self> {
        match *coupling {
            Coupling::Rsos(3) => Ok(QuadValue::integer(1)),
            Coupling::Rsos(4) => Ok(QuadValue::sqrt(2)),
            Coupling::Rsos(6) => Ok(QuadValue::sqrt(3)),
            Coupling::Integer(q) => Ok(QuadValue::sqrt(q as u64)),
            other => Err(Error::BackendMismatch(format!(
                "sqrt(Q) for {other:?} is not in a quadratic field with integer Q"
            ))),
        }
    }
}

impl Scalar for f64 {
    fn sqrt_q(coupling: &Coupling) -> Result<Self> {
        match *coupling {
            Coupling::Real(q) if q < 0.0 => Err(Error::InvalidModel(format!("negative Q = {q}"))),
            _ => Ok(coupling.sqrt_q_f64()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    /// Direct heights odd, dual heights even.
    Even,
    Odd,
    /// Sum of both sectors.
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RsosTwist {
    None,
    /// `h -> p - h` across the horizontal seam.
    Z2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpinTwist {
    None,
    /// Exchange spin states 1 and 2 across the seam.
    Z2Swap,
    /// `1 -> 2 -> 3 -> 1` across the seam (`Q = 3` only).
    Z3Cycle,
}

impl SpinTwist {
    /// Permutation of `0..q` applied across the seam.
    pub fn permutation(&self, q: u32) -> Result<Vec<usize>> {
        let q = q as usize;
        let mut perm: Vec<usize> = (0..q).collect();
        match self {
            SpinTwist::None => {}
            SpinTwist::Z2Swap => {
                if q < 2 {
                    return Err(Error::TwistIncompatible(format!(
                        "z2 swap needs Q >= 2, got {q}"
                    )));
                }
                perm.swap(0, 1);
            }
            SpinTwist::Z3Cycle => {
                if q != 3 {
                    return Err(Error::TwistIncompatible(format!(
                        "z3 cycle needs Q = 3, got {q}"
                    )));
                }
                perm = vec![1, 2, 0];
            }
        }
        Ok(perm)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Q0Mode {
    /// Weight 1 for direct clusters with odd `i2` and for the degenerate direct cluster.
    One,
    /// Weight 0 for direct clusters with `gcd(i2, 3) = 1` and for the degenerate direct cluster.
    Zero,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    /// `v^e Q^c`.
    Cluster,
    /// `Q^{V/2} x^e Q^{l/2 + eta}`.
    LoopForm,
    Rsos {
        parity: Parity,
        twist: RsosTwist,
    },
    TwistedCluster {
        q0: Q0Mode,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub family: Family,
    pub coupling: Coupling,
}

impl ModelSpec {
    pub fn cluster(coupling: Coupling) -> Self {
        ModelSpec {
            family: Family::Cluster,
            coupling,
        }
    }

    pub fn loop_form(coupling: Coupling) -> Self {
        ModelSpec {
            family: Family::LoopForm,
            coupling,
        }
    }

    pub fn rsos(p: u32, parity: Parity, twist: RsosTwist) -> Self {
        ModelSpec {
            family: Family::Rsos { parity, twist },
            coupling: Coupling::Rsos(p),
        }
    }

    pub fn twisted_cluster(coupling: Coupling, q0: Q0Mode) -> Self {
        ModelSpec {
            family: Family::TwistedCluster { q0 },
            coupling,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let Coupling::Rsos(p) = self.coupling {
            if p < 3 {
                return Err(Error::InvalidModel(format!("p = {p} < 3")));
            }
        }
        if let Family::Rsos { twist, .. } = self.family {
            let Coupling::Rsos(p) = self.coupling else {
                return Err(Error::InvalidModel(
                    "RSOS model needs Q = (2 cos(pi/p))^2".into(),
                ));
            };
            if twist == RsosTwist::Z2 && p % 2 == 1 {
                return Err(Error::InvalidParityCombination(format!(
                    "Z2 twist needs even p, got {p}"
                )));
            }
        }
        Ok(())
    }
}

type IntMatrix = Vec<Vec<i128>>;

/// Incidence matrix of the `A_{p-1}` Dynkin diagram.
pub fn incidence_matrix(p: u32) -> IntMatrix {
    let m = (p - 1) as usize;
    let mut g = vec![vec![0i128; m]; m];
    for i in 0..m.saturating_sub(1) {
        g[i][i + 1] = 1;
        g[i + 1][i] = 1;
    }
    g
}

/// The height reflection `h -> p - h` as a `(p-1) x (p-1)` matrix.
pub fn reflection_matrix(p: u32) -> IntMatrix {
    let m = (p - 1) as usize;
    let mut j = vec![vec![0i128; m]; m];
    for (i, row) in j.iter_mut().enumerate() {
        row[m - 1 - i] = 1;
    }
    j
}

pub fn int_matmul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let m = a.len();
    let k = b.len();
    let n = b.first().map_or(0, Vec::len);
    let mut c = vec![vec![0i128; n]; m];
    for i in 0..m {
        for l in 0..k {
            if a[i][l] == 0 {
                continue;
            }
            for j in 0..n {
                c[i][j] = c[i][j]
                    .checked_add(a[i][l] * b[l][j])
                    .expect("cycle weight overflows i128");
            }
        }
    }
    c
}

pub fn int_matpow(a: &IntMatrix, k: u32) -> IntMatrix {
    let m = a.len();
    let mut acc: IntMatrix = (0..m)
        .map(|i| (0..m).map(|j| i128::from(i == j)).collect())
        .collect();
    for _ in 0..k {
        acc = int_matmul(&acc, a);
    }
    acc
}

/// `sum_k lambda_k^n` over the eigenvalues of the (possibly twisted) cycle
/// operator, `lambda_k = 2 cos(k pi / p)` with sign `(-1)^{k+1}` under Z2.
pub fn eigen_cycle_weight(p: u32, n: u32, twist: RsosTwist) -> f64 {
    (1..p)
        .map(|k| {
            let sign = match twist {
                RsosTwist::None => 1.0,
                RsosTwist::Z2 => {
                    if k % 2 == 1 {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            sign * (2.0 * (k as f64 * PI / p as f64).cos()).powi(n as i32)
        })
        .sum()
}

/// Weight of the cycle of non-trivial clusters.
///
/// For `n > 0` this counts closed height paths of length `n` on `A_{p-1}`
/// (through the reflection when twisted) starting on an odd height for the
/// even sector and on an even height for the odd sector. For `n == 0` the
/// lone non-trivial cluster is free (untwisted) or pinned to `p/2` (twisted).
pub fn cycle_weight(
    p: u32,
    n: u32,
    parity: Parity,
    twist: RsosTwist,
    degenerate: Degeneracy,
) -> Result<i128> {
    if p < 3 {
        return Err(Error::InvalidModel(format!("p = {p} < 3")));
    }
    if n % 2 == 1 {
        return Err(Error::InvalidParityCombination(format!(
            "cycle order n = {n} is odd"
        )));
    }
    if twist == RsosTwist::Z2 && p % 2 == 1 {
        return Err(Error::InvalidParityCombination(format!(
            "Z2 twist needs even p, got {p}"
        )));
    }
    if n == 0 {
        let (direct_even, direct_odd) = match twist {
            RsosTwist::None => (p / 2, (p - 1) / 2),
            RsosTwist::Z2 => ((p / 2) % 2, 1 - (p / 2) % 2),
        };
        let (even, odd) = match degenerate {
            Degeneracy::Direct => (direct_even, direct_odd),
            Degeneracy::Dual => (direct_odd, direct_even),
            Degeneracy::None => {
                return Err(Error::InvalidParityCombination(
                    "n = 0 needs a degenerate sublattice".into(),
                ))
            }
        };
        return Ok(i128::from(match parity {
            Parity::Even => even,
            Parity::Odd => odd,
            Parity::Both => even + odd,
        }));
    }
    let mut walk = int_matpow(&incidence_matrix(p), n);
    if twist == RsosTwist::Z2 {
        walk = int_matmul(&walk, &reflection_matrix(p));
    }
    // heights are 1-based: row h-1 holds height h
    let diag = |odd_height: bool| -> i128 {
        (0..walk.len())
            .filter(|&r| ((r + 1) % 2 == 1) == odd_height)
            .map(|r| walk[r][r])
            .sum()
    };
    Ok(match parity {
        Parity::Even => diag(true),
        Parity::Odd => diag(false),
        Parity::Both => diag(true) + diag(false),
    })
}

/// Cycle weights for one `(p, twist)` pair, precomputed up to `n_max`.
#[derive(Clone, Debug)]
pub struct CycleWeightTable {
    p: u32,
    twist: RsosTwist,
    /// `[even, odd]` per even `n` (index `n/2`), `n >= 2`.
    cycles: Vec<[i128; 2]>,
    /// `[even, odd]` for degenerate direct and dual.
    degenerate_direct: [i128; 2],
    degenerate_dual: [i128; 2],
}

impl CycleWeightTable {
    pub fn new(p: u32, twist: RsosTwist, n_max: u32) -> Result<Self> {
        let pair = |n, d| -> Result<[i128; 2]> {
            Ok([
                cycle_weight(p, n, Parity::Even, twist, d)?,
                cycle_weight(p, n, Parity::Odd, twist, d)?,
            ])
        };
        let cycles = (0..=n_max / 2)
            .map(|k| {
                if k == 0 {
                    Ok([0, 0])
                } else {
                    pair(2 * k, Degeneracy::None)
                }
            })
            .collect::<Result<_>>()?;
        Ok(CycleWeightTable {
            p,
            twist,
            cycles,
            degenerate_direct: pair(0, Degeneracy::Direct)?,
            degenerate_dual: pair(0, Degeneracy::Dual)?,
        })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn twist(&self) -> RsosTwist {
        self.twist
    }

    pub fn get(&self, n: u32, parity: Parity, degenerate: Degeneracy) -> Result<i128> {
        let pair = if n == 0 {
            match degenerate {
                Degeneracy::Direct => self.degenerate_direct,
                Degeneracy::Dual => self.degenerate_dual,
                Degeneracy::None => {
                    return Err(Error::InvalidParityCombination(
                        "n = 0 needs a degenerate sublattice".into(),
                    ))
                }
            }
        } else {
            match self.cycles.get(n as usize / 2) {
                Some(p) => *p,
                None => [
                    cycle_weight(self.p, n, Parity::Even, self.twist, degenerate)?,
                    cycle_weight(self.p, n, Parity::Odd, self.twist, degenerate)?,
                ],
            }
        };
        Ok(match parity {
            Parity::Even => pair[0],
            Parity::Odd => pair[1],
            Parity::Both => pair[0] + pair[1],
        })
    }
}

/// Evaluates weights for one model, caching powers of `sqrt(Q)`.
struct WeightContext<C: Scalar> {
    spec: ModelSpec,
    vertices: u32,
    sqrt_powers: Vec<C>,
    table: Option<CycleWeightTable>,
}

impl<C: Scalar> WeightContext<C> {
    fn new(spec: ModelSpec, vertices: usize, edges: usize) -> Result<Self> {
        spec.validate()?;
        let sqrt_q = C::sqrt_q(&spec.coupling)?;
        let max_power = 2 * vertices + 3 * edges + 4;
        let mut sqrt_powers = Vec::with_capacity(max_power + 1);
        let mut acc = C::one();
        for _ in 0..=max_power {
            sqrt_powers.push(acc.clone());
            acc = acc * sqrt_q.clone();
        }
        let table = match (spec.family, spec.coupling) {
            (Family::Rsos { twist, .. }, Coupling::Rsos(p)) => {
                Some(CycleWeightTable::new(p, twist, 2 * vertices as u32)?)
            }
            _ => None,
        };
        Ok(WeightContext {
            spec,
            vertices: vertices as u32,
            sqrt_powers,
            table,
        })
    }

    fn sqrt_pow(&self, k: u32) -> C {
        match self.sqrt_powers.get(k as usize) {
            Some(v) => v.clone(),
            None => self.sqrt_powers[1].pow(k),
        }
    }

    /// `x`-independent factor of the weight; the `x` exponent is always `e`.
    fn topological_factor(&self, s: &TopologySummary) -> Result<C> {
        Ok(match self.spec.family {
            Family::Cluster => self.sqrt_pow(s.e + 2 * s.c),
            Family::LoopForm => self.sqrt_pow(self.vertices + s.l + 2 * s.eta),
            Family::Rsos { parity, twist } => {
                if twist == RsosTwist::Z2 && s.n > 0 && s.i2() % 2 == 1 {
                    return Ok(C::zero());
                }
                let table = self.table.as_ref().expect("rsos table");
                let w = table.get(s.n, parity, s.degenerate)?;
                let w = C::from_i64(i64::try_from(w).expect("cycle weight fits in i64"));
                self.sqrt_pow(self.vertices + s.l - s.n) * w
            }
            Family::TwistedCluster { q0 } => {
                let degenerate = u32::from(s.degenerate == Degeneracy::Direct);
                let special_class = match q0 {
                    Q0Mode::One => s.i2() % 2 == 1,
                    Q0Mode::Zero => !s.i2().is_multiple_of(3),
                };
                let wrapping = if s.n > 0 && special_class {
                    s.wrapping_direct
                } else {
                    0
                };
                let special = degenerate + wrapping;
                match q0 {
                    Q0Mode::One => self.sqrt_pow(s.e + 2 * (s.c - special)),
                    Q0Mode::Zero if special > 0 => C::zero(),
                    Q0Mode::Zero => self.sqrt_pow(s.e + 2 * s.c),
                }
            }
        })
    }
}

/// Weight of a single configuration as a monomial in `x`.
pub fn config_weight<C: Scalar>(
    summary: &TopologySummary,
    spec: &ModelSpec,
    vertices: usize,
) -> Result<LaurentPoly<C>> {
    let ctx = WeightContext::<C>::new(*spec, vertices, 2 * vertices)?;
    Ok(LaurentPoly::monomial(
        ctx.topological_factor(summary)?,
        summary.e as i32,
    ))
}

/// Partition function accumulated over a census.
pub fn census_partition<C: Scalar>(census: &Census, spec: &ModelSpec) -> Result<LaurentPoly<C>> {
    let ctx = WeightContext::<C>::new(*spec, census.num_vertices(), census.num_edges())?;
    let mut z = LaurentPoly::zero();
    for (summary, count) in census.iter() {
        let w = ctx.topological_factor(summary)?;
        if w.is_zero() {
            continue;
        }
        z.add_term(summary.e as i32, w * C::from_i64(count as i64));
    }
    Ok(z)
}

/// A partition function from either backend.
#[derive(Clone, Debug, PartialEq)]
pub enum Partition {
    Exact(LaurentPoly<QuadValue>),
    Float(LaurentPoly<f64>),
}

impl Partition {
    pub fn eval_f64(&self, x0: f64) -> Result<f64> {
        match self {
            Partition::Exact(p) => Ok(p.map_coeffs(|c| c.to_f64()).eval_at(&x0)?),
            Partition::Float(p) => p.eval_at(&x0),
        }
    }

    pub fn as_exact(&self) -> Option<&LaurentPoly<QuadValue>> {
        match self {
            Partition::Exact(p) => Some(p),
            Partition::Float(_) => None,
        }
    }

    pub fn to_float(&self) -> LaurentPoly<f64> {
        match self {
            Partition::Exact(p) => p.map_coeffs(|c| c.to_f64()),
            Partition::Float(p) => p.clone(),
        }
    }
}

pub fn partition_by_enumeration(
    lat: &TorusLattice,
    spec: &ModelSpec,
    policy: &NumericPolicy,
) -> Result<Partition> {
    let census = Census::build(lat, DEFAULT_EDGE_CAP)?;
    partition_from_census(&census, spec, policy)
}

pub fn partition_from_census(
    census: &Census,
    spec: &ModelSpec,
    policy: &NumericPolicy,
) -> Result<Partition> {
    Ok(match policy.backend {
        Backend::Exact => Partition::Exact(census_partition(census, spec)?),
        Backend::Float => Partition::Float(census_partition(census, spec)?),
    })
}

/// `<e> = x Z'(x) / Z(x)`.
pub fn mean_edges<C: Coeff>(z: &LaurentPoly<C>, x0: &C) -> Result<C> {
    let denominator = z.eval_at(x0)?;
    let inv = denominator.inv().ok_or(Error::ZeroPartitionFunction)?;
    Ok(z.x_derivative().eval_at(x0)? * inv)
}

/// Mean number of coloured direct edges at `x0`.
pub fn expectation_e(lat: &TorusLattice, spec: &ModelSpec, x0: f64) -> Result<f64> {
    let census = Census::build(lat, DEFAULT_EDGE_CAP)?;
    let z: LaurentPoly<f64> = census_partition(&census, spec)?;
    mean_edges(&z, &x0)
}

/// Largest spin state space enumerated directly.
pub const SPIN_STATE_CAP: u64 = 1 << 24;

/// `Z_spin = sum_{spins} prod_edges (1 + v delta)` by direct enumeration of
/// the `Q^V` spin states, with `v = sqrt(Q) x`. Vertical bonds crossing the
/// seam compare `s_tail` with `perm(s_head)`.
pub fn spin_partition<C: Scalar>(
    lat: &TorusLattice,
    q: u32,
    twist: SpinTwist,
    seam: SeamSpec,
) -> Result<LaurentPoly<C>> {
    let perm = twist.permutation(q)?;
    let v = lat.num_vertices();
    let states = (q as u64)
        .checked_pow(v as u32)
        .filter(|&s| s <= SPIN_STATE_CAP)
        .ok_or_else(|| Error::EnumerationTooLarge {
            edges: lat.num_edges(),
            cap: DEFAULT_EDGE_CAP,
        })?;
    let seam_row = seam.row().map(|r| r % lat.width());
    let bonds: Vec<(usize, usize, bool)> = lat
        .edges()
        .iter()
        .map(|e| {
            let twisted =
                e.direction == Direction::Vertical && Some(lat.coords(e.head).1) == seam_row;
            (e.tail, e.head, twisted)
        })
        .collect();
    let mut histogram = vec![0u64; bonds.len() + 1];
    let mut spins = vec![0usize; v];
    for _ in 0..states {
        let agree = bonds
            .iter()
            .filter(|&&(a, b, twisted)| {
                let sb = if twisted { perm[spins[b]] } else { spins[b] };
                spins[a] == sb
            })
            .count();
        histogram[agree] += 1;
        for s in spins.iter_mut() {
            *s += 1;
            if *s < q as usize {
                break;
            }
            *s = 0;
        }
    }
    let factor = LaurentPoly::from_terms([(0, C::one()), (1, C::sqrt_q(&Coupling::Integer(q))?)]);
    let mut power = LaurentPoly::constant(C::one());
    let mut z = LaurentPoly::zero();
    for count in histogram {
        if count > 0 {
            z = &z + &power.scale(&C::from_i64(count as i64));
        }
        power = &power * &factor;
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::build_torus;
    use crate::topology::{analyze, EdgeColoring};

    fn q(n: i64) -> QuadValue {
        QuadValue::integer(n)
    }

    #[test]
    fn cycle_weight_examples() {
        assert_eq!(
            cycle_weight(4, 2, Parity::Both, RsosTwist::None, Degeneracy::None).unwrap(),
            4
        );
        assert_eq!(
            cycle_weight(6, 0, Parity::Even, RsosTwist::None, Degeneracy::Direct).unwrap(),
            3
        );
        assert_eq!(
            cycle_weight(6, 2, Parity::Both, RsosTwist::Z2, Degeneracy::None).unwrap(),
            4
        );
        for p in [4, 6, 8, 10] {
            for d in [Degeneracy::Direct, Degeneracy::Dual] {
                assert_eq!(
                    cycle_weight(p, 0, Parity::Both, RsosTwist::Z2, d).unwrap(),
                    1
                );
            }
        }
    }

    #[test]
    fn cycle_weight_errors() {
        assert!(cycle_weight(5, 2, Parity::Even, RsosTwist::Z2, Degeneracy::None).is_err());
        assert!(cycle_weight(6, 3, Parity::Even, RsosTwist::None, Degeneracy::None).is_err());
        assert!(cycle_weight(6, 0, Parity::Even, RsosTwist::None, Degeneracy::None).is_err());
    }

    #[test]
    fn matrix_trace_matches_eigen_sum() {
        for p in 3..=12u32 {
            for n in (2..=12u32).step_by(2) {
                let exact =
                    cycle_weight(p, n, Parity::Both, RsosTwist::None, Degeneracy::None).unwrap();
                assert!((eigen_cycle_weight(p, n, RsosTwist::None) - exact as f64).abs() < 1e-9);
                if p % 2 == 0 {
                    let tw =
                        cycle_weight(p, n, Parity::Both, RsosTwist::Z2, Degeneracy::None).unwrap();
                    assert!((eigen_cycle_weight(p, n, RsosTwist::Z2) - tw as f64).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn non_degenerate_cycles_split_evenly() {
        for p in 3..=12u32 {
            for n in (2..=12u32).step_by(2) {
                let twists: &[RsosTwist] = if p % 2 == 0 {
                    &[RsosTwist::None, RsosTwist::Z2]
                } else {
                    &[RsosTwist::None]
                };
                for &tw in twists {
                    let e = cycle_weight(p, n, Parity::Even, tw, Degeneracy::None).unwrap();
                    let o = cycle_weight(p, n, Parity::Odd, tw, Degeneracy::None).unwrap();
                    assert_eq!(e, o, "p={p} n={n} {tw:?}");
                }
            }
        }
    }

    #[test]
    fn full_colouring_weights() {
        let lat = build_torus(2, 2).unwrap();
        let s = analyze(&lat, EdgeColoring::full(&lat)).unwrap();
        let w = |spec: ModelSpec| config_weight::<QuadValue>(&s, &spec, 4).unwrap();
        let mono = |c: i64| LaurentPoly::monomial(q(c), 8);
        assert_eq!(w(ModelSpec::cluster(Coupling::Integer(3))), mono(243));
        assert_eq!(w(ModelSpec::loop_form(Coupling::Integer(3))), mono(243));
        assert_eq!(
            w(ModelSpec::rsos(6, Parity::Even, RsosTwist::None)),
            mono(243)
        );
        assert_eq!(
            w(ModelSpec::rsos(6, Parity::Odd, RsosTwist::None)),
            mono(162)
        );
        assert_eq!(
            w(ModelSpec::twisted_cluster(
                Coupling::Integer(3),
                Q0Mode::One
            )),
            mono(81)
        );
        assert!(w(ModelSpec::twisted_cluster(
            Coupling::Integer(3),
            Q0Mode::Zero
        ))
        .is_zero());
    }

    #[test]
    fn partition_at_zero_temperature_variable() {
        let lat = build_torus(2, 2).unwrap();
        let z = partition_by_enumeration(
            &lat,
            &ModelSpec::cluster(Coupling::Integer(3)),
            &NumericPolicy::exact(),
        )
        .unwrap();
        assert_eq!(z.as_exact().unwrap().eval_at(&q(0)).unwrap(), q(81));
        let z = partition_by_enumeration(
            &lat,
            &ModelSpec::rsos(6, Parity::Even, RsosTwist::None),
            &NumericPolicy::exact(),
        )
        .unwrap();
        assert_eq!(z.as_exact().unwrap().eval_at(&q(0)).unwrap(), q(162));
    }

    #[test]
    fn exact_backend_rejects_irrational_q() {
        let lat = build_torus(2, 2).unwrap();
        let spec = ModelSpec::rsos(5, Parity::Even, RsosTwist::None);
        assert!(matches!(
            partition_by_enumeration(&lat, &spec, &NumericPolicy::exact()),
            Err(Error::BackendMismatch(_))
        ));
        assert!(partition_by_enumeration(&lat, &spec, &NumericPolicy::float()).is_ok());
    }

    #[test]
    fn twisted_rsos_needs_even_p() {
        assert!(ModelSpec::rsos(5, Parity::Even, RsosTwist::Z2)
            .validate()
            .is_err());
        assert!(ModelSpec::rsos(6, Parity::Even, RsosTwist::Z2)
            .validate()
            .is_ok());
    }

    #[test]
    fn edge_expectations_of_cluster_and_dual_sum_to_e() {
        let lat = build_torus(2, 2).unwrap();
        let spec = ModelSpec::cluster(Coupling::Integer(3));
        for x in [0.3, 1.0, 2.5] {
            let e = expectation_e(&lat, &spec, x).unwrap();
            assert!(e > 0.0 && e < 8.0);
        }
    }

    #[test]
    fn spin_partition_counts_states_at_x_zero() {
        let lat = build_torus(2, 2).unwrap();
        let z: LaurentPoly<QuadValue> =
            spin_partition(&lat, 3, SpinTwist::None, SeamSpec::Default).unwrap();
        assert_eq!(z.coefficient(0), q(81));
        assert!(spin_partition::<f64>(&lat, 2, SpinTwist::Z3Cycle, SeamSpec::Default).is_err());
    }
}
