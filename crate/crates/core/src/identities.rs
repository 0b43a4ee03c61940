//! Identity verification.
//!
//! Most identities are linear relations between partition functions, some
//! of them dualized (`x^E Z(1/x)`). Those are expressed as two lists of
//! [`Term`]s and evaluated either as exact Laurent polynomials or as floats
//! at a given `x`. The derivative identities, the Ising transfer-matrix
//! equivalence and the multiplicity relation have dedicated evaluators.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{Backend, Coeff, LaurentPoly, NumericPolicy, QuadValue};
use crate::error::{Error, Result};
use crate::lattice::{build_torus, SeamSpec, TorusLattice};
use crate::spectra::{compare_tables, sector_spectra, DEFAULT_GROUP_TOL};
use crate::topology::{Census, DEFAULT_EDGE_CAP};
use crate::transfer::{
    exact_rsos_transfer, exact_spin_transfer, poly_dual, poly_transpose, rsos_transfer,
    spin_transfer, trace_power, PolyMatrix, Sector,
};
use crate::weights::{
    census_partition, mean_edges, spin_partition, Coupling, ModelSpec, Parity, Q0Mode, RsosTwist,
    Scalar, SpinTwist,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum IdentityId {
    #[serde(rename = "EVENODD")]
    EvenOdd,
    #[serde(rename = "ANYPARITY")]
    AnyParity,
    #[serde(rename = "EVENODD_DUALDIFF")]
    EvenOddDualDiff,
    #[serde(rename = "MAINDUAL")]
    MainDual,
    #[serde(rename = "RELQ3")]
    RelQ3,
    #[serde(rename = "TWQ3")]
    TwQ3,
    #[serde(rename = "DIFFZ2")]
    DiffZ2,
    #[serde(rename = "DUZ2")]
    DuZ2,
    #[serde(rename = "Q01DUAL")]
    Q01Dual,
    #[serde(rename = "DUZ3")]
    DuZ3,
    #[serde(rename = "Q00DUAL")]
    Q00Dual,
    #[serde(rename = "Q00CHAIN")]
    Q00Chain,
    #[serde(rename = "COMBOZ2")]
    ComboZ2,
    #[serde(rename = "DERIV1")]
    Deriv1,
    #[serde(rename = "SHIFTE")]
    ShiftE,
    #[serde(rename = "ISING_TM")]
    IsingTm,
    #[serde(rename = "MULTIPLICITY")]
    Multiplicity,
}

impl IdentityId {
    pub const ALL: [IdentityId; 17] = [
        IdentityId::EvenOdd,
        IdentityId::AnyParity,
        IdentityId::EvenOddDualDiff,
        IdentityId::MainDual,
        IdentityId::RelQ3,
        IdentityId::TwQ3,
        IdentityId::DiffZ2,
        IdentityId::DuZ2,
        IdentityId::Q01Dual,
        IdentityId::DuZ3,
        IdentityId::Q00Dual,
        IdentityId::Q00Chain,
        IdentityId::ComboZ2,
        IdentityId::Deriv1,
        IdentityId::ShiftE,
        IdentityId::IsingTm,
        IdentityId::Multiplicity,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IdentityId::EvenOdd => "EVENODD",
            IdentityId::AnyParity => "ANYPARITY",
            IdentityId::EvenOddDualDiff => "EVENODD_DUALDIFF",
            IdentityId::MainDual => "MAINDUAL",
            IdentityId::RelQ3 => "RELQ3",
            IdentityId::TwQ3 => "TWQ3",
            IdentityId::DiffZ2 => "DIFFZ2",
            IdentityId::DuZ2 => "DUZ2",
            IdentityId::Q01Dual => "Q01DUAL",
            IdentityId::DuZ3 => "DUZ3",
            IdentityId::Q00Dual => "Q00DUAL",
            IdentityId::Q00Chain => "Q00CHAIN",
            IdentityId::ComboZ2 => "COMBOZ2",
            IdentityId::Deriv1 => "DERIV1",
            IdentityId::ShiftE => "SHIFTE",
            IdentityId::IsingTm => "ISING_TM",
            IdentityId::Multiplicity => "MULTIPLICITY",
        }
    }

    /// True when the identity compares Laurent polynomials, so `x` is free.
    pub fn is_polynomial(&self) -> bool {
        !matches!(
            self,
            IdentityId::Deriv1 | IdentityId::ShiftE | IdentityId::Multiplicity
        )
    }

    /// Checks the parameter predicate; `Err` carries the reason.
    pub fn check_applicable(&self, params: &IdentityParams, backend: Backend) -> Result<()> {
        let p = params.p;
        let fail = |why: String| {
            Err(Error::InapplicableParameters(format!(
                "{}: {why}",
                self.name()
            )))
        };
        if p < 3 {
            return fail(format!("p = {p} < 3"));
        }
        if backend == Backend::Exact && !Coupling::Rsos(p).is_exact() {
            return fail(format!("exact backend needs p in {{3, 4, 6}}, got {p}"));
        }
        match self {
            IdentityId::EvenOdd if p.is_multiple_of(2) => {
                return fail(format!("needs odd p, got {p}"))
            }
            IdentityId::MainDual
            | IdentityId::DiffZ2
            | IdentityId::Q00Dual
            | IdentityId::Deriv1
                if p % 2 == 1 =>
            {
                return fail(format!("needs even p, got {p}"))
            }
            IdentityId::RelQ3
            | IdentityId::TwQ3
            | IdentityId::DuZ2
            | IdentityId::DuZ3
            | IdentityId::ComboZ2
                if p != 6 =>
            {
                return fail(format!("needs Q = 3 (p = 6), got p = {p}"))
            }
            IdentityId::IsingTm if p != 4 => {
                return fail(format!("needs Q = 2 (p = 4), got p = {p}"))
            }
            IdentityId::Multiplicity if p != 4 && p != 6 => {
                return fail(format!("needs integer Q (p = 4 or 6), got p = {p}"))
            }
            _ => {}
        }
        match (self, params.x) {
            (IdentityId::Deriv1 | IdentityId::ShiftE, Some(x)) if x != 1.0 => {
                fail(format!("holds at x = 1, got {x}"))
            }
            (IdentityId::Multiplicity, None) => fail("needs a value of x".into()),
            (IdentityId::Multiplicity, Some(x)) if x <= 0.0 => {
                fail(format!("needs x > 0, got {x}"))
            }
            (_, None) if backend == Backend::Float && self.is_polynomial() => {
                fail("float backend needs a value of x".into())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for IdentityId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for IdentityId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let key = s.replace('-', "_").to_ascii_uppercase();
        IdentityId::ALL
            .into_iter()
            .find(|id| id.name() == key || id.name().replace('_', "") == key)
            .ok_or_else(|| Error::InapplicableParameters(format!("unknown identity `{s}`")))
    }
}

/// How float partition functions are obtained.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    #[default]
    Enumeration,
    /// Traces of transfer matrices where a realization exists, enumeration otherwise.
    Transfer,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityParams {
    #[serde(rename = "L")]
    pub width: usize,
    #[serde(rename = "N")]
    pub length: usize,
    pub p: u32,
    #[serde(rename = "Q")]
    pub q: f64,
    pub x: Option<f64>,
    pub route: Route,
}

impl IdentityParams {
    pub fn new(width: usize, length: usize, p: u32, x: Option<f64>) -> Self {
        IdentityParams {
            width,
            length,
            p,
            q: Coupling::Rsos(p).q(),
            x,
            route: Route::Enumeration,
        }
    }

    pub fn with_route(mut self, route: Route) -> Self {
        self.route = route;
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub id: IdentityId,
    pub params: IdentityParams,
    pub backend: Backend,
    pub lhs: String,
    pub rhs: String,
    /// `"0"` for an exact pass; relative residual for floats.
    pub residual: String,
    pub pass: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Quantity {
    Rsos(Parity, RsosTwist),
    Cluster,
    TwistedCluster(Q0Mode),
    Spin(SpinTwist),
}

struct Term<C> {
    coeff: C,
    quantity: Quantity,
    dual: bool,
}

fn term<C: Coeff>(coeff: C, quantity: Quantity, dual: bool) -> Term<C> {
    Term {
        coeff,
        quantity,
        dual,
    }
}

const EVEN: Quantity = Quantity::Rsos(Parity::Even, RsosTwist::None);
const ODD: Quantity = Quantity::Rsos(Parity::Odd, RsosTwist::None);
const EVEN_Z2: Quantity = Quantity::Rsos(Parity::Even, RsosTwist::Z2);
const ODD_Z2: Quantity = Quantity::Rsos(Parity::Odd, RsosTwist::Z2);

type Sides<C> = (Vec<Term<C>>, Vec<Term<C>>);

/// Both sides of a linear identity, or `None` for the special evaluators.
fn linear_sides<C: Scalar>(id: IdentityId, p: u32) -> Result<Option<Sides<C>>> {
    let sq = C::sqrt_q(&Coupling::Rsos(p))?;
    let qm1 = sq.clone() * sq - C::one();
    let one = C::one;
    let neg = || -C::one();
    let two = || C::from_i64(2);
    use Quantity::*;
    let diff = |c: C| vec![term(c.clone(), EVEN, false), term(-c, ODD, false)];
    Ok(Some(match id {
        IdentityId::EvenOdd => (
            vec![term(one(), EVEN, false)],
            vec![term(one(), ODD, false)],
        ),
        IdentityId::AnyParity => (vec![term(one(), EVEN, false)], vec![term(one(), ODD, true)]),
        IdentityId::EvenOddDualDiff => (
            diff(one()),
            vec![term(neg(), EVEN, true), term(one(), ODD, true)],
        ),
        IdentityId::MainDual => (
            diff(qm1),
            vec![term(one(), Cluster, false), term(neg(), Cluster, true)],
        ),
        IdentityId::RelQ3 => (
            diff(two()),
            vec![
                term(one(), Spin(SpinTwist::None), false),
                term(neg(), Spin(SpinTwist::None), true),
            ],
        ),
        IdentityId::TwQ3 => (
            diff(one()),
            vec![term(one(), EVEN_Z2, false), term(neg(), ODD_Z2, false)],
        ),
        IdentityId::DiffZ2 => {
            let s = if (p / 2) % 2 == 1 { one() } else { neg() };
            (
                diff(one()),
                vec![term(s.clone(), EVEN_Z2, false), term(-s, ODD_Z2, false)],
            )
        }
        IdentityId::DuZ2 => (
            vec![term(one(), Spin(SpinTwist::Z2Swap), false)],
            vec![term(one(), Spin(SpinTwist::Z2Swap), true)],
        ),
        IdentityId::Q01Dual => (
            vec![term(one(), TwistedCluster(Q0Mode::One), false)],
            vec![term(one(), TwistedCluster(Q0Mode::One), true)],
        ),
        IdentityId::DuZ3 => (
            diff(one()),
            vec![
                term(neg(), Spin(SpinTwist::Z3Cycle), false),
                term(one(), Spin(SpinTwist::Z3Cycle), true),
            ],
        ),
        IdentityId::Q00Dual => (
            diff(one()),
            vec![
                term(neg(), TwistedCluster(Q0Mode::Zero), false),
                term(one(), TwistedCluster(Q0Mode::Zero), true),
            ],
        ),
        IdentityId::Q00Chain => (
            vec![term(one(), Cluster, false), term(neg(), Cluster, true)],
            vec![
                term(-qm1.clone(), TwistedCluster(Q0Mode::Zero), false),
                term(qm1, TwistedCluster(Q0Mode::Zero), true),
            ],
        ),
        IdentityId::ComboZ2 => (
            vec![term(one(), EVEN, false), term(one(), EVEN_Z2, false)],
            vec![
                term(one(), Spin(SpinTwist::None), false),
                term(one(), Spin(SpinTwist::Z2Swap), false),
            ],
        ),
        IdentityId::Deriv1
        | IdentityId::ShiftE
        | IdentityId::IsingTm
        | IdentityId::Multiplicity => return Ok(None),
    }))
}

/// Integer `Q` for `p` in {3, 4, 6}.
fn integer_q(p: u32) -> Result<u32> {
    match p {
        3 => Ok(1),
        4 => Ok(2),
        6 => Ok(3),
        _ => Err(Error::InapplicableParameters(format!(
            "spin representation needs integer Q, p = {p}"
        ))),
    }
}

type PolyKey = (usize, usize, u32, Quantity);

/// Shared enumeration results for a batch of verifications.
#[derive(Default)]
pub struct Verifier {
    censuses: Mutex<HashMap<(usize, usize), Arc<Census>>>,
    exact: Mutex<HashMap<PolyKey, Arc<LaurentPoly<QuadValue>>>>,
    float: Mutex<HashMap<PolyKey, Arc<LaurentPoly<f64>>>>,
}

trait PolyCache: Scalar {
    fn cache(v: &Verifier) -> &Mutex<HashMap<PolyKey, Arc<LaurentPoly<Self>>>>;
    fn render(c: &Self) -> String;
}

impl PolyCache for QuadValue {
    fn cache(v: &Verifier) -> &Mutex<HashMap<PolyKey, Arc<LaurentPoly<Self>>>> {
        &v.exact
    }
    fn render(c: &Self) -> String {
        c.to_string()
    }
}

impl PolyCache for f64 {
    fn cache(v: &Verifier) -> &Mutex<HashMap<PolyKey, Arc<LaurentPoly<Self>>>> {
        &v.float
    }
    fn render(c: &Self) -> String {
        format!("{c:.12}")
    }
}

fn render_poly<C: PolyCache>(p: &LaurentPoly<C>) -> String {
    if p.is_zero() {
        return "0".into();
    }
    let mut parts = Vec::new();
    for (k, c) in p.terms() {
        let c = C::render(c);
        parts.push(match k {
            0 => format!("({c})"),
            1 => format!("({c})*x"),
            _ => format!("({c})*x^{k}"),
        });
    }
    parts.join(" + ")
}

impl Verifier {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn census(&self, lat: &TorusLattice) -> Result<Arc<Census>> {
        let key = (lat.width(), lat.length());
        if let Some(c) = self.censuses.lock().expect("census cache").get(&key) {
            return Ok(c.clone());
        }
        let census = Arc::new(Census::build(lat, DEFAULT_EDGE_CAP)?);
        self.censuses
            .lock()
            .expect("census cache")
            .entry(key)
            .or_insert(census.clone());
        Ok(census)
    }

    fn poly<C: PolyCache>(
        &self,
        lat: &TorusLattice,
        p: u32,
        q: Quantity,
    ) -> Result<Arc<LaurentPoly<C>>> {
        let key = (lat.width(), lat.length(), p, q);
        if let Some(z) = C::cache(self).lock().expect("poly cache").get(&key) {
            return Ok(z.clone());
        }
        let coupling = Coupling::Rsos(p);
        let z = match q {
            Quantity::Rsos(parity, twist) => {
                census_partition(&*self.census(lat)?, &ModelSpec::rsos(p, parity, twist))?
            }
            Quantity::Cluster => {
                census_partition(&*self.census(lat)?, &ModelSpec::cluster(coupling))?
            }
            Quantity::TwistedCluster(q0) => census_partition(
                &*self.census(lat)?,
                &ModelSpec::twisted_cluster(coupling, q0),
            )?,
            Quantity::Spin(twist) => spin_partition(lat, integer_q(p)?, twist, SeamSpec::Default)?,
        };
        let z = Arc::new(z);
        C::cache(self)
            .lock()
            .expect("poly cache")
            .insert(key, z.clone());
        Ok(z)
    }

    fn side_poly<C: PolyCache>(
        &self,
        lat: &TorusLattice,
        p: u32,
        terms: &[Term<C>],
    ) -> Result<LaurentPoly<C>> {
        let e = lat.num_edges() as i32;
        let mut acc = LaurentPoly::zero();
        for t in terms {
            let z = self.poly::<C>(lat, p, t.quantity)?;
            let z = if t.dual {
                z.dual_transform(e)
            } else {
                (*z).clone()
            };
            acc = &acc + &z.scale(&t.coeff);
        }
        Ok(acc)
    }

    /// Float value of one quantity at `x`, by transfer traces when possible.
    fn value(
        &self,
        lat: &TorusLattice,
        params: &IdentityParams,
        q: Quantity,
        x: f64,
    ) -> Result<f64> {
        if params.route == Route::Transfer {
            let (l, n, p) = (params.width, params.length as u32, params.p);
            let spin = |twist| -> Result<f64> {
                Ok(trace_power(&spin_transfer(l, integer_q(p)?, twist, x)?, n))
            };
            match q {
                Quantity::Rsos(parity, twist) => {
                    return Ok(trace_power(&rsos_transfer(l, p, parity, twist, x)?, n))
                }
                Quantity::Spin(twist) => return spin(twist),
                Quantity::Cluster if integer_q(p).is_ok() => return spin(SpinTwist::None),
                Quantity::TwistedCluster(Q0Mode::One) if p == 6 => return spin(SpinTwist::Z2Swap),
                Quantity::TwistedCluster(Q0Mode::Zero) if p == 6 => {
                    return spin(SpinTwist::Z3Cycle)
                }
                _ => {}
            }
        }
        self.poly::<f64>(lat, params.p, q)?.eval_at(&x)
    }

    fn term_value(
        &self,
        lat: &TorusLattice,
        params: &IdentityParams,
        t: &Term<f64>,
        x: f64,
    ) -> Result<f64> {
        let v = if t.dual {
            if x == 0.0 {
                let z = self.poly::<f64>(lat, params.p, t.quantity)?;
                z.dual_transform(lat.num_edges() as i32).eval_at(&0.0)?
            } else {
                x.powi(lat.num_edges() as i32) * self.value(lat, params, t.quantity, 1.0 / x)?
            }
        } else {
            self.value(lat, params, t.quantity, x)?
        };
        Ok(t.coeff * v)
    }

    pub fn verify(
        &self,
        id: IdentityId,
        params: &IdentityParams,
        policy: &NumericPolicy,
    ) -> Result<IdentityReport> {
        id.check_applicable(params, policy.backend)?;
        let lat = build_torus(params.width, params.length)?;
        let report = |lhs: String, rhs: String, residual: String, pass: bool| IdentityReport {
            id,
            params: *params,
            backend: policy.backend,
            lhs,
            rhs,
            residual,
            pass,
        };
        match id {
            IdentityId::Deriv1 | IdentityId::ShiftE => {
                let (lhs, rhs, residual, pass) = match policy.backend {
                    Backend::Exact => {
                        let (l, r) = self.derivative_sides::<QuadValue>(id, &lat, params.p)?;
                        let d = l.clone() - r.clone();
                        (l.to_string(), r.to_string(), d.to_string(), d.is_zero())
                    }
                    Backend::Float => {
                        let (l, r) = self.derivative_sides::<f64>(id, &lat, params.p)?;
                        let scale = l.abs().max(r.abs());
                        (
                            format!("{l:.12}"),
                            format!("{r:.12}"),
                            relative(l - r, scale),
                            policy.within(l, r, scale),
                        )
                    }
                };
                Ok(report(lhs, rhs, residual, pass))
            }
            IdentityId::IsingTm => self
                .ising(params, policy)
                .map(|(l, r, res, pass)| report(l, r, res, pass)),
            IdentityId::Multiplicity => self
                .multiplicity(params)
                .map(|(l, r, res, pass)| report(l, r, res, pass)),
            _ => match policy.backend {
                Backend::Exact => {
                    let (lt, rt) =
                        linear_sides::<QuadValue>(id, params.p)?.expect("linear identity");
                    let lhs = self.side_poly(&lat, params.p, &lt)?;
                    let rhs = self.side_poly(&lat, params.p, &rt)?;
                    let residual = &lhs - &rhs;
                    Ok(report(
                        render_poly(&lhs),
                        render_poly(&rhs),
                        render_poly(&residual),
                        residual.is_zero(),
                    ))
                }
                Backend::Float => {
                    let x = params.x.expect("checked");
                    let (lt, rt) = linear_sides::<f64>(id, params.p)?.expect("linear identity");
                    let eval = |terms: &[Term<f64>]| -> Result<Vec<f64>> {
                        terms
                            .iter()
                            .map(|t| self.term_value(&lat, params, t, x))
                            .collect()
                    };
                    let (lv, rv) = (eval(&lt)?, eval(&rt)?);
                    let scale = lv.iter().chain(&rv).fold(0.0f64, |a, v| a.max(v.abs()));
                    let (l, r): (f64, f64) = (lv.iter().sum(), rv.iter().sum());
                    Ok(report(
                        format!("{l:.12}"),
                        format!("{r:.12}"),
                        relative(l - r, scale),
                        policy.within(l, r, scale),
                    ))
                }
            },
        }
    }

    /// DERIV1 and SHIFTE at `x = 1`.
    fn derivative_sides<C: PolyCache>(
        &self,
        id: IdentityId,
        lat: &TorusLattice,
        p: u32,
    ) -> Result<(C, C)> {
        let one = C::one();
        let e_total = C::from_i64(lat.num_edges() as i64);
        let even = self.poly::<C>(lat, p, EVEN)?;
        let odd = self.poly::<C>(lat, p, ODD)?;
        let mean_even = mean_edges(&even, &one)?;
        let mean_odd = mean_edges(&odd, &one)?;
        if id == IdentityId::ShiftE {
            return Ok((mean_even, e_total - mean_odd));
        }
        let cluster = self.poly::<C>(lat, p, Quantity::Cluster)?;
        let z_cluster = cluster.eval_at(&one)?;
        let mean_cluster = mean_edges(&cluster, &one)?;
        let z_rsos = even.eval_at(&one)? + odd.eval_at(&one)?;
        let sq = C::sqrt_q(&Coupling::Rsos(p))?;
        let qm1 = sq.clone() * sq - C::one();
        let denom = (qm1 * z_rsos).inv().ok_or(Error::ZeroPartitionFunction)?;
        let spread = mean_cluster.clone() - (e_total - mean_cluster);
        let rhs = C::from_i64(2) * z_cluster * denom * spread;
        Ok((mean_even - mean_odd, rhs))
    }

    /// `T^even = T_spin`, `T^odd = (x^{2L} T_spin(1/x))^T`, untwisted and Z2.
    fn ising(
        &self,
        params: &IdentityParams,
        policy: &NumericPolicy,
    ) -> Result<(String, String, String, bool)> {
        let l = params.width;
        let e = 2 * l as i32;
        let mut pairs: Vec<(PolyMatrix<QuadValue>, PolyMatrix<QuadValue>)> = Vec::new();
        for (rt, st) in [
            (RsosTwist::None, SpinTwist::None),
            (RsosTwist::Z2, SpinTwist::Z2Swap),
        ] {
            let spin = exact_spin_transfer(l, 2, st)?;
            pairs.push((exact_rsos_transfer(l, 4, Parity::Even, rt)?, spin.clone()));
            pairs.push((
                exact_rsos_transfer(l, 4, Parity::Odd, rt)?,
                poly_transpose(&poly_dual(&spin, e)),
            ));
        }
        let trace = |m: &PolyMatrix<QuadValue>| {
            m.iter()
                .enumerate()
                .fold(LaurentPoly::zero(), |acc, (i, row)| &acc + &row[i])
        };
        let lhs = trace(&pairs[0].0);
        let rhs = trace(&pairs[0].1);
        match policy.backend {
            Backend::Exact => {
                let mismatches: usize = pairs
                    .iter()
                    .map(|(a, b)| {
                        a.iter()
                            .zip(b)
                            .flat_map(|(ra, rb)| ra.iter().zip(rb))
                            .filter(|(u, v)| u != v)
                            .count()
                    })
                    .sum();
                Ok((
                    render_poly(&lhs),
                    render_poly(&rhs),
                    mismatches.to_string(),
                    mismatches == 0,
                ))
            }
            Backend::Float => {
                let x = params.x.expect("checked");
                let at = |p: &LaurentPoly<QuadValue>| p.map_coeffs(|c| c.to_f64()).eval_at(&x);
                let mut worst = 0.0f64;
                let mut scale = 0.0f64;
                for (a, b) in &pairs {
                    for (ra, rb) in a.iter().zip(b) {
                        for (u, v) in ra.iter().zip(rb) {
                            let (u, v) = (at(u)?, at(v)?);
                            worst = worst.max((u - v).abs());
                            scale = scale.max(u.abs()).max(v.abs());
                        }
                    }
                }
                let (l, r) = (at(&lhs)?, at(&rhs)?);
                Ok((
                    format!("{l:.12}"),
                    format!("{r:.12}"),
                    relative(worst, scale),
                    worst <= policy.abs_tol + policy.rel_tol * scale,
                ))
            }
        }
    }

    /// `(Q-1)(alpha_even - alpha_odd) = alpha_spin - alpha_dual` row by row.
    fn multiplicity(&self, params: &IdentityParams) -> Result<(String, String, String, bool)> {
        let p = params.p;
        let q = integer_q(p)?;
        let x = params.x.expect("checked");
        let sectors = [
            Sector::Rsos {
                parity: Parity::Even,
                twist: RsosTwist::None,
            },
            Sector::Rsos {
                parity: Parity::Odd,
                twist: RsosTwist::None,
            },
            Sector::Spin {
                twist: SpinTwist::None,
            },
            Sector::SpinDual {
                twist: SpinTwist::None,
            },
        ];
        let tables = sector_spectra(&sectors, params.width, p, q, x, DEFAULT_GROUP_TOL)?;
        let merged = compare_tables(&tables, DEFAULT_GROUP_TOL)?;
        let qm1 = i64::from(q) - 1;
        let (mut lhs, mut rhs) = (Vec::new(), Vec::new());
        for row in &merged.rows {
            let a: Vec<i64> = row.multiplicities.iter().map(|&m| i64::from(m)).collect();
            lhs.push(qm1 * (a[0] - a[1]));
            rhs.push(a[2] - a[3]);
        }
        let bad = lhs.iter().zip(&rhs).filter(|(a, b)| a != b).count();
        let fmt = |v: &[i64]| format!("{v:?}");
        Ok((fmt(&lhs), fmt(&rhs), bad.to_string(), bad == 0))
    }
}

fn relative(diff: f64, scale: f64) -> String {
    let r = if scale > 0.0 {
        diff.abs() / scale
    } else {
        diff.abs()
    };
    format!("{r:.12e}")
}

/// Verifies one identity with a fresh cache.
pub fn verify(
    id: IdentityId,
    params: &IdentityParams,
    policy: &NumericPolicy,
) -> Result<IdentityReport> {
    Verifier::new().verify(id, params, policy)
}

/// A parameter grid; items failing an identity's predicate are skipped.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub ids: Vec<IdentityId>,
    pub ps: Vec<u32>,
    pub widths: Vec<usize>,
    pub lengths: Vec<usize>,
    pub xs: Vec<f64>,
    pub route: Route,
}

impl Default for Grid {
    fn default() -> Self {
        Grid {
            ids: IdentityId::ALL.to_vec(),
            ps: vec![3, 4, 5, 6, 8],
            widths: vec![2, 3],
            lengths: vec![2, 3],
            xs: vec![0.3, 1.0, 2.0, 5.0],
            route: Route::Enumeration,
        }
    }
}

impl Grid {
    pub fn empty() -> Self {
        Grid {
            ids: Vec::new(),
            ps: Vec::new(),
            widths: Vec::new(),
            lengths: Vec::new(),
            xs: Vec::new(),
            route: Route::Enumeration,
        }
    }

    /// Applicable `(id, params)` items, deduplicated and in a fixed order.
    pub fn items(&self, backend: Backend) -> Vec<(IdentityId, IdentityParams)> {
        let mut out: Vec<(IdentityId, IdentityParams)> = Vec::new();
        for &id in &self.ids {
            for &p in &self.ps {
                for &l in &self.widths {
                    for &n in &self.lengths {
                        let xs: Vec<Option<f64>> = match (backend, id) {
                            (Backend::Exact, IdentityId::Multiplicity) => {
                                self.xs.iter().map(|&x| Some(x)).collect()
                            }
                            (Backend::Exact, _) => vec![None],
                            (Backend::Float, _) => self.xs.iter().map(|&x| Some(x)).collect(),
                        };
                        for x in xs {
                            // multiplicities do not depend on N
                            let n = if id == IdentityId::Multiplicity {
                                self.lengths[0]
                            } else {
                                n
                            };
                            let params = IdentityParams::new(l, n, p, x).with_route(self.route);
                            if id.check_applicable(&params, backend).is_ok()
                                && !out.contains(&(id, params))
                            {
                                out.push((id, params));
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteSummary {
    pub reports: Vec<IdentityReport>,
    pub passed: usize,
    pub failed: usize,
}

/// Runs every applicable item of the grid; evaluation errors become failed reports.
pub fn verify_suite(grid: &Grid, policy: &NumericPolicy) -> SuiteSummary {
    let verifier = Verifier::new();
    let items = grid.items(policy.backend);
    let mut shapes: Vec<(usize, usize)> = items.iter().map(|(_, p)| (p.width, p.length)).collect();
    shapes.sort_unstable();
    shapes.dedup();
    for (l, n) in shapes {
        if let Ok(lat) = build_torus(l, n) {
            let _ = verifier.census(&lat);
        }
    }
    let reports: Vec<IdentityReport> = items
        .par_iter()
        .map(|(id, params)| {
            verifier
                .verify(*id, params, policy)
                .unwrap_or_else(|e| IdentityReport {
                    id: *id,
                    params: *params,
                    backend: policy.backend,
                    lhs: String::new(),
                    rhs: String::new(),
                    residual: e.to_string(),
                    pass: false,
                })
        })
        .collect();
    let passed = reports.iter().filter(|r| r.pass).count();
    SuiteSummary {
        failed: reports.len() - passed,
        passed,
        reports,
    }
}
