//! Column transfer matrices built from Temperley-Lieb generators.
//!
//! A column of width `L` is a ring of `2L` positions; position `2i` is the
//! direct site of row `i` and `2i+1` the dual site above it. Generator `e_j`
//! acts at position `j`: even positions sit on horizontal-edge faces, odd
//! positions on vertical-edge faces. With `H = prod(x + e_{2i})` and
//! `V = prod(1 + x e_{2i+1})`,
//!
//! ```text
//! T = Q^{L/2} H V
//! ```
//!
//! A seam at row `r` marks the ring bond between positions `2r-1` and `2r`.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::algebra::{Coeff, LaurentPoly, QuadValue};
use crate::error::{Error, Result};
use crate::weights::{Coupling, Parity, RsosTwist, Scalar, SpinTwist};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "rep", rename_all = "snake_case")]
pub enum Sector {
    Rsos { parity: Parity, twist: RsosTwist },
    Spin { twist: SpinTwist },
    SpinDual { twist: SpinTwist },
}

impl Sector {
    pub fn label(&self) -> String {
        let spin_twist = |t: &SpinTwist| match t {
            SpinTwist::None => "I",
            SpinTwist::Z2Swap => "Z2",
            SpinTwist::Z3Cycle => "Z3",
        };
        match self {
            Sector::Rsos { parity, twist } => format!(
                "rsos-{}-{}",
                if *parity == Parity::Even {
                    "even"
                } else {
                    "odd"
                },
                if *twist == RsosTwist::Z2 { "Z2" } else { "I" }
            ),
            Sector::Spin { twist } => format!("spin-{}", spin_twist(twist)),
            Sector::SpinDual { twist } => format!("dual-{}", spin_twist(twist)),
        }
    }
}

/// A sparse generator: `(row, col, value)` triples.
#[derive(Clone, Debug, PartialEq)]
pub struct Generator<C> {
    pub dim: usize,
    pub entries: Vec<(usize, usize, C)>,
}

impl<C: Coeff> Generator<C> {
    pub fn to_dense(&self) -> Vec<Vec<C>> {
        let mut m = vec![vec![C::zero(); self.dim]; self.dim];
        for (r, c, v) in &self.entries {
            m[*r][*c] = v.clone();
        }
        m
    }
}

impl Generator<f64> {
    pub fn to_matrix(&self) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(self.dim, self.dim);
        for &(r, c, v) in &self.entries {
            m[(r, c)] = v;
        }
        m
    }
}

fn sector_parity(parity: Parity) -> Result<bool> {
    match parity {
        Parity::Even => Ok(true),
        Parity::Odd => Ok(false),
        Parity::Both => Err(Error::InvalidParityCombination(
            "a transfer matrix acts on a single parity sector".into(),
        )),
    }
}

fn check_rsos(width: usize, p: u32, twist: RsosTwist) -> Result<()> {
    if width < 1 {
        return Err(Error::DimensionTooSmall { width, length: 1 });
    }
    if p < 3 {
        return Err(Error::InvalidModel(format!("p = {p} < 3")));
    }
    if twist == RsosTwist::Z2 && p % 2 == 1 {
        return Err(Error::InvalidParityCombination(format!(
            "Z2 twist needs even p, got {p}"
        )));
    }
    Ok(())
}

/// Ring bond `(k, k+1)` crossed by the seam at `row`.
fn seam_bond(width: usize, row: usize) -> usize {
    (2 * (row % width) + 2 * width - 1) % (2 * width)
}

/// Height sequences around the ring, sorted lexicographically.
pub fn rsos_basis_with_seam(
    width: usize,
    p: u32,
    parity: Parity,
    twist: RsosTwist,
    row: usize,
) -> Result<Vec<Vec<u32>>> {
    check_rsos(width, p, twist)?;
    let odd_start = sector_parity(parity)?;
    let n = 2 * width;
    let seam = if twist == RsosTwist::Z2 {
        Some(seam_bond(width, row))
    } else {
        None
    };
    let across = |k: usize, h: u32| if seam == Some(k) { p - h } else { h };
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(n);
    fn extend(
        path: &mut Vec<u32>,
        n: usize,
        p: u32,
        across: &dyn Fn(usize, u32) -> u32,
        out: &mut Vec<Vec<u32>>,
    ) {
        let k = path.len();
        let last = path[k - 1];
        if k == n {
            let first = across(n - 1, path[0]);
            if first.abs_diff(last) == 1 {
                out.push(path.clone());
            }
            return;
        }
        for step in [last.wrapping_sub(1), last + 1] {
            if (1..p).contains(&step) {
                path.push(across(k - 1, step));
                extend(path, n, p, across, out);
                path.pop();
            }
        }
    }
    for h0 in (1..p).filter(|h| (h % 2 == 1) == odd_start) {
        path.push(h0);
        extend(&mut path, n, p, &across, &mut out);
        path.pop();
    }
    out.sort();
    Ok(out)
}

/// `rsos_basis(L, p, parity, twist)` with the seam at row 0.
pub fn rsos_basis(width: usize, p: u32, parity: Parity, twist: RsosTwist) -> Result<Vec<Vec<u32>>> {
    rsos_basis_with_seam(width, p, parity, twist, 0)
}

fn rsos_generators_with<C: Coeff>(
    basis: &[Vec<u32>],
    width: usize,
    p: u32,
    twist: RsosTwist,
    row: usize,
    weight: impl Fn(u32, u32, u32) -> C,
) -> Vec<Generator<C>> {
    let n = 2 * width;
    let seam = if twist == RsosTwist::Z2 {
        Some(seam_bond(width, row))
    } else {
        None
    };
    let across = |k: usize, h: u32| if seam == Some(k) { p - h } else { h };
    let index: std::collections::HashMap<&[u32], usize> = basis
        .iter()
        .enumerate()
        .map(|(i, b)| (b.as_slice(), i))
        .collect();
    (0..n)
        .map(|j| {
            let mut entries = Vec::new();
            for (col, b) in basis.iter().enumerate() {
                let left = across((j + n - 1) % n, b[(j + n - 1) % n]);
                let right = across(j, b[(j + 1) % n]);
                if left != right {
                    continue;
                }
                for h in [left - 1, left + 1] {
                    if !(1..p).contains(&h) {
                        continue;
                    }
                    let mut next = b.clone();
                    next[j] = h;
                    if let Some(&r) = index.get(next.as_slice()) {
                        entries.push((r, col, weight(b[j], h, left)));
                    }
                }
            }
            Generator {
                dim: basis.len(),
                entries,
            }
        })
        .collect()
}

/// `e_j[h', h] = sqrt(S_h S_h') / S_left` with `S_h = sin(pi h / p)`.
pub fn rsos_generators(
    width: usize,
    p: u32,
    parity: Parity,
    twist: RsosTwist,
    row: usize,
) -> Result<Vec<Generator<f64>>> {
    let basis = rsos_basis_with_seam(width, p, parity, twist, row)?;
    let s = |h: u32| (std::f64::consts::PI * h as f64 / p as f64).sin();
    Ok(rsos_generators_with(
        &basis,
        width,
        p,
        twist,
        row,
        |h, h2, left| (s(h) * s(h2)).sqrt() / s(left),
    ))
}

/// Exact RSOS generators where the weights stay in `Q(sqrt 2)`: `p = 3, 4`.
pub fn rsos_generators_exact(
    width: usize,
    p: u32,
    parity: Parity,
    twist: RsosTwist,
    row: usize,
) -> Result<Vec<Generator<QuadValue>>> {
    let basis = rsos_basis_with_seam(width, p, parity, twist, row)?;
    let half_sqrt2 = QuadValue::sqrt(2) * QuadValue::ratio(1, 2);
    let weight = move |_h: u32, _h2: u32, left: u32| match (p, left) {
        (3, _) => QuadValue::integer(1),
        (4, 2) => half_sqrt2.clone(),
        _ => QuadValue::sqrt(2),
    };
    match p {
        3 | 4 => Ok(rsos_generators_with(&basis, width, p, twist, row, weight)),
        _ => Err(Error::BackendMismatch(format!(
            "RSOS generator weights for p = {p} leave every fixed quadratic field"
        ))),
    }
}

fn spin_index(spins: &[u32], q: u32) -> usize {
    spins
        .iter()
        .fold(0usize, |acc, &s| acc * q as usize + s as usize)
}

/// All `Q^L` spin columns in lexicographic order (site 0 most significant).
pub fn spin_basis(width: usize, q: u32) -> Vec<Vec<u32>> {
    let dim = (q as usize).pow(width as u32);
    (0..dim)
        .map(|mut k| {
            let mut s = vec![0u32; width];
            for slot in s.iter_mut().rev() {
                *slot = (k % q as usize) as u32;
                k /= q as usize;
            }
            s
        })
        .collect()
}

/// `e_{2i} = Q^{-1/2} J_i` (all-ones on site `i`), `e_{2i+1} = Q^{1/2}
/// delta(s_i, s_{i+1})`, with `s_r` read through the twist at the seam.
pub fn spin_generators<C: Scalar>(
    width: usize,
    q: u32,
    twist: SpinTwist,
    row: usize,
) -> Result<Vec<Generator<C>>> {
    if q < 1 {
        return Err(Error::InvalidModel("Q = 0".into()));
    }
    let perm = twist.permutation(q)?;
    let sqrt_q = C::sqrt_q(&Coupling::Integer(q))?;
    let inv_sqrt_q = sqrt_q
        .inv()
        .ok_or_else(|| Error::InvalidModel("Q = 0".into()))?;
    let basis = spin_basis(width, q);
    let seam_row = row % width;
    let mut gens = Vec::with_capacity(2 * width);
    for i in 0..width {
        let mut face = Vec::new();
        for (col, s) in basis.iter().enumerate() {
            for v in 0..q {
                let mut t = s.clone();
                t[i] = v;
                face.push((spin_index(&t, q), col, inv_sqrt_q.clone()));
            }
        }
        gens.push(Generator {
            dim: basis.len(),
            entries: face,
        });
        let k = (i + 1) % width;
        let mut bond = Vec::new();
        for (col, s) in basis.iter().enumerate() {
            let head = if k == seam_row {
                perm[s[k] as usize] as u32
            } else {
                s[k]
            };
            if s[i] == head {
                bond.push((col, col, sqrt_q.clone()));
            }
        }
        gens.push(Generator {
            dim: basis.len(),
            entries: bond,
        });
    }
    Ok(gens)
}

/// A built column transfer matrix, `matrix = prefactor * horizontal * vertical`.
#[derive(Clone, Debug)]
pub struct TransferOperator {
    pub sector: Sector,
    pub coupling: Coupling,
    pub width: usize,
    pub x: f64,
    pub basis: Vec<Vec<u32>>,
    pub prefactor: f64,
    /// Symmetric positive definite for `x > 0`.
    pub horizontal: DMatrix<f64>,
    pub vertical: DMatrix<f64>,
    pub matrix: DMatrix<f64>,
}

impl TransferOperator {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    fn assemble(
        sector: Sector,
        coupling: Coupling,
        width: usize,
        x: f64,
        basis: Vec<Vec<u32>>,
        gens: &[Generator<f64>],
        swap_roles: bool,
    ) -> Self {
        let dim = basis.len();
        let id = DMatrix::<f64>::identity(dim, dim);
        let mut horizontal = id.clone();
        let mut vertical = id.clone();
        for i in 0..width {
            let (eh, ev) = (gens[2 * i].to_matrix(), gens[2 * i + 1].to_matrix());
            let (h, v) = if swap_roles {
                (&id + &eh * x, &id * x + &ev)
            } else {
                (&id * x + &eh, &id + &ev * x)
            };
            horizontal = h * horizontal;
            vertical = v * vertical;
        }
        let prefactor = coupling.sqrt_q_f64().powi(width as i32);
        let matrix = &horizontal * &vertical * prefactor;
        TransferOperator {
            sector,
            coupling,
            width,
            x,
            basis,
            prefactor,
            horizontal,
            vertical,
            matrix,
        }
    }
}

pub fn rsos_transfer_with_seam(
    width: usize,
    p: u32,
    parity: Parity,
    twist: RsosTwist,
    x: f64,
    row: usize,
) -> Result<TransferOperator> {
    let basis = rsos_basis_with_seam(width, p, parity, twist, row)?;
    let gens = rsos_generators(width, p, parity, twist, row)?;
    Ok(TransferOperator::assemble(
        Sector::Rsos { parity, twist },
        Coupling::Rsos(p),
        width,
        x,
        basis,
        &gens,
        false,
    ))
}

pub fn rsos_transfer(
    width: usize,
    p: u32,
    parity: Parity,
    twist: RsosTwist,
    x: f64,
) -> Result<TransferOperator> {
    rsos_transfer_with_seam(width, p, parity, twist, x, 0)
}

pub fn spin_transfer_with_seam(
    width: usize,
    q: u32,
    twist: SpinTwist,
    x: f64,
    row: usize,
) -> Result<TransferOperator> {
    let gens = spin_generators::<f64>(width, q, twist, row)?;
    Ok(TransferOperator::assemble(
        Sector::Spin { twist },
        Coupling::Integer(q),
        width,
        x,
        spin_basis(width, q),
        &gens,
        false,
    ))
}

pub fn spin_transfer(width: usize, q: u32, twist: SpinTwist, x: f64) -> Result<TransferOperator> {
    spin_transfer_with_seam(width, q, twist, x, 0)
}

/// `x^{2L} T_spin(1/x)`: the roles of horizontal and vertical faces swap.
pub fn dual_spin_transfer(
    width: usize,
    q: u32,
    twist: SpinTwist,
    x: f64,
) -> Result<TransferOperator> {
    if x == 0.0 {
        return Err(Error::ZeroTemperatureVariable);
    }
    let gens = spin_generators::<f64>(width, q, twist, 0)?;
    Ok(TransferOperator::assemble(
        Sector::SpinDual { twist },
        Coupling::Integer(q),
        width,
        x,
        spin_basis(width, q),
        &gens,
        true,
    ))
}

/// `Tr T^N` by repeated multiplication.
pub fn trace_power(t: &TransferOperator, n: u32) -> f64 {
    matrix_trace_power(&t.matrix, n)
}

pub fn matrix_trace_power(m: &DMatrix<f64>, n: u32) -> f64 {
    let mut acc = DMatrix::<f64>::identity(m.nrows(), m.ncols());
    for _ in 0..n {
        acc = &acc * m;
    }
    acc.trace()
}

/// Dense matrix of Laurent polynomials in `x`.
pub type PolyMatrix<C> = Vec<Vec<LaurentPoly<C>>>;

pub fn poly_matmul<C: Coeff>(a: &PolyMatrix<C>, b: &PolyMatrix<C>) -> PolyMatrix<C> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let mut out = vec![vec![LaurentPoly::zero(); m]; n];
    for i in 0..n {
        for (k, bk) in b.iter().enumerate() {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..m {
                if !bk[j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &bk[j]);
                }
            }
        }
    }
    out
}

pub fn poly_transpose<C: Coeff>(a: &PolyMatrix<C>) -> PolyMatrix<C> {
    let n = a.len();
    let m = a.first().map_or(0, Vec::len);
    (0..m)
        .map(|j| (0..n).map(|i| a[i][j].clone()).collect())
        .collect()
}

/// Entrywise `x^e M(1/x)`.
pub fn poly_dual<C: Coeff>(a: &PolyMatrix<C>, e: i32) -> PolyMatrix<C> {
    a.iter()
        .map(|row| row.iter().map(|p| p.dual_transform(e)).collect())
        .collect()
}

/// `Q^{L/2} prod(x + e_{2i}) prod(1 + x e_{2i+1})` with polynomial entries.
pub fn exact_transfer<C: Coeff>(gens: &[Generator<C>], sqrt_q: &C) -> PolyMatrix<C> {
    let width = gens.len() / 2;
    let dim = gens.first().map_or(0, |g| g.dim);
    let identity = |dim: usize| -> PolyMatrix<C> {
        (0..dim)
            .map(|i| {
                (0..dim)
                    .map(|j| {
                        if i == j {
                            LaurentPoly::constant(C::one())
                        } else {
                            LaurentPoly::zero()
                        }
                    })
                    .collect()
            })
            .collect()
    };
    let factor = |g: &Generator<C>, x_on_identity: bool| -> PolyMatrix<C> {
        let mut m = identity(dim);
        if x_on_identity {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = LaurentPoly::x();
            }
        }
        let e_exp = if x_on_identity { 0 } else { 1 };
        for (r, c, v) in &g.entries {
            m[*r][*c].add_term(e_exp, v.clone());
        }
        m
    };
    let mut h = identity(dim);
    let mut v = identity(dim);
    for i in 0..width {
        h = poly_matmul(&factor(&gens[2 * i], true), &h);
        v = poly_matmul(&factor(&gens[2 * i + 1], false), &v);
    }
    let pre = sqrt_q.pow(width as u32);
    poly_matmul(&h, &v)
        .into_iter()
        .map(|row| row.into_iter().map(|p| p.scale(&pre)).collect())
        .collect()
}

/// Exact spin transfer matrix over `Q(sqrt Q)`.
pub fn exact_spin_transfer(
    width: usize,
    q: u32,
    twist: SpinTwist,
) -> Result<PolyMatrix<QuadValue>> {
    let gens = spin_generators::<QuadValue>(width, q, twist, 0)?;
    Ok(exact_transfer(&gens, &QuadValue::sqrt(q as u64)))
}

/// Exact RSOS transfer matrix for `p = 3, 4`.
pub fn exact_rsos_transfer(
    width: usize,
    p: u32,
    parity: Parity,
    twist: RsosTwist,
) -> Result<PolyMatrix<QuadValue>> {
    let gens = rsos_generators_exact(width, p, parity, twist, 0)?;
    let sqrt_q = <QuadValue as Scalar>::sqrt_q(&Coupling::Rsos(p))?;
    Ok(exact_transfer(&gens, &sqrt_q))
}
