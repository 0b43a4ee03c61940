//! Exact diagonalization and free-energy tables.
//!
//! For `x > 0` every factor `x + e_j` and `1 + x e_j` is symmetric positive
//! definite, so `T = c H V` is similar to `c V^{1/2} H V^{1/2}` and the
//! spectrum comes from a symmetric eigensolver. Other cases fall back to a
//! general (complex) eigenvalue computation.

use std::fmt::Write as _;

use nalgebra::{Complex, DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::transfer::{dual_spin_transfer, rsos_transfer, spin_transfer, Sector, TransferOperator};
use crate::weights::{Coupling, Parity, RsosTwist, SpinTwist};

pub const DEFAULT_GROUP_TOL: f64 = 1e-9;
/// Eigenvalues below this fraction of the largest modulus count as zero.
pub const ZERO_THRESHOLD: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    /// `-ln|Lambda| / L`.
    pub f: f64,
    pub multiplicity: u32,
    pub is_real: bool,
    /// Sign of the real part.
    pub positive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTable {
    pub sector: Sector,
    pub coupling: Coupling,
    pub width: usize,
    pub x: f64,
    /// Sorted by ascending `f`.
    pub entries: Vec<SpectrumEntry>,
    /// Numerically vanishing eigenvalues, kept out of `entries`.
    pub zero_count: u32,
}

impl SpectrumTable {
    pub fn total_multiplicity(&self) -> u32 {
        self.entries.iter().map(|e| e.multiplicity).sum::<u32>() + self.zero_count
    }

    pub fn leading(&self) -> Option<f64> {
        self.entries.first().map(|e| e.f)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("f,multiplicity,is_real\n");
        for e in &self.entries {
            let _ = writeln!(out, "{:.12},{},{}", e.f, e.multiplicity, e.is_real);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{}  L={}  x={}\n", self.sector.label(), self.width, self.x);
        for e in &self.entries {
            let _ = writeln!(
                out,
                "{:>18.12}  {:>3}{}",
                e.f,
                e.multiplicity,
                if e.is_real { "" } else { "  complex" }
            );
        }
        if self.zero_count > 0 {
            let _ = writeln!(out, "{:>18}  {:>3}", "zero", self.zero_count);
        }
        out
    }
}

fn is_symmetric(m: &DMatrix<f64>) -> bool {
    let scale = m.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1.0);
    (m - m.transpose()).iter().all(|v| v.abs() <= 1e-13 * scale)
}

/// All eigenvalues of the transfer matrix.
pub fn eigenvalues(t: &TransferOperator) -> Result<Vec<Complex<f64>>> {
    let symmetric_path = t.x > 0.0 && is_symmetric(&t.horizontal) && is_symmetric(&t.vertical);
    if symmetric_path {
        let v = SymmetricEigen::new(t.vertical.clone());
        if v.eigenvalues.iter().all(|&l| l > 0.0) {
            let sqrt = v.eigenvalues.map(f64::sqrt);
            let root = &v.eigenvectors * DMatrix::from_diagonal(&sqrt) * v.eigenvectors.transpose();
            let s = &root * &t.horizontal * &root;
            let s = (&s + s.transpose()) * 0.5;
            let eig = SymmetricEigen::try_new(s, f64::EPSILON, 10_000).ok_or_else(|| {
                Error::DiagonalizationFailure("symmetric solver did not converge".into())
            })?;
            return Ok(eig
                .eigenvalues
                .iter()
                .map(|&l| Complex::new(l * t.prefactor, 0.0))
                .collect());
        }
    }
    let schur =
        nalgebra::Schur::try_new(t.matrix.clone(), f64::EPSILON, 100_000).ok_or_else(|| {
            Error::DiagonalizationFailure("Schur decomposition did not converge".into())
        })?;
    Ok(schur.complex_eigenvalues().iter().copied().collect())
}

/// Groups eigenvalues whose free energies lie within `group_tol`.
pub fn spectrum(t: &TransferOperator, group_tol: f64) -> Result<SpectrumTable> {
    if group_tol.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater) {
        return Err(Error::InvalidModel(format!(
            "group tolerance {group_tol} must be positive"
        )));
    }
    let eig = eigenvalues(t)?;
    let max_mod = eig.iter().map(|c| c.norm()).fold(0.0f64, f64::max);
    let imag_tol = 1e-10 * max_mod.max(f64::MIN_POSITIVE);
    let mut zero_count = 0;
    let mut items: Vec<(f64, bool, bool)> = Vec::with_capacity(eig.len());
    for c in eig {
        let m = c.norm();
        if m <= ZERO_THRESHOLD * max_mod {
            zero_count += 1;
            continue;
        }
        items.push((-m.ln() / t.width as f64, c.im.abs() <= imag_tol, c.re > 0.0));
    }
    items.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut entries: Vec<SpectrumEntry> = Vec::new();
    let mut sum = 0.0;
    let mut last = f64::NEG_INFINITY;
    for (f, real, pos) in items {
        match entries.last_mut() {
            Some(e) if f - last <= group_tol => {
                sum += f;
                e.multiplicity += 1;
                e.f = sum / e.multiplicity as f64;
                e.is_real &= real;
                e.positive &= pos;
            }
            _ => {
                sum = f;
                entries.push(SpectrumEntry {
                    f,
                    multiplicity: 1,
                    is_real: real,
                    positive: pos,
                });
            }
        }
        last = f;
    }
    Ok(SpectrumTable {
        sector: t.sector,
        coupling: t.coupling,
        width: t.width,
        x: t.x,
        entries,
        zero_count,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergedRow {
    pub f: f64,
    /// One per input table, in input order.
    pub multiplicities: Vec<u32>,
    pub is_real: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MergedReport {
    pub columns: Vec<String>,
    pub width: usize,
    pub x: f64,
    pub q: f64,
    pub rows: Vec<MergedRow>,
}

impl MergedReport {
    pub fn column_sums(&self) -> Vec<u32> {
        (0..self.columns.len())
            .map(|k| self.rows.iter().map(|r| r.multiplicities[k]).sum())
            .collect()
    }

    pub fn column_index(&self, label: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == label)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("f");
        for c in &self.columns {
            out.push(',');
            out.push_str(c);
        }
        out.push_str(",is_real\n");
        for r in &self.rows {
            let _ = write!(out, "{:.12}", r.f);
            for m in &r.multiplicities {
                let _ = write!(out, ",{m}");
            }
            let _ = writeln!(out, ",{}", r.is_real);
        }
        out
    }

    pub fn to_text(&self) -> String {
        let width = self
            .columns
            .iter()
            .map(String::len)
            .max()
            .unwrap_or(1)
            .max(3);
        let mut out = format!("{:>18}", "f");
        for c in &self.columns {
            let _ = write!(out, " {c:>width$}");
        }
        out.push('\n');
        for r in &self.rows {
            let _ = write!(out, "{:>18.12}", r.f);
            for m in &r.multiplicities {
                let _ = write!(out, " {m:>width$}");
            }
            out.push('\n');
        }
        out
    }
}

/// Aligns the free energies of several tables into one report.
pub fn compare_tables(tables: &[SpectrumTable], align_tol: f64) -> Result<MergedReport> {
    let Some(first) = tables.first() else {
        return Ok(MergedReport {
            columns: Vec::new(),
            width: 0,
            x: 0.0,
            q: 0.0,
            rows: Vec::new(),
        });
    };
    for t in tables {
        let same_q =
            (t.coupling.q() - first.coupling.q()).abs() <= 1e-12 * first.coupling.q().max(1.0);
        if t.width != first.width || t.x != first.x || !same_q {
            return Err(Error::InconsistentMetadata(format!(
                "{} (L={}, x={}, Q={}) against {} (L={}, x={}, Q={})",
                t.sector.label(),
                t.width,
                t.x,
                t.coupling.q(),
                first.sector.label(),
                first.width,
                first.x,
                first.coupling.q()
            )));
        }
    }
    let mut all: Vec<(f64, usize, u32, bool)> = tables
        .iter()
        .enumerate()
        .flat_map(|(k, t)| {
            t.entries
                .iter()
                .map(move |e| (e.f, k, e.multiplicity, e.is_real))
        })
        .collect();
    all.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut rows: Vec<MergedRow> = Vec::new();
    let mut members = 0usize;
    let mut sum = 0.0;
    let mut last = f64::NEG_INFINITY;
    for (f, k, m, real) in all {
        match rows.last_mut() {
            Some(r) if f - last <= align_tol => {
                members += 1;
                sum += f;
                r.f = sum / members as f64;
                r.multiplicities[k] += m;
                r.is_real &= real;
            }
            _ => {
                members = 1;
                sum = f;
                let mut multiplicities = vec![0; tables.len()];
                multiplicities[k] = m;
                rows.push(MergedRow {
                    f,
                    multiplicities,
                    is_real: real,
                });
            }
        }
        last = f;
    }
    Ok(MergedReport {
        columns: tables.iter().map(|t| t.sector.label()).collect(),
        width: first.width,
        x: first.x,
        q: first.coupling.q(),
        rows,
    })
}

/// The ten sectors of the `Q = 3` comparison, in column order.
pub fn table1_sectors() -> Vec<Sector> {
    let mut s = Vec::new();
    for parity in [Parity::Even, Parity::Odd] {
        for twist in [RsosTwist::None, RsosTwist::Z2] {
            s.push(Sector::Rsos { parity, twist });
        }
    }
    for twist in [SpinTwist::None, SpinTwist::Z2Swap, SpinTwist::Z3Cycle] {
        s.push(Sector::Spin { twist });
    }
    for twist in [SpinTwist::None, SpinTwist::Z2Swap, SpinTwist::Z3Cycle] {
        s.push(Sector::SpinDual { twist });
    }
    s
}

/// Builds the transfer matrix of a sector at `Q = (2 cos(pi/p))^2`, with
/// spin sectors at integer `q`.
pub fn build_sector(
    sector: Sector,
    width: usize,
    p: u32,
    q: u32,
    x: f64,
) -> Result<TransferOperator> {
    match sector {
        Sector::Rsos { parity, twist } => rsos_transfer(width, p, parity, twist, x),
        Sector::Spin { twist } => spin_transfer(width, q, twist, x),
        Sector::SpinDual { twist } => dual_spin_transfer(width, q, twist, x),
    }
}

/// Spectra of several sectors, diagonalized in parallel.
pub fn sector_spectra(
    sectors: &[Sector],
    width: usize,
    p: u32,
    q: u32,
    x: f64,
    group_tol: f64,
) -> Result<Vec<SpectrumTable>> {
    sectors
        .par_iter()
        .map(|&s| spectrum(&build_sector(s, width, p, q, x)?, group_tol))
        .collect()
}

/// Merged ten-column spectrum at `Q = 3` (`p = 6`).
pub fn table1(x: f64, width: usize) -> Result<MergedReport> {
    let tables = sector_spectra(&table1_sectors(), width, 6, 3, x, DEFAULT_GROUP_TOL)?;
    compare_tables(&tables, DEFAULT_GROUP_TOL)
}
