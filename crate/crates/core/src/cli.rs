//! Command-line driver.
//!
//! Exit status: 0 when every check passes, 1 on an identity or spectrum
//! mismatch, 2 on a usage error. Output depends only on the flags.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::algebra::{Backend, NumericPolicy};
use crate::error::{Error, Result};
use crate::identities::{verify, verify_suite, Grid, IdentityId, IdentityParams, Route};
use crate::lattice::build_torus;
use crate::spectra::{build_sector, spectrum, table1, DEFAULT_GROUP_TOL};
use crate::topology::{write_enumeration_jsonl, DEFAULT_EDGE_CAP};
use crate::transfer::Sector;
use crate::weights::{Parity, RsosTwist, SpinTwist};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "potts-rsos",
    version,
    about = "Potts, cluster and RSOS models on the torus"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check one identity on one lattice.
    Verify(VerifyArgs),
    /// Check every applicable identity over a parameter grid.
    VerifyAll(VerifyAllArgs),
    /// Spectrum of one transfer matrix.
    Spectrum(SpectrumArgs),
    /// Merged ten-sector spectrum at Q = 3.
    Table1(Table1Args),
    /// Dump the topology of every colouring as JSON lines.
    Enumerate(EnumerateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Exact,
    Float,
}

impl From<BackendArg> for Backend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Exact => Backend::Exact,
            BackendArg::Float => Backend::Float,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RepArg {
    Rsos,
    Spin,
    SpinDual,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ParityArg {
    Even,
    Odd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TwistArg {
    None,
    Z2,
    Z3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum RouteArg {
    Enumeration,
    Transfer,
}

#[derive(Debug, Args)]
pub struct Tolerances {
    #[arg(long, default_value_t = NumericPolicy::DEFAULT_ABS_TOL)]
    pub abs_tol: f64,
    #[arg(long, default_value_t = NumericPolicy::DEFAULT_REL_TOL)]
    pub rel_tol: f64,
}

#[derive(Debug, Args)]
pub struct Output {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to a file instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub identity: String,
    #[arg(long)]
    pub p: u32,
    #[arg(long = "L")]
    pub width: usize,
    #[arg(long = "N")]
    pub length: usize,
    #[arg(long)]
    pub x: Option<f64>,
    #[arg(long, value_enum, default_value = "exact")]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value = "enumeration")]
    pub route: RouteArg,
    #[command(flatten)]
    pub tol: Tolerances,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct VerifyAllArgs {
    /// Identities to check (default: all).
    #[arg(long = "identity", value_delimiter = ',')]
    pub identities: Vec<String>,
    #[arg(long, value_delimiter = ',', default_values_t = [3u32, 4, 5, 6, 8])]
    pub p: Vec<u32>,
    #[arg(long = "L", value_delimiter = ',', default_values_t = [2usize, 3])]
    pub widths: Vec<usize>,
    #[arg(long = "N", value_delimiter = ',', default_values_t = [2usize, 3])]
    pub lengths: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = [0.3, 1.0, 2.0, 5.0])]
    pub x: Vec<f64>,
    #[arg(long, value_enum, default_value = "float")]
    pub backend: BackendArg,
    #[arg(long, value_enum, default_value = "enumeration")]
    pub route: RouteArg,
    #[command(flatten)]
    pub tol: Tolerances,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[arg(long, value_enum)]
    pub rep: RepArg,
    #[arg(long, value_enum, default_value = "even")]
    pub parity: ParityArg,
    #[arg(long, value_enum, default_value = "none")]
    pub twist: TwistArg,
    /// RSOS parameter, `Q = (2 cos(pi/p))^2`.
    #[arg(long)]
    pub p: Option<u32>,
    /// Integer `Q` for the spin representations.
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long = "L")]
    pub width: usize,
    #[arg(long)]
    pub x: f64,
    #[arg(long, default_value_t = DEFAULT_GROUP_TOL)]
    pub group_tol: f64,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct Table1Args {
    #[arg(long, default_value_t = 5.0)]
    pub x: f64,
    #[arg(long = "L", default_value_t = 2)]
    pub width: usize,
    #[command(flatten)]
    pub out: Output,
}

#[derive(Debug, Args)]
pub struct EnumerateArgs {
    #[arg(long = "L")]
    pub width: usize,
    #[arg(long = "N")]
    pub length: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn usage(msg: impl Into<String>) -> Error {
    Error::InvalidModel(msg.into())
}

fn route(r: RouteArg) -> Route {
    match r {
        RouteArg::Enumeration => Route::Enumeration,
        RouteArg::Transfer => Route::Transfer,
    }
}

fn policy(backend: BackendArg, tol: &Tolerances) -> NumericPolicy {
    match backend {
        BackendArg::Exact => NumericPolicy::exact(),
        BackendArg::Float => NumericPolicy::float().with_tolerances(tol.abs_tol, tol.rel_tol),
    }
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn sector(args: &SpectrumArgs) -> Result<Sector> {
    let spin_twist = match args.twist {
        TwistArg::None => SpinTwist::None,
        TwistArg::Z2 => SpinTwist::Z2Swap,
        TwistArg::Z3 => SpinTwist::Z3Cycle,
    };
    Ok(match args.rep {
        RepArg::Rsos => Sector::Rsos {
            parity: match args.parity {
                ParityArg::Even => Parity::Even,
                ParityArg::Odd => Parity::Odd,
            },
            twist: match args.twist {
                TwistArg::None => RsosTwist::None,
                TwistArg::Z2 => RsosTwist::Z2,
                TwistArg::Z3 => return Err(usage("the RSOS model has no Z3 twist")),
            },
        },
        RepArg::Spin => Sector::Spin { twist: spin_twist },
        RepArg::SpinDual => Sector::SpinDual { twist: spin_twist },
    })
}

/// Dispatches a parsed command and returns the exit status.
pub fn run(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Verify(a) => {
            let id: IdentityId = a.identity.parse()?;
            let params =
                IdentityParams::new(a.width, a.length, a.p, a.x).with_route(route(a.route));
            let report = verify(id, &params, &policy(a.backend, &a.tol))?;
            let mut w = sink(&a.out.output)?;
            match a.out.format.unwrap_or(Format::Json) {
                Format::Text => writeln!(
                    w,
                    "{} {} L={} N={} p={} residual={}",
                    if report.pass { "PASS" } else { "FAIL" },
                    report.id,
                    a.width,
                    a.length,
                    a.p,
                    report.residual
                )?,
                Format::Csv => return Err(usage("verify does not emit CSV")),
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?,
            }
            w.flush()?;
            Ok(if report.pass {
                EXIT_PASS
            } else {
                EXIT_MISMATCH
            })
        }
        Command::VerifyAll(a) => {
            let ids = if a.identities.is_empty() {
                IdentityId::ALL.to_vec()
            } else {
                a.identities
                    .iter()
                    .map(|s| s.parse())
                    .collect::<Result<_>>()?
            };
            let grid = Grid {
                ids,
                ps: a.p,
                widths: a.widths,
                lengths: a.lengths,
                xs: a.x,
                route: route(a.route),
            };
            let summary = verify_suite(&grid, &policy(a.backend, &a.tol));
            let mut w = sink(&a.out.output)?;
            match a.out.format.unwrap_or(Format::Json) {
                Format::Text => {
                    for r in &summary.reports {
                        writeln!(
                            w,
                            "{} {:<16} L={} N={} p={} x={} residual={}",
                            if r.pass { "PASS" } else { "FAIL" },
                            r.id.name(),
                            r.params.width,
                            r.params.length,
                            r.params.p,
                            r.params.x.map_or("-".to_string(), |x| x.to_string()),
                            r.residual
                        )?;
                    }
                    writeln!(w, "{} passed, {} failed", summary.passed, summary.failed)?;
                }
                Format::Csv => return Err(usage("verify-all does not emit CSV")),
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&summary.reports)?)?,
            }
            w.flush()?;
            Ok(if summary.failed == 0 {
                EXIT_PASS
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Spectrum(a) => {
            let s = sector(&a)?;
            let (p, q) = match (a.p, a.q, s) {
                (Some(p), _, Sector::Rsos { .. }) => (p, 0),
                (None, _, Sector::Rsos { .. }) => {
                    return Err(usage("--p is required for the RSOS representation"))
                }
                (_, Some(q), _) => (0, q),
                (Some(3), None, _) => (3, 1),
                (Some(4), None, _) => (4, 2),
                (Some(6), None, _) => (6, 3),
                (Some(p), None, _) => {
                    return Err(usage(format!(
                        "spin representation needs integer Q; p = {p}"
                    )))
                }
                (None, None, _) => return Err(usage("one of --p or --q is required")),
            };
            let t = build_sector(s, a.width, p, q, a.x)?;
            let table = spectrum(&t, a.group_tol)?;
            let mut w = sink(&a.out.output)?;
            match a.out.format.unwrap_or(Format::Text) {
                Format::Text => write!(w, "{}", table.to_text())?,
                Format::Csv => write!(w, "{}", table.to_csv())?,
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&table)?)?,
            }
            w.flush()?;
            Ok(if table.total_multiplicity() as usize == t.dim() {
                EXIT_PASS
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Table1(a) => {
            let report = table1(a.x, a.width)?;
            let mut w = sink(&a.out.output)?;
            match a.out.format.unwrap_or(Format::Text) {
                Format::Text => write!(w, "{}", report.to_text())?,
                Format::Csv => write!(w, "{}", report.to_csv())?,
                Format::Json => writeln!(w, "{}", serde_json::to_string_pretty(&report)?)?,
            }
            w.flush()?;
            let q = 3usize;
            let expected: Vec<u32> = crate::spectra::table1_sectors()
                .into_iter()
                .map(|s| match s {
                    Sector::Rsos { parity, twist } => {
                        crate::transfer::rsos_basis(a.width, 6, parity, twist)
                            .map(|b| b.len() as u32)
                            .unwrap_or(0)
                    }
                    _ => q.pow(a.width as u32) as u32,
                })
                .collect();
            Ok(if report.column_sums() == expected {
                EXIT_PASS
            } else {
                EXIT_MISMATCH
            })
        }
        Command::Enumerate(a) => {
            let lat = build_torus(a.width, a.length)?;
            let w = sink(&a.output)?;
            write_enumeration_jsonl(&lat, DEFAULT_EDGE_CAP, w)?;
            Ok(EXIT_PASS)
        }
    }
}

/// Parses `args`, runs, and maps errors to exit status 2.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_PASS
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> i32 {
        main_with_args(std::iter::once("potts-rsos").chain(args.iter().copied()))
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["verify"]), EXIT_USAGE);
        assert_eq!(run_args(&["frobnicate"]), EXIT_USAGE);
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let out = out.to_str().unwrap();
        assert_eq!(
            run_args(&[
                "verify",
                "--identity",
                "maindual",
                "--p",
                "5",
                "--L",
                "2",
                "--N",
                "2",
                "--output",
                out
            ]),
            EXIT_USAGE
        );
    }

    #[test]
    fn verify_writes_report() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("r.json");
        let code = run_args(&[
            "verify",
            "--identity",
            "maindual",
            "--p",
            "6",
            "--L",
            "2",
            "--N",
            "2",
            "--backend",
            "exact",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_PASS);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["residual"], "0");
        assert_eq!(v["pass"], true);
    }

    #[test]
    fn spectrum_csv_first_row() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.csv");
        let code = run_args(&[
            "spectrum",
            "--rep",
            "rsos",
            "--parity",
            "even",
            "--p",
            "6",
            "--L",
            "2",
            "--x",
            "5",
            "--format",
            "csv",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_PASS);
        let text = std::fs::read_to_string(&out).unwrap();
        assert!(text.lines().nth(1).unwrap().starts_with("-4.547135105405,"));
    }

    #[test]
    fn spin_q_from_p() {
        let dir = tempfile::tempdir().unwrap();
        let out = dir.path().join("s.json");
        let code = run_args(&[
            "spectrum",
            "--rep",
            "spin",
            "--p",
            "6",
            "--L",
            "2",
            "--x",
            "5",
            "--format",
            "json",
            "--output",
            out.to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_PASS);
        let v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
        assert_eq!(v["coupling"]["integer"], 3);
    }

    #[test]
    fn output_is_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let a = dir.path().join("a.csv");
        let b = dir.path().join("b.csv");
        for f in [&a, &b] {
            assert_eq!(
                run_args(&["table1", "--format", "csv", "--output", f.to_str().unwrap()]),
                EXIT_PASS
            );
        }
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    }
}
