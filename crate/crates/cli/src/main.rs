//! `farey-gaps`: gap statistics of Farey fractions in residue classes.
//!
//! Exit status: 0 on success, 1 when a check fails or an internal error
//! occurs, 2 on bad arguments.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use farey_gaps::farey::gap_histogram;
use farey_gaps::geometry::{cell, RegionDump};
use farey_gaps::proportions::{limit_table, limit_table_csv, verify_report};
use farey_gaps::tuple_sets::{closed_form_circ, enumerate_circ, enumerate_star, ResidueSpec, TupleSetPage};
use farey_gaps::{continuant, Error, KTuple};

#[derive(Parser, Debug)]
#[command(name = "farey-gaps", version, about = "Gaps between Farey fractions with denominators in a residue class")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SetSource {
    Brute,
    Closed,
}

#[derive(clap::Args, Debug)]
struct Out {
    /// Output format.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write to this file instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Histogram of gap orders between coloured fractions of the Farey sequence.
    Farey {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 3)]
        modulus: u64,
        #[arg(long = "residue", visible_alias = "c0", default_value_t = 1)]
        residue: u64,
        #[arg(long, default_value_t = 64)]
        rmax: usize,
        #[command(flatten)]
        out: Out,
    },
    /// Vertices and area of the cell of a tuple.
    Cell {
        /// Comma-separated entries, e.g. 3,2,1,7.
        #[arg(long)]
        tuple: String,
        #[command(flatten)]
        out: Out,
    },
    /// Members of a tuple set with entries up to kmax.
    Sets {
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = 3)]
        modulus: u64,
        #[arg(long = "c0", visible_alias = "residue")]
        c0: u64,
        #[arg(long)]
        c1: u64,
        /// Defaults to 4r + 8.
        #[arg(long)]
        kmax: Option<u64>,
        /// The set where the residue has not returned yet.
        #[arg(long, conflicts_with_all = ["check", "source"])]
        star: bool,
        #[arg(long, value_enum, default_value = "brute")]
        source: SetSource,
        /// Compare exhaustive search with the explicit tables; fail if they differ.
        #[arg(long)]
        check: bool,
        #[command(flatten)]
        out: Out,
    },
    /// Limit proportions for D = 3 from closed forms and from cell areas.
    Limits {
        #[arg(long = "c0", visible_alias = "residue", default_value_t = 1)]
        c0: u64,
        #[arg(long, default_value_t = 8)]
        rmax: u64,
        /// Terms summed per infinite series.
        #[arg(long, default_value_t = 100_000)]
        terms: u64,
        #[command(flatten)]
        out: Out,
    },
    /// Empirical proportions at order Q against the limits.
    Verify {
        #[arg(long)]
        q: u64,
        #[arg(long = "c0", visible_alias = "residue", default_value_t = 1)]
        c0: u64,
        #[arg(long, default_value_t = 8)]
        rmax: u64,
        #[arg(long, default_value_t = 100_000)]
        terms: u64,
        #[arg(long, default_value_t = 0.01)]
        tol: f64,
        #[command(flatten)]
        out: Out,
    },
}

enum Failure {
    Usage(String),
    Check(String),
    Internal(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::NonPositiveEntry(_)
            | Error::TupleParse(_)
            | Error::ZeroIndex
            | Error::InvalidResidue(_)
            | Error::UnsupportedSpec { .. }
            | Error::InvalidParameter(_)
            | Error::InvalidOrder
            | Error::OutsideTriangle { .. } => Failure::Usage(e.to_string()),
            _ => Failure::Internal(e.to_string()),
        }
    }
}

fn emit(out: &Out, text: &str) -> Result<(), Failure> {
    match &out.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Internal(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("serialisable");
    s.push('\n');
    s
}

fn sets_csv(page: &TupleSetPage) -> String {
    let mut out = String::from("tuple,continuant,area\n");
    for k in &page.tuples {
        out.push_str(&format!("\"{k}\",{},{}\n", continuant(k), cell(k).area()));
    }
    out
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Farey { q, modulus, residue, rmax, out } => {
            let hist = gap_histogram(q, modulus, residue, rmax)?;
            let text = match out.format.unwrap_or(Format::Csv) {
                Format::Csv => hist.to_csv(),
                Format::Json => json(&hist),
            };
            emit(&out, &text)
        }
        Command::Cell { tuple, out } => {
            let k: KTuple = tuple.parse()?;
            if k.is_empty() {
                return Err(Failure::Usage("tuple must have at least one entry".into()));
            }
            let dump = RegionDump::new(&k, &cell(&k));
            match out.format.unwrap_or(Format::Json) {
                Format::Json => emit(&out, &json(&dump)),
                Format::Csv => {
                    let mut text = String::from("x,y\n");
                    for [x, y] in &dump.vertices {
                        text.push_str(&format!("{x},{y}\n"));
                    }
                    emit(&out, &text)
                }
            }
        }
        Command::Sets { r, modulus, c0, c1, kmax, star, source, check, out } => {
            if r == 0 {
                return Err(Failure::Usage("r must be >= 1".into()));
            }
            let spec = ResidueSpec::new(modulus, c0, c1)?;
            let kmax = kmax.unwrap_or(4 * r as u64 + 8);
            if kmax == 0 {
                return Err(Failure::Usage("kmax must be >= 1".into()));
            }
            let page = if star {
                enumerate_star(r, &spec, kmax)
            } else if check || source == SetSource::Brute {
                enumerate_circ(r, &spec, kmax)
            } else {
                closed_form_circ(r, &spec, kmax)?
            };
            let text = match out.format.unwrap_or(Format::Json) {
                Format::Json => json(&page.dump()),
                Format::Csv => sets_csv(&page),
            };
            emit(&out, &text)?;
            if check {
                let closed = closed_form_circ(r, &spec, kmax)?;
                if closed.tuples != page.tuples {
                    let only = |a: &TupleSetPage, b: &TupleSetPage| {
                        a.tuples.iter().filter(|t| !b.tuples.contains(t)).map(|t| t.to_string()).collect::<Vec<_>>()
                    };
                    return Err(Failure::Check(format!(
                        "search and tables differ: only in search {:?}, only in tables {:?}",
                        only(&page, &closed),
                        only(&closed, &page)
                    )));
                }
                eprintln!("check passed: {} tuples", page.tuples.len());
            }
            Ok(())
        }
        Command::Limits { c0, rmax, terms, out } => {
            let rows = limit_table(c0, rmax, terms)?;
            let text = match out.format.unwrap_or(Format::Json) {
                Format::Json => json(&rows),
                Format::Csv => limit_table_csv(&rows),
            };
            emit(&out, &text)
        }
        Command::Verify { q, c0, rmax, terms, tol, out } => {
            let report = verify_report(q, c0, rmax, terms, tol)?;
            let text = match out.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let mut s = report.to_json();
                    s.push('\n');
                    s
                }
                Format::Csv => report.to_csv(),
            };
            emit(&out, &text)?;
            if report.all_pass() {
                Ok(())
            } else {
                let failed: Vec<u64> = report.rows.iter().filter(|r| !r.pass).map(|r| r.r).collect();
                Err(Failure::Check(format!("rows failed: {failed:?}")))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Internal(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}
