//! The `dav` command line.
//!
//! Exit codes: 0 accepted or true, 1 rejected or false, 2 undecided or a
//! closed-form/direct discrepancy, 3 usage or I/O error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::distinctness::{
    all_forms_rows_distinct, all_forms_rows_distinct_direct, correspondence_rows_distinct,
    correspondence_rows_distinct_direct, PairScope, DEFAULT_DIRECT_GUARD,
};
use crate::error::{DavError, Result};
use crate::io::{
    default_names, document_json, n_tableau_json, oracle_json, parse_auto, result_json, tableau_json, tableau_text,
    Body, Document,
};
use crate::oracle::{oracle_recognize_with, DEFAULT_CAP};
use crate::plurality::recognize_plurality_form;
use crate::recognizer::{
    recognize_correspondence, recognize_form_with, RecognizeOptions, Verdict, DEFAULT_ORACLE_GUARD,
};
use crate::special::{generate_n_correspondence, generate_n_form, recognize_n_tableau};
use crate::tableau::{generate_correspondence, generate_form, TieRule};
use crate::validate::validate_grid;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_UNDECIDED: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "dav", version, about = "Distributed approval voting tableaux")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Corr,
    Form,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Tie {
    Min,
    Max,
}

impl From<Tie> for TieRule {
    fn from(t: Tie) -> Self {
        match t {
            Tie::Min => TieRule::MinIndex,
            Tie::Max => TieRule::MaxIndex,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum What {
    Corr,
    Forms,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Mode {
    Closed,
    Direct,
    Both,
}

#[derive(Clone, Copy, Debug, ValueEnum, PartialEq, Eq)]
enum Axis {
    Rows,
    Cols,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the correspondence or a form for the given parameters.
    Generate {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        beta: u32,
        #[arg(long, value_enum, default_value = "corr")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "min")]
        tie: Tie,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Print a two-candidate tableau for voters with the given weights.
    GenerateN {
        #[arg(long, value_delimiter = ',', required = true)]
        weights: Vec<u32>,
        #[arg(long, value_enum, default_value = "corr")]
        kind: Kind,
        #[arg(long, value_enum, default_value = "min")]
        tie: Tie,
    },
    /// Decide whether a tableau file is DAV and recover its labels.
    Recognize {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ORACLE_GUARD)]
        oracle_guard: usize,
    },
    /// Decide whether rows (or columns) are pairwise distinct.
    CheckDistinct {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        alpha: u32,
        #[arg(long)]
        beta: u32,
        #[arg(long, value_enum, default_value = "forms")]
        what: What,
        #[arg(long, value_enum, default_value = "closed")]
        mode: Mode,
        #[arg(long, value_enum, default_value = "rows")]
        axis: Axis,
        #[arg(long, default_value_t = DEFAULT_DIRECT_GUARD)]
        guard: u128,
    },
    /// Forbidden-pattern check for a square single-card form.
    PluralityCheck { file: PathBuf },
    /// Exhaustive search for labelings.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        count_cap: usize,
        #[arg(long, default_value_t = DEFAULT_ORACLE_GUARD)]
        guard: usize,
    },
    /// Run every invariant over a parameter grid.
    ValidateGrid {
        #[arg(long)]
        pmax: usize,
        #[arg(long)]
        wmax: u32,
    },
    /// Randomly permute rows and columns (or every axis) of a tableau.
    Shuffle {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
}

/// Parse `argv` (including the program name), run, and return the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

fn emit(out: &mut dyn Write, v: &Value) -> Result<()> {
    let s = serde_json::to_string_pretty(v).map_err(|e| DavError::Parse(e.to_string()))?;
    writeln!(out, "{s}").map_err(|e| DavError::Parse(e.to_string()))
}

fn read_doc(path: &PathBuf) -> Result<Document> {
    let text = std::fs::read_to_string(path).map_err(|e| DavError::Parse(format!("{}: {e}", path.display())))?;
    parse_auto(&text)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Accepted => EXIT_OK,
        Verdict::Rejected => EXIT_NO,
        Verdict::Undecided => EXIT_UNDECIDED,
    }
}

fn bool_code(b: bool) -> i32 {
    if b {
        EXIT_OK
    } else {
        EXIT_NO
    }
}

fn execute(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Generate { p, alpha, beta, kind, tie, format } => {
            let names = default_names(p);
            let h = generate_correspondence(p, alpha, beta)?;
            match (kind, format) {
                (Kind::Corr, Format::Json) => emit(out, &tableau_json(&h, &names))?,
                (Kind::Form, Format::Json) => emit(out, &tableau_json(&generate_form(p, alpha, beta, tie.into())?, &names))?,
                (Kind::Corr, Format::Text) => write_text(out, &tableau_text(&h, &names)?)?,
                (Kind::Form, Format::Text) => {
                    write_text(out, &tableau_text(&generate_form(p, alpha, beta, tie.into())?, &names)?)?
                }
            }
            Ok(EXIT_OK)
        }
        Command::GenerateN { weights, kind, tie } => {
            let names = default_names(2);
            let v = match kind {
                Kind::Corr => n_tableau_json(&generate_n_correspondence(&weights)?, &names),
                Kind::Form => n_tableau_json(&generate_n_form(&weights, tie.into())?, &names),
            };
            emit(out, &v)?;
            Ok(EXIT_OK)
        }
        Command::Recognize { file, oracle_guard } => {
            let doc = read_doc(&file)?;
            let r = match &doc.body {
                Body::Correspondence(h) => recognize_correspondence(h),
                Body::Form(g) => recognize_form_with(g, RecognizeOptions { oracle_guard }),
                Body::NCorrespondence(f) => recognize_n_tableau(f),
                Body::NForm(f) => recognize_n_tableau(f),
            };
            emit(out, &result_json(&r, &doc.names))?;
            Ok(verdict_code(r.verdict))
        }
        Command::CheckDistinct { p, alpha, beta, what, mode, axis, guard } => {
            let (a, b) = if axis == Axis::Rows { (alpha, beta) } else { (beta, alpha) };
            let closed = match what {
                What::Corr => correspondence_rows_distinct(p, a, b)?,
                What::Forms => all_forms_rows_distinct(p, a, b)?,
            };
            let mut report = json!({
                "what": if what == What::Corr { "correspondence" } else { "forms" },
                "axis": if axis == Axis::Rows { "rows" } else { "cols" },
                "p": p, "alpha": alpha, "beta": beta,
            });
            if mode != Mode::Direct {
                report["closed"] = json!(closed);
            }
            let mut direct = None;
            if mode != Mode::Closed {
                let d = match what {
                    What::Corr => {
                        let d = correspondence_rows_distinct_direct(p, a, b)?;
                        report["direct"] = json!(d);
                        d
                    }
                    What::Forms => {
                        let r = all_forms_rows_distinct_direct(p, a, b, PairScope::AllPairs, guard)?;
                        report["direct"] = json!(r.distinct);
                        report["empty_pairs"] = json!(r
                            .empty_pairs
                            .iter()
                            .map(|(x, y)| [x.counts().to_vec(), y.counts().to_vec()])
                            .collect::<Vec<_>>());
                        r.distinct
                    }
                };
                direct = Some(d);
            }
            let code = match (mode, direct) {
                (Mode::Both, Some(d)) if d != closed => {
                    report["discrepancy"] = json!(true);
                    EXIT_UNDECIDED
                }
                (Mode::Direct, Some(d)) => bool_code(d),
                _ => bool_code(closed),
            };
            emit(out, &report)?;
            Ok(code)
        }
        Command::PluralityCheck { file } => {
            let doc = read_doc(&file)?;
            let Body::Form(g) = &doc.body else {
                return Err(DavError::InvalidParameters("plurality-check needs a form".into()));
            };
            let r = recognize_plurality_form(g);
            emit(out, &result_json(&r, &doc.names))?;
            Ok(verdict_code(r.verdict))
        }
        Command::Oracle { file, count_cap, guard } => {
            let doc = read_doc(&file)?;
            let r = match &doc.body {
                Body::Correspondence(h) => oracle_recognize_with(h, count_cap, guard)?,
                Body::Form(g) => oracle_recognize_with(g, count_cap, guard)?,
                _ => return Err(DavError::InvalidParameters("oracle needs a two-voter matrix".into())),
            };
            emit(out, &oracle_json(&r, &doc.names))?;
            Ok(bool_code(r.is_dav))
        }
        Command::ValidateGrid { pmax, wmax } => {
            let r = validate_grid(pmax, wmax)?;
            emit(out, &json!(r))?;
            Ok(bool_code(r.passed()))
        }
        Command::Shuffle { file, seed, format } => {
            let doc = read_doc(&file)?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut perm = |n: usize| {
                let mut v: Vec<usize> = (0..n).collect();
                v.shuffle(&mut rng);
                v
            };
            let body = match doc.body {
                Body::Correspondence(h) => Body::Correspondence(h.permuted(&perm(h.rows()), &perm(h.cols()))),
                Body::Form(g) => Body::Form(g.permuted(&perm(g.rows()), &perm(g.cols()))),
                Body::NCorrespondence(f) => {
                    let perms: Vec<Vec<usize>> = f.dims().into_iter().map(&mut perm).collect();
                    Body::NCorrespondence(f.permuted(&perms))
                }
                Body::NForm(f) => {
                    let perms: Vec<Vec<usize>> = f.dims().into_iter().map(&mut perm).collect();
                    Body::NForm(f.permuted(&perms))
                }
            };
            let doc = Document { names: doc.names, body };
            match (format, &doc.body) {
                (Format::Text, Body::Correspondence(h)) => write_text(out, &tableau_text(h, &doc.names)?)?,
                (Format::Text, Body::Form(g)) => write_text(out, &tableau_text(g, &doc.names)?)?,
                _ => emit(out, &document_json(&doc))?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn write_text(out: &mut dyn Write, s: &str) -> Result<()> {
    out.write_all(s.as_bytes()).map_err(|e| DavError::Parse(e.to_string()))
}
