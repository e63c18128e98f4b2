//! Command-line surface. Exit codes: 0 pass, 1 invariant failure, 2 usage or parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::lattice::{classify_vn_state, default_threshold, MixedRepresentation};
use crate::number_theory::{enumerate_splits, factorize, make_split, CoprimeSplit};
use crate::report::fmt_float;
use crate::representations::{build_basis, build_pls, conjugate_basis, conjugate_state, BasisKind};
use crate::statefile::{BasisBundle, StateFile};
use crate::suite::{run_suite, Tolerance};
use crate::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "phasecrt", version, about = "Finite-dimensional phase space on the CRT torus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Ascii,
}

/// `M` given positionally or as `--M`.
#[derive(Debug, Args)]
struct DimArg {
    #[arg(value_name = "M")]
    m: Option<u64>,
    #[arg(long = "M", value_name = "M")]
    m_flag: Option<u64>,
}

/// `M` and `M1` as flags; any not given as a flag is taken from the leading
/// positionals, in order.
#[derive(Debug, Args)]
struct SplitFlags {
    #[arg(long = "M", value_name = "M")]
    m: Option<u64>,
    #[arg(long = "M1", value_name = "M1")]
    m1: Option<u64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Prime factorization and the number of kq representation pairs.
    Factor {
        #[command(flatten)]
        dim: DimArg,
    },
    /// Nontrivial coprime splits with their CRT constants.
    Splits {
        #[command(flatten)]
        dim: DimArg,
    },
    /// CRT relabeling: one label decomposes q, two labels compose (q1, q2).
    Crt {
        #[command(flatten)]
        split: SplitFlags,
        /// `M M1 q` or `M M1 q1 q2`, minus whatever was given as flags.
        #[arg(value_name = "ARGS")]
        args: Vec<u64>,
    },
    /// Builds a representation basis and reports its Gram residual.
    Basis {
        #[command(flatten)]
        split: SplitFlags,
        #[arg(long = "kind")]
        kind: Option<String>,
        /// `M M1 KIND`, minus whatever was given as flags.
        #[arg(value_name = "ARGS")]
        args: Vec<String>,
        /// Exchange the roles of position and momentum.
        #[arg(long)]
        conjugate: bool,
        /// Write the basis bundle (JSON) here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Phase-space support map of the partially localized state (q01, k02).
    Map {
        #[command(flatten)]
        split: SplitFlags,
        #[arg(long = "q01")]
        q01: Option<u64>,
        #[arg(long = "k02")]
        k02: Option<u64>,
        /// `M M1 Q01 K02`, minus whatever was given as flags.
        #[arg(value_name = "ARGS")]
        args: Vec<u64>,
        #[arg(long)]
        threshold: Option<f64>,
        /// Map the q<->k exchanged state instead.
        #[arg(long)]
        conjugate: bool,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Runs the identity suite for a comma-separated list of dimensions.
    Suite {
        #[arg(value_name = "M_LIST", value_delimiter = ',')]
        dims: Vec<u64>,
        #[arg(long = "M", value_delimiter = ',')]
        dims_flag: Vec<u64>,
        #[arg(long, value_enum, default_value = "ascii")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Classifies a state file against the von Neumann lattices of a split.
    Classify {
        #[arg(value_name = "FILE")]
        input: PathBuf,
        #[arg(value_name = "M1")]
        m1: Option<u64>,
        #[arg(long = "M1")]
        m1_flag: Option<u64>,
        #[arg(long)]
        threshold: Option<f64>,
    },
}

enum Failure {
    Usage(String),
    Invariant(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type CmdResult = std::result::Result<i32, Failure>;

fn pick<T: Copy>(pos: Option<T>, flag: Option<T>, name: &str) -> std::result::Result<T, Failure> {
    match (pos, flag) {
        (Some(_), Some(_)) => Err(Failure::Usage(format!("{name} given twice"))),
        (Some(v), None) | (None, Some(v)) => Ok(v),
        (None, None) => Err(Failure::Usage(format!("missing {name}"))),
    }
}

impl DimArg {
    fn get(&self) -> std::result::Result<u64, Failure> {
        let m = pick(self.m, self.m_flag, "M")?;
        if m < 2 {
            return Err(Failure::Usage(format!("M must be at least 2, got {m}")));
        }
        Ok(m)
    }
}

/// Fills each slot from its flag or, failing that, from the next positional.
/// Returns the filled slots and the leftover positionals.
fn fill<T: Clone>(
    slots: &[(&str, Option<T>)],
    positionals: &[T],
) -> std::result::Result<(Vec<T>, Vec<T>), Failure> {
    let mut next = 0;
    let mut filled = Vec::with_capacity(slots.len());
    for (name, flag) in slots {
        if let Some(v) = flag {
            filled.push(v.clone());
        } else if let Some(v) = positionals.get(next) {
            filled.push(v.clone());
            next += 1;
        } else {
            return Err(Failure::Usage(format!("missing {name}")));
        }
    }
    Ok((filled, positionals[next..].to_vec()))
}

fn checked_dim(m: u64) -> std::result::Result<u64, Failure> {
    if m < 2 {
        return Err(Failure::Usage(format!("M must be at least 2, got {m}")));
    }
    Ok(m)
}

fn no_extra<T: std::fmt::Debug>(rest: &[T]) -> std::result::Result<(), Failure> {
    if rest.is_empty() {
        Ok(())
    } else {
        Err(Failure::Usage(format!("unexpected arguments {rest:?}")))
    }
}

fn emit(out: &mut dyn Write, path: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure::Invariant(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Invariant(e.to_string())),
    }
}

fn threshold_for(m: u64, t: Option<f64>) -> std::result::Result<f64, Failure> {
    match t {
        None => Ok(default_threshold(m)),
        Some(x) if x > 0.0 && x.is_finite() => Ok(x),
        Some(x) => Err(Failure::Usage(format!("threshold must be positive, got {x}"))),
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Invariant(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_FAILURE
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Factor { dim } => cmd_factor(dim.get()?, out),
        Command::Splits { dim } => cmd_splits(dim.get()?, out),
        Command::Crt { split, args } => {
            let (v, labels) = fill(&[("M", split.m), ("M1", split.m1)], &args)?;
            let s = make_split(checked_dim(v[0])?, v[1])?;
            cmd_crt(&s, &labels, out)
        }
        Command::Basis {
            split,
            kind,
            args,
            conjugate,
            out: path,
        } => {
            let slots = [
                ("M", split.m.map(|x| x.to_string())),
                ("M1", split.m1.map(|x| x.to_string())),
                ("KIND", kind),
            ];
            let (v, rest) = fill(&slots, &args)?;
            no_extra(&rest)?;
            let num = |name: &str, x: &str| {
                x.parse::<u64>()
                    .map_err(|_| Failure::Usage(format!("{name} must be a non-negative integer, got `{x}`")))
            };
            let m = checked_dim(num("M", &v[0])?)?;
            let m1 = num("M1", &v[1])?;
            let kind: BasisKind = v[2].parse().map_err(Failure::Usage)?;
            cmd_basis(m, m1, kind, conjugate, path.as_deref(), out)
        }
        Command::Map {
            split,
            q01,
            k02,
            args,
            threshold,
            conjugate,
            format,
            out: path,
        } => {
            let slots = [("M", split.m), ("M1", split.m1), ("q01", q01), ("k02", k02)];
            let (v, rest) = fill(&slots, &args)?;
            no_extra(&rest)?;
            let s = make_split(checked_dim(v[0])?, v[1])?;
            let th = threshold_for(s.m(), threshold)?;
            cmd_map(&s, v[2], v[3], th, conjugate, format, path.as_deref(), out)
        }
        Command::Suite {
            dims,
            dims_flag,
            format,
            out: path,
        } => {
            let dims = match (dims.is_empty(), dims_flag.is_empty()) {
                (false, true) => dims,
                (true, false) => dims_flag,
                (true, true) => return Err(Failure::Usage("missing M_LIST".into())),
                (false, false) => return Err(Failure::Usage("M_LIST given twice".into())),
            };
            cmd_suite(&dims, format, path.as_deref(), out, err)
        }
        Command::Classify {
            input,
            m1,
            m1_flag,
            threshold,
        } => cmd_classify(&input, pick(m1, m1_flag, "M1")?, threshold, out),
    }
}

fn cmd_factor(m: u64, out: &mut dyn Write) -> CmdResult {
    let f = factorize(m)?;
    let note = if f.distinct_primes() == 1 { " (Fourier only)" } else { "" };
    emit(out, None, &format!("{f}, chi = {}{note}\n", f.chi()))?;
    Ok(EXIT_OK)
}

fn cmd_splits(m: u64, out: &mut dyn Write) -> CmdResult {
    let splits = enumerate_splits(m)?;
    let mut text = String::new();
    if splits.is_empty() {
        let _ = writeln!(text, "{m}: no nontrivial coprime split");
    }
    for s in splits {
        let _ = writeln!(
            text,
            "M1={} M2={} L1={} L2={} N1={} N2={}",
            s.m1(),
            s.m2(),
            s.l1(),
            s.l2(),
            s.n1(),
            s.n2()
        );
    }
    emit(out, None, &text)?;
    Ok(EXIT_OK)
}

fn cmd_crt(s: &CoprimeSplit, labels: &[u64], out: &mut dyn Write) -> CmdResult {
    let line = match *labels {
        [q] => {
            let (q1, q2) = s.decompose(q)?;
            format!("q={q} -> (q1={q1}, q2={q2})\n")
        }
        [q1, q2] => format!("(q1={q1}, q2={q2}) -> q={}\n", s.compose(q1, q2)?),
        _ => return Err(Failure::Usage("expected one or two labels".into())),
    };
    emit(out, None, &line)?;
    Ok(EXIT_OK)
}

fn cmd_basis(
    m: u64,
    m1: u64,
    kind: BasisKind,
    conjugate: bool,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let basis = match build_basis(kind, m, m1) {
        Ok(b) => b,
        Err(e @ Error::RequiresCoprime { .. }) => {
            return Err(Failure::Invariant(format!(
                "{e}: gcd({m1}, {}) must be 1 for the CRT labels to exist",
                m / m1
            )))
        }
        Err(e) => return Err(e.into()),
    };
    let basis = if conjugate { conjugate_basis(&basis) } else { basis };
    let tol = Tolerance::from_env().map_err(Failure::Usage)?.amplitude(m);
    let bundle = BasisBundle::from_basis(&basis);
    if let Some(p) = path {
        emit(out, Some(p), &bundle.to_json())?;
    }
    let status = if bundle.gram_residual < tol { "ok" } else { "FAIL" };
    emit(
        out,
        None,
        &format!(
            "basis {kind}{} M={m} M1={m1} M2={}: {} states, Gram residual {} (tolerance {}) {status}\n",
            if conjugate { " (conjugate)" } else { "" },
            m / m1,
            bundle.states.len(),
            fmt_float(bundle.gram_residual),
            fmt_float(tol),
        ),
    )?;
    Ok(if bundle.gram_residual < tol { EXIT_OK } else { EXIT_FAILURE })
}

#[allow(clippy::too_many_arguments)]
fn cmd_map(
    s: &CoprimeSplit,
    q01: u64,
    k02: u64,
    threshold: f64,
    conjugate: bool,
    format: Format,
    path: Option<&Path>,
    out: &mut dyn Write,
) -> CmdResult {
    let v = build_pls(s, q01, k02)?;
    let v = if conjugate { conjugate_state(&v) } else { v };
    let m = s.m();
    let grid = v.mixed_grid();
    let mag = |q: u64, k: u64| grid[(q * m + k) as usize].norm();
    let text = match format {
        Format::Ascii => {
            let w = (m - 1).to_string().len();
            let mut t = String::new();
            for k in (0..m).rev() {
                let row: String = (0..m)
                    .map(|q| if mag(q, k) > threshold { '#' } else { '.' })
                    .collect();
                let _ = writeln!(t, "{k:>w$} {row}");
            }
            let _ = writeln!(
                t,
                "rows k = {}..0, columns q = 0..{}; '#' where |<q|rho|k>| > {}; cell area 2pi/{m}",
                m - 1,
                m - 1,
                fmt_float(threshold)
            );
            t
        }
        Format::Csv => {
            let mut t = String::from("q,k,magnitude\n");
            for q in 0..m {
                for k in 0..m {
                    let _ = writeln!(t, "{q},{k},{}", fmt_float(mag(q, k)));
                }
            }
            t
        }
        Format::Json => {
            let support: Vec<[u64; 2]> = (0..m)
                .flat_map(|q| (0..m).map(move |k| (q, k)))
                .filter(|&(q, k)| mag(q, k) > threshold)
                .map(|(q, k)| [q, k])
                .collect();
            let doc = serde_json::json!({
                "dim": m,
                "split": [s.m1(), s.m2()],
                "state": [q01, k02],
                "conjugate": conjugate,
                "threshold": fmt_float(threshold),
                "cell_area": format!("2pi/{m}"),
                "support": support,
            });
            serde_json::to_string_pretty(&doc).expect("json") + "\n"
        }
    };
    emit(out, path, &text)?;
    Ok(EXIT_OK)
}

fn cmd_suite(
    dims: &[u64],
    format: Format,
    path: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let tol = Tolerance::from_env().map_err(Failure::Usage)?;
    let report = run_suite(dims, tol)?;
    let text = match format {
        Format::Json => report.to_json() + "\n",
        Format::Ascii => report.to_table(),
        Format::Csv => return Err(Failure::Usage("suite supports --format json or ascii".into())),
    };
    emit(out, path, &text)?;
    let _ = writeln!(err, "suite finished in {:.3} s", report.duration.as_secs_f64());
    Ok(if report.has_failures() { EXIT_FAILURE } else { EXIT_OK })
}

fn cmd_classify(input: &Path, m1: u64, threshold: Option<f64>, out: &mut dyn Write) -> CmdResult {
    let file = StateFile::read(input)?;
    let v = file.to_state()?;
    let s = make_split(v.dim() as u64, m1)?;
    let th = threshold_for(s.m(), threshold)?;
    let verdict = classify_vn_state(&v, &s, th)?;
    emit(out, None, &format!("{verdict}\n"))?;
    Ok(EXIT_OK)
}
