//! The `symtest` command line.
//!
//! Exit codes: 0 success, 1 failed validation or numerical failure, 2 bad
//! flags, 3 size or range guard, 4 unwritable output path.

mod svg;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde_json::json;

use crate::error::{Error, Result};
use crate::hypothesis::{
    beta_numeric, beta_optimal, cross_validate, dmax_analytic, sample_complexity_exact, sample_complexity_tabulated,
    Beta, BetaMethod, ErrorBudget, ValidationMode,
};
use crate::integrals::RngStream;
use crate::numfmt::{format_f64, format_rational, parse_rational};
use crate::protocol::{build_optimal_protocol, simulate};
use crate::rep::{branching_table, closed_form_beta0, SubgroupFamily, SubgroupKind};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_GUARD: i32 = 3;
pub const EXIT_IO: i32 = 4;

/// Largest `--n-max` accepted by `curve`.
pub const CURVE_MAX_N: u32 = 100_000;

#[derive(Parser, Debug)]
#[command(name = "symtest", version, about = "Optimal type-II error for unitary symmetry testing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Subgroup {
    Identity,
    Z,
    T,
}

impl Subgroup {
    fn kind(self) -> SubgroupKind {
        SubgroupKind::qubit(match self {
            Subgroup::Identity => SubgroupFamily::Trivial,
            Subgroup::Z => SubgroupFamily::Torus,
            Subgroup::T => SubgroupFamily::Orthogonal,
        })
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Analytic,
    Numeric,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DmaxMethod {
    Analytic,
    Numeric,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum CurveFormat {
    Csv,
    Svg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TableFormat {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Optimal type-II error β(ε).
    Beta {
        #[arg(long, value_enum)]
        subgroup: Subgroup,
        #[arg(long)]
        n: u32,
        /// Type-I tolerance, as a decimal or a fraction.
        #[arg(long, default_value = "0")]
        eps: String,
        #[arg(long, value_enum, default_value = "analytic")]
        method: MethodArg,
    },
    /// β(n) for all three subgroups, n = 1..n-max.
    Curve {
        #[arg(long)]
        n_max: u32,
        #[arg(long, value_enum, default_value = "csv")]
        format: CurveFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fewest queries with β ≤ δ.
    Samples {
        #[arg(long, value_enum)]
        subgroup: Subgroup,
        #[arg(long)]
        delta: String,
        /// Scan branching tables up to this n instead of bisecting the closed form.
        #[arg(long)]
        tables: Option<u32>,
    },
    /// Cross-checks β against exact integration and a simulated protocol.
    Validate {
        #[arg(long, value_enum)]
        subgroup: Subgroup,
        #[arg(long)]
        n: u32,
        /// Alternative-hypothesis samples for the protocol simulation.
        #[arg(long, default_value_t = 100_000)]
        shots: usize,
        #[arg(long, default_value_t = 10_000)]
        null_shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 0)]
        stream: u64,
        /// Also estimate the Haar operator from `shots` samples.
        #[arg(long)]
        monte_carlo: bool,
    },
    /// Branching multiplicities n_{η,λ}.
    Branching {
        #[arg(long, value_enum)]
        subgroup: Subgroup,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "text")]
        format: TableFormat,
    },
    /// e^{Dmax} between the subgroup and Haar performance operators.
    Dmax {
        #[arg(long, value_enum)]
        subgroup: Subgroup,
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value = "analytic")]
        method: DmaxMethod,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidArgument(_) => EXIT_USAGE,
        Error::Io(_) => EXIT_IO,
        e if e.is_size_guard() => EXIT_GUARD,
        _ => EXIT_FAILED,
    }
}

/// Parses `args` (including the program name) and runs one subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Beta {
            subgroup,
            n,
            eps,
            method,
        } => {
            let eps = ErrorBudget::parse(&eps)?;
            let method = match method {
                MethodArg::Analytic => BetaMethod::Analytic,
                MethodArg::Numeric => BetaMethod::Numeric,
            };
            let beta = beta_optimal(subgroup.kind(), n, &eps, method)?;
            emit(out, &format!("{beta}\n"))
        }
        Command::Curve { n_max, format, out: path } => {
            let text = curve(n_max, format)?;
            match path {
                Some(p) => write_atomic(&p, text.as_bytes()).map(|_| EXIT_OK),
                None => emit(out, &text),
            }
        }
        Command::Samples {
            subgroup,
            delta,
            tables,
        } => {
            let delta = parse_rational(&delta)?;
            let r = match tables {
                Some(max_n) => sample_complexity_tabulated(subgroup.kind(), &delta, max_n)?,
                None => sample_complexity_exact(subgroup.kind(), &delta)?,
            };
            emit(out, &format!("n*={}, beta={}\n", r.n_star, r.beta_at_n_star))
        }
        Command::Validate {
            subgroup,
            n,
            shots,
            null_shots,
            seed,
            stream,
            monte_carlo,
        } => validate(out, subgroup.kind(), n, shots, null_shots, RngStream::new(seed, stream), monte_carlo),
        Command::Branching { subgroup, n, format } => {
            let table = branching_table(subgroup.kind(), n)?;
            let text = match format {
                TableFormat::Json => format!("{}\n", table.to_json()),
                TableFormat::Text => {
                    let mut s = String::from("eta\tlambda\tmult\n");
                    for (eta, lambda, m) in table.entries() {
                        s.push_str(&format!("{eta}\t{lambda}\t{m}\n"));
                    }
                    s
                }
            };
            emit(out, &text)
        }
        Command::Dmax { subgroup, n, method } => {
            let kind = subgroup.kind();
            let mut text = String::new();
            if matches!(method, DmaxMethod::Analytic | DmaxMethod::Both) {
                let e = dmax_analytic(kind, n)?;
                text.push_str(&format!("exp_dmax = {e} = {}\n", format_rational(&e)));
            }
            if matches!(method, DmaxMethod::Numeric | DmaxMethod::Both) {
                let e = 1.0 / beta_numeric(kind, n)?;
                text.push_str(&format!("exp_dmax ~ {} (dmax = {})\n", format_f64(e), format_f64(e.ln())));
            }
            emit(out, &text)
        }
    }
}

fn emit(out: &mut dyn Write, text: &str) -> Result<i32> {
    out.write_all(text.as_bytes())?;
    Ok(EXIT_OK)
}

const CURVE_FAMILIES: [SubgroupFamily; 3] = [
    SubgroupFamily::Trivial,
    SubgroupFamily::Torus,
    SubgroupFamily::Orthogonal,
];

fn curve_rows(n_max: u32) -> Result<Vec<(u32, [BigRational; 3])>> {
    if n_max == 0 {
        return Err(Error::InvalidArgument("--n-max must be at least 1".into()));
    }
    if n_max > CURVE_MAX_N {
        return Err(Error::OutOfRange(format!("--n-max {n_max} exceeds {CURVE_MAX_N}")));
    }
    (1..=n_max)
        .map(|n| {
            let b = |f| closed_form_beta0(SubgroupKind::qubit(f), n);
            Ok((n, [b(CURVE_FAMILIES[0])?, b(CURVE_FAMILIES[1])?, b(CURVE_FAMILIES[2])?]))
        })
        .collect()
}

fn curve(n_max: u32, format: CurveFormat) -> Result<String> {
    let rows = curve_rows(n_max)?;
    Ok(match format {
        CurveFormat::Csv => {
            let mut s = String::from("n,beta_identity,beta_z,beta_t\n");
            for (n, b) in &rows {
                s.push_str(&format!(
                    "{n},{},{},{}\n",
                    format_rational(&b[0]),
                    format_rational(&b[1]),
                    format_rational(&b[2])
                ));
            }
            s
        }
        CurveFormat::Svg => {
            let series: Vec<(&str, Vec<(f64, f64)>)> = ["identity", "Z-symmetry", "T-symmetry"]
                .iter()
                .enumerate()
                .map(|(k, name)| {
                    let pts = rows
                        .iter()
                        .map(|(n, b)| (*n as f64, b[k].to_f64().unwrap_or(f64::NAN)))
                        .collect();
                    (*name, pts)
                })
                .collect();
            svg::log_plot(&series, "queries n", "optimal type-II error")
        }
    })
}

/// Writes `bytes` next to `path` and renames it into place.
fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    let result = std::fs::write(&tmp, bytes).and_then(|_| std::fs::rename(&tmp, path));
    if result.is_err() {
        let _ = std::fs::remove_file(&tmp);
    }
    Ok(result?)
}

fn validate(
    out: &mut dyn Write,
    kind: SubgroupKind,
    n: u32,
    shots: usize,
    null_shots: usize,
    rng: RngStream,
    monte_carlo: bool,
) -> Result<i32> {
    let exact = cross_validate(kind, n, ValidationMode::Exact)?;
    let mc = if monte_carlo {
        Some(cross_validate(kind, n, ValidationMode::MonteCarlo { shots, rng })?)
    } else {
        None
    };
    let protocol = build_optimal_protocol(kind, n)?;
    let sim = simulate(&protocol, null_shots, shots, rng)?;
    let sim_pass = sim.type_i_worst <= 1e-9 && sim.type_ii_consistent(4.0);
    let pass = exact.pass && sim_pass && mc.as_ref().is_none_or(|r| r.pass);
    let beta = match beta_optimal(kind, n, &ErrorBudget::zero(), BetaMethod::Analytic)? {
        Beta::Exact(q) => q.to_string(),
        Beta::Approx(x) => x.to_string(),
    };
    let report = json!({
        "subgroup": kind.family.cli_name(),
        "n": n,
        "beta": beta,
        "seed": rng.seed,
        "stream": rng.stream,
        "cross_validation": exact,
        "monte_carlo": mc,
        "reference_free": protocol.reference_free,
        "simulation": sim,
        "simulation_pass": sim_pass,
        "pass": pass,
    });
    out.write_all(serde_json::to_string_pretty(&report).expect("json").as_bytes())?;
    out.write_all(b"\n")?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILED })
}
