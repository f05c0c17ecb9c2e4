//! Subcommands of the `ordsearch` binary. Every command renders its output
//! to a string so identical invocations give identical bytes.

use std::fmt;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ordsearch::format::fmt17;
use ordsearch::lowerbound::{
    distinguishability_threshold, hankel_matrix, hilbert_matrix, lemma_bound, query_lower_bound, run_trajectory,
    simulate, spectral_norm, total_weight, NormMethod, QueryAlgorithm,
};
use ordsearch::oracle::{enumerate_instances, OrderedInstance};
use ordsearch::teamsearch::{
    build_layout, decompose, expansion, query_count_from, trace_files, EmbeddedBinarySearch, TeamSearch,
};
use ordsearch::{Error, Trajectory, Weights};
use serde_json::{json, Map, Number, Value};

/// Probability slack for calling a simulation exact.
pub const EXACT_TOL: f64 = 1e-9;
/// Slack on the per-query drop cap.
pub const DROP_TOL: f64 = 1e-8;

#[derive(Parser, Debug)]
#[command(name = "ordsearch", version, about = "Quantum ordered-search simulations and bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    Binary,
    Team,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Initial weight, per-query drop cap and the resulting query lower bound.
    Bound {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Weighted overlap after each query (CSV by default).
    Trajectory {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
    },
    /// Run one instance, or all of them, and measure.
    Simulate {
        #[arg(long, value_enum)]
        algo: Algo,
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long)]
        answer: Option<usize>,
        /// Team runs only: write one state dump per stage into this directory.
        #[arg(long, requires = "answer")]
        trace: Option<PathBuf>,
    },
    /// Known-bit layout of `r` computers over `2 r^2` bits (1-based indices).
    Layout {
        #[arg(long)]
        r: usize,
    },
    /// Bits known after one more query, starting from `m`.
    Expansion {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
    },
    /// Spectral norms of the Hilbert and truncated Hankel matrices.
    Norms {
        #[arg(long)]
        size: usize,
    },
    /// Digits of `m` over the bases (2 * 4^k + 1) / 3.
    Decompose {
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
    },
    /// Query rounds needed to know `n` bits, starting from `m` known bits.
    Querycount {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
        m: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments; exit code 2.
    Usage(String),
    /// A checked invariant failed; exit code 1. Carries any output produced.
    Violation {
        message: String,
        output: Option<String>,
    },
    Io(std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Violation { .. } | CliError::Io(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Violation { message, .. } => write!(f, "invariant violated: {message}"),
            CliError::Io(e) => write!(f, "io error: {e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInstance { .. }
            | Error::OutOfRange { .. }
            | Error::NotPowerOfTwo { .. }
            | Error::InvalidLayout(_)
            | Error::InvalidInterval { .. } => CliError::Usage(e.to_string()),
            other => CliError::Violation { message: other.to_string(), output: None },
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

type CliResult<T> = Result<T, CliError>;

/// JSON number printed with 17 significant digits; `null` if not finite.
pub fn num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    Value::Number(fmt17(x).parse::<Number>().expect("fmt17 output is a JSON number"))
}

fn size(n: u64) -> CliResult<usize> {
    usize::try_from(n).map_err(|_| CliError::Usage(format!("{n} is too large")))
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("JSON values serialize");
    s.push('\n');
    s
}

fn csv_cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(csv_cell).collect::<Vec<_>>().join(" "),
        other => other.to_string(),
    }
}

/// Flat CSV: one row for an object, one row per element for an array of
/// objects. Nested arrays become space-separated cells.
fn render_csv(v: &Value) -> CliResult<String> {
    let rows: Vec<&Map<String, Value>> = match v {
        Value::Object(m) => vec![m],
        Value::Array(items) => items
            .iter()
            .map(|i| i.as_object().ok_or_else(|| CliError::Usage("output has no CSV form".into())))
            .collect::<CliResult<_>>()?,
        _ => return Err(CliError::Usage("output has no CSV form".into())),
    };
    let Some(first) = rows.first() else {
        return Ok(String::new());
    };
    if first.values().any(|x| x.is_object() || x.as_array().is_some_and(|a| a.iter().any(Value::is_object))) {
        return Err(CliError::Usage("output has no CSV form; use --format json".into()));
    }
    let mut out = first.keys().cloned().collect::<Vec<_>>().join(",");
    out.push('\n');
    for row in rows {
        out.push_str(&row.values().map(csv_cell).collect::<Vec<_>>().join(","));
        out.push('\n');
    }
    Ok(out)
}

fn render(v: &Value, format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(render_json(v)),
        Format::Csv => render_csv(v),
    }
}

fn trajectory_json(rec: &Trajectory) -> Value {
    json!({
        "n": rec.n,
        "bound": num(rec.bound),
        "steps": rec.steps.iter().map(|s| json!({
            "j": s.j,
            "W_re": num(s.w.re),
            "W_im": num(s.w.im),
            "drop_abs": s.drop.map_or(Value::Null, |d| num(d.norm())),
        })).collect::<Vec<_>>(),
    })
}

fn algorithm(algo: Algo, n: usize) -> CliResult<Box<dyn QueryAlgorithm<f64>>> {
    Ok(match algo {
        Algo::Binary => Box::new(EmbeddedBinarySearch::new(n)?),
        Algo::Team => Box::new(TeamSearch::for_list_len(n)?),
    })
}

fn cmd_bound(n: usize, eps: f64) -> CliResult<Value> {
    let w0 = total_weight::<f64>(n);
    let delta = lemma_bound::<f64>(n);
    Ok(json!({
        "n": n,
        "eps": num(eps),
        "W0": num(w0),
        "delta": num(delta),
        "threshold": num(distinguishability_threshold(eps)?),
        "bound": num(query_lower_bound(w0, delta, eps)?),
    }))
}

fn cmd_simulate(algo: Algo, n: usize, answer: Option<usize>, trace: Option<&PathBuf>) -> CliResult<(Value, bool)> {
    let alg = algorithm(algo, n)?;
    let instances = match answer {
        Some(a) => vec![OrderedInstance::new(n, a)?],
        None => enumerate_instances(n),
    };
    let mut exact = true;
    let mut rows = Vec::new();
    for inst in &instances {
        let out = simulate(alg.as_ref(), inst)?;
        exact &= out.answer_found == Some(inst.answer()) && (out.probability - 1.0).abs() <= EXACT_TOL;
        rows.push(json!({
            "answer": inst.answer(),
            "answer_found": out.answer_found,
            "probability": num(out.probability),
            "queries": out.queries,
        }));
    }
    if let Some(dir) = trace {
        if algo != Algo::Team {
            return Err(CliError::Usage("--trace is only available for --algo team".into()));
        }
        let stages = TeamSearch::for_list_len(n)?.trace::<f64>(&instances[0])?;
        std::fs::create_dir_all(dir)?;
        for (name, body) in trace_files(&stages) {
            std::fs::write(dir.join(name), body)?;
        }
    }
    let value = if answer.is_some() {
        let mut row = rows.pop().expect("one instance");
        row.as_object_mut().expect("object").shift_remove("answer");
        row
    } else {
        Value::Array(rows)
    };
    Ok((value, exact))
}

fn cmd_norms(size: usize) -> CliResult<Value> {
    Ok(json!({
        "size": size,
        "method": NormMethod::for_dim(size).name(),
        "hilbert_norm": num(spectral_norm(&hilbert_matrix::<f64>(size))?),
        "hankel_norm": num(spectral_norm(&hankel_matrix::<f64>(size))?),
        "pi": num(std::f64::consts::PI),
    }))
}

/// Runs the command and returns the rendered output.
pub fn run(cli: &Cli) -> CliResult<String> {
    let format = cli.format;
    let json_only = |v: Value| render(&v, format.unwrap_or(Format::Json));
    match &cli.command {
        Command::Bound { n, eps } => json_only(cmd_bound(size(*n)?, *eps)?),
        Command::Trajectory { algo, n } => {
            let n = size(*n)?;
            let rec = run_trajectory(algorithm(*algo, n)?.as_ref(), &Weights::ordered_search(n))?;
            let out = match format.unwrap_or(Format::Csv) {
                Format::Csv => rec.to_csv(),
                Format::Json => render_json(&trajectory_json(&rec)),
            };
            let bad = rec.violations(DROP_TOL);
            if bad.is_empty() {
                Ok(out)
            } else {
                Err(CliError::Violation { message: format!("drop above pi n at steps {bad:?}"), output: Some(out) })
            }
        }
        Command::Simulate { algo, n, answer, trace } => {
            let (value, exact) = cmd_simulate(*algo, size(*n)?, *answer, trace.as_ref())?;
            let out = render(&value, format.unwrap_or(Format::Json))?;
            if exact {
                Ok(out)
            } else {
                Err(CliError::Violation { message: "simulation was not exact".into(), output: Some(out) })
            }
        }
        Command::Layout { r } => {
            let n = r.checked_mul(2 * r).ok_or_else(|| CliError::Usage(format!("r = {r} is too large")))?;
            let record = build_layout(*r, n)?.to_record();
            json_only(serde_json::to_value(record).expect("layout serializes"))
        }
        Command::Expansion { m } => {
            let e = expansion(*m)?;
            json_only(json!({
                "m": e.m,
                "m_next": e.m_next,
                "F": num(e.factor),
                "lower_bound": num(e.lower_bound),
                "digits": e.digits,
            }))
        }
        Command::Norms { size } => json_only(cmd_norms(*size)?),
        Command::Decompose { m } => {
            let d = decompose(*m)?;
            json_only(json!({ "m": m, "digits": d.digits(), "top": d.top(), "reconstructed": d.reconstruct() }))
        }
        Command::Querycount { n, m } => {
            let q = query_count_from(*m, *n)?;
            json_only(json!({
                "n": q.n_list,
                "m0": m,
                "queries": q.queries,
                "trace": q.trace,
                "ceil_log3": q.ceil_log3,
                "excess": q.excess,
            }))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> CliResult<String> {
        let cli = Cli::try_parse_from(std::iter::once("ordsearch").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    fn parse(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn numbers_use_17_digits() {
        assert_eq!(num(0.1).to_string(), "0.10000000000000001");
        assert_eq!(num(2.0).to_string(), "2");
        assert_eq!(num(f64::NAN), Value::Null);
    }

    #[test]
    fn bound_examples() {
        let v = parse(&run_args(&["bound", "--n", "2"]).unwrap());
        assert_eq!(v["W0"].as_f64(), Some(1.0));
        let half = parse(&run_args(&["bound", "--n", "64", "--eps", "0.5"]).unwrap());
        assert_eq!(half["bound"].as_f64(), Some(0.0));
        let one = parse(&run_args(&["bound", "--n", "1"]).unwrap());
        assert_eq!(one["bound"].as_f64(), Some(0.0));
        assert!(matches!(run_args(&["bound", "--n", "4", "--eps", "0.7"]), Err(CliError::Usage(_))));
    }

    #[test]
    fn simulate_rejects_bad_answer_and_length() {
        assert!(matches!(
            run_args(&["simulate", "--algo", "binary", "--n", "8", "--answer", "8"]),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(run_args(&["simulate", "--algo", "team", "--n", "16"]), Err(CliError::Usage(_))));
    }

    #[test]
    fn csv_rendering() {
        let out = run_args(&["simulate", "--algo", "binary", "--n", "4", "--format", "csv"]).unwrap();
        assert_eq!(out.lines().next(), Some("answer,answer_found,probability,queries"));
        assert_eq!(out.lines().count(), 5);
        let d = run_args(&["decompose", "--m", "14", "--format", "csv"]).unwrap();
        assert_eq!(d, "m,digits,top,reconstructed\n14,0 1 1,2,14\n");
        assert!(run_args(&["trajectory", "--algo", "binary", "--n", "2", "--format", "json"]).is_ok());
    }
}
