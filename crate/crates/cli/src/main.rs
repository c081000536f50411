//! Command-line front end: identity verification over parameter grids,
//! exact ordering counts by formula and by brute force, and Gosper
//! certificate tooling. Exit codes are a stable contract: 0 success,
//! 1 verification failure, 2 usage or domain error.

use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::exit;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use serde_json::{json, Value};

use hyperorder::closedform::{pipeline_theorem1, pipeline_theorem2, rhs_theorem1, rhs_theorem2, VerifyReport};
use hyperorder::gosper::{
    gosper_find, telescoped_sum, term_ratio, verify_certificate, CertFamily, Certificate,
    CertStatus,
};
use hyperorder::graphs::{
    complete_3uniform, complete_bipartite_12, line_graph, successive_probability, DP_VERTEX_CAP,
};
use hyperorder::ratfunc::parse_ratfunc;
use hyperorder::rational::Rational;
use hyperorder::Error;

const SCHEMA_VERSION: u32 = 1;
const JOBS_ENV: &str = "HYPERORDER_JOBS";

const EXIT_OK: i32 = 0;
const EXIT_VERIFY_FAILED: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "hyperorder",
    version,
    about = "Exact verification of product formulas for successive vertex orderings"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Plain)]
    format: Format,

    /// Write output to FILE instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,

    /// Worker threads for grid runs (falls back to HYPERORDER_JOBS, then all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GraphFamilyArg {
    /// Line graph of the complete 3-uniform hypergraph on n vertices.
    K3,
    /// Line graph of the (1,2)-complete bipartite 3-uniform hypergraph.
    K12,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Formula,
    Brute,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesFamilyArg {
    /// The transformed series behind the 3-uniform identity (variant picked by n mod 3).
    T1,
    /// The transformed series behind the bipartite identity.
    T2,
}

#[derive(Subcommand)]
enum Command {
    /// Replay an identity's full derivation over a parameter range.
    Verify {
        /// Which identity: 1 (3-uniform) or 2 (bipartite).
        #[arg(long)]
        theorem: u32,
        /// n range, e.g. `3..300` or `6`.
        #[arg(long)]
        n: Option<RangeArg>,
        /// m range (theorem 2 only).
        #[arg(long)]
        m: Option<RangeArg>,
    },
    /// Count successive orderings of a line-graph family instance.
    Count {
        #[arg(long, value_enum)]
        family: GraphFamilyArg,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Find and verify telescoping certificates.
    Gosper {
        /// Named series family (needs --n, plus --m for t2).
        #[arg(long, value_enum)]
        family: Option<SeriesFamilyArg>,
        #[arg(long)]
        n: Option<i64>,
        #[arg(long)]
        m: Option<i64>,
        /// A consecutive-term ratio in k, e.g. `k/(k+1)`.
        #[arg(long, conflicts_with_all = ["family", "n", "m"])]
        ratio: Option<String>,
    },
}

/// Inclusive integer range `a..b`, or a single value `a`.
#[derive(Clone, Copy, Debug)]
struct RangeArg {
    lo: i64,
    hi: i64,
}

impl FromStr for RangeArg {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| {
            t.trim()
                .parse::<i64>()
                .map_err(|_| format!("invalid integer {t:?}"))
        };
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b)?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(RangeArg { lo, hi })
    }
}

/// A usage/domain problem (exit 2) as opposed to a verification failure.
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

fn main() {
    let cli = Cli::parse();
    let jobs = match effective_jobs(cli.jobs) {
        Ok(j) => j,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            exit(EXIT_USAGE);
        }
    };
    let result = match &cli.command {
        Command::Verify { theorem, n, m } => cmd_verify(&cli, *theorem, *n, *m, jobs),
        Command::Count { family, n, m, method } => cmd_count(&cli, *family, *n, *m, *method),
        Command::Gosper { family, n, m, ratio } => cmd_gosper(&cli, *family, *n, *m, ratio.as_deref()),
    };
    match result {
        Ok(code) => exit(code),
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            exit(EXIT_USAGE);
        }
    }
}

fn effective_jobs(flag: Option<usize>) -> Result<usize, UsageError> {
    let jobs = match flag {
        Some(j) => j,
        None => match std::env::var(JOBS_ENV) {
            Ok(v) => v
                .parse::<usize>()
                .map_err(|_| UsageError(format!("invalid {JOBS_ENV}={v:?}")))?,
            Err(_) => std::thread::available_parallelism().map_or(1, |p| p.get()),
        },
    };
    if jobs == 0 {
        return Err(UsageError("--jobs must be at least 1".into()));
    }
    Ok(jobs)
}

fn emit(cli: &Cli, content: &str) -> i32 {
    match &cli.out {
        None => {
            print!("{content}");
            let _ = std::io::stdout().flush();
            EXIT_OK
        }
        Some(path) => match std::fs::write(path, content) {
            Ok(()) => EXIT_OK,
            Err(e) => {
                eprintln!("error: cannot write {}: {e}", path.display());
                EXIT_USAGE
            }
        },
    }
}

/// Decimal rendering for humans; always marked approximate.
fn approx(r: &Rational) -> String {
    match r.to_f64() {
        Some(f) => format!(" (approx {f:.6})"),
        None => String::new(),
    }
}

fn cmd_verify(
    cli: &Cli,
    theorem: u32,
    n: Option<RangeArg>,
    m: Option<RangeArg>,
    jobs: usize,
) -> Result<i32, UsageError> {
    enum Job {
        T1(i64),
        T2(i64, i64),
    }
    let jobs_list: Vec<Job> = match theorem {
        1 => {
            let n = n.ok_or(UsageError("--n is required for --theorem 1".into()))?;
            if m.is_some() {
                return Err(UsageError("--m does not apply to --theorem 1".into()));
            }
            if n.lo < 3 {
                return Err(UsageError(format!(
                    "theorem 1 needs n >= 3, got range starting at {}",
                    n.lo
                )));
            }
            (n.lo..=n.hi).map(Job::T1).collect()
        }
        2 => {
            let n = n.ok_or(UsageError("--n is required for --theorem 2".into()))?;
            let m = m.ok_or(UsageError("--m is required for --theorem 2".into()))?;
            if m.lo < 1 || n.lo < 2 {
                return Err(UsageError(format!(
                    "theorem 2 needs m >= 1 and n >= 2, got m from {} and n from {}",
                    m.lo, n.lo
                )));
            }
            let mut v = Vec::new();
            for mm in m.lo..=m.hi {
                for nn in n.lo..=n.hi {
                    v.push(Job::T2(mm, nn));
                }
            }
            v
        }
        other => {
            return Err(UsageError(format!(
                "--theorem must be 1 or 2, got {other}"
            )))
        }
    };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| UsageError(e.to_string()))?;
    let reports: Vec<Result<VerifyReport, Error>> = pool.install(|| {
        use rayon::prelude::*;
        jobs_list
            .par_iter()
            .map(|job| match job {
                Job::T1(n) => pipeline_theorem1(*n),
                Job::T2(m, n) => pipeline_theorem2(*m, *n),
            })
            .collect()
    });

    let mut all_pass = true;
    let mut body = String::new();
    let mut json_results = Vec::new();
    for r in &reports {
        match r {
            Ok(rep) => {
                let pass = rep.pass();
                all_pass &= pass;
                match cli.format {
                    Format::Plain => {
                        let verdict = if pass {
                            "pass".to_string()
                        } else {
                            let failed: Vec<&str> = rep
                                .stages
                                .iter()
                                .filter(|s| !s.pass)
                                .map(|s| s.name)
                                .collect();
                            format!("FAIL [{}]", failed.join(", "))
                        };
                        let _ = writeln!(
                            body,
                            "{}: lhs={} rhs={} {}{}",
                            rep.instance,
                            rep.lhs,
                            rep.rhs,
                            verdict,
                            approx(&rep.lhs)
                        );
                    }
                    Format::Csv => {
                        let _ = writeln!(body, "{}", rep.csv_row());
                    }
                    Format::Json => json_results.push(rep.to_json()),
                }
            }
            Err(e) => return Err(UsageError(e.to_string())),
        }
    }

    let content = match cli.format {
        Format::Plain => body,
        Format::Csv => format!("instance,lhs,rhs,pass\n{body}"),
        Format::Json => {
            let doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "verify",
                "theorem": theorem,
                "pass": all_pass,
                "results": Value::Array(json_results),
            });
            format!("{doc}\n")
        }
    };
    let code = emit(cli, &content);
    if code != EXIT_OK {
        return Ok(code);
    }
    Ok(if all_pass { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

struct CountOutcome {
    probability: Rational,
    count: BigInt,
}

fn count_from_probability(p: &Rational, vertices: usize) -> CountOutcome {
    let mut fact = BigInt::one();
    for i in 2..=vertices as u64 {
        fact *= i;
    }
    let total = p * Rational::from_integer(fact);
    debug_assert!(total.is_integer());
    CountOutcome {
        probability: p.clone(),
        count: total.to_integer(),
    }
}

fn cmd_count(
    cli: &Cli,
    family: GraphFamilyArg,
    n: Option<i64>,
    m: Option<i64>,
    method: Method,
) -> Result<i32, UsageError> {
    let (label, params, vertices, formula_p) = match family {
        GraphFamilyArg::K3 => {
            let n = n.ok_or(UsageError("--n is required for --family k3".into()))?;
            if m.is_some() {
                return Err(UsageError("--m does not apply to --family k3".into()));
            }
            if n < 3 {
                return Err(UsageError(format!("family k3 needs n >= 3, got {n}")));
            }
            let vertices = (n * (n - 1) * (n - 2) / 6) as usize;
            ("k3", json!({ "n": n }), vertices, rhs_theorem1(n))
        }
        GraphFamilyArg::K12 => {
            let n = n.ok_or(UsageError("--n is required for --family k12".into()))?;
            let m = m.ok_or(UsageError("--m is required for --family k12".into()))?;
            if m < 1 || n < 2 {
                return Err(UsageError(format!(
                    "family k12 needs m >= 1 and n >= 2, got ({m}, {n})"
                )));
            }
            let vertices = (m * n * (n - 1) / 2) as usize;
            ("k12", json!({ "m": m, "n": n }), vertices, rhs_theorem2(m, n))
        }
    };

    let wants_brute = matches!(method, Method::Brute | Method::Both);
    if wants_brute && vertices > DP_VERTEX_CAP {
        return Err(UsageError(format!(
            "capacity error: {vertices} vertices is above the subset-DP cap of {DP_VERTEX_CAP}; use --method formula"
        )));
    }

    let formula = matches!(method, Method::Formula | Method::Both)
        .then(|| count_from_probability(&formula_p, vertices));
    let brute = if wants_brute {
        let h = match family {
            GraphFamilyArg::K3 => complete_3uniform(n.unwrap())?,
            GraphFamilyArg::K12 => complete_bipartite_12(m.unwrap(), n.unwrap())?,
        };
        let g = line_graph(&h);
        let p = successive_probability(&g)?;
        Some(count_from_probability(&p, vertices))
    } else {
        None
    };

    let matches = match (&formula, &brute) {
        (Some(f), Some(b)) => Some(f.probability == b.probability && f.count == b.count),
        _ => None,
    };

    let content = match cli.format {
        Format::Plain => {
            let mut s = format!("family={label} {} vertices={vertices}\n", params_plain(&params));
            if let Some(f) = &formula {
                let _ = writeln!(
                    s,
                    "formula: probability={} count={}{}",
                    f.probability,
                    f.count,
                    approx(&f.probability)
                );
            }
            if let Some(b) = &brute {
                let _ = writeln!(
                    s,
                    "brute: probability={} count={}{}",
                    b.probability,
                    b.count,
                    approx(&b.probability)
                );
            }
            if let Some(eq) = matches {
                let _ = writeln!(s, "{}", if eq { "match" } else { "MISMATCH" });
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("instance,method,probability,count\n");
            let inst = format!("{label} {}", params_plain(&params));
            if let Some(f) = &formula {
                let _ = writeln!(s, "{inst},formula,{},{}", f.probability, f.count);
            }
            if let Some(b) = &brute {
                let _ = writeln!(s, "{inst},brute,{},{}", b.probability, b.count);
            }
            s
        }
        Format::Json => {
            let mut doc = json!({
                "schema": SCHEMA_VERSION,
                "command": "count",
                "family": label,
                "params": params,
                "vertices": vertices,
            });
            let obj = doc.as_object_mut().unwrap();
            if let Some(f) = &formula {
                obj.insert(
                    "formula".into(),
                    json!({ "probability": f.probability.to_string(), "count": f.count.to_string() }),
                );
            }
            if let Some(b) = &brute {
                obj.insert(
                    "brute".into(),
                    json!({ "probability": b.probability.to_string(), "count": b.count.to_string() }),
                );
            }
            if let Some(eq) = matches {
                obj.insert("match".into(), json!(eq));
            }
            format!("{doc}\n")
        }
    };
    let code = emit(cli, &content);
    if code != EXIT_OK {
        return Ok(code);
    }
    Ok(match matches {
        Some(false) => EXIT_VERIFY_FAILED,
        _ => EXIT_OK,
    })
}

fn params_plain(params: &Value) -> String {
    let obj = params.as_object().unwrap();
    obj.iter()
        .map(|(k, v)| format!("{k}={v}"))
        .collect::<Vec<_>>()
        .join(" ")
}

fn cmd_gosper(
    cli: &Cli,
    family: Option<SeriesFamilyArg>,
    n: Option<i64>,
    m: Option<i64>,
    ratio: Option<&str>,
) -> Result<i32, UsageError> {
    if cli.format == Format::Csv {
        return Err(UsageError("gosper output has no csv form; use plain or json".into()));
    }
    match (family, ratio) {
        (Some(fam), None) => {
            let fam = match fam {
                SeriesFamilyArg::T1 => {
                    let n = n.ok_or(UsageError("--n is required for --family t1".into()))?;
                    CertFamily::theorem1(n)?
                }
                SeriesFamilyArg::T2 => {
                    let n = n.ok_or(UsageError("--n is required for --family t2".into()))?;
                    let m = m.ok_or(UsageError("--m is required for --family t2".into()))?;
                    CertFamily::theorem2(m, n)?
                }
            };
            let term = fam.term()?;
            let ratio_fn = term_ratio(&term)?;
            let found = gosper_find(&ratio_fn);
            let reference = fam.reference_certificate()?;
            let ref_status = verify_certificate(&reference)?;
            let closed = fam.closed_form();
            let (lo, hi) = fam.valid_range();
            let telescoped = (ref_status == CertStatus::Valid)
                .then(|| telescoped_sum(&reference, lo, hi))
                .transpose()?
                .map(|v| v.as_rational())
                .transpose()?;
            let telescoped_ok = telescoped.as_ref() == Some(&closed);
            let found_cert = found
                .clone()
                .map(|r| Certificate::new(fam, r))
                .transpose()?;
            let found_matches_reference =
                found.as_ref() == Some(&fam.reference_rational_function());

            let content = match cli.format {
                Format::Json => {
                    let mut doc = json!({
                        "schema": SCHEMA_VERSION,
                        "command": "gosper",
                        "family": fam.name(),
                        "params": fam.params(),
                        "valid_range": [lo, hi],
                        "reference_valid": ref_status == CertStatus::Valid,
                        "closed_form": closed.to_string(),
                        "telescoped": telescoped.as_ref().map(|v| v.to_string()),
                        "found_matches_reference": found_matches_reference,
                    });
                    let obj = doc.as_object_mut().unwrap();
                    match &found_cert {
                        Some(c) => {
                            obj.insert("found".into(), c.to_json());
                        }
                        None => {
                            obj.insert("found".into(), Value::Null);
                        }
                    }
                    format!("{doc}\n")
                }
                _ => {
                    let mut s = format!("family={} {}\n", fam.name(), params_plain(&json!(fam.params())));
                    match &found {
                        Some(r) => {
                            let _ = writeln!(s, "found: R(k) = {r}");
                        }
                        None => {
                            let _ = writeln!(s, "found: not summable");
                        }
                    }
                    let _ = writeln!(
                        s,
                        "reference certificate: {}",
                        match ref_status {
                            CertStatus::Valid => "valid".to_string(),
                            CertStatus::NotTelescoping => "INVALID (does not telescope)".to_string(),
                            CertStatus::PoleAt(k) => format!("INVALID (pole at k={k})"),
                        }
                    );
                    let _ = writeln!(s, "found matches reference: {found_matches_reference}");
                    match &telescoped {
                        Some(v) => {
                            let _ = writeln!(
                                s,
                                "telescoped sum over [{lo}, {hi}]: {v}{} (closed form {closed})",
                                approx(v)
                            );
                        }
                        None => {
                            let _ = writeln!(s, "telescoped sum unavailable (closed form {closed})");
                        }
                    }
                    if let Some(c) = &found_cert {
                        let _ = writeln!(s, "certificate: {}", c.to_json_string());
                    }
                    s
                }
            };
            let code = emit(cli, &content);
            if code != EXIT_OK {
                return Ok(code);
            }
            Ok(
                if ref_status == CertStatus::Valid
                    && found.is_some()
                    && found_matches_reference
                    && telescoped_ok
                {
                    EXIT_OK
                } else {
                    EXIT_VERIFY_FAILED
                },
            )
        }
        (None, Some(expr)) => {
            let ratio_fn = parse_ratfunc(expr)?;
            if ratio_fn.is_zero() {
                return Err(UsageError("the term ratio must be nonzero".into()));
            }
            let found = gosper_find(&ratio_fn);
            let content = match cli.format {
                Format::Json => {
                    let doc = json!({
                        "schema": SCHEMA_VERSION,
                        "command": "gosper",
                        "ratio": expr,
                        "found": found.as_ref().map(|r| json!({
                            "num": r.num().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                            "den": r.den().coeffs().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                        })).unwrap_or(Value::Null),
                        "summable": found.is_some(),
                    });
                    format!("{doc}\n")
                }
                _ => match &found {
                    Some(r) => format!("R(k) = {r}\n"),
                    None => "not summable\n".to_string(),
                },
            };
            Ok(emit(cli, &content))
        }
        _ => Err(UsageError(
            "gosper needs either --family (with its parameters) or --ratio".into(),
        )),
    }
}
