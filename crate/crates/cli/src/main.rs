//! `hitchin`: command-line front end for the dimension formulas,
//! stratifications, spectral sampling and nilpotent census.
//!
//! Exit codes: 0 success, 1 rejected input, 2 failed internal check or
//! oracle. Errors go to stderr as one line of JSON.

mod output;

use std::ffi::OsString;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hitchin_core::census::{
    bun_calibration, count_chain_stack, count_stratum, verify_count_identity, Convention, StackyCount,
};
use hitchin_core::nilstrata::{proposition_report, NilpotentStratumLabel, DEFAULT_DEGREE_BOUND};
use hitchin_core::numerology::{
    dim_base, dim_fiber, dim_total, enumerate_lambda, exclusion_sweep, relative_gap, severi_ledger, GeometrySetup,
    Mode, SevereLedgerEntry,
};
use hitchin_core::spectral::{multiplicity_profile, refine_profile, sample_strata, smooth_at_infinity, CharPoint};
use hitchin_core::Error;
use serde_json::{json, Value};

use output::{Format, Report};

const WORKERS_ENV: &str = "HITCHIN_WORKERS";

#[derive(Debug, Parser)]
#[command(name = "hitchin", version, about = "Numerics of the GL(n) Hitchin fibration")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value = "json", global = true)]
    format: Format,
    /// Worker threads for census sweeps and sampling (default: $HITCHIN_WORKERS, else all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimensions of the Hitchin base and fibers.
    Dims(SetupArgs),
    /// All stratum labels of rank n.
    Strata {
        #[arg(long)]
        n: u32,
    },
    /// Support-exclusion test over every stratum label.
    Support(SetupArgs),
    /// Severi ledger of a candidate point, read from a JSON component file.
    Ledger {
        #[command(flatten)]
        setup: SetupArgs,
        /// JSON file `{"components": [{"n":..,"m":..,"d_a":..,"delta":..}, ..]}`.
        #[arg(long)]
        file: PathBuf,
    },
    /// Dimensions of the nilpotent-cone strata.
    Nilpotent {
        #[command(flatten)]
        setup: SetupArgs,
        /// Window |e_i| <= bound for the degree vectors.
        #[arg(long, default_value_t = DEFAULT_DEGREE_BOUND)]
        bound: i64,
    },
    /// Classification of characteristic polynomials over the projective line.
    Spectral(SpectralArgs),
    /// Groupoid count of a nilpotent stratum or of a chain stack.
    Count(CountArgs),
    /// Counting identity for a stratum, or calibration of the theta = 0 stratum.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
struct SetupArgs {
    #[arg(long, default_value_t = 0)]
    g: i64,
    /// Degree of D; defaults to 2g - 2 with --canonical.
    #[arg(long, allow_negative_numbers = true)]
    d: Option<i64>,
    #[arg(long)]
    n: i64,
    #[arg(long, default_value_t = 1, allow_negative_numbers = true)]
    e: i64,
    /// D canonical, deg D = 2g - 2.
    #[arg(long)]
    canonical: bool,
}

impl SetupArgs {
    fn setup(&self) -> Result<GeometrySetup, Error> {
        let mode = if self.canonical { Mode::Canonical } else { Mode::Large };
        let d = match (self.d, self.canonical) {
            (Some(d), _) => d,
            (None, true) => 2 * self.g - 2,
            (None, false) => return Err(Error::InvalidSetup("--d is required outside canonical mode".into())),
        };
        GeometrySetup::new(self.g, d, self.n, self.e, mode)
    }
}

#[derive(Debug, Args)]
struct SpectralArgs {
    #[arg(long)]
    q: u32,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    n: Option<usize>,
    /// Only the projective line is modelled.
    #[arg(long, default_value_t = 0)]
    g: i64,
    /// Classify one point: coefficient lists of a_1..a_n, lowest degree
    /// first, separated by ';' (e.g. "0,1;3,0,2").
    #[arg(long, allow_hyphen_values = true)]
    a: Option<String>,
    /// Also factor over F_(q^k).
    #[arg(long)]
    refine: Option<u32>,
    #[arg(long, default_value_t = 1000)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Replace every sample by a = 0.
    #[arg(long)]
    force_zero: bool,
}

#[derive(Debug, Args)]
struct StratumArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: i64,
    #[arg(long)]
    n: Option<usize>,
    /// Bundle degree; defaults to the sum of --deg.
    #[arg(long, allow_negative_numbers = true)]
    e: Option<i64>,
    /// Ranks n_1,..,n_s.
    #[arg(long)]
    label: String,
    /// Degrees e_1,..,e_s (chain degrees f_i with `count --chain`).
    #[arg(long, allow_hyphen_values = true)]
    deg: String,
    /// Largest splitting-type spread a_1 - a_n enumerated.
    #[arg(long, default_value_t = 6)]
    window: i64,
}

#[derive(Debug, Args)]
struct CountArgs {
    #[command(flatten)]
    stratum: StratumArgs,
    #[arg(long, default_value = "sat")]
    convention: String,
    /// Count chains F^s -> .. -> F^1 with ranks --label and degrees --deg.
    #[arg(long)]
    chain: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    q: u64,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long, allow_negative_numbers = true)]
    e: Option<i64>,
    #[arg(long)]
    label: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    deg: Option<String>,
    /// Convention whose value heads the report; the verdict uses both.
    #[arg(long)]
    convention: Option<String>,
    #[arg(long, default_value_t = 6)]
    window: i64,
    /// Calibrate the theta = 0 stratum against closed forms instead.
    #[arg(long)]
    calibrate: bool,
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind) = if e.is_assertion() { (2, "assertion") } else { (1, "invalid-input") };
        Failure { code, kind, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: 1, kind: "invalid-input", message: message.into() }
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, Failure> {
    s.split(',')
        .map(|x| x.trim().parse::<T>().map_err(|_| invalid(format!("bad {what} entry {x:?} in {s:?}"))))
        .collect()
}

fn parse_convention(s: &str) -> Result<Convention, Failure> {
    Convention::parse(s).ok_or_else(|| invalid(format!("convention must be sat or unsat, got {s:?}")))
}

struct Stratum {
    n: usize,
    e: i64,
    label: NilpotentStratumLabel,
}

fn stratum(label: &str, deg: &str, n: Option<usize>, e: Option<i64>) -> Result<Stratum, Failure> {
    let nbar: Vec<u32> = parse_list(label, "rank")?;
    let ebar: Vec<i64> = parse_list(deg, "degree")?;
    let label = NilpotentStratumLabel::new(nbar, ebar)?;
    let (rank, total) = (label.rank() as usize, label.degree());
    if n.is_some_and(|n| n != rank) {
        return Err(invalid(format!("--n {} but the ranks add up to {rank}", n.unwrap())));
    }
    if e.is_some_and(|e| e != total) {
        return Err(invalid(format!("--e {} but the degrees add up to {total}", e.unwrap())));
    }
    Ok(Stratum { n: rank, e: total, label })
}

fn count_json(c: &StackyCount, head: Value) -> Value {
    let mut doc = head;
    let obj = doc.as_object_mut().expect("object");
    obj.insert("value".into(), json!(c.value_string()));
    obj.insert("window".into(), json!(c.window));
    obj.insert("tail".into(), json!(c.tail_string()));
    obj.insert("tail_kind".into(), json!(c.tail_kind.as_str()));
    obj.insert(
        "terms".into(),
        json!(c.terms.iter().map(hitchin_core::algebra::rational::to_fraction_string).collect::<Vec<_>>()),
    );
    doc
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("reports serialize")
}

fn rows_of(doc: &Value, key: &str) -> Vec<Value> {
    doc[key].as_array().cloned().unwrap_or_default()
}

fn parse_char_point(q: u32, d: i64, n: Option<usize>, coeffs: &str) -> Result<CharPoint, Failure> {
    let a: Vec<Vec<i64>> = coeffs
        .split(';')
        .map(|part| if part.trim().is_empty() { Ok(Vec::new()) } else { parse_list(part, "coefficient") })
        .collect::<Result<_, _>>()?;
    if n.is_some_and(|n| n != a.len()) {
        return Err(invalid(format!("--n {} but {} coefficient lists given", n.unwrap(), a.len())));
    }
    Ok(CharPoint::from_ints(q, d, &a)?)
}

/// Runs one command; `Ok(false)` means the report was produced but states a
/// failed verdict.
fn run(command: &Command) -> Result<(Report, bool), Failure> {
    let report = match command {
        Command::Dims(args) => {
            let s = args.setup()?;
            Report::single(json!({
                "d_base": dim_base(&s),
                "d_fiber": dim_fiber(&s)?,
                "d_total": dim_total(&s)?,
                "gap": relative_gap(&s)?,
            }))
        }
        Command::Strata { n } => {
            let labels = enumerate_lambda(*n)?;
            let rows: Vec<Value> = labels
                .iter()
                .map(|l| {
                    json!({
                        "lambda": l,
                        "s": l.s(),
                        "component_degree_sum": l.component_degree_sum(),
                        "elliptic": l.is_elliptic(),
                    })
                })
                .collect();
            Report::with_rows(json!({"n": n, "count": labels.len(), "labels": rows}), rows)
        }
        Command::Support(args) => {
            let s = args.setup()?;
            let doc = to_value(&exclusion_sweep(&s)?);
            Report::with_rows(doc.clone(), rows_of(&doc, "rows"))
        }
        Command::Ledger { setup, file } => {
            let s = setup.setup()?;
            let text = std::fs::read_to_string(file)
                .map_err(|e| invalid(format!("cannot read {}: {e}", file.display())))?;
            let entry: SevereLedgerEntry =
                serde_json::from_str(&text).map_err(|e| invalid(format!("bad ledger file: {e}")))?;
            let doc = to_value(&severi_ledger(&entry, &s)?);
            Report::with_rows(doc.clone(), rows_of(&doc, "components"))
        }
        Command::Nilpotent { setup, bound } => {
            let s = setup.setup()?;
            let n = u32::try_from(s.n()).map_err(|_| invalid("rank out of range"))?;
            let doc = to_value(&proposition_report(s.g(), s.d(), n, s.e(), *bound)?);
            Report::with_rows(doc.clone(), rows_of(&doc, "rows"))
        }
        Command::Spectral(args) => {
            if args.g != 0 {
                return Err(invalid("spectral points are modelled on the projective line only (--g 0)"));
            }
            match &args.a {
                Some(coeffs) => {
                    let a = parse_char_point(args.q, args.d, args.n, coeffs)?;
                    let c = multiplicity_profile(&a);
                    c.validate(a.n())?;
                    let mut doc = c.to_json();
                    doc["smooth_at_infinity"] = json!(smooth_at_infinity(&a));
                    if let Some(k) = args.refine {
                        doc["refined"] = json!({"k": k, "profile": refine_profile(&a, k)?});
                    }
                    Report::single(doc)
                }
                None => {
                    let n = args.n.ok_or_else(|| invalid("--n is required for sampling"))?;
                    let t = sample_strata(args.q, args.d, n, args.count, args.seed, args.force_zero)?;
                    let rows = t.classes.iter().map(|(k, v)| json!({"class": k, "count": v})).collect();
                    Report::with_rows(to_value(&t), rows)
                }
            }
        }
        Command::Count(args) => {
            let st = &args.stratum;
            if args.chain {
                let nbar: Vec<u32> = parse_list(&st.label, "rank")?;
                let f: Vec<i64> = parse_list(&st.deg, "degree")?;
                let c = count_chain_stack(st.q, &nbar, &f, st.window)?;
                Report::single(count_json(&c, json!({"q": st.q, "nbar": nbar, "f": f})))
            } else {
                let conv = parse_convention(&args.convention)?;
                let s = stratum(&st.label, &st.deg, st.n, st.e)?;
                let c = count_stratum(st.q, st.d, s.n, s.e, &s.label, conv, st.window)?;
                let head = json!({
                    "q": st.q, "d": st.d, "n": s.n, "e": s.e,
                    "label": {"nbar": s.label.nbar(), "ebar": s.label.ebar()},
                    "convention": conv.as_str(),
                });
                Report::single(count_json(&c, head))
            }
        }
        Command::Verify(args) => {
            if args.calibrate {
                let n = args.n.ok_or_else(|| invalid("--n is required"))?;
                let e = args.e.ok_or_else(|| invalid("--e is required"))?;
                let r = bun_calibration(args.q, n, e, args.window)?;
                return Ok((Report::single(r.to_json()), r.passed()));
            }
            let d = args.d.ok_or_else(|| invalid("--d is required"))?;
            let label = args.label.as_deref().ok_or_else(|| invalid("--label is required"))?;
            let deg = args.deg.as_deref().ok_or_else(|| invalid("--deg is required"))?;
            let s = stratum(label, deg, args.n, args.e)?;
            let r = verify_count_identity(args.q, d, s.n, s.e, &s.label, args.window)?;
            let doc = match &args.convention {
                Some(c) => r.to_json_for(parse_convention(c)?),
                None => r.to_json(),
            };
            return Ok((Report::single(doc), r.passed()));
        }
    };
    Ok((report, true))
}

fn workers(cli: &Cli) -> Result<Option<usize>, Failure> {
    let n = match cli.workers {
        Some(n) => Some(n),
        None => match std::env::var(WORKERS_ENV) {
            Ok(v) => Some(v.trim().parse::<usize>().map_err(|_| invalid(format!("{WORKERS_ENV}={v:?} is not a count")))?),
            Err(_) => None,
        },
    };
    if n == Some(0) {
        return Err(invalid("worker count must be positive"));
    }
    Ok(n)
}

fn fail(f: Failure) -> ExitCode {
    eprintln!("{}", json!({"error": f.kind, "message": f.message}));
    ExitCode::from(f.code)
}

fn main_with(args: Vec<OsString>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let message = e.to_string();
            let first = message.lines().next().unwrap_or("").trim_start_matches("error: ");
            return fail(invalid(first));
        }
    };
    let threads = match workers(&cli) {
        Ok(t) => t,
        Err(f) => return fail(f),
    };
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            return fail(invalid(format!("cannot start worker pool: {e}")));
        }
    }
    match run(&cli.command) {
        Ok((report, passed)) => {
            println!("{}", report.render(cli.format));
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(2)
            }
        }
        Err(f) => fail(f),
    }
}

fn main() -> ExitCode {
    main_with(std::env::args_os().collect())
}
