//! Command line front end for the lattice toolkit: JSON lattice files in,
//! JSON result envelopes out.
//!
//! Every number in a result is exact ("p/q" strings); decimal fields are
//! advisory approximations and say so in their names. Output bytes are
//! deterministic for a fixed input and seed, whatever the thread count.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};

use hnlat::checks::{
    additivity_over_enumerated_subs, check_max_slope_containment, check_max_slope_vs_quotient,
    run_all_checks, PropertyOutcome,
};
use hnlat::corpus::{random_gram, reference_feasible};
use hnlat::enumeration::{
    all_subs_with_deg_at_least, ranked_subs_with_deg_at_least, EnumConfig, ShortVecReport,
    SubsReport,
};
use hnlat::hn::{hn_filtration, is_semistable, verify_hn, HNFiltration};
use hnlat::lattice::{
    degree, degree_of_gen_sub, degree_of_sub, saturation, sub_index, ExpDegree, GenSubmodule,
    HermLattice, Sublattice,
};
use hnlat::linalg::{IntMat, RatMat};
use hnlat::rat::{format_approx, ln_rat_approx, parse_rat, rat_approx, Int, Rat};
use hnlat::Error as MathError;

/// Success.
pub const EXIT_OK: i32 = 0;
/// A property check ran to completion and found a violation.
pub const EXIT_PROPERTY_FAILURE: i32 = 1;
/// Malformed or invalid input (arguments or lattice file).
pub const EXIT_INPUT: i32 = 2;
/// The computation could not conclude: budget exhausted or an internal
/// invariant violated.
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Parser)]
#[command(name = "hnlat", version, about = "Exact invariants of hermitian integer lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct ThresholdArgs {
    /// Exact degree threshold as "p/q" or an integer.
    #[arg(long, value_name = "P/Q", conflicts_with = "c")]
    dmin: Option<String>,
    /// Decimal log threshold; converted to a degree bound at or just below
    /// exp(2c), then filtered exactly.
    #[arg(long, value_name = "DECIMAL")]
    c: Option<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact degree of the lattice or of a named generated submodule.
    Degree {
        file: PathBuf,
        /// Name of a generator matrix from the file's "subs" table.
        #[arg(long)]
        sub: Option<String>,
    },
    /// Enumerate saturated sublattices with degree at least a threshold.
    Enum {
        file: PathBuf,
        /// Restrict the enumeration to one sublattice rank.
        #[arg(long, conflicts_with = "all")]
        rank: Option<usize>,
        /// Enumerate every rank from one to the full rank.
        #[arg(long)]
        all: bool,
        #[command(flatten)]
        threshold: ThresholdArgs,
        /// Search node budget (default one million).
        #[arg(long)]
        cap: Option<u64>,
    },
    /// The canonical slope filtration, with its verification report.
    Hn {
        file: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Semistability verdict, with a destabilizing witness when unstable.
    Semistable {
        file: PathBuf,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Run the property suite on a lattice file or generated lattices.
    Check {
        file: Option<PathBuf>,
        /// Generate this many random lattices instead of reading a file.
        #[arg(long, requires = "rank", conflicts_with = "file")]
        random: Option<usize>,
        /// Rank of the generated lattices.
        #[arg(long)]
        rank: Option<usize>,
        /// Seed for every randomized element of the suite.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Configurations per randomized identity family.
        #[arg(long, default_value_t = 20)]
        cases: usize,
        #[arg(long)]
        cap: Option<u64>,
    },
    /// Exhaustive reference: short vectors by box scan.
    OracleShort {
        file: PathBuf,
        /// Norm bound as "p/q" or an integer.
        #[arg(long, value_name = "P/Q")]
        bound: String,
    },
    /// Exhaustive reference: sublattice enumeration by box scan.
    OracleSubs {
        file: PathBuf,
        #[command(flatten)]
        threshold: ThresholdArgs,
    },
    /// Exhaustive reference: slope filtration from box scans.
    OracleHn { file: PathBuf },
}

/// A failure destined for stderr, carrying its process exit code.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: message.into() }
    }

    fn internal(message: impl Into<String>) -> Self {
        Failure { code: EXIT_INTERNAL, message: message.into() }
    }
}

/// Math errors surfacing through a loaded, validated lattice are internal;
/// everything hit while interpreting user input is an input error.
fn math_failure(e: MathError) -> Failure {
    Failure::internal(format!("computation failed: {e}"))
}

/// Entry point shared by the binary and in-process tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successful terminations.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return EXIT_INPUT;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    let parallel = configure_threads();
    match dispatch(cli.command, parallel) {
        Ok(Outcome { envelope, code }) => {
            let rendered = serde_json::to_string_pretty(&envelope).expect("valid JSON tree");
            let _ = writeln!(out, "{rendered}");
            code
        }
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// Applies the HNLAT_THREADS cap and reports whether searches may fan out.
fn configure_threads() -> bool {
    match std::env::var("HNLAT_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(0) | Ok(1) => false,
            Ok(n) => {
                // The pool is process-global; a second configuration
                // attempt (as in tests) keeps the first one.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
                true
            }
            Err(_) => true,
        },
        Err(_) => true,
    }
}

struct Outcome {
    envelope: Value,
    code: i32,
}

fn ok(envelope: Value) -> Result<Outcome, Failure> {
    Ok(Outcome { envelope, code: EXIT_OK })
}

fn dispatch(cmd: Command, parallel: bool) -> Result<Outcome, Failure> {
    let cfg = |cap: Option<u64>| EnumConfig {
        max_nodes: cap.unwrap_or(EnumConfig::default().max_nodes),
        parallel,
    };
    match cmd {
        Command::Degree { file, sub } => cmd_degree(&file, sub.as_deref()),
        Command::Enum { file, rank, all, threshold, cap } => {
            cmd_enum(&file, rank, all, &threshold, &cfg(cap))
        }
        Command::Hn { file, cap } => cmd_hn(&file, &cfg(cap)),
        Command::Semistable { file, cap } => cmd_semistable(&file, &cfg(cap)),
        Command::Check { file, random, rank, seed, cases, cap } => {
            cmd_check(file.as_deref(), random, rank, seed, cases, &cfg(cap))
        }
        Command::OracleShort { file, bound } => cmd_oracle_short(&file, &bound),
        Command::OracleSubs { file, threshold } => cmd_oracle_subs(&file, &threshold),
        Command::OracleHn { file } => cmd_oracle_hn(&file),
    }
}

// ---- lattice file loading ----

#[derive(Deserialize)]
struct LatticeFile {
    rank: usize,
    gram: Vec<Vec<Value>>,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    subs: BTreeMap<String, Vec<Vec<i64>>>,
}

struct Loaded {
    lattice: HermLattice,
    name: Option<String>,
    subs: BTreeMap<String, Vec<Vec<i64>>>,
}

fn entry_to_rat(v: &Value, i: usize, j: usize) -> Result<Rat, Failure> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => {
            return Err(Failure::input(format!(
                "gram[{i}][{j}] must be a rational string or integer, got {other}"
            )))
        }
    };
    parse_rat(&text).map_err(|e| Failure::input(format!("gram[{i}][{j}]: {e}")))
}

fn load_lattice(path: &Path) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    let file: LatticeFile = serde_json::from_str(&text)
        .map_err(|e| Failure::input(format!("{} is not a lattice file: {e}", path.display())))?;
    if file.rank == 0 {
        return Err(Failure::input("rank must be at least one"));
    }
    if file.gram.len() != file.rank || file.gram.iter().any(|r| r.len() != file.rank) {
        return Err(Failure::input(format!(
            "gram must be a {0} by {0} matrix matching \"rank\"",
            file.rank
        )));
    }
    let mut rows = Vec::with_capacity(file.rank);
    for (i, row) in file.gram.iter().enumerate() {
        let mut out = Vec::with_capacity(file.rank);
        for (j, v) in row.iter().enumerate() {
            out.push(entry_to_rat(v, i, j)?);
        }
        rows.push(out);
    }
    let gram = RatMat::from_rows(rows, file.rank).expect("shape checked above");
    let lattice = HermLattice::from_gram(gram)
        .map_err(|e| Failure::input(format!("invalid Gram matrix: {e}")))?;
    Ok(Loaded { lattice, name: file.name, subs: file.subs })
}

fn named_gens(loaded: &Loaded, name: &str) -> Result<IntMat, Failure> {
    let rows = loaded
        .subs
        .get(name)
        .ok_or_else(|| Failure::input(format!("no submodule named {name:?} in the file")))?;
    if rows.is_empty() || rows.iter().any(|r| r.len() != loaded.lattice.rank()) {
        return Err(Failure::input(format!(
            "submodule {name:?} needs nonempty rows of width {}",
            loaded.lattice.rank()
        )));
    }
    let data = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
    Ok(IntMat::from_rows(data, loaded.lattice.rank()).expect("width checked above"))
}

// ---- JSON shaping ----

fn degree_json(d: &ExpDegree) -> Value {
    json!({
        "D": d.d().to_string(),
        "rank": d.rank(),
        "log_value_approx": format_approx(d.deg_approx()),
    })
}

fn basis_json(m: &IntMat) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| {
                Value::Array(m.row(i).iter().map(|x| Value::String(x.to_string())).collect())
            })
            .collect(),
    )
}

fn sub_json(e: &HermLattice, f: &Sublattice) -> Result<Value, Failure> {
    let d = degree_of_sub(e, f).map_err(math_failure)?;
    Ok(json!({ "basis": basis_json(f.basis()), "degree": degree_json(&d) }))
}

fn input_echo(command: &str, loaded: &Loaded, extra: Value) -> Value {
    let mut obj = json!({
        "command": command,
        "rank": loaded.lattice.rank(),
    });
    if let Some(name) = &loaded.name {
        obj["lattice"] = Value::String(name.clone());
    }
    if let Value::Object(extra) = extra {
        for (k, v) in extra {
            obj[k] = v;
        }
    }
    obj
}

fn envelope(input: Value, result: Value, complete: Option<bool>) -> Value {
    let mut obj = json!({ "input": input, "result": result });
    if let Some(c) = complete {
        obj["complete"] = Value::Bool(c);
    }
    obj
}

fn subs_report_json(e: &HermLattice, report: &SubsReport) -> Result<Value, Failure> {
    let mut by_rank = serde_json::Map::new();
    for (rank, subs) in &report.by_rank {
        let entries: Result<Vec<Value>, Failure> =
            subs.iter().map(|f| sub_json(e, f)).collect();
        by_rank.insert(rank.to_string(), Value::Array(entries?));
    }
    Ok(json!({ "dmin": report.dmin.to_string(), "by_rank": Value::Object(by_rank) }))
}

fn filtration_json(e: &HermLattice, hn: &HNFiltration, cfg: &EnumConfig) -> Result<Value, Failure> {
    let steps: Result<Vec<Value>, Failure> =
        hn.steps().iter().map(|(f, _)| sub_json(e, f)).collect();
    let quotients: Vec<Value> = hn.quotient_degrees().iter().map(degree_json).collect();
    // The strictly decreasing slope chain, advisory floats; the exact
    // authority is the (D, rank) pairs in quotient_degrees.
    let slopes: Vec<Value> = hn
        .quotient_degrees()
        .iter()
        .map(|d| Value::String(format_approx(d.slope_approx())))
        .collect();
    let polygon: Vec<Value> = hn
        .polygon()
        .into_iter()
        .map(|(r, d)| json!([r, d.to_string()]))
        .collect();
    let check = verify_hn(e, hn, cfg).map_err(math_failure)?;
    Ok(json!({
        "steps": steps?,
        "quotient_degrees": quotients,
        "slopes_approx": slopes,
        "polygon": polygon,
        "verification": {
            "chain_ok": check.chain_ok,
            "quotients_semistable": check.quotients_semistable,
            "slopes_decreasing": check.slopes_decreasing,
        },
    }))
}

// ---- thresholds ----

/// Exact rational from a decimal string: "0.25" means 25/100, no rounding.
fn parse_decimal(s: &str) -> Result<Rat, Failure> {
    let t = s.trim();
    let bad = || Failure::input(format!("invalid decimal {t:?}"));
    let (sign, digits) = match t.strip_prefix('-') {
        Some(rest) => (-1i64, rest),
        None => (1, t.strip_prefix('+').unwrap_or(t)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((a, b)) => (a, b),
        None => (digits, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad());
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(bad());
    }
    let joined = format!("{int_part}{frac_part}");
    let numer: Int = if joined.is_empty() { Int::from(0) } else { joined.parse().expect("digits") };
    let denom = hnlat::rat::pow_int(&Int::from(10), frac_part.len());
    Ok(Rat::new(Int::from(sign) * numer, denom))
}

/// Turns a decimal log threshold c into an exact degree bound at or below
/// exp(2c): rounding the bound down never drops a qualifying sublattice,
/// and the exact filter then runs on the rounded rational.
fn degree_bound_from_log(s: &str) -> Result<Rat, Failure> {
    let c = parse_decimal(s)?;
    let value = (2.0 * rat_approx(&c)).exp();
    if !value.is_finite() || value < f64::MIN_POSITIVE {
        return Err(Failure::input(format!("log threshold {s} is out of range")));
    }
    let exact = Rat::from_float(value).expect("finite float is rational");
    // A relative 2^-40 shave dominates every rounding step above while
    // staying negligible against any honest threshold.
    Ok(exact * Rat::new(Int::from((1u64 << 40) - 1), Int::from(1u64 << 40)))
}

fn resolve_threshold(args: &ThresholdArgs) -> Result<Rat, Failure> {
    let dmin = match (&args.dmin, &args.c) {
        (Some(s), None) => {
            parse_rat(s).map_err(|e| Failure::input(format!("--dmin: {e}")))?
        }
        (None, Some(s)) => degree_bound_from_log(s)?,
        (None, None) => return Err(Failure::input("a threshold is required: --dmin or --c")),
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    };
    if dmin <= Rat::from_integer(0.into()) {
        return Err(Failure::input("the degree threshold must be positive"));
    }
    Ok(dmin)
}

// ---- subcommands ----

fn cmd_degree(path: &Path, sub: Option<&str>) -> Result<Outcome, Failure> {
    let loaded = load_lattice(path)?;
    let e = &loaded.lattice;
    let Some(name) = sub else {
        let input = input_echo("degree", &loaded, json!({}));
        let result = json!({ "degree": degree_json(&degree(e)) });
        return ok(envelope(input, result, None));
    };
    let gens = named_gens(&loaded, name)?;
    let module = GenSubmodule::new(e.rank(), gens)
        .map_err(|err| Failure::input(format!("submodule {name:?}: {err}")))?;
    let d = degree_of_gen_sub(e, &module).map_err(math_failure)?;
    let sat = saturation(e, &module).map_err(math_failure)?;
    let sat_degree = degree_of_sub(e, &sat).map_err(math_failure)?;
    let index = sub_index(sat.basis(), &module.span_basis()).map_err(math_failure)?;
    let input = input_echo("degree", &loaded, json!({ "sub": name }));
    let result = json!({
        "degree": degree_json(&d),
        "saturation": {
            "basis": basis_json(sat.basis()),
            "degree": degree_json(&sat_degree),
        },
        "defect_index": index.to_string(),
        "defect_log_approx": format_approx(ln_rat_approx(&Rat::from_integer(index.clone()))),
    });
    ok(envelope(input, result, None))
}

fn cmd_enum(
    path: &Path,
    rank: Option<usize>,
    all: bool,
    threshold: &ThresholdArgs,
    cfg: &EnumConfig,
) -> Result<Outcome, Failure> {
    let loaded = load_lattice(path)?;
    let e = &loaded.lattice;
    let dmin = resolve_threshold(threshold)?;
    let (result, complete, mode) = match rank {
        Some(s) => {
            if s == 0 || s > e.rank() {
                return Err(Failure::input(format!(
                    "--rank must be between 1 and {}",
                    e.rank()
                )));
            }
            let (subs, complete) =
                ranked_subs_with_deg_at_least(e, s, &dmin, cfg).map_err(math_failure)?;
            let entries: Result<Vec<Value>, Failure> =
                subs.iter().map(|f| sub_json(e, f)).collect();
            let result = json!({
                "dmin": dmin.to_string(),
                "rank": s,
                "subs": entries?,
            });
            (result, complete, json!({ "sub_rank": s }))
        }
        None => {
            if !all {
                return Err(Failure::input("choose --rank N or --all"));
            }
            let report = all_subs_with_deg_at_least(e, &dmin, cfg).map_err(math_failure)?;
            (subs_report_json(e, &report)?, report.complete, json!({ "all": true }))
        }
    };
    let mut extra = json!({ "dmin": dmin.to_string() });
    if let (Value::Object(dst), Value::Object(src)) = (&mut extra, mode) {
        dst.extend(src);
    }
    let input = input_echo("enum", &loaded, extra);
    ok(envelope(input, result, Some(complete)))
}

fn cmd_hn(path: &Path, cfg: &EnumConfig) -> Result<Outcome, Failure> {
    let loaded = load_lattice(path)?;
    let e = &loaded.lattice;
    let hn = hn_filtration(e, cfg).map_err(math_failure)?;
    let input = input_echo("hn", &loaded, json!({}));
    let result = filtration_json(e, &hn, cfg)?;
    ok(envelope(input, result, None))
}

fn cmd_semistable(path: &Path, cfg: &EnumConfig) -> Result<Outcome, Failure> {
    let loaded = load_lattice(path)?;
    let e = &loaded.lattice;
    let verdict = is_semistable(e, cfg).map_err(math_failure)?;
    let witness = match &verdict.witness {
        Some((f, d)) => json!({ "basis": basis_json(f.basis()), "degree": degree_json(d) }),
        None => Value::Null,
    };
    let input = input_echo("semistable", &loaded, json!({}));
    let result = json!({ "semistable": verdict.semistable, "witness": witness });
    ok(envelope(input, result, None))
}

fn outcome_json(o: &PropertyOutcome) -> Value {
    let mut v = json!({
        "name": o.name,
        "cases": o.cases,
        "failures": o.failures,
    });
    if let Some(first) = &o.first_failure {
        v["first_failure"] = Value::String(first.clone());
    }
    v
}

/// Per-lattice property battery; errors inside a property count as its
/// failure rather than aborting the whole suite.
fn lattice_suite(e: &HermLattice, cfg: &EnumConfig) -> Vec<Value> {
    let quarter = Rat::new(Int::from(1), Int::from(4));
    let mut props: Vec<(&str, Result<bool, MathError>)> = vec![
        ("max-slope-vs-quotient", check_max_slope_vs_quotient(e, cfg)),
        ("max-slope-containment", check_max_slope_containment(e, cfg)),
        (
            "filtration-verifies",
            hn_filtration(e, cfg).and_then(|hn| Ok(verify_hn(e, &hn, cfg)?.all_ok())),
        ),
        (
            "degree-additivity-enumerated",
            additivity_over_enumerated_subs(e, &quarter, cfg).map(|(_, failures)| failures == 0),
        ),
    ];
    if e.rank() <= 4 && reference_feasible(e) {
        props.push((
            "oracle-agreement",
            (|| {
                let fast = all_subs_with_deg_at_least(e, &quarter, cfg)?;
                let slow = hnlat::oracle::naive_subs(e, &quarter)?;
                let hn_ok = hn_filtration(e, cfg)? == hnlat::oracle::naive_hn(e)?;
                Ok(fast == slow && hn_ok)
            })(),
        ));
    }
    props
        .into_iter()
        .map(|(name, res)| match res {
            Ok(passed) => json!({ "name": name, "passed": passed }),
            Err(err) => json!({ "name": name, "passed": false, "error": err.to_string() }),
        })
        .collect()
}

fn cmd_check(
    file: Option<&Path>,
    random: Option<usize>,
    rank: Option<usize>,
    seed: u64,
    cases: usize,
    cfg: &EnumConfig,
) -> Result<Outcome, Failure> {
    let mut lattices: Vec<(String, HermLattice)> = Vec::new();
    let mut input = json!({ "command": "check", "seed": seed, "cases": cases });
    match (file, random) {
        (Some(path), None) => {
            let loaded = load_lattice(path)?;
            let label = loaded.name.clone().unwrap_or_else(|| path.display().to_string());
            input["file"] = Value::String(label.clone());
            lattices.push((label, loaded.lattice));
        }
        (None, Some(count)) => {
            let r = rank.ok_or_else(|| Failure::input("--random needs --rank"))?;
            if r == 0 {
                return Err(Failure::input("--rank must be at least one"));
            }
            input["random"] = Value::Number(count.into());
            input["rank"] = Value::Number(r.into());
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in 0..count {
                let gram = random_gram(r, &mut rng);
                let e = HermLattice::from_gram(gram).expect("sampler output is definite");
                lattices.push((format!("random-{i}"), e));
            }
        }
        (None, None) => {
            return Err(Failure::input("check needs a lattice file or --random N --rank R"))
        }
        (Some(_), Some(_)) => unreachable!("clap rejects the combination"),
    }
    let identity_outcomes =
        run_all_checks(seed, cases, cfg).map_err(math_failure)?;
    let mut all_passed = identity_outcomes.iter().all(PropertyOutcome::passed);
    let identities: Vec<Value> = identity_outcomes.iter().map(outcome_json).collect();
    let mut per_lattice = Vec::new();
    for (label, e) in &lattices {
        let props = lattice_suite(e, cfg);
        all_passed &= props
            .iter()
            .all(|p| p.get("passed").and_then(Value::as_bool).unwrap_or(false));
        per_lattice.push(json!({ "lattice": label, "rank": e.rank(), "properties": props }));
    }
    let result = json!({
        "identity_families": identities,
        "lattices": per_lattice,
        "all_passed": all_passed,
    });
    let code = if all_passed { EXIT_OK } else { EXIT_PROPERTY_FAILURE };
    Ok(Outcome { envelope: envelope(input, result, None), code })
}

fn short_report_json(report: &ShortVecReport) -> Value {
    let vectors: Vec<Value> = report
        .vectors
        .iter()
        .map(|v| {
            json!({
                "coords": v.coords.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "norm": v.norm.to_string(),
            })
        })
        .collect();
    json!({ "bound": report.bound.to_string(), "vectors": vectors })
}

fn cmd_oracle_short(path: &Path, bound: &str) -> Result<Outcome, Failure> {
    let loaded = load_lattice(path)?;
    let bound = parse_rat(bound).map_err(|e| Failure::input(format!("--bound: {e}")))?;
    let report = hnlat::oracle::naive_short_vectors(loaded.lattice.metric(), &bound)
        .map_err(math_failure)?;
    let input = input_echo("oracle-short", &loaded, json!({ "bound": bound.to_string() }));
    ok(envelope(input, short_report_json(&report), Some(report.complete)))
}

fn cmd_oracle_subs(path: &Path, threshold: &ThresholdArgs) -> Result<Outcome, Failure> {
    let loaded = load_lattice(path)?;
    let dmin = resolve_threshold(threshold)?;
    let report = hnlat::oracle::naive_subs(&loaded.lattice, &dmin).map_err(math_failure)?;
    let input = input_echo("oracle-subs", &loaded, json!({ "dmin": dmin.to_string() }));
    let result = subs_report_json(&loaded.lattice, &report)?;
    ok(envelope(input, result, Some(report.complete)))
}

fn cmd_oracle_hn(path: &Path) -> Result<Outcome, Failure> {
    let loaded = load_lattice(path)?;
    let e = &loaded.lattice;
    let hn = hnlat::oracle::naive_hn(e).map_err(math_failure)?;
    let input = input_echo("oracle-hn", &loaded, json!({}));
    let result = filtration_json(e, &hn, &EnumConfig::default())?;
    ok(envelope(input, result, None))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(parse_decimal("0.25").unwrap(), Rat::new(1.into(), 4.into()));
        assert_eq!(parse_decimal("2").unwrap(), Rat::from_integer(2.into()));
        assert_eq!(parse_decimal(".5").unwrap(), Rat::new(1.into(), 2.into()));
        assert_eq!(parse_decimal("-0.04").unwrap(), Rat::new((-1).into(), 25.into()));
        assert!(parse_decimal("1/4").is_err());
        assert!(parse_decimal("").is_err());
        assert!(parse_decimal("1.2.3").is_err());
    }

    #[test]
    fn log_threshold_bound_stays_at_or_below_the_ideal() {
        // c = 0 wants exp(0) = 1; the bound lands just under it.
        let b = degree_bound_from_log("0").unwrap();
        assert!(b < Rat::from_integer(1.into()));
        assert!(b > Rat::new(999999.into(), 1000000.into()));
        // c = 0.5 wants e; c = -0.5 wants 1/e.
        let b = degree_bound_from_log("0.5").unwrap();
        let v = rat_approx(&b);
        assert!(v <= 1.0f64.exp() && v > 1.0f64.exp() - 1e-9);
        let b = degree_bound_from_log("-0.5").unwrap();
        let v = rat_approx(&b);
        assert!(v <= (-1.0f64).exp() && v > (-1.0f64).exp() - 1e-9);
        assert!(degree_bound_from_log("1/4").is_err());
        assert!(degree_bound_from_log("-400").is_err());
    }

    #[test]
    fn degree_serialization_is_exact_and_round_trips() {
        let d = ExpDegree::new(Rat::new(1.into(), 4.into()), 2);
        let v = degree_json(&d);
        assert_eq!(v["D"], "1/4");
        assert_eq!(v["rank"], 2);
        let back = parse_rat(v["D"].as_str().unwrap()).unwrap();
        assert_eq!(&back, d.d());
    }
}
