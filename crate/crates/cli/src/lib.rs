//! The `beauville` command line. Every invocation writes exactly one JSON document to
//! standard output; diagnostics go to standard error.
//!
//! | exit | meaning |
//! |------|---------|
//! | 0 | found, constructed or valid |
//! | 2 | malformed input or a request outside the supported range |
//! | 3 | proven not to exist (exhaustive search, Riemann–Hurwitz) or proven invalid |
//! | 4 | budget exhausted, or a check that could not be decided |
//! | 5 | internal invariant violation |

use std::ffi::OsString;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use beauville_core::an_search::{
    build_from_selection, choose_classes_an_with, choose_classes_ramification, choose_classes_sn_with, BuildError, ClassSelection,
    Mode, Profile,
};
use beauville_core::arith::prime_power;
use beauville_core::group::{parse_group_spec, AnyGroup, Group, Verdict};
use beauville_core::hunt::{hunt, HuntError, DEFAULT_LIMIT};
use beauville_core::psl2::{beauville_psl2, ConstructError};
use beauville_core::structure::{
    exhaustive_beauville_search, hom_census, hom_census_sampled, is_ramification_structure, is_unmixed_beauville, random_search,
    random_search_typed, structure_from_json, structure_report, surface_invariants, InvariantError, SearchError, SearchOutcome,
    EXHAUSTIVE_CAP,
};
use beauville_core::with_group;
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde_json::{json, Value};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONEXISTENT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

/// Random-search budget when neither `--exhaustive` nor `--budget` is given and the
/// group is too large to exhaust.
pub const DEFAULT_SEARCH_BUDGET: u64 = 100_000;
pub const DEFAULT_AN_BUDGET: u64 = 1_000_000;

/// The exit code and the JSON document of one invocation.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub code: i32,
    pub doc: Value,
}

impl Outcome {
    fn new(code: i32, doc: Value) -> Self {
        Outcome { code, doc }
    }
}

struct Fail {
    code: i32,
    message: String,
}

impl Fail {
    fn new(code: i32, message: impl ToString) -> Self {
        Fail { code, message: message.to_string() }
    }

    fn usage(message: impl ToString) -> Self {
        Fail::new(EXIT_USAGE, message)
    }
}

type Res = Result<Outcome, Fail>;

/// A comma-separated list of element orders such as `2,3,7`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Orders(pub Vec<u64>);

impl FromStr for Orders {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let v = s
            .split(',')
            .map(|x| x.trim().parse::<u64>().map_err(|_| format!("{x:?} is not a non-negative integer")))
            .collect::<Result<Vec<_>, _>>()?;
        if v.is_empty() {
            return Err("empty type".into());
        }
        Ok(Orders(v))
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ProfileArg {
    Strict,
    Relaxed,
    Unbounded,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Strict => Profile::Strict,
            ProfileArg::Relaxed => Profile::Relaxed,
            ProfileArg::Unbounded => Profile::Unbounded,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "beauville", version, about = "Find, construct and verify unmixed Beauville structures")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a structure document against a group.
    Verify {
        group: String,
        #[arg(long)]
        structure: PathBuf,
        /// Accept tuples of any length (ramification structures).
        #[arg(long)]
        ramification: bool,
    },
    /// Search a group for a structure, exhaustively or at random.
    Search {
        group: String,
        #[arg(long)]
        type1: Option<Orders>,
        #[arg(long)]
        type2: Option<Orders>,
        #[arg(long, conflicts_with = "budget")]
        exhaustive: bool,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The explicit construction on PSL(2,q).
    Psl2 { q: u64 },
    /// Almost homogeneous classes and a structure on A_n (or S_n).
    An {
        n: usize,
        #[arg(long)]
        type1: Orders,
        #[arg(long)]
        type2: Orders,
        #[arg(long)]
        sn: bool,
        #[arg(long, value_enum, default_value = "strict")]
        profile: ProfileArg,
        /// Shorthand for `--profile relaxed`.
        #[arg(long, conflicts_with = "profile")]
        relaxed: bool,
        #[arg(long, default_value_t = DEFAULT_AN_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Stop after choosing the classes.
        #[arg(long)]
        select_only: bool,
    },
    /// Primes p for which PSL(2,p) has a structure of type ((r,r,r),(s,s,s)).
    Hunt {
        r: u64,
        s: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
    },
    /// Genera and numerical invariants of the surface.
    Invariants {
        #[arg(long)]
        order: String,
        #[arg(long)]
        type1: Orders,
        #[arg(long)]
        type2: Orders,
    },
    /// Count homomorphisms from a triangle group onto a group.
    Census {
        group: String,
        #[arg(long = "type")]
        rst: Orders,
        /// Estimate from this many random pairs instead of counting.
        #[arg(long)]
        samples: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Structures for a range of groups, e.g. `psl2:[7..32]` or `an:[5,6,7]`.
    Catalog {
        range: String,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome::new(EXIT_OK, json!({ "help": text }))
                }
                _ => {
                    eprintln!("{text}");
                    Outcome::new(EXIT_USAGE, json!({ "error": text.trim(), "exit": EXIT_USAGE }))
                }
            };
        }
    };
    let result = match cli.command {
        Command::Verify { group, structure, ramification } => verify(&group, &structure, ramification),
        Command::Search { group, type1, type2, exhaustive, budget, seed } => search(&group, type1, type2, exhaustive, budget, seed),
        Command::Psl2 { q } => psl2(q),
        Command::An { n, type1, type2, sn, profile, relaxed, budget, seed, select_only } => {
            let profile = if relaxed { Profile::Relaxed } else { profile.into() };
            an(n, &type1.0, &type2.0, sn, profile, budget, seed, select_only)
        }
        Command::Hunt { r, s, count, limit } => hunt_cmd(r, s, count, limit),
        Command::Invariants { order, type1, type2 } => invariants(&order, &type1.0, &type2.0),
        Command::Census { group, rst, samples, seed } => census(&group, &rst.0, samples, seed),
        Command::Catalog { range, budget, seed } => catalog(&range, budget, seed),
    };
    result.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message);
        Outcome::new(f.code, json!({ "error": f.message, "exit": f.code }))
    })
}

fn load_group(spec: &str) -> Result<AnyGroup, Fail> {
    parse_group_spec(spec, |path| std::fs::read_to_string(path).map_err(|e| format!("cannot read {path}: {e}"))).map_err(Fail::usage)
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Yes => EXIT_OK,
        Verdict::No => EXIT_NONEXISTENT,
        Verdict::Undecided => EXIT_BUDGET,
    }
}

fn verify(spec: &str, path: &PathBuf, ramification: bool) -> Res {
    let g = load_group(spec)?;
    let text = std::fs::read_to_string(path).map_err(|e| Fail::usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| Fail::usage(format!("{} is not JSON: {e}", path.display())))?;
    if let Some(other) = doc.get("group").and_then(Value::as_str) {
        if other != spec {
            eprintln!("note: the document names group {other}, checking against {spec}");
        }
    }
    with_group!(&g, g => {
        let s = structure_from_json(g, &doc).map_err(Fail::usage)?;
        let v = if ramification { is_ramification_structure(g, &s) } else { is_unmixed_beauville(g, &s) };
        let mut report = structure_report(g, &s, &v);
        report["valid"] = json!(v.is_valid());
        Ok(Outcome::new(verdict_code(v.verdict), report))
    })
}

fn outcome_doc<G: Group>(g: &G, out: &SearchOutcome<G::Elem>) -> Value {
    match (&out.structure, &out.verification) {
        (Some(s), Some(v)) => structure_report(g, s, v),
        _ => Value::Null,
    }
}

fn search_error(e: SearchError) -> Fail {
    match e {
        SearchError::TooLarge(..) => Fail::usage(format!("{e}; pass --budget for a random search")),
        SearchError::BudgetExhausted(_) => Fail::new(EXIT_BUDGET, e),
        SearchError::Structure(_) => Fail::usage(e),
        SearchError::Internal(_) => Fail::new(EXIT_INTERNAL, e),
    }
}

fn search(spec: &str, type1: Option<Orders>, type2: Option<Orders>, exhaustive: bool, budget: Option<u64>, seed: u64) -> Res {
    let types = match (type1, type2) {
        (Some(a), Some(b)) => Some((a.0, b.0)),
        (None, None) => None,
        _ => return Err(Fail::usage("--type1 and --type2 go together")),
    };
    let g = load_group(spec)?;
    with_group!(&g, g => {
        let small = g.elements().map(|e| e.len() <= EXHAUSTIVE_CAP || types.is_some()).unwrap_or(false);
        let use_exhaustive = exhaustive || (budget.is_none() && small);
        let filter = types.as_ref().map(|(a, b)| (a.as_slice(), b.as_slice()));
        let mut doc = json!({
            "group": g.spec(),
            "types": types.as_ref().map(|(a, b)| json!([a, b])),
            "mode": if use_exhaustive { "exhaustive" } else { "random" },
        });
        if use_exhaustive {
            let out = exhaustive_beauville_search(g, filter).map_err(search_error)?;
            let exists = out.structure.is_some();
            doc["exists"] = json!(exists);
            doc["structure"] = outcome_doc(g, &out);
            doc["examined"] = json!(out.examined);
            doc["signatures"] = json!(out.signatures);
            return Ok(Outcome::new(if exists { EXIT_OK } else { EXIT_NONEXISTENT }, doc));
        }
        let budget = budget.unwrap_or(DEFAULT_SEARCH_BUDGET);
        doc["budget"] = json!(budget);
        doc["seed"] = json!(seed);
        let found = match filter {
            Some((a, b)) => random_search_typed(g, a, b, budget, seed),
            None => random_search(g, None, budget, seed),
        };
        match found {
            Ok(out) => {
                doc["exists"] = json!(true);
                doc["structure"] = outcome_doc(g, &out);
                doc["examined"] = json!(out.examined);
                doc["signatures"] = json!(out.signatures);
                Ok(Outcome::new(EXIT_OK, doc))
            }
            Err(SearchError::BudgetExhausted(b)) => {
                eprintln!("budget of {b} draws exhausted; this does not show that no structure exists");
                doc["exists"] = Value::Null;
                doc["structure"] = Value::Null;
                Ok(Outcome::new(EXIT_BUDGET, doc))
            }
            Err(e) => Err(search_error(e)),
        }
    })
}

fn construct_error(e: ConstructError) -> Fail {
    match e {
        ConstructError::Unverified(_) => Fail::new(EXIT_INTERNAL, e),
        ConstructError::Search(s) => search_error(s),
        _ => Fail::usage(e),
    }
}

fn psl2(q: u64) -> Res {
    match beauville_psl2(q).map_err(construct_error)? {
        Some(c) => {
            let mut doc = structure_report(&c.group, &c.structure, &c.verification);
            doc["exists"] = json!(true);
            doc["method"] = json!(c.method);
            Ok(Outcome::new(EXIT_OK, doc))
        }
        None => Ok(Outcome::new(
            EXIT_NONEXISTENT,
            json!({ "group": format!("psl2:{q}"), "exists": false, "structure": "none" }),
        )),
    }
}

fn selection_doc(sel: &ClassSelection) -> Value {
    json!({
        "n": sel.n,
        "mode": sel.mode,
        "types": sel.types,
        "shapes": sel.shapes.iter().map(|t| t.iter().map(|s| json!({ "m": s.m, "k": s.k, "f": s.f })).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "max_offset": sel.max_offset,
        "index_sums": [sel.index_sum(0), sel.index_sum(1)],
        "needed": 2 * sel.n - 2,
    })
}

#[allow(clippy::too_many_arguments)]
fn an(n: usize, t1: &[u64], t2: &[u64], sn: bool, profile: Profile, budget: u64, seed: u64, select_only: bool) -> Res {
    let mode = if sn { Mode::Sn } else { Mode::An };
    let sel = if t1.len() == 3 && t2.len() == 3 {
        if sn {
            choose_classes_sn_with(t1, t2, n, profile)
        } else {
            choose_classes_an_with(t1, t2, n, profile)
        }
    } else {
        choose_classes_ramification(t1, t2, n, mode, profile)
    }
    .map_err(Fail::usage)?;
    let mut doc = json!({ "selection": selection_doc(&sel), "profile": format!("{profile:?}").to_lowercase() });
    if select_only {
        return Ok(Outcome::new(EXIT_OK, doc));
    }
    doc["budget"] = json!(budget);
    doc["seed"] = json!(seed);
    match build_from_selection(&sel, budget, seed) {
        Ok(c) => {
            doc["exists"] = json!(true);
            doc["steps"] = json!(c.steps);
            doc["structure"] = structure_report(&c.group, &c.structure, &c.verification);
            Ok(Outcome::new(EXIT_OK, doc))
        }
        Err(e) => {
            let code = match e {
                BuildError::Selection(_) => EXIT_USAGE,
                BuildError::Infeasible { .. } => EXIT_NONEXISTENT,
                BuildError::BudgetExhausted(_) => EXIT_BUDGET,
                BuildError::Unverified(_) => EXIT_INTERNAL,
            };
            eprintln!("{e}");
            doc["exists"] = if code == EXIT_NONEXISTENT { json!(false) } else { Value::Null };
            doc["error"] = json!(e.to_string());
            Ok(Outcome::new(code, doc))
        }
    }
}

fn hunt_cmd(r: u64, s: u64, count: usize, limit: u64) -> Res {
    match hunt(r, s, count, limit) {
        Ok(h) => Ok(Outcome::new(EXIT_OK, serde_json::to_value(&h).map_err(|e| Fail::new(EXIT_INTERNAL, e))?)),
        Err(e @ HuntError::BadInput(_)) => Err(Fail::usage(e)),
        Err(e @ HuntError::NoneFound { .. }) => Err(Fail::new(EXIT_BUDGET, e)),
    }
}

fn invariants(order: &str, t1: &[u64], t2: &[u64]) -> Res {
    let order: BigUint = order.trim().parse().map_err(|_| Fail::usage(format!("{order:?} is not a positive integer")))?;
    match surface_invariants(&order, t1, t2) {
        Ok(inv) => {
            let mut doc = serde_json::to_value(&inv).map_err(|e| Fail::new(EXIT_INTERNAL, e))?;
            doc["order"] = json!(order.to_string());
            doc["type1"] = json!(t1);
            doc["type2"] = json!(t2);
            Ok(Outcome::new(EXIT_OK, doc))
        }
        Err(e @ (InvariantError::BadType(_) | InvariantError::ZeroOrder)) => Err(Fail::usage(e)),
        Err(e) => Err(Fail::new(EXIT_NONEXISTENT, e)),
    }
}

fn census(spec: &str, rst: &[u64], samples: Option<u64>, seed: u64) -> Res {
    let &[r, s, t] = rst else {
        return Err(Fail::usage("--type needs exactly three orders"));
    };
    let g = load_group(spec)?;
    with_group!(&g, g => {
        let doc = match samples {
            Some(n) => {
                let c = hom_census_sampled(g, (r, s, t), n, seed);
                let mut doc = serde_json::to_value(&c).map_err(|e| Fail::new(EXIT_INTERNAL, e))?;
                doc["mode"] = json!("sampled");
                doc["seed"] = json!(seed);
                doc
            }
            None => {
                let c = hom_census(g, (r, s, t)).map_err(|e| match e {
                    SearchError::TooLarge(..) => Fail::usage(format!("{e}; pass --samples for an estimate")),
                    other => search_error(other),
                })?;
                let mut doc = serde_json::to_value(&c).map_err(|e| Fail::new(EXIT_INTERNAL, e))?;
                doc["mode"] = json!("exact");
                doc
            }
        };
        let mut doc = doc;
        doc["group"] = json!(g.spec());
        doc["type"] = json!(rst);
        Ok(Outcome::new(EXIT_OK, doc))
    })
}

/// `family:[a..b]` (inclusive), `family:[a,b,c]` or `family:a`.
fn parse_range(range: &str) -> Result<(String, Vec<u64>), Fail> {
    let (family, rest) = range.split_once(':').ok_or_else(|| Fail::usage("expected <family>:[<range>]"))?;
    let inner = rest.trim().trim_start_matches('[').trim_end_matches(']');
    let num = |s: &str| s.trim().parse::<u64>().map_err(|_| Fail::usage(format!("{s:?} is not an integer")));
    let members = match inner.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (num(a)?, num(b)?);
            if b < a || b - a > 10_000 {
                return Err(Fail::usage(format!("bad range {a}..{b}")));
            }
            (a..=b).collect()
        }
        None => inner.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
    };
    match family.trim() {
        f @ ("psl2" | "ab2" | "an" | "sn") => Ok((f.to_string(), members)),
        other => Err(Fail::usage(format!("catalog family {other:?} is not one of psl2, ab2, an, sn"))),
    }
}

fn catalog_member(family: &str, x: u64, budget: u64, seed: u64) -> Option<Value> {
    let spec = format!("{family}:{x}");
    let start = Instant::now();
    let entry = |provenance: &str, method: &str, structure: Value| {
        json!({
            "group": spec,
            "provenance": provenance,
            "method": method,
            "timing_ms": start.elapsed().as_millis() as u64,
            "structure": structure,
        })
    };
    let failure = |message: String| json!({ "group": spec, "error": message, "timing_ms": start.elapsed().as_millis() as u64 });
    if family == "psl2" {
        if prime_power(x).is_none() {
            return None;
        }
        return match beauville_psl2(x) {
            Ok(Some(c)) => {
                let provenance = if c.method.contains("search") { "searched" } else { "constructed" };
                Some(entry(provenance, &c.method, structure_report(&c.group, &c.structure, &c.verification)))
            }
            Ok(None) => None,
            Err(e) => Some(failure(e.to_string())),
        };
    }
    let g = match parse_group_spec(&spec, |_| Err("no files in catalogs".into())) {
        Ok(g) => g,
        Err(e) => return Some(failure(e.to_string())),
    };
    with_group!(&g, g => {
        let small = g.elements().map(|e| e.len() <= EXHAUSTIVE_CAP).unwrap_or(false);
        let (method, found) = if small {
            ("exhaustive search", exhaustive_beauville_search(g, None))
        } else {
            ("random search", random_search(g, None, budget, seed))
        };
        match found {
            Ok(out) if out.structure.is_some() => Some(entry("searched", method, outcome_doc(g, &out))),
            Ok(_) => None,
            Err(e) => Some(failure(e.to_string())),
        }
    })
}

fn catalog(range: &str, budget: u64, seed: u64) -> Res {
    let (family, members) = parse_range(range)?;
    let entries: Vec<Value> = members.iter().filter_map(|&x| catalog_member(&family, x, budget, seed)).collect();
    Ok(Outcome::new(EXIT_OK, Value::Array(entries)))
}
