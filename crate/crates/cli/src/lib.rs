//! Command handlers for the `forbidden` binary.
//!
//! Every handler returns its full stdout as a `String` so the commands can be
//! exercised without spawning processes.

use std::fmt::Write as _;

use clap::{Args, Parser, Subcommand};
use forbidden_core::continuants::{g_poly, g_roots, u_set};
use forbidden_core::exact::{parse_rational, to_f64};
use forbidden_core::families::{cos2_family, darboux_witnesses_from, pell_witnesses, DARBOUX_MIN_C};
use forbidden_core::loops::{chain_length, evaluate_path, search_nonunit_loop, weight_squared};
use forbidden_core::witness::WitnessJson;
use forbidden_core::{Error, LoopWitness, PathSeq, PathStatus, Rational, SearchConfig, WeightSquared};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "forbidden", version, about = "Exact loop-weight certificates for forbidden conductors")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    /// Largest last index of a generated sequence.
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Half-width of the candidate range for each entry.
    #[arg(long, default_value_t = 4)]
    pub window: u64,
    /// Node budget per q.
    #[arg(long, default_value_t = 1_000_000)]
    pub budget: usize,
    /// Disable pruning by the alternating chain bound.
    #[arg(long)]
    pub no_chain_pruning: bool,
}

impl SearchArgs {
    pub fn config(&self) -> SearchConfig {
        SearchConfig {
            max_depth: self.depth,
            window: self.window,
            node_budget: self.budget,
            use_chain_pruning: !self.no_chain_pruning,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Prefix values, status and squared weight of a sequence.
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        /// Comma-separated integers.
        #[arg(long, allow_hyphen_values = true)]
        m: String,
    },
    /// Search for a loop of non-unit weight.
    Search {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Search every reduced fraction in a range.
    Scan {
        /// `lo,hi`
        #[arg(long, allow_hyphen_values = true)]
        range: String,
        #[arg(long)]
        max_den: u64,
        #[command(flatten)]
        search: SearchArgs,
        /// Worker threads (0 = all cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        /// CSV output (the default).
        #[arg(long)]
        csv: bool,
    },
    /// Fibonacci-unit witnesses accumulating at (3 ± √5)/2.
    Pell {
        #[arg(long, default_value_t = 5)]
        count: usize,
        #[arg(long)]
        reciprocal: bool,
    },
    /// Witnesses accumulating at an element of U_n.
    Darboux {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        u_index: usize,
        #[arg(long, default_value_t = 3)]
        count: usize,
        /// First multiplier; values below 3 are reported as outside the proof.
        #[arg(long, default_value_t = DARBOUX_MIN_C)]
        min_c: i64,
    },
    /// Length of the forced alternating chain for 0 < q < 4.
    Chain {
        #[arg(long, allow_hyphen_values = true)]
        q: String,
    },
    /// Coefficients of g_n, constant term first.
    Gpoly {
        #[arg(long)]
        n: usize,
    },
    /// Roots 2cos(πj/(n+1)) of g_n.
    Roots {
        #[arg(long)]
        n: usize,
    },
    /// Elements of U_n with isolating intervals.
    Uset {
        #[arg(long)]
        n: usize,
    },
    /// Sorted values (4/n)cos²(πℓ/(2k+1)).
    Cos2 {
        #[arg(long, default_value_t = 10)]
        max_k: usize,
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
}

#[derive(Debug, PartialEq, Eq)]
pub enum CliError {
    Invalid(String),
    Budget(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => 1,
            CliError::Budget(_) => 2,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Invalid(m) | CliError::Budget(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded(_) => CliError::Budget(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

pub type CliResult = std::result::Result<String, CliError>;

/// Parses `args` (without the program name) and runs the command.
pub fn run_args<I, S>(args: I) -> CliResult
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let argv = std::iter::once(std::ffi::OsString::from("forbidden")).chain(args.into_iter().map(Into::into));
    let cli = Cli::try_parse_from(argv).map_err(|e| CliError::Invalid(e.to_string()))?;
    run(cli.command)
}

pub fn run(command: Command) -> CliResult {
    match command {
        Command::Eval { q, m } => cmd_eval(&parse_q(&q)?, &parse_seq(&m)?),
        Command::Search { q, search } => cmd_search(&parse_q(&q)?, &search.config()),
        Command::Scan { range, max_den, search, jobs, json, .. } => {
            let (lo, hi) = parse_range(&range)?;
            let report = scan(&lo, &hi, max_den, &search.config(), jobs)?;
            Ok(if json { report.to_json() } else { report.to_csv() })
        }
        Command::Pell { count, reciprocal } => Ok(cmd_pell(count, reciprocal)),
        Command::Darboux { n, u_index, count, min_c } => cmd_darboux(n, u_index, count, min_c),
        Command::Chain { q } => Ok(format!("{}\n", chain_length(&parse_q(&q)?)?)),
        Command::Gpoly { n } => Ok(format!("{}\n", g_poly(n))),
        Command::Roots { n } => Ok(lines(g_roots(n))),
        Command::Uset { n } => Ok(u_set(n)
            .iter()
            .map(|t| format!("{} [{}, {}]\n", t.approx(), t.lo(), t.hi()))
            .collect()),
        Command::Cos2 { max_k, max_n } => Ok(lines(cos2_family(max_k, max_n))),
    }
}

fn lines(xs: Vec<f64>) -> String {
    xs.iter().map(|x| format!("{x}\n")).collect()
}

pub fn parse_q(s: &str) -> std::result::Result<Rational, CliError> {
    let q = parse_rational(s)?;
    if q <= Rational::from_integer(0.into()) {
        return Err(CliError::Invalid(format!("invalid input: q must be positive, got {s}")));
    }
    Ok(q)
}

pub fn parse_seq(s: &str) -> std::result::Result<PathSeq, CliError> {
    let entries = s
        .split(',')
        .map(|t| t.trim().parse::<BigInt>().map_err(|_| CliError::Invalid(format!("bad integer {t:?}"))))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    Ok(PathSeq::new(entries)?)
}

pub fn parse_range(s: &str) -> std::result::Result<(Rational, Rational), CliError> {
    let (lo, hi) = s
        .split_once(',')
        .ok_or_else(|| CliError::Invalid(format!("range must be lo,hi, got {s:?}")))?;
    let (lo, hi) = (parse_q(lo.trim())?, parse_q(hi.trim())?);
    if lo >= hi {
        return Err(CliError::Invalid(format!("empty range {s}")));
    }
    Ok((lo, hi))
}

pub fn cmd_eval(q: &Rational, m: &PathSeq) -> CliResult {
    let eval = evaluate_path(q, m)?;
    let prefixes: Vec<String> = eval.prefix_c.iter().map(ToString::to_string).collect();
    let mut out = format!("prefix_c={}\nstatus={}\n", prefixes.join(","), eval.status);
    if eval.status == PathStatus::Loop {
        writeln!(out, "w2={}", weight_squared(q, m)?).unwrap();
    }
    Ok(out)
}

pub fn cmd_search(q: &Rational, cfg: &SearchConfig) -> CliResult {
    let outcome = search_nonunit_loop(q, cfg)?;
    let text = match outcome.witness {
        Some(w) => serde_json::to_string(&w.to_json()).unwrap(),
        None => serde_json::to_string(&NotFound { found: false, budget_exhausted: outcome.budget_exhausted }).unwrap(),
    };
    Ok(format!("{text}\n"))
}

#[derive(Serialize)]
struct NotFound {
    found: bool,
    budget_exhausted: bool,
}

#[derive(Serialize)]
struct PellItem {
    k: usize,
    a: String,
    b: String,
    witness: WitnessJson,
}

#[derive(Serialize)]
struct DarbouxItem {
    n: usize,
    t0: f64,
    c: i64,
    within_proof: bool,
    witness: WitnessJson,
}

pub fn cmd_pell(count: usize, reciprocal: bool) -> String {
    let items: Vec<_> = pell_witnesses(count, reciprocal)
        .into_iter()
        .map(|w| PellItem { k: w.k, a: w.a.to_string(), b: w.b.to_string(), witness: w.witness.to_json() })
        .collect();
    format!("{}\n", serde_json::to_string(&items).unwrap())
}

pub fn cmd_darboux(n: usize, u_index: usize, count: usize, min_c: i64) -> CliResult {
    let items: Vec<_> = darboux_witnesses_from(n, u_index, count, min_c)?
        .into_iter()
        .map(|w| DarbouxItem {
            n: w.n,
            t0: w.t0.approx(),
            c: w.c_k,
            within_proof: w.within_proof,
            witness: w.witness.to_json(),
        })
        .collect();
    Ok(format!("{}\n", serde_json::to_string(&items).unwrap()))
}

/// Reduced fractions `a/b` in `[lo, hi]` with `b ≤ max_den`, ordered by `(b, a)`.
pub fn fractions_in_range(lo: &Rational, hi: &Rational, max_den: u64) -> Vec<Rational> {
    let mut out = Vec::new();
    for b in 1..=max_den {
        let bb = BigInt::from(b);
        let first = (lo * &bb).ceil().to_integer();
        let last = (hi * &bb).floor().to_integer();
        let mut a = first;
        while a <= last {
            if a.gcd(&bb).is_one() {
                out.push(Rational::new(a.clone(), bb.clone()));
            }
            a += 1;
        }
    }
    out
}

/// Result of searching one candidate.
#[derive(Clone, Debug, PartialEq)]
pub struct ScanRow {
    pub q: Rational,
    pub witness: Option<LoopWitness>,
    pub nodes: usize,
    pub budget_exhausted: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanReport {
    pub lo: Rational,
    pub hi: Rational,
    pub max_denominator: u64,
    pub config: SearchConfig,
    /// All candidates in `(denominator, numerator)` order.
    pub rows: Vec<ScanRow>,
}

#[derive(Serialize)]
struct ConfigJson {
    max_depth: usize,
    window: u64,
    node_budget: usize,
    use_chain_pruning: bool,
}

#[derive(Serialize)]
struct ScanReportJson {
    interval: [String; 2],
    max_denominator: u64,
    config: ConfigJson,
    found: Vec<WitnessJson>,
    examined: usize,
    budget_exhausted: Vec<String>,
}

impl ScanReport {
    pub fn found(&self) -> impl Iterator<Item = &LoopWitness> {
        self.rows.iter().filter_map(|r| r.witness.as_ref())
    }

    pub fn examined(&self) -> usize {
        self.rows.len()
    }

    pub fn budget_exhausted(&self) -> impl Iterator<Item = &Rational> {
        self.rows.iter().filter(|r| r.budget_exhausted).map(|r| &r.q)
    }

    pub fn to_json(&self) -> String {
        let report = ScanReportJson {
            interval: [self.lo.to_string(), self.hi.to_string()],
            max_denominator: self.max_denominator,
            config: ConfigJson {
                max_depth: self.config.max_depth,
                window: self.config.window,
                node_budget: self.config.node_budget,
                use_chain_pruning: self.config.use_chain_pruning,
            },
            found: self.found().map(LoopWitness::to_json).collect(),
            examined: self.examined(),
            budget_exhausted: self.budget_exhausted().map(ToString::to_string).collect(),
        };
        format!("{}\n", serde_json::to_string_pretty(&report).unwrap())
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("a,b,q_float,found,loop,w2_num,w2_den,nodes,budget_exhausted\n");
        for row in &self.rows {
            let (lp, num, den) = match &row.witness {
                Some(w) => {
                    let entries: Vec<String> = w.loop_seq.entries().iter().map(ToString::to_string).collect();
                    let (num, den) = match &w.weight_squared {
                        WeightSquared::Exact(x) => (x.numer().to_string(), x.denom().to_string()),
                        WeightSquared::Formula { .. } => (String::new(), String::new()),
                    };
                    (entries.join(";"), num, den)
                }
                None => Default::default(),
            };
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                row.q.numer(),
                row.q.denom(),
                q_float(&row.q),
                row.witness.is_some(),
                lp,
                num,
                den,
                row.nodes,
                row.budget_exhausted
            )
            .unwrap();
        }
        out
    }
}

fn q_float(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(a), Some(b)) if a.is_finite() && b.is_finite() => a / b,
        _ => to_f64(q),
    }
}

/// Runs the search on every candidate in parallel; the output order does not
/// depend on the schedule.
pub fn scan(
    lo: &Rational,
    hi: &Rational,
    max_den: u64,
    cfg: &SearchConfig,
    jobs: usize,
) -> std::result::Result<ScanReport, CliError> {
    if *lo <= Rational::from_integer(0.into()) || lo >= hi {
        return Err(CliError::Invalid(format!("scan needs 0 < lo < hi, got {lo}, {hi}")));
    }
    if max_den == 0 {
        return Err(CliError::Invalid("max-den must be at least 1".into()));
    }
    cfg.validate()?;
    let candidates = fractions_in_range(lo, hi, max_den);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| CliError::Invalid(e.to_string()))?;
    let rows = pool.install(|| {
        candidates
            .par_iter()
            .map(|q| {
                let out = search_nonunit_loop(q, cfg)?;
                Ok(ScanRow {
                    q: q.clone(),
                    witness: out.witness,
                    nodes: out.nodes,
                    budget_exhausted: out.budget_exhausted,
                })
            })
            .collect::<std::result::Result<Vec<_>, Error>>()
    })?;
    Ok(ScanReport { lo: lo.clone(), hi: hi.clone(), max_denominator: max_den, config: cfg.clone(), rows })
}
