use std::fmt::Write as _;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pgonal_core::atlas::{atlas, multiprime, paper_check, AtlasMode, AtlasReport};
use pgonal_core::monodromy::{burnside_count, census, BranchData};
use pgonal_core::{Error, PrimeModulus, DEFAULT_BUDGET};
use serde::Serialize;

use pgonal_cli::cache::Cache;
use pgonal_cli::parse;
use pgonal_cli::record::{RecordSet, ResultRecord, Timing, SCHEMA_VERSION};

#[derive(Parser)]
#[command(name = "pgonal", version, about = "Isolated strata of cyclic p-gonal surfaces")]
struct Cli {
    /// Worker threads for census and atlas (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Bypass the record cache.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Attach wall-clock timing to records (breaks byte-identical output).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    p: u64,
    /// Comma-separated exponents; `r^m` repeats `r` m times.
    #[arg(long, allow_hyphen_values = true)]
    exp: String,
}

impl DataArgs {
    fn exponents(&self) -> Result<Vec<i64>, Failure> {
        parse::exponents(&self.exp).map_err(|message| Failure { code: 2, message })
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Witness,
    Census,
}

#[derive(Subcommand)]
enum Command {
    /// Check a branch-data vector.
    Validate(DataArgs),
    /// Canonical class, isolation verdict and optional extension witnesses.
    Classify {
        #[command(flatten)]
        data: DataArgs,
        /// Search extensions C_p ⋊ C_n for 2 <= n <= N.
        #[arg(long, value_name = "N")]
        extend: Option<u32>,
        #[arg(long)]
        json: bool,
    },
    /// Every class of branch data for (p, k).
    Census {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long, value_name = "N")]
        extend: Option<u32>,
        #[arg(long, conflicts_with = "csv")]
        json: bool,
        #[arg(long)]
        csv: bool,
    },
    /// Isolated strata per gonality of one or more genera.
    Atlas {
        #[arg(long, required_unless_present = "range", conflicts_with = "range")]
        genus: Option<u64>,
        /// Inclusive genus range `A..B`.
        #[arg(long, value_parser = parse::range)]
        range: Option<(u64, u64)>,
        #[arg(long, value_enum, default_value = "witness")]
        mode: Mode,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Isolated strata at the multiples of lcm((p_i - 1)/2).
    Multiprime {
        #[arg(long, value_delimiter = ',', required = true)]
        primes: Vec<u64>,
        /// Inclusive range of multiples `A..B`.
        #[arg(long, value_parser = parse::range, default_value = "1..6")]
        multiples: (u64, u64),
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        json: bool,
    },
    /// Recompute every published claim and list the errata.
    PaperCheck {
        #[arg(long)]
        json: bool,
    },
}

/// A failed command with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn internal(message: impl Into<String>) -> Self {
        Failure { code: 4, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded { .. } => 3,
            Error::NotPrime(_)
            | Error::ModulusTooSmall(_)
            | Error::NotAUnit { .. }
            | Error::EmptyPrimeList
            | Error::DuplicatePrime(_)
            | Error::ExponentOutOfRange { .. }
            | Error::SumNotZero { .. }
            | Error::TooFewPoints(_)
            | Error::TooFewPeriods(_)
            | Error::GenusTooSmall(_)
            | Error::InvalidExtension { .. } => 2,
            _ => 4,
        };
        Failure { code, message: format!("{e} [{}]", error_kind(&e)) }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        match e.downcast::<Error>() {
            Ok(core) => core.into(),
            Err(e) => Failure::internal(format!("{e:#}")),
        }
    }
}

fn error_kind(e: &Error) -> String {
    let dbg = format!("{e:?}");
    dbg.split(|c: char| !c.is_alphanumeric()).next().unwrap_or_default().to_string()
}

type Outcome = Result<String, Failure>;

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value).map(|s| s + "\n").map_err(|e| Failure::internal(e.to_string()))
}

fn prime(p: u64) -> Result<PrimeModulus, Failure> {
    Ok(PrimeModulus::new(p)?)
}

struct Ctx {
    cache: Option<Cache>,
    timing: bool,
}

impl Ctx {
    fn records(
        &self,
        command: &str,
        p: u32,
        k: usize,
        exps: &[u32],
        flags: &str,
        compute: impl FnOnce() -> Result<Vec<ResultRecord>, Failure>,
    ) -> Result<Vec<ResultRecord>, Failure> {
        let start = Instant::now();
        let key = Cache::key(command, p, k, exps, flags);
        let cached = self.cache.as_ref().and_then(|c| c.get(p, k, &key));
        let mut records = match cached {
            Some(r) => r,
            None => {
                let r = compute()?;
                if let Some(c) = &self.cache {
                    if let Err(e) = c.put(p, k, &key, &r) {
                        eprintln!("warning: cache write failed: {e:#}");
                    }
                }
                r
            }
        };
        if self.timing {
            let elapsed_ms = start.elapsed().as_millis() as u64;
            records.iter_mut().for_each(|r| r.timing = Some(Timing { elapsed_ms }));
        }
        Ok(records)
    }
}

fn cmd_validate(args: &DataArgs) -> Outcome {
    let p = prime(args.p)?;
    let bd = BranchData::validate(p, &args.exponents()?)?;
    let cls = bd.canonical();
    let sum: u64 = bd.exponents().iter().map(|&r| r as u64).sum();
    let mut out = String::new();
    writeln!(out, "valid").unwrap();
    writeln!(out, "p: {p}").unwrap();
    writeln!(out, "k: {}", bd.k()).unwrap();
    writeln!(out, "exponents: {bd}").unwrap();
    writeln!(out, "sum: {sum} = {} * {p}", sum / p.get() as u64).unwrap();
    writeln!(out, "g: {}", cls.genus()).unwrap();
    writeln!(out, "d: {}", cls.dim()).unwrap();
    Ok(out)
}

fn write_record(out: &mut String, r: &ResultRecord) {
    let profile: Vec<String> = r.profile.iter().map(|(j, m)| format!("{j}^{m}")).collect();
    writeln!(out, "canonical: {}", r.canonical_string()).unwrap();
    writeln!(out, "p: {}", r.p).unwrap();
    writeln!(out, "k: {}", r.k).unwrap();
    writeln!(out, "g: {}", r.g).unwrap();
    writeln!(out, "d: {}", r.d).unwrap();
    writeln!(out, "profile: {}", profile.join(" ")).unwrap();
    writeln!(out, "verdict: {}", r.verdict).unwrap();
    if r.candidates.is_empty() {
        writeln!(out, "candidates: none").unwrap();
    }
    for c in &r.candidates {
        writeln!(out, "candidate: q={} u={} min_fixed={} cycle={}", c.q, c.u, c.min_fixed_in_s, c.has_cycle).unwrap();
    }
    for w in &r.witnesses {
        let images: Vec<String> = w.images.iter().map(|[a, b]| format!("({a},{b})")).collect();
        writeln!(out, "witness: {} (n={}, u={}) on {} via {}", w.group, w.n, w.u, w.quotient_signature, images.join(" "))
            .unwrap();
    }
    if let Some(t) = &r.timing {
        writeln!(out, "elapsed_ms: {}", t.elapsed_ms).unwrap();
    }
}

fn cmd_classify(ctx: &Ctx, data: &DataArgs, extend: Option<u32>, json: bool) -> Outcome {
    let p = prime(data.p)?;
    let bd = BranchData::validate(p, &data.exponents()?)?;
    let cls = bd.canonical();
    if let Some(n) = extend {
        if n < 2 {
            return Err(Error::InvalidExtension { p: p.get(), n, u: 1 }.into());
        }
    }
    let flags = format!("extend={}", extend.map_or("none".into(), |n| n.to_string()));
    let records = ctx.records("classify", p.get(), cls.k(), cls.exponents(), &flags, || {
        Ok(vec![ResultRecord::build(&cls, extend)?])
    })?;
    if json {
        return to_json(&RecordSet { schema_version: SCHEMA_VERSION, command: "classify".into(), records });
    }
    let mut out = String::new();
    writeln!(out, "input: {bd}").unwrap();
    write_record(&mut out, &records[0]);
    if extend.is_some() && records[0].witnesses.is_empty() && records[0].verdict != "isolated" {
        writeln!(out, "note: candidate, unproven within the searched top orders").unwrap();
    }
    Ok(out)
}

fn cmd_census(ctx: &Ctx, p: u64, k: usize, budget: u64, extend: Option<u32>, json: bool, csv: bool) -> Outcome {
    let p = prime(p)?;
    if k < 3 {
        return Err(Error::TooFewPoints(k).into());
    }
    let flags = format!("extend={}", extend.map_or("none".into(), |n| n.to_string()));
    let records = ctx.records("census", p.get(), k, &[], &flags, || {
        let classes = census(p, k, budget)?;
        let expected = burnside_count(p, k)?;
        if classes.len() as u128 != expected {
            return Err(Failure::internal(format!(
                "census found {} classes but the orbit count is {expected}",
                classes.len()
            )));
        }
        classes.iter().map(|c| ResultRecord::build(c, extend).map_err(Failure::from)).collect()
    })?;
    if json {
        return to_json(&RecordSet { schema_version: SCHEMA_VERSION, command: "census".into(), records });
    }
    if csv {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["p", "k", "canonical", "g", "d", "verdict", "candidate_count", "witness_count"])
            .map_err(|e| Failure::internal(e.to_string()))?;
        for r in &records {
            w.write_record([
                r.p.to_string(),
                r.k.to_string(),
                r.canonical_string(),
                r.g.to_string(),
                r.d.to_string(),
                r.verdict.clone(),
                r.candidates.len().to_string(),
                r.witnesses.len().to_string(),
            ])
            .map_err(|e| Failure::internal(e.to_string()))?;
        }
        let bytes = w.into_inner().map_err(|e| Failure::internal(e.to_string()))?;
        return String::from_utf8(bytes).map_err(|e| Failure::internal(e.to_string()));
    }
    let isolated = records.iter().filter(|r| r.verdict == "isolated").count();
    let (g, d) = records.first().map_or((0, 0), |r| (r.g, r.d));
    let mut out = String::new();
    writeln!(out, "p={p} k={k} g={g} d={d}: {} classes, {isolated} isolated", records.len()).unwrap();
    let width = records.iter().map(|r| r.canonical_string().len()).max().unwrap_or(9).max(9);
    writeln!(out, "{:<width$}  {:<14}  {:>10}  {:>9}", "canonical", "verdict", "candidates", "witnesses").unwrap();
    for r in &records {
        writeln!(
            out,
            "{:<width$}  {:<14}  {:>10}  {:>9}",
            r.canonical_string(),
            r.verdict,
            r.candidates.len(),
            r.witnesses.len()
        )
        .unwrap();
    }
    Ok(out)
}

fn write_atlas(out: &mut String, report: &AtlasReport) {
    writeln!(out, "g={}", report.g).unwrap();
    for e in &report.entries {
        writeln!(out, "  {e}").unwrap();
    }
    for n in &report.notes {
        writeln!(out, "  note: {n}").unwrap();
    }
}

#[derive(Serialize)]
struct AtlasDoc {
    schema_version: u32,
    command: &'static str,
    reports: Vec<AtlasReport>,
}

fn cmd_atlas(genus: Option<u64>, range: Option<(u64, u64)>, mode: Mode, budget: u64, json: bool) -> Outcome {
    let (lo, hi) = match (genus, range) {
        (Some(g), _) => (g, g),
        (None, Some(r)) => r,
        (None, None) => unreachable!("clap requires one of --genus and --range"),
    };
    let mode = match mode {
        Mode::Witness => AtlasMode::Witness,
        Mode::Census => AtlasMode::Census,
    };
    let reports = (lo..=hi).map(|g| atlas(g, mode, budget)).collect::<Result<Vec<_>, _>>()?;
    if json {
        return to_json(&AtlasDoc { schema_version: SCHEMA_VERSION, command: "atlas", reports });
    }
    let mut out = String::new();
    for r in &reports {
        write_atlas(&mut out, r);
    }
    Ok(out)
}

fn cmd_multiprime(primes: &[u64], multiples: (u64, u64), budget: u64, json: bool) -> Outcome {
    if primes.is_empty() {
        return Err(Error::EmptyPrimeList.into());
    }
    let primes = primes.iter().map(|&p| prime(p)).collect::<Result<Vec<_>, _>>()?;
    let report = multiprime(&primes, multiples.0..=multiples.1, budget)?;
    if json {
        return to_json(&report);
    }
    let mut out = String::new();
    let listed: Vec<String> = report.primes.iter().map(|p| p.to_string()).collect();
    writeln!(out, "primes: {}", listed.join(",")).unwrap();
    writeln!(out, "lambda: {}", report.lambda).unwrap();
    for x in &report.genera {
        let iso: Vec<String> = x.isolated_primes.iter().map(|p| p.to_string()).collect();
        writeln!(out, "g={} (m={}): r={} isolated for p in {{{}}}", x.g, x.multiple, x.r, iso.join(",")).unwrap();
        if x.pentagonal_exception {
            writeln!(out, "  exception: no isolated pentagonal stratum at g=12").unwrap();
        }
        if let Some(w) = &x.warning {
            writeln!(out, "  warning: {w}").unwrap();
        }
        for e in &x.entries {
            writeln!(out, "  {e}").unwrap();
        }
    }
    Ok(out)
}

fn cmd_paper_check(json: bool) -> Outcome {
    let report = paper_check();
    let text = if json {
        #[derive(Serialize)]
        struct Doc<'a> {
            schema_version: u32,
            command: &'static str,
            passed: bool,
            #[serde(flatten)]
            report: &'a pgonal_core::atlas::PaperCheck,
        }
        to_json(&Doc { schema_version: SCHEMA_VERSION, command: "paper-check", passed: report.passed(), report: &report })?
    } else {
        let mut out = String::new();
        for a in &report.assertions {
            let tag = if a.passed { "PASS" } else { "FAIL" };
            writeln!(out, "{tag} {}: expected {}, got {}", a.name, a.expected, a.actual).unwrap();
        }
        writeln!(out, "errata ({}):", report.errata.len()).unwrap();
        for e in &report.errata {
            writeln!(out, "  {}\n    printed: {}\n    computed: {}", e.item, e.printed, e.computed).unwrap();
        }
        let failed = report.failures().count();
        writeln!(out, "{} assertions, {failed} failed", report.assertions.len()).unwrap();
        out
    };
    if report.passed() {
        Ok(text)
    } else {
        print!("{text}");
        Err(Failure::internal("recomputed assertions failed"))
    }
}

fn run(cli: Cli) -> Outcome {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Failure::internal(e.to_string()))?;
    }
    let ctx = Ctx { cache: if cli.no_cache { None } else { Cache::from_env() }, timing: cli.timing };
    match &cli.command {
        Command::Validate(args) => cmd_validate(args),
        Command::Classify { data, extend, json } => cmd_classify(&ctx, data, *extend, *json),
        Command::Census { p, k, budget, extend, json, csv } => cmd_census(&ctx, *p, *k, *budget, *extend, *json, *csv),
        Command::Atlas { genus, range, mode, budget, json } => cmd_atlas(*genus, *range, *mode, *budget, *json),
        Command::Multiprime { primes, multiples, budget, json } => cmd_multiprime(primes, *multiples, *budget, *json),
        Command::PaperCheck { json } => cmd_paper_check(*json),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(f) => {
            let label = match f.code {
                2 => "invalid",
                3 => "budget exceeded",
                _ => "internal error",
            };
            eprintln!("{label}: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
