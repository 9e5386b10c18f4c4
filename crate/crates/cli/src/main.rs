//! `mgl`: predict and verify the Sylow structure of Macdonald groups.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use macdonald_core::fpgroup::{EnumerationLimits, Strategy, DEFAULT_MAX_COSETS};
use macdonald_core::predictor::{
    local_invariants, predict, predict_all, prime_support, report_violations, GroupParams,
    StructureReport,
};
use macdonald_core::snf::{teo17_q, teo17_seed_matrix, teo5_q, teo5_seed_matrix, SeedClaim};
use macdonald_core::verifier::{
    run_corpus, verify, CorpusEntry, CorpusSummary, Engine, Status, VerificationReport,
    VerifyOptions,
};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

const EXIT_MISMATCH: u8 = 1;
const EXIT_RESOURCE: u8 = 2;
const EXIT_INPUT: u8 = 3;

#[derive(Parser)]
#[command(
    name = "mgl",
    version,
    about = "Sylow subgroups of Macdonald groups G(alpha, beta)"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Predicted structure of one or all Sylow subgroups.
    Predict(PredictArgs),
    /// Build one Sylow subgroup and compare it with the prediction.
    Verify(VerifyArgs),
    /// Verify every entry of a CSV corpus.
    Corpus(CorpusArgs),
    /// Order of an abelian seed group against its claimed order.
    SnfCheck(SnfArgs),
    /// Structural bounds of predictions over random pairs.
    CheckInvariants(InvariantArgs),
}

#[derive(Args)]
struct PredictArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, allow_hyphen_values = true)]
    beta: i64,
    #[arg(long)]
    prime: Option<u64>,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Clone)]
struct EngineArgs {
    /// Largest group order (coset count) attempted.
    #[arg(long, env = "MGL_MAX_COSETS", default_value_t = DEFAULT_MAX_COSETS)]
    max_cosets: usize,
    /// Coset enumeration strategy, used with `--engine tc`.
    #[arg(long, value_enum, default_value_t = StrategyArg::Hlt)]
    strategy: StrategyArg,
    /// How the group is built: p-quotient (`pq`) or coset enumeration (`tc`).
    #[arg(long, value_enum, default_value_t = EngineArg::Pq)]
    engine: EngineArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum StrategyArg {
    Hlt,
    Felsch,
}

#[derive(Clone, Copy, ValueEnum)]
enum EngineArg {
    Pq,
    Tc,
}

impl EngineArgs {
    fn options(&self) -> VerifyOptions {
        let strategy = match self.strategy {
            StrategyArg::Hlt => Strategy::Hlt,
            StrategyArg::Felsch => Strategy::Felsch,
        };
        VerifyOptions {
            limits: EnumerationLimits::with_max_cosets(self.max_cosets).strategy(strategy),
            engine: match self.engine {
                EngineArg::Pq => Engine::PQuotient,
                EngineArg::Tc => Engine::ToddCoxeter,
            },
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, allow_hyphen_values = true)]
    alpha: i64,
    #[arg(long, allow_hyphen_values = true)]
    beta: i64,
    #[arg(long)]
    prime: u64,
    #[command(flatten)]
    engine: EngineArgs,
    /// Print the relation checks.
    #[arg(long)]
    relations: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct CorpusArgs {
    /// CSV with header `alpha,beta,prime,max_cosets`.
    #[arg(long)]
    file: PathBuf,
    /// JSON-lines output; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[command(flatten)]
    engine: EngineArgs,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeedCase {
    Teo5,
    Teo17,
}

#[derive(Args)]
struct SnfArgs {
    #[arg(long = "case", value_enum)]
    case: SeedCase,
    /// Prime (`teo5` only).
    #[arg(long)]
    p: Option<u64>,
    #[arg(long)]
    m: u32,
    #[arg(long)]
    ell: u32,
    #[arg(long, allow_hyphen_values = true)]
    k: i64,
    #[arg(long, allow_hyphen_values = true)]
    u: i64,
    #[arg(long, allow_hyphen_values = true)]
    v: i64,
    /// Defaults to the admissible value computed from `k` and `u`.
    #[arg(long)]
    q: Option<u32>,
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct InvariantArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 10_000)]
    count: usize,
    /// Pairs are drawn from `[-range, range]`.
    #[arg(long, default_value_t = 1000)]
    range: i64,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_INPUT)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let code = match cli.command {
        Command::Predict(a) => cmd_predict(&a),
        Command::Verify(a) => cmd_verify(&a),
        Command::Corpus(a) => cmd_corpus(&a),
        Command::SnfCheck(a) => cmd_snf_check(&a),
        Command::CheckInvariants(a) => cmd_check_invariants(&a),
    };
    ExitCode::from(code)
}

fn input_error(msg: impl std::fmt::Display) -> u8 {
    eprintln!("error: {msg}");
    EXIT_INPUT
}

fn report_json(alpha: i64, beta: i64, r: &StructureReport) -> serde_json::Value {
    json!({
        "alpha": alpha,
        "beta": beta,
        "prime": r.p,
        "e": r.e,
        "f": r.f,
        "vA": r.v_a,
        "vB": r.v_b,
        "vC": r.v_c,
        "case": r.case.as_str(),
    })
}

fn print_table(rows: &[Vec<String>]) {
    let widths: Vec<usize> = (0..rows[0].len())
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(x, w)| format!("{x:>w$}"))
            .collect();
        println!("{}", cells.join("  ").trim_end());
    }
}

fn cmd_predict(a: &PredictArgs) -> u8 {
    let params = match GroupParams::new(a.alpha, a.beta) {
        Ok(p) => p,
        Err(e) => return input_error(e),
    };
    let (reports, order) = match a.prime {
        Some(p) => match predict(&params, p) {
            Ok(r) => {
                let order = r.order();
                (vec![r], order)
            }
            Err(e) => return input_error(e),
        },
        None => match predict_all(&params) {
            Ok(all) => (all.reports, all.order),
            Err(e) => return input_error(e),
        },
    };
    if a.json {
        for r in &reports {
            println!("{}", report_json(a.alpha, a.beta, r));
        }
        return 0;
    }
    let mut rows = vec![["p", "case", "e", "f", "o(A)", "o(B)", "o(C)"]
        .iter()
        .map(|s| s.to_string())
        .collect::<Vec<_>>()];
    for r in &reports {
        rows.push(vec![
            r.p.to_string(),
            r.case.to_string(),
            r.e.to_string(),
            r.f.to_string(),
            r.order_a().to_string(),
            r.order_b().to_string(),
            r.order_c().to_string(),
        ]);
    }
    print_table(&rows);
    if a.prime.is_none() {
        println!("|G| = {order}");
    }
    0
}

fn exit_for(status: Status) -> u8 {
    match status {
        Status::Match => 0,
        Status::Mismatch => EXIT_MISMATCH,
        Status::SkippedResource => EXIT_RESOURCE,
        Status::Error => EXIT_INPUT,
    }
}

fn cmd_verify(a: &VerifyArgs) -> u8 {
    let report = verify(a.alpha, a.beta, a.prime, &a.engine.options());
    if a.json {
        println!("{}", report.to_json());
    } else {
        print_report(&report, a.relations);
    }
    exit_for(report.status)
}

fn print_report(r: &VerificationReport, relations: bool) {
    let prime = r.prime.map_or_else(|| "-".to_string(), |p| p.to_string());
    println!("G({}, {}) at p = {}: {}", r.alpha, r.beta, prime, r.status);
    if let Some(msg) = &r.message {
        println!("  {msg}");
    }
    if let (Some(p), Some(pr)) = (r.prime, &r.predicted) {
        let pow = |v: u32| num_bigint::BigUint::from(p).pow(v).to_string();
        println!(
            "  predicted  case {}  order {}  class {}  o(a) {}  o(b) {}  o(c) {}",
            pr.case,
            pow(pr.e),
            pr.f,
            pow(pr.v_a),
            pow(pr.v_b),
            pow(pr.v_c)
        );
    }
    if let Some(m) = &r.measured {
        println!(
            "  measured   order {}  class {}  o(a) {}  o(b) {}  o(c) {}  abelianization {}",
            m.order, m.class, m.ord_a, m.ord_b, m.ord_c, m.abelianization
        );
        if !m.nilpotent {
            println!("  lower central series stalls: not nilpotent");
        }
    }
    if let Some(q16) = r.q16 {
        println!("  generalized quaternion Q16: {q16}");
    }
    if relations {
        for rel in &r.relations {
            println!("  {} {}", rel.id, if rel.holds { "holds" } else { "FAILS" });
        }
    }
    println!("  points {}  time {} ms", r.cosets, r.millis);
}

fn read_corpus(path: &PathBuf) -> Result<Vec<CorpusEntry>, String> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| format!("{}: {e}", path.display()))?;
    reader
        .deserialize()
        .map(|row| row.map_err(|e| format!("{}: {e}", path.display())))
        .collect()
}

fn cmd_corpus(a: &CorpusArgs) -> u8 {
    let entries = match read_corpus(&a.file) {
        Ok(e) => e,
        Err(e) => return input_error(e),
    };
    let reports = run_corpus(&entries, &a.engine.options(), a.jobs);
    let mut sink: Box<dyn Write> = match &a.out {
        Some(path) => match File::create(path) {
            Ok(f) => Box::new(BufWriter::new(f)),
            Err(e) => return input_error(format!("{}: {e}", path.display())),
        },
        None => Box::new(io::stdout().lock()),
    };
    for r in &reports {
        if let Err(e) = writeln!(sink, "{}", r.to_json()) {
            return input_error(e);
        }
    }
    if let Err(e) = sink.flush() {
        return input_error(e);
    }
    drop(sink);
    let summary = CorpusSummary::of(&reports);
    for r in &reports {
        if r.status != Status::Match {
            let prime = r.prime.map_or_else(|| "-".to_string(), |p| p.to_string());
            let why = r.message.as_deref().unwrap_or("");
            eprintln!(
                "{} ({}, {}) p = {} {}",
                r.status, r.alpha, r.beta, prime, why
            );
        }
    }
    if summary.skipped > 0 {
        eprintln!(
            "warning: {} entries skipped for resource limits",
            summary.skipped
        );
    }
    eprintln!("{summary}");
    if summary.mismatched == 0 && summary.errors == 0 {
        0
    } else {
        EXIT_MISMATCH
    }
}

fn cmd_snf_check(a: &SnfArgs) -> u8 {
    let (k, u, v) = (BigInt::from(a.k), BigInt::from(a.u), BigInt::from(a.v));
    let claim: Result<SeedClaim, _> = match a.case {
        SeedCase::Teo5 => {
            let Some(p) = a.p else {
                return input_error("--p is required for teo5");
            };
            let q = a.q.unwrap_or_else(|| teo5_q(p, a.m, &k, &u));
            teo5_seed_matrix(p, a.m, a.ell, &k, &u, &v, q)
        }
        SeedCase::Teo17 => {
            let q = a.q.unwrap_or_else(|| teo17_q(a.m, &k, &u));
            teo17_seed_matrix(a.m, a.ell, &k, &u, &v, q)
        }
    };
    let claim = match claim {
        Ok(c) => c,
        Err(e) => return input_error(e),
    };
    let computed = claim.computed();
    let holds = claim.holds();
    if a.json {
        println!(
            "{}",
            json!({
                "prime": claim.p,
                "computed": computed.to_string(),
                "claimed": claim.claimed.to_string(),
                "holds": holds,
            })
        );
    } else {
        print!("{}", claim.matrix);
        println!("computed {}-part {computed}", claim.p);
        println!("claimed  {}", claim.claimed);
        println!("{}", if holds { "agree" } else { "DISAGREE" });
    }
    if holds {
        0
    } else {
        EXIT_MISMATCH
    }
}

fn cmd_check_invariants(a: &InvariantArgs) -> u8 {
    if a.range < 2 {
        return input_error("--range must be at least 2");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut checked = 0usize;
    let mut failures = 0usize;
    while checked < a.count {
        let alpha = rng.gen_range(-a.range..=a.range);
        let beta = rng.gen_range(-a.range..=a.range);
        let Ok(params) = GroupParams::new(alpha, beta) else {
            continue;
        };
        checked += 1;
        let primes = match prime_support(&params) {
            Ok(ps) => ps,
            Err(e) => {
                failures += 1;
                eprintln!("({alpha}, {beta}): {e}");
                continue;
            }
        };
        for p in primes {
            let outcome = local_invariants(&params, p)
                .and_then(|inv| predict(&params, p).map(|r| report_violations(&r, &inv)));
            match outcome {
                Ok(v) if v.is_empty() => {}
                Ok(v) => {
                    failures += 1;
                    eprintln!("({alpha}, {beta}) p = {p}: {}", v.join("; "));
                }
                Err(e) => {
                    failures += 1;
                    eprintln!("({alpha}, {beta}) p = {p}: {e}");
                }
            }
        }
    }
    println!("{checked} pairs, {failures} failures (seed {})", a.seed);
    if failures == 0 {
        0
    } else {
        EXIT_MISMATCH
    }
}
