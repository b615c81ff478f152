//! `quadclass`: class groups of imaginary quadratic fields and checks on
//! the family `Q(sqrt(p^2 - 2q^n))`.

mod config;
mod output;
mod records;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::{BigInt, BigUint};
use quadclass::family::{
    build_field_spec, family_members, verify_field, FieldStatus, OrderKind, DEFAULT_SEARCH_BOUND,
};
use quadclass::wada::{classify, load_fixtures, VerdictKind, TABLE2_FIXTURES};
use quadclass::{Discriminant, Error};
use rayon::prelude::*;
use serde_json::{json, Value};

use config::{Format, RunConfig};

const EXIT_DOMAIN: u8 = 2;
const EXIT_SCALE: u8 = 3;
const EXIT_INCONSISTENT: u8 = 4;

#[derive(Parser)]
#[command(name = "quadclass", version, about = "Class groups of imaginary quadratic fields")]
struct Cli {
    /// Largest |disc| for which reduced forms are enumerated
    #[arg(long, global = true, env = "QUADCLASS_ENUM_BOUND", default_value_t = 1_000_000_000)]
    enum_bound: u64,
    /// Euler product truncation for the BSGS class number estimate
    #[arg(long, global = true, default_value_t = 1_000_000)]
    bsgs_bound: u64,
    /// Worker threads for scans
    #[arg(long, global = true, default_value_t = default_jobs())]
    jobs: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Jsonl)]
    format: Format,
    /// Append output to this file instead of printing it
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

#[derive(Args)]
struct Triple {
    #[arg(long)]
    p: u64,
    #[arg(long)]
    q: u64,
    #[arg(long)]
    n: u32,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderArg {
    /// Z[sqrt(p^2 - 2q^n)]
    Radicand,
    /// The ring of integers
    Field,
}

#[derive(Subcommand)]
enum Command {
    /// Class group structure of a discriminant or of a family member
    Classgroup {
        #[arg(long, allow_hyphen_values = true, conflicts_with_all = ["p", "q", "n"], required_unless_present_all = ["p", "q", "n"])]
        disc: Option<String>,
        #[arg(long, requires_all = ["q", "n"])]
        p: Option<u64>,
        #[arg(long, requires_all = ["p", "n"])]
        q: Option<u64>,
        #[arg(long, requires_all = ["p", "q"])]
        n: Option<u32>,
        /// Order to use with --p --q --n
        #[arg(long, value_enum, default_value_t = OrderArg::Radicand)]
        order: OrderArg,
    },
    /// Check the order of [A] and divisibility of h for one field
    Verify(Triple),
    /// Verify every family member in a range
    Scan {
        #[arg(long)]
        p_max: u64,
        #[arg(long)]
        q_max: u64,
        #[arg(long, value_delimiter = ',', default_values_t = [3u32, 5, 7])]
        n_set: Vec<u32>,
        /// Skip fields whose |disc| exceeds this
        #[arg(long)]
        disc_max: Option<u128>,
    },
    /// Classify the class group table fixtures
    WadaFixtures {
        #[arg(long)]
        fixtures: Option<PathBuf>,
    },
    /// Factor a positive integer
    Factor { value: String },
}

fn exit_for(e: &Error) -> u8 {
    if e.is_scale() {
        EXIT_SCALE
    } else {
        EXIT_DOMAIN
    }
}

struct Outcome {
    records: Vec<Value>,
    summary: Option<Value>,
    code: u8,
}

fn error_outcome(e: &Error) -> Outcome {
    Outcome {
        records: vec![json!({ "error": e.to_string() })],
        summary: None,
        code: exit_for(e),
    }
}

fn classgroup(cfg: &RunConfig, disc: Option<String>, triple: Option<(u64, u64, u32)>, order: OrderArg) -> Outcome {
    let cg = cfg.class_group();
    let kind = match order {
        OrderArg::Radicand => OrderKind::Radicand,
        OrderArg::Field => OrderKind::Maximal,
    };
    let (record, err) = match (disc, triple) {
        (Some(d), _) => {
            let parsed = d
                .parse::<BigInt>()
                .map_err(|_| Error::Domain(format!("cannot parse {d:?} as an integer")))
                .and_then(Discriminant::new);
            match parsed {
                Ok(disc) => records::classgroup_record(&disc, None, &cg),
                Err(e) => return error_outcome(&e),
            }
        }
        (None, Some((p, q, n))) => match build_field_spec(p, q, n) {
            Ok(spec) => records::classgroup_record(spec.discriminant(kind), Some((&spec, kind)), &cg),
            Err(e) => return error_outcome(&e),
        },
        (None, None) => unreachable!("clap requires one input"),
    };
    Outcome {
        records: vec![record],
        summary: None,
        code: err.as_ref().map_or(0, exit_for),
    }
}

fn verify(cfg: &RunConfig, t: &Triple) -> Outcome {
    let spec = match build_field_spec(t.p, t.q, t.n) {
        Ok(s) => s,
        Err(e) => {
            let mut out = error_outcome(&e);
            out.records = vec![json!({"p": t.p, "q": t.q, "n": t.n, "error": e.to_string()})];
            return out;
        }
    };
    let report = verify_field(&spec, &cfg.class_group(), DEFAULT_SEARCH_BOUND);
    let code = match report.status() {
        FieldStatus::Inconsistent => EXIT_INCONSISTENT,
        FieldStatus::Skipped => EXIT_SCALE,
        FieldStatus::Verified | FieldStatus::Exempt => 0,
    };
    Outcome {
        records: vec![records::verify_record(&report)],
        summary: None,
        code,
    }
}

fn scan(cfg: &RunConfig, p_max: u64, q_max: u64, n_set: &[u32], disc_max: Option<u128>) -> Outcome {
    let members = match family_members(p_max, q_max, n_set) {
        Ok(m) => m,
        Err(e) => return error_outcome(&e),
    };
    let members: Vec<_> = members
        .into_iter()
        .filter(|s| disc_max.is_none_or(|m| s.delta.abs() <= BigUint::from(m)))
        .collect();
    let cg = cfg.class_group();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.parallelism)
        .build()
        .expect("thread pool");
    let reports: Vec<_> = pool.install(|| {
        members
            .par_iter()
            .map(|spec| verify_field(spec, &cg, DEFAULT_SEARCH_BOUND))
            .collect()
    });
    let count = |st: FieldStatus| reports.iter().filter(|r| r.status() == st).count();
    let counterexamples = reports
        .iter()
        .filter_map(|r| r.radicand.as_ref().ok())
        .filter(|c| classify(&c.structure.invariant_factors).unwrap().kind == VerdictKind::Counterexample)
        .count();
    let inconsistent = count(FieldStatus::Inconsistent);
    Outcome {
        records: reports.iter().map(records::verify_record).collect(),
        summary: Some(json!({
            "total": reports.len(),
            "verified": count(FieldStatus::Verified),
            "exempt": count(FieldStatus::Exempt),
            "skipped": count(FieldStatus::Skipped),
            "inconsistent": inconsistent,
            "field_exceptions": reports.iter().filter(|r| r.field_exception()).count(),
            "wada_counterexamples": counterexamples,
        })),
        code: if inconsistent > 0 { EXIT_INCONSISTENT } else { 0 },
    }
}

fn wada_fixtures(path: Option<PathBuf>) -> Outcome {
    let text = match &path {
        Some(p) => match std::fs::read_to_string(p) {
            Ok(t) => t,
            Err(e) => return error_outcome(&Error::Domain(format!("{}: {e}", p.display()))),
        },
        None => TABLE2_FIXTURES.to_string(),
    };
    let result = load_fixtures(&text).and_then(|fixtures| {
        fixtures.iter().map(records::fixture_record).collect::<Result<Vec<_>, _>>()
    });
    let records = match result {
        Ok(r) => r,
        Err(e) => return error_outcome(&e),
    };
    let tally = |kind: &str| records.iter().filter(|r| r["wada"] == kind).count();
    let summary = json!({
        "total": records.len(),
        "cyclic": tally("Cyclic"),
        "conforming": tally("ConformingType"),
        "counterexamples": tally("Counterexample"),
        "mark_disagreements": records.iter().filter(|r| r["mark_agrees"] == false).count(),
        "column_mismatches": records.iter().filter(|r| r["column_mismatches"] != json!([])).count(),
        "reassembly_failures": records.iter().filter(|r| r["reassembles"] == false).count(),
    });
    Outcome {
        records,
        summary: Some(summary),
        code: 0,
    }
}

fn factor(value: &str) -> Outcome {
    match value.parse::<BigUint>() {
        Ok(n) if n > BigUint::ZERO => Outcome {
            records: vec![records::factor_record(&n)],
            summary: None,
            code: 0,
        },
        _ => error_outcome(&Error::Domain(format!("{value:?} is not a positive integer"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = RunConfig {
        enumeration_bound: cli.enum_bound,
        bsgs_truncation: cli.bsgs_bound,
        parallelism: cli.jobs,
        output_format: cli.format,
        output_path: cli.out.clone(),
    };
    if let Err(msg) = cfg.validate() {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_DOMAIN);
    }
    let (name, outcome) = match cli.command {
        Command::Classgroup { disc, p, q, n, order } => {
            let triple = p.zip(q).zip(n).map(|((p, q), n)| (p, q, n));
            ("classgroup", classgroup(&cfg, disc, triple, order))
        }
        Command::Verify(t) => ("verify", verify(&cfg, &t)),
        Command::Scan { p_max, q_max, n_set, disc_max } => ("scan", scan(&cfg, p_max, q_max, &n_set, disc_max)),
        Command::WadaFixtures { fixtures } => ("wada-fixtures", wada_fixtures(fixtures)),
        Command::Factor { value } => ("factor", factor(&value)),
    };
    let csv_header = cfg.output_path.as_deref().is_none_or(output::is_empty_file);
    let rendered = match output::render(&cfg, name, &outcome.records, outcome.summary, csv_header) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_DOMAIN);
        }
    };
    eprint!("{}", rendered.side);
    match &cfg.output_path {
        Some(path) => {
            if let Err(e) = output::append_atomically(path, &rendered.body) {
                eprintln!("error: {}: {e}", path.display());
                return ExitCode::from(EXIT_DOMAIN);
            }
        }
        None => print!("{}", rendered.body),
    }
    ExitCode::from(outcome.code)
}
