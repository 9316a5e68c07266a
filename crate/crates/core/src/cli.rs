//! Command-line front end.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 on input
//! errors (in which case nothing is written to the output).

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cascade::{compute_cascade, Cascade};
use crate::chevalley::ChevalleyTable;
use crate::invariants::{generators_json, semigroup_generators};
use crate::par;
use crate::report::VerificationReport;
use crate::rootsys::{RootSystem, TypeSpec};
use crate::suite::{run_type, CheckSet, SuiteConfig, DEFAULT_SEED};

pub const SCHEMA_VERSION: u32 = 1;
pub const THREADS_ENV: &str = "CASCADE_KIT_THREADS";

#[derive(Parser, Debug)]
#[command(name = "cascade-kit", version, about = "Kostant cascades, coadjoint orbits and nilradical invariants in exact arithmetic")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the cascade forest, Heisenberg layers and dual Coxeter numbers
    Cascade(CommonArgs),
    /// Run verification suites
    Verify(VerifyArgs),
    /// Print generator weights and transition matrices
    Table(CommonArgs),
}

#[derive(Args, Debug, Clone)]
pub struct CommonArgs {
    /// Types such as A3, G2 or B2xA1
    pub types: Vec<String>,
    /// Comma-separated types, added after the positional ones
    #[arg(long = "types", value_name = "TYPES", value_delimiter = ',')]
    pub type_list: Vec<String>,
    #[arg(long, value_parser = parse_seed, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, default_value_t = 25, value_parser = clap::value_parser!(u32).range(1..))]
    pub samples: u32,
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub r_cap: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write output here instead of stdout
    #[arg(long)]
    pub out: Option<std::path::PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum, value_delimiter = ',', default_value = "all")]
    pub checks: Vec<CheckKind>,
    /// Also run polynomial-level invariant checks on E and F components
    #[arg(long)]
    pub exceptional_polynomials: bool,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Tsv,
    Text,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheckKind {
    Section1,
    Coadjoint,
    Invariants,
    All,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Fault {
    /// Drop the last cascade root before verifying
    DropCascadeRoot,
}

fn parse_seed(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let r = match t.strip_prefix("0x").or_else(|| t.strip_prefix("0X")) {
        Some(h) => u64::from_str_radix(h, 16),
        None => t.parse(),
    };
    r.map_err(|e| format!("invalid seed `{s}`: {e}"))
}

struct Output {
    text: String,
    code: i32,
}

fn resolve_types(c: &CommonArgs) -> Result<Vec<TypeSpec>, String> {
    let names: Vec<&String> = c.types.iter().chain(&c.type_list).collect();
    if names.is_empty() {
        return Err("no types given".into());
    }
    names
        .into_iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.parse::<TypeSpec>().map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()
        .and_then(|v| if v.is_empty() { Err("no types given".into()) } else { Ok(v) })
}

fn header(command: &str, c: &CommonArgs) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("schema_version".into(), json!(SCHEMA_VERSION));
    m.insert("version".into(), json!(env!("CARGO_PKG_VERSION")));
    m.insert("command".into(), json!(command));
    m.insert("seed".into(), json!(c.seed));
    m.insert("samples".into(), json!(c.samples));
    m.insert("r_cap".into(), json!(c.r_cap));
    m
}

fn to_json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn build(spec: &TypeSpec) -> (ChevalleyTable, Cascade) {
    let rs = RootSystem::new(spec.clone());
    let c = compute_cascade(&rs);
    (ChevalleyTable::new(rs), c)
}

fn cmd_cascade(c: &CommonArgs, specs: &[TypeSpec]) -> Output {
    let data: Vec<(RootSystem, Cascade)> = par::map(specs, |s| {
        let rs = RootSystem::new(s.clone());
        let cas = compute_cascade(&rs);
        (rs, cas)
    });
    let text = match c.format {
        Format::Json => {
            let mut m = header("cascade", c);
            m.insert(
                "types".into(),
                Value::Array(data.iter().map(|(rs, cas)| serde_json::to_value(cas.to_json(rs)).expect("serializable")).collect()),
            );
            to_json_text(&Value::Object(m))
        }
        Format::Tsv => {
            let mut s = String::from("type\tnode\tbeta\tsupport\tparent\tlayer_size\th_dual\n");
            for (rs, cas) in &data {
                for (i, n) in cas.to_json(rs).nodes.iter().enumerate() {
                    let _ = writeln!(
                        s,
                        "{}\t{}\t{:?}\t{:?}\t{}\t{}\t{}",
                        rs.spec,
                        i,
                        n.beta,
                        n.support,
                        n.parent.map_or("-".to_string(), |p| p.to_string()),
                        n.layer_size,
                        n.h_dual
                    );
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (rs, cas) in &data {
                let _ = writeln!(s, "{}: m = {}", rs.spec, cas.m());
                for n in cas.to_json(rs).nodes {
                    let _ = writeln!(s, "  beta {:?}  support {:?}  |E| = {}  h_dual = {}", n.beta, n.support, n.layer_size, n.h_dual);
                }
            }
            s
        }
    };
    Output { text, code: 0 }
}

fn checks_of(kinds: &[CheckKind]) -> CheckSet {
    let mut set = CheckSet::default();
    for k in kinds {
        match k {
            CheckKind::Section1 => set.section1 = true,
            CheckKind::Coadjoint => set.coadjoint = true,
            CheckKind::Invariants => set.invariants = true,
            CheckKind::All => set = CheckSet::all(),
        }
    }
    set
}

fn cmd_verify(v: &VerifyArgs, specs: &[TypeSpec]) -> Output {
    let c = &v.common;
    let checks = checks_of(&v.checks);
    let cfg = SuiteConfig {
        seed: c.seed,
        samples: c.samples as usize,
        r_cap: c.r_cap,
        exceptional_polynomials: v.exceptional_polynomials,
        ..SuiteConfig::default()
    };
    let results: Vec<(String, usize, VerificationReport, Option<Value>)> = specs
        .iter()
        .map(|s| {
            let (tbl, mut cas) = build(s);
            if v.inject_fault == Some(Fault::DropCascadeRoot) {
                cas = cas.without_last();
            }
            let (report, gens) = run_type(&tbl, &cas, checks, &cfg);
            (s.to_string(), cas.m(), report, gens)
        })
        .collect();
    let passed = results.iter().all(|r| r.2.passed());
    let text = match c.format {
        Format::Json => {
            let mut m = header("verify", c);
            m.insert(
                "checks_requested".into(),
                json!(v.checks.iter().map(|k| format!("{k:?}").to_lowercase()).collect::<Vec<_>>()),
            );
            m.insert(
                "types".into(),
                Value::Array(
                    results
                        .iter()
                        .map(|(ty, mm, report, gens)| {
                            let mut o = json!({
                                "type": ty,
                                "m": mm,
                                "passed": report.passed(),
                                "checks": report.checks,
                            });
                            if let Some(g) = gens {
                                o["generators"] = g.clone();
                            }
                            o
                        })
                        .collect(),
                ),
            );
            m.insert("passed".into(), json!(passed));
            to_json_text(&Value::Object(m))
        }
        Format::Tsv => {
            let mut s = String::from("type\tcheck\tstatus\tevidence\tseed\tsamples\n");
            for (_, _, report, _) in &results {
                for r in &report.checks {
                    let _ = writeln!(
                        s,
                        "{}\t{}\t{}\t{}\t{}\t{}",
                        r.type_name,
                        r.check,
                        if r.passed() { "pass" } else { "fail" },
                        serde_json::to_value(r.evidence).expect("serializable").as_str().unwrap_or(""),
                        r.seed.map_or("-".into(), |x| x.to_string()),
                        r.samples.map_or("-".into(), |x| x.to_string()),
                    );
                }
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for (ty, mm, report, _) in &results {
                let total = report.checks.len();
                let bad = report.failures().count();
                let _ = writeln!(s, "{ty} (m = {mm}): {}/{} checks passed", total - bad, total);
                for r in &report.checks {
                    let _ = writeln!(s, "  [{}] {}", if r.passed() { "pass" } else { "FAIL" }, r.check);
                    if let Some(w) = &r.witness {
                        let _ = writeln!(s, "         witness: {w}");
                    }
                }
            }
            let _ = writeln!(s, "{}", if passed { "all checks passed" } else { "some checks failed" });
            s
        }
    };
    Output {
        text,
        code: if passed { 0 } else { 1 },
    }
}

fn cmd_table(c: &CommonArgs, specs: &[TypeSpec]) -> Output {
    let rows: Vec<Value> = par::map(specs, |s| {
        let rs = RootSystem::new(s.clone());
        let cas = compute_cascade(&rs);
        match semigroup_generators(&rs, &cas, c.r_cap) {
            Ok(g) => {
                let j = generators_json(&rs, &cas, &g);
                json!({
                    "type": j.type_name,
                    "m": j.m,
                    "cascade": j.cascade,
                    "mu_over_b": j.generators.iter().map(|x| &x.mu_coords_over_b).collect::<Vec<_>>(),
                    "mu_over_simples": j.generators.iter().map(|x| &x.mu_coords_over_simples).collect::<Vec<_>>(),
                    "degrees": j.generators.iter().map(|x| x.degree).collect::<Vec<_>>(),
                    "transition_matrix": j.transition_matrix,
                    "det": j.det,
                })
            }
            Err(e) => json!({"type": s.to_string(), "m": cas.m(), "error": e.to_string()}),
        }
    });
    let ok = rows.iter().all(|r| r.get("error").is_none());
    let text = match c.format {
        Format::Json => {
            let mut m = header("table", c);
            m.insert("rows".into(), Value::Array(rows));
            to_json_text(&Value::Object(m))
        }
        Format::Tsv | Format::Text => {
            let compact = |v: &Value| serde_json::to_string(v).expect("serializable");
            let mut s = String::from("type\tm\tcascade\tmu_over_b\tmu_over_simples\tdegrees\tdet\n");
            for r in &rows {
                if let Some(e) = r.get("error") {
                    let _ = writeln!(s, "{}\t{}\terror: {}", r["type"].as_str().unwrap_or(""), r["m"], e.as_str().unwrap_or(""));
                    continue;
                }
                let _ = writeln!(
                    s,
                    "{}\t{}\t{}\t{}\t{}\t{}\t{}",
                    r["type"].as_str().unwrap_or(""),
                    r["m"],
                    compact(&r["cascade"]),
                    compact(&r["mu_over_b"]),
                    compact(&r["mu_over_simples"]),
                    compact(&r["degrees"]),
                    r["det"]
                );
            }
            s
        }
    };
    Output {
        text,
        code: if ok { 0 } else { 1 },
    }
}

fn threads_from_env() -> Option<usize> {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse().ok())
}

/// Parses `args` (including the program name), runs the command and
/// returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let common = match &cli.command {
        Command::Cascade(c) | Command::Table(c) => c,
        Command::Verify(v) => &v.common,
    };
    let specs = match resolve_types(common) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let out = par::with_threads(threads_from_env(), || match &cli.command {
        Command::Cascade(c) => cmd_cascade(c, &specs),
        Command::Verify(v) => cmd_verify(v, &specs),
        Command::Table(c) => cmd_table(c, &specs),
    });
    let written = match &common.out {
        Some(path) => std::fs::write(path, &out.text),
        None => std::io::stdout().lock().write_all(out.text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return 2;
    }
    out.code
}
