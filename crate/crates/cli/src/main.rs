use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use ckt_core::exactseq::audit::{bott_audit_with, AuditReport};
use ckt_core::exactseq::{bo_smash_group_with, FixtureSet};
use ckt_core::homological::KunnethEngine;
use ckt_core::kmodules::{bu_bzp_group, is_prime, lu_bzp_presentation, realize_degree};
use ckt_core::steenrod::{hom_dim, x_count, Space, Subalgebra};
use ckt_core::verify::{run_all, CriterionResult};
use ckt_core::FgAbelianGroup;

mod render;

use render::{Format, Record};

#[derive(Parser, Debug)]
#[command(name = "ckt", version, about = "Connective K-theory tables for classifying spaces of cyclic groups")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Directory with bo_rp.tbl, bo1_rp.tbl, hz_rp.tbl, smash_printed.tbl (overrides CKT_FIXTURES).
    #[arg(long, global = true, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Debug, Clone, Copy)]
struct Range {
    /// Prime.
    #[arg(long, default_value_t = 2)]
    p: u64,
    /// Largest degree.
    #[arg(long = "max", default_value_t = 40)]
    max: u64,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum SpaceArg {
    Rp,
    Smash,
}

impl From<SpaceArg> for Space {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Rp => Space::Rp,
            SpaceArg::Smash => Space::Smash,
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum AlgArg {
    #[value(name = "B", alias = "b")]
    B,
    #[value(name = "E", alias = "e")]
    E,
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum TheoryArg {
    Bo,
    Bo1,
    Hz,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// lu_n(B Z/p), nonzero degrees only.
    Lu(Range),
    /// bu_n(B Z/p).
    Bu(Range),
    /// bu_n(B Z/p ∧ B Z/p) from the Künneth sequence.
    SmashBu(Range),
    /// Tor against the i-th summand, by internal degree.
    Tor {
        #[command(flatten)]
        range: Range,
        #[arg(long, default_value_t = 1)]
        i: u64,
    },
    /// Dimension of Hom over B or E from mod-2 cohomology to Z/2.
    HomDim {
        #[arg(long, value_enum, default_value_t = AlgArg::B)]
        alg: AlgArg,
        #[arg(long, value_enum, default_value_t = SpaceArg::Smash)]
        space: SpaceArg,
        #[arg(long = "max", default_value_t = 40)]
        max: u64,
    },
    /// Number of pairs (i, j >= 1) with 2i - 1 + 4j - 1 = 2n.
    XCount {
        #[arg(long)]
        n: u64,
    },
    /// The fixture tables for RP^inf.
    BoTables {
        #[arg(long, value_enum, default_value_t = TheoryArg::Bo)]
        theory: TheoryArg,
        #[arg(long = "max", default_value_t = 40)]
        max: u64,
    },
    /// bo_m(RP^inf ∧ RP^inf) from the wedge formula.
    BoSmash {
        #[arg(long = "max", default_value_t = 40)]
        max: u64,
    },
    /// Bott sequence audit; exit 3 when the printed table has errata.
    Audit {
        #[arg(long, value_enum, default_value_t = SpaceArg::Smash)]
        space: SpaceArg,
        #[arg(long = "max", default_value_t = 40)]
        max: u64,
    },
    /// All acceptance criteria; exit 2 if any fails.
    VerifyAll,
}

const EXIT_VERIFY_FAILED: u8 = 2;
const EXIT_FINDINGS: u8 = 3;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let mut out = Vec::new();
    let status = run(&cli, &mut out);
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(&out);
    let _ = stdout.flush();
    match status {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn require_prime(p: u64) -> Result<()> {
    if !is_prime(p) {
        bail!("--p {p} is not prime");
    }
    Ok(())
}

fn group_rows(max: u64, source: &str, mut f: impl FnMut(i64) -> Result<FgAbelianGroup>) -> Result<Vec<Record>> {
    let mut rows = Vec::new();
    for n in 0..=max as i64 {
        let g = f(n)?;
        if !g.is_trivial() {
            rows.push(Record::new(n, &g, source));
        }
    }
    Ok(rows)
}

fn run(cli: &Cli, out: &mut Vec<u8>) -> Result<u8> {
    let fmt = cli.format;
    let fixtures = || FixtureSet::load(cli.fixtures.as_deref()).context("loading fixtures");
    match &cli.command {
        Command::Lu(r) => {
            require_prime(r.p)?;
            let lu = lu_bzp_presentation(r.p, r.max as i64 + 2 * r.p as i64)?;
            let rows = group_rows(r.max, "engine", |n| Ok(realize_degree(&lu, n)?))?;
            render::table(out, fmt, "lu", json!({"p": r.p, "max": r.max}), &rows)?;
        }
        Command::Bu(r) => {
            require_prime(r.p)?;
            let rows = group_rows(r.max, "adams-summands", |n| Ok(bu_bzp_group(r.p, n)))?;
            render::table(out, fmt, "bu", json!({"p": r.p, "max": r.max}), &rows)?;
        }
        Command::SmashBu(r) => {
            require_prime(r.p)?;
            let engine = KunnethEngine::new(r.p, r.max as i64)?;
            let rows = group_rows(r.max, "kunneth", |n| Ok(engine.smash(n)?))?;
            render::table(out, fmt, "smash-bu", json!({"p": r.p, "max": r.max}), &rows)?;
        }
        Command::Tor { range: r, i } => {
            require_prime(r.p)?;
            if *i < 1 || *i >= r.p {
                bail!("--i {i} must lie in 1..={}", r.p - 1);
            }
            let engine = KunnethEngine::new(r.p, r.max as i64)?;
            let rows = group_rows(r.max, "resolution", |n| Ok(engine.lu_tor(*i, n)?))?;
            render::table(out, fmt, "tor", json!({"p": r.p, "i": i, "max": r.max}), &rows)?;
        }
        Command::HomDim { alg, space, max } => {
            let a = match alg {
                AlgArg::B => Subalgebra::B,
                AlgArg::E => Subalgebra::E,
            };
            let rows: Vec<Record> = (0..=*max as i64)
                .map(|i| {
                    let d = hom_dim(a, (*space).into(), i);
                    Record::new(i, &FgAbelianGroup::elementary(2, d), "steenrod")
                })
                .collect();
            let params = json!({"alg": format!("{alg:?}"), "space": Space::from(*space), "max": max});
            render::table(out, fmt, "hom-dim", params, &rows)?;
        }
        Command::XCount { n } => render::scalar(out, fmt, "x-count", json!({"n": n}), "x_count", x_count(*n))?,
        Command::BoTables { theory, max } => {
            let set = fixtures()?;
            let tag = match theory {
                TheoryArg::Bo => "bo",
                TheoryArg::Bo1 => "bo1",
                TheoryArg::Hz => "hz",
            };
            let table = set.table(tag)?;
            let mut rows = Vec::new();
            for m in 0..=*max {
                let (g, row) = table.lookup(m)?;
                rows.push(Record::new(m as i64, &g, &row.citation));
            }
            render::table(out, fmt, "bo-tables", json!({"theory": tag, "max": max}), &rows)?;
        }
        Command::BoSmash { max } => {
            let set = fixtures()?;
            let mut rows = Vec::new();
            for m in 0..=*max {
                rows.push(Record::new(m as i64, &bo_smash_group_with(&set, m)?, "wedge formula over bo1"));
            }
            render::table(out, fmt, "bo-smash", json!({"max": max}), &rows)?;
        }
        Command::Audit { space, max } => {
            let report = bott_audit_with((*space).into(), *max, &fixtures()?)?;
            render_audit(out, fmt, &report)?;
            if !report.baseline_feasible() {
                return Ok(EXIT_VERIFY_FAILED);
            }
            if report.has_findings() {
                return Ok(EXIT_FINDINGS);
            }
        }
        Command::VerifyAll => {
            let results = run_all()?;
            render_criteria(out, fmt, &results)?;
            if results.iter().any(|r| !r.passed) {
                return Ok(EXIT_VERIFY_FAILED);
            }
        }
    }
    Ok(0)
}

fn render_audit(out: &mut Vec<u8>, fmt: Format, report: &AuditReport) -> Result<()> {
    match fmt {
        Format::Text => write!(out, "{report}")?,
        Format::Json => render::json_doc(out, "audit", json!({"space": report.space, "max": report.n_max}), "report", report.to_json())?,
        Format::Csv => {
            let rows: Vec<Record> = report
                .rows
                .iter()
                .map(|r| {
                    let status = serde_json::to_value(&r.status).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
                    Record::new(r.degree as i64, &r.printed, &format!("{status}; computed {}", r.computed))
                })
                .collect();
            render::csv(out, &rows)?;
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct CriterionJson<'a> {
    id: u8,
    name: &'a str,
    passed: bool,
    detail: &'a str,
}

fn render_criteria(out: &mut Vec<u8>, fmt: Format, results: &[CriterionResult]) -> Result<()> {
    match fmt {
        Format::Text => {
            for r in results {
                writeln!(out, "{r}")?;
            }
        }
        Format::Csv => {
            let rows = results.iter().map(|r| vec![r.id.to_string(), r.passed.to_string(), r.name.to_string()]);
            render::csv_rows(out, &["criterion", "passed", "name"], rows)?;
        }
        Format::Json => {
            let list: Vec<Value> = results
                .iter()
                .map(|r| serde_json::to_value(CriterionJson { id: r.id, name: r.name, passed: r.passed, detail: &r.detail }))
                .collect::<Result<_, _>>()?;
            render::json_doc(out, "verify-all", json!({}), "criteria", Value::Array(list))?;
        }
    }
    Ok(())
}
