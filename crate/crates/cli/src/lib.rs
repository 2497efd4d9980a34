//! Command-line front end: build systems, run verification sweeps and
//! simulations, and write JSON or CSV reports.
//!
//! Exit codes: 0 when everything passes, 1 on a verification failure, 2 on a
//! usage or configuration error.

pub mod config;
pub mod report;
pub mod simulate;
pub mod suites;

use std::io::Write;
use std::sync::Arc;

use clap::Parser;
use rayon::prelude::*;
use serde::Serialize;

use rootcert::parabolic::make_datum;
use rootcert::roots::{irreducible_catalogue, RootSystem, WeightTable};
use rootcert::serial::{DatumDoc, SystemDoc, TraceDoc, SCHEMA};

use config::{Cli, Command, Format, RunConfig, Suite};
use report::{BuildEntry, BuildReport, Row, SimulateReport, Status, VerifyReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// A failure to run at all, as opposed to a failed check.
#[derive(Debug)]
pub struct UsageError(pub String);

impl<E: std::fmt::Display> From<E> for UsageError {
    fn from(e: E) -> Self {
        UsageError(e.to_string())
    }
}

type Usage<T> = Result<T, UsageError>;

/// Parse arguments, run, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let outcome = RunConfig::resolve(cli)
        .map_err(UsageError)
        .and_then(|cfg| execute(&cfg));
    match outcome {
        Ok(true) => EXIT_PASS,
        Ok(false) => EXIT_FAILURE,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            EXIT_USAGE
        }
    }
}

/// Run a resolved configuration; `Ok(false)` means some check failed.
pub fn execute(cfg: &RunConfig) -> Usage<bool> {
    match cfg.command {
        Command::Build => cmd_build(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Simulate => cmd_simulate(cfg),
        Command::Replay => cmd_replay(cfg),
    }
}

fn pool(jobs: usize) -> Usage<rayon::ThreadPool> {
    Ok(rayon::ThreadPoolBuilder::new().num_threads(jobs).build()?)
}

fn emit(cfg: &RunConfig, json: &impl Serialize, csv: impl FnOnce(&mut Vec<u8>) -> csv::Result<()>) -> Usage<()> {
    let mut buf = Vec::new();
    match cfg.format {
        Format::Json => {
            serde_json::to_writer_pretty(&mut buf, json)?;
            buf.push(b'\n');
        }
        Format::Csv => csv(&mut buf)?,
    }
    match &cfg.out {
        Some(path) => std::fs::write(path, &buf)
            .map_err(|e| UsageError(format!("cannot write {}: {e}", path.display())))?,
        None => std::io::stdout().lock().write_all(&buf)?,
    }
    Ok(())
}

/// Explicit systems, or the irreducible catalogue up to `cap`.
fn system_names(cfg: &RunConfig, cap: usize) -> Vec<String> {
    match &cfg.systems {
        Some(list) => list.clone(),
        None => irreducible_catalogue(cfg.max_rank.unwrap_or(cap))
            .iter()
            .map(ToString::to_string)
            .collect(),
    }
}

pub fn cmd_build(cfg: &RunConfig) -> Usage<bool> {
    let names = cfg
        .systems
        .clone()
        .ok_or_else(|| UsageError("build needs --system".into()))?;
    let mut systems = Vec::new();
    for name in &names {
        let rs = RootSystem::parse(name).map_err(|e| UsageError(format!("{name}: {e}")))?;
        let wt = WeightTable::new(&rs)?;
        let parabolic = rs
            .all()
            .subsets()
            .map(|s| Ok(DatumDoc::new(&make_datum(&rs, s)?)))
            .collect::<rootcert::Result<Vec<_>>>()?;
        systems.push(BuildEntry {
            system: SystemDoc::new(&rs, &wt),
            parabolic,
        });
    }
    let report = BuildReport {
        schema: SCHEMA,
        command: "build",
        systems,
    };
    emit(cfg, &report, |w| report.write_csv(w))?;
    Ok(true)
}

/// Rows stating whether each control family produced a violation somewhere
/// in the sweep.
fn control_summaries(rows: &[Row]) -> Vec<Row> {
    let controls: Vec<&Row> = rows.iter().filter(|r| r.suite == Suite::Controls.name()).collect();
    if controls.is_empty() {
        return Vec::new();
    }
    suites::CONTROL_FAMILIES
        .iter()
        .map(|family| {
            let hits = controls
                .iter()
                .filter(|r| r.route.split(':').next() == Some(family) && r.status == Status::Expected)
                .count();
            let mut row = Row::new(Suite::Controls.name(), "*", format!("{family}:summary"), "hypotheses-necessary");
            row.detail = Some(format!("{hits} violating configurations"));
            row.status = if hits > 0 { Status::Pass } else { Status::Fail };
            row
        })
        .collect()
}

pub fn cmd_verify(cfg: &RunConfig) -> Usage<bool> {
    let mut tasks = Vec::new();
    for &suite in &cfg.suites {
        for name in system_names(cfg, suite.default_cap()) {
            tasks.push((suite, name));
        }
    }
    // parse up front so that a bad spec is a usage error
    let mut targets = std::collections::BTreeMap::new();
    for (_, name) in &tasks {
        if !targets.contains_key(name) {
            let t = suites::Target::new(name).map_err(|e| UsageError(format!("{name}: {e}")))?;
            targets.insert(name.clone(), t);
        }
    }
    let mut rows: Vec<Row> = pool(cfg.jobs)?.install(|| {
        tasks
            .par_iter()
            .map(|(suite, name)| suites::run_suite(*suite, &targets[name], cfg.max_subset, cfg.seed))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    rows.extend(control_summaries(&rows));
    let report = VerifyReport::new(cfg.suites.iter().map(|s| s.name()).collect(), rows);
    emit(cfg, &report, |w| report.write_csv(w))?;
    if let Some(f) = &report.first_failure {
        eprintln!("first failure: {f}");
    }
    Ok(report.summary.failed == 0)
}

pub fn cmd_simulate(cfg: &RunConfig) -> Usage<bool> {
    let mut jobs = Vec::new();
    for name in system_names(cfg, 2) {
        let rs = Arc::new(RootSystem::parse(&name).map_err(|e| UsageError(format!("{name}: {e}")))?);
        for sel in simulate::selections_for(&rs, cfg.selections.as_deref()).map_err(UsageError)? {
            jobs.push((rs.clone(), sel));
        }
    }
    let seeds = cfg.seed..cfg.seed + cfg.seeds;
    let traces = pool(cfg.jobs)?.install(|| {
        jobs.par_iter()
            .map(|(rs, sel)| simulate::simulate_selection(rs, sel, seeds.clone(), cfg.horizon))
            .collect::<Vec<_>>()
            .into_iter()
            .flatten()
            .collect()
    });
    let report = SimulateReport::new("simulate", cfg.horizon, traces);
    emit(cfg, &report, |w| report.write_csv(w))?;
    if let Some(f) = &report.first_failure {
        eprintln!("first failure: {f}");
    }
    Ok(report.summary.failed == 0)
}

pub fn cmd_replay(cfg: &RunConfig) -> Usage<bool> {
    let path = cfg.trace.as_ref().expect("checked by RunConfig");
    let text = std::fs::read_to_string(path)
        .map_err(|e| UsageError(format!("cannot read {}: {e}", path.display())))?;
    let doc: TraceDoc = serde_json::from_str(&text)?;
    let row = match doc.to_trace() {
        Ok((trace, model)) => simulate::trace_row(&model, &trace),
        Err(e) => {
            let mut row = simulate::trace_row_for_error(&doc, &e);
            row.trace = Some(doc.clone());
            row
        }
    };
    let report = SimulateReport::new("replay", doc.horizon, vec![row]);
    emit(cfg, &report, |w| report.write_csv(w))?;
    if let Some(f) = &report.first_failure {
        eprintln!("first failure: {f}");
    }
    Ok(report.summary.failed == 0)
}

/// Entry point used by the binary.
pub fn main_from_env() -> i32 {
    run(std::env::args_os())
}
