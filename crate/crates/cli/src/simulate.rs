use std::sync::Arc;

use rootcert::roots::RootSystem;
use rootcert::serial::{q, TraceDoc};
use rootcert::sim::{selections, SelectionModel, SimTrace};
use rootcert::Error;

use crate::report::{InductionRow, SeriesRow, Status, TraceRow};

pub const ANCHOR: &str = "root-divergence";

fn blank(system: &str, selection: &[usize], seed: Option<u64>) -> TraceRow {
    TraceRow {
        system: system.to_string(),
        selection: selection.to_vec(),
        seed,
        status: Status::Pass,
        anchor: ANCHOR,
        detail: None,
        n0: None,
        roots: Vec::new(),
        induction: Vec::new(),
        trace: None,
    }
}

/// Check one trace and turn the outcome into a report row.
pub fn trace_row(model: &SelectionModel, trace: &SimTrace) -> TraceRow {
    let system = trace.rs.name();
    let labels: Vec<usize> = trace.selection().iter().map(|a| a + 1).collect();
    let mut row = blank(&system, &labels, trace.seed);
    row.trace = Some(TraceDoc::new(trace, model));
    match model.check_trace(trace) {
        Ok(report) => {
            row.n0 = Some(report.divergence.n0);
            row.roots = report
                .divergence
                .roots
                .iter()
                .map(|r| SeriesRow {
                    level: r.level,
                    root: r.root + 1,
                    slope: r.slope.as_ref().map(q),
                    values: r.values.iter().map(q).collect(),
                })
                .collect();
            row.induction = report
                .induction
                .iter()
                .filter_map(|i| {
                    Some(InductionRow {
                        depth: i.depth,
                        level: i.level?,
                        root: i.root? + 1,
                        branch: i.branch?,
                        checked: i.checked,
                    })
                })
                .collect();
        }
        Err(e) => {
            row.status = Status::Fail;
            row.detail = Some(e.to_string());
        }
    }
    row
}

/// Rows for every seed of one selection; an infeasible selection gives a
/// single row and the run goes on.
pub fn simulate_selection(
    rs: &Arc<RootSystem>,
    selection: &[usize],
    seeds: std::ops::Range<u64>,
    horizon: u64,
) -> Vec<TraceRow> {
    let labels: Vec<usize> = selection.iter().map(|a| a + 1).collect();
    match SelectionModel::new(rs.clone(), selection) {
        Ok(model) => seeds
            .map(|seed| trace_row(&model, &model.sample(seed, horizon)))
            .collect(),
        Err(e) => {
            let mut row = blank(&rs.name(), &labels, None);
            row.status = match e {
                Error::InfeasibleSelection { .. } => Status::Infeasible,
                _ => Status::Fail,
            };
            row.detail = Some(e.to_string());
            vec![row]
        }
    }
}

/// 0-based selections to run on `rs`: the given 1-based ones, or all.
pub fn selections_for(rs: &RootSystem, given: Option<&[Vec<usize>]>) -> Result<Vec<Vec<usize>>, String> {
    match given {
        None => Ok(selections(rs.rank(), rs.rank())),
        Some(list) => list
            .iter()
            .map(|s| {
                if s.iter().any(|&l| l == 0 || l > rs.rank()) {
                    return Err(format!("selection {s:?} is out of range for {}", rs.name()));
                }
                let zero: Vec<usize> = s.iter().map(|l| l - 1).collect();
                let mut sorted = zero.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() != zero.len() {
                    return Err(format!("selection {s:?} repeats a root"));
                }
                Ok(zero)
            })
            .collect(),
    }
}

/// A failing row for a trace document that could not be rebuilt.
pub fn trace_row_for_error(doc: &TraceDoc, e: &Error) -> TraceRow {
    let mut row = blank(&doc.system, &doc.selection, doc.seed);
    row.status = Status::Fail;
    row.detail = Some(e.to_string());
    row
}
