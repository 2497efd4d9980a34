use std::io::Write;

use serde::Serialize;

use rootcert::serial::{CertificateDoc, DatumDoc, SystemDoc, TraceDoc, SCHEMA};
use rootcert::sim::Branch;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// A violation that the experiment is designed to produce
    Expected,
    /// No violation in a configuration where one was allowed
    NotViolated,
    Skipped,
    Infeasible,
}

impl Status {
    pub fn is_failure(self) -> bool {
        matches!(self, Status::Fail | Status::Infeasible)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Expected => "expected",
            Status::NotViolated => "not_violated",
            Status::Skipped => "skipped",
            Status::Infeasible => "infeasible",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Row {
    pub suite: &'static str,
    pub system: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<usize>,
    #[serde(rename = "subset_I", skip_serializing_if = "Option::is_none")]
    pub subset_i: Option<Vec<usize>>,
    pub route: String,
    pub status: Status,
    pub anchor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<CertificateDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ray: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coefficients: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// seconds
    pub wall_time: f64,
}

impl Row {
    pub fn new(suite: &'static str, system: &str, route: impl Into<String>, anchor: &'static str) -> Self {
        Row {
            suite,
            system: system.to_string(),
            alpha: None,
            subset_i: None,
            route: route.into(),
            status: Status::Pass,
            anchor,
            certificate: None,
            ray: None,
            coefficients: None,
            detail: None,
            wall_time: 0.0,
        }
    }

    pub fn describe(&self) -> String {
        let mut s = format!("{} {} {}", self.suite, self.system, self.route);
        if let Some(a) = self.alpha {
            s += &format!(" alpha={a}");
        }
        if let Some(i) = &self.subset_i {
            s += &format!(" I={i:?}");
        }
        if let Some(d) = &self.detail {
            s += &format!(": {d}");
        }
        s
    }
}

#[derive(Clone, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub expected: usize,
    pub other: usize,
}

impl Summary {
    pub fn of(statuses: impl Iterator<Item = Status>) -> Self {
        let mut s = Summary::default();
        for st in statuses {
            s.total += 1;
            match st {
                Status::Pass => s.passed += 1,
                Status::Expected => s.expected += 1,
                st if st.is_failure() => s.failed += 1,
                _ => s.other += 1,
            }
        }
        s
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub command: &'static str,
    pub suites: Vec<&'static str>,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub rows: Vec<Row>,
}

impl VerifyReport {
    pub fn new(suites: Vec<&'static str>, rows: Vec<Row>) -> Self {
        VerifyReport {
            schema: SCHEMA,
            command: "verify",
            suites,
            summary: Summary::of(rows.iter().map(|r| r.status)),
            first_failure: rows
                .iter()
                .find(|r| r.status.is_failure())
                .map(Row::describe),
            rows,
        }
    }

    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "suite", "system", "alpha", "subset_I", "route", "status", "anchor", "detail", "wall_time",
        ])?;
        for r in &self.rows {
            out.write_record([
                r.suite.to_string(),
                r.system.clone(),
                r.alpha.map(|a| a.to_string()).unwrap_or_default(),
                r.subset_i.as_ref().map(|s| join(s)).unwrap_or_default(),
                r.route.clone(),
                r.status.as_str().to_string(),
                r.anchor.to_string(),
                r.detail.clone().unwrap_or_default(),
                format!("{:.6}", r.wall_time),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

pub fn join(xs: &[usize]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildEntry {
    #[serde(flatten)]
    pub system: SystemDoc,
    pub parabolic: Vec<DatumDoc>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BuildReport {
    pub schema: u32,
    pub command: &'static str,
    pub systems: Vec<BuildEntry>,
}

impl BuildReport {
    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["system", "root", "d", "dual_weight", "weighted"])?;
        for e in &self.systems {
            let s = &e.system;
            for a in 0..s.rank {
                out.write_record([
                    s.system.clone(),
                    (a + 1).to_string(),
                    s.d[a].clone(),
                    s.dual_gramm[a].join(" "),
                    s.weighted[a].join(" "),
                ])?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SeriesRow {
    pub level: usize,
    pub root: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub slope: Option<String>,
    pub values: Vec<String>,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct InductionRow {
    pub depth: usize,
    pub level: usize,
    pub root: usize,
    pub branch: Branch,
    pub checked: u64,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct TraceRow {
    pub system: String,
    pub selection: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub status: Status,
    pub anchor: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n0: Option<u64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub roots: Vec<SeriesRow>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub induction: Vec<InductionRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceDoc>,
}

impl TraceRow {
    pub fn describe(&self) -> String {
        let mut s = format!("{} selection {:?}", self.system, self.selection);
        if let Some(seed) = self.seed {
            s += &format!(" seed {seed}");
        }
        if let Some(d) = &self.detail {
            s += &format!(": {d}");
        }
        s
    }
}

/// Simulation report; contains no timings so that it is reproducible byte
/// for byte.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SimulateReport {
    pub schema: u32,
    pub command: &'static str,
    pub horizon: u64,
    pub summary: Summary,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<String>,
    pub traces: Vec<TraceRow>,
}

impl SimulateReport {
    pub fn new(command: &'static str, horizon: u64, traces: Vec<TraceRow>) -> Self {
        SimulateReport {
            schema: SCHEMA,
            command,
            horizon,
            summary: Summary::of(traces.iter().map(|t| t.status)),
            first_failure: traces
                .iter()
                .find(|t| t.status.is_failure())
                .map(TraceRow::describe),
            traces,
        }
    }

    /// One record per time index and selected root.
    pub fn write_csv(&self, w: impl Write) -> csv::Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record([
            "system", "selection", "seed", "status", "n0", "level", "root", "slope", "n", "value",
        ])?;
        for t in &self.traces {
            let head = [
                t.system.clone(),
                join(&t.selection),
                t.seed.map(|s| s.to_string()).unwrap_or_default(),
                t.status.as_str().to_string(),
                t.n0.map(|n| n.to_string()).unwrap_or_default(),
            ];
            for r in &t.roots {
                for (n, v) in r.values.iter().enumerate() {
                    let mut rec = head.to_vec();
                    rec.extend([
                        r.level.to_string(),
                        r.root.to_string(),
                        r.slope.clone().unwrap_or_default(),
                        (n + 1).to_string(),
                        v.clone(),
                    ]);
                    out.write_record(&rec)?;
                }
            }
        }
        out.flush()?;
        Ok(())
    }
}
