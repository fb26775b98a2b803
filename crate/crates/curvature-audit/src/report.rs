//! Scan reports: per-point records plus a recomputable summary, emitted
//! as JSON (fixed key order) or CSV (one row per point-check pair).

use crate::scene::{OutputFormat, Scene};
use crate::spectrum::PointInvariants;
use crate::verifiers::{CheckResult, Verdict};
use serde::Serialize;
use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

#[derive(Debug, Clone, Serialize)]
pub struct PointRecord {
    /// Lexicographic grid index (chart mode) or spectrum list index.
    pub index: usize,
    /// Parameter point (chart mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    /// Ambient position sigma(u) (chart mode only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub position: Option<Vec<f64>>,
    pub lambdas: Vec<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub invariants: Option<PointInvariants>,
    pub checks: Vec<CheckResult>,
    /// |delta_fast - delta_oracle| for t = (2), when oracle validation
    /// is enabled.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle_gap: Option<f64>,
    /// Geometry error at this point; the point carries no other data.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct CheckCounts {
    pub holds: usize,
    pub fails: usize,
    pub equality: usize,
    pub not_applicable: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlackExtreme {
    pub min_slack: f64,
    pub point_index: usize,
    /// Full check name (with any sub-check suffix) attaining the minimum.
    pub check: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    /// Verdict counts keyed by stable check identifier.
    pub counts: BTreeMap<String, CheckCounts>,
    /// Tightest slack per check identifier, over applicable points.
    pub min_slack: BTreeMap<String, SlackExtreme>,
    /// Scan-level conclusions: CONVEX, OBSTRUCTED, MINIMAL.
    pub global_verdicts: Vec<String>,
    pub error_count: usize,
}

impl Summary {
    pub fn from_records(records: &[PointRecord], global_verdicts: Vec<String>) -> Summary {
        let mut counts: BTreeMap<String, CheckCounts> = BTreeMap::new();
        let mut min_slack: BTreeMap<String, SlackExtreme> = BTreeMap::new();
        let mut error_count = 0;
        for rec in records {
            if rec.error.is_some() {
                error_count += 1;
            }
            for check in &rec.checks {
                let id = check.base_id().to_string();
                let entry = counts.entry(id.clone()).or_default();
                match check.verdict {
                    Verdict::Holds => entry.holds += 1,
                    Verdict::Fails => entry.fails += 1,
                    Verdict::NotApplicable => entry.not_applicable += 1,
                }
                if check.equality {
                    entry.equality += 1;
                }
                if check.slack.is_finite() {
                    let better = min_slack
                        .get(&id)
                        .map(|cur| check.slack < cur.min_slack)
                        .unwrap_or(true);
                    if better {
                        min_slack.insert(
                            id,
                            SlackExtreme {
                                min_slack: check.slack,
                                point_index: rec.index,
                                check: check.name.clone(),
                            },
                        );
                    }
                }
            }
        }
        Summary {
            counts,
            min_slack,
            global_verdicts,
            error_count,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool_version: String,
    pub seed: u64,
    /// Normalized scene echo for reproducibility.
    pub scene: Scene,
    pub points: Vec<PointRecord>,
    pub summary: Summary,
}

impl Report {
    /// True when some non-informational check failed: a theorem
    /// violation, which means an implementation bug somewhere.
    pub fn any_violation(&self) -> bool {
        self.points.iter().any(|p| {
            p.checks
                .iter()
                .any(|c| c.verdict == Verdict::Fails && !c.informational)
        })
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// One row per (point, check); errored points contribute no rows.
    /// Column widths are padded to the widest point in the report.
    pub fn to_csv_string(&self) -> String {
        let n_u = self
            .points
            .iter()
            .filter_map(|p| p.u.as_ref().map(Vec::len))
            .max()
            .unwrap_or(0);
        let n_l = self.points.iter().map(|p| p.lambdas.len()).max().unwrap_or(0);
        let mut out = String::from("point_index");
        for i in 0..n_u {
            out.push_str(&format!(",u{i}"));
        }
        for i in 0..n_l {
            out.push_str(&format!(",lambda{i}"));
        }
        out.push_str(",check,lhs,rhs,slack,holds,equality\n");
        for p in &self.points {
            for c in &p.checks {
                out.push_str(&p.index.to_string());
                for i in 0..n_u {
                    out.push(',');
                    if let Some(u) = p.u.as_ref().and_then(|u| u.get(i)) {
                        out.push_str(&format!("{u}"));
                    }
                }
                for i in 0..n_l {
                    out.push(',');
                    if let Some(l) = p.lambdas.get(i) {
                        out.push_str(&format!("{l}"));
                    }
                }
                out.push_str(&format!(
                    ",{},{},{},{},{},{}\n",
                    c.name, c.lhs, c.rhs, c.slack, c.holds(), c.equality
                ));
            }
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json_string(),
            OutputFormat::Csv => self.to_csv_string(),
        }
    }

    pub fn emit(&self, format: OutputFormat, path: Option<&Path>) -> std::io::Result<()> {
        let body = self.render(format);
        match path {
            Some(p) => std::fs::write(p, body),
            None => std::io::stdout().write_all(body.as_bytes()),
        }
    }
}
