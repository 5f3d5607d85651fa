use std::collections::BTreeMap;
use std::fmt::Write;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

/// One executed check with the data needed to re-verify it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub id: String,
    /// The statement being checked, as a formula.
    pub anchor: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub witness: Value,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub detail: Option<String>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub total: usize,
}

impl Summary {
    fn of(checks: &[CheckReport]) -> Self {
        let mut s = Summary::default();
        for c in checks {
            match c.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
            }
        }
        s.total = checks.len();
        s
    }

    fn absorb(&mut self, other: &Summary) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.skipped += other.skipped;
        self.total += other.total;
    }
}

/// A place where the computed behaviour disagrees with the literal statement.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Flag {
    pub id: String,
    pub statement: String,
    pub finding: String,
}

/// A triangulated-level condition and the module-level checks backing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecklistEntry {
    pub condition: String,
    pub statement: String,
    pub discharged_by: Vec<String>,
    pub assumed: Vec<String>,
    /// `discharged`, `incomplete` (some cited check skipped or absent) or `failed`.
    pub status: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub config: BTreeMap<String, String>,
    pub checks: Vec<CheckReport>,
    pub summary: Summary,
    pub flags: Vec<Flag>,
    pub checklist: Vec<ChecklistEntry>,
}

impl Report {
    pub(crate) fn new(
        config: BTreeMap<String, String>,
        checks: Vec<CheckReport>,
        flags: Vec<Flag>,
        checklist: Vec<ChecklistEntry>,
    ) -> Self {
        let summary = Summary::of(&checks);
        Report {
            config,
            checks,
            summary,
            flags,
            checklist,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let cfg: Vec<String> = self
            .config
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        writeln!(out, "config: {}", cfg.join(" ")).ok();
        out.push_str(&render_text(&self.checks));
        if !self.flags.is_empty() {
            writeln!(out, "flags:").ok();
            for f in &self.flags {
                writeln!(out, "  [{}] {}", f.id, f.statement).ok();
                writeln!(out, "      {}", f.finding).ok();
            }
        }
        if !self.checklist.is_empty() {
            writeln!(out, "checklist:").ok();
            for c in &self.checklist {
                writeln!(out, "  {} {}: {}", c.condition, c.status, c.statement).ok();
                writeln!(out, "      checks: {}", c.discharged_by.join(", ")).ok();
                for a in &c.assumed {
                    writeln!(out, "      assumed: {a}").ok();
                }
            }
        }
        let s = self.summary;
        writeln!(
            out,
            "summary: {} pass, {} fail, {} skipped, {} total",
            s.pass, s.fail, s.skipped, s.total
        )
        .ok();
        out
    }
}

/// A table with one line per check.
pub fn render_text(checks: &[CheckReport]) -> String {
    let width = checks.iter().map(|c| c.id.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        let params: Vec<String> = c
            .params
            .iter()
            .filter(|(k, _)| k.as_str() != "weights" && k.as_str() != "reduced")
            .map(|(k, v)| format!("{k}={v}"))
            .collect();
        write!(
            out,
            "{:<7} {:<width$}  {}",
            c.status.as_str(),
            c.id,
            params.join(" ")
        )
        .ok();
        if let Some(d) = &c.detail {
            write!(out, "  ({d})").ok();
        }
        out.push('\n');
    }
    out
}

/// Reports for many configurations with a combined summary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub summary: Summary,
    pub configs: usize,
    pub flags: Vec<Flag>,
    pub reports: Vec<Report>,
}

impl SweepReport {
    pub(crate) fn new(reports: Vec<Report>) -> Self {
        let mut summary = Summary::default();
        let mut flags: BTreeMap<String, Flag> = BTreeMap::new();
        for r in &reports {
            summary.absorb(&r.summary);
            for f in &r.flags {
                flags.entry(f.id.clone()).or_insert_with(|| f.clone());
            }
        }
        SweepReport {
            summary,
            configs: reports.len(),
            flags: flags.into_values().collect(),
            reports,
        }
    }

    pub fn passed(&self) -> bool {
        self.summary.fail == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.reports {
            let s = r.summary;
            let w = r.config.get("weights").map(String::as_str).unwrap_or("?");
            let rp = r.config.get("reduced").map(String::as_str).unwrap_or("?");
            writeln!(
                out,
                "{:<7} weights={w} reduced={rp}  {} pass, {} fail, {} skipped",
                if r.passed() { "pass" } else { "fail" },
                s.pass,
                s.fail,
                s.skipped
            )
            .ok();
            for c in r.checks.iter().filter(|c| c.status == Status::Fail) {
                writeln!(
                    out,
                    "    fail {} {}",
                    c.id,
                    c.detail.as_deref().unwrap_or("")
                )
                .ok();
            }
        }
        for f in &self.flags {
            writeln!(out, "flag [{}] {}", f.id, f.finding).ok();
        }
        let s = self.summary;
        writeln!(
            out,
            "summary: {} configs, {} pass, {} fail, {} skipped, {} total",
            self.configs, s.pass, s.fail, s.skipped, s.total
        )
        .ok();
        out
    }
}

fn entry_status(checks: &[CheckReport], prefixes: &[&str]) -> String {
    let cited: Vec<&CheckReport> = checks
        .iter()
        .filter(|c| prefixes.iter().any(|p| c.id.starts_with(p)))
        .collect();
    if cited.iter().any(|c| c.status == Status::Fail) {
        "failed".into()
    } else if cited.is_empty() || cited.iter().any(|c| c.status == Status::Skipped) {
        "incomplete".into()
    } else {
        "discharged".into()
    }
}

pub(crate) fn checklist(checks: &[CheckReport]) -> Vec<ChecklistEntry> {
    let mk = |condition: &str, statement: &str, by: &[&str], assumed: &[&str]| ChecklistEntry {
        condition: condition.into(),
        statement: statement.into(),
        discharged_by: by.iter().map(|s| s.to_string()).collect(),
        assumed: assumed.iter().map(|s| s.to_string()).collect(),
        status: entry_status(checks, by),
    };
    vec![
        mk(
            "R1",
            "(i′_λ, i′), (i′, i′_ρ), (j″_λ, j″), (j″, j″_ρ) are adjoint pairs",
            &[
                "adjunction.left",
                "adjunction.right",
                "theorem.j_identity",
                "theorem.adjoint_j_rho",
                "theorem.adjoint_j_lambda",
            ],
            &[
                "module-level adjunctions descend to the stable categories of vector bundles",
                "the singularity-category equivalences commute with the six functors and twists",
            ],
        ),
        mk(
            "R2",
            "i′, j″_λ, j″_ρ are fully faithful",
            &["adjunction.counit_iso", "theorem.j_lambda_section"],
            &["a left adjoint with invertible counit has a fully faithful right adjoint, on triangulated level"],
        ),
        mk(
            "R3",
            "Ker j″ = Im i′",
            &[
                "theorem.vanishing",
                "theorem.regular_quotient",
                "theorem.finite_projdim",
                "theorem.generation_sequence",
                "theorem.coverage",
            ],
            &[
                "the singularity category is generated by the images of simples",
                "j″ i′ ≃ 0 and generation by Im i′ ∪ Im j″_λ give the kernel condition",
                "a short exact sequence of modules yields a triangle in the singularity category",
            ],
        ),
    ]
}
