//! Check suites turning the functor identities and the recollement proof
//! obligations into pass/fail records with re-verifiable witnesses.

mod adjoint;
mod lemmas;
mod report;
mod samples;
mod theorem;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::algebra::{AlgebraError, AlgebraSpec, LambdaSpec};
use crate::functor::FunctorError;
use crate::grading::{Embedding, HeightWindow, WeightSequence};
use crate::linalg::Field;
use crate::module::ModuleError;

pub use report::{
    render_text, CheckReport, ChecklistEntry, Flag, Report, Status, Summary, SweepReport,
};
pub use samples::SampleMode;

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Lemmas,
    Adjunction,
    Theorem,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Lemmas => "lemmas",
            Suite::Adjunction => "adjunction",
            Suite::Theorem => "theorem",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lemmas" => Ok(Suite::Lemmas),
            "adjunction" => Ok(Suite::Adjunction),
            "theorem" => Ok(Suite::Theorem),
            "all" => Ok(Suite::All),
            _ => Err(ConfigError::UnknownSuite(s.to_string())),
        }
    }
}

/// A violated configuration constraint.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("need at least three weights, got {0}")]
    TooFewWeights(usize),
    #[error("reduced weight {reduced} exceeds the last weight {weight}")]
    ReducedTooLarge { reduced: u32, weight: u32 },
    #[error("reduced weight must be positive")]
    ReducedZero,
    #[error("window [{0}, {1}] is empty")]
    EmptyWindow(i64, i64),
    #[error("theorem suite needs exactly three weights, got {0}")]
    TheoremNeedsThree(usize),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

/// Everything a suite run depends on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub weights: WeightSequence,
    pub reduced: u32,
    pub lambda: LambdaSpec,
    pub field: Field,
    pub window: HeightWindow,
    pub suite: Suite,
    pub seed: u64,
    pub samples: SampleMode,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            weights: WeightSequence::new(vec![2, 3, 5]).expect("valid"),
            reduced: 2,
            lambda: LambdaSpec::Auto,
            field: Field::Rational,
            window: HeightWindow {
                h_min: -3,
                h_max: 6,
            },
            suite: Suite::All,
            seed: 0,
            samples: SampleMode::Full,
        }
    }
}

impl SuiteConfig {
    /// Checks every constraint and reports all violations at once.
    pub fn validate(&self) -> Result<Arc<AlgebraSpec>, Vec<ConfigError>> {
        let mut errs = Vec::new();
        let n = self.weights.len();
        if n < 3 {
            errs.push(ConfigError::TooFewWeights(n));
        }
        let last = self.weights.weight(n - 1);
        if self.reduced == 0 {
            errs.push(ConfigError::ReducedZero);
        } else if self.reduced > last {
            errs.push(ConfigError::ReducedTooLarge {
                reduced: self.reduced,
                weight: last,
            });
        }
        if self.window.is_empty() {
            errs.push(ConfigError::EmptyWindow(
                self.window.h_min,
                self.window.h_max,
            ));
        }
        if self.suite == Suite::Theorem && n != 3 {
            errs.push(ConfigError::TheoremNeedsThree(n));
        }
        let alg = AlgebraSpec::new(self.weights.clone(), &self.lambda, self.field);
        match alg {
            Ok(a) if errs.is_empty() => Ok(Arc::new(a)),
            Ok(_) => Err(errs),
            Err(e) => {
                errs.push(e.into());
                Err(errs)
            }
        }
    }

    /// `p″` for the lowered last weight.
    pub fn double_weights(&self) -> WeightSequence {
        let n = self.weights.len();
        let p = self.weights.weight(n - 1);
        self.weights
            .with_weight(n - 1, p + 1 - self.reduced)
            .expect("positive weight")
    }

    fn describe(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("weights".into(), self.weights.to_string());
        m.insert("reduced".into(), self.reduced.to_string());
        m.insert("lambda".into(), self.lambda.to_string());
        m.insert("field".into(), self.field.to_string());
        m.insert("window".into(), self.window.to_string());
        m.insert("suite".into(), self.suite.to_string());
        m.insert("seed".into(), self.seed.to_string());
        m.insert("samples".into(), self.samples.to_string());
        m
    }
}

/// Outcome of one check body.
pub(crate) enum Outcome {
    Pass(Value),
    Fail(Value, String),
}

impl Outcome {
    pub(crate) fn from_bool(ok: bool, witness: Value, why: impl Into<String>) -> Self {
        if ok {
            Outcome::Pass(witness)
        } else {
            Outcome::Fail(witness, why.into())
        }
    }
}

/// Shared state while a suite runs.
pub(crate) struct Ctx {
    pub(crate) cfg: SuiteConfig,
    pub(crate) alg: Arc<AlgebraSpec>,
    pub(crate) emb: Embedding,
    pub(crate) reduced_alg: Arc<AlgebraSpec>,
    pub(crate) rec: Recorder,
}

/// Collected checks and flags.
#[derive(Default)]
pub(crate) struct Recorder {
    checks: Vec<CheckReport>,
    flags: BTreeMap<String, Flag>,
}

impl Ctx {
    pub(crate) fn new(cfg: SuiteConfig, alg: Arc<AlgebraSpec>) -> Self {
        let n = cfg.weights.len();
        let emb = Embedding::new(cfg.weights.clone(), n - 1, cfg.reduced).expect("validated");
        let reduced_alg = Arc::new(alg.with_weights(emb.source().clone()));
        Ctx {
            cfg,
            alg,
            emb,
            reduced_alg,
            rec: Recorder::default(),
        }
    }

    pub(crate) fn params(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("weights".into(), self.cfg.weights.to_string());
        m.insert("reduced".into(), self.cfg.reduced.to_string());
        m
    }

    fn finish(self) -> Report {
        let checklist = report::checklist(&self.rec.checks);
        Report::new(
            self.cfg.describe(),
            self.rec.checks,
            self.rec.flags.into_values().collect(),
            checklist,
        )
    }
}

impl Recorder {
    /// Runs a check body, mapping window shortfalls to skips and other errors to failures.
    pub(crate) fn record(
        &mut self,
        id: &str,
        anchor: &str,
        params: BTreeMap<String, String>,
        body: impl FnOnce() -> Result<Outcome, FunctorError>,
    ) -> Status {
        let (status, witness, detail) = match body() {
            Ok(Outcome::Pass(w)) => (Status::Pass, w, None),
            Ok(Outcome::Fail(w, why)) => (Status::Fail, w, Some(why)),
            Err(FunctorError::Module(ModuleError::InsufficientWindow { op, detail })) => (
                Status::Skipped,
                Value::Null,
                Some(format!("insufficient window for {op}: {detail}")),
            ),
            Err(FunctorError::NeedsThreeWeights(n)) => (
                Status::Skipped,
                Value::Null,
                Some(format!("needs three weights, got {n}")),
            ),
            Err(e) => (Status::Fail, Value::Null, Some(e.to_string())),
        };
        self.checks.push(CheckReport {
            id: id.to_string(),
            anchor: anchor.to_string(),
            params,
            status,
            witness,
            detail,
        });
        status
    }

    pub(crate) fn flag(&mut self, id: &str, statement: &str, finding: String) {
        self.flags.entry(id.to_string()).or_insert_with(|| Flag {
            id: id.to_string(),
            statement: statement.to_string(),
            finding,
        });
    }
}

fn run_with(cfg: &SuiteConfig, body: impl FnOnce(&mut Ctx)) -> Result<Report, Vec<ConfigError>> {
    let alg = cfg.validate()?;
    let mut ctx = Ctx::new(cfg.clone(), alg);
    body(&mut ctx);
    Ok(ctx.finish())
}

/// Checks for `i′`: free and simple images, twists, CM preservation, exactness.
pub fn check_embedding_lemmas(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, Vec<ConfigError>> {
    run_with(cfg, lemmas::embedding_lemmas).map(|r| r.checks)
}

/// Checks for `i′_λ`.
pub fn check_left_adjoint_lemmas(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, Vec<ConfigError>> {
    run_with(cfg, lemmas::left_adjoint_lemmas).map(|r| r.checks)
}

/// Checks for `i′_ρ`.
pub fn check_right_adjoint_lemmas(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, Vec<ConfigError>> {
    run_with(cfg, lemmas::right_adjoint_lemmas).map(|r| r.checks)
}

/// Both adjunctions on seeded module pairs.
pub fn check_adjunctions(cfg: &SuiteConfig) -> Result<Vec<CheckReport>, Vec<ConfigError>> {
    run_with(cfg, |ctx| {
        adjoint::left_adjunction(ctx);
        adjoint::right_adjunction(ctx);
    })
    .map(|r| r.checks)
}

/// The recollement obligations; needs three weights.
pub fn check_recollement_obligations(cfg: &SuiteConfig) -> Result<Report, Vec<ConfigError>> {
    if cfg.weights.len() != 3 {
        return Err(vec![ConfigError::TheoremNeedsThree(cfg.weights.len())]);
    }
    run_with(cfg, theorem::recollement_obligations)
}

/// Runs the configured suites. Fails only on configuration errors.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Report, Vec<ConfigError>> {
    run_with(cfg, |ctx| {
        if cfg.suite.includes(Suite::Lemmas) {
            lemmas::embedding_lemmas(ctx);
            lemmas::left_adjoint_lemmas(ctx);
            lemmas::right_adjoint_lemmas(ctx);
        }
        if cfg.suite.includes(Suite::Adjunction) {
            adjoint::left_adjunction(ctx);
            adjoint::right_adjunction(ctx);
        }
        if cfg.suite.includes(Suite::Theorem) {
            if cfg.weights.len() == 3 {
                theorem::recollement_obligations(ctx);
            } else {
                let p = ctx.params();
                ctx.rec.record("theorem", "three weights", p, || {
                    Err(FunctorError::NeedsThreeWeights(cfg.weights.len()))
                });
            }
        }
    })
}

/// Every ordered weight triple with entries in `1..=max`, plus `extra`,
/// each with every reduced weight.
pub fn sweep_configs(base: &SuiteConfig, max: u32, extra: &[Vec<u32>]) -> Vec<SuiteConfig> {
    let mut triples: Vec<Vec<u32>> = Vec::new();
    for a in 1..=max {
        for b in 1..=max {
            for c in 1..=max {
                triples.push(vec![a, b, c]);
            }
        }
    }
    for e in extra {
        if !triples.contains(e) {
            triples.push(e.clone());
        }
    }
    let mut out = Vec::new();
    for t in triples {
        let r = *t.last().expect("three weights");
        for reduced in 1..=r {
            out.push(SuiteConfig {
                weights: WeightSequence::new(t.clone()).expect("positive"),
                reduced,
                samples: SampleMode::Sweep,
                ..base.clone()
            });
        }
    }
    out
}

/// Runs every configuration and aggregates the reports.
pub fn run_sweep(configs: &[SuiteConfig]) -> Result<SweepReport, Vec<ConfigError>> {
    let mut reports = Vec::with_capacity(configs.len());
    for c in configs {
        reports.push(run_suite(c)?);
    }
    Ok(SweepReport::new(reports))
}

pub(crate) fn dims_json(m: &crate::module::WindowedModule) -> Value {
    let support: BTreeMap<String, usize> = m
        .support()
        .into_iter()
        .map(|(d, k)| (d.to_string(), k))
        .collect();
    json!(support)
}
