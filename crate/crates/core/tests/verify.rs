use std::collections::BTreeSet;
use std::sync::OnceLock;

use wpline::algebra::LambdaSpec;
use wpline::grading::{GradingElement, WeightSequence};
use wpline::verify::*;

fn default_report() -> &'static Report {
    static R: OnceLock<Report> = OnceLock::new();
    R.get_or_init(|| run_suite(&SuiteConfig::default()).expect("valid default"))
}

fn cfg(weights: &[u32], reduced: u32) -> SuiteConfig {
    SuiteConfig {
        weights: WeightSequence::new(weights.to_vec()).unwrap(),
        reduced,
        ..SuiteConfig::default()
    }
}

fn failures(checks: &[CheckReport]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| c.status != Status::Pass)
        .map(|c| format!("{} {:?} {:?}", c.id, c.params, c.detail))
        .collect()
}

fn find<'a>(r: &'a Report, id: &str, degree: &GradingElement) -> &'a CheckReport {
    let d = degree.to_string();
    r.checks
        .iter()
        .find(|c| c.id == id && c.params.get("degree") == Some(&d))
        .unwrap_or_else(|| panic!("{id} at {d} missing"))
}

#[test]
fn default_config_passes_without_skips() {
    let r = default_report();
    assert!(r.summary.total > 0);
    assert_eq!(failures(&r.checks), Vec::<String>::new());
    assert_eq!(r.summary.pass, r.summary.total);
    assert!(r.checklist.iter().all(|e| e.status == "discharged"));
    let ids: BTreeSet<&str> = r.checks.iter().map(|c| c.id.as_str()).collect();
    for id in [
        "i_prime.free_image",
        "i_prime.simple_image",
        "i_lambda.twist",
        "i_rho.cohen_macaulay",
        "adjunction.left.triangles",
        "adjunction.counit_iso",
        "theorem.vanishing",
        "theorem.generation_sequence",
        "theorem.coverage",
    ] {
        assert!(ids.contains(id), "{id} missing");
    }
}

#[test]
fn flagged_findings_in_default_run() {
    let flags: BTreeSet<&str> = default_report()
        .flags
        .iter()
        .map(|f| f.id.as_str())
        .collect();
    for id in [
        "i_rho.exponent",
        "theorem.factor_count",
        "theorem.quotient_shift",
        "theorem.j_definition",
    ] {
        assert!(flags.contains(id), "{id} not flagged");
    }
}

#[test]
fn vanishing_at_x3() {
    let w = WeightSequence::new(vec![2, 3, 5]).unwrap();
    let c = find(default_report(), "theorem.vanishing", &w.x(2));
    assert_eq!(c.status, Status::Pass);
}

#[test]
fn kernel_factors_at_zero() {
    let w = WeightSequence::new(vec![2, 3, 5]).unwrap();
    let c = find(default_report(), "theorem.generation_sequence", &w.zero());
    assert_eq!(c.status, Status::Pass);
    // i′(k′(0)) = S/(x_1, x_2, x_3^4) has dimension 4, k(0) takes one
    assert_eq!(c.witness["factor_count"], 3);
    assert_eq!(c.witness["listed_count"], 4);
    let got: BTreeSet<String> = c.witness["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| {
            assert_eq!(f[1], 1);
            f[0].as_str().unwrap().to_string()
        })
        .collect();
    let want: BTreeSet<String> = (1..=3).map(|j| w.x_multiple(2, -j).to_string()).collect();
    assert_eq!(got, want);
}

#[test]
fn projective_dimension_at_zero() {
    let w = WeightSequence::new(vec![2, 3, 5]).unwrap();
    let c = find(default_report(), "theorem.finite_projdim", &w.zero());
    assert_eq!(c.status, Status::Pass);
    assert_eq!(c.witness["length"], 2);
}

#[test]
fn embedding_lemmas_on_running_configuration() {
    let checks = check_embedding_lemmas(&SuiteConfig::default()).unwrap();
    assert!(!checks.is_empty());
    assert_eq!(failures(&checks), Vec::<String>::new());
    let w = WeightSequence::new(vec![2, 3, 2]).unwrap();
    let sampled: BTreeSet<String> = checks
        .iter()
        .filter(|c| c.id == "i_prime.free_image")
        .filter_map(|c| c.params.get("degree").cloned())
        .collect();
    for l in [w.zero(), w.x(2), w.c()] {
        assert!(sampled.contains(&l.to_string()), "{l} not sampled");
    }
}

#[test]
fn all_twos_with_smallest_reduction() {
    let r = run_suite(&cfg(&[2, 2, 2], 1)).unwrap();
    assert_eq!(failures(&r.checks), Vec::<String>::new());
    assert_eq!(r.summary.skipped, 0);
}

#[test]
fn unreduced_weight_gives_identity_functors() {
    let mut c = cfg(&[2, 2, 3], 3);
    c.suite = Suite::Lemmas;
    let r = run_suite(&c).unwrap();
    assert_eq!(failures(&r.checks), Vec::<String>::new());
    assert!(r
        .checks
        .iter()
        .any(|c| c.id == "embedding.degenerate_identity"));
}

#[test]
fn determinism_for_fixed_seed() {
    let mut c = cfg(&[2, 2, 2], 1);
    c.seed = 7;
    let a = run_suite(&c).unwrap().to_json();
    let b = run_suite(&c).unwrap().to_json();
    assert_eq!(a, b);
}

#[test]
fn repeated_points_are_rejected() {
    let mut c = SuiteConfig::default();
    c.lambda = "[1:0],[1:0],[1:1]".parse::<LambdaSpec>().unwrap();
    let errs = run_suite(&c).unwrap_err();
    assert!(!errs.is_empty());
    assert!(check_adjunctions(&c).is_err());
}

#[test]
fn bad_configurations_list_every_problem() {
    let mut c = cfg(&[2, 3, 5], 6);
    c.window = wpline::grading::HeightWindow { h_min: 3, h_max: 1 };
    let errs = c.validate().unwrap_err();
    assert!(errs.len() >= 2, "{errs:?}");
    assert!(cfg(&[2, 3, 5], 0).validate().is_err());
}

#[test]
fn theorem_suite_needs_three_weights() {
    let mut c = cfg(&[2, 2, 2, 3], 2);
    c.suite = Suite::Theorem;
    assert!(run_suite(&c).is_err());
    c.suite = Suite::All;
    c.samples = SampleMode::Sweep;
    let r = run_suite(&c).unwrap();
    assert_eq!(r.summary.fail, 0);
    assert!(r
        .checks
        .iter()
        .filter(|x| x.id.starts_with("theorem."))
        .all(|x| x.status == Status::Skipped));
}

#[test]
fn text_and_json_agree() {
    let r = default_report();
    let text = r.to_text();
    let parsed: Report = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(&parsed, r);
    for c in &r.checks {
        assert!(text.contains(&c.id));
    }
}

#[test]
fn sweep_configs_enumerate_triples_and_reductions() {
    let base = SuiteConfig::default();
    let cs = sweep_configs(&base, 2, &[vec![2, 3, 5]]);
    // 8 triples over {1, 2} with Σ r = 12 reductions, plus 5 for (2,3,5)
    assert_eq!(cs.len(), 12 + 5);
    assert!(cs.iter().all(|c| c.samples == SampleMode::Sweep));
}
