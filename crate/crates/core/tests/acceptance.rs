//! One PASS/FAIL line per acceptance criterion.

use std::sync::Arc;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use wpline::algebra::{AlgebraSpec, Generator, LambdaSpec};
use wpline::grading::{GradingElement, HeightWindow, WeightSequence};
use wpline::linalg::Field;
use wpline::module::{free_module, is_cohen_macaulay, simple_module};
use wpline::verify::{
    run_suite, run_sweep, sweep_configs, Report, Status, SuiteConfig, SweepReport,
};

const NORMAL_FORM_LIMIT: Duration = Duration::from_secs(1);
const ALGEBRA_LIMIT: Duration = Duration::from_secs(5);
const CM_LIMIT: Duration = Duration::from_secs(10);
const SWEEP_LIMIT: Duration = Duration::from_secs(300);
const NORMAL_FORM_TRIALS: usize = 10_000;
const MIN_PAIRS: usize = 10;
const CM_SAMPLES: usize = 10;

struct Line {
    n: u32,
    ok: bool,
    text: String,
}

fn line(n: u32, ok: bool, text: impl Into<String>) -> Line {
    let l = Line {
        n,
        ok,
        text: text.into(),
    };
    println!(
        "{} criterion {}: {}",
        if l.ok { "PASS" } else { "FAIL" },
        l.n,
        l.text
    );
    l
}

fn w235() -> WeightSequence {
    WeightSequence::new(vec![2, 3, 5]).unwrap()
}

fn random_element(w: &WeightSequence, rng: &mut ChaCha8Rng, heights: (i64, i64)) -> GradingElement {
    let t: Vec<u32> = (0..w.len())
        .map(|i| rng.gen_range(0..w.weight(i)))
        .collect();
    w.element(&t, rng.gen_range(heights.0..=heights.1)).unwrap()
}

fn normal_forms() -> Line {
    let w = w235();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let mut bad = 0;
    for _ in 0..NORMAL_FORM_TRIALS {
        let a = random_element(&w, &mut rng, (-50, 50));
        let b = random_element(&w, &mut rng, (-50, 50));
        let c = random_element(&w, &mut rng, (-50, 50));
        if w.add(&w.add(&a, &b), &c) != w.add(&a, &w.add(&b, &c))
            || w.add(&a, &w.neg(&a)) != w.zero()
        {
            bad += 1;
        }
    }
    let mut counts_ok = true;
    for (lo, hi) in [(0, 0), (-3, 6), (-7, 2)] {
        let n = w.enumerate_window(HeightWindow::new(lo, hi).unwrap()).len();
        counts_ok &= n == 30 * (hi - lo + 1) as usize;
    }
    let t = start.elapsed();
    line(
        1,
        bad == 0 && counts_ok && t < NORMAL_FORM_LIMIT,
        format!("{NORMAL_FORM_TRIALS} normal-form checks, {bad} bad, window counts ok={counts_ok}, {t:.2?}"),
    )
}

fn algebra_consistency() -> Line {
    let start = Instant::now();
    let s = AlgebraSpec::new(w235(), &LambdaSpec::Auto, Field::Rational).unwrap();
    let w = s.weights().clone();
    let gens: Vec<Generator> = s.generators().collect();
    let mut bad = 0;
    let mut degrees = 0;
    for l in w.enumerate_window(HeightWindow::new(-3, 6).unwrap()) {
        degrees += 1;
        if s.component_dim(&l) != (l.height() + 1).max(0) as usize {
            bad += 1;
        }
        for &g in &gens {
            for &h in &gens {
                let gh = s
                    .generator_action(g, &s.shifted_by(&l, h))
                    .mul(&s.generator_action(h, &l));
                let hg = s
                    .generator_action(h, &s.shifted_by(&l, g))
                    .mul(&s.generator_action(g, &l));
                if gh != hg {
                    bad += 1;
                }
            }
        }
        for i in 0..w.len() {
            let p = &s.lambda()[i];
            let lhs = s.power_action(Generator::X(i), w.weight(i), &l);
            let rhs = s
                .generator_action(Generator::V, &l)
                .scale(&p.x0)
                .sub(&s.generator_action(Generator::U, &l).scale(&p.x1));
            if lhs != rhs {
                bad += 1;
            }
        }
    }
    let t = start.elapsed();
    line(
        2,
        bad == 0 && t < ALGEBRA_LIMIT,
        format!("{degrees} degrees, {bad} violated identities, {t:.2?}"),
    )
}

fn cohen_macaulay() -> Line {
    let start = Instant::now();
    let alg = Arc::new(AlgebraSpec::new(w235(), &LambdaSpec::Auto, Field::Rational).unwrap());
    let w = alg.weights().clone();
    let window = HeightWindow::new(-3, 6).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut frees_ok = 0;
    let mut simples_ok = 0;
    for _ in 0..CM_SAMPLES {
        // the generator of S(l) sits at −l, above the bottom row for these heights
        let l = random_element(&w, &mut rng, (-4, -1));
        let cert = is_cohen_macaulay(&free_module(alg.clone(), &[l], window)).unwrap();
        if cert.is_cohen_macaulay && cert.obstructions.is_empty() {
            frees_ok += 1;
        }
        let l = random_element(&w, &mut rng, (-4, -1));
        let cert = is_cohen_macaulay(&simple_module(alg.clone(), &l, window)).unwrap();
        if !cert.is_cohen_macaulay && !cert.obstructions.is_empty() {
            simples_ok += 1;
        }
    }
    let t = start.elapsed();
    line(
        3,
        frees_ok == CM_SAMPLES && simples_ok == CM_SAMPLES && t < CM_LIMIT,
        format!("frees CM {frees_ok}/{CM_SAMPLES}, simples with Tor obstruction {simples_ok}/{CM_SAMPLES}, {t:.2?}"),
    )
}

fn count(r: &Report, prefix: &str, status: Status) -> usize {
    r.checks
        .iter()
        .filter(|c| c.id.starts_with(prefix) && c.status == status)
        .count()
}

fn lemma_sweep(sweep: &SweepReport, t: Duration) -> Line {
    let lemma_prefixes = ["i_prime.", "i_lambda.", "i_rho.", "embedding."];
    let mut fails = 0;
    let mut skips = 0;
    let mut passes = 0;
    for r in &sweep.reports {
        for p in lemma_prefixes {
            fails += count(r, p, Status::Fail);
            skips += count(r, p, Status::Skipped);
            passes += count(r, p, Status::Pass);
        }
    }
    line(
        4,
        fails == 0 && skips == 0 && passes > 0 && t < SWEEP_LIMIT,
        format!(
            "{} configurations, lemma checks {passes} pass / {fails} fail / {skips} skipped, sweep {t:.1?}",
            sweep.configs
        ),
    )
}

fn adjunctions(sweep: &SweepReport) -> Line {
    let mut min_pairs = usize::MAX;
    let mut fails = 0;
    let mut skips = 0;
    for r in &sweep.reports {
        let left = count(r, "adjunction.left.hom_dims", Status::Pass);
        let right = count(r, "adjunction.right.hom_dims", Status::Pass);
        min_pairs = min_pairs.min(left).min(right);
        fails += count(r, "adjunction.", Status::Fail);
        skips += count(r, "adjunction.", Status::Skipped);
    }
    let counits: usize = sweep
        .reports
        .iter()
        .map(|r| count(r, "adjunction.counit_iso", Status::Pass))
        .sum();
    line(
        5,
        min_pairs >= MIN_PAIRS && fails == 0 && skips == 0 && counits > 0,
        format!("at least {min_pairs} pairs per configuration, {fails} failures, {skips} skipped, {counits} counit isomorphisms"),
    )
}

fn theorem(sweep: &SweepReport) -> Line {
    let mut fails = 0;
    let mut skips = 0;
    let mut vanishing = 0;
    let mut quotient = 0;
    let mut sequences = 0;
    for r in &sweep.reports {
        fails += count(r, "theorem.", Status::Fail);
        skips += count(r, "theorem.", Status::Skipped);
        vanishing += count(r, "theorem.vanishing", Status::Pass);
        quotient += count(r, "theorem.finite_projdim", Status::Pass);
        sequences += count(r, "theorem.generation_sequence", Status::Pass);
    }
    let recorded = sweep.flags.iter().any(|f| f.id == "theorem.factor_count");
    line(
        6,
        fails == 0 && skips == 0 && vanishing > 0 && quotient > 0 && sequences > 0 && recorded,
        format!(
            "vanishing {vanishing}, projective dimension {quotient}, sequences {sequences} pass; {fails} failures; factor count recorded={recorded}"
        ),
    )
}

fn degenerate(sweep: &SweepReport) -> Line {
    let mut pass = 0;
    let mut other = 0;
    let mut configs = 0;
    for r in &sweep.reports {
        let p = count(r, "embedding.degenerate_identity", Status::Pass);
        let bad = count(r, "embedding.degenerate_identity", Status::Fail)
            + count(r, "embedding.degenerate_identity", Status::Skipped);
        let full = r.config.get("weights").and_then(|w| {
            w.trim_end_matches(')')
                .rsplit(',')
                .next()
                .map(str::to_string)
        });
        if full.as_deref() == r.config.get("reduced").map(String::as_str) {
            configs += 1;
            if p == 0 {
                other += 1;
            }
        }
        pass += p;
        other += bad;
    }
    line(
        7,
        configs > 0 && pass > 0 && other == 0,
        format!(
            "{configs} configurations with r′ = r, {pass} identity checks pass, {other} problems"
        ),
    )
}

fn determinism() -> Line {
    let cfg = SuiteConfig::default();
    let a = run_suite(&cfg).unwrap().to_json();
    let b = run_suite(&cfg).unwrap().to_json();
    line(
        8,
        a == b,
        format!(
            "two default runs, {} bytes each, identical={}",
            a.len(),
            a == b
        ),
    )
}

fn main() {
    let mut lines = vec![normal_forms(), algebra_consistency(), cohen_macaulay()];
    let configs = sweep_configs(&SuiteConfig::default(), 4, &[vec![2, 3, 5]]);
    let start = Instant::now();
    let sweep = run_sweep(&configs).expect("sweep configurations are valid");
    let t = start.elapsed();
    lines.push(lemma_sweep(&sweep, t));
    lines.push(adjunctions(&sweep));
    lines.push(theorem(&sweep));
    lines.push(degenerate(&sweep));
    lines.push(determinism());
    let failed: Vec<u32> = lines.iter().filter(|l| !l.ok).map(|l| l.n).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
