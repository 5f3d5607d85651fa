use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{AlgebraSpec, Generator};
use crate::functor::FunctorError;
use crate::grading::{GradingElement, HeightWindow, WeightSequence};
use crate::linalg::Scalar;
use crate::module::{
    free_module, generator_images, is_isomorphic_seeded, morphism_from_images, simple_module,
    GradedMorphism, WindowedModule,
};

use super::{dims_json, ConfigError, Outcome};

/// How many degrees each check samples.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SampleMode {
    /// Every torsion class at heights −1, 0, 1.
    Full,
    /// Only the degrees hitting each case of the last coordinate, plus two random ones.
    Sweep,
}

impl fmt::Display for SampleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SampleMode::Full => "full",
            SampleMode::Sweep => "sweep",
        })
    }
}

impl FromStr for SampleMode {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "full" => Ok(SampleMode::Full),
            "sweep" => Ok(SampleMode::Sweep),
            _ => Err(ConfigError::UnknownSuite(s.to_string())),
        }
    }
}

pub(crate) fn rng(seed: u64, tag: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ tag.wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

pub(crate) fn random_degree(
    w: &WeightSequence,
    heights: (i64, i64),
    rng: &mut ChaCha8Rng,
) -> GradingElement {
    let t: Vec<u32> = (0..w.len())
        .map(|i| rng.gen_range(0..w.weight(i)))
        .collect();
    let h = rng.gen_range(heights.0..=heights.1);
    w.element(&t, h).expect("normal torsion")
}

/// Degrees covering every value of the last torsion coordinate.
pub(crate) fn degrees(
    w: &WeightSequence,
    mode: SampleMode,
    seed: u64,
    tag: u64,
) -> Vec<GradingElement> {
    let n = w.len() - 1;
    let mut out = BTreeSet::new();
    match mode {
        SampleMode::Full => {
            for h in -1..=1 {
                for c in 0..w.class_count() {
                    out.insert(w.element(&w.class_torsion(c), h).expect("normal"));
                }
            }
        }
        SampleMode::Sweep => {
            for ln in 0..w.weight(n) {
                let (k, h) = if ln % 2 == 0 { (false, 0) } else { (true, 1) };
                let t: Vec<u32> = (0..=n)
                    .map(|i| {
                        if i == n {
                            ln
                        } else if k {
                            w.weight(i) - 1
                        } else {
                            0
                        }
                    })
                    .collect();
                out.insert(w.element(&t, h).expect("normal"));
            }
        }
    }
    let extra = match mode {
        SampleMode::Full => 2,
        SampleMode::Sweep => 1,
    };
    let mut r = rng(seed, tag);
    for _ in 0..extra {
        out.insert(random_degree(w, (-1, 1), &mut r));
    }
    out.into_iter().collect()
}

/// Height of `−l`.
pub(crate) fn generator_height(l: &GradingElement) -> i64 {
    -l.height() - l.torsion().iter().filter(|&&t| t > 0).count() as i64
}

/// The configured window moved so that a generator in degree `−l` sits at its base height.
pub(crate) fn window_for(base: HeightWindow, l: &GradingElement) -> HeightWindow {
    base.offset(generator_height(l))
}

/// The degree with torsion `t` whose negative has height zero.
pub(crate) fn at_base(w: &WeightSequence, t: &[u32]) -> GradingElement {
    let nz = t.iter().filter(|&&x| x > 0).count() as i64;
    w.element(t, -nz).expect("normal torsion")
}

pub(crate) fn free(
    a: &Arc<AlgebraSpec>,
    l: &GradingElement,
    w: HeightWindow,
) -> Arc<WindowedModule> {
    Arc::new(free_module(a.clone(), std::slice::from_ref(l), w))
}

pub(crate) fn simple(
    a: &Arc<AlgebraSpec>,
    l: &GradingElement,
    w: HeightWindow,
) -> Arc<WindowedModule> {
    Arc::new(simple_module(a.clone(), l, w))
}

pub(crate) fn maximal_ideal_gens(n: usize, last: u32) -> Vec<(Generator, u32)> {
    let mut g: Vec<(Generator, u32)> = (0..n).map(|i| (Generator::X(i), 1)).collect();
    g.push((Generator::X(n), last));
    g
}

pub(crate) fn scalars(v: &[Scalar]) -> Value {
    Value::Array(v.iter().map(|s| Value::String(s.to_string())).collect())
}

pub(crate) fn morphism_json(f: &GradedMorphism) -> Result<Value, FunctorError> {
    let imgs = generator_images(f)?;
    Ok(Value::Array(
        imgs.iter()
            .map(|(g, img)| {
                json!({
                    "degree": g.degree.to_string(),
                    "generator": scalars(&g.vector),
                    "image": scalars(img),
                })
            })
            .collect(),
    ))
}

/// An isomorphism `M → N` whose generator images rebuild it exactly.
pub(crate) fn iso_outcome(
    m: &Arc<WindowedModule>,
    n: &Arc<WindowedModule>,
    seed: u64,
) -> Result<Outcome, FunctorError> {
    let dims = json!({ "source": dims_json(m), "target": dims_json(n) });
    let Some(f) = is_isomorphic_seeded(m, n, seed)? else {
        return Ok(Outcome::Fail(dims, "no isomorphism found".into()));
    };
    if m.is_zero() {
        return Ok(Outcome::Pass(
            json!({ "dims": dims, "isomorphism": "zero" }),
        ));
    }
    let imgs: Vec<Vec<Scalar>> = generator_images(&f)?.into_iter().map(|(_, v)| v).collect();
    let rebuilt = morphism_from_images(m, n, &imgs)?;
    let ok = rebuilt == f && rebuilt.is_isomorphism();
    let witness = json!({ "dims": dims, "isomorphism": morphism_json(&f)? });
    Ok(Outcome::from_bool(
        ok,
        witness,
        "isomorphism did not re-verify",
    ))
}

/// Exact equality of two modules, falling back to an isomorphism.
pub(crate) fn equal_or_iso(
    got: &Arc<WindowedModule>,
    want: &Arc<WindowedModule>,
    seed: u64,
) -> Result<Outcome, FunctorError> {
    match got.compare(want) {
        Ok(()) => Ok(Outcome::Pass(
            json!({ "equal": true, "dims": dims_json(got) }),
        )),
        Err(_) => iso_outcome(got, want, seed),
    }
}
