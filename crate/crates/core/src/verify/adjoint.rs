use std::collections::BTreeMap;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::adjunction::Adjunctions;
use crate::algebra::{AlgebraSpec, Generator};
use crate::functor::{FunctorError, FunctorKind};
use crate::grading::{GradingElement, HeightWindow, WeightSequence};
use crate::linalg::{Matrix, Scalar};
use crate::module::{hom_space, monomial_quotient, GradedMorphism, ModuleError, WindowedModule};

use super::samples::{at_base, free, rng, simple, SampleMode};
use super::{Ctx, Outcome};

const TAG_PAIRS: u64 = 3;
const PAIRS: usize = 12;
const SWEEP_PAIRS: usize = 10;

/// A sample module with a short description.
#[derive(Clone)]
pub(crate) struct Sample {
    pub(crate) module: Arc<WindowedModule>,
    pub(crate) degree: GradingElement,
    pub(crate) label: String,
}

pub(crate) fn random_torsion_degree(w: &WeightSequence, rng: &mut ChaCha8Rng) -> GradingElement {
    let n = w.len();
    let k = rng.gen_range(0..=2.min(n));
    let mut t = vec![0u32; n];
    for i in sample(rng, n, k).into_iter() {
        if w.weight(i) > 1 {
            t[i] = rng.gen_range(1..w.weight(i));
        }
    }
    at_base(w, &t)
}

pub(crate) fn sample_module(
    alg: &Arc<AlgebraSpec>,
    kind: usize,
    l: &GradingElement,
    w: HeightWindow,
) -> Result<Sample, ModuleError> {
    let n = alg.weights().len() - 1;
    let (module, name) = match kind {
        0 => (free(alg, l, w), "S"),
        1 => (simple(alg, l, w), "k"),
        2 => (
            monomial_quotient(alg.clone(), l, &[(Generator::X(n), 2)], w)?.module,
            "S/(x_n^2)",
        ),
        _ => (
            monomial_quotient(alg.clone(), l, &[(Generator::X(0), 1)], w)?.module,
            "S/(x_1)",
        ),
    };
    Ok(Sample {
        module,
        degree: l.clone(),
        label: format!("{name}({l})"),
    })
}

/// Deterministic pairs `(N, M)` with `N` over the full weights and `M` over the lowered ones.
fn pairs(ctx: &Ctx) -> Vec<(usize, usize, GradingElement, GradingElement)> {
    let mut r = rng(ctx.cfg.seed, TAG_PAIRS);
    let count = match ctx.cfg.samples {
        SampleMode::Full => PAIRS,
        SampleMode::Sweep => SWEEP_PAIRS,
    };
    (0..count)
        .map(|i| {
            let l = random_torsion_degree(ctx.emb.target(), &mut r);
            let m = random_torsion_degree(ctx.emb.source(), &mut r);
            (i % 4, i % 3, l, m)
        })
        .collect()
}

fn flatten(f: &GradedMorphism) -> Vec<Scalar> {
    f.maps()
        .iter()
        .flat_map(|m| (0..m.rows()).flat_map(move |r| m.row(r).to_vec()))
        .collect()
}

fn independent(fs: &[GradedMorphism]) -> bool {
    let Some(first) = fs.first() else { return true };
    let cols: Vec<Vec<Scalar>> = fs.iter().map(flatten).collect();
    Matrix::from_columns(first.source().field(), cols[0].len(), &cols).rank() == fs.len()
}

pub(crate) fn is_identity(f: &GradedMorphism) -> bool {
    f.source().compare(f.target()).is_ok() && f.maps().iter().all(Matrix::is_identity)
}

struct Pair {
    n: Sample,
    m: Sample,
}

fn build_pairs(ctx: &Ctx) -> Vec<Result<Pair, ModuleError>> {
    let w = ctx.cfg.window;
    pairs(ctx)
        .into_iter()
        .map(|(kn, km, l, m)| {
            Ok(Pair {
                n: sample_module(&ctx.alg, kn, &l, w)?,
                m: sample_module(&ctx.reduced_alg, km, &m, w)?,
            })
        })
        .collect()
}

fn pair_params(ctx: &Ctx, p: &Pair) -> BTreeMap<String, String> {
    let mut q = ctx.params();
    q.insert("N".into(), p.n.label.clone());
    q.insert("M".into(), p.m.label.clone());
    q.insert("window".into(), ctx.cfg.window.to_string());
    q
}

/// Sources mapping into `x`: the free module on its generator and on that generator moved by `x⃗_n`.
fn probes(alg: &Arc<AlgebraSpec>, x: &Sample) -> Vec<Arc<WindowedModule>> {
    let w = alg.weights();
    let n = w.len() - 1;
    let win = x.module.window();
    vec![
        free(alg, &x.degree, win),
        free(alg, &w.sub(&x.degree, &w.x(n)), win),
    ]
}

/// Hom dimension equality plus a bijection verified in both directions.
fn bijection_outcome(
    lhs: &[GradedMorphism],
    rhs: &[GradedMorphism],
    forward: &dyn Fn(&GradedMorphism) -> Result<GradedMorphism, FunctorError>,
    backward: &dyn Fn(&GradedMorphism) -> Result<GradedMorphism, FunctorError>,
) -> Result<Outcome, FunctorError> {
    let mapped: Vec<GradedMorphism> = lhs.iter().map(forward).collect::<Result<_, _>>()?;
    let homs = mapped.iter().all(GradedMorphism::is_homomorphism);
    let indep = independent(&mapped);
    let mut there_back = true;
    for (a, fa) in lhs.iter().zip(&mapped) {
        there_back &= backward(fa)? == *a;
    }
    let mut back_there = true;
    for b in rhs {
        let gb = backward(b)?;
        back_there &= gb.is_homomorphism() && forward(&gb)? == *b;
    }
    let witness = json!({
        "hom_dims": [lhs.len(), rhs.len()],
        "images_are_homomorphisms": homs,
        "images_independent": indep,
        "inverse_after_forward": there_back,
        "forward_after_inverse": back_there,
    });
    Ok(Outcome::from_bool(
        lhs.len() == rhs.len() && homs && indep && there_back && back_there,
        witness,
        "adjunction bijection failed",
    ))
}

/// `Φ: Hom(i′_λN, M) ≅ Hom(N, i′M)` with naturality, triangles and the counit.
pub(crate) fn left_adjunction(ctx: &mut Ctx) {
    let adj = Adjunctions::new(ctx.emb.clone());
    let il = adj.i_lambda();
    let i = adj.i();
    for pair in build_pairs(ctx) {
        let pair = match pair {
            Ok(p) => p,
            Err(e) => {
                let p = ctx.params();
                ctx.rec
                    .record("adjunction.left.hom_dims", "sample construction", p, || {
                        Err(e.into())
                    });
                continue;
            }
        };
        let p = pair_params(ctx, &pair);
        let (n, m) = (pair.n.module.clone(), pair.m.module.clone());
        ctx.rec.record(
            "adjunction.left.hom_dims",
            "Φ: Hom(i′_λN, M) ≅ Hom(N, i′M), Φ⁻¹Φ = id, ΦΦ⁻¹ = id",
            p.clone(),
            || {
                let ln = Arc::new(il.apply(&n)?);
                let im = Arc::new(i.apply(&m)?);
                let lhs = hom_space(&ln, &m)?;
                let rhs = hom_space(&n, &im)?;
                bijection_outcome(&lhs, &rhs, &|f| adj.phi(f, &n), &|g| adj.phi_inverse(g, &m))
            },
        );
        ctx.rec.record(
            "adjunction.left.naturality",
            "Φ(f ∘ i′_λ(a)) = Φ(f) ∘ a",
            p.clone(),
            || {
                let ln = Arc::new(il.apply(&n)?);
                let lhs = hom_space(&ln, &m)?;
                let mut checked = 0usize;
                for src in probes(&ctx_alg(&n), &pair.n) {
                    for a in hom_space(&src, &n)? {
                        let la = il.apply_morphism(&a)?;
                        for f in &lhs {
                            let left = adj.phi(&f.compose(&la), &src)?;
                            let right = adj.phi(f, &n)?.compose(&a);
                            if left != right {
                                return Ok(Outcome::Fail(
                                    json!({ "checked": checked }),
                                    "naturality fails".into(),
                                ));
                            }
                            checked += 1;
                        }
                    }
                }
                Ok(Outcome::Pass(json!({ "checked": checked })))
            },
        );
        ctx.rec.record(
            "adjunction.left.triangles",
            "ε_{i′_λN} ∘ i′_λ(η_N) = id, i′(ε_M) ∘ η_{i′M} = id",
            p.clone(),
            || {
                let (a, b) = adj.left_triangles(&n, &m)?;
                let (ia, ib) = (is_identity(&a), is_identity(&b));
                Ok(Outcome::from_bool(
                    ia && ib,
                    json!({ "first": ia, "second": ib }),
                    "triangle identity fails",
                ))
            },
        );
        ctx.rec.record(
            "adjunction.counit_iso",
            "ε_M: i′_λ i′ M → M and η′_M: M → i′_ρ i′ M are isomorphisms",
            p,
            || {
                let eps = adj.counit_left(&m)?;
                let eta = adj.unit_right(&m)?;
                let (a, b) = (eps.is_isomorphism(), eta.is_isomorphism());
                let witness = json!({
                    "counit_identity": is_identity(&eps),
                    "counit_iso": a,
                    "unit_iso": b,
                });
                Ok(Outcome::from_bool(a && b, witness, "not an isomorphism"))
            },
        );
    }
}

fn ctx_alg(m: &Arc<WindowedModule>) -> Arc<AlgebraSpec> {
    m.algebra().clone()
}

/// `Ψ: Hom(i′M, N) ≅ Hom(M, i′_ρN)` with naturality and triangles.
pub(crate) fn right_adjunction(ctx: &mut Ctx) {
    let adj = Adjunctions::new(ctx.emb.clone());
    let ir: FunctorKind = adj.i_rho();
    let i = adj.i();
    for pair in build_pairs(ctx) {
        let pair = match pair {
            Ok(p) => p,
            Err(e) => {
                let p = ctx.params();
                ctx.rec.record(
                    "adjunction.right.hom_dims",
                    "sample construction",
                    p,
                    || Err(e.into()),
                );
                continue;
            }
        };
        let p = pair_params(ctx, &pair);
        let (n, m) = (pair.n.module.clone(), pair.m.module.clone());
        ctx.rec.record(
            "adjunction.right.hom_dims",
            "Ψ: Hom(i′M, N) ≅ Hom(M, i′_ρN), Ψ⁻¹Ψ = id, ΨΨ⁻¹ = id",
            p.clone(),
            || {
                let im = Arc::new(i.apply(&m)?);
                let rn = Arc::new(ir.apply(&n)?);
                let lhs = hom_space(&im, &n)?;
                let rhs = hom_space(&m, &rn)?;
                bijection_outcome(&lhs, &rhs, &|g| adj.psi(g, &m), &|h| adj.psi_inverse(h, &n))
            },
        );
        ctx.rec.record(
            "adjunction.right.naturality",
            "Ψ(g ∘ i′(b)) = Ψ(g) ∘ b",
            p.clone(),
            || {
                let im = Arc::new(i.apply(&m)?);
                let lhs = hom_space(&im, &n)?;
                let mut checked = 0usize;
                for src in probes(&ctx_alg(&m), &pair.m) {
                    for b in hom_space(&src, &m)? {
                        let ib = i.apply_morphism(&b)?;
                        for g in &lhs {
                            let left = adj.psi(&g.compose(&ib), &src)?;
                            let right = adj.psi(g, &m)?.compose(&b);
                            if left != right {
                                return Ok(Outcome::Fail(
                                    json!({ "checked": checked }),
                                    "naturality fails".into(),
                                ));
                            }
                            checked += 1;
                        }
                    }
                }
                Ok(Outcome::Pass(json!({ "checked": checked })))
            },
        );
        ctx.rec.record(
            "adjunction.right.triangles",
            "ε′_{i′M} ∘ i′(η′_M) = id, i′_ρ(ε′_N) ∘ η′_{i′_ρN} = id",
            p,
            || {
                let (a, b) = adj.right_triangles(&m, &n)?;
                let (ia, ib) = (is_identity(&a), is_identity(&b));
                Ok(Outcome::from_bool(
                    ia && ib,
                    json!({ "first": ia, "second": ib }),
                    "triangle identity fails",
                ))
            },
        );
    }
}
