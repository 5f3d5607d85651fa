use std::sync::Arc;

use proptest::prelude::*;
use wpline::adjunction::Adjunctions;
use wpline::algebra::{AlgebraSpec, Generator, LambdaSpec};
use wpline::functor::{FunctorKind, TheoremFunctors};
use wpline::grading::{Embedding, GradingElement, HeightWindow, WeightSequence};
use wpline::linalg::{Field, Scalar};
use wpline::module::{
    free_module, hom_space, is_cohen_macaulay, is_isomorphic, monomial_quotient, shift_module,
    simple_module, GradedMorphism, WindowedModule,
};

struct Setup {
    s: Arc<AlgebraSpec>,
    s1: Arc<AlgebraSpec>,
    emb: Embedding,
    w: HeightWindow,
}

fn setup(p: &[u32], reduced: u32) -> Setup {
    let ws = WeightSequence::new(p.to_vec()).unwrap();
    let n = p.len() - 1;
    let emb = Embedding::new(ws.clone(), n, reduced).unwrap();
    let s = Arc::new(AlgebraSpec::new(ws, &LambdaSpec::Auto, Field::Rational).unwrap());
    let s1 = Arc::new(s.with_weights(emb.source().clone()));
    Setup {
        s,
        s1,
        emb,
        w: HeightWindow::new(-3, 6).unwrap(),
    }
}

fn free(a: &Arc<AlgebraSpec>, l: &GradingElement, w: HeightWindow) -> Arc<WindowedModule> {
    Arc::new(free_module(a.clone(), std::slice::from_ref(l), w))
}

fn simple(a: &Arc<AlgebraSpec>, l: &GradingElement, w: HeightWindow) -> Arc<WindowedModule> {
    Arc::new(simple_module(a.clone(), l, w))
}

fn apply(f: &FunctorKind, m: &WindowedModule) -> Arc<WindowedModule> {
    Arc::new(f.apply(m).unwrap())
}

#[test]
fn i_prime_on_free_and_simple() {
    let st = setup(&[2, 3, 5], 2);
    let w1 = st.s1.weights();
    let i = FunctorKind::IPrime(st.emb.clone());
    let out = apply(&i, &free(&st.s1, &w1.x(2), st.w));
    assert!(out.relation_violations().is_empty());
    let target = free(&st.s, &st.s.weights().x(2), st.w);
    assert!(is_isomorphic(&out, &target).unwrap().is_some());

    let ik = apply(&i, &simple(&st.s1, &w1.zero(), st.w));
    assert_eq!(ik.total_dim(), 4);
    let q = monomial_quotient(
        st.s.clone(),
        &st.s.weights().zero(),
        &[
            (Generator::X(0), 1),
            (Generator::X(1), 1),
            (Generator::X(2), 4),
        ],
        st.w,
    )
    .unwrap();
    assert!(ik.compare(&q.module).is_ok());

    // positive x_3 coefficient: a single simple
    let l = w1.x(2);
    let ik = apply(&i, &simple(&st.s1, &l, st.w));
    let want = simple(
        &st.s,
        &st.s.weights().element(l.torsion(), l.height()).unwrap(),
        st.w,
    );
    assert!(ik.compare(&want).is_ok());
}

#[test]
fn i_lambda_on_free_and_simple() {
    let st = setup(&[2, 3, 5], 2);
    let w = st.s.weights();
    let il = FunctorKind::ILambda(st.emb.clone());
    let out = apply(&il, &free(&st.s, &w.x_multiple(2, 4), st.w));
    assert!(out.relation_violations().is_empty());
    let target = free(&st.s1, &st.s1.weights().c(), st.w);
    assert!(is_isomorphic(&out, &target).unwrap().is_some());
    assert!(il
        .apply(&simple(&st.s, &w.x_multiple(2, 3), st.w))
        .unwrap()
        .is_zero());
    // 1 ≤ l_3 ≤ p′_3 gives k(φ′⁻¹(l − x⃗_3) + x⃗_3)
    let w1 = st.s1.weights();
    for k in 1..=2 {
        let l = w.x_multiple(2, k);
        let got = apply(&il, &simple(&st.s, &l, st.w));
        let want_l = w1.add(&w1.x_multiple(2, k - 1), &w1.x(2));
        assert!(
            got.compare(&simple(&st.s1, &want_l, st.w)).is_ok(),
            "k = {k}"
        );
    }
}

#[test]
fn i_rho_on_free_and_simple() {
    let st = setup(&[2, 3, 5], 2);
    let w = st.s.weights();
    let ir = FunctorKind::IRho(st.emb.clone());
    let out = apply(&ir, &free(&st.s, &w.x_multiple(2, 4), st.w));
    assert!(out.relation_violations().is_empty());
    let target = free(&st.s1, &st.s1.weights().x(2), st.w);
    assert!(is_isomorphic(&out, &target).unwrap().is_some());
    let k = apply(&ir, &simple(&st.s, &w.zero(), st.w));
    assert!(k
        .compare(&simple(&st.s1, &st.s1.weights().zero(), st.w))
        .is_ok());
    assert!(ir
        .apply(&simple(&st.s, &w.x_multiple(2, 3), st.w))
        .unwrap()
        .is_zero());
}

#[test]
fn outputs_satisfy_relations_across_weights() {
    for (p, r) in [
        (vec![2, 3, 5], 1),
        (vec![2, 2, 4], 3),
        (vec![3, 3, 3], 2),
        (vec![2, 3, 4], 4),
    ] {
        let st = setup(&p, r);
        let w = st.s.weights();
        let m = free_module(st.s.clone(), &[w.zero(), w.x(2), w.x(0)], st.w);
        for f in [
            FunctorKind::ILambda(st.emb.clone()),
            FunctorKind::IRho(st.emb.clone()),
        ] {
            let out = f.apply(&m).unwrap();
            assert!(out.relation_violations().is_empty(), "{f} on {p:?}");
        }
        let m1 = free_module(st.s1.clone(), &[st.s1.weights().zero()], st.w);
        let out = FunctorKind::IPrime(st.emb.clone()).apply(&m1).unwrap();
        assert!(out.relation_violations().is_empty());
    }
}

#[test]
fn composites_compose_and_identity_embedding() {
    let st = setup(&[2, 3, 5], 2);
    let w = st.s.weights();
    let m1 = free(&st.s1, &st.s1.weights().c(), st.w);
    let i = FunctorKind::IPrime(st.emb.clone());
    let il = FunctorKind::ILambda(st.emb.clone());
    let ir = FunctorKind::IRho(st.emb.clone());
    let im = apply(&i, &m1);
    assert!(il.apply(&im).unwrap().compare(&m1).is_ok());
    assert!(ir.apply(&im).unwrap().compare(&m1).is_ok());

    let full = setup(&[2, 3, 5], 5);
    let n = free_module(full.s.clone(), &[w.zero(), w.x(1)], full.w);
    for f in [
        FunctorKind::IPrime(full.emb.clone()),
        FunctorKind::ILambda(full.emb.clone()),
        FunctorKind::IRho(full.emb.clone()),
    ] {
        assert!(f.apply(&n).unwrap().compare(&n).is_ok());
    }
}

#[test]
fn twist_compatibility() {
    let st = setup(&[2, 3, 5], 2);
    let w = st.s.weights();
    let w1 = st.s1.weights();
    let n = free_module(st.s.clone(), &[w.zero(), w.x(2)], st.w);
    for i in 0..2 {
        let xi = w.x(i);
        for f in [
            FunctorKind::ILambda(st.emb.clone()),
            FunctorKind::IRho(st.emb.clone()),
        ] {
            let a = f.apply(&shift_module(&n, &xi).unwrap()).unwrap();
            let b = shift_module(&f.apply(&n).unwrap(), &w1.x(i)).unwrap();
            assert!(a.compare(&b).is_ok(), "{f} x{}", i + 1);
        }
        let m = free_module(st.s1.clone(), &[w1.zero(), w1.x(2)], st.w);
        let i_ = FunctorKind::IPrime(st.emb.clone());
        let a = i_.apply(&shift_module(&m, &w1.x(i)).unwrap()).unwrap();
        let b = shift_module(&i_.apply(&m).unwrap(), &xi).unwrap();
        assert!(a.compare(&b).is_ok());
    }
    let a = shift_module(
        &FunctorKind::IRho(st.emb.clone()).apply(&n).unwrap(),
        &w1.x(2),
    )
    .unwrap();
    let b = FunctorKind::ILambda(st.emb.clone())
        .apply(&shift_module(&n, &w.x(2)).unwrap())
        .unwrap();
    assert!(a.compare(&b).is_ok());
}

#[test]
fn exactness_on_a_short_exact_sequence() {
    let st = setup(&[2, 3, 5], 2);
    let w = st.s.weights();
    let q = monomial_quotient(
        st.s.clone(),
        &w.zero(),
        &[(Generator::X(0), 1), (Generator::X(2), 2)],
        st.w,
    )
    .unwrap();
    let proj = q.projection;
    let (_, incl) = proj.kernel();
    for f in [
        FunctorKind::ILambda(st.emb.clone()),
        FunctorKind::IRho(st.emb.clone()),
    ] {
        let a = f.apply_morphism(&incl).unwrap();
        let b = f.apply_morphism(&proj).unwrap();
        assert!(a.is_homomorphism() && b.is_homomorphism());
        assert!(a.is_injective() && b.is_surjective());
        for (s, (fa, fb)) in a.maps().iter().zip(b.maps()).enumerate() {
            assert!(fb.mul(fa).is_zero(), "slot {s}");
            assert_eq!(fa.rank() + fb.rank(), fa.rows());
        }
    }
}

#[test]
fn left_adjunction_bijection() {
    let st = setup(&[2, 3, 5], 2);
    let adj = Adjunctions::new(st.emb.clone());
    let w = st.s.weights();
    let n = free(&st.s, &w.zero(), st.w);
    let m = free(&st.s1, &st.s1.weights().zero(), st.w);
    let ln = apply(&adj.i_lambda(), &n);
    let im = apply(&adj.i(), &m);
    let left = hom_space(&ln, &m).unwrap();
    let right = hom_space(&n, &im).unwrap();
    assert_eq!(left.len(), 1);
    assert_eq!(right.len(), 1);
    let phi = adj.phi(&left[0], &n).unwrap();
    assert!(phi.is_homomorphism() && !phi.is_zero());
    assert!(adj.phi_inverse(&phi, &m).unwrap() == left[0]);
    assert!(adj
        .phi(&GradedMorphism::zero(ln, m.clone()), &n)
        .unwrap()
        .is_zero());
}

#[test]
fn right_adjunction_bijection() {
    let st = setup(&[2, 3, 5], 2);
    let adj = Adjunctions::new(st.emb.clone());
    let w = st.s.weights();
    let w1 = st.s1.weights();
    let m = Arc::new(free_module(
        st.s1.clone(),
        &[w1.zero(), w1.neg(&w1.x(2))],
        st.w,
    ));
    let n = Arc::new(
        monomial_quotient(st.s.clone(), &w.c(), &[(Generator::X(2), 3)], st.w)
            .unwrap()
            .module
            .as_ref()
            .clone(),
    );
    let im = apply(&adj.i(), &m);
    let rn = apply(&adj.i_rho(), &n);
    let left = hom_space(&im, &n).unwrap();
    let right = hom_space(&m, &rn).unwrap();
    assert_eq!(left.len(), right.len());
    for g in &left {
        let h = adj.psi(g, &m).unwrap();
        assert!(h.is_homomorphism());
        let back = adj.psi_inverse(&h, &n).unwrap();
        assert!(back.is_homomorphism());
        assert!(back == *g);
    }
}

#[test]
fn units_counits_and_triangles() {
    for (p, r) in [
        (vec![2, 3, 5], 2),
        (vec![2, 3, 5], 1),
        (vec![2, 2, 3], 3),
        (vec![3, 3, 4], 3),
    ] {
        let st = setup(&p, r);
        let adj = Adjunctions::new(st.emb.clone());
        let w = st.s.weights();
        let w1 = st.s1.weights();
        let n = Arc::new(free_module(st.s.clone(), &[w.zero(), w.x(2)], st.w));
        let m = Arc::new(free_module(st.s1.clone(), &[w1.zero()], st.w));
        let (a, b) = adj.left_triangles(&n, &m).unwrap();
        assert!(a.maps().iter().all(|x| x.is_identity()), "{p:?}");
        assert!(b.maps().iter().all(|x| x.is_identity()), "{p:?}");
        let (a, b) = adj.right_triangles(&m, &n).unwrap();
        assert!(a.maps().iter().all(|x| x.is_identity()), "{p:?}");
        assert!(b.maps().iter().all(|x| x.is_identity()), "{p:?}");
        for mm in [m.clone(), simple(&st.s1, &w1.x(2), st.w)] {
            let eps = adj.counit_left(&mm).unwrap();
            assert!(eps.is_homomorphism() && eps.is_isomorphism());
            assert!(adj.unit_right(&mm).unwrap().is_isomorphism());
        }
        assert!(adj.unit_left(&n).unwrap().is_homomorphism());
        assert!(adj.counit_right(&n).unwrap().is_homomorphism());
    }
}

#[test]
fn cohen_macaulay_preserved() {
    let st = setup(&[2, 3, 5], 3);
    let w = st.s.weights();
    let w1 = st.s1.weights();
    let n = free_module(
        st.s.clone(),
        &[w.x(1), w.x_multiple(2, 3)],
        HeightWindow::new(-4, 6).unwrap(),
    );
    for f in [
        FunctorKind::ILambda(st.emb.clone()),
        FunctorKind::IRho(st.emb.clone()),
    ] {
        assert!(
            is_cohen_macaulay(&f.apply(&n).unwrap())
                .unwrap()
                .is_cohen_macaulay
        );
    }
    let m = free_module(st.s1.clone(), &[w1.x(2)], HeightWindow::new(-4, 6).unwrap());
    let im = FunctorKind::IPrime(st.emb.clone()).apply(&m).unwrap();
    assert!(is_cohen_macaulay(&im).unwrap().is_cohen_macaulay);
}

#[test]
fn theorem_functors_agree() {
    for (p, r) in [
        (vec![2, 3, 5], 2),
        (vec![2, 3, 5], 1),
        (vec![2, 3, 5], 5),
        (vec![3, 3, 4], 3),
    ] {
        let ws = WeightSequence::new(p.clone()).unwrap();
        let tf = TheoremFunctors::new(&ws, r).unwrap();
        let s = Arc::new(AlgebraSpec::new(ws.clone(), &LambdaSpec::Auto, Field::Rational).unwrap());
        let n = free_module(
            s.clone(),
            &[ws.zero(), ws.x(2)],
            HeightWindow::new(-4, 7).unwrap(),
        );
        let a = tf.j().apply(&n).unwrap();
        let b = tf.j_via_rho().apply(&n).unwrap();
        assert!(a.compare(&b).is_ok(), "{p:?} {r}");
        assert!(a.relation_violations().is_empty());
        assert_eq!(tf.double_weight(), p[2] + 1 - r);
        let jl = tf.j_lambda().apply(&a).unwrap();
        assert!(jl.relation_violations().is_empty());
        assert!(tf
            .j_rho()
            .apply(&a)
            .unwrap()
            .relation_violations()
            .is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn phi_round_trip(coeffs in proptest::collection::vec(-3i64..=3, 4), r in 1u32..=5) {
        let st = setup(&[2, 3, 5], r);
        let adj = Adjunctions::new(st.emb.clone());
        let w = st.s.weights();
        let w1 = st.s1.weights();
        let n = Arc::new(free_module(st.s.clone(), &[w.zero(), w.neg(&w.x(2))], st.w));
        let m = Arc::new(monomial_quotient(st.s1.clone(), &w1.zero(), &[(Generator::X(0), 1)], st.w).unwrap().module.as_ref().clone());
        let ln = apply(&adj.i_lambda(), &n);
        let basis = hom_space(&ln, &m).unwrap();
        let cs: Vec<Scalar> = basis.iter().zip(&coeffs).map(|(_, &c)| Field::Rational.from_int(c)).collect();
        if let Some(f) = GradedMorphism::combination(&basis, &cs) {
            let g = adj.phi(&f, &n).unwrap();
            prop_assert!(g.is_homomorphism());
            prop_assert!(adj.phi_inverse(&g, &m).unwrap() == f);
        }
        let im = apply(&adj.i(), &m);
        prop_assert_eq!(basis.len(), hom_space(&n, &im).unwrap().len());
    }

    #[test]
    fn twist_compat_on_simples(t0 in 0u32..2, t1 in 0u32..3, t2 in 0u32..5, h in -1i64..1, i in 0usize..2) {
        let st = setup(&[2, 3, 5], 3);
        let w = st.s.weights();
        let l = w.element(&[t0, t1, t2], h).unwrap();
        let n = simple_module(st.s.clone(), &l, st.w);
        for f in [FunctorKind::ILambda(st.emb.clone()), FunctorKind::IRho(st.emb.clone())] {
            let a = f.apply(&shift_module(&n, &w.x(i)).unwrap()).unwrap();
            let b = shift_module(&f.apply(&n).unwrap(), &st.s1.weights().x(i)).unwrap();
            prop_assert!(a.compare(&b).is_ok());
        }
    }
}
