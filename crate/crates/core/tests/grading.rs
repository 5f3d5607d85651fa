use std::collections::BTreeSet;

use proptest::prelude::*;

use wpline::grading::{Embedding, GradingElement, HeightWindow, WeightSequence};

fn w235() -> WeightSequence {
    WeightSequence::new(vec![2, 3, 5]).unwrap()
}

fn el(w: &WeightSequence, t: &[u32], h: i64) -> GradingElement {
    w.element(t, h).unwrap()
}

/// `(2,3,2) → (2,3,5)` on the last weight.
fn emb() -> Embedding {
    Embedding::new(w235(), 2, 2).unwrap()
}

#[test]
fn normalize_examples() {
    let w = w235();
    assert_eq!(w.normalize(&[2, 0, 0], 0), el(&w, &[0, 0, 0], 1));
    assert_eq!(w.normalize(&[0, 4, 0], 0), el(&w, &[0, 1, 0], 1));
    let m = w.normalize(&[0, 0, -1], 0);
    assert_eq!(m, el(&w, &[0, 0, 4], -1));
    assert_eq!(w.add(&m, &w.x(2)), w.zero());
}

#[test]
fn group_examples() {
    let w = w235();
    assert_eq!(w.add(&w.x(0), &w.x(0)), w.c());
    let a = el(&w, &[1, 2, 3], -4);
    assert_eq!(w.add(&a, &w.zero()), a);
    assert_eq!(w.add(&a, &w.neg(&a)), w.zero());
}

#[test]
fn embedding_examples() {
    let e = emb();
    let s = e.source().clone();
    let t = e.target().clone();
    assert_eq!(e.embed(&s.x(2)), el(&t, &[0, 0, 1], 0));
    assert_eq!(e.embed(&s.c()), t.c());
    // not additive
    let lhs = e.embed(&s.add(&s.x(2), &s.x(2)));
    let rhs = t.add(&e.embed(&s.x(2)), &e.embed(&s.x(2)));
    assert_eq!(lhs, t.c());
    assert_eq!(rhs, el(&t, &[0, 0, 2], 0));
    assert_ne!(lhs, rhs);
}

#[test]
fn preimage_examples() {
    let e = emb();
    let t = e.target().clone();
    assert_eq!(
        e.preimage(&el(&t, &[0, 0, 1], 0)),
        Some(el(e.source(), &[0, 0, 1], 0))
    );
    assert_eq!(e.preimage(&el(&t, &[0, 0, 3], 0)), None);
}

#[test]
fn window_counts() {
    let w = w235();
    assert_eq!(
        w.enumerate_window(HeightWindow::new(0, 0).unwrap()).len(),
        30
    );
    let w22 = WeightSequence::new(vec![2, 2]).unwrap();
    assert_eq!(
        w22.enumerate_window(HeightWindow::new(-1, 1).unwrap())
            .len(),
        12
    );
    let all = w.enumerate_window(HeightWindow::new(-3, 6).unwrap());
    let set: BTreeSet<_> = all.iter().cloned().collect();
    assert_eq!(set.len(), 300);
    for l in &all {
        assert_eq!(
            &w.normalize(
                &l.torsion().iter().map(|&t| t as i64).collect::<Vec<_>>(),
                l.height()
            ),
            l
        );
        assert!((-3..=6).contains(&l.height()));
    }
    assert!(HeightWindow::new(2, 1).is_err());
}

#[test]
fn invalid_weights_rejected() {
    assert!(WeightSequence::new(vec![2]).is_err());
    assert!(WeightSequence::new(vec![2, 0, 3]).is_err());
    assert!(Embedding::new(w235(), 2, 6).is_err());
    assert!(Embedding::new(w235(), 2, 0).is_err());
}

#[test]
fn text_form_round_trips() {
    let w = w235();
    let l = el(&w, &[1, 0, 4], -2);
    assert_eq!(l.to_string(), "(1,0,4;-2)");
    assert_eq!(w.parse_element("(1,0,4;-2)").unwrap(), l);
}

fn raw() -> impl Strategy<Value = (Vec<i64>, i64)> {
    (prop::collection::vec(-20i64..20, 3), -10i64..10)
}

/// Independent model of the group: `L(2,3,5)` embeds in `Z` by `x⃗_i ↦ 30/p_i`.
fn to_int(l: &GradingElement) -> i64 {
    let w = [2i64, 3, 5];
    l.torsion()
        .iter()
        .zip(w)
        .map(|(&t, p)| t as i64 * (30 / p))
        .sum::<i64>()
        + 30 * l.height()
}

proptest! {
    #[test]
    fn normalize_idempotent_and_faithful((t, h) in raw()) {
        let w = w235();
        let n = w.normalize(&t, h);
        let back: Vec<i64> = n.torsion().iter().map(|&x| x as i64).collect();
        prop_assert_eq!(&w.normalize(&back, n.height()), &n);
        let expected = t[0] * 15 + t[1] * 10 + t[2] * 6 + 30 * h;
        prop_assert_eq!(to_int(&n), expected);
    }

    #[test]
    fn group_axioms(a in raw(), b in raw(), c in raw()) {
        let w = w235();
        let (a, b, c) = (w.normalize(&a.0, a.1), w.normalize(&b.0, b.1), w.normalize(&c.0, c.1));
        prop_assert_eq!(w.add(&w.add(&a, &b), &c), w.add(&a, &w.add(&b, &c)));
        prop_assert_eq!(w.add(&a, &b), w.add(&b, &a));
        prop_assert_eq!(w.add(&a, &w.neg(&a)), w.zero());
        prop_assert_eq!(to_int(&w.add(&a, &b)), to_int(&a) + to_int(&b));
    }

    #[test]
    fn embed_preimage_round_trip(t0 in 0u32..2, t1 in 0u32..3, t2 in 0u32..2, h in -5i64..5) {
        let e = emb();
        let l = el(e.source(), &[t0, t1, t2], h);
        let up = e.embed(&l);
        prop_assert_eq!(e.preimage(&up), Some(l));
    }

    #[test]
    fn preimage_exists_iff_last_coordinate_small(t0 in 0u32..2, t1 in 0u32..3, t2 in 0u32..5, h in -5i64..5) {
        let e = emb();
        let l = el(e.target(), &[t0, t1, t2], h);
        match e.preimage(&l) {
            Some(m) => {
                prop_assert!(t2 < 2);
                prop_assert_eq!(e.embed(&m), l);
            }
            None => prop_assert!(t2 >= 2),
        }
    }
}
