use std::sync::Arc;

use crate::algebra::{AlgebraSpec, Generator, Monomial};
use crate::grading::{GradingElement, HeightWindow};
use crate::linalg::Matrix;

use super::{insufficient, GradedMorphism, ModuleError, WindowedModule};

/// `⊕_j S(l_j)` on `window`: the component at `d` is `⊕_j S_{d+l_j}`.
pub fn free_module(
    algebra: Arc<AlgebraSpec>,
    shifts: &[GradingElement],
    window: HeightWindow,
) -> WindowedModule {
    let alg = algebra.clone();
    let w = algebra.weights().clone();
    let field = algebra.field();
    WindowedModule::build(
        algebra,
        window,
        |_, d| shifts.iter().map(|l| alg.component_dim(&w.add(d, l))).sum(),
        |g, _, d, _| {
            let blocks: Vec<Matrix> = shifts
                .iter()
                .map(|l| alg.generator_action(g, &w.add(d, l)))
                .collect();
            Matrix::block_diag(field, &blocks)
        },
    )
}

/// `k(l)`: one dimension in degree `−l`, every generator acting by zero.
pub fn simple_module(
    algebra: Arc<AlgebraSpec>,
    l: &GradingElement,
    window: HeightWindow,
) -> WindowedModule {
    let at = algebra.weights().neg(l);
    let field = algebra.field();
    let alg = algebra.clone();
    WindowedModule::build(
        algebra,
        window,
        |_, d| usize::from(*d == at),
        |g, _, d, _| {
            let tgt = usize::from(alg.shifted_by(d, g) == at);
            Matrix::zeros(field, tgt, usize::from(*d == at))
        },
    )
}

/// `M(l)` with `M(l)_d = M_{d+l}`, on the largest band that stays inside `M`.
pub fn shift_module(m: &WindowedModule, l: &GradingElement) -> Result<WindowedModule, ModuleError> {
    let max_carry = l.torsion().iter().filter(|&&t| t > 0).count() as i64;
    let w = m.window();
    let s = l.height();
    let window = HeightWindow {
        h_min: w.h_min - s,
        h_max: w.h_max - s - max_carry,
    };
    if window.is_empty() {
        return Err(insufficient(
            "shift",
            format!("{w} shifted by {l} is empty"),
        ));
    }
    let weights = m.algebra().weights().clone();
    Ok(WindowedModule::build(
        m.algebra().clone(),
        window,
        |_, d| m.dim(&weights.add(d, l)).expect("shifted degree inside"),
        |g, _, d, _| {
            m.action(g, &weights.add(d, l))
                .expect("shifted action inside")
                .clone()
        },
    ))
}

/// `⊕ M_k` on the common window.
pub fn direct_sum(parts: &[WindowedModule]) -> Result<WindowedModule, ModuleError> {
    let first = parts.first().expect("at least one summand");
    let mut window = first.window();
    for p in parts {
        if p.algebra() != first.algebra() {
            return Err(ModuleError::AlgebraMismatch);
        }
        window = window.intersect(&p.window());
    }
    if window.is_empty() {
        return Err(insufficient("direct sum", "summand windows are disjoint"));
    }
    let parts: Vec<WindowedModule> = parts
        .iter()
        .map(|p| p.restrict(window))
        .collect::<Result<_, _>>()?;
    let field = first.field();
    Ok(WindowedModule::build(
        first.algebra().clone(),
        window,
        |s, _| parts.iter().map(|p| p.dim_slot(s)).sum(),
        |g, s, _, _| {
            let blocks: Vec<Matrix> = parts
                .iter()
                .map(|p| p.action_slot(s, g).expect("inner action").clone())
                .collect();
            Matrix::block_diag(field, &blocks)
        },
    ))
}

/// A quotient module with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub module: Arc<WindowedModule>,
    pub projection: GradedMorphism,
}

/// `M / U` where `subspaces[slot]` spans `U` in each component by columns.
pub fn quotient_by_subspaces(
    m: Arc<WindowedModule>,
    subspaces: &[Matrix],
) -> Result<Quotient, ModuleError> {
    let field = m.field();
    let slots = m.slot_count();
    assert_eq!(subspaces.len(), slots, "one subspace per component");
    let bases: Vec<Matrix> = subspaces.iter().map(Matrix::column_basis).collect();
    for s in 0..slots {
        for g in m.algebra().generators() {
            let (Some(t), Some(a)) = (m.step(s, g), m.action_slot(s, g)) else {
                continue;
            };
            let img = a.mul(&bases[s]);
            if img.cols() > 0 && bases[t].solve_matrix(&img).is_none() {
                return Err(ModuleError::NotSubmodule {
                    generator: g.to_string(),
                    degree: m.degree(s).to_string(),
                });
            }
        }
    }
    // q_s: coordinates along the complement in the basis [B | E_C]
    let mut comps = Vec::with_capacity(slots);
    let mut qs = Vec::with_capacity(slots);
    for s in 0..slots {
        let n = m.dim_slot(s);
        let b = &bases[s];
        let c = b.complement_indices();
        let e = Matrix::identity(field, n).select_columns(&c);
        let full = Matrix::hstack(field, n, &[b, &e]);
        let inv = full.inverse().expect("basis with complement");
        let rows: Vec<usize> = (b.cols()..n).collect();
        qs.push(inv.select_rows(&rows));
        comps.push(e);
    }
    let quotient = Arc::new(WindowedModule::build(
        m.algebra().clone(),
        m.window(),
        |s, _| qs[s].rows(),
        |g, s, _, t| {
            let a = m.action_slot(s, g).expect("inner action");
            qs[t].mul(a).mul(&comps[s])
        },
    ));
    let projection = GradedMorphism::new(m, quotient.clone(), qs);
    Ok(Quotient {
        module: quotient,
        projection,
    })
}

/// Multiplication by a monomial (exponents unreduced) out of `S_l`.
pub(crate) fn monomial_action(
    algebra: &AlgebraSpec,
    mono: &Monomial,
    l: &GradingElement,
) -> (Matrix, GradingElement) {
    let mut acc = Matrix::identity(algebra.field(), algebra.component_dim(l));
    let mut deg = l.clone();
    let mut apply = |g: Generator, k: u64| {
        for _ in 0..k {
            acc = algebra.generator_action(g, &deg).mul(&acc);
            deg = algebra.shifted_by(&deg, g);
        }
    };
    for (i, &e) in mono.x.iter().enumerate() {
        apply(Generator::X(i), e as u64);
    }
    apply(Generator::U, mono.u);
    apply(Generator::V, mono.v);
    (acc, deg)
}

/// Degree of a monomial in `L`.
pub(crate) fn monomial_degree(algebra: &AlgebraSpec, mono: &Monomial) -> GradingElement {
    let w = algebra.weights();
    let mut d = w.multiple_of_c((mono.u + mono.v) as i64);
    for (i, &e) in mono.x.iter().enumerate() {
        d = w.add(&d, &w.x_multiple(i, e as i64));
    }
    d
}

/// `S(l) / (g_1^{e_1}, …)` for pure generator powers.
pub fn monomial_quotient(
    algebra: Arc<AlgebraSpec>,
    l: &GradingElement,
    exps: &[(Generator, u32)],
    window: HeightWindow,
) -> Result<Quotient, ModuleError> {
    let n = algebra.weights().len();
    let monomials: Vec<Monomial> = exps
        .iter()
        .map(|&(g, e)| {
            let mut m = Monomial {
                x: vec![0; n],
                u: 0,
                v: 0,
            };
            match g {
                Generator::U => m.u = e as u64,
                Generator::V => m.v = e as u64,
                Generator::X(i) => m.x[i] = e,
            }
            m
        })
        .collect();
    monomial_ideal_quotient(algebra, l, &monomials, window)
}

/// `S(l) / (m_1, …, m_k)` for monomials with unreduced exponents.
pub fn monomial_ideal_quotient(
    algebra: Arc<AlgebraSpec>,
    l: &GradingElement,
    monomials: &[Monomial],
    window: HeightWindow,
) -> Result<Quotient, ModuleError> {
    let free = Arc::new(free_module(
        algebra.clone(),
        std::slice::from_ref(l),
        window,
    ));
    let w = algebra.weights().clone();
    let field = algebra.field();
    let degs: Vec<GradingElement> = monomials
        .iter()
        .map(|m| monomial_degree(&algebra, m))
        .collect();
    let subspaces: Vec<Matrix> = (0..free.slot_count())
        .map(|s| {
            let target = w.add(&free.degree(s), l);
            let n = algebra.component_dim(&target);
            let mut blocks = Vec::new();
            for (mono, dm) in monomials.iter().zip(&degs) {
                let from = w.sub(&target, dm);
                if algebra.component_dim(&from) == 0 {
                    continue;
                }
                let (a, to) = monomial_action(&algebra, mono, &from);
                debug_assert_eq!(to, target);
                blocks.push(a);
            }
            let refs: Vec<&Matrix> = blocks.iter().collect();
            Matrix::hstack(field, n, &refs)
        })
        .collect();
    quotient_by_subspaces(free, &subspaces)
}
