//! Windowed graded modules: every homogeneous component whose height lies in
//! a band, together with the generator actions between them.
//!
//! Components and actions inside the window are exact. Operations that look
//! below a degree (generators, syzygies, Koszul homology) treat a module that
//! vanishes on the bottom row of its window as bounded below there, and
//! refuse to run otherwise.

mod construct;
mod hom;
mod homology;
mod morphism;
mod serialize;

use std::sync::Arc;

use crate::algebra::{AlgebraSpec, Generator};
use crate::grading::{GradingElement, HeightWindow};
use crate::linalg::{Field, Matrix};

pub use construct::{
    direct_sum, free_module, monomial_ideal_quotient, monomial_quotient, quotient_by_subspaces,
    shift_module, simple_module, Quotient,
};
pub use hom::{
    cover, generator_images, hom_space, is_isomorphic, is_isomorphic_seeded, minimal_generators,
    morphism_from_images, projective_dimension, syzygy, Cover, GeneratorVector, Resolution,
    HOM_MARGIN,
};
pub use homology::{
    composition_factors, coset_restriction, is_cohen_macaulay, koszul_tor, CmCertificate,
    CoreModule,
};
pub use morphism::GradedMorphism;
pub use serialize::{ActionRecord, ComponentRecord, ModuleDocument};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModuleError {
    #[error("insufficient window for {op}: {detail}")]
    InsufficientWindow { op: &'static str, detail: String },
    #[error("modules are over different algebras")]
    AlgebraMismatch,
    #[error("action {generator} at {degree} has shape {found:?}, expected {expected:?}")]
    Shape {
        generator: String,
        degree: String,
        expected: (usize, usize),
        found: (usize, usize),
    },
    #[error("module is not finite dimensional inside its window")]
    NotFiniteDimensional,
    #[error("subspace family is not closed under {generator} at {degree}")]
    NotSubmodule { generator: String, degree: String },
    #[error("invalid module document: {0}")]
    Document(String),
}

/// Error for operations whose window is too small to be sound.
pub fn insufficient_window(op: &'static str, detail: impl Into<String>) -> ModuleError {
    insufficient(op, detail)
}

pub(crate) fn insufficient(op: &'static str, detail: impl Into<String>) -> ModuleError {
    ModuleError::InsufficientWindow {
        op,
        detail: detail.into(),
    }
}

/// A finite height slice of an `L`-graded module.
#[derive(Clone, Debug)]
pub struct WindowedModule {
    algebra: Arc<AlgebraSpec>,
    window: HeightWindow,
    dims: Vec<usize>,
    /// `actions[slot * generators + g]`, `None` when the target leaves the window.
    actions: Vec<Option<Matrix>>,
}

/// Where two modules first differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mismatch {
    Algebra,
    Dimension {
        degree: GradingElement,
        left: usize,
        right: usize,
    },
    Action {
        generator: Generator,
        degree: GradingElement,
    },
}

impl std::fmt::Display for Mismatch {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mismatch::Algebra => write!(f, "different algebras"),
            Mismatch::Dimension {
                degree,
                left,
                right,
            } => write!(f, "dimension {left} vs {right} at {degree}"),
            Mismatch::Action { generator, degree } => {
                write!(f, "action of {generator} differs at {degree}")
            }
        }
    }
}

impl WindowedModule {
    /// Assembles a module from per-slot data, checking every action shape.
    pub fn from_parts(
        algebra: Arc<AlgebraSpec>,
        window: HeightWindow,
        dims: Vec<usize>,
        actions: Vec<Option<Matrix>>,
    ) -> Result<Self, ModuleError> {
        let m = WindowedModule {
            algebra,
            window,
            dims,
            actions,
        };
        assert_eq!(m.dims.len(), m.slot_count(), "component count");
        assert_eq!(
            m.actions.len(),
            m.slot_count() * m.algebra.generator_count(),
            "action count"
        );
        for slot in 0..m.slot_count() {
            for g in m.algebra.generators() {
                let target = m.step(slot, g);
                let entry = &m.actions[slot * m.algebra.generator_count() + g.index()];
                match (target, entry) {
                    (Some(t), Some(mat)) => {
                        let expected = (m.dims[t], m.dims[slot]);
                        if mat.shape() != expected {
                            return Err(ModuleError::Shape {
                                generator: g.to_string(),
                                degree: m.degree(slot).to_string(),
                                expected,
                                found: mat.shape(),
                            });
                        }
                    }
                    (None, None) => {}
                    (Some(_), None) => {
                        return Err(ModuleError::Shape {
                            generator: g.to_string(),
                            degree: m.degree(slot).to_string(),
                            expected: (0, 0),
                            found: (0, 0),
                        })
                    }
                    (None, Some(_)) => {
                        return Err(ModuleError::Document(format!(
                            "action of {g} at {} leaves the window",
                            m.degree(slot)
                        )))
                    }
                }
            }
        }
        Ok(m)
    }

    /// Builds a module slot by slot from a component and an action callback.
    pub(crate) fn build(
        algebra: Arc<AlgebraSpec>,
        window: HeightWindow,
        mut dim: impl FnMut(usize, &GradingElement) -> usize,
        mut action: impl FnMut(Generator, usize, &GradingElement, usize) -> Matrix,
    ) -> Self {
        let mut m = WindowedModule {
            algebra,
            window,
            dims: Vec::new(),
            actions: Vec::new(),
        };
        let slots = m.slot_count();
        m.dims = (0..slots).map(|s| dim(s, &m.degree(s))).collect();
        let gens: Vec<Generator> = m.algebra.generators().collect();
        let mut actions = Vec::with_capacity(slots * gens.len());
        for s in 0..slots {
            let d = m.degree(s);
            for &g in &gens {
                actions.push(m.step(s, g).map(|t| {
                    let mat = action(g, s, &d, t);
                    assert_eq!(mat.shape(), (m.dims[t], m.dims[s]), "{g} at {d}");
                    mat
                }));
            }
        }
        m.actions = actions;
        m
    }

    /// Builds a module from degreewise data; `action(g, d)` must map the
    /// component at `d` into the one at `d + deg g`.
    pub fn from_fn(
        algebra: Arc<AlgebraSpec>,
        window: HeightWindow,
        mut dim: impl FnMut(&GradingElement) -> usize,
        mut action: impl FnMut(Generator, &GradingElement) -> Matrix,
    ) -> Self {
        Self::build(algebra, window, |_, d| dim(d), |g, _, d, _| action(g, d))
    }

    pub fn zero(algebra: Arc<AlgebraSpec>, window: HeightWindow) -> Self {
        let field = algebra.field();
        Self::build(
            algebra,
            window,
            |_, _| 0,
            |_, _, _, _| Matrix::zeros(field, 0, 0),
        )
    }

    pub fn algebra(&self) -> &Arc<AlgebraSpec> {
        &self.algebra
    }

    pub fn field(&self) -> Field {
        self.algebra.field()
    }

    pub fn window(&self) -> HeightWindow {
        self.window
    }

    /// Band on which the data is exact; every component stored is exact.
    pub fn trusted(&self) -> HeightWindow {
        self.window
    }

    pub(crate) fn classes(&self) -> usize {
        self.algebra.weights().class_count()
    }

    pub(crate) fn slot_count(&self) -> usize {
        self.window.heights() * self.classes()
    }

    pub(crate) fn slot_of(&self, l: &GradingElement) -> Option<usize> {
        if !self.window.contains(l.height()) {
            return None;
        }
        let c = self.algebra.weights().class_index(l.torsion());
        Some((l.height() - self.window.h_min) as usize * self.classes() + c)
    }

    pub(crate) fn slot_parts(&self, slot: usize) -> (usize, usize) {
        (slot / self.classes(), slot % self.classes())
    }

    pub(crate) fn degree(&self, slot: usize) -> GradingElement {
        let (hi, c) = self.slot_parts(slot);
        let w = self.algebra.weights();
        w.element(&w.class_torsion(c), self.window.h_min + hi as i64)
            .expect("slot degree")
    }

    /// Slot reached from `slot` by multiplying with `g`, if still inside.
    pub(crate) fn step(&self, slot: usize, g: Generator) -> Option<usize> {
        let (hi, c) = self.slot_parts(slot);
        let (c2, dh) = self.algebra.step(c, g);
        let hi2 = hi + dh as usize;
        (hi2 < self.window.heights()).then(|| hi2 * self.classes() + c2)
    }

    /// Slot that `g` maps into `slot` from, if inside.
    pub(crate) fn step_back(&self, slot: usize, g: Generator) -> Option<usize> {
        let (hi, c) = self.slot_parts(slot);
        let (c2, dh) = self.algebra.step_back(c, g);
        (hi as i64 - dh >= 0).then(|| (hi - dh as usize) * self.classes() + c2)
    }

    pub(crate) fn dim_slot(&self, slot: usize) -> usize {
        self.dims[slot]
    }

    pub(crate) fn action_slot(&self, slot: usize, g: Generator) -> Option<&Matrix> {
        self.actions[slot * self.algebra.generator_count() + g.index()].as_ref()
    }

    /// Dimension of the component at `l`; `None` outside the window.
    pub fn dim(&self, l: &GradingElement) -> Option<usize> {
        self.slot_of(l).map(|s| self.dims[s])
    }

    /// Action of `g` out of degree `l`, when both ends lie in the window.
    pub fn action(&self, g: Generator, l: &GradingElement) -> Option<&Matrix> {
        self.slot_of(l).and_then(|s| self.action_slot(s, g))
    }

    pub fn degrees(&self) -> impl Iterator<Item = GradingElement> + '_ {
        (0..self.slot_count()).map(|s| self.degree(s))
    }

    /// Nonzero components as `(degree, dim)`, bottom-up.
    pub fn support(&self) -> Vec<(GradingElement, usize)> {
        (0..self.slot_count())
            .filter(|&s| self.dims[s] > 0)
            .map(|s| (self.degree(s), self.dims[s]))
            .collect()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    /// True when every component on the height row `h` vanishes.
    pub fn row_is_zero(&self, h: i64) -> bool {
        if !self.window.contains(h) {
            return true;
        }
        let hi = (h - self.window.h_min) as usize;
        let c = self.classes();
        self.dims[hi * c..(hi + 1) * c].iter().all(|&d| d == 0)
    }

    /// The same module on a narrower band.
    pub fn restrict(&self, window: HeightWindow) -> Result<Self, ModuleError> {
        let w = window.intersect(&self.window);
        if w.is_empty() {
            return Err(insufficient(
                "restrict",
                format!("{window} misses {}", self.window),
            ));
        }
        let off = (w.h_min - self.window.h_min) as usize * self.classes();
        let src = self;
        Ok(Self::build(
            self.algebra.clone(),
            w,
            |s, _| src.dims[s + off],
            |g, s, _, _| src.action_slot(s + off, g).expect("inner action").clone(),
        ))
    }

    /// Composite of generator actions along `path`, starting at `l`.
    pub fn path_action(&self, l: &GradingElement, path: &[Generator]) -> Option<Matrix> {
        let mut slot = self.slot_of(l)?;
        let mut acc = Matrix::identity(self.field(), self.dims[slot]);
        for &g in path {
            acc = self.action_slot(slot, g)?.mul(&acc);
            slot = self.step(slot, g)?;
        }
        Some(acc)
    }

    /// `g^k` out of `l`.
    pub fn power_action(&self, g: Generator, k: u32, l: &GradingElement) -> Option<Matrix> {
        self.path_action(l, &vec![g; k as usize])
    }

    /// On-the-nose comparison on the common window.
    pub fn compare(&self, other: &WindowedModule) -> Result<(), Mismatch> {
        if self.algebra != other.algebra {
            return Err(Mismatch::Algebra);
        }
        let w = self.window.intersect(&other.window);
        if w.is_empty() {
            return Ok(());
        }
        let a = self.restrict(w).expect("nonempty");
        let b = other.restrict(w).expect("nonempty");
        for s in 0..a.slot_count() {
            if a.dims[s] != b.dims[s] {
                return Err(Mismatch::Dimension {
                    degree: a.degree(s),
                    left: a.dims[s],
                    right: b.dims[s],
                });
            }
        }
        for s in 0..a.slot_count() {
            for g in a.algebra.generators() {
                if a.action_slot(s, g) != b.action_slot(s, g) {
                    return Err(Mismatch::Action {
                        generator: g,
                        degree: a.degree(s),
                    });
                }
            }
        }
        Ok(())
    }

    /// Checks that actions commute and that `x_i^{p_i} = λ_{i0} v − λ_{i1} u`
    /// wherever both sides stay in the window. Returns the violations.
    pub fn relation_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        let gens: Vec<Generator> = self.algebra.generators().collect();
        for s in 0..self.slot_count() {
            for (i, &g) in gens.iter().enumerate() {
                for &h in &gens[i + 1..] {
                    let gh = self
                        .step(s, g)
                        .and_then(|t| Some(self.action_slot(t, h)?.mul(self.action_slot(s, g)?)));
                    let hg = self
                        .step(s, h)
                        .and_then(|t| Some(self.action_slot(t, g)?.mul(self.action_slot(s, h)?)));
                    if let (Some(a), Some(b)) = (gh, hg) {
                        if a != b {
                            out.push(format!("{g}{h} != {h}{g} at {}", self.degree(s)));
                        }
                    }
                }
            }
            let d = self.degree(s);
            for (i, pt) in self.algebra.lambda().iter().enumerate() {
                let p = self.algebra.weights().weight(i);
                let Some(lhs) = self.power_action(Generator::X(i), p, &d) else {
                    continue;
                };
                let (Some(u), Some(v)) = (
                    self.action_slot(s, Generator::U),
                    self.action_slot(s, Generator::V),
                ) else {
                    continue;
                };
                let rhs = v.scale(&pt.x0).sub(&u.scale(&pt.x1));
                if lhs != rhs {
                    out.push(format!("x{}^{p} relation fails at {d}", i + 1));
                }
            }
        }
        out
    }
}
