//! The degreewise functors between graded module categories for a lowered
//! weight, degree twists, and the composites built from them.

use std::fmt;
use std::sync::Arc;

use crate::algebra::{AlgebraSpec, Generator};
use crate::grading::{Embedding, GradingElement, GradingError, WeightSequence};
use crate::module::{shift_module, GradedMorphism, ModuleError, WindowedModule};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FunctorError {
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Grading(#[from] GradingError),
    #[error("{functor} expects modules graded by {expected}, got {found}")]
    WrongGrading {
        functor: String,
        expected: String,
        found: String,
    },
    #[error("this functor needs exactly three weights, got {0}")]
    NeedsThreeWeights(usize),
}

/// A functor on windowed modules.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FunctorKind {
    /// `i′`: from the lowered weight up to the full one.
    IPrime(Embedding),
    /// `i′_λ`, left adjoint of `i′`.
    ILambda(Embedding),
    /// `i′_ρ`, right adjoint of `i′`.
    IRho(Embedding),
    /// `M ↦ M(l)` on modules graded by `weights`.
    Twist(WeightSequence, GradingElement),
    /// Applied left to right.
    Composite(String, Vec<FunctorKind>),
}

impl fmt::Display for FunctorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FunctorKind::IPrime(e) => write!(f, "i[{}<-{}]", e.target(), e.source()),
            FunctorKind::ILambda(e) => write!(f, "i_lambda[{}->{}]", e.target(), e.source()),
            FunctorKind::IRho(e) => write!(f, "i_rho[{}->{}]", e.target(), e.source()),
            FunctorKind::Twist(_, l) => write!(f, "twist{l}"),
            FunctorKind::Composite(name, _) => write!(f, "{name}"),
        }
    }
}

impl FunctorKind {
    /// Grading group the input must carry.
    pub fn source_weights(&self) -> &WeightSequence {
        match self {
            FunctorKind::IPrime(e) => e.source(),
            FunctorKind::ILambda(e) | FunctorKind::IRho(e) => e.target(),
            FunctorKind::Twist(w, _) => w,
            FunctorKind::Composite(_, parts) => parts.first().expect("nonempty").source_weights(),
        }
    }

    pub fn target_weights(&self) -> &WeightSequence {
        match self {
            FunctorKind::IPrime(e) => e.target(),
            FunctorKind::ILambda(e) | FunctorKind::IRho(e) => e.source(),
            FunctorKind::Twist(w, _) => w,
            FunctorKind::Composite(_, parts) => parts.last().expect("nonempty").target_weights(),
        }
    }

    /// Builds a composite, checking that consecutive gradings agree.
    pub fn composite(name: &str, parts: Vec<FunctorKind>) -> Result<Self, FunctorError> {
        assert!(!parts.is_empty(), "empty composite");
        for pair in parts.windows(2) {
            if pair[0].target_weights() != pair[1].source_weights() {
                return Err(FunctorError::WrongGrading {
                    functor: name.to_string(),
                    expected: pair[1].source_weights().to_string(),
                    found: pair[0].target_weights().to_string(),
                });
            }
        }
        Ok(FunctorKind::Composite(name.to_string(), parts))
    }

    fn check_input(&self, m: &WindowedModule) -> Result<(), FunctorError> {
        let found = m.algebra().weights();
        if found != self.source_weights() {
            return Err(FunctorError::WrongGrading {
                functor: self.to_string(),
                expected: self.source_weights().to_string(),
                found: found.to_string(),
            });
        }
        Ok(())
    }

    fn output_algebra(&self, input: &Arc<AlgebraSpec>) -> Arc<AlgebraSpec> {
        let w = self.target_weights();
        if input.weights() == w {
            input.clone()
        } else {
            Arc::new(input.with_weights(w.clone()))
        }
    }

    pub fn apply(&self, m: &WindowedModule) -> Result<WindowedModule, FunctorError> {
        self.check_input(m)?;
        match self {
            FunctorKind::Twist(_, l) => Ok(shift_module(m, l)?),
            FunctorKind::Composite(_, parts) => {
                let mut cur = m.clone();
                for p in parts {
                    cur = p.apply(&cur)?;
                }
                Ok(cur)
            }
            _ => {
                let rule = Relabel::new(self);
                let alg = self.output_algebra(m.algebra());
                Ok(WindowedModule::from_fn(
                    alg,
                    m.window(),
                    |d| m.dim(&rule.source(d)).expect("same heights"),
                    |g, d| {
                        let (k, from) = (rule.power(d, g), rule.source(d));
                        m.power_action(g, k, &from)
                            .expect("action path inside the window")
                    },
                ))
            }
        }
    }

    /// The functor on a morphism, with freshly built endpoints.
    pub fn apply_morphism(&self, f: &GradedMorphism) -> Result<GradedMorphism, FunctorError> {
        let src = Arc::new(self.apply(f.source())?);
        let tgt = Arc::new(self.apply(f.target())?);
        self.apply_morphism_between(f, src, tgt)
    }

    /// The functor on a morphism whose image endpoints are already known.
    pub fn apply_morphism_between(
        &self,
        f: &GradedMorphism,
        src: Arc<WindowedModule>,
        tgt: Arc<WindowedModule>,
    ) -> Result<GradedMorphism, FunctorError> {
        self.check_input(f.source())?;
        match self {
            FunctorKind::Twist(w, l) => Ok(GradedMorphism::from_fn(src, tgt, |_, d| {
                f.component(&w.add(d, l))
                    .expect("shifted degree inside")
                    .clone()
            })),
            FunctorKind::Composite(_, parts) => {
                let mut cur = f.clone();
                for (i, p) in parts.iter().enumerate() {
                    cur = if i + 1 == parts.len() {
                        p.apply_morphism_between(&cur, src.clone(), tgt.clone())?
                    } else {
                        p.apply_morphism(&cur)?
                    };
                }
                Ok(cur)
            }
            _ => {
                let rule = Relabel::new(self);
                Ok(GradedMorphism::from_fn(src, tgt, |_, d| {
                    f.component(&rule.source(d)).expect("same heights").clone()
                }))
            }
        }
    }
}

/// Degree map and exceptional `x_n` powers of the three basic functors.
struct Relabel<'a> {
    kind: &'a FunctorKind,
    emb: &'a Embedding,
}

impl<'a> Relabel<'a> {
    fn new(kind: &'a FunctorKind) -> Self {
        let emb = match kind {
            FunctorKind::IPrime(e) | FunctorKind::ILambda(e) | FunctorKind::IRho(e) => e,
            _ => unreachable!("relabel on a basic functor"),
        };
        Relabel { kind, emb }
    }

    /// Degree of the input module feeding output degree `d`.
    fn source(&self, d: &GradingElement) -> GradingElement {
        let n = self.emb.index();
        let gap = self.emb.gap();
        let mut t = d.torsion().to_vec();
        let w = match self.kind {
            FunctorKind::IPrime(e) => {
                t[n] = t[n].saturating_sub(gap);
                e.source()
            }
            FunctorKind::ILambda(e) => {
                t[n] += gap;
                e.target()
            }
            FunctorKind::IRho(e) => {
                if t[n] > 0 {
                    t[n] += gap;
                }
                e.target()
            }
            _ => unreachable!(),
        };
        w.element(&t, d.height())
            .expect("relabelled torsion is normal")
    }

    /// Power of `g` on the input realising the action of `g` out of `d`.
    fn power(&self, d: &GradingElement, g: Generator) -> u32 {
        let n = self.emb.index();
        if g != Generator::X(n) {
            return 1;
        }
        let gap = self.emb.gap();
        let ln = d.coefficient(n);
        match self.kind {
            FunctorKind::IPrime(_) => u32::from(ln >= gap),
            FunctorKind::ILambda(_) if ln + 1 == self.emb.reduced_weight() => gap + 1,
            // the layer l_n = 0 sits gap + 1 steps below l_n = 1
            FunctorKind::IRho(_) if ln == 0 => gap + 1,
            _ => 1,
        }
    }
}

/// The functors attached to a three-weight sequence and a lowered third weight.
#[derive(Clone, Debug)]
pub struct TheoremFunctors {
    pub weights: WeightSequence,
    /// `p′_3`
    pub reduced: u32,
    /// `L′ → L`, third weight `p′_3`.
    pub prime: Embedding,
    /// `L″ → L`, third weight `p″_3 = p_3 − p′_3 + 1`.
    pub double: Embedding,
}

impl TheoremFunctors {
    pub fn new(weights: &WeightSequence, reduced: u32) -> Result<Self, FunctorError> {
        if weights.len() != 3 {
            return Err(FunctorError::NeedsThreeWeights(weights.len()));
        }
        let p3 = weights.weight(2);
        let prime = Embedding::new(weights.clone(), 2, reduced)?;
        let double = Embedding::new(weights.clone(), 2, p3 + 1 - reduced)?;
        Ok(TheoremFunctors {
            weights: weights.clone(),
            reduced,
            prime,
            double,
        })
    }

    /// `p″_3`
    pub fn double_weight(&self) -> u32 {
        self.double.reduced_weight()
    }

    fn x3(&self, k: i64) -> FunctorKind {
        FunctorKind::Twist(self.weights.clone(), self.weights.x_multiple(2, k))
    }

    fn x3_double(&self, k: i64) -> FunctorKind {
        let w = self.double.source().clone();
        let l = w.x_multiple(2, k);
        FunctorKind::Twist(w, l)
    }

    pub fn i(&self) -> FunctorKind {
        FunctorKind::IPrime(self.prime.clone())
    }

    pub fn i_lambda(&self) -> FunctorKind {
        FunctorKind::ILambda(self.prime.clone())
    }

    pub fn i_rho(&self) -> FunctorKind {
        FunctorKind::IRho(self.prime.clone())
    }

    pub fn ii(&self) -> FunctorKind {
        FunctorKind::IPrime(self.double.clone())
    }

    pub fn ii_lambda(&self) -> FunctorKind {
        FunctorKind::ILambda(self.double.clone())
    }

    pub fn ii_rho(&self) -> FunctorKind {
        FunctorKind::IRho(self.double.clone())
    }

    /// `N ↦ i″_λ(N((1 − p′_3) x⃗_3))`
    pub fn j(&self) -> FunctorKind {
        let r = self.reduced as i64;
        FunctorKind::composite("j", vec![self.x3(1 - r), self.ii_lambda()]).expect("typed")
    }

    /// `N″ ↦ (i″(N″(−x⃗_3)))(p′_3 x⃗_3)`
    pub fn j_lambda(&self) -> FunctorKind {
        let r = self.reduced as i64;
        FunctorKind::composite("j_lambda", vec![self.x3_double(-1), self.ii(), self.x3(r)])
            .expect("typed")
    }

    /// `N″ ↦ (i″ N″)((p′_3 − 1) x⃗_3)`
    pub fn j_rho(&self) -> FunctorKind {
        let r = self.reduced as i64;
        FunctorKind::composite("j_rho", vec![self.ii(), self.x3(r - 1)]).expect("typed")
    }

    /// `N ↦ (i″_ρ(N(−p′_3 x⃗_3)))(x⃗_3)`, which should coincide with `j`.
    pub fn j_via_rho(&self) -> FunctorKind {
        let r = self.reduced as i64;
        FunctorKind::composite(
            "j_via_rho",
            vec![self.x3(-r), self.ii_rho(), self.x3_double(1)],
        )
        .expect("typed")
    }

    /// Looks a functor up by its report name.
    pub fn by_name(&self, name: &str) -> Option<FunctorKind> {
        Some(match name {
            "i" => self.i(),
            "i_lambda" => self.i_lambda(),
            "i_rho" => self.i_rho(),
            "ii" => self.ii(),
            "ii_lambda" => self.ii_lambda(),
            "ii_rho" => self.ii_rho(),
            "j" => self.j(),
            "j_lambda" => self.j_lambda(),
            "j_rho" => self.j_rho(),
            _ => return None,
        })
    }
}
