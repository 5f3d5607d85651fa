//! Explicit adjunction isomorphisms for `(i′_λ, i′)` and `(i′, i′_ρ)`.

use std::sync::Arc;

use crate::algebra::Generator;
use crate::functor::{FunctorError, FunctorKind};
use crate::grading::{Embedding, GradingElement};
use crate::linalg::Matrix;
use crate::module::{insufficient_window, GradedMorphism, WindowedModule};

/// Adjunction data for one embedding of gradings.
#[derive(Clone, Debug)]
pub struct Adjunctions {
    pub embedding: Embedding,
}

fn same_window(a: &WindowedModule, b: &WindowedModule) -> Result<(), FunctorError> {
    if a.window() != b.window() {
        return Err(insufficient_window(
            "adjunction",
            format!("windows {} and {} differ", a.window(), b.window()),
        )
        .into());
    }
    Ok(())
}

impl Adjunctions {
    pub fn new(embedding: Embedding) -> Self {
        Adjunctions { embedding }
    }

    pub fn i(&self) -> FunctorKind {
        FunctorKind::IPrime(self.embedding.clone())
    }

    pub fn i_lambda(&self) -> FunctorKind {
        FunctorKind::ILambda(self.embedding.clone())
    }

    pub fn i_rho(&self) -> FunctorKind {
        FunctorKind::IRho(self.embedding.clone())
    }

    fn n(&self) -> usize {
        self.embedding.index()
    }

    fn gap(&self) -> u32 {
        self.embedding.gap()
    }

    /// `φ′(m) + gap·x⃗_n`, as an element of the full grading.
    fn lift(&self, m: &GradingElement) -> GradingElement {
        let mut t = m.torsion().to_vec();
        t[self.n()] += self.gap();
        self.embedding
            .target()
            .element(&t, m.height())
            .expect("normal")
    }

    fn embed(&self, m: &GradingElement) -> GradingElement {
        self.embedding
            .target()
            .element(m.torsion(), m.height())
            .expect("normal")
    }

    /// The lowered degree feeding `(i′M)_l`.
    fn drop(&self, l: &GradingElement) -> GradingElement {
        let mut t = l.torsion().to_vec();
        let n = self.n();
        t[n] = t[n].saturating_sub(self.gap());
        if l.coefficient(n) < self.gap() {
            t[n] = 0;
        }
        self.embedding
            .source()
            .element(&t, l.height())
            .expect("normal")
    }

    /// `Φ: Hom(i′_λN, M) → Hom(N, i′M)`.
    pub fn phi(
        &self,
        f: &GradedMorphism,
        n_mod: &Arc<WindowedModule>,
    ) -> Result<GradedMorphism, FunctorError> {
        same_window(n_mod, f.source())?;
        let im = Arc::new(self.i().apply(f.target())?);
        let gap = self.gap();
        let n = self.n();
        Ok(GradedMorphism::from_fn(n_mod.clone(), im, |_, l| {
            let from = self.drop(l);
            let fm = f.component(&from).expect("same heights");
            let ln = l.coefficient(n);
            if ln >= gap {
                fm.clone()
            } else {
                let up = n_mod
                    .power_action(Generator::X(n), gap - ln, l)
                    .expect("same height path");
                fm.mul(&up)
            }
        }))
    }

    /// `Φ⁻¹: Hom(N, i′M) → Hom(i′_λN, M)`.
    pub fn phi_inverse(
        &self,
        g: &GradedMorphism,
        m_mod: &Arc<WindowedModule>,
    ) -> Result<GradedMorphism, FunctorError> {
        same_window(m_mod, g.source())?;
        let ln = Arc::new(self.i_lambda().apply(g.source())?);
        Ok(GradedMorphism::from_fn(ln, m_mod.clone(), |_, m| {
            g.component(&self.lift(m)).expect("same heights").clone()
        }))
    }

    /// `Ψ: Hom(i′M, N) → Hom(M, i′_ρN)`.
    pub fn psi(
        &self,
        g: &GradedMorphism,
        m_mod: &Arc<WindowedModule>,
    ) -> Result<GradedMorphism, FunctorError> {
        same_window(m_mod, g.source())?;
        let rn = Arc::new(self.i_rho().apply(g.target())?);
        let n = self.n();
        Ok(GradedMorphism::from_fn(m_mod.clone(), rn, |_, m| {
            let at = if m.coefficient(n) == 0 {
                self.embed(m)
            } else {
                self.lift(m)
            };
            g.component(&at).expect("same heights").clone()
        }))
    }

    /// `Ψ⁻¹: Hom(M, i′_ρN) → Hom(i′M, N)`.
    pub fn psi_inverse(
        &self,
        h: &GradedMorphism,
        n_mod: &Arc<WindowedModule>,
    ) -> Result<GradedMorphism, FunctorError> {
        same_window(n_mod, h.source())?;
        let im = Arc::new(self.i().apply(h.source())?);
        let gap = self.gap();
        let n = self.n();
        Ok(GradedMorphism::from_fn(im, n_mod.clone(), |_, l| {
            let from = self.drop(l);
            let hm: &Matrix = h.component(&from).expect("same heights");
            let ln = l.coefficient(n);
            if ln > gap {
                hm.clone()
            } else {
                let mut base = l.torsion().to_vec();
                base[n] = 0;
                let base = self
                    .embedding
                    .target()
                    .element(&base, l.height())
                    .expect("normal");
                let up = n_mod
                    .power_action(Generator::X(n), ln, &base)
                    .expect("same height path");
                up.mul(hm)
            }
        }))
    }

    /// `η_N = Φ(id): N → i′ i′_λ N`.
    pub fn unit_left(&self, n_mod: &Arc<WindowedModule>) -> Result<GradedMorphism, FunctorError> {
        let ln = Arc::new(self.i_lambda().apply(n_mod)?);
        self.phi(&GradedMorphism::identity(ln), n_mod)
    }

    /// `ε_M = Φ⁻¹(id): i′_λ i′ M → M`.
    pub fn counit_left(&self, m_mod: &Arc<WindowedModule>) -> Result<GradedMorphism, FunctorError> {
        let im = Arc::new(self.i().apply(m_mod)?);
        self.phi_inverse(&GradedMorphism::identity(im), m_mod)
    }

    /// `η′_M = Ψ(id): M → i′_ρ i′ M`.
    pub fn unit_right(&self, m_mod: &Arc<WindowedModule>) -> Result<GradedMorphism, FunctorError> {
        let im = Arc::new(self.i().apply(m_mod)?);
        self.psi(&GradedMorphism::identity(im), m_mod)
    }

    /// `ε′_N = Ψ⁻¹(id): i′ i′_ρ N → N`.
    pub fn counit_right(
        &self,
        n_mod: &Arc<WindowedModule>,
    ) -> Result<GradedMorphism, FunctorError> {
        let rn = Arc::new(self.i_rho().apply(n_mod)?);
        self.psi_inverse(&GradedMorphism::identity(rn), n_mod)
    }

    /// `ε_{i′_λN} ∘ i′_λ(η_N)` and `i′(ε_M) ∘ η_{i′M}`, each of which should be an identity.
    pub fn left_triangles(
        &self,
        n_mod: &Arc<WindowedModule>,
        m_mod: &Arc<WindowedModule>,
    ) -> Result<(GradedMorphism, GradedMorphism), FunctorError> {
        let eta = self.unit_left(n_mod)?;
        let l_eta = self.i_lambda().apply_morphism(&eta)?;
        let ln = Arc::new(self.i_lambda().apply(n_mod)?);
        let first = self.counit_left(&ln)?.compose(&l_eta);

        let im = Arc::new(self.i().apply(m_mod)?);
        let eps = self.counit_left(m_mod)?;
        let r_eps = self.i().apply_morphism(&eps)?;
        let second = r_eps.compose(&self.unit_left(&im)?);
        Ok((first, second))
    }

    /// `ε′_{i′M} ∘ i′(η′_M)` and `i′_ρ(ε′_N) ∘ η′_{i′_ρN}`.
    pub fn right_triangles(
        &self,
        m_mod: &Arc<WindowedModule>,
        n_mod: &Arc<WindowedModule>,
    ) -> Result<(GradedMorphism, GradedMorphism), FunctorError> {
        let eta = self.unit_right(m_mod)?;
        let i_eta = self.i().apply_morphism(&eta)?;
        let im = Arc::new(self.i().apply(m_mod)?);
        let first = self.counit_right(&im)?.compose(&i_eta);

        let rn = Arc::new(self.i_rho().apply(n_mod)?);
        let eps = self.counit_right(n_mod)?;
        let r_eps = self.i_rho().apply_morphism(&eps)?;
        let second = r_eps.compose(&self.unit_right(&rn)?);
        Ok((first, second))
    }
}
