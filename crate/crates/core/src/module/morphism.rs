use std::sync::Arc;

use crate::linalg::{Matrix, Scalar};

use super::construct::{quotient_by_subspaces, Quotient};
use super::{GradingElement, WindowedModule};

/// A degree-preserving `S`-linear map, one matrix per component.
///
/// Source and target share a window; `maps[slot]` is `dim N_d × dim M_d`.
#[derive(Clone, Debug)]
pub struct GradedMorphism {
    source: Arc<WindowedModule>,
    target: Arc<WindowedModule>,
    maps: Vec<Matrix>,
}

impl PartialEq for GradedMorphism {
    fn eq(&self, other: &Self) -> bool {
        self.source.window() == other.source.window() && self.maps == other.maps
    }
}

impl GradedMorphism {
    pub fn new(
        source: Arc<WindowedModule>,
        target: Arc<WindowedModule>,
        maps: Vec<Matrix>,
    ) -> Self {
        assert_eq!(source.window(), target.window(), "morphism windows");
        assert!(source.algebra() == target.algebra(), "morphism algebras");
        assert_eq!(maps.len(), source.slot_count(), "one map per component");
        for (s, m) in maps.iter().enumerate() {
            assert_eq!(
                m.shape(),
                (target.dim_slot(s), source.dim_slot(s)),
                "map shape at {}",
                source.degree(s)
            );
        }
        GradedMorphism {
            source,
            target,
            maps,
        }
    }

    pub fn from_fn(
        source: Arc<WindowedModule>,
        target: Arc<WindowedModule>,
        mut f: impl FnMut(usize, &GradingElement) -> Matrix,
    ) -> Self {
        let maps = (0..source.slot_count())
            .map(|s| f(s, &source.degree(s)))
            .collect();
        Self::new(source, target, maps)
    }

    pub fn zero(source: Arc<WindowedModule>, target: Arc<WindowedModule>) -> Self {
        let field = source.field();
        let t = target.clone();
        let src = source.clone();
        Self::from_fn(source, target, |s, _| {
            Matrix::zeros(field, t.dim_slot(s), src.dim_slot(s))
        })
    }

    pub fn identity(m: Arc<WindowedModule>) -> Self {
        let field = m.field();
        let mm = m.clone();
        Self::from_fn(m.clone(), m, |s, _| Matrix::identity(field, mm.dim_slot(s)))
    }

    pub fn source(&self) -> &Arc<WindowedModule> {
        &self.source
    }

    pub fn target(&self) -> &Arc<WindowedModule> {
        &self.target
    }

    pub(crate) fn map_slot(&self, slot: usize) -> &Matrix {
        &self.maps[slot]
    }

    pub fn maps(&self) -> &[Matrix] {
        &self.maps
    }

    /// The component at `d`, if `d` is in the window.
    pub fn component(&self, d: &GradingElement) -> Option<&Matrix> {
        self.source.slot_of(d).map(|s| &self.maps[s])
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMorphism) -> GradedMorphism {
        assert_eq!(
            other.target.window(),
            self.source.window(),
            "composable windows"
        );
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.mul(b))
            .collect();
        GradedMorphism::new(other.source.clone(), self.target.clone(), maps)
    }

    pub fn add(&self, other: &GradedMorphism) -> GradedMorphism {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.add(b))
            .collect();
        GradedMorphism::new(self.source.clone(), self.target.clone(), maps)
    }

    pub fn sub(&self, other: &GradedMorphism) -> GradedMorphism {
        let maps = self
            .maps
            .iter()
            .zip(&other.maps)
            .map(|(a, b)| a.sub(b))
            .collect();
        GradedMorphism::new(self.source.clone(), self.target.clone(), maps)
    }

    pub fn scale(&self, c: &Scalar) -> GradedMorphism {
        let maps = self.maps.iter().map(|a| a.scale(c)).collect();
        GradedMorphism::new(self.source.clone(), self.target.clone(), maps)
    }

    /// Linear combination `Σ c_k f_k` of morphisms with equal endpoints.
    pub fn combination(parts: &[GradedMorphism], coeffs: &[Scalar]) -> Option<GradedMorphism> {
        let first = parts.first()?;
        let mut acc = GradedMorphism::zero(first.source.clone(), first.target.clone());
        for (f, c) in parts.iter().zip(coeffs) {
            if !c.is_zero() {
                acc = acc.add(&f.scale(c));
            }
        }
        Some(acc)
    }

    pub fn is_zero(&self) -> bool {
        self.maps.iter().all(Matrix::is_zero)
    }

    /// Same morphism with both ends replaced by equal modules.
    pub fn retarget(&self, source: Arc<WindowedModule>, target: Arc<WindowedModule>) -> Self {
        GradedMorphism::new(source, target, self.maps.clone())
    }

    /// Degrees where `f ∘ g_M ≠ g_N ∘ f` for some generator `g`.
    pub fn commutation_failures(&self) -> Vec<String> {
        let m = &self.source;
        let n = &self.target;
        let mut out = Vec::new();
        for s in 0..m.slot_count() {
            for g in m.algebra().generators() {
                let (Some(t), Some(am), Some(an)) =
                    (m.step(s, g), m.action_slot(s, g), n.action_slot(s, g))
                else {
                    continue;
                };
                if self.maps[t].mul(am) != an.mul(&self.maps[s]) {
                    out.push(format!("{g} at {}", m.degree(s)));
                }
            }
        }
        out
    }

    pub fn is_homomorphism(&self) -> bool {
        self.commutation_failures().is_empty()
    }

    /// Every component is invertible.
    pub fn is_isomorphism(&self) -> bool {
        self.maps.iter().all(Matrix::is_invertible)
    }

    /// Every component is injective.
    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.cols())
    }

    pub fn is_surjective(&self) -> bool {
        self.maps.iter().all(|m| m.rank() == m.rows())
    }

    pub fn inverse(&self) -> Option<GradedMorphism> {
        let maps = self
            .maps
            .iter()
            .map(Matrix::inverse)
            .collect::<Option<Vec<_>>>()?;
        Some(GradedMorphism::new(
            self.target.clone(),
            self.source.clone(),
            maps,
        ))
    }

    /// Kernel module with its inclusion.
    pub fn kernel(&self) -> (Arc<WindowedModule>, GradedMorphism) {
        let m = &self.source;
        let field = m.field();
        let mut incl = Vec::with_capacity(self.maps.len());
        let mut free = Vec::with_capacity(self.maps.len());
        for f in &self.maps {
            let (_, piv) = f.rref();
            let fr: Vec<usize> = (0..f.cols()).filter(|c| !piv.contains(c)).collect();
            incl.push(f.kernel_matrix());
            free.push(fr);
        }
        let k = Arc::new(WindowedModule::build(
            m.algebra().clone(),
            m.window(),
            |s, _| incl[s].cols(),
            |g, s, _, t| {
                // kernel basis vectors are unit vectors on the free columns
                let img = m.action_slot(s, g).expect("inner action").mul(&incl[s]);
                let out = img.select_rows(&free[t]);
                debug_assert_eq!(incl[t].mul(&out), img);
                if out.rows() == 0 && out.cols() == 0 {
                    Matrix::zeros(field, 0, 0)
                } else {
                    out
                }
            },
        ));
        let inclusion = GradedMorphism::new(k.clone(), m.clone(), incl);
        (k, inclusion)
    }

    /// Cokernel with its projection from the target.
    pub fn cokernel(&self) -> Quotient {
        quotient_by_subspaces(self.target.clone(), &self.maps).expect("images form a submodule")
    }

    /// Image as a submodule of the target, with the inclusion.
    pub fn image(&self) -> (Arc<WindowedModule>, GradedMorphism) {
        self.cokernel().projection.kernel()
    }

    pub fn rank_total(&self) -> usize {
        self.maps.iter().map(Matrix::rank).sum()
    }
}
