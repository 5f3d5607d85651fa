use crate::algebra::Generator;
use crate::grading::{GradingElement, HeightWindow};
use crate::linalg::Matrix;

use super::{insufficient, ModuleError, WindowedModule};

/// One torsion coset of `M` viewed as a graded `k[u,v]`-module.
#[derive(Clone, Debug)]
pub struct CoreModule {
    pub torsion: Vec<u32>,
    pub window: HeightWindow,
    /// `dims[h − h_min]`
    pub dims: Vec<usize>,
    /// `u[h − h_min]: M_h → M_{h+1}`, `None` on the top row.
    pub u: Vec<Option<Matrix>>,
    pub v: Vec<Option<Matrix>>,
}

impl CoreModule {
    fn dim(&self, h: i64) -> usize {
        if self.window.contains(h) {
            self.dims[(h - self.window.h_min) as usize]
        } else {
            0
        }
    }

    fn maps(&self, h: i64) -> Option<(&Matrix, &Matrix)> {
        if !self.window.contains(h) {
            return None;
        }
        let i = (h - self.window.h_min) as usize;
        Some((self.u[i].as_ref()?, self.v[i].as_ref()?))
    }

    /// `Tor_i^{k[u,v]}(M, k)` in height `h` via the Koszul complex
    /// `M_{h−2} → M_{h−1}² → M_h`; rows below the window count as zero.
    pub fn tor(&self, i: usize, h: i64) -> usize {
        let field_zero = |r, c| Matrix::zeros(self.field(), r, c);
        let d1 = match self.maps(h - 1) {
            Some((u, v)) => Matrix::hstack(self.field(), self.dim(h), &[u, v]),
            None => field_zero(self.dim(h), 2 * self.dim(h - 1)),
        };
        let d2 = match self.maps(h - 2) {
            Some((u, v)) => {
                let nu = u.scale(&-self.field().one());
                Matrix::vstack(self.field(), self.dim(h - 2), &[v, &nu])
            }
            None => field_zero(2 * self.dim(h - 1), self.dim(h - 2)),
        };
        let r1 = d1.rank();
        let r2 = d2.rank();
        match i {
            0 => self.dim(h) - r1,
            1 => 2 * self.dim(h - 1) - r1 - r2,
            2 => self.dim(h - 2) - r2,
            _ => 0,
        }
    }

    fn field(&self) -> crate::linalg::Field {
        self.u
            .iter()
            .chain(&self.v)
            .flatten()
            .map(Matrix::field)
            .next()
            .unwrap_or(crate::linalg::Field::Rational)
    }
}

/// The coset `{(t; h)}` of `M` with its `u`, `v` actions.
pub fn coset_restriction(m: &WindowedModule, torsion: &[u32]) -> CoreModule {
    let w = m.algebra().weights();
    let window = m.window();
    let mut dims = Vec::new();
    let mut u = Vec::new();
    let mut v = Vec::new();
    for h in window.h_min..=window.h_max {
        let d = w.element(torsion, h).expect("normal torsion");
        dims.push(m.dim(&d).expect("inside"));
        u.push(m.action(Generator::U, &d).cloned());
        v.push(m.action(Generator::V, &d).cloned());
    }
    CoreModule {
        torsion: torsion.to_vec(),
        window,
        dims,
        u,
        v,
    }
}

/// `dim Tor_i^{k[u,v]}(M|_t, k)` at `(t; h)`.
pub fn koszul_tor(
    m: &WindowedModule,
    torsion: &[u32],
    i: usize,
    h: i64,
) -> Result<usize, ModuleError> {
    if !m.row_is_zero(m.window().h_min) {
        return Err(insufficient(
            "koszul",
            "module is nonzero on the bottom row",
        ));
    }
    Ok(coset_restriction(m, torsion).tor(i, h))
}

/// Witness for the Cohen–Macaulay test: every coset is free over `k[u,v]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CmCertificate {
    pub is_cohen_macaulay: bool,
    /// Degrees with `Tor_1 ≠ 0`, with their dimension.
    pub obstructions: Vec<(GradingElement, usize)>,
    /// Generator degrees over `k[u,v]` with multiplicity.
    pub core_generators: Vec<(GradingElement, usize)>,
}

/// Tests whether `M` is maximal Cohen–Macaulay, i.e. free over `k[u,v]`.
pub fn is_cohen_macaulay(m: &WindowedModule) -> Result<CmCertificate, ModuleError> {
    if !m.row_is_zero(m.window().h_min) {
        return Err(insufficient(
            "cohen-macaulay",
            "module is nonzero on the bottom row",
        ));
    }
    let w = m.algebra().weights();
    let mut obstructions = Vec::new();
    let mut core_generators = Vec::new();
    for c in 0..w.class_count() {
        let t = w.class_torsion(c);
        let core = coset_restriction(m, &t);
        for h in m.window().h_min..=m.window().h_max {
            let d = w.element(&t, h).expect("normal torsion");
            let t1 = core.tor(1, h);
            if t1 > 0 {
                obstructions.push((d.clone(), t1));
            }
            let t0 = core.tor(0, h);
            if t0 > 0 {
                core_generators.push((d, t0));
            }
        }
    }
    obstructions.sort();
    core_generators.sort();
    Ok(CmCertificate {
        is_cohen_macaulay: obstructions.is_empty(),
        obstructions,
        core_generators,
    })
}

/// Composition factors `k(l)` with multiplicity; `k(l)` sits in degree `−l`.
pub fn composition_factors(
    m: &WindowedModule,
) -> Result<Vec<(GradingElement, usize)>, ModuleError> {
    let win = m.window();
    if !m.row_is_zero(win.h_min) || !m.row_is_zero(win.h_max) {
        return Err(ModuleError::NotFiniteDimensional);
    }
    let w = m.algebra().weights();
    let mut out: Vec<(GradingElement, usize)> = m
        .support()
        .into_iter()
        .map(|(d, k)| (w.neg(&d), k))
        .collect();
    out.sort();
    Ok(out)
}
