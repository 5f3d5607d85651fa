use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::Generator;
use crate::grading::GradingElement;
use crate::linalg::{Field, Matrix, Scalar};

use super::construct::free_module;
use super::{insufficient, GradedMorphism, ModuleError, WindowedModule};

/// Generators of the source must sit at least this many rows below the top
/// of the window, so that their first relations are visible.
pub const HOM_MARGIN: i64 = 2;

const DEFAULT_SEED: u64 = 0x5eed_0001;
const RANDOM_TRIALS: usize = 24;

/// A homogeneous element of a module.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorVector {
    pub degree: GradingElement,
    pub vector: Vec<Scalar>,
}

fn require_bottom_zero(m: &WindowedModule, op: &'static str) -> Result<(), ModuleError> {
    let h = m.window().h_min;
    if m.row_is_zero(h) {
        Ok(())
    } else {
        Err(insufficient(
            op,
            format!("module is nonzero on the bottom row {h}"),
        ))
    }
}

/// A minimal homogeneous generating set, found degree by degree as a
/// complement of everything reached from below.
pub fn minimal_generators(m: &WindowedModule) -> Result<Vec<GeneratorVector>, ModuleError> {
    require_bottom_zero(m, "generators")?;
    let field = m.field();
    let mut out = Vec::new();
    for s in 0..m.slot_count() {
        let n = m.dim_slot(s);
        if n == 0 {
            continue;
        }
        let mut blocks = Vec::new();
        for g in m.algebra().generators() {
            if let Some(p) = m.step_back(s, g) {
                if let Some(a) = m.action_slot(p, g) {
                    blocks.push(a.clone());
                }
            }
        }
        let refs: Vec<&Matrix> = blocks.iter().collect();
        let reached = Matrix::hstack(field, n, &refs);
        for c in reached.complement_indices() {
            let mut v = vec![field.zero(); n];
            v[c] = field.one();
            out.push(GeneratorVector {
                degree: m.degree(s),
                vector: v,
            });
        }
    }
    Ok(out)
}

/// `blocks[slot][a]` is the action of the `a`-th basis monomial of
/// `S_{d − start}` on the columns of the seed matrix.
pub(crate) struct Orbit {
    pub(crate) blocks: Vec<Option<Vec<Matrix>>>,
}

impl Orbit {
    /// Columns `monomial_a · seed` stacked side by side, or an empty block.
    fn stacked(&self, n: &WindowedModule, slot: usize) -> Matrix {
        let rows = n.dim_slot(slot);
        match &self.blocks[slot] {
            Some(b) => {
                let refs: Vec<&Matrix> = b.iter().collect();
                Matrix::hstack(n.field(), rows, &refs)
            }
            None => Matrix::zeros(n.field(), rows, 0),
        }
    }
}

pub(crate) fn orbit(n: &WindowedModule, start: &GradingElement, seed: &Matrix) -> Orbit {
    let alg = n.algebra();
    let w = alg.weights();
    let mut blocks: Vec<Option<Vec<Matrix>>> = vec![None; n.slot_count()];
    let top = n.window().h_max - start.height();
    let mut classes: Vec<Vec<u32>> = (0..w.class_count()).map(|c| w.class_torsion(c)).collect();
    classes.sort_by_key(|t| t.iter().sum::<u32>());
    for he in 0..=top.max(-1) {
        for t in &classes {
            let e = w.element(t, he).expect("normal torsion");
            let Some(slot) = n.slot_of(&w.add(start, &e)) else {
                continue;
            };
            let entry = if he == 0 && t.iter().all(|&x| x == 0) {
                vec![seed.clone()]
            } else if let Some(i) = t.iter().position(|&x| x > 0) {
                let mut t2 = t.clone();
                t2[i] -= 1;
                let prev_e = w.element(&t2, he).expect("normal torsion");
                let prev = n
                    .slot_of(&w.add(start, &prev_e))
                    .expect("orbit step inside");
                let act = n.action_slot(prev, Generator::X(i)).expect("orbit action");
                blocks[prev]
                    .as_ref()
                    .expect("orbit order")
                    .iter()
                    .map(|b| act.mul(b))
                    .collect()
            } else {
                let prev_e = w.multiple_of_c(he - 1);
                let prev = n
                    .slot_of(&w.add(start, &prev_e))
                    .expect("orbit step inside");
                let pb = blocks[prev].as_ref().expect("orbit order");
                let u = n.action_slot(prev, Generator::U).expect("orbit action");
                let v = n.action_slot(prev, Generator::V).expect("orbit action");
                (0..=he as usize)
                    .map(|a| {
                        if a == 0 {
                            v.mul(&pb[0])
                        } else {
                            u.mul(&pb[a - 1])
                        }
                    })
                    .collect()
            };
            blocks[slot] = Some(entry);
        }
    }
    Orbit { blocks }
}

/// A free cover `F = ⊕ S(−g_j) → M` built from minimal generators.
#[derive(Clone, Debug)]
pub struct Cover {
    pub generators: Vec<GeneratorVector>,
    pub free: Arc<WindowedModule>,
    pub projection: GradedMorphism,
}

pub fn cover(m: Arc<WindowedModule>) -> Result<Cover, ModuleError> {
    let generators = minimal_generators(&m)?;
    let alg = m.algebra().clone();
    let w = alg.weights().clone();
    let field = m.field();
    let shifts: Vec<GradingElement> = generators.iter().map(|g| w.neg(&g.degree)).collect();
    let free = Arc::new(free_module(alg.clone(), &shifts, m.window()));
    let orbits: Vec<Orbit> = generators
        .iter()
        .map(|g| {
            let seed = Matrix::from_columns(field, g.vector.len(), std::slice::from_ref(&g.vector));
            orbit(&m, &g.degree, &seed)
        })
        .collect();
    let maps = (0..m.slot_count())
        .map(|s| {
            let parts: Vec<Matrix> = orbits.iter().map(|o| o.stacked(&m, s)).collect();
            let refs: Vec<&Matrix> = parts.iter().collect();
            Matrix::hstack(field, m.dim_slot(s), &refs)
        })
        .collect();
    let projection = GradedMorphism::new(free.clone(), m, maps);
    debug_assert!(projection.is_homomorphism());
    if !projection.is_surjective() {
        return Err(insufficient(
            "cover",
            "generators found in the window do not span",
        ));
    }
    Ok(Cover {
        generators,
        free,
        projection,
    })
}

fn common(
    m: &Arc<WindowedModule>,
    n: &Arc<WindowedModule>,
) -> Result<(Arc<WindowedModule>, Arc<WindowedModule>), ModuleError> {
    if m.algebra() != n.algebra() {
        return Err(ModuleError::AlgebraMismatch);
    }
    if m.window() == n.window() {
        return Ok((m.clone(), n.clone()));
    }
    let w = m.window().intersect(&n.window());
    Ok((Arc::new(m.restrict(w)?), Arc::new(n.restrict(w)?)))
}

/// A basis of `Hom(M, N)` on the common window.
///
/// A homomorphism is fixed by where it sends the generators of `M`; the
/// admissible images are those killed by every relation visible in the window.
pub fn hom_space(
    m: &Arc<WindowedModule>,
    n: &Arc<WindowedModule>,
) -> Result<Vec<GradedMorphism>, ModuleError> {
    let (m, n) = common(m, n)?;
    let field = m.field();
    let cov = cover(m.clone())?;
    let top = m.window().h_max - HOM_MARGIN;
    if let Some(g) = cov.generators.iter().find(|g| g.degree.height() > top) {
        return Err(insufficient(
            "hom",
            format!(
                "generator at {} is too close to the top of {}",
                g.degree,
                m.window()
            ),
        ));
    }
    let mut offsets = Vec::new();
    let mut unknowns = 0;
    let orbits: Vec<Orbit> = cov
        .generators
        .iter()
        .map(|g| {
            let k = n.dim(&g.degree).expect("generator inside");
            offsets.push((unknowns, k));
            unknowns += k;
            orbit(&n, &g.degree, &Matrix::identity(field, k))
        })
        .collect();

    let pis: Vec<&Matrix> = (0..m.slot_count())
        .map(|s| cov.projection.map_slot(s))
        .collect();
    // Σ_{j,a} z_{j,a} (monomial_a on N) y_j = 0 for each relation z
    let mut acc = Matrix::zeros(field, 0, unknowns);
    for s in 0..m.slot_count() {
        if acc.rows() == unknowns {
            break;
        }
        let rows_n = n.dim_slot(s);
        if rows_n == 0 {
            continue;
        }
        let relations = pis[s].kernel_basis();
        if relations.is_empty() {
            continue;
        }
        let mut block = Matrix::zeros(field, rows_n * relations.len(), unknowns);
        for (r, z) in relations.iter().enumerate() {
            let mut col = 0;
            for (j, o) in orbits.iter().enumerate() {
                let (off, k) = offsets[j];
                let Some(bl) = &o.blocks[s] else {
                    continue;
                };
                for mat in bl {
                    let c = &z[col];
                    col += 1;
                    if c.is_zero() {
                        continue;
                    }
                    for i in 0..rows_n {
                        for kk in 0..k {
                            let v = mat.get(i, kk);
                            if v.is_zero() {
                                continue;
                            }
                            let mut cur = block.get(r * rows_n + i, off + kk).clone();
                            cur.add_mul_assign(c, v);
                            block.set(r * rows_n + i, off + kk, cur);
                        }
                    }
                }
            }
        }
        let stacked = Matrix::vstack(field, unknowns, &[&acc, &block]);
        let (red, piv) = stacked.rref();
        let keep: Vec<usize> = (0..piv.len()).collect();
        acc = red.select_rows(&keep);
    }
    let solutions = acc.kernel_basis();

    let mut rights = Vec::with_capacity(m.slot_count());
    for s in 0..m.slot_count() {
        let d = m.dim_slot(s);
        let r = pis[s]
            .solve_matrix(&Matrix::identity(field, d))
            .ok_or_else(|| insufficient("hom", "cover is not onto"))?;
        rights.push(r);
    }
    let basis = solutions
        .iter()
        .map(|y| {
            let maps = (0..m.slot_count())
                .map(|s| {
                    let mut cols = Vec::new();
                    for (j, o) in orbits.iter().enumerate() {
                        let (off, k) = offsets[j];
                        if let Some(bl) = &o.blocks[s] {
                            for mat in bl {
                                cols.push(mat.mul_vec(&y[off..off + k]));
                            }
                        }
                    }
                    let psi = Matrix::from_columns(field, n.dim_slot(s), &cols);
                    psi.mul(&rights[s])
                })
                .collect();
            let f = GradedMorphism::new(m.clone(), n.clone(), maps);
            debug_assert!(f.is_homomorphism(), "{:?}", f.commutation_failures());
            f
        })
        .collect();
    Ok(basis)
}

fn random_scalar(field: Field, rng: &mut ChaCha8Rng) -> Scalar {
    match field {
        Field::Rational => field.from_int(rng.gen_range(-3..=3)),
        Field::Prime(p) => field.from_int(rng.gen_range(0..p as i64)),
    }
}

/// An isomorphism `M → N`, if one is found among `Hom(M, N)`.
///
/// Random combinations come first, then a deterministic sweep over single
/// basis elements and pairs. `None` means no witness was found.
pub fn is_isomorphic_seeded(
    m: &Arc<WindowedModule>,
    n: &Arc<WindowedModule>,
    seed: u64,
) -> Result<Option<GradedMorphism>, ModuleError> {
    let (m, n) = common(m, n)?;
    if (0..m.slot_count()).any(|s| m.dim_slot(s) != n.dim_slot(s)) {
        return Ok(None);
    }
    if m.is_zero() {
        return Ok(Some(GradedMorphism::zero(m, n)));
    }
    let basis = hom_space(&m, &n)?;
    if basis.is_empty() {
        return Ok(None);
    }
    let field = m.field();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RANDOM_TRIALS {
        let coeffs: Vec<Scalar> = basis
            .iter()
            .map(|_| random_scalar(field, &mut rng))
            .collect();
        let f = GradedMorphism::combination(&basis, &coeffs).expect("nonempty basis");
        if f.is_isomorphism() {
            return Ok(Some(f));
        }
    }
    for (i, f) in basis.iter().enumerate() {
        if f.is_isomorphism() {
            return Ok(Some(f.clone()));
        }
        for g in &basis[i + 1..] {
            let h = f.add(g);
            if h.is_isomorphism() {
                return Ok(Some(h));
            }
        }
    }
    Ok(None)
}

pub fn is_isomorphic(
    m: &Arc<WindowedModule>,
    n: &Arc<WindowedModule>,
) -> Result<Option<GradedMorphism>, ModuleError> {
    is_isomorphic_seeded(m, n, DEFAULT_SEED)
}

/// `Ω M`, the kernel of the minimal free cover.
pub fn syzygy(m: Arc<WindowedModule>) -> Result<Arc<WindowedModule>, ModuleError> {
    let c = cover(m)?;
    Ok(c.projection.kernel().0)
}

/// A minimal free resolution, truncated once a syzygy is free.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Resolution {
    /// Generator degrees of `Ω^k M` for each step `k`.
    pub generator_degrees: Vec<Vec<GradingElement>>,
    /// Total window dimension of `Ω^k M`.
    pub syzygy_dims: Vec<usize>,
    /// Projective dimension when the resolution closed within the step budget.
    pub length: Option<usize>,
}

/// Resolves `M` until some syzygy is free (its cover is injective on the window).
pub fn projective_dimension(
    m: Arc<WindowedModule>,
    max_steps: usize,
) -> Result<Resolution, ModuleError> {
    let mut res = Resolution {
        generator_degrees: Vec::new(),
        syzygy_dims: Vec::new(),
        length: None,
    };
    let mut cur = m;
    for k in 0..=max_steps {
        res.syzygy_dims.push(cur.total_dim());
        let c = cover(cur.clone())?;
        let top = cur.window().h_max - 1;
        if let Some(g) = c.generators.iter().find(|g| g.degree.height() > top) {
            return Err(insufficient(
                "resolution",
                format!("step {k} has a generator at {} near the top", g.degree),
            ));
        }
        res.generator_degrees
            .push(c.generators.iter().map(|g| g.degree.clone()).collect());
        if c.projection.is_injective() {
            res.length = Some(k);
            break;
        }
        cur = c.projection.kernel().0;
    }
    Ok(res)
}

/// Images of the minimal generators of the source under `f`.
pub fn generator_images(
    f: &GradedMorphism,
) -> Result<Vec<(GeneratorVector, Vec<Scalar>)>, ModuleError> {
    let gens = minimal_generators(f.source())?;
    Ok(gens
        .into_iter()
        .map(|g| {
            let img = f.component(&g.degree).expect("inside").mul_vec(&g.vector);
            (g, img)
        })
        .collect())
}

/// Rebuilds the homomorphism sending the minimal generators of `M` to `images`.
///
/// Fails when the images violate a relation visible in the window.
pub fn morphism_from_images(
    m: &Arc<WindowedModule>,
    n: &Arc<WindowedModule>,
    images: &[Vec<Scalar>],
) -> Result<GradedMorphism, ModuleError> {
    let (m, n) = common(m, n)?;
    let field = m.field();
    let cov = cover(m.clone())?;
    if images.len() != cov.generators.len() {
        return Err(ModuleError::Document(format!(
            "{} images for {} generators",
            images.len(),
            cov.generators.len()
        )));
    }
    let orbits: Vec<Orbit> = cov
        .generators
        .iter()
        .zip(images)
        .map(|(g, y)| {
            let seed = Matrix::from_columns(field, y.len(), std::slice::from_ref(y));
            orbit(&n, &g.degree, &seed)
        })
        .collect();
    let mut maps = Vec::with_capacity(m.slot_count());
    for s in 0..m.slot_count() {
        let parts: Vec<Matrix> = orbits.iter().map(|o| o.stacked(&n, s)).collect();
        let refs: Vec<&Matrix> = parts.iter().collect();
        let psi = Matrix::hstack(field, n.dim_slot(s), &refs);
        let pi = cov.projection.map_slot(s);
        let rel = pi.kernel_matrix();
        if !psi.mul(&rel).is_zero() {
            return Err(ModuleError::Document(format!(
                "generator images violate a relation at {}",
                m.degree(s)
            )));
        }
        let right = pi
            .solve_matrix(&Matrix::identity(field, m.dim_slot(s)))
            .ok_or_else(|| insufficient("rebuild", "cover is not onto"))?;
        maps.push(psi.mul(&right));
    }
    Ok(GradedMorphism::new(m, n, maps))
}
