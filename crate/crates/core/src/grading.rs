//! The grading group `L(p)`: generators `x⃗_1..x⃗_n` subject to
//! `p_1 x⃗_1 = ... = p_n x⃗_n = c⃗`, in normal form `Σ l_i x⃗_i + l c⃗`
//! with `0 ≤ l_i < p_i`.

use std::fmt;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GradingError {
    #[error("weight sequence needs at least two entries, got {0}")]
    TooShort(usize),
    #[error("weights must be positive, got {0:?}")]
    NonPositiveWeight(Vec<u32>),
    #[error("element {element} does not belong to L{weights}")]
    WeightMismatch { element: String, weights: String },
    #[error("reduced weight {reduced} must lie in 1..={weight} at position {index}")]
    BadReduction {
        index: usize,
        reduced: u32,
        weight: u32,
    },
    #[error("height window [{0}, {1}] is empty")]
    EmptyWindow(i64, i64),
    #[error("cannot parse grading element `{0}`")]
    Parse(String),
}

/// Positive weights `p_1, ..., p_n` with `n ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct WeightSequence {
    weights: Vec<u32>,
}

impl TryFrom<Vec<u32>> for WeightSequence {
    type Error = GradingError;
    fn try_from(v: Vec<u32>) -> Result<Self, Self::Error> {
        WeightSequence::new(v)
    }
}

impl From<WeightSequence> for Vec<u32> {
    fn from(w: WeightSequence) -> Self {
        w.weights
    }
}

/// A normal-form element of `L(p)`.
///
/// Ordered by height first, so sorted collections iterate bottom-up.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GradingElement {
    height: i64,
    torsion: Vec<u32>,
}

impl GradingElement {
    pub fn height(&self) -> i64 {
        self.height
    }

    pub fn torsion(&self) -> &[u32] {
        &self.torsion
    }

    pub fn coefficient(&self, i: usize) -> u32 {
        self.torsion[i]
    }
}

impl fmt::Display for GradingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, t) in self.torsion.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{t}")?;
        }
        write!(f, ";{})", self.height)
    }
}

impl WeightSequence {
    pub fn new(weights: Vec<u32>) -> Result<Self, GradingError> {
        if weights.len() < 2 {
            return Err(GradingError::TooShort(weights.len()));
        }
        if weights.contains(&0) {
            return Err(GradingError::NonPositiveWeight(weights));
        }
        Ok(WeightSequence { weights })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    /// Number of torsion classes, `∏ p_i`.
    pub fn class_count(&self) -> usize {
        self.weights.iter().map(|&p| p as usize).product()
    }

    /// Same sequence with position `index` replaced.
    pub fn with_weight(&self, index: usize, weight: u32) -> Result<Self, GradingError> {
        let mut w = self.weights.clone();
        w[index] = weight;
        Self::new(w)
    }

    /// Folds arbitrary coefficients into normal form using `p_i x⃗_i = c⃗`.
    pub fn normalize(&self, raw: &[i64], height: i64) -> GradingElement {
        assert_eq!(raw.len(), self.len(), "coefficient count");
        let mut h = height;
        let torsion = raw
            .iter()
            .zip(&self.weights)
            .map(|(&l, &p)| {
                let p = p as i64;
                h += l.div_euclid(p);
                l.rem_euclid(p) as u32
            })
            .collect();
        GradingElement { height: h, torsion }
    }

    pub fn element(&self, torsion: &[u32], height: i64) -> Result<GradingElement, GradingError> {
        let e = GradingElement {
            height,
            torsion: torsion.to_vec(),
        };
        self.check(&e)?;
        Ok(e)
    }

    pub fn contains(&self, l: &GradingElement) -> bool {
        l.torsion.len() == self.len() && l.torsion.iter().zip(&self.weights).all(|(t, p)| t < p)
    }

    fn check(&self, l: &GradingElement) -> Result<(), GradingError> {
        if self.contains(l) {
            Ok(())
        } else {
            Err(GradingError::WeightMismatch {
                element: l.to_string(),
                weights: self.to_string(),
            })
        }
    }

    pub fn zero(&self) -> GradingElement {
        GradingElement {
            height: 0,
            torsion: vec![0; self.len()],
        }
    }

    /// The canonical element `c⃗`.
    pub fn c(&self) -> GradingElement {
        self.multiple_of_c(1)
    }

    pub fn multiple_of_c(&self, k: i64) -> GradingElement {
        GradingElement {
            height: k,
            torsion: vec![0; self.len()],
        }
    }

    /// The generator `x⃗_i` (0-based index).
    pub fn x(&self, i: usize) -> GradingElement {
        let mut raw = vec![0; self.len()];
        raw[i] = 1;
        self.normalize(&raw, 0)
    }

    pub fn add(&self, a: &GradingElement, b: &GradingElement) -> GradingElement {
        debug_assert!(self.contains(a) && self.contains(b));
        let raw: Vec<i64> = a
            .torsion
            .iter()
            .zip(&b.torsion)
            .map(|(&x, &y)| x as i64 + y as i64)
            .collect();
        self.normalize(&raw, a.height + b.height)
    }

    pub fn checked_add(
        &self,
        a: &GradingElement,
        b: &GradingElement,
    ) -> Result<GradingElement, GradingError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.add(a, b))
    }

    pub fn neg(&self, a: &GradingElement) -> GradingElement {
        let raw: Vec<i64> = a.torsion.iter().map(|&x| -(x as i64)).collect();
        self.normalize(&raw, -a.height)
    }

    pub fn sub(&self, a: &GradingElement, b: &GradingElement) -> GradingElement {
        self.add(a, &self.neg(b))
    }

    /// `k · a`.
    pub fn scale(&self, k: i64, a: &GradingElement) -> GradingElement {
        let raw: Vec<i64> = a.torsion.iter().map(|&x| k * x as i64).collect();
        self.normalize(&raw, k * a.height)
    }

    /// `k x⃗_i`.
    pub fn x_multiple(&self, i: usize, k: i64) -> GradingElement {
        let mut raw = vec![0; self.len()];
        raw[i] = k;
        self.normalize(&raw, 0)
    }

    /// Mixed-radix index of a torsion vector, in `0..class_count()`.
    pub fn class_index(&self, torsion: &[u32]) -> usize {
        let mut idx = 0usize;
        for (t, p) in torsion.iter().zip(&self.weights) {
            idx = idx * *p as usize + *t as usize;
        }
        idx
    }

    pub fn class_torsion(&self, mut idx: usize) -> Vec<u32> {
        let mut t = vec![0; self.len()];
        for i in (0..self.len()).rev() {
            let p = self.weights[i] as usize;
            t[i] = (idx % p) as u32;
            idx /= p;
        }
        t
    }

    /// Every normal form with height inside `w`, bottom row first.
    pub fn enumerate_window(&self, w: HeightWindow) -> Vec<GradingElement> {
        let classes: Vec<Vec<u32>> = (0..self.class_count())
            .map(|c| self.class_torsion(c))
            .collect();
        (w.h_min..=w.h_max)
            .flat_map(|h| {
                classes.iter().map(move |t| GradingElement {
                    height: h,
                    torsion: t.clone(),
                })
            })
            .collect()
    }

    /// Parses `(l_1,...,l_n;l)`; coefficients need not be reduced.
    pub fn parse_element(&self, s: &str) -> Result<GradingElement, GradingError> {
        let err = || GradingError::Parse(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(err)?;
        let (tors, height) = inner.split_once(';').ok_or_else(err)?;
        let raw: Vec<i64> = tors
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<Result<_, _>>()
            .map_err(|_| err())?;
        if raw.len() != self.len() {
            return Err(err());
        }
        let h: i64 = height.trim().parse().map_err(|_| err())?;
        Ok(self.normalize(&raw, h))
    }
}

impl fmt::Display for WeightSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.weights.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Inclusive band of heights; the window is every degree whose height lies in it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HeightWindow {
    pub h_min: i64,
    pub h_max: i64,
}

impl HeightWindow {
    pub fn new(h_min: i64, h_max: i64) -> Result<Self, GradingError> {
        if h_min > h_max {
            return Err(GradingError::EmptyWindow(h_min, h_max));
        }
        Ok(HeightWindow { h_min, h_max })
    }

    pub fn contains(&self, h: i64) -> bool {
        self.h_min <= h && h <= self.h_max
    }

    pub fn heights(&self) -> usize {
        (self.h_max - self.h_min + 1).max(0) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.h_min > self.h_max
    }

    pub fn intersect(&self, other: &HeightWindow) -> HeightWindow {
        HeightWindow {
            h_min: self.h_min.max(other.h_min),
            h_max: self.h_max.min(other.h_max),
        }
    }

    /// Window translated by `delta` heights.
    pub fn offset(&self, delta: i64) -> HeightWindow {
        HeightWindow {
            h_min: self.h_min + delta,
            h_max: self.h_max + delta,
        }
    }
}

impl fmt::Display for HeightWindow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.h_min, self.h_max)
    }
}

/// The set map `φ′: L(p′) → L(p)` where `p′` lowers one weight.
///
/// It keeps coefficients and height verbatim, so it is injective but not
/// additive in general.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Embedding {
    source: WeightSequence,
    target: WeightSequence,
    index: usize,
}

impl Embedding {
    pub fn new(target: WeightSequence, index: usize, reduced: u32) -> Result<Self, GradingError> {
        let weight = target.weight(index);
        if reduced == 0 || reduced > weight {
            return Err(GradingError::BadReduction {
                index,
                reduced,
                weight,
            });
        }
        let source = target.with_weight(index, reduced)?;
        Ok(Embedding {
            source,
            target,
            index,
        })
    }

    pub fn source(&self) -> &WeightSequence {
        &self.source
    }

    pub fn target(&self) -> &WeightSequence {
        &self.target
    }

    pub fn index(&self) -> usize {
        self.index
    }

    pub fn reduced_weight(&self) -> u32 {
        self.source.weight(self.index)
    }

    /// `p_n − p′_n`.
    pub fn gap(&self) -> u32 {
        self.target.weight(self.index) - self.source.weight(self.index)
    }

    pub fn embed(&self, l: &GradingElement) -> GradingElement {
        debug_assert!(self.source.contains(l));
        l.clone()
    }

    pub fn preimage(&self, l: &GradingElement) -> Option<GradingElement> {
        debug_assert!(self.target.contains(l));
        (l.torsion[self.index] < self.reduced_weight()).then(|| l.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p235() -> WeightSequence {
        WeightSequence::new(vec![2, 3, 5]).unwrap()
    }

    #[test]
    fn normalize_examples() {
        let p = p235();
        assert_eq!(p.normalize(&[2, 0, 0], 0).to_string(), "(0,0,0;1)");
        assert_eq!(p.normalize(&[0, 4, 0], 0).to_string(), "(0,1,0;1)");
        let m = p.normalize(&[0, 0, -1], 0);
        assert_eq!(m.to_string(), "(0,0,4;-1)");
        // adding x3 back lands on zero
        assert_eq!(p.add(&m, &p.x(2)), p.zero());
    }

    #[test]
    fn x1_twice_is_c() {
        let p = p235();
        assert_eq!(p.add(&p.x(0), &p.x(0)), p.c());
    }

    #[test]
    fn weight_one_generator_is_c() {
        let p = WeightSequence::new(vec![1, 3]).unwrap();
        assert_eq!(p.x(0), p.c());
    }

    #[test]
    fn mismatch_is_reported() {
        let p = p235();
        let q = WeightSequence::new(vec![2, 2]).unwrap();
        assert!(p.checked_add(&p.zero(), &q.zero()).is_err());
        assert!(p.checked_add(&p.x(1), &p.x(2)).is_ok());
    }

    #[test]
    fn window_counts() {
        let p = p235();
        assert_eq!(
            p.enumerate_window(HeightWindow::new(0, 0).unwrap()).len(),
            30
        );
        let q = WeightSequence::new(vec![2, 2]).unwrap();
        assert_eq!(
            q.enumerate_window(HeightWindow::new(-1, 1).unwrap()).len(),
            12
        );
        assert!(HeightWindow::new(2, 1).is_err());
    }

    #[test]
    fn embedding_examples() {
        let e = Embedding::new(p235(), 2, 2).unwrap();
        let src = e.source().clone();
        let x3 = src.x(2);
        assert_eq!(e.embed(&x3).to_string(), "(0,0,1;0)");
        assert_eq!(e.embed(&src.c()), p235().c());
        // not additive
        let lhs = e.embed(&src.add(&x3, &x3));
        let rhs = p235().add(&e.embed(&x3), &e.embed(&x3));
        assert_eq!(lhs, p235().c());
        assert_eq!(rhs.to_string(), "(0,0,2;0)");
        assert_ne!(lhs, rhs);
        let l = p235().element(&[0, 0, 3], 0).unwrap();
        assert!(e.preimage(&l).is_none());
        assert_eq!(e.preimage(&e.embed(&x3)), Some(x3));
    }

    #[test]
    fn parse_round_trip() {
        let p = p235();
        let l = p.parse_element("(1, 2, 4; -3)").unwrap();
        assert_eq!(p.parse_element(&l.to_string()).unwrap(), l);
        assert_eq!(
            p.parse_element("(0,0,-1;0)").unwrap().to_string(),
            "(0,0,4;-1)"
        );
        assert!(p.parse_element("(1,2;0)").is_err());
    }

    #[test]
    fn class_index_round_trip() {
        let p = p235();
        for i in 0..p.class_count() {
            assert_eq!(p.class_index(&p.class_torsion(i)), i);
        }
    }
}
