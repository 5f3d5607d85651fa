//! The homogeneous coordinate algebra
//! `S(p, λ) = k[u, v, x_1..x_n] / (x_i^{p_i} − λ_{i0} v + λ_{i1} u)`
//! as an `L(p)`-graded vector space with explicit component bases.

use std::fmt;
use std::str::FromStr;

use crate::grading::{GradingElement, WeightSequence};
use crate::linalg::{Field, Matrix, Rational, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("expected {expected} parameter points, got {found}")]
    PointCount { expected: usize, found: usize },
    #[error("parameter point {0} is [0:0]")]
    ZeroPoint(usize),
    #[error("parameter points {0} and {1} coincide on the projective line")]
    RepeatedPoint(usize, usize),
    #[error("field {field} has only {available} projective points, {needed} needed")]
    FieldTooSmall {
        field: Field,
        available: u64,
        needed: usize,
    },
    #[error("coordinate {0} is not defined over the field")]
    Coordinate(String),
    #[error("cannot parse parameter point `{0}` (expected `[a:b]`)")]
    ParsePoint(String),
    #[error("unknown generator `{0}`")]
    ParseGenerator(String),
}

/// One of the algebra generators `u`, `v`, `x_i` (0-based `i`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    U,
    V,
    X(usize),
}

impl Generator {
    /// Position in `[u, v, x_1, ..., x_n]`.
    pub fn index(self) -> usize {
        match self {
            Generator::U => 0,
            Generator::V => 1,
            Generator::X(i) => 2 + i,
        }
    }

    pub fn from_index(i: usize) -> Self {
        match i {
            0 => Generator::U,
            1 => Generator::V,
            k => Generator::X(k - 2),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::U => write!(f, "u"),
            Generator::V => write!(f, "v"),
            Generator::X(i) => write!(f, "x{}", i + 1),
        }
    }
}

impl FromStr for Generator {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "u" => Ok(Generator::U),
            "v" => Ok(Generator::V),
            t => t
                .strip_prefix('x')
                .and_then(|i| i.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .map(|i| Generator::X(i - 1))
                .ok_or_else(|| AlgebraError::ParseGenerator(s.to_string())),
        }
    }
}

/// A point `[λ_0 : λ_1]` of the projective line, first nonzero coordinate 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProjectivePoint {
    pub x0: Scalar,
    pub x1: Scalar,
}

impl ProjectivePoint {
    pub fn new(x0: Scalar, x1: Scalar) -> Option<Self> {
        if !x0.is_zero() {
            let inv = x0.inv()?;
            Some(ProjectivePoint {
                x1: &x1 * &inv,
                x0: x0.field().one(),
            })
        } else if !x1.is_zero() {
            Some(ProjectivePoint {
                x0,
                x1: x1.field().one(),
            })
        } else {
            None
        }
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.x0, self.x1)
    }
}

/// How the parameter points are chosen.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LambdaSpec {
    /// `[1:0], [0:1], [1:1], [1:2], ...`
    Auto,
    Explicit(Vec<(Rational, Rational)>),
}

impl fmt::Display for LambdaSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LambdaSpec::Auto => write!(f, "auto"),
            LambdaSpec::Explicit(pts) => {
                let parts: Vec<String> = pts.iter().map(|(a, b)| format!("[{a}:{b}]")).collect();
                write!(f, "{}", parts.join(","))
            }
        }
    }
}

impl FromStr for LambdaSpec {
    type Err = AlgebraError;

    /// Accepts `auto` or a comma-separated list of `[a:b]`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.eq_ignore_ascii_case("auto") {
            return Ok(LambdaSpec::Auto);
        }
        let mut points = Vec::new();
        let mut rest = t;
        while !rest.is_empty() {
            let rest_trim = rest.trim_start_matches([',', ' ']);
            if rest_trim.is_empty() {
                break;
            }
            let body_end = rest_trim
                .find(']')
                .ok_or_else(|| AlgebraError::ParsePoint(s.to_string()))?;
            let point = &rest_trim[..=body_end];
            points.push(parse_point(point)?);
            rest = &rest_trim[body_end + 1..];
        }
        if points.is_empty() {
            return Err(AlgebraError::ParsePoint(s.to_string()));
        }
        Ok(LambdaSpec::Explicit(points))
    }
}

fn parse_point(s: &str) -> Result<(Rational, Rational), AlgebraError> {
    let err = || AlgebraError::ParsePoint(s.to_string());
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|t| t.strip_suffix(']'))
        .ok_or_else(err)?;
    let (a, b) = inner.split_once(':').ok_or_else(err)?;
    Ok((a.parse().map_err(|_| err())?, b.parse().map_err(|_| err())?))
}

/// One basis monomial `∏ x_i^{e_i} u^a v^b` of a homogeneous component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub x: Vec<u32>,
    pub u: u64,
    pub v: u64,
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (i, &e) in self.x.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(format!("x{}", i + 1)),
                e => parts.push(format!("x{}^{e}", i + 1)),
            }
        }
        for (name, e) in [("u", self.u), ("v", self.v)] {
            match e {
                0 => {}
                1 => parts.push(name.to_string()),
                e => parts.push(format!("{name}^{e}")),
            }
        }
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    pub degree: GradingElement,
    pub monomials: Vec<Monomial>,
}

impl MonomialBasis {
    pub fn dim(&self) -> usize {
        self.monomials.len()
    }
}

/// `S(p, λ)` over a fixed field.
#[derive(Clone, Debug)]
pub struct AlgebraSpec {
    weights: WeightSequence,
    lambda: Vec<ProjectivePoint>,
    field: Field,
    /// `steps[class][gen] = (target class, height increase)`
    steps: Vec<Vec<(usize, i64)>>,
}

impl PartialEq for AlgebraSpec {
    fn eq(&self, other: &Self) -> bool {
        self.weights == other.weights && self.lambda == other.lambda && self.field == other.field
    }
}

impl Eq for AlgebraSpec {}

impl AlgebraSpec {
    pub fn new(
        weights: WeightSequence,
        lambda: &LambdaSpec,
        field: Field,
    ) -> Result<Self, AlgebraError> {
        let n = weights.len();
        let points = match lambda {
            LambdaSpec::Auto => auto_points(field, n)?,
            LambdaSpec::Explicit(raw) => {
                if raw.len() != n {
                    return Err(AlgebraError::PointCount {
                        expected: n,
                        found: raw.len(),
                    });
                }
                raw.iter()
                    .enumerate()
                    .map(|(i, (a, b))| {
                        let conv = |r: &Rational| {
                            field
                                .from_rational(r)
                                .ok_or_else(|| AlgebraError::Coordinate(r.to_string()))
                        };
                        ProjectivePoint::new(conv(a)?, conv(b)?).ok_or(AlgebraError::ZeroPoint(i))
                    })
                    .collect::<Result<Vec<_>, _>>()?
            }
        };
        Self::from_points(weights, points, field)
    }

    pub fn from_points(
        weights: WeightSequence,
        lambda: Vec<ProjectivePoint>,
        field: Field,
    ) -> Result<Self, AlgebraError> {
        if lambda.len() != weights.len() {
            return Err(AlgebraError::PointCount {
                expected: weights.len(),
                found: lambda.len(),
            });
        }
        for i in 0..lambda.len() {
            for j in i + 1..lambda.len() {
                if lambda[i] == lambda[j] {
                    return Err(AlgebraError::RepeatedPoint(i + 1, j + 1));
                }
            }
        }
        let steps = build_steps(&weights);
        Ok(AlgebraSpec {
            weights,
            lambda,
            field,
            steps,
        })
    }

    /// Same parameters with different weights (the reduced algebras `S′`, `S″`).
    pub fn with_weights(&self, weights: WeightSequence) -> Self {
        assert_eq!(weights.len(), self.weights.len());
        let steps = build_steps(&weights);
        AlgebraSpec {
            weights,
            lambda: self.lambda.clone(),
            field: self.field,
            steps,
        }
    }

    pub fn weights(&self) -> &WeightSequence {
        &self.weights
    }

    pub fn lambda(&self) -> &[ProjectivePoint] {
        &self.lambda
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn generators(&self) -> impl Iterator<Item = Generator> {
        (0..self.generator_count()).map(Generator::from_index)
    }

    pub fn generator_count(&self) -> usize {
        self.weights.len() + 2
    }

    pub fn generator_degree(&self, g: Generator) -> GradingElement {
        match g {
            Generator::U | Generator::V => self.weights.c(),
            Generator::X(i) => self.weights.x(i),
        }
    }

    /// Torsion class and height change when multiplying a degree in `class` by `g`.
    pub fn step(&self, class: usize, g: Generator) -> (usize, i64) {
        self.steps[class][g.index()]
    }

    /// Inverse of [`step`](Self::step): the class a degree in `class` came
    /// from under `g`, and the height drop.
    pub fn step_back(&self, class: usize, g: Generator) -> (usize, i64) {
        match g {
            Generator::U | Generator::V => (class, 1),
            Generator::X(i) => {
                let mut t = self.weights.class_torsion(class);
                if t[i] > 0 {
                    t[i] -= 1;
                    (self.weights.class_index(&t), 0)
                } else {
                    t[i] = self.weights.weight(i) - 1;
                    (self.weights.class_index(&t), 1)
                }
            }
        }
    }

    pub fn shifted_by(&self, l: &GradingElement, g: Generator) -> GradingElement {
        self.weights.add(l, &self.generator_degree(g))
    }

    pub fn component_dim(&self, l: &GradingElement) -> usize {
        (l.height() + 1).max(0) as usize
    }

    /// Basis `{∏ x_i^{l_i} u^a v^b : a + b = l}` ordered by `a`.
    pub fn component_basis(&self, l: &GradingElement) -> MonomialBasis {
        let h = l.height();
        let monomials = if h < 0 {
            Vec::new()
        } else {
            (0..=h as u64)
                .map(|a| Monomial {
                    x: l.torsion().to_vec(),
                    u: a,
                    v: h as u64 - a,
                })
                .collect()
        };
        MonomialBasis {
            degree: l.clone(),
            monomials,
        }
    }

    /// Multiplication by `g` from `S_l` to `S_{l + deg g}` in the monomial bases.
    pub fn generator_action(&self, g: Generator, l: &GradingElement) -> Matrix {
        let src = self.component_dim(l);
        let h = l.height();
        match g {
            Generator::U | Generator::V => {
                let mut m = Matrix::zeros(self.field, (h + 2).max(0) as usize, src);
                for a in 0..src {
                    let row = if g == Generator::U { a + 1 } else { a };
                    m.set(row, a, self.field.one());
                }
                m
            }
            Generator::X(i) => {
                if l.coefficient(i) + 1 < self.weights.weight(i) {
                    return Matrix::identity(self.field, src);
                }
                // x_i^{p_i} = λ_{i0} v − λ_{i1} u
                let pt = &self.lambda[i];
                let mut m = Matrix::zeros(self.field, (h + 2).max(0) as usize, src);
                for a in 0..src {
                    m.set(a, a, pt.x0.clone());
                    m.set(a + 1, a, -&pt.x1);
                }
                m
            }
        }
    }

    /// Multiplication by `g^k` out of `S_l`.
    pub fn power_action(&self, g: Generator, k: u32, l: &GradingElement) -> Matrix {
        let mut acc = Matrix::identity(self.field, self.component_dim(l));
        let mut deg = l.clone();
        for _ in 0..k {
            acc = self.generator_action(g, &deg).mul(&acc);
            deg = self.shifted_by(&deg, g);
        }
        acc
    }

    /// Free `k[u,v]`-basis `{∏ x_i^{l_i} : 0 ≤ l_i < p_i}` via the core homomorphism.
    pub fn core_basis(&self) -> Vec<Monomial> {
        (0..self.weights.class_count())
            .map(|c| Monomial {
                x: self.weights.class_torsion(c),
                u: 0,
                v: 0,
            })
            .collect()
    }
}

fn build_steps(weights: &WeightSequence) -> Vec<Vec<(usize, i64)>> {
    let n = weights.len();
    (0..weights.class_count())
        .map(|c| {
            let t = weights.class_torsion(c);
            let mut row = vec![(c, 1), (c, 1)];
            for i in 0..n {
                let mut t2 = t.clone();
                let carry = if t[i] + 1 == weights.weight(i) {
                    t2[i] = 0;
                    1
                } else {
                    t2[i] += 1;
                    0
                };
                row.push((weights.class_index(&t2), carry));
            }
            row
        })
        .collect()
}

fn auto_points(field: Field, n: usize) -> Result<Vec<ProjectivePoint>, AlgebraError> {
    if let Some(available) = field.projective_points() {
        if (available as usize) < n {
            return Err(AlgebraError::FieldTooSmall {
                field,
                available,
                needed: n,
            });
        }
    }
    Ok((0..n)
        .map(|i| match i {
            0 => ProjectivePoint::new(field.one(), field.zero()),
            1 => ProjectivePoint::new(field.zero(), field.one()),
            k => ProjectivePoint::new(field.one(), field.from_int(k as i64 - 1)),
        })
        .map(|p| p.expect("nonzero point"))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s235() -> AlgebraSpec {
        AlgebraSpec::new(
            WeightSequence::new(vec![2, 3, 5]).unwrap(),
            &LambdaSpec::Auto,
            Field::Rational,
        )
        .unwrap()
    }

    #[test]
    fn basis_of_c_is_u_v() {
        let s = s235();
        let b = s.component_basis(&s.weights().c());
        let names: Vec<String> = b.monomials.iter().map(|m| m.to_string()).collect();
        assert_eq!(names, vec!["v", "u"]);
    }

    #[test]
    fn basis_of_top_torsion_and_negative() {
        let s = s235();
        let l = s.weights().element(&[1, 2, 4], 0).unwrap();
        let b = s.component_basis(&l);
        assert_eq!(b.dim(), 1);
        assert_eq!(b.monomials[0].to_string(), "x1*x2^2*x3^4");
        assert_eq!(s.component_basis(&s.weights().multiple_of_c(-1)).dim(), 0);
    }

    #[test]
    fn x1_squared_is_v() {
        // λ_1 = [1:0]
        let s = s235();
        let m = s.generator_action(Generator::X(0), &s.weights().x(0));
        assert_eq!(m, Matrix::from_ints(Field::Rational, &[&[1], &[0]]));
    }

    #[test]
    fn u_on_unit() {
        let s = s235();
        let m = s.generator_action(Generator::U, &s.weights().zero());
        assert_eq!(m, Matrix::from_ints(Field::Rational, &[&[0], &[1]]));
    }

    #[test]
    fn core_basis_size() {
        assert_eq!(s235().core_basis().len(), 30);
        let s11 = AlgebraSpec::new(
            WeightSequence::new(vec![1, 1]).unwrap(),
            &LambdaSpec::Auto,
            Field::Rational,
        )
        .unwrap();
        let core = s11.core_basis();
        assert_eq!(core.len(), 1);
        assert_eq!(core[0].to_string(), "1");
    }

    #[test]
    fn lambda_validation() {
        let w = WeightSequence::new(vec![2, 3, 5]).unwrap();
        let dup: LambdaSpec = "[1:0],[0:1],[2:0]".parse().unwrap();
        assert_eq!(
            AlgebraSpec::new(w.clone(), &dup, Field::Rational),
            Err(AlgebraError::RepeatedPoint(1, 3))
        );
        let zero: LambdaSpec = "[1:0],[0:0],[1:1]".parse().unwrap();
        assert!(AlgebraSpec::new(w.clone(), &zero, Field::Rational).is_err());
        assert!(AlgebraSpec::new(w.clone(), &LambdaSpec::Auto, Field::Prime(2)).is_ok());
        let four = WeightSequence::new(vec![2, 2, 2, 2]).unwrap();
        assert!(matches!(
            AlgebraSpec::new(four, &LambdaSpec::Auto, Field::Prime(2)),
            Err(AlgebraError::FieldTooSmall { .. })
        ));
    }

    #[test]
    fn generator_names() {
        assert_eq!("x3".parse::<Generator>().unwrap(), Generator::X(2));
        assert_eq!(Generator::X(0).to_string(), "x1");
        assert!("x0".parse::<Generator>().is_err());
    }
}
