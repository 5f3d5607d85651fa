use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::algebra::{AlgebraSpec, Generator, ProjectivePoint};
use crate::grading::{HeightWindow, WeightSequence};
use crate::linalg::{Field, Matrix, Rational, Scalar};

use super::{ModuleError, WindowedModule};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentRecord {
    pub degree: String,
    pub dim: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionRecord {
    pub generator: String,
    pub degree: String,
    /// Row-major entries.
    pub matrix: Vec<Vec<String>>,
}

/// Plain-text description of a windowed module, stable under round trips.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDocument {
    pub weights: WeightSequence,
    pub lambda: Vec<String>,
    pub field: String,
    pub window: HeightWindow,
    /// Nonzero components only.
    pub components: Vec<ComponentRecord>,
    /// Nonzero actions only.
    pub actions: Vec<ActionRecord>,
}

impl ModuleDocument {
    pub fn from_module(m: &WindowedModule) -> Self {
        let alg = m.algebra();
        let components = m
            .support()
            .into_iter()
            .map(|(d, dim)| ComponentRecord {
                degree: d.to_string(),
                dim,
            })
            .collect();
        let mut actions = Vec::new();
        for s in 0..m.slot_count() {
            for g in alg.generators() {
                let Some(a) = m.action_slot(s, g) else {
                    continue;
                };
                if a.is_zero() {
                    continue;
                }
                actions.push(ActionRecord {
                    generator: g.to_string(),
                    degree: m.degree(s).to_string(),
                    matrix: (0..a.rows())
                        .map(|i| a.row(i).iter().map(Scalar::to_string).collect())
                        .collect(),
                });
            }
        }
        ModuleDocument {
            weights: alg.weights().clone(),
            lambda: alg
                .lambda()
                .iter()
                .map(ProjectivePoint::to_string)
                .collect(),
            field: alg.field().to_string(),
            window: m.window(),
            components,
            actions,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, ModuleError> {
        serde_json::from_str(text).map_err(|e| ModuleError::Document(e.to_string()))
    }

    /// Rebuilds the module and checks it against `algebra`.
    pub fn to_module(&self, algebra: Arc<AlgebraSpec>) -> Result<WindowedModule, ModuleError> {
        let bad = |s: String| ModuleError::Document(s);
        if *algebra.weights() != self.weights || algebra.field().to_string() != self.field {
            return Err(bad("algebra does not match the document".into()));
        }
        let lambda: Vec<String> = algebra.lambda().iter().map(|p| p.to_string()).collect();
        if lambda != self.lambda {
            return Err(bad("parameter points do not match".into()));
        }
        let field = algebra.field();
        let w = &self.weights;
        let zero = WindowedModule::zero(algebra.clone(), self.window);
        let mut dims = vec![0; zero.slot_count()];
        for c in &self.components {
            let d = w.parse_element(&c.degree).map_err(|e| bad(e.to_string()))?;
            let s = zero
                .slot_of(&d)
                .ok_or_else(|| bad(format!("{d} outside window")))?;
            dims[s] = c.dim;
        }
        let ng = algebra.generator_count();
        let mut actions: Vec<Option<Matrix>> = Vec::with_capacity(dims.len() * ng);
        for s in 0..dims.len() {
            for g in algebra.generators() {
                actions.push(
                    zero.step(s, g)
                        .map(|t| Matrix::zeros(field, dims[t], dims[s])),
                );
            }
        }
        for a in &self.actions {
            let g: Generator = a.generator.parse().map_err(|_| bad(a.generator.clone()))?;
            let d = w.parse_element(&a.degree).map_err(|e| bad(e.to_string()))?;
            let s = zero
                .slot_of(&d)
                .ok_or_else(|| bad(format!("{d} outside window")))?;
            let rows = a
                .matrix
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|x| parse_scalar(field, x).ok_or_else(|| bad(x.clone())))
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let cols = rows.first().map_or(0, Vec::len);
            actions[s * ng + g.index()] = Some(Matrix::from_rows(field, rows, cols));
        }
        WindowedModule::from_parts(algebra, self.window, dims, actions)
    }
}

fn parse_scalar(field: Field, s: &str) -> Option<Scalar> {
    let r: Rational = s.parse().ok()?;
    field.from_rational(&r)
}
