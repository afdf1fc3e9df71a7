use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::autodiff::CMat;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ParamKind {
    /// Linear operator; initialised `N(0, 1) / fan_in`.
    Weight { fan_in: usize },
    /// Initialised `N(0, 1)`.
    Bias,
}

/// Declared shape of one parameter tensor.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamShape {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub kind: ParamKind,
    /// Real-valued parameters keep a zero imaginary part during training.
    pub real: bool,
}

impl ParamShape {
    pub fn weight(name: impl Into<String>, rows: usize, cols: usize, fan_in: usize, real: bool) -> Self {
        Self {
            name: name.into(),
            rows,
            cols,
            kind: ParamKind::Weight { fan_in },
            real,
        }
    }

    pub fn bias(name: impl Into<String>, rows: usize, cols: usize, real: bool) -> Self {
        Self {
            name: name.into(),
            rows,
            cols,
            kind: ParamKind::Bias,
            real,
        }
    }

    pub fn len(&self) -> usize {
        self.rows * self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Parameter tensors in declared order.
#[derive(Clone, Debug, PartialEq)]
pub struct ParamSet {
    pub shapes: Vec<ParamShape>,
    pub values: Vec<CMat>,
}

impl ParamSet {
    /// Draws every tensor from its initial distribution with a seeded
    /// ChaCha stream, in declared order.
    pub fn init(shapes: Vec<ParamShape>, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values = shapes
            .iter()
            .map(|s| {
                let scale = match s.kind {
                    ParamKind::Weight { fan_in } => 1.0 / fan_in.max(1) as f64,
                    ParamKind::Bias => 1.0,
                };
                CMat::randn(s.rows, s.cols, scale, !s.real, &mut rng)
            })
            .collect();
        Self { shapes, values }
    }

    pub fn zeros(shapes: Vec<ParamShape>) -> Self {
        let values = shapes.iter().map(|s| CMat::zeros(s.rows, s.cols)).collect();
        Self { shapes, values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total number of complex entries.
    pub fn count(&self) -> usize {
        self.shapes.iter().map(|s| s.len()).sum()
    }

    pub fn index(&self, name: &str) -> Option<usize> {
        self.shapes.iter().position(|s| s.name == name)
    }

    pub fn get(&self, name: &str) -> Option<&CMat> {
        self.index(name).map(|i| &self.values[i])
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut CMat> {
        self.index(name).map(move |i| &mut self.values[i])
    }

    /// Flat `(re, im)` list in declared order.
    pub fn to_flat(&self) -> Vec<f64> {
        self.values
            .iter()
            .flat_map(|m| m.data.iter().flat_map(|z| [z.re, z.im]))
            .collect()
    }

    pub fn load_flat(&mut self, flat: &[f64]) -> crate::Result<()> {
        if flat.len() != 2 * self.count() {
            return Err(crate::Error::Format(format!(
                "expected {} parameter values, got {}",
                2 * self.count(),
                flat.len()
            )));
        }
        let mut it = flat.chunks_exact(2);
        for m in &mut self.values {
            for z in &mut m.data {
                let p = it.next().expect("length checked");
                *z = num_complex::Complex64::new(p[0], p[1]);
            }
        }
        Ok(())
    }
}
