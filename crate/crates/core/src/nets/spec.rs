use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::aliasing::Activation;
use crate::error::{Error, Result};
use crate::spectral::{Basis, GridKind};

/// Neural operator family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Architecture {
    #[serde(rename = "sno_ch")]
    SnoCh,
    #[serde(rename = "sno_f")]
    SnoF,
    #[serde(rename = "xsno_ch")]
    XsnoCh,
    #[serde(rename = "xsno_f")]
    XsnoF,
    #[serde(rename = "xcsno_ch")]
    XcsnoCh,
    #[serde(rename = "xcsno_f")]
    XcsnoF,
    #[serde(rename = "fno")]
    Fno,
    #[serde(rename = "deeponet")]
    DeepOnet,
}

impl Architecture {
    pub const ALL: [Architecture; 8] = [
        Architecture::SnoCh,
        Architecture::SnoF,
        Architecture::XsnoCh,
        Architecture::XsnoF,
        Architecture::XcsnoCh,
        Architecture::XcsnoF,
        Architecture::Fno,
        Architecture::DeepOnet,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Architecture::SnoCh => "sno_ch",
            Architecture::SnoF => "sno_f",
            Architecture::XsnoCh => "xsno_ch",
            Architecture::XsnoF => "xsno_f",
            Architecture::XcsnoCh => "xcsno_ch",
            Architecture::XcsnoF => "xcsno_f",
            Architecture::Fno => "fno",
            Architecture::DeepOnet => "deeponet",
        }
    }

    /// Whether the model maps coefficient vectors rather than grid values.
    pub fn on_coefficients(self) -> bool {
        matches!(self, Architecture::SnoCh | Architecture::SnoF)
    }

    fn chebyshev_flavour(self) -> bool {
        matches!(
            self,
            Architecture::SnoCh | Architecture::XsnoCh | Architecture::XcsnoCh
        )
    }
}

impl fmt::Display for Architecture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Architecture {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace(['(', ')', '-'], "_");
        let norm = norm.trim_end_matches('_');
        Architecture::ALL
            .into_iter()
            .find(|a| a.name() == norm)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown architecture {s}")))
    }
}

/// Shape and hyper-parameters of a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub architecture: Architecture,
    /// Coefficients (SNO) or grid points (all others) per input axis. For FNO
    /// this is the training grid; the model itself runs on any grid.
    pub input_shape: Vec<usize>,
    /// Coefficients or grid points per output axis. Ignored by FNO (output on
    /// the input grid) and DeepONet (output at arbitrary query points).
    pub output_shape: Vec<usize>,
    /// Hidden size per axis of the integral-operator layers.
    pub width: Vec<usize>,
    /// Integral-operator layers (SNO family), spectral layers (FNO) or dense
    /// layers per sub-network (DeepONet).
    pub layers: usize,
    /// Number of functions carried between layers (FNO: channel width,
    /// DeepONet: neurons per layer).
    pub features: usize,
    /// Retained Fourier modes per axis (FNO only).
    pub modes: usize,
    pub activation: Activation,
    /// Restrict SNO-family weights to real values.
    #[serde(default)]
    pub real_weights: bool,
}

impl ModelSpec {
    pub fn dim(&self) -> usize {
        self.input_shape.len()
    }

    /// Architecture sizes used at full scale.
    pub fn paper(architecture: Architecture, dim: usize) -> Self {
        use Architecture::*;
        let per_axis = |ch: usize, f: usize| -> Vec<usize> {
            match (dim, architecture.chebyshev_flavour()) {
                (1, true) => vec![ch],
                (1, false) => vec![f],
                (_, true) => vec![ch, ch],
                (_, false) => vec![ch, f],
            }
        };
        let grid = vec![100; dim];
        match architecture {
            SnoCh | SnoF | XsnoCh | XsnoF => {
                let shape = if architecture.on_coefficients() {
                    per_axis(100, 51)
                } else {
                    grid.clone()
                };
                Self {
                    architecture,
                    input_shape: shape.clone(),
                    output_shape: shape,
                    width: per_axis(100, 51),
                    layers: 3,
                    features: 20,
                    modes: 0,
                    activation: Activation::Softplus,
                    real_weights: false,
                }
            }
            XcsnoCh | XcsnoF => Self {
                architecture,
                input_shape: grid.clone(),
                output_shape: grid,
                width: per_axis(100, 51),
                layers: 3,
                features: 20,
                modes: 0,
                activation: Activation::Softplus,
                real_weights: false,
            },
            Fno => Self {
                architecture,
                input_shape: grid.clone(),
                output_shape: grid,
                width: vec![],
                layers: 4,
                features: if dim == 1 { 64 } else { 32 },
                modes: if dim == 1 { 16 } else { 12 },
                activation: Activation::Relu,
                real_weights: true,
            },
            DeepOnet => Self {
                architecture,
                input_shape: grid.clone(),
                output_shape: grid,
                width: vec![],
                layers: 4,
                features: 100,
                modes: 0,
                activation: Activation::Tanh,
                real_weights: true,
            },
        }
    }

    /// CPU-sized variant: the same structure with fewer coefficients,
    /// neurons and features.
    pub fn desk(architecture: Architecture, dim: usize) -> Self {
        use Architecture::*;
        let mut s = Self::paper(architecture, dim);
        let shrink = |v: &[usize]| -> Vec<usize> {
            v.iter().map(|&n| if n == 51 { 16 } else if n == 100 { 24 } else { n }).collect()
        };
        match architecture {
            SnoCh | SnoF | XsnoCh | XsnoF | XcsnoCh | XcsnoF => {
                if architecture.on_coefficients() {
                    s.input_shape = shrink(&s.input_shape);
                    s.output_shape = shrink(&s.output_shape);
                } else {
                    s.input_shape = vec![32; dim];
                    s.output_shape = vec![32; dim];
                }
                s.width = shrink(&s.width);
                s.features = 10;
            }
            Fno => {
                s.input_shape = vec![32; dim];
                s.output_shape = vec![32; dim];
                s.features = if dim == 1 { 16 } else { 8 };
                s.modes = if dim == 1 { 10 } else { 6 };
            }
            DeepOnet => {
                s.input_shape = vec![32; dim];
                s.output_shape = vec![32; dim];
                s.features = 40;
            }
        }
        s
    }

    /// How inputs are presented to the model, per axis.
    pub fn input_repr(&self) -> Repr {
        self.repr()
    }

    pub fn output_repr(&self) -> Repr {
        self.repr()
    }

    fn repr(&self) -> Repr {
        use Architecture::*;
        let dim = self.dim();
        let mixed = |periodic: Basis| -> Vec<Basis> {
            if dim == 1 {
                vec![periodic]
            } else {
                vec![Basis::Chebyshev, periodic]
            }
        };
        match self.architecture {
            SnoCh => Repr::Coefficients(vec![Basis::Chebyshev; dim]),
            SnoF => Repr::Coefficients(mixed(Basis::Fourier)),
            XsnoCh | XcsnoCh => Repr::Grid(vec![GridKind::Chebyshev; dim]),
            XsnoF | XcsnoF => Repr::Grid(
                mixed(Basis::Fourier)
                    .into_iter()
                    .map(|b| b.native_grid())
                    .collect(),
            ),
            Fno | DeepOnet => Repr::Grid(vec![GridKind::Uniform; dim]),
        }
    }

    pub fn validate(&self) -> Result<()> {
        use Architecture::*;
        let dim = self.dim();
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(1..=2).contains(&dim) {
            return bad(format!("dimension {dim} is not supported"));
        }
        if self.output_shape.len() != dim {
            return bad("output rank differs from input rank".into());
        }
        if self.input_shape.iter().chain(&self.output_shape).any(|&n| n == 0) {
            return bad("empty axis".into());
        }
        if self.features == 0 || self.layers == 0 {
            return bad("features and layers must be positive".into());
        }
        match self.architecture {
            SnoCh | SnoF | XsnoCh | XsnoF | XcsnoCh | XcsnoF => {
                if self.width.len() != dim || self.width.contains(&0) {
                    return bad("one positive width per axis is required".into());
                }
            }
            Fno => {
                if self.modes == 0 {
                    return bad("FNO needs at least one mode".into());
                }
            }
            DeepOnet => {}
        }
        if matches!(self.architecture, XcsnoCh | XcsnoF) {
            if dim != 1 {
                return bad("xcSNO is one-dimensional".into());
            }
            if self.layers < 1 {
                return bad("xcSNO needs a coefficient block".into());
            }
        }
        if let Repr::Grid(g) = self.repr() {
            for shape in [&self.input_shape, &self.output_shape] {
                for (kind, &n) in g.iter().zip(shape) {
                    kind.nodes(n)?;
                }
            }
        }
        Ok(())
    }
}

/// Per-axis data representation of a model's inputs and outputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Repr {
    Coefficients(Vec<Basis>),
    Grid(Vec<GridKind>),
}
