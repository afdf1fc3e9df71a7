use num_complex::Complex64 as C64;

use super::config::{ExperimentConfig, Scale};
use crate::error::{Error, Result};
use crate::nets::{evaluate_uniform, relative_l2, train, Architecture, Model, ModelSpec, TrainConfig};
use crate::problems::{target_derivative, target_integrate, target_shift_product, ProblemId};
use crate::spectral::{analysis, interpolate_to_grid, CoeffSeries, GridFunction, GridKind};

pub type Rule = fn(&CoeffSeries) -> Result<CoeffSeries>;

/// Exact spectral rule of a problem, when it has one.
pub fn exact_rule(problem: ProblemId) -> Option<Rule> {
    use ProblemId::*;
    match problem {
        Identity => Some(|f| Ok(f.clone())),
        Integration => Some(target_integrate),
        Shift => Some(target_shift_product),
        Derivative | DerivativeK20 => Some(target_derivative),
        _ => None,
    }
}

/// Something that maps input series to outputs: a trained network or an
/// exact rule.
#[derive(Clone, Debug)]
pub enum Subject {
    Exact { problem: ProblemId, rule: Rule },
    Net(Model),
}

impl Subject {
    pub fn exact(problem: ProblemId) -> Result<Self> {
        let rule = exact_rule(problem)
            .ok_or_else(|| Error::InvalidArgument(format!("{problem} has no exact rule")))?;
        Ok(Subject::Exact { problem, rule })
    }

    pub fn name(&self) -> String {
        match self {
            Subject::Exact { .. } => "exact".into(),
            Subject::Net(m) => m.spec.architecture.name().into(),
        }
    }

    /// Mean relative L2 error on the uniform grid of `sizes`.
    pub fn evaluate(&self, inputs: &[CoeffSeries], targets: &[CoeffSeries], sizes: &[usize]) -> Result<f64> {
        match self {
            Subject::Net(m) => evaluate_uniform(m, inputs, targets, sizes),
            Subject::Exact { rule, .. } => {
                let kinds = vec![GridKind::Uniform; sizes.len()];
                let mut total = 0.0;
                for (f, t) in inputs.iter().zip(targets) {
                    let p = interpolate_to_grid(&rule(f)?, sizes, &kinds)?.real_values();
                    let t = interpolate_to_grid(t, sizes, &kinds)?.real_values();
                    total += relative_l2(&p, &t)?;
                }
                Ok(total / inputs.len() as f64)
            }
        }
    }

    /// The subject as a map between samples on one uniform grid.
    pub fn apply_grid(&self, u: &GridFunction) -> Result<GridFunction> {
        match self {
            Subject::Net(m) => m.apply_grid(u),
            Subject::Exact { rule, .. } => {
                let f = analysis(&u.map(|z| C64::new(z.re, 0.0)), true)?;
                let out = interpolate_to_grid(&rule(&f)?, u.shape(), u.grids())?;
                Ok(out.map(|z| C64::new(z.re, 0.0)))
            }
        }
    }
}

/// Network shape for `problem` from the preset and the overrides of `cfg`.
///
/// Grid-based models run on `grid` points per axis when given, otherwise on
/// the configured training grid or the preset grid. Unless sizes are set
/// explicitly, the training grid resolves the input band and Fourier
/// coefficient vectors hold it.
pub fn model_spec(
    arch: Architecture,
    problem: ProblemId,
    cfg: &ExperimentConfig,
    grid: Option<usize>,
) -> Result<ModelSpec> {
    let dim = problem.dim();
    let o = &cfg.model;
    let mut s = match o.scale {
        Scale::Desk => ModelSpec::desk(arch, dim),
        Scale::Paper => ModelSpec::paper(arch, dim),
    };
    let top = cfg.band_for(problem).map(|(_, hi)| hi);
    if arch.on_coefficients() {
        match o.length {
            Some(n) => s.input_shape = vec![n; dim],
            None => {
                if let (Some(hi), Architecture::SnoF) = (top, arch) {
                    let last = dim - 1;
                    s.input_shape[last] = s.input_shape[last].max(hi + 1);
                }
            }
        }
        s.output_shape = s.input_shape.clone();
    } else {
        let n = match grid.or((cfg.grids.train > 0).then_some(cfg.grids.train)) {
            Some(n) => n,
            None => {
                let n = s.input_shape[0];
                top.map_or(n, |hi| n.max(2 * hi + 2))
            }
        };
        s.input_shape = vec![n; dim];
        s.output_shape = vec![n; dim];
    }
    if let Some(w) = o.width {
        s.width = vec![w; s.width.len()];
    }
    if let Some(f) = o.features {
        s.features = f;
    }
    if let Some(l) = o.layers {
        s.layers = l;
    }
    if let Some(m) = o.modes {
        s.modes = m;
    }
    if let Some(a) = o.activation {
        s.activation = a;
    }
    if let Some(r) = o.real_weights {
        s.real_weights = r;
    }
    s.validate()?;
    Ok(s)
}

/// Initialises a network with `seed` and trains it, shuffling with the same
/// seed.
pub fn fit(
    spec: ModelSpec,
    seed: u64,
    inputs: &[CoeffSeries],
    targets: &[CoeffSeries],
    train_cfg: &TrainConfig,
) -> Result<(Model, f64)> {
    let mut model = Model::new(spec, seed)?;
    let cfg = TrainConfig {
        seed,
        ..train_cfg.clone()
    };
    let h = train(&mut model, inputs, targets, &cfg)?;
    Ok((model, h.final_loss().unwrap_or(f64::NAN)))
}
