use num_complex::Complex64 as C64;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::model::{Encoded, Model};
use crate::autodiff::{CMat, Graph};
use crate::error::{Error, Result};
use crate::spectral::{norm_l2, CoeffSeries};

/// Optimiser settings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    pub epochs: usize,
    pub batch_size: usize,
    pub learning_rate: f64,
    /// The learning rate halves every this many epochs (0 disables decay).
    pub decay_every: usize,
    /// Seed of the batch shuffling.
    pub seed: u64,
    /// Rescale targets to unit mean norm before training.
    pub normalize_targets: bool,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            epochs: 200,
            batch_size: 20,
            learning_rate: 1e-3,
            decay_every: 0,
            seed: 0,
            normalize_targets: false,
        }
    }
}

impl TrainConfig {
    /// Step size used during `epoch` (counted from zero).
    pub fn learning_rate_at(&self, epoch: usize) -> f64 {
        match self.decay_every {
            0 => self.learning_rate,
            d => self.learning_rate * 0.5f64.powi((epoch / d) as i32),
        }
    }
}

/// Per-epoch record of a training run.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct History {
    /// Mean training loss per epoch.
    pub loss: Vec<f64>,
}

impl History {
    pub fn final_loss(&self) -> Option<f64> {
        self.loss.last().copied()
    }
}

/// Adam with bias correction, acting on real and imaginary parts alike.
#[derive(Clone, Debug)]
pub struct Adam {
    pub beta1: f64,
    pub beta2: f64,
    pub eps: f64,
    step: i32,
    m: Vec<CMat>,
    v: Vec<CMat>,
}

impl Adam {
    pub fn new(params: &[CMat]) -> Self {
        let zeros: Vec<CMat> = params.iter().map(|p| CMat::zeros(p.rows, p.cols)).collect();
        Self {
            beta1: 0.9,
            beta2: 0.999,
            eps: 1e-8,
            step: 0,
            m: zeros.clone(),
            v: zeros,
        }
    }

    /// One update; parameters flagged real keep a zero imaginary part.
    pub fn update(&mut self, params: &mut [CMat], grads: &[CMat], real: &[bool], lr: f64) {
        self.step += 1;
        let c1 = 1.0 - self.beta1.powi(self.step);
        let c2 = 1.0 - self.beta2.powi(self.step);
        for (i, p) in params.iter_mut().enumerate() {
            let (m, v, g) = (&mut self.m[i], &mut self.v[i], &grads[i]);
            for j in 0..p.data.len() {
                let gj = if real[i] { C64::new(g.data[j].re, 0.0) } else { g.data[j] };
                let mj = &mut m.data[j];
                let vj = &mut v.data[j];
                *mj = *mj * self.beta1 + gj * (1.0 - self.beta1);
                vj.re = vj.re * self.beta2 + gj.re * gj.re * (1.0 - self.beta2);
                vj.im = vj.im * self.beta2 + gj.im * gj.im * (1.0 - self.beta2);
                let step = |mm: f64, vv: f64| lr * (mm / c1) / ((vv / c2).sqrt() + self.eps);
                p.data[j].re -= step(mj.re, vj.re);
                p.data[j].im -= step(mj.im, vj.im);
                if real[i] {
                    p.data[j].im = 0.0;
                }
            }
        }
    }
}

/// Weighted relative L2 error `||p - t|| / ||t||`.
pub fn relative_l2(pred: &[f64], target: &[f64]) -> Result<f64> {
    if pred.len() != target.len() {
        return Err(Error::Shape(format!(
            "prediction has {} values, target {}",
            pred.len(),
            target.len()
        )));
    }
    let den: f64 = target.iter().map(|t| t * t).sum();
    if den == 0.0 {
        return Err(Error::InvalidArgument("relative error of a zero target".into()));
    }
    let num: f64 = pred.iter().zip(target).map(|(p, t)| (p - t) * (p - t)).sum();
    Ok((num / den).sqrt())
}

/// Inputs and targets encoded once for repeated batching.
pub struct Batches {
    inputs: Encoded,
    targets: CMat,
    weights: Vec<f64>,
    input_block: usize,
}

impl Batches {
    pub fn new(model: &Model, inputs: &[CoeffSeries], targets: &[CoeffSeries]) -> Result<Self> {
        if inputs.len() != targets.len() || inputs.is_empty() {
            return Err(Error::InvalidArgument(format!(
                "{} inputs for {} targets",
                inputs.len(),
                targets.len()
            )));
        }
        let enc = model.encode_inputs(inputs, None)?;
        let (targets, weights) = model.encode_targets(targets, None)?;
        let input_block = enc.x.cols / inputs.len();
        Ok(Self {
            inputs: enc,
            targets,
            weights,
            input_block,
        })
    }

    pub fn len(&self) -> usize {
        self.targets.cols
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Sub-batch made of the given samples.
    pub fn select(&self, idx: &[usize]) -> (Encoded, CMat) {
        let pick = |m: &CMat, block: usize| {
            CMat::from_fn(m.rows, idx.len() * block, |r, c| {
                m.get(r, idx[c / block] * block + c % block)
            })
        };
        (
            Encoded {
                x: pick(&self.inputs.x, self.input_block),
                grid: self.inputs.grid.clone(),
                samples: idx.len(),
            },
            pick(&self.targets, 1),
        )
    }

    /// Loss and parameter gradients on the given samples.
    pub fn loss_and_grad(&self, model: &Model, idx: &[usize]) -> Result<(f64, Vec<CMat>)> {
        let (enc, t) = self.select(idx);
        let mut g = Graph::new();
        let fwd = model.forward(&mut g, &enc)?;
        let loss = g.rel_l2(fwd.output, t, self.weights.clone());
        let value = g.value(loss).data[0].re;
        let mut grads = g.backward(loss);
        let out = fwd
            .params
            .iter()
            .zip(&model.params.values)
            .map(|(&id, p)| grads.take(id).unwrap_or_else(|| CMat::zeros(p.rows, p.cols)))
            .collect();
        Ok((value, out))
    }

    pub fn loss(&self, model: &Model, idx: &[usize]) -> Result<f64> {
        let (enc, t) = self.select(idx);
        let mut g = Graph::new();
        let fwd = model.forward(&mut g, &enc)?;
        let loss = g.rel_l2(fwd.output, t, self.weights.clone());
        Ok(g.value(loss).data[0].re)
    }
}

/// Trains `model` in place with Adam on mini-batches of the relative L2
/// loss. Runs are deterministic for a given seed.
///
/// With `normalize_targets` the model's output scale is reset from the mean
/// norm of `targets` first.
pub fn train(
    model: &mut Model,
    inputs: &[CoeffSeries],
    targets: &[CoeffSeries],
    cfg: &TrainConfig,
) -> Result<History> {
    if cfg.normalize_targets {
        let mean = targets.iter().map(norm_l2).sum::<f64>() / targets.len().max(1) as f64;
        if mean > 0.0 {
            model.output_scale = 1.0 / mean;
        }
    }
    let data = Batches::new(model, inputs, targets)?;
    train_batches(model, &data, cfg)
}

/// Training on pre-encoded batches; targets were scaled with the model's
/// output scale at encoding time.
pub fn train_batches(model: &mut Model, data: &Batches, cfg: &TrainConfig) -> Result<History> {
    if cfg.batch_size == 0 {
        return Err(Error::InvalidArgument("batch size must be positive".into()));
    }
    keep_heap();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut adam = Adam::new(&model.params.values);
    let real: Vec<bool> = model.params.shapes.iter().map(|s| s.real).collect();
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut history = History::default();
    for epoch in 0..cfg.epochs {
        let lr = cfg.learning_rate_at(epoch);
        order.shuffle(&mut rng);
        let mut total = 0.0;
        for batch in order.chunks(cfg.batch_size) {
            let (loss, grads) = data.loss_and_grad(model, batch)?;
            if !loss.is_finite() || grads.iter().any(|g| g.data.iter().any(|z| !z.is_finite())) {
                return Err(Error::Diverged(format!("non-finite loss at epoch {epoch}")));
            }
            adam.update(&mut model.params.values, &grads, &real, lr);
            total += loss * batch.len() as f64;
        }
        history.loss.push(total / data.len() as f64);
    }
    Ok(history)
}

/// Keeps glibc from trimming the heap after every batch.
fn keep_heap() {
    #[cfg(all(target_os = "linux", target_env = "gnu"))]
    {
        static ONCE: std::sync::Once = std::sync::Once::new();
        ONCE.call_once(|| unsafe {
            libc::mallopt(libc::M_TRIM_THRESHOLD, 256 << 20);
        });
    }
}

/// Maximum relative discrepancy between backpropagated gradients and central
/// differences of the loss, over every real and imaginary parameter entry
/// (imaginary parts only for complex parameters).
///
/// Entry errors are `|a - n| / max(|a|, |n|, floor)` with `floor` one
/// percent of the largest gradient entry.
pub fn gradient_check(
    model: &Model,
    inputs: &[CoeffSeries],
    targets: &[CoeffSeries],
    step: f64,
) -> Result<f64> {
    let data = Batches::new(model, inputs, targets)?;
    let idx: Vec<usize> = (0..data.len()).collect();
    let (_, grads) = data.loss_and_grad(model, &idx)?;
    let largest = grads
        .iter()
        .flat_map(|g| g.data.iter().flat_map(|z| [z.re.abs(), z.im.abs()]))
        .fold(0.0, f64::max);
    let floor = (0.01 * largest).max(1e-12);
    let mut probe = model.clone();
    let mut worst: f64 = 0.0;
    for (i, shape) in model.params.shapes.iter().enumerate() {
        for j in 0..shape.len() {
            let parts: &[bool] = if shape.real { &[false] } else { &[false, true] };
            for &imag in parts {
                let orig = probe.params.values[i].data[j];
                let d = if imag { C64::new(0.0, step) } else { C64::new(step, 0.0) };
                probe.params.values[i].data[j] = orig + d;
                let up = data.loss(&probe, &idx)?;
                probe.params.values[i].data[j] = orig - d;
                let down = data.loss(&probe, &idx)?;
                probe.params.values[i].data[j] = orig;
                let numeric = (up - down) / (2.0 * step);
                let g = grads[i].data[j];
                let analytic = if imag { g.im } else { g.re };
                let err = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(floor);
                worst = worst.max(err);
            }
        }
    }
    Ok(worst)
}

/// Mean relative L2 error of real predictions on a uniform grid.
pub fn evaluate_uniform(
    model: &Model,
    inputs: &[CoeffSeries],
    targets: &[CoeffSeries],
    sizes: &[usize],
) -> Result<f64> {
    let preds = model.predict_uniform(inputs, sizes)?;
    let kinds = vec![crate::spectral::GridKind::Uniform; sizes.len()];
    let mut total = 0.0;
    for (p, t) in preds.iter().zip(targets) {
        let tv = crate::spectral::interpolate_to_grid(t, sizes, &kinds)?.real_values();
        total += relative_l2(p, &tv)?;
    }
    Ok(total / inputs.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aliasing::Activation;
    use crate::nets::{Architecture, ModelSpec};
    use crate::spectral::{Basis, CoeffSeries};

    fn toy(arch: Architecture, dim: usize) -> ModelSpec {
        let mut s = ModelSpec::desk(arch, dim);
        s.features = 3;
        s.layers = 2;
        match arch {
            Architecture::SnoCh | Architecture::SnoF => {
                s.input_shape = vec![4; dim];
                s.output_shape = vec![3; dim];
                s.width = vec![5; dim];
            }
            Architecture::XsnoCh | Architecture::XsnoF | Architecture::XcsnoCh | Architecture::XcsnoF => {
                s.input_shape = vec![6; dim];
                s.output_shape = vec![5; dim];
                s.width = vec![4; dim];
            }
            Architecture::Fno => {
                s.input_shape = vec![8; dim];
                s.output_shape = vec![8; dim];
                s.modes = 3;
            }
            Architecture::DeepOnet => {
                s.input_shape = vec![5; dim];
                s.output_shape = vec![4; dim];
            }
        }
        s
    }

    fn data(dim: usize, seed: u64) -> Vec<CoeffSeries> {
        (0..3)
            .map(|i| {
                let v = (seed as f64 + 1.0) * 0.3 + i as f64 * 0.7;
                let shape = vec![3; dim];
                let n: usize = shape.iter().product();
                let c = (0..n)
                    .map(|j| C64::new((v + j as f64).sin(), if j % 3 == 0 { 0.0 } else { (v * j as f64).cos() * 0.5 }))
                    .collect();
                let mut c = CoeffSeries::new(vec![Basis::Chebyshev; dim], shape, c, true).unwrap();
                c = c.map(|z| C64::new(z.re, 0.0));
                c
            })
            .collect()
    }

    #[test]
    fn backpropagation_matches_finite_differences() {
        for dim in [1, 2] {
            for arch in Architecture::ALL {
                if dim == 2 && matches!(arch, Architecture::XcsnoCh | Architecture::XcsnoF) {
                    continue;
                }
                let mut spec = toy(arch, dim);
                spec.activation = match arch {
                    Architecture::Fno => Activation::Softplus,
                    a => ModelSpec::desk(a, dim).activation,
                };
                let model = Model::new(spec, 7).unwrap();
                let err = gradient_check(&model, &data(dim, 1), &data(dim, 2), 1e-6).unwrap();
                assert!(err < 1e-5, "{arch} dim {dim}: {err:e}");
            }
        }
    }

    #[test]
    fn training_reduces_loss_deterministically() {
        let spec = toy(Architecture::SnoCh, 1);
        let cfg = TrainConfig {
            epochs: 30,
            batch_size: 2,
            learning_rate: 1e-2,
            ..TrainConfig::default()
        };
        let run = || {
            let mut m = Model::new(spec.clone(), 3).unwrap();
            let h = train(&mut m, &data(1, 1), &data(1, 2), &cfg).unwrap();
            (m, h)
        };
        let (m1, h1) = run();
        let (m2, h2) = run();
        assert_eq!(m1, m2);
        assert_eq!(h1, h2);
        assert!(h1.loss[29] < h1.loss[0]);
    }

    #[test]
    fn real_parameters_stay_real() {
        let mut spec = toy(Architecture::DeepOnet, 1);
        spec.layers = 2;
        let mut m = Model::new(spec, 1).unwrap();
        let cfg = TrainConfig { epochs: 3, batch_size: 3, ..TrainConfig::default() };
        train(&mut m, &data(1, 1), &data(1, 2), &cfg).unwrap();
        assert!(m.params.values.iter().all(|v| v.data.iter().all(|z| z.im == 0.0)));
    }

    #[test]
    fn relative_l2_rejects_zero_targets() {
        assert!(relative_l2(&[1.0], &[0.0]).is_err());
        assert!((relative_l2(&[1.0, 1.0], &[1.0, 2.0]).unwrap() - (1.0f64 / 5.0).sqrt()).abs() < 1e-15);
    }
}
