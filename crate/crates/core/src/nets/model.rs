use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::params::{ParamSet, ParamShape};
use super::spec::{Architecture, ModelSpec, Repr};
use crate::aliasing::Activation;
use crate::autodiff::{ActMode, CMat, Graph, NodeId};
use crate::error::{Error, Result};
use crate::spectral::{
    analysis, chop_axis, interpolate_to_grid, pad_axis, uniform_points, Basis, CoeffSeries,
    GridFunction, GridKind,
};

/// A model specification together with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct Model {
    pub spec: ModelSpec,
    pub params: ParamSet,
    /// The network is trained on targets multiplied by this factor; outputs
    /// are divided by it.
    pub output_scale: f64,
}

/// Model inputs in the layout the forward pass expects.
#[derive(Clone, Debug)]
pub struct Encoded {
    /// SNO family: `rows x S`; FNO: `grid x (S * channels)`; DeepONet:
    /// `sensors x S`.
    pub x: CMat,
    /// Grid (FNO) or query grid (DeepONet) per axis.
    pub grid: Vec<usize>,
    pub samples: usize,
}

/// Outputs of a forward pass on a graph.
pub struct Forward {
    /// `rows x S`.
    pub output: NodeId,
    /// Parameter leaves in declared order.
    pub params: Vec<NodeId>,
}

impl Model {
    pub fn new(spec: ModelSpec, seed: u64) -> Result<Self> {
        let shapes = param_shapes(&spec)?;
        Ok(Self {
            params: ParamSet::init(shapes, seed),
            spec,
            output_scale: 1.0,
        })
    }

    /// Model with every parameter zero.
    pub fn zeros(spec: ModelSpec) -> Result<Self> {
        let shapes = param_shapes(&spec)?;
        Ok(Self {
            params: ParamSet::zeros(shapes),
            spec,
            output_scale: 1.0,
        })
    }

    fn act_mode(&self) -> ActMode {
        if complex_weights(&self.spec) {
            ActMode::Split
        } else {
            ActMode::Real
        }
    }

    /// Encodes a batch of input functions.
    ///
    /// `grid` selects the evaluation grid of FNO (defaults to the training
    /// grid) and the query grid of DeepONet (defaults to the output shape).
    pub fn encode_inputs(&self, inputs: &[CoeffSeries], grid: Option<&[usize]>) -> Result<Encoded> {
        let spec = &self.spec;
        let s = inputs.len();
        match spec.architecture {
            Architecture::Fno => {
                let grid = grid.map(<[usize]>::to_vec).unwrap_or_else(|| spec.input_shape.clone());
                let kinds = vec![GridKind::Uniform; spec.dim()];
                let values = inputs
                    .iter()
                    .map(|f| interpolate_to_grid(f, &grid, &kinds))
                    .collect::<Result<Vec<_>>>()?;
                self.encode_grid(&values)
            }
            _ => {
                let cols = encode_columns(inputs, &spec.input_repr(), &spec.input_shape)?;
                let grid = match spec.architecture {
                    Architecture::DeepOnet => grid
                        .map(<[usize]>::to_vec)
                        .unwrap_or_else(|| spec.output_shape.clone()),
                    _ => spec.input_shape.clone(),
                };
                Ok(Encoded {
                    x: cols,
                    grid,
                    samples: s,
                })
            }
        }
    }

    /// FNO input from values on a uniform grid shared by all samples.
    pub fn encode_grid(&self, values: &[GridFunction]) -> Result<Encoded> {
        let first = values
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty batch".into()))?;
        let grid = first.shape().to_vec();
        if first.grids().iter().any(|&k| k != GridKind::Uniform) || grid.len() != self.spec.dim() {
            return Err(Error::GridMismatch("FNO inputs live on uniform grids".into()));
        }
        let ch = 1 + grid.len();
        let rows: usize = grid.iter().product();
        let coords = coordinates(&grid);
        let mut x = CMat::zeros(rows, values.len() * ch);
        for (si, v) in values.iter().enumerate() {
            if v.shape() != grid.as_slice() {
                return Err(Error::GridMismatch("samples on different grids".into()));
            }
            for r in 0..rows {
                x.set(r, si * ch, C64::new(v.values()[r].re, 0.0));
                for (a, c) in coords[r].iter().enumerate() {
                    x.set(r, si * ch + 1 + a, C64::new(*c, 0.0));
                }
            }
        }
        Ok(Encoded {
            x,
            grid,
            samples: values.len(),
        })
    }

    /// The model as a map between functions on one uniform grid.
    ///
    /// FNO consumes the samples directly; every other model sees the
    /// trigonometric interpolant of the samples and is evaluated back on the
    /// same grid.
    pub fn apply_grid(&self, u: &GridFunction) -> Result<GridFunction> {
        let sizes = u.shape().to_vec();
        let kinds = vec![GridKind::Uniform; sizes.len()];
        let vals = match self.spec.architecture {
            Architecture::Fno => {
                let enc = self.encode_grid(std::slice::from_ref(u))?;
                let mut g = Graph::new();
                let f = self.forward(&mut g, &enc)?;
                let s = self.output_scale;
                g.value(f.output).data.iter().map(|z| C64::new(z.re / s, 0.0)).collect()
            }
            _ => {
                let series = analysis(&u.map(|z| C64::new(z.re, 0.0)), true)?;
                self.predict_uniform(std::slice::from_ref(&series), &sizes)?
                    .remove(0)
                    .into_iter()
                    .map(|v| C64::new(v, 0.0))
                    .collect()
            }
        };
        GridFunction::new(kinds, sizes, vals)
    }

    /// Encodes targets in the output layout, with the per-row loss weights.
    ///
    /// Coefficient outputs are weighted by the squared norms of the basis
    /// functions (normalised so that the constant has weight 1 or 2), grid
    /// outputs uniformly.
    pub fn encode_targets(
        &self,
        targets: &[CoeffSeries],
        grid: Option<&[usize]>,
    ) -> Result<(CMat, Vec<f64>)> {
        let spec = &self.spec;
        let (repr, shape) = match spec.architecture {
            Architecture::Fno => (
                Repr::Grid(vec![GridKind::Uniform; spec.dim()]),
                grid.map(<[usize]>::to_vec).unwrap_or_else(|| spec.input_shape.clone()),
            ),
            Architecture::DeepOnet => (
                Repr::Grid(vec![GridKind::Uniform; spec.dim()]),
                grid.map(<[usize]>::to_vec).unwrap_or_else(|| spec.output_shape.clone()),
            ),
            _ => (spec.output_repr(), spec.output_shape.clone()),
        };
        let mut t = encode_columns(targets, &repr, &shape)?;
        if self.output_scale != 1.0 {
            t = t.scaled(C64::new(self.output_scale, 0.0));
        }
        let weights = row_weights(&repr, &shape);
        Ok((t, weights))
    }

    /// Builds the forward pass for an encoded batch.
    pub fn forward(&self, g: &mut Graph, enc: &Encoded) -> Result<Forward> {
        let mut c = Cursor {
            params: &self.params,
            ids: Vec::with_capacity(self.params.len()),
        };
        let x = g.constant(enc.x.clone());
        let output = match self.spec.architecture {
            Architecture::SnoCh | Architecture::SnoF | Architecture::XsnoCh | Architecture::XsnoF => {
                self.sno(g, &mut c, x, enc.samples)
            }
            Architecture::XcsnoCh | Architecture::XcsnoF => self.xcsno(g, &mut c, x, enc.samples)?,
            Architecture::Fno => self.fno(g, &mut c, x, &enc.grid, enc.samples)?,
            Architecture::DeepOnet => self.deeponet(g, &mut c, x, &enc.grid)?,
        };
        assert_eq!(c.ids.len(), self.params.len(), "forward consumed every parameter");
        Ok(Forward {
            output,
            params: c.ids,
        })
    }

    /// Raw outputs (`rows x S`) for a batch of inputs.
    pub fn predict_raw(&self, inputs: &[CoeffSeries], grid: Option<&[usize]>) -> Result<CMat> {
        let enc = self.encode_inputs(inputs, grid)?;
        let mut g = Graph::new();
        let f = self.forward(&mut g, &enc)?;
        let out = g.value(f.output);
        Ok(if self.output_scale == 1.0 {
            out.clone()
        } else {
            out.scaled(C64::new(1.0 / self.output_scale, 0.0))
        })
    }

    /// Predictions as real values on the uniform grid of `sizes` points per
    /// axis, one row-major vector per input.
    ///
    /// Coefficient outputs are synthesised exactly; grid outputs are
    /// interpolated spectrally from the model's grid, except that FNO is run
    /// on the requested grid and DeepONet is queried at its nodes.
    pub fn predict_uniform(&self, inputs: &[CoeffSeries], sizes: &[usize]) -> Result<Vec<Vec<f64>>> {
        let spec = &self.spec;
        let uniform = vec![GridKind::Uniform; spec.dim()];
        match spec.architecture {
            Architecture::Fno | Architecture::DeepOnet => {
                let out = self.predict_raw(inputs, Some(sizes))?;
                Ok(columns_real(&out))
            }
            _ => {
                let out = self.predict_raw(inputs, None)?;
                let mut res = Vec::with_capacity(inputs.len());
                for s in 0..out.cols {
                    let series = self.decode_column(&out, s)?;
                    let vals = interpolate_to_grid(&series, sizes, &uniform)?;
                    res.push(vals.real_values());
                }
                Ok(res)
            }
        }
    }

    /// Output column `s` as a series (SNO family only).
    pub fn decode_column(&self, out: &CMat, s: usize) -> Result<CoeffSeries> {
        let spec = &self.spec;
        let col: Vec<C64> = (0..out.rows).map(|r| out.get(r, s)).collect();
        match spec.output_repr() {
            Repr::Coefficients(bases) => {
                CoeffSeries::new(bases, spec.output_shape.clone(), col, true)
            }
            Repr::Grid(kinds) => {
                let real: Vec<C64> = col.iter().map(|v| C64::new(v.re, 0.0)).collect();
                let g = GridFunction::new(kinds, spec.output_shape.clone(), real)?;
                analysis(&g, true)
            }
        }
    }

    fn sno(&self, g: &mut Graph, c: &mut Cursor, x: NodeId, s: usize) -> NodeId {
        let spec = &self.spec;
        let coeffs = spec.architecture.on_coefficients();
        let mode = self.act_mode();
        let act = spec.activation;
        let f = spec.features;
        let mut dims = spec.input_shape.clone();
        let rows = |d: &[usize]| d.iter().product::<usize>();

        let mut h = dense(g, c, x, rows(&dims), s, 1, f);
        h = broadcast_bias(g, c, h, coeffs);
        h = g.activation(h, act, mode);
        for l in 0..spec.layers {
            let target: Vec<usize> = if l + 1 == spec.layers {
                spec.output_shape.clone()
            } else {
                spec.width.clone()
            };
            h = axis_operators(g, c, h, &dims, &target);
            dims = target;
            h = dense(g, c, h, rows(&dims), s, f, f);
            let b = c.take(g);
            h = g.add_bias(h, b, false);
            h = g.activation(h, act, mode);
        }
        h = dense(g, c, h, rows(&dims), s, f, 1);
        broadcast_bias(g, c, h, coeffs)
    }

    fn xcsno(&self, g: &mut Graph, c: &mut Cursor, x: NodeId, s: usize) -> Result<NodeId> {
        let spec = &self.spec;
        let mode = self.act_mode();
        let act = spec.activation;
        let f = spec.features;
        let n = spec.width[0];
        let grid_kind = match spec.architecture {
            Architecture::XcsnoCh => GridKind::Chebyshev,
            _ => GridKind::Uniform,
        };
        let (fwd, inv) = transform_matrices(grid_kind, n)?;

        let on = Some((act, mode));
        let m_out = spec.output_shape[0];
        let mut h = xc_block(g, c, x, n, s, 1, f, on);
        h = xc_block(g, c, h, n, s, f, f, on);
        let fwd = g.constant(fwd);
        let vc = g.matmul(fwd, h);
        let mut r = vc;
        for l in 0..spec.layers {
            r = xc_block(g, c, r, n, s, f, f, on.filter(|_| l + 1 < spec.layers));
        }
        let yc = g.add(r, vc);
        let inv = g.constant(inv);
        let mut y = g.matmul(inv, yc);
        y = xc_block(g, c, y, n, s, f, f, on);
        Ok(xc_block(g, c, y, m_out, s, f, 1, None))
    }

    fn fno(&self, g: &mut Graph, c: &mut Cursor, x: NodeId, grid: &[usize], s: usize) -> Result<NodeId> {
        let spec = &self.spec;
        let modes = spec.modes;
        for &m in grid {
            if m < 2 * modes + 1 {
                return Err(Error::InvalidArgument(format!(
                    "FNO with {modes} modes needs at least {} grid points per axis, got {m}",
                    2 * modes + 1
                )));
            }
        }
        let w = spec.features;
        let dim = spec.dim();
        let rows: usize = grid.iter().product();
        let act = spec.activation;
        let mut h = dense(g, c, x, rows, s, 1 + dim, w);
        let b = c.take(g);
        h = g.add_bias(h, b, false);
        let dft = FnoTransforms::new(grid, modes);
        for _ in 0..spec.layers {
            let xh = dft.forward(g, h);
            let r = c.take(g);
            let yh = g.mode_mix(xh, r, w);
            let spec_out = dft.inverse(g, yh);
            let skip = dense(g, c, h, rows, s, w, w);
            let mut z = g.add(spec_out, skip);
            let b = c.take(g);
            z = g.add_bias(z, b, false);
            h = g.activation(z, act, ActMode::Real);
        }
        h = dense(g, c, h, rows, s, w, 1);
        let b = c.take(g);
        Ok(g.add_bias(h, b, false))
    }

    fn deeponet(&self, g: &mut Graph, c: &mut Cursor, x: NodeId, query: &[usize]) -> Result<NodeId> {
        let spec = &self.spec;
        let act = spec.activation;
        let mut b = x;
        for l in 0..spec.layers {
            let w = c.take(g);
            b = g.matmul(w, b);
            let bias = c.take(g);
            b = g.add_bias(b, bias, false);
            if l + 1 < spec.layers {
                b = g.activation(b, act, ActMode::Real);
            }
        }
        let coords = coordinates(query);
        let dim = spec.dim();
        let q = coords.len();
        let flat: Vec<f64> = coords.into_iter().flatten().collect();
        let mut t = g.constant(CMat::from_real(q, dim, &flat));
        for l in 0..spec.layers {
            let w = c.take(g);
            t = g.matmul(t, w);
            let bias = c.take(g);
            t = g.add_bias(t, bias, false);
            if l + 1 < spec.layers {
                t = g.activation(t, act, ActMode::Real);
            }
        }
        let out = g.matmul(t, b);
        let b0 = c.take(g);
        Ok(g.add_bias(out, b0, false))
    }
}

/// Parameter leaves handed out in declared order.
struct Cursor<'a> {
    params: &'a ParamSet,
    ids: Vec<NodeId>,
}

impl Cursor<'_> {
    fn take(&mut self, g: &mut Graph) -> NodeId {
        let i = self.ids.len();
        let id = g.param(self.params.values[i].clone());
        self.ids.push(id);
        id
    }
}

/// Right-multiplication by a `w_in x w_out` weight acting on features.
fn dense(g: &mut Graph, c: &mut Cursor, h: NodeId, rows: usize, s: usize, w_in: usize, w_out: usize) -> NodeId {
    let a = c.take(g);
    let flat = g.reshape(h, rows * s, w_in);
    let y = g.matmul(flat, a);
    g.reshape(y, rows, s * w_out)
}

/// Grid operator, feature mixing and full bias, optionally activated.
#[allow(clippy::too_many_arguments)]
fn xc_block(
    g: &mut Graph,
    c: &mut Cursor,
    h: NodeId,
    rows: usize,
    s: usize,
    w_in: usize,
    w_out: usize,
    act: Option<(Activation, ActMode)>,
) -> NodeId {
    let b = c.take(g);
    let mut h = g.matmul(b, h);
    h = dense(g, c, h, rows, s, w_in, w_out);
    let bias = c.take(g);
    h = g.add_bias(h, bias, false);
    match act {
        Some((a, m)) => g.activation(h, a, m),
        None => h,
    }
}

/// `1 x w` bias: the constant function (first coefficient) or every node.
fn broadcast_bias(g: &mut Graph, c: &mut Cursor, h: NodeId, coeffs: bool) -> NodeId {
    let b = c.take(g);
    g.add_bias(h, b, coeffs)
}

/// Applies one operator per axis of the tensor-product row index.
fn axis_operators(g: &mut Graph, c: &mut Cursor, h: NodeId, dims: &[usize], target: &[usize]) -> NodeId {
    if dims.len() == 1 {
        let b = c.take(g);
        return g.matmul(b, h);
    }
    let cols = g.value(h).cols;
    let b0 = c.take(g);
    let x = g.reshape(h, dims[0], dims[1] * cols);
    let x = g.matmul(b0, x);
    let x = g.reshape(x, target[0] * dims[1], cols);
    let b1 = c.take(g);
    g.block_left_mul(b1, x, target[0])
}

fn complex_weights(spec: &ModelSpec) -> bool {
    match spec.architecture {
        Architecture::Fno | Architecture::DeepOnet => false,
        Architecture::SnoF => true,
        _ => !spec.real_weights,
    }
}

/// Declared parameters of a model, in the order the forward pass uses them.
pub fn param_shapes(spec: &ModelSpec) -> Result<Vec<ParamShape>> {
    spec.validate()?;
    let real = !complex_weights(spec);
    let f = spec.features;
    let rows = |d: &[usize]| d.iter().product::<usize>();
    let mut out = Vec::new();
    match spec.architecture {
        Architecture::SnoCh | Architecture::SnoF | Architecture::XsnoCh | Architecture::XsnoF => {
            out.push(ParamShape::weight("n1.a", 1, f, 1, real));
            out.push(ParamShape::bias("n1.b", 1, f, real));
            let mut dims = spec.input_shape.clone();
            for l in 0..spec.layers {
                let target = if l + 1 == spec.layers {
                    spec.output_shape.clone()
                } else {
                    spec.width.clone()
                };
                for ax in 0..dims.len() {
                    out.push(ParamShape::weight(
                        format!("n2.{l}.op{ax}"),
                        target[ax],
                        dims[ax],
                        dims[ax],
                        real,
                    ));
                }
                dims = target;
                out.push(ParamShape::weight(format!("n2.{l}.a"), f, f, f, real));
                out.push(ParamShape::bias(format!("n2.{l}.b"), rows(&dims), f, real));
            }
            out.push(ParamShape::weight("n3.a", f, 1, f, real));
            out.push(ParamShape::bias("n3.b", 1, 1, real));
        }
        Architecture::XcsnoCh | Architecture::XcsnoF => {
            let n = spec.width[0];
            let mut block = |name: String, r: usize, k: usize, wi: usize, wo: usize| {
                out.push(ParamShape::weight(format!("{name}.op"), r, k, k, real));
                out.push(ParamShape::weight(format!("{name}.a"), wi, wo, wi, real));
                out.push(ParamShape::bias(format!("{name}.b"), r, wo, real));
            };
            block("in.0".into(), n, spec.input_shape[0], 1, f);
            block("in.1".into(), n, n, f, f);
            for l in 0..spec.layers {
                block(format!("coef.{l}"), n, n, f, f);
            }
            block("out.0".into(), n, n, f, f);
            block("out.1".into(), spec.output_shape[0], n, f, 1);
        }
        Architecture::Fno => {
            let w = f;
            let dim = spec.dim();
            let mode_rows = if dim == 1 {
                spec.modes
            } else {
                (2 * spec.modes - 1) * spec.modes
            };
            out.push(ParamShape::weight("lift.w", 1 + dim, w, 1 + dim, true));
            out.push(ParamShape::bias("lift.b", 1, w, true));
            for l in 0..spec.layers {
                out.push(ParamShape::weight(format!("spectral.{l}"), mode_rows, w * w, w, false));
                out.push(ParamShape::weight(format!("skip.{l}"), w, w, w, true));
                out.push(ParamShape::bias(format!("bias.{l}"), 1, w, true));
            }
            out.push(ParamShape::weight("proj.w", w, 1, w, true));
            out.push(ParamShape::bias("proj.b", 1, 1, true));
        }
        Architecture::DeepOnet => {
            let sensors = rows(&spec.input_shape);
            let mut prev = sensors;
            for l in 0..spec.layers {
                out.push(ParamShape::weight(format!("branch.{l}.w"), f, prev, prev, true));
                out.push(ParamShape::bias(format!("branch.{l}.b"), f, 1, true));
                prev = f;
            }
            let mut prev = spec.dim();
            for l in 0..spec.layers {
                out.push(ParamShape::weight(format!("trunk.{l}.w"), prev, f, prev, true));
                out.push(ParamShape::bias(format!("trunk.{l}.b"), 1, f, true));
                prev = f;
            }
            out.push(ParamShape::bias("b0", 1, 1, true));
        }
    }
    Ok(out)
}

/// Row-major node coordinates of a uniform tensor grid.
fn coordinates(grid: &[usize]) -> Vec<Vec<f64>> {
    let axes: Vec<Vec<f64>> = grid.iter().map(|&m| uniform_points(m)).collect();
    match axes.len() {
        1 => axes[0].iter().map(|&x| vec![x]).collect(),
        _ => {
            let mut out = Vec::with_capacity(grid[0] * grid[1]);
            for &t in &axes[0] {
                for &x in &axes[1] {
                    out.push(vec![t, x]);
                }
            }
            out
        }
    }
}

/// Series resampled into a basis and truncated or padded to `shape`.
pub fn to_basis(f: &CoeffSeries, bases: &[Basis], shape: &[usize]) -> Result<CoeffSeries> {
    let mut c = if f.bases() == bases && f.real_signal() {
        f.clone()
    } else {
        let sizes: Vec<usize> = bases
            .iter()
            .enumerate()
            .map(|(ax, b)| {
                let n = shape[ax].max(f.shape()[ax]);
                match b {
                    Basis::Chebyshev => 4 * n + 1,
                    Basis::Fourier => 4 * n + 2,
                }
            })
            .collect();
        let kinds: Vec<GridKind> = bases.iter().map(|b| b.native_grid()).collect();
        let vals = interpolate_to_grid(f, &sizes, &kinds)?.map(|v| C64::new(v.re, 0.0));
        analysis(&vals, true)?
    };
    for (ax, &n) in shape.iter().enumerate() {
        c = pad_axis(&chop_axis(&c, ax, n), ax, n);
    }
    Ok(c)
}

fn encode_columns(series: &[CoeffSeries], repr: &Repr, shape: &[usize]) -> Result<CMat> {
    let rows: usize = shape.iter().product();
    let mut x = CMat::zeros(rows, series.len());
    for (s, f) in series.iter().enumerate() {
        let col: Vec<C64> = match repr {
            Repr::Coefficients(bases) => to_basis(f, bases, shape)?.into_coeffs(),
            Repr::Grid(kinds) => interpolate_to_grid(f, shape, kinds)?
                .values()
                .iter()
                .map(|v| C64::new(v.re, 0.0))
                .collect(),
        };
        for (r, v) in col.into_iter().enumerate() {
            x.set(r, s, v);
        }
    }
    Ok(x)
}

/// Per-row weights proportional to the squared basis norms.
pub fn row_weights(repr: &Repr, shape: &[usize]) -> Vec<f64> {
    let rows: usize = shape.iter().product();
    match repr {
        Repr::Grid(_) => vec![1.0; rows],
        Repr::Coefficients(bases) => {
            let axis_w = |ax: usize, i: usize| -> f64 {
                match bases[ax] {
                    Basis::Chebyshev => {
                        if i == 0 {
                            2.0
                        } else {
                            1.0
                        }
                    }
                    Basis::Fourier => {
                        let packed = bases.iter().rposition(|&b| b == Basis::Fourier) == Some(ax);
                        if i == 0 || !packed {
                            1.0
                        } else {
                            2.0
                        }
                    }
                }
            };
            (0..rows)
                .map(|r| {
                    let mut rem = r;
                    let mut w = 1.0;
                    for ax in (0..shape.len()).rev() {
                        w *= axis_w(ax, rem % shape[ax]);
                        rem /= shape[ax];
                    }
                    w
                })
                .collect()
        }
    }
}

fn columns_real(m: &CMat) -> Vec<Vec<f64>> {
    (0..m.cols)
        .map(|s| (0..m.rows).map(|r| m.get(r, s).re).collect())
        .collect()
}

/// Values-to-coefficients matrix on an `n`-point grid and its inverse.
/// Uniform grids use the full complex spectrum.
pub(crate) fn transform_matrices(kind: GridKind, n: usize) -> Result<(CMat, CMat)> {
    let mut fwd = CMat::zeros(n, n);
    let mut inv = CMat::zeros(n, n);
    for j in 0..n {
        let mut e = vec![C64::new(0.0, 0.0); n];
        e[j] = C64::new(1.0, 0.0);
        let g = GridFunction::new(vec![kind], vec![n], e.clone())?;
        let col = analysis(&g, false)?;
        for (i, v) in col.coeffs().iter().enumerate() {
            fwd.set(i, j, *v);
        }
        let series = CoeffSeries::new(vec![kind.basis()], vec![n], e, false)?;
        let vals = interpolate_to_grid(&series, &[n], &[kind])?;
        for (i, v) in vals.values().iter().enumerate() {
            inv.set(i, j, *v);
        }
    }
    Ok((fwd, inv))
}

/// DFT matrices of the FNO spectral layers for one grid.
struct FnoTransforms {
    grid: Vec<usize>,
    modes: usize,
    fwd: Vec<CMat>,
    inv: Vec<CMat>,
}

impl FnoTransforms {
    fn new(grid: &[usize], modes: usize) -> Self {
        let dim = grid.len();
        let mut fwd = Vec::new();
        let mut inv = Vec::new();
        for (ax, &m) in grid.iter().enumerate() {
            let x = uniform_points(m);
            let packed = ax + 1 == dim;
            let ks: Vec<i64> = if packed {
                (0..modes as i64).collect()
            } else {
                (0..modes as i64).chain(-(modes as i64) + 1..0).collect()
            };
            fwd.push(CMat::from_fn(ks.len(), m, |i, j| {
                C64::from_polar(1.0 / m as f64, -PI * ks[i] as f64 * x[j])
            }));
            inv.push(CMat::from_fn(m, ks.len(), |j, i| {
                let w = if packed && ks[i] != 0 { 2.0 } else { 1.0 };
                C64::from_polar(w, PI * ks[i] as f64 * x[j])
            }));
        }
        Self {
            grid: grid.to_vec(),
            modes,
            fwd,
            inv,
        }
    }

    fn forward(&self, g: &mut Graph, h: NodeId) -> NodeId {
        let cols = g.value(h).cols;
        if self.grid.len() == 1 {
            let f = g.constant(self.fwd[0].clone());
            return g.matmul(f, h);
        }
        let (m0, m1) = (self.grid[0], self.grid[1]);
        let f1 = g.constant(self.fwd[1].clone());
        let x = g.block_left_mul(f1, h, m0);
        let x = g.reshape(x, m0, self.modes * cols);
        let f0 = g.constant(self.fwd[0].clone());
        let x = g.matmul(f0, x);
        let _ = m1;
        g.reshape(x, (2 * self.modes - 1) * self.modes, cols)
    }

    fn inverse(&self, g: &mut Graph, yh: NodeId) -> NodeId {
        let cols = g.value(yh).cols;
        if self.grid.len() == 1 {
            let gi = g.constant(self.inv[0].clone());
            let y = g.matmul(gi, yh);
            return g.real_part(y);
        }
        let m0 = self.grid[0];
        let y = g.reshape(yh, 2 * self.modes - 1, self.modes * cols);
        let g0 = g.constant(self.inv[0].clone());
        let y = g.matmul(g0, y);
        let y = g.reshape(y, m0 * self.modes, cols);
        let g1 = g.constant(self.inv[1].clone());
        let y = g.block_left_mul(g1, y, m0);
        g.real_part(y)
    }
}

