use num_complex::Complex64 as C64;

use super::tensor::CMat;
use crate::aliasing::Activation;

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Handle to a node of a [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NodeId(usize);

/// How an activation treats complex inputs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ActMode {
    /// `sigma(re) + i sigma(im)`.
    Split,
    /// `sigma(re)`; the imaginary part is dropped.
    Real,
}

#[derive(Clone, Debug)]
enum Op {
    Leaf,
    MatMul(usize, usize),
    BlockLeftMul { b: usize, x: usize, blocks: usize },
    Add(usize, usize),
    Sub(usize, usize),
    Scale(usize, C64),
    Reshape(usize),
    AddBias { x: usize, b: usize, row0: bool },
    ModeMix { x: usize, r: usize, width: usize },
    Act { x: usize, act: Activation, mode: ActMode },
    RealPart(usize),
    SumSquares(usize),
    RelL2 { pred: usize, target: CMat, weights: Vec<f64> },
}

struct Node {
    value: CMat,
    op: Op,
    needs_grad: bool,
}

/// Reverse-mode tape over complex matrices.
///
/// Gradients follow the convention `g = dL/d(re) + i dL/d(im)` for a real
/// loss `L`, so that `value - lr * g` is a descent step in both parts.
#[derive(Default)]
pub struct Graph {
    nodes: Vec<Node>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    fn push(&mut self, value: CMat, op: Op, needs_grad: bool) -> NodeId {
        self.nodes.push(Node {
            value,
            op,
            needs_grad,
        });
        NodeId(self.nodes.len() - 1)
    }

    fn needs(&self, ids: &[usize]) -> bool {
        ids.iter().any(|&i| self.nodes[i].needs_grad)
    }

    /// Trainable input.
    pub fn param(&mut self, value: CMat) -> NodeId {
        self.push(value, Op::Leaf, true)
    }

    /// Input that receives no gradient.
    pub fn constant(&mut self, value: CMat) -> NodeId {
        self.push(value, Op::Leaf, false)
    }

    pub fn value(&self, id: NodeId) -> &CMat {
        &self.nodes[id.0].value
    }

    pub fn matmul(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let v = self.value(a).matmul(self.value(b));
        let ng = self.needs(&[a.0, b.0]);
        self.push(v, Op::MatMul(a.0, b.0), ng)
    }

    /// Treats `x` as `blocks` stacked matrices and multiplies each by `b`
    /// from the left.
    pub fn block_left_mul(&mut self, b: NodeId, x: NodeId, blocks: usize) -> NodeId {
        let bv = self.value(b);
        let xv = self.value(x);
        let k = xv.rows / blocks;
        assert_eq!(k * blocks, xv.rows);
        assert_eq!(bv.cols, k, "block operator width");
        let c = xv.cols;
        let mut out = Vec::with_capacity(blocks * bv.rows * c);
        for blk in 0..blocks {
            let part = CMat::new(k, c, xv.data[blk * k * c..(blk + 1) * k * c].to_vec());
            out.extend(bv.matmul(&part).data);
        }
        let v = CMat::new(blocks * bv.rows, c, out);
        let ng = self.needs(&[b.0, x.0]);
        self.push(v, Op::BlockLeftMul { b: b.0, x: x.0, blocks }, ng)
    }

    pub fn add(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let mut v = self.value(a).clone();
        v.add_assign(self.value(b));
        let ng = self.needs(&[a.0, b.0]);
        self.push(v, Op::Add(a.0, b.0), ng)
    }

    pub fn sub(&mut self, a: NodeId, b: NodeId) -> NodeId {
        let mut v = self.value(a).clone();
        v.add_assign(&self.value(b).scaled(C64::new(-1.0, 0.0)));
        let ng = self.needs(&[a.0, b.0]);
        self.push(v, Op::Sub(a.0, b.0), ng)
    }

    pub fn scale(&mut self, a: NodeId, s: C64) -> NodeId {
        let v = self.value(a).scaled(s);
        let ng = self.needs(&[a.0]);
        self.push(v, Op::Scale(a.0, s), ng)
    }

    pub fn reshape(&mut self, a: NodeId, rows: usize, cols: usize) -> NodeId {
        let v = self.value(a).clone().reshaped(rows, cols);
        let ng = self.needs(&[a.0]);
        self.push(v, Op::Reshape(a.0), ng)
    }

    /// `x[i, s w + f] += b[i or 0, f]` where `b` is `1 x w` or `rows(x) x w`
    /// and the columns of `x` are `S` blocks of width `w`. With `row0` a
    /// single-row `b` is added to the first row only.
    pub fn add_bias(&mut self, x: NodeId, b: NodeId, row0: bool) -> NodeId {
        let xv = self.value(x);
        let bv = self.value(b);
        let w = bv.cols;
        assert!(bv.rows == 1 || bv.rows == xv.rows, "bias rows");
        assert_eq!(xv.cols % w, 0, "bias width");
        let mut v = xv.clone();
        let rows = if row0 { 1.min(v.rows) } else { v.rows };
        for i in 0..rows {
            let bi = if bv.rows == 1 { 0 } else { i };
            for (j, o) in v.data[i * xv.cols..(i + 1) * xv.cols].iter_mut().enumerate() {
                *o += bv.data[bi * w + j % w];
            }
        }
        let ng = self.needs(&[x.0, b.0]);
        self.push(v, Op::AddBias { x: x.0, b: b.0, row0 }, ng)
    }

    /// Per-row channel mixing: `y[k, s w + o] = sum_i x[k, s w + i] r[k, i w + o]`.
    pub fn mode_mix(&mut self, x: NodeId, r: NodeId, width: usize) -> NodeId {
        let xv = self.value(x);
        let rv = self.value(r);
        assert_eq!(rv.rows, xv.rows);
        assert_eq!(rv.cols, width * width);
        let samples = xv.cols / width;
        let mut out = CMat::zeros(xv.rows, xv.cols);
        for k in 0..xv.rows {
            let rk = &rv.data[k * width * width..(k + 1) * width * width];
            for s in 0..samples {
                let base = k * xv.cols + s * width;
                for i in 0..width {
                    let xi = xv.data[base + i];
                    for o in 0..width {
                        out.data[base + o] += xi * rk[i * width + o];
                    }
                }
            }
        }
        let ng = self.needs(&[x.0, r.0]);
        self.push(out, Op::ModeMix { x: x.0, r: r.0, width }, ng)
    }

    pub fn activation(&mut self, x: NodeId, act: Activation, mode: ActMode) -> NodeId {
        let xv = self.value(x);
        let data = xv
            .data
            .iter()
            .map(|z| match mode {
                ActMode::Split => C64::new(act.apply(z.re), act.apply(z.im)),
                ActMode::Real => C64::new(act.apply(z.re), 0.0),
            })
            .collect();
        let v = CMat::new(xv.rows, xv.cols, data);
        let ng = self.needs(&[x.0]);
        self.push(v, Op::Act { x: x.0, act, mode }, ng)
    }

    pub fn real_part(&mut self, x: NodeId) -> NodeId {
        let xv = self.value(x);
        let v = CMat::new(
            xv.rows,
            xv.cols,
            xv.data.iter().map(|z| C64::new(z.re, 0.0)).collect(),
        );
        let ng = self.needs(&[x.0]);
        self.push(v, Op::RealPart(x.0), ng)
    }

    /// `sum |x|^2` as a `1 x 1` node.
    pub fn sum_squares(&mut self, x: NodeId) -> NodeId {
        let v = CMat::new(1, 1, vec![C64::new(self.value(x).norm_sqr(), 0.0)]);
        let ng = self.needs(&[x.0]);
        self.push(v, Op::SumSquares(x.0), ng)
    }

    /// Mean over columns of `||p_s - t_s||_w / ||t_s||_w`, where column `s`
    /// is one sample and `weights[i]` weighs row `i`.
    pub fn rel_l2(&mut self, pred: NodeId, target: CMat, weights: Vec<f64>) -> NodeId {
        let (num, den) = rel_l2_parts(self.value(pred), &target, &weights);
        let n = num.len() as f64;
        let loss: f64 = num
            .iter()
            .zip(&den)
            .map(|(a, b)| a.sqrt() / b.sqrt())
            .sum::<f64>()
            / n;
        let ng = self.needs(&[pred.0]);
        self.push(
            CMat::new(1, 1, vec![C64::new(loss, 0.0)]),
            Op::RelL2 {
                pred: pred.0,
                target,
                weights,
            },
            ng,
        )
    }

    /// Gradients of the real `1 x 1` node `loss` with respect to every node
    /// that needs one; `None` elsewhere.
    pub fn backward(&self, loss: NodeId) -> Gradients {
        let mut grads: Vec<Option<CMat>> = vec![None; self.nodes.len()];
        grads[loss.0] = Some(CMat::new(1, 1, vec![C64::new(1.0, 0.0)]));
        for id in (0..=loss.0).rev() {
            let Some(g) = grads[id].take() else { continue };
            let node = &self.nodes[id];
            if !node.needs_grad {
                continue;
            }
            self.propagate(node, &g, &mut grads);
            grads[id] = Some(g);
        }
        Gradients(grads)
    }

    fn accumulate(&self, grads: &mut [Option<CMat>], id: usize, g: CMat) {
        if !self.nodes[id].needs_grad {
            return;
        }
        match &mut grads[id] {
            Some(acc) => acc.add_assign(&g),
            slot => *slot = Some(g),
        }
    }

    fn propagate(&self, node: &Node, g: &CMat, grads: &mut [Option<CMat>]) {
        let val = |i: usize| &self.nodes[i].value;
        let ng = |i: usize| self.nodes[i].needs_grad;
        match &node.op {
            Op::Leaf => {}
            Op::MatMul(a, b) => {
                if ng(*a) {
                    self.accumulate(grads, *a, g.matmul_nh(val(*b)));
                }
                if ng(*b) {
                    self.accumulate(grads, *b, val(*a).matmul_hn(g));
                }
            }
            Op::BlockLeftMul { b, x, blocks } => {
                let bv = val(*b);
                let xv = val(*x);
                let k = xv.rows / blocks;
                let r = bv.rows;
                let c = xv.cols;
                let mut gb = CMat::zeros(bv.rows, bv.cols);
                let mut gx = Vec::with_capacity(xv.data.len());
                for blk in 0..*blocks {
                    let gy = CMat::new(r, c, g.data[blk * r * c..(blk + 1) * r * c].to_vec());
                    if ng(*b) {
                        let xb = CMat::new(k, c, xv.data[blk * k * c..(blk + 1) * k * c].to_vec());
                        gb.add_assign(&gy.matmul_nh(&xb));
                    }
                    if ng(*x) {
                        gx.extend(bv.matmul_hn(&gy).data);
                    }
                }
                if ng(*b) {
                    self.accumulate(grads, *b, gb);
                }
                if ng(*x) {
                    self.accumulate(grads, *x, CMat::new(xv.rows, c, gx));
                }
            }
            Op::Add(a, b) => {
                self.accumulate(grads, *a, g.clone());
                self.accumulate(grads, *b, g.clone());
            }
            Op::Sub(a, b) => {
                self.accumulate(grads, *a, g.clone());
                self.accumulate(grads, *b, g.scaled(C64::new(-1.0, 0.0)));
            }
            Op::Scale(a, s) => self.accumulate(grads, *a, g.scaled(s.conj())),
            Op::Reshape(a) => {
                let (r, c) = val(*a).shape();
                self.accumulate(grads, *a, g.clone().reshaped(r, c));
            }
            Op::AddBias { x, b, row0 } => {
                self.accumulate(grads, *x, g.clone());
                if ng(*b) {
                    let bv = val(*b);
                    let w = bv.cols;
                    let mut gb = CMat::zeros(bv.rows, w);
                    let rows = if *row0 { 1.min(g.rows) } else { g.rows };
                    for i in 0..rows {
                        let bi = if bv.rows == 1 { 0 } else { i };
                        for (j, v) in g.data[i * g.cols..(i + 1) * g.cols].iter().enumerate() {
                            gb.data[bi * w + j % w] += v;
                        }
                    }
                    self.accumulate(grads, *b, gb);
                }
            }
            Op::ModeMix { x, r, width } => {
                let xv = val(*x);
                let rv = val(*r);
                let w = *width;
                let samples = xv.cols / w;
                let mut gx = CMat::zeros(xv.rows, xv.cols);
                let mut gr = CMat::zeros(rv.rows, rv.cols);
                for k in 0..xv.rows {
                    let rk = &rv.data[k * w * w..(k + 1) * w * w];
                    for s in 0..samples {
                        let base = k * xv.cols + s * w;
                        for i in 0..w {
                            let xi = xv.data[base + i].conj();
                            let mut acc = ZERO;
                            for o in 0..w {
                                let go = g.data[base + o];
                                acc += go * rk[i * w + o].conj();
                                gr.data[k * w * w + i * w + o] += xi * go;
                            }
                            gx.data[base + i] = acc;
                        }
                    }
                }
                if ng(*x) {
                    self.accumulate(grads, *x, gx);
                }
                if ng(*r) {
                    self.accumulate(grads, *r, gr);
                }
            }
            Op::Act { x, act, mode } => {
                let xv = val(*x);
                let data = xv
                    .data
                    .iter()
                    .zip(&g.data)
                    .map(|(z, gz)| match mode {
                        ActMode::Split => C64::new(
                            gz.re * act.derivative(z.re),
                            gz.im * act.derivative(z.im),
                        ),
                        ActMode::Real => C64::new(gz.re * act.derivative(z.re), 0.0),
                    })
                    .collect();
                self.accumulate(grads, *x, CMat::new(xv.rows, xv.cols, data));
            }
            Op::RealPart(x) => {
                let data = g.data.iter().map(|z| C64::new(z.re, 0.0)).collect();
                self.accumulate(grads, *x, CMat::new(g.rows, g.cols, data));
            }
            Op::SumSquares(x) => {
                let s = g.data[0].re * 2.0;
                self.accumulate(grads, *x, val(*x).scaled(C64::new(s, 0.0)));
            }
            Op::RelL2 {
                pred,
                target,
                weights,
            } => {
                let p = val(*pred);
                let (num, den) = rel_l2_parts(p, target, weights);
                let n = num.len() as f64;
                let scale = g.data[0].re / n;
                let mut gp = CMat::zeros(p.rows, p.cols);
                for s in 0..p.cols {
                    let nrm = num[s].sqrt();
                    if nrm == 0.0 {
                        continue;
                    }
                    let f = scale / (nrm * den[s].sqrt());
                    for i in 0..p.rows {
                        let d = p.get(i, s) - target.get(i, s);
                        gp.set(i, s, d * (weights[i] * f));
                    }
                }
                self.accumulate(grads, *pred, gp);
            }
        }
    }
}

fn rel_l2_parts(p: &CMat, t: &CMat, w: &[f64]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(p.shape(), t.shape(), "prediction and target shapes");
    assert_eq!(w.len(), p.rows, "one weight per row");
    let mut num = vec![0.0; p.cols];
    let mut den = vec![0.0; p.cols];
    for i in 0..p.rows {
        for s in 0..p.cols {
            let idx = i * p.cols + s;
            num[s] += w[i] * (p.data[idx] - t.data[idx]).norm_sqr();
            den[s] += w[i] * t.data[idx].norm_sqr();
        }
    }
    (num, den)
}

/// Result of [`Graph::backward`].
pub struct Gradients(Vec<Option<CMat>>);

impl Gradients {
    pub fn get(&self, id: NodeId) -> Option<&CMat> {
        self.0[id.0].as_ref()
    }

    pub fn take(&mut self, id: NodeId) -> Option<CMat> {
        self.0[id.0].take()
    }
}
