//! Exact operations on coefficients: calculus, products, truncation, norms.

use std::collections::HashMap;
use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use super::basis::Basis;
use super::lines::map_lines;
use super::series::{fft_index, fft_wavenumber, unflatten, CoeffSeries};
use crate::error::{Error, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn rebuild(c: &CoeffSeries, axis: usize, new_len: usize, data: Vec<C64>) -> CoeffSeries {
    let mut shape = c.shape().to_vec();
    shape[axis] = new_len;
    CoeffSeries::new(c.bases().to_vec(), shape, data, c.real_signal()).expect("consistent shape")
}

fn fourier_factor(c: &CoeffSeries, axis: usize, f: impl Fn(i64) -> C64) -> CoeffSeries {
    let len = c.shape()[axis];
    let packed = c.packed_axis() == Some(axis);
    let data = map_lines(c.coeffs(), c.shape(), axis, len, |line| {
        line.iter()
            .enumerate()
            .map(|(i, &v)| v * f(fft_wavenumber(i, len, packed)))
            .collect()
    });
    rebuild(c, axis, len, data)
}

fn cheb_derivative_line(c: &[C64]) -> Vec<C64> {
    let n = c.len();
    if n == 1 {
        return vec![ZERO];
    }
    let mut d = vec![ZERO; n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + c[k] * (2.0 * k as f64);
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}

fn cheb_integral_line(c: &[C64]) -> Vec<C64> {
    let n = c.len();
    let at = |k: usize| if k < n { c[k] } else { ZERO };
    let mut b = vec![ZERO; n + 1];
    b[1] = at(0) - at(2) * 0.5;
    for k in 2..=n {
        b[k] = (at(k - 1) - at(k + 1)) / (2.0 * k as f64);
    }
    // T_k(-1) = (-1)^k
    b[0] = -b
        .iter()
        .enumerate()
        .skip(1)
        .map(|(k, &v)| if k % 2 == 0 { v } else { -v })
        .sum::<C64>();
    b
}

/// Derivative along `axis`. Chebyshev axes lose one coefficient (down to a
/// single zero); Fourier axes are multiplied by `i pi k`.
pub fn differentiate_axis(c: &CoeffSeries, axis: usize) -> CoeffSeries {
    match c.bases()[axis] {
        Basis::Chebyshev => {
            let new_len = (c.shape()[axis] - 1).max(1);
            let data = map_lines(c.coeffs(), c.shape(), axis, new_len, cheb_derivative_line);
            rebuild(c, axis, new_len, data)
        }
        Basis::Fourier => fourier_factor(c, axis, |k| C64::new(0.0, PI * k as f64)),
    }
}

/// Derivative of a 1d series (along the first axis otherwise).
pub fn differentiate(c: &CoeffSeries) -> CoeffSeries {
    differentiate_axis(c, 0)
}

/// Antiderivative along `axis`.
///
/// Chebyshev axes gain one coefficient and the result vanishes at `x = -1`.
/// Fourier axes require a zero mean and the output mean is zero.
pub fn integrate_axis(c: &CoeffSeries, axis: usize) -> Result<CoeffSeries> {
    match c.bases()[axis] {
        Basis::Chebyshev => {
            let new_len = c.shape()[axis] + 1;
            let data = map_lines(c.coeffs(), c.shape(), axis, new_len, cheb_integral_line);
            Ok(rebuild(c, axis, new_len, data))
        }
        Basis::Fourier => {
            let tol = 1e-12 * (1.0 + c.max_abs());
            let mut mean = 0.0f64;
            map_lines(c.coeffs(), c.shape(), axis, 1, |line| {
                mean = mean.max(line[0].norm());
                vec![line[0]]
            });
            if mean > tol {
                return Err(Error::NonPeriodicAntiderivative(mean));
            }
            Ok(fourier_factor(c, axis, |k| {
                if k == 0 {
                    ZERO
                } else {
                    C64::new(0.0, -1.0 / (PI * k as f64))
                }
            }))
        }
    }
}

pub fn integrate(c: &CoeffSeries) -> Result<CoeffSeries> {
    integrate_axis(c, 0)
}

/// `f(x + delta)` along a Fourier axis, with period-2 wraparound.
pub fn shift_axis(c: &CoeffSeries, axis: usize, delta: f64) -> Result<CoeffSeries> {
    if c.bases()[axis] != Basis::Fourier {
        return Err(Error::ShiftUndefined);
    }
    Ok(fourier_factor(c, axis, |k| {
        C64::from_polar(1.0, PI * k as f64 * delta)
    }))
}

pub fn shift(c: &CoeffSeries, delta: f64) -> Result<CoeffSeries> {
    shift_axis(c, 0, delta)
}

/// Exact product of two series with the same bases and packing.
///
/// Each output axis has `len_a + len_b - 1` entries (for complex Fourier
/// axes, enough to hold every product harmonic symmetrically).
pub fn multiply(a: &CoeffSeries, b: &CoeffSeries) -> Result<CoeffSeries> {
    if a.bases() != b.bases() {
        return Err(Error::BasisMismatch(format!(
            "cannot multiply {:?} by {:?}",
            a.bases(),
            b.bases()
        )));
    }
    if a.real_signal() != b.real_signal() {
        return Err(Error::BasisMismatch(
            "cannot multiply a packed real series by a complex one".into(),
        ));
    }
    let fa = a.to_full_spectrum();
    let fb = b.to_full_spectrum();
    let dim = a.dim();
    let max_k = |s: &CoeffSeries, ax: usize| {
        (0..s.shape()[ax])
            .map(|i| s.wavenumber(ax, i).abs())
            .max()
            .unwrap_or(0)
    };
    let shape: Vec<usize> = (0..dim)
        .map(|ax| match a.bases()[ax] {
            Basis::Chebyshev => fa.shape()[ax] + fb.shape()[ax] - 1,
            Basis::Fourier => (2 * (max_k(&fa, ax) + max_k(&fb, ax)) + 1) as usize,
        })
        .collect();
    let mut out = CoeffSeries::zeros(a.bases().to_vec(), shape.clone(), false)?;
    let mut ia = vec![0usize; dim];
    let mut ib = vec![0usize; dim];
    let mut targets: Vec<(Vec<usize>, f64)> = Vec::with_capacity(4);
    for (fa_i, &va) in fa.coeffs().iter().enumerate() {
        if va == ZERO {
            continue;
        }
        unflatten(fa_i, fa.shape(), &mut ia);
        for (fb_i, &vb) in fb.coeffs().iter().enumerate() {
            if vb == ZERO {
                continue;
            }
            unflatten(fb_i, fb.shape(), &mut ib);
            targets.clear();
            targets.push((Vec::with_capacity(dim), 1.0));
            for ax in 0..dim {
                let ka = fa.wavenumber(ax, ia[ax]);
                let kb = fb.wavenumber(ax, ib[ax]);
                let ks: Vec<(i64, f64)> = match a.bases()[ax] {
                    Basis::Chebyshev => vec![(ka + kb, 0.5), ((ka - kb).abs(), 0.5)],
                    Basis::Fourier => vec![(ka + kb, 1.0)],
                };
                let mut next = Vec::with_capacity(targets.len() * ks.len());
                for (idx, w) in &targets {
                    for &(k, wk) in &ks {
                        let pos = match a.bases()[ax] {
                            Basis::Chebyshev => k as usize,
                            Basis::Fourier => fft_index(k, shape[ax], false).expect("sized"),
                        };
                        let mut idx = idx.clone();
                        idx.push(pos);
                        next.push((idx, w * wk));
                    }
                }
                targets = next;
            }
            let prod = va * vb;
            for (idx, w) in &targets {
                let cur = out.get(idx);
                out.set(idx, cur + prod * *w);
            }
        }
    }
    if a.real_signal() {
        out.to_real_packed()
    } else {
        Ok(out)
    }
}

/// Resizes `axis` to `n` entries keeping harmonics aligned: Chebyshev axes
/// keep degrees `< n`, Fourier axes keep the lowest harmonics that fit.
fn resize_axis(c: &CoeffSeries, axis: usize, n: usize) -> CoeffSeries {
    let n = n.max(1);
    let len = c.shape()[axis];
    let packed = c.packed_axis() == Some(axis) || c.bases()[axis] == Basis::Chebyshev;
    let data = map_lines(c.coeffs(), c.shape(), axis, n, |line| {
        let mut out = vec![ZERO; n];
        for (i, &v) in line.iter().enumerate() {
            let k = fft_wavenumber(i, len, packed);
            if let Some(j) = fft_index(k, n, packed) {
                out[j] = v;
            }
        }
        out
    });
    rebuild(c, axis, n, data)
}

/// Truncates `axis` to its first `n` coefficients (lowest harmonics).
pub fn chop_axis(c: &CoeffSeries, axis: usize, n: usize) -> CoeffSeries {
    if n >= c.shape()[axis] {
        return c.clone();
    }
    resize_axis(c, axis, n)
}

/// Zero-extends `axis` to `n` coefficients.
pub fn pad_axis(c: &CoeffSeries, axis: usize, n: usize) -> CoeffSeries {
    if n <= c.shape()[axis] {
        return c.clone();
    }
    resize_axis(c, axis, n)
}

/// [`chop_axis`] on every axis.
pub fn chop(c: &CoeffSeries, n: usize) -> CoeffSeries {
    (0..c.dim()).fold(c.clone(), |acc, ax| chop_axis(&acc, ax, n))
}

/// [`pad_axis`] on every axis.
pub fn pad(c: &CoeffSeries, n: usize) -> CoeffSeries {
    (0..c.dim()).fold(c.clone(), |acc, ax| pad_axis(&acc, ax, n))
}

/// Squared norm weight of one stored coefficient along an axis.
pub(crate) fn axis_weight(basis: Basis, k: i64, packed: bool) -> f64 {
    match basis {
        Basis::Chebyshev if k == 0 => PI,
        Basis::Chebyshev => PI / 2.0,
        Basis::Fourier if packed && k >= 1 => 4.0,
        Basis::Fourier => 2.0,
    }
}

/// `L2` norm: Chebyshev-weighted (`1/sqrt(1-x^2)`) along Chebyshev axes and
/// plain `L2[-1, 1]` along Fourier axes.
pub fn norm_l2(c: &CoeffSeries) -> f64 {
    let packed = c.packed_axis();
    let mut idx = vec![0usize; c.dim()];
    let mut weights: HashMap<(usize, usize), f64> = HashMap::new();
    let mut acc = 0.0;
    for (flat, v) in c.coeffs().iter().enumerate() {
        unflatten(flat, c.shape(), &mut idx);
        let mut w = 1.0;
        for ax in 0..c.dim() {
            w *= *weights.entry((ax, idx[ax])).or_insert_with(|| {
                axis_weight(c.bases()[ax], c.wavenumber(ax, idx[ax]), packed == Some(ax))
            });
        }
        acc += w * v.norm_sqr();
    }
    acc.sqrt()
}
