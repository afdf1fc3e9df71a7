//! Grid <-> coefficient transforms (DCT-I through a length-2n FFT, and the FFT)
//! plus pointwise evaluation.

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use super::basis::{Basis, GridKind};
use super::lines::map_lines;
use super::series::{fft_wavenumber, CoeffSeries, GridFunction};
use crate::error::{Error, Result};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

fn sign(k: i64) -> f64 {
    if k.rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Even extension FFT: returns `v_0 + (-1)^j v_n + 2 sum_{k=1}^{n-1} v_k cos(pi j k / n)`.
fn dct1_raw(planner: &mut FftPlanner<f64>, v: &[C64]) -> Vec<C64> {
    let n = v.len() - 1;
    if n == 0 {
        return vec![v[0] * 2.0];
    }
    let mut ext = Vec::with_capacity(2 * n);
    ext.extend_from_slice(v);
    ext.extend(v[1..n].iter().rev());
    planner.plan_fft_forward(2 * n).process(&mut ext);
    ext.truncate(n + 1);
    ext
}

/// Chebyshev coefficients from samples at `cos(k pi / n)`.
pub(crate) fn cheb_analysis_line(planner: &mut FftPlanner<f64>, values: &[C64]) -> Vec<C64> {
    let n = values.len() - 1;
    if n == 0 {
        return values.to_vec();
    }
    let mut c = dct1_raw(planner, values);
    let scale = 1.0 / n as f64;
    for (j, cj) in c.iter_mut().enumerate() {
        *cj *= if j == 0 || j == n { 0.5 * scale } else { scale };
    }
    c
}

/// Samples at `cos(k pi / n)` of a degree-`n` Chebyshev series.
pub(crate) fn cheb_synthesis_line(planner: &mut FftPlanner<f64>, coeffs: &[C64]) -> Vec<C64> {
    let n = coeffs.len() - 1;
    if n == 0 {
        return coeffs.to_vec();
    }
    let mut w = coeffs.to_vec();
    w[0] *= 2.0;
    w[n] *= 2.0;
    let mut v = dct1_raw(planner, &w);
    for x in v.iter_mut() {
        *x *= 0.5;
    }
    v
}

pub(crate) fn fft_analysis_line(
    planner: &mut FftPlanner<f64>,
    values: &[C64],
    packed: bool,
) -> Vec<C64> {
    let m = values.len();
    let mut bins = values.to_vec();
    planner.plan_fft_forward(m).process(&mut bins);
    let inv = 1.0 / m as f64;
    if packed {
        let half = m / 2 + 1;
        (0..half)
            .map(|k| {
                let mut c = bins[k] * (sign(k as i64) * inv);
                if m % 2 == 0 && k == m / 2 {
                    c *= 0.5;
                }
                c
            })
            .collect()
    } else {
        (0..m)
            .map(|i| bins[i] * (sign(fft_wavenumber(i, m, false)) * inv))
            .collect()
    }
}

/// Values at the `m` uniform nodes. Harmonics beyond the grid's band are
/// folded, so the samples are exact point values for any `m`.
pub(crate) fn fft_synthesis_line(
    planner: &mut FftPlanner<f64>,
    coeffs: &[C64],
    m: usize,
    packed: bool,
) -> Vec<C64> {
    let len = coeffs.len();
    let mut bins = vec![ZERO; m];
    for (i, &c) in coeffs.iter().enumerate() {
        let k = fft_wavenumber(i, len, packed);
        let s = sign(k);
        bins[k.rem_euclid(m as i64) as usize] += c * s;
        if packed && k >= 1 {
            bins[(-k).rem_euclid(m as i64) as usize] += c.conj() * s;
        }
    }
    planner.plan_fft_inverse(m).process(&mut bins);
    bins
}

/// Clenshaw evaluation of `sum c_j T_j(x)`.
pub(crate) fn cheb_eval_line(coeffs: &[C64], x: f64) -> C64 {
    let mut b1 = ZERO;
    let mut b2 = ZERO;
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = c + b1 * (2.0 * x) - b2;
        b2 = b1;
        b1 = b0;
    }
    coeffs[0] + b1 * x - b2
}

pub(crate) fn fourier_eval_line(coeffs: &[C64], x: f64, packed: bool) -> C64 {
    let len = coeffs.len();
    let mut acc = ZERO;
    for (i, &c) in coeffs.iter().enumerate() {
        let k = fft_wavenumber(i, len, packed);
        let phase = C64::from_polar(1.0, std::f64::consts::PI * k as f64 * x);
        acc += c * phase;
        if packed && k >= 1 {
            acc += (c * phase).conj();
        }
    }
    acc
}

/// Axis order for coefficient -> value maps: the packed axis goes last so
/// that its conjugate partners see fully transformed lines.
fn synthesis_order(c: &CoeffSeries) -> Vec<usize> {
    let packed = c.packed_axis();
    let mut order: Vec<usize> = (0..c.dim()).filter(|&a| Some(a) != packed).collect();
    order.extend(packed);
    order
}

/// Coefficients from samples on the basis-native grids.
///
/// Chebyshev grids give Chebyshev axes and uniform grids Fourier axes. With
/// `real_signal` the last Fourier axis keeps only `k >= 0`.
pub fn analysis(g: &GridFunction, real_signal: bool) -> Result<CoeffSeries> {
    let bases: Vec<Basis> = g.grids().iter().map(|k| k.basis()).collect();
    let packed = if real_signal {
        bases.iter().rposition(|&b| b == Basis::Fourier)
    } else {
        None
    };
    let mut planner = FftPlanner::new();
    let mut data = g.values().to_vec();
    let mut shape = g.shape().to_vec();
    let mut order: Vec<usize> = packed.into_iter().collect();
    order.extend((0..g.dim()).filter(|&a| Some(a) != packed));
    for axis in order {
        let n = shape[axis];
        let (new_len, is_packed) = match bases[axis] {
            Basis::Chebyshev => (n, false),
            Basis::Fourier if packed == Some(axis) => (n / 2 + 1, true),
            Basis::Fourier => (n, false),
        };
        data = map_lines(&data, &shape, axis, new_len, |line| match bases[axis] {
            Basis::Chebyshev => cheb_analysis_line(&mut planner, line),
            Basis::Fourier => fft_analysis_line(&mut planner, line, is_packed),
        });
        shape[axis] = new_len;
    }
    CoeffSeries::new(bases, shape, data, real_signal)
}

/// Chebyshev coefficients from samples on `cheb_points`.
pub fn cheb_analysis(g: &GridFunction) -> Result<CoeffSeries> {
    if g.grids().iter().any(|&k| k != GridKind::Chebyshev) {
        return Err(Error::GridMismatch(
            "cheb_analysis needs samples on a Chebyshev grid".into(),
        ));
    }
    analysis(g, true)
}

/// Fourier coefficients from samples on the uniform periodic grid.
pub fn fourier_analysis(g: &GridFunction, real_signal: bool) -> Result<CoeffSeries> {
    if g.grids().iter().any(|&k| k != GridKind::Uniform) {
        return Err(Error::GridMismatch(
            "fourier_analysis needs samples on a uniform grid".into(),
        ));
    }
    analysis(g, real_signal)
}

/// Values of a Chebyshev series on its own grid (`len` nodes per axis).
pub fn cheb_synthesis(c: &CoeffSeries) -> Result<GridFunction> {
    if c.bases().iter().any(|&b| b != Basis::Chebyshev) {
        return Err(Error::BasisMismatch(
            "cheb_synthesis needs a Chebyshev series".into(),
        ));
    }
    let shape = c.shape().to_vec();
    let grids = vec![GridKind::Chebyshev; c.dim()];
    if shape.iter().any(|&n| n < 2) {
        // a constant has no native grid of its own; use the 2-point grid
        let sizes: Vec<usize> = shape.iter().map(|&n| n.max(2)).collect();
        return interpolate_to_grid(c, &sizes, &grids);
    }
    interpolate_to_grid(c, &shape, &grids)
}

/// Values of a Fourier series on the uniform grid with `m` points per axis.
pub fn fourier_synthesis(c: &CoeffSeries, m: &[usize]) -> Result<GridFunction> {
    if c.bases().iter().any(|&b| b != Basis::Fourier) {
        return Err(Error::BasisMismatch(
            "fourier_synthesis needs a Fourier series".into(),
        ));
    }
    interpolate_to_grid(c, m, &vec![GridKind::Uniform; c.dim()])
}

/// The grid each axis transforms against, sized to be exact for the series:
/// Chebyshev axes get `len` nodes, packed Fourier axes `2 len - 1` points.
pub fn native_grid(c: &CoeffSeries) -> (Vec<usize>, Vec<GridKind>) {
    let packed = c.packed_axis();
    let sizes = (0..c.dim())
        .map(|ax| match c.bases()[ax] {
            Basis::Chebyshev => c.shape()[ax].max(2),
            Basis::Fourier if packed == Some(ax) => 2 * c.shape()[ax] - 1,
            Basis::Fourier => c.shape()[ax],
        })
        .collect();
    let grids = c.bases().iter().map(|b| b.native_grid()).collect();
    (sizes, grids)
}

/// Evaluates the series on a tensor grid of the given kinds and sizes.
///
/// Chebyshev -> Chebyshev grids use the DCT when the grid resolves the
/// series and Clenshaw otherwise; Fourier -> uniform grids use the FFT with
/// folding. Cross pairings (Chebyshev on uniform nodes, Fourier on Chebyshev
/// nodes) are direct `O(n m)` sums. The result is always the exact point
/// values of the represented function.
pub fn interpolate_to_grid(
    c: &CoeffSeries,
    sizes: &[usize],
    grids: &[GridKind],
) -> Result<GridFunction> {
    if sizes.len() != c.dim() || grids.len() != c.dim() {
        return Err(Error::Shape("grid rank differs from series rank".into()));
    }
    let mut planner = FftPlanner::new();
    let packed = c.packed_axis();
    let mut data = c.coeffs().to_vec();
    let mut shape = c.shape().to_vec();
    for axis in synthesis_order(c) {
        let m = sizes[axis];
        let nodes = grids[axis].nodes(m)?;
        let is_packed = packed == Some(axis);
        let basis = c.bases()[axis];
        let len = shape[axis];
        data = map_lines(&data, &shape, axis, m, |line| match (basis, grids[axis]) {
            (Basis::Chebyshev, GridKind::Chebyshev) if m >= len => {
                let mut padded = line.to_vec();
                padded.resize(m, ZERO);
                cheb_synthesis_line(&mut planner, &padded)
            }
            (Basis::Chebyshev, _) => nodes.iter().map(|&x| cheb_eval_line(line, x)).collect(),
            (Basis::Fourier, GridKind::Uniform) => {
                fft_synthesis_line(&mut planner, line, m, is_packed)
            }
            (Basis::Fourier, GridKind::Chebyshev) => nodes
                .iter()
                .map(|&x| fourier_eval_line(line, x, is_packed))
                .collect(),
        });
        shape[axis] = m;
    }
    GridFunction::new(grids.to_vec(), shape, data)
}

/// Value of the series at a point of `[-1, 1]^D`.
pub fn evaluate(c: &CoeffSeries, x: &[f64]) -> Result<C64> {
    if x.len() != c.dim() {
        return Err(Error::Shape(format!(
            "point of rank {} for a series of rank {}",
            x.len(),
            c.dim()
        )));
    }
    for &xi in x {
        if !(xi.abs() <= 1.0 + 1e-14) {
            return Err(Error::OutOfDomain(xi));
        }
    }
    let packed = c.packed_axis();
    let mut data = c.coeffs().to_vec();
    let mut shape = c.shape().to_vec();
    for axis in synthesis_order(c) {
        let basis = c.bases()[axis];
        let is_packed = packed == Some(axis);
        data = map_lines(&data, &shape, axis, 1, |line| {
            vec![match basis {
                Basis::Chebyshev => cheb_eval_line(line, x[axis]),
                Basis::Fourier => fourier_eval_line(line, x[axis], is_packed),
            }]
        });
        shape[axis] = 1;
    }
    Ok(data[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::cheb_points;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn t3_samples_give_unit_vector() {
        let g = GridFunction::sample(GridKind::Chebyshev, 9, |x| 4.0 * x * x * x - 3.0 * x)
            .unwrap();
        let s = cheb_analysis(&g).unwrap();
        for (j, v) in s.coeffs().iter().enumerate() {
            let want = if j == 3 { 1.0 } else { 0.0 };
            assert!((v - c(want)).norm() < 1e-14, "j={j} v={v}");
        }
    }

    #[test]
    fn x_squared_expansion() {
        let g = GridFunction::sample(GridKind::Chebyshev, 7, |x| x * x).unwrap();
        let s = cheb_analysis(&g).unwrap();
        assert!((s.get(&[0]) - c(0.5)).norm() < 1e-15);
        assert!((s.get(&[2]) - c(0.5)).norm() < 1e-15);
        for j in [1, 3, 4, 5, 6] {
            assert!(s.get(&[j]).norm() < 1e-15);
        }
    }

    #[test]
    fn analysis_rejects_wrong_grid() {
        let g = GridFunction::sample(GridKind::Uniform, 8, |x| x).unwrap();
        assert!(matches!(cheb_analysis(&g), Err(Error::GridMismatch(_))));
        let g = GridFunction::sample(GridKind::Chebyshev, 8, |x| x).unwrap();
        assert!(matches!(
            fourier_analysis(&g, true),
            Err(Error::GridMismatch(_))
        ));
    }

    #[test]
    fn synthesis_of_t0_and_t1() {
        let ones = cheb_synthesis(&CoeffSeries::chebyshev(&[1.0, 0.0, 0.0, 0.0, 0.0])).unwrap();
        assert!(ones.values().iter().all(|v| (v - c(1.0)).norm() < 1e-15));
        let t1 = cheb_synthesis(&CoeffSeries::chebyshev(&[0.0, 1.0, 0.0, 0.0, 0.0])).unwrap();
        let nodes = cheb_points(4).unwrap();
        for (v, x) in t1.values().iter().zip(nodes) {
            assert!((v - c(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn chebyshev_roundtrip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let coeffs: Vec<C64> = (0..33)
            .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        let s = CoeffSeries::chebyshev_complex(coeffs);
        let back = cheb_analysis(&cheb_synthesis(&s).unwrap()).unwrap();
        assert!(back.max_abs_diff(&s) < 1e-13);
    }

    #[test]
    fn cosine_on_eight_points() {
        let g =
            GridFunction::sample(GridKind::Uniform, 8, |x| (std::f64::consts::PI * x).cos())
                .unwrap();
        let s = fourier_analysis(&g, true).unwrap();
        assert_eq!(s.len(), 5);
        assert!((s.harmonic(1) - c(0.5)).norm() < 1e-15);
        for k in [0, 2, 3, 4] {
            assert!(s.harmonic(k).norm() < 1e-15);
        }
        let full = fourier_analysis(&g, false).unwrap();
        assert!((full.harmonic(1) - c(0.5)).norm() < 1e-15);
        assert!((full.harmonic(-1) - c(0.5)).norm() < 1e-15);
    }

    #[test]
    fn constant_one() {
        let g = GridFunction::sample(GridKind::Uniform, 6, |_| 1.0).unwrap();
        let s = fourier_analysis(&g, true).unwrap();
        assert!((s.harmonic(0) - c(1.0)).norm() < 1e-15);
        assert!(s.coeffs()[1..].iter().all(|v| v.norm() < 1e-15));
    }

    #[test]
    fn clenshaw_and_phasors() {
        let t2 = CoeffSeries::chebyshev(&[0.0, 0.0, 1.0]);
        assert!((evaluate(&t2, &[0.5]).unwrap() - c(-0.5)).norm() < 1e-15);
        let e1 = CoeffSeries::fourier_complex(vec![c(0.0), c(1.0), c(0.0)]);
        assert!((evaluate(&e1, &[0.5]).unwrap() - C64::new(0.0, 1.0)).norm() < 1e-15);
        assert!(matches!(
            evaluate(&t2, &[1.5]),
            Err(Error::OutOfDomain(_))
        ));
    }

    #[test]
    fn even_grid_nyquist_roundtrip() {
        let vals = [0.3, -1.0, 2.0, 0.5, 0.25, -0.75];
        let g = GridFunction::from_real(GridKind::Uniform, &vals).unwrap();
        let s = fourier_analysis(&g, true).unwrap();
        let back = fourier_synthesis(&s, &[6]).unwrap();
        for (a, b) in back.values().iter().zip(vals) {
            assert!((a - c(b)).norm() < 1e-14);
        }
    }
}
