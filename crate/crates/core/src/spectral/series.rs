use num_complex::Complex64 as C64;

use super::basis::{Basis, GridKind};
use crate::error::{Error, Result};

/// A truncated Chebyshev and/or Fourier series in one or two variables.
///
/// Coefficients are stored row-major over `shape`. See the module docs for
/// the Fourier packing rules.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffSeries {
    bases: Vec<Basis>,
    shape: Vec<usize>,
    real_signal: bool,
    coeffs: Vec<C64>,
}

impl CoeffSeries {
    pub fn new(
        bases: Vec<Basis>,
        shape: Vec<usize>,
        coeffs: Vec<C64>,
        real_signal: bool,
    ) -> Result<Self> {
        if bases.is_empty() || bases.len() > 2 || bases.len() != shape.len() {
            return Err(Error::Shape(format!(
                "{} bases for a shape of rank {}; only rank 1 and 2 are supported",
                bases.len(),
                shape.len()
            )));
        }
        if shape.iter().any(|&n| n == 0) {
            return Err(Error::Shape(format!("zero-length axis in {shape:?}")));
        }
        let len: usize = shape.iter().product();
        if len != coeffs.len() {
            return Err(Error::Shape(format!(
                "shape {shape:?} needs {len} coefficients, got {}",
                coeffs.len()
            )));
        }
        Ok(Self {
            bases,
            shape,
            real_signal,
            coeffs,
        })
    }

    /// Zero series.
    pub fn zeros(bases: Vec<Basis>, shape: Vec<usize>, real_signal: bool) -> Result<Self> {
        let len = shape.iter().product();
        Self::new(bases, shape, vec![C64::new(0.0, 0.0); len], real_signal)
    }

    /// One-dimensional Chebyshev series from real coefficients.
    pub fn chebyshev(coeffs: &[f64]) -> Self {
        Self::chebyshev_complex(coeffs.iter().map(|&c| C64::new(c, 0.0)).collect())
    }

    pub fn chebyshev_complex(coeffs: Vec<C64>) -> Self {
        let n = coeffs.len().max(1);
        let mut coeffs = coeffs;
        coeffs.resize(n, C64::new(0.0, 0.0));
        Self::new(vec![Basis::Chebyshev], vec![n], coeffs, true).expect("valid 1d series")
    }

    /// One-dimensional real-signal Fourier series; `coeffs[k]` multiplies
    /// `exp(i pi k x)` for `k >= 0`.
    pub fn fourier(coeffs: Vec<C64>) -> Self {
        let n = coeffs.len().max(1);
        let mut coeffs = coeffs;
        coeffs.resize(n, C64::new(0.0, 0.0));
        Self::new(vec![Basis::Fourier], vec![n], coeffs, true).expect("valid 1d series")
    }

    /// One-dimensional complex Fourier series in FFT order.
    pub fn fourier_complex(coeffs: Vec<C64>) -> Self {
        let n = coeffs.len().max(1);
        let mut coeffs = coeffs;
        coeffs.resize(n, C64::new(0.0, 0.0));
        Self::new(vec![Basis::Fourier], vec![n], coeffs, false).expect("valid 1d series")
    }

    pub fn bases(&self) -> &[Basis] {
        &self.bases
    }

    pub fn basis(&self) -> Basis {
        self.bases[0]
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn real_signal(&self) -> bool {
        self.real_signal
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [C64] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    /// Axis holding the half spectrum of a real signal, if any.
    pub fn packed_axis(&self) -> Option<usize> {
        if !self.real_signal {
            return None;
        }
        self.bases.iter().rposition(|&b| b == Basis::Fourier)
    }

    /// Harmonic index represented by position `index` along `axis`.
    ///
    /// For Chebyshev axes this is the polynomial degree.
    pub fn wavenumber(&self, axis: usize, index: usize) -> i64 {
        match self.bases[axis] {
            Basis::Chebyshev => index as i64,
            Basis::Fourier => {
                let packed = self.packed_axis() == Some(axis);
                fft_wavenumber(index, self.shape[axis], packed)
            }
        }
    }

    /// Position of harmonic `k` along `axis`, if stored.
    pub fn index_of(&self, axis: usize, k: i64) -> Option<usize> {
        let len = self.shape[axis];
        match self.bases[axis] {
            Basis::Chebyshev => (k >= 0 && (k as usize) < len).then_some(k as usize),
            Basis::Fourier => {
                let packed = self.packed_axis() == Some(axis);
                fft_index(k, len, packed)
            }
        }
    }

    /// Coefficient at a multi-index, 1d convenience `get(&[j])`.
    pub fn get(&self, index: &[usize]) -> C64 {
        self.coeffs[self.flat(index)]
    }

    pub fn set(&mut self, index: &[usize], value: C64) {
        let i = self.flat(index);
        self.coeffs[i] = value;
    }

    fn flat(&self, index: &[usize]) -> usize {
        assert_eq!(index.len(), self.shape.len());
        index
            .iter()
            .zip(&self.shape)
            .fold(0, |acc, (&i, &n)| {
                assert!(i < n, "index out of range");
                acc * n + i
            })
    }

    /// Coefficient of harmonic `k` in a 1d series (zero if not stored).
    pub fn harmonic(&self, k: i64) -> C64 {
        assert_eq!(self.dim(), 1);
        self.index_of(0, k)
            .map(|i| self.coeffs[i])
            .unwrap_or(C64::new(0.0, 0.0))
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|&c| f(c)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        self.map(|c| c * s)
    }

    /// Max-norm distance after zero-extension to a common shape.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let (a, b) = common_layout(self, other);
        a.iter()
            .zip(&b)
            .map(|(x, y)| (x - y).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Expands the packed axis of a real signal into the full FFT-ordered
    /// spectrum, returning a complex-mode series describing the same function.
    pub fn to_full_spectrum(&self) -> Self {
        let Some(axis) = self.packed_axis() else {
            return self.clone();
        };
        let half = self.shape[axis];
        let kmax = half as i64 - 1;
        let full_len = (2 * kmax + 1) as usize;
        let mut shape = self.shape.clone();
        shape[axis] = full_len;
        let mut out = Self {
            bases: self.bases.clone(),
            shape,
            real_signal: false,
            coeffs: vec![C64::new(0.0, 0.0); self.coeffs.len() / half * full_len],
        };
        let zero_rank = self.dim();
        let mut idx = vec![0usize; zero_rank];
        for flat in 0..self.coeffs.len() {
            unflatten(flat, &self.shape, &mut idx);
            let c = self.coeffs[flat];
            let k = idx[axis] as i64;
            let mut dst = idx.clone();
            dst[axis] = fft_index(k, full_len, false).expect("fits");
            let d = out.flat(&dst);
            out.coeffs[d] += c;
            if k >= 1 {
                // conjugate partner: flip every Fourier index
                let mut partner = idx.clone();
                let mut ok = true;
                for ax in 0..zero_rank {
                    let kk = if ax == axis {
                        -k
                    } else if self.bases[ax] == Basis::Fourier {
                        -self.wavenumber(ax, idx[ax])
                    } else {
                        idx[ax] as i64
                    };
                    match out.index_of(ax, kk) {
                        Some(p) => partner[ax] = p,
                        None => ok = false,
                    }
                }
                if ok {
                    let p = out.flat(&partner);
                    out.coeffs[p] += c.conj();
                }
            }
        }
        out
    }

    /// Drops the negative half of the last Fourier axis, assuming Hermitian
    /// symmetry. Inverse of [`to_full_spectrum`](Self::to_full_spectrum).
    pub fn to_real_packed(&self) -> Result<Self> {
        if self.real_signal {
            return Ok(self.clone());
        }
        let Some(axis) = self.bases.iter().rposition(|&b| b == Basis::Fourier) else {
            return Ok(Self {
                real_signal: true,
                ..self.clone()
            });
        };
        let len = self.shape[axis];
        let kmax = (0..len)
            .map(|i| fft_wavenumber(i, len, false))
            .max()
            .unwrap_or(0);
        let half = kmax as usize + 1;
        let data = super::map_lines(&self.coeffs, &self.shape, axis, half, |line| {
            (0..half)
                .map(|k| line[fft_index(k as i64, len, false).expect("present")])
                .collect()
        });
        let mut shape = self.shape.clone();
        shape[axis] = half;
        Self::new(self.bases.clone(), shape, data, true)
    }
}

/// Zero-extends both series to the elementwise-max shape (harmonic-aligned).
pub(crate) fn common_layout(a: &CoeffSeries, b: &CoeffSeries) -> (Vec<C64>, Vec<C64>) {
    assert_eq!(a.bases, b.bases, "basis mismatch");
    assert_eq!(a.real_signal, b.real_signal, "packing mismatch");
    let shape: Vec<usize> = a
        .shape
        .iter()
        .zip(&b.shape)
        .map(|(&x, &y)| x.max(y))
        .collect();
    let mut pa = a.clone();
    let mut pb = b.clone();
    for ax in 0..shape.len() {
        pa = super::pad_axis(&pa, ax, shape[ax]);
        pb = super::pad_axis(&pb, ax, shape[ax]);
    }
    (pa.coeffs, pb.coeffs)
}

pub(crate) fn unflatten(mut flat: usize, shape: &[usize], out: &mut [usize]) {
    for ax in (0..shape.len()).rev() {
        out[ax] = flat % shape[ax];
        flat /= shape[ax];
    }
}

/// Harmonic at position `i` of a Fourier axis of length `len`.
pub(crate) fn fft_wavenumber(i: usize, len: usize, packed: bool) -> i64 {
    if packed || i <= (len - 1) / 2 {
        i as i64
    } else {
        i as i64 - len as i64
    }
}

pub(crate) fn fft_index(k: i64, len: usize, packed: bool) -> Option<usize> {
    if packed {
        return (k >= 0 && (k as usize) < len).then_some(k as usize);
    }
    let pos_max = ((len - 1) / 2) as i64;
    let neg_min = pos_max - len as i64 + 1;
    if (0..=pos_max).contains(&k) {
        Some(k as usize)
    } else if (neg_min..0).contains(&k) {
        Some((k + len as i64) as usize)
    } else {
        None
    }
}

/// Samples of a function on a tensor-product grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    grids: Vec<GridKind>,
    shape: Vec<usize>,
    values: Vec<C64>,
}

impl GridFunction {
    pub fn new(grids: Vec<GridKind>, shape: Vec<usize>, values: Vec<C64>) -> Result<Self> {
        if grids.is_empty() || grids.len() > 2 || grids.len() != shape.len() {
            return Err(Error::Shape("grid rank must be 1 or 2".into()));
        }
        for (&g, &n) in grids.iter().zip(&shape) {
            g.nodes(n)?;
        }
        if shape.iter().product::<usize>() != values.len() {
            return Err(Error::Shape(format!(
                "grid shape {shape:?} does not match {} values",
                values.len()
            )));
        }
        Ok(Self {
            grids,
            shape,
            values,
        })
    }

    /// 1d grid function from real samples.
    pub fn from_real(grid: GridKind, values: &[f64]) -> Result<Self> {
        Self::new(
            vec![grid],
            vec![values.len()],
            values.iter().map(|&v| C64::new(v, 0.0)).collect(),
        )
    }

    /// Samples `f` on a 1d grid.
    pub fn sample(grid: GridKind, size: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        let nodes = grid.nodes(size)?;
        let vals: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
        Self::from_real(grid, &vals)
    }

    /// Samples `f(x, y)` on a 2d tensor grid.
    pub fn sample_2d(
        grids: [GridKind; 2],
        shape: [usize; 2],
        f: impl Fn(f64, f64) -> C64,
    ) -> Result<Self> {
        let xs = grids[0].nodes(shape[0])?;
        let ys = grids[1].nodes(shape[1])?;
        let mut values = Vec::with_capacity(shape[0] * shape[1]);
        for &x in &xs {
            for &y in &ys {
                values.push(f(x, y));
            }
        }
        Self::new(grids.to_vec(), shape.to_vec(), values)
    }

    pub fn grids(&self) -> &[GridKind] {
        &self.grids
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn dim(&self) -> usize {
        self.shape.len()
    }

    pub fn values(&self) -> &[C64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [C64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<C64> {
        self.values
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn nodes(&self, axis: usize) -> Vec<f64> {
        self.grids[axis]
            .nodes(self.shape[axis])
            .expect("validated at construction")
    }

    pub fn map(&self, f: impl Fn(C64) -> C64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
            ..self.clone()
        }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape, other.shape);
        self.values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Discrete l2 norm of the samples.
    pub fn l2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumbers_follow_fft_order() {
        let ks: Vec<i64> = (0..5).map(|i| fft_wavenumber(i, 5, false)).collect();
        assert_eq!(ks, vec![0, 1, 2, -2, -1]);
        let ks: Vec<i64> = (0..4).map(|i| fft_wavenumber(i, 4, false)).collect();
        assert_eq!(ks, vec![0, 1, -2, -1]);
        for len in 1..9 {
            for i in 0..len {
                let k = fft_wavenumber(i, len, false);
                assert_eq!(fft_index(k, len, false), Some(i));
            }
        }
    }

    #[test]
    fn full_spectrum_roundtrip() {
        let s = CoeffSeries::fourier(vec![
            C64::new(1.0, 0.0),
            C64::new(0.5, -0.25),
            C64::new(0.0, 2.0),
        ]);
        let full = s.to_full_spectrum();
        assert_eq!(full.shape(), &[5]);
        assert_eq!(full.harmonic(-1), C64::new(0.5, 0.25));
        assert_eq!(full.harmonic(-2), C64::new(0.0, -2.0));
        assert_eq!(full.to_real_packed().unwrap(), s);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(CoeffSeries::new(vec![Basis::Chebyshev], vec![3], vec![], true).is_err());
        assert!(CoeffSeries::new(vec![Basis::Chebyshev], vec![0], vec![], true).is_err());
    }
}
