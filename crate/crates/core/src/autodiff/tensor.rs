use num_complex::Complex64 as C64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<C64>,
}

impl CMat {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "{rows}x{cols} from {}", data.len());
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![ZERO; rows * cols])
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        Self::new(rows, cols, data.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self::new(rows, cols, data)
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { ZERO })
    }

    /// Entries `N(0, 1) * scale`, real parts only unless `complex`.
    pub fn randn<R: Rng>(rows: usize, cols: usize, scale: f64, complex: bool, rng: &mut R) -> Self {
        let data = (0..rows * cols)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = if complex { StandardNormal.sample(rng) } else { 0.0 };
                C64::new(re * scale, im * scale)
            })
            .collect();
        Self::new(rows, cols, data)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.cols + j] = v;
    }

    pub fn reshaped(mut self, rows: usize, cols: usize) -> Self {
        assert_eq!(rows * cols, self.data.len());
        self.rows = rows;
        self.cols = cols;
        self
    }

    pub fn norm_sqr(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn add_assign(&mut self, other: &CMat) {
        assert_eq!(self.shape(), other.shape());
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b;
        }
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self::new(self.rows, self.cols, self.data.iter().map(|v| v * s).collect())
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    /// `self * other`.
    pub fn matmul(&self, other: &CMat) -> Self {
        assert_eq!(self.cols, other.rows, "matmul {:?} x {:?}", self.shape(), other.shape());
        let (n, k, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let row = &mut out[i * m..(i + 1) * m];
            for p in 0..k {
                let a = self.data[i * k + p];
                if a == ZERO {
                    continue;
                }
                axpy(row, a, &other.data[p * m..(p + 1) * m]);
            }
        }
        Self::new(n, m, out)
    }

    /// `self * other^H`.
    pub fn matmul_nh(&self, other: &CMat) -> Self {
        assert_eq!(self.cols, other.cols);
        let (n, k, m) = (self.rows, self.cols, other.rows);
        let mut out = vec![ZERO; n * m];
        for i in 0..n {
            let arow = &self.data[i * k..(i + 1) * k];
            for j in 0..m {
                let brow = &other.data[j * k..(j + 1) * k];
                let mut acc = ZERO;
                for (a, b) in arow.iter().zip(brow) {
                    acc += a * b.conj();
                }
                out[i * m + j] = acc;
            }
        }
        Self::new(n, m, out)
    }

    /// `self^H * other`.
    pub fn matmul_hn(&self, other: &CMat) -> Self {
        assert_eq!(self.rows, other.rows);
        let (k, n, m) = (self.rows, self.cols, other.cols);
        let mut out = vec![ZERO; n * m];
        for p in 0..k {
            let brow = &other.data[p * m..(p + 1) * m];
            for i in 0..n {
                let a = self.data[p * n + i].conj();
                if a == ZERO {
                    continue;
                }
                let row = &mut out[i * m..(i + 1) * m];
                axpy(row, a, brow);
            }
        }
        Self::new(n, m, out)
    }
}

fn axpy(out: &mut [C64], a: C64, x: &[C64]) {
    if a.im == 0.0 {
        for (o, b) in out.iter_mut().zip(x) {
            o.re += a.re * b.re;
            o.im += a.re * b.im;
        }
    } else {
        for (o, b) in out.iter_mut().zip(x) {
            *o += a * b;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: usize, cols: usize, v: &[(f64, f64)]) -> CMat {
        CMat::new(rows, cols, v.iter().map(|&(a, b)| C64::new(a, b)).collect())
    }

    #[test]
    fn products_agree_with_explicit_adjoints() {
        let a = m(2, 3, &[(1.0, 2.0), (0.0, -1.0), (3.0, 0.5), (2.0, 0.0), (-1.0, 1.0), (0.5, 0.5)]);
        let b = m(2, 3, &[(0.0, 1.0), (1.0, 1.0), (2.0, -2.0), (1.0, 0.0), (0.0, 0.0), (-3.0, 1.0)]);
        let bh = b.conj_transpose();
        assert_eq!(a.matmul_nh(&b), a.matmul(&bh));
        assert_eq!(a.matmul_hn(&b), a.conj_transpose().matmul(&b));
    }
}
