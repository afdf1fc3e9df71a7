//! Coefficient sequences with an implicit infinite tail of zeros.
//!
//! Sequences of different lengths add by zero-extension, and operators act on
//! any input length: shorter inputs are padded, longer ones are truncated to
//! the operator's column count.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::{cheb_eval_line, Basis, CoeffSeries};

const ZERO: C64 = C64 { re: 0.0, im: 0.0 };

/// Finite prefix of a zero-tailed coefficient sequence.
#[derive(Clone, Debug)]
pub struct Seq {
    basis: Basis,
    entries: Vec<C64>,
}

impl Seq {
    pub fn new(basis: Basis, entries: Vec<C64>) -> Self {
        Self { basis, entries }
    }

    pub fn from_real(basis: Basis, entries: &[f64]) -> Self {
        Self::new(basis, entries.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn empty(basis: Basis) -> Self {
        Self::new(basis, Vec::new())
    }

    /// Coefficients of a 1d series. Fourier series must be in real-signal
    /// (one-sided) form.
    pub fn from_series(c: &CoeffSeries) -> Result<Self> {
        if c.dim() != 1 {
            return Err(Error::Shape("a sequence is one-dimensional".into()));
        }
        if c.basis() == Basis::Fourier && !c.real_signal() {
            return Err(Error::InvalidArgument(
                "complex Fourier series have no one-sided sequence form".into(),
            ));
        }
        Ok(Self::new(c.basis(), c.coeffs().to_vec()))
    }

    pub fn to_series(&self) -> CoeffSeries {
        match self.basis {
            Basis::Chebyshev => CoeffSeries::chebyshev_complex(self.entries.clone()),
            Basis::Fourier => CoeffSeries::fourier(self.entries.clone()),
        }
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn entries(&self) -> &[C64] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry `i`, zero past the stored prefix.
    pub fn get(&self, i: usize) -> C64 {
        self.entries.get(i).copied().unwrap_or(ZERO)
    }

    /// Canonical form without trailing zeros.
    pub fn trimmed(&self) -> Self {
        let end = self
            .entries
            .iter()
            .rposition(|&v| v != ZERO)
            .map_or(0, |i| i + 1);
        Self::new(self.basis, self.entries[..end].to_vec())
    }

    pub fn padded(&self, n: usize) -> Self {
        let mut entries = self.entries.clone();
        if entries.len() < n {
            entries.resize(n, ZERO);
        }
        Self::new(self.basis, entries)
    }
}

impl PartialEq for Seq {
    fn eq(&self, other: &Self) -> bool {
        let n = self.len().max(other.len());
        self.basis == other.basis && (0..n).all(|i| self.get(i) == other.get(i))
    }
}

fn same_basis(a: &Seq, b: &Seq) -> Result<()> {
    if a.basis != b.basis {
        return Err(Error::BasisMismatch(format!(
            "{:?} sequence with {:?} sequence",
            a.basis, b.basis
        )));
    }
    Ok(())
}

/// Entrywise sum after zero-extension.
pub fn seq_add(a: &Seq, b: &Seq) -> Result<Seq> {
    same_basis(a, b)?;
    let n = a.len().max(b.len());
    Ok(Seq::new(a.basis, (0..n).map(|i| a.get(i) + b.get(i)).collect()))
}

/// `sum conj(chi_i) psi_i` over the common index set.
pub fn seq_inner(chi: &Seq, psi: &Seq) -> Result<C64> {
    same_basis(chi, psi)?;
    Ok(chi
        .entries
        .iter()
        .zip(&psi.entries)
        .map(|(a, b)| a.conj() * b)
        .sum())
}

/// Dense complex `rows x cols` matrix acting on the first `cols` entries of a
/// sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct SeqOperator {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl SeqOperator {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} operator from {} entries",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        let data = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| f(i, j))
            .collect();
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C64::new(1.0, 0.0) } else { ZERO })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| ZERO)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }
}

/// `B psi` with `psi` zero-extended or truncated to `B.cols()`.
pub fn seq_matvec(b: &SeqOperator, psi: &Seq) -> Seq {
    let out = (0..b.rows)
        .map(|i| {
            (0..b.cols.min(psi.len()))
                .map(|j| b.get(i, j) * psi.entries[j])
                .sum()
        })
        .collect();
    Seq::new(psi.basis, out)
}

/// Matrix whose rows are coefficient sequences (`k` rows, `l` columns).
#[derive(Clone, Debug, PartialEq)]
pub struct FuncMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl FuncMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix from {} entries",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if j < self.cols {
            self.data[i * self.cols + j]
        } else {
            ZERO
        }
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    /// Zero-extends every row to `cols` entries.
    pub fn pad_cols(&self, cols: usize) -> Self {
        let cols = cols.max(self.cols);
        let data = (0..self.rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self {
            rows: self.rows,
            cols,
            data,
        }
    }
}

/// Adds `b` to every row of `u` under zero-extension; the result has
/// `max(u.cols(), b.len())` columns.
pub fn bias_broadcast_add(u: &FuncMatrix, b: &Seq) -> FuncMatrix {
    let mut out = u.pad_cols(b.len());
    for i in 0..out.rows {
        for (j, &bj) in b.entries.iter().enumerate() {
            out.data[i * out.cols + j] += bj;
        }
    }
    out
}

/// Kernel of the integral operator that `b` represents in coefficient space:
/// `K(x, y) = sum_ij B_ij g_i(x) conj(g_j(y)) / ||g_j||^2`.
///
/// Fourier uses `g_j = exp(i pi j x)` (`j >= 0`) with the Lebesgue measure on
/// `[-1, 1]`; Chebyshev uses `T_j` with the measure `dy / sqrt(1 - y^2)`.
pub fn kernel_eval(b: &SeqOperator, x: f64, y: f64, basis: Basis) -> Result<C64> {
    for p in [x, y] {
        if !(p.abs() <= 1.0 + 1e-14) {
            return Err(Error::OutOfDomain(p));
        }
    }
    let n = b.rows.max(b.cols);
    let (gx, gy, w): (Vec<C64>, Vec<C64>, Vec<f64>) = match basis {
        Basis::Fourier => (
            (0..n).map(|i| C64::from_polar(1.0, PI * i as f64 * x)).collect(),
            (0..n).map(|i| C64::from_polar(1.0, PI * i as f64 * y)).collect(),
            vec![0.5; n],
        ),
        Basis::Chebyshev => {
            let t = |z: f64| -> Vec<C64> {
                (0..n)
                    .map(|i| {
                        let mut e = vec![ZERO; i + 1];
                        e[i] = C64::new(1.0, 0.0);
                        cheb_eval_line(&e, z)
                    })
                    .collect()
            };
            let w = (0..n).map(|j| if j == 0 { 1.0 / PI } else { 2.0 / PI }).collect();
            (t(x), t(y), w)
        }
    };
    let mut acc = ZERO;
    for i in 0..b.rows {
        for j in 0..b.cols {
            acc += b.get(i, j) * gx[i] * gy[j].conj() * w[j];
        }
    }
    Ok(acc)
}
