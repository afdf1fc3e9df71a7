//! Aliasing of pointwise activations applied to band-limited functions, and the
//! coarse/fine discrepancy of grid-to-grid operators.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    analysis, chop, interpolate_to_grid, native_grid, Basis, CoeffSeries, GridFunction, GridKind,
};
use crate::spectral::{cheb_eval_line, fourier_eval_line};

/// Pointwise scalar nonlinearity.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    Relu,
    Softplus,
    Tanh,
    Identity,
    Square,
}

impl Activation {
    pub fn apply(self, x: f64) -> f64 {
        match self {
            Activation::Relu => x.max(0.0),
            Activation::Softplus => x.max(0.0) + (-x.abs()).exp().ln_1p(),
            Activation::Tanh => x.tanh(),
            Activation::Identity => x,
            Activation::Square => x * x,
        }
    }

    pub fn derivative(self, x: f64) -> f64 {
        match self {
            Activation::Relu => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Softplus => 1.0 / (1.0 + (-x).exp()),
            Activation::Tanh => 1.0 - x.tanh().powi(2),
            Activation::Identity => 1.0,
            Activation::Square => 2.0 * x,
        }
    }

    /// Whether the activation has a kink at zero.
    fn kinked(self) -> bool {
        self == Activation::Relu
    }

    pub fn name(self) -> &'static str {
        match self {
            Activation::Relu => "relu",
            Activation::Softplus => "softplus",
            Activation::Tanh => "tanh",
            Activation::Identity => "identity",
            Activation::Square => "square",
        }
    }
}

impl fmt::Display for Activation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Activation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "relu" => Activation::Relu,
            "softplus" => Activation::Softplus,
            "tanh" => Activation::Tanh,
            "identity" | "id" => Activation::Identity,
            "square" => Activation::Square,
            other => {
                return Err(Error::InvalidArgument(format!("unknown activation {other}")))
            }
        })
    }
}

/// Chebyshev coefficient `p_i` of `max(x, 0)` on `[-1, 1]`.
pub fn relu_cheb_coeff(i: usize) -> f64 {
    match i {
        0 => 1.0 / PI,
        1 => 0.5,
        _ if i % 2 == 1 => 0.0,
        _ => {
            let sign = if (i / 2) % 2 == 0 { 1.0 } else { -1.0 };
            2.0 / PI * sign / (1.0 - (i * i) as f64)
        }
    }
}

/// `sum_{i >= 2} p_i^2` in closed form.
pub fn relu_tail_sum() -> f64 {
    (PI * PI - 8.0) / (4.0 * PI * PI)
}

/// Aliasing error of ReLU on `cos(pi N x)` or `T_N` on the minimal grid.
pub fn theorem1_reference() -> f64 {
    let value = (PI * PI / 2.0 - 4.0).sqrt() / PI;
    let p0 = relu_cheb_coeff(0);
    let p1 = relu_cheb_coeff(1);
    // ||ReLU(T_N)||^2 = pi/4 with weight 1/sqrt(1-x^2), i.e. 2 p0^2 + p1^2 + tail = 1/2
    let total = 2.0 * p0 * p0 + p1 * p1 + relu_tail_sum();
    debug_assert!((total - 0.5).abs() < 1e-15);
    debug_assert!(((relu_tail_sum() / total).sqrt() - value).abs() < 1e-15);
    value
}

/// High-resolution series of `sigma(f)`.
#[derive(Clone, Debug)]
pub struct Composition {
    pub series: CoeffSeries,
    /// Set when the last tenth of the coefficients carries more than `1e-8`
    /// of the energy, i.e. the oversampled grid is too coarse.
    pub under_resolved: bool,
}

/// Pseudospectral `sigma(f)`: sample `f` on a grid `oversample` times finer
/// than its native grid, apply `sigma`, transform back.
pub fn compose_with_activation(
    f: &CoeffSeries,
    sigma: Activation,
    oversample: usize,
) -> Result<Composition> {
    if oversample < 1 {
        return Err(Error::InvalidArgument("oversample must be >= 1".into()));
    }
    let (native, grids) = native_grid(f);
    let sizes: Vec<usize> = native
        .iter()
        .zip(&grids)
        .map(|(&n, g)| match g {
            GridKind::Chebyshev => (n - 1) * oversample + 1,
            GridKind::Uniform => n * oversample,
        })
        .collect();
    let g = interpolate_to_grid(f, &sizes, &grids)?;
    let g = g.map(|v| C64::new(sigma.apply(v.re), 0.0));
    let series = analysis(&g, f.real_signal() || f.bases().contains(&Basis::Chebyshev))?;
    let under_resolved = last_decile_fraction(&series) > 1e-8;
    Ok(Composition {
        series,
        under_resolved,
    })
}

fn last_decile_fraction(c: &CoeffSeries) -> f64 {
    let mut total = 0.0;
    let mut tail = 0.0;
    let dims = c.dim();
    let mut idx = vec![0usize; dims];
    for (flat, v) in c.coeffs().iter().enumerate() {
        let mut rem = flat;
        for ax in (0..dims).rev() {
            idx[ax] = rem % c.shape()[ax];
            rem /= c.shape()[ax];
        }
        let e = v.norm_sqr();
        total += e;
        let in_tail = (0..dims).any(|ax| {
            let len = c.shape()[ax];
            let kmax = (0..len).map(|i| c.wavenumber(ax, i).abs()).max().unwrap_or(0);
            c.wavenumber(ax, idx[ax]).abs() as f64 > 0.9 * kmax as f64
        });
        if in_tail {
            tail += e;
        }
    }
    if total == 0.0 {
        0.0
    } else {
        tail / total
    }
}

/// Split of `||sigma(f)||` into harmonics resolved on the grid and the rest.
#[derive(Clone, Debug, PartialEq)]
pub struct AliasingReport {
    pub tail_norm: f64,
    pub resolved_norm: f64,
    pub total_norm: f64,
    pub e_a: f64,
    pub band: usize,
    pub oversample: usize,
    /// Energies of harmonics `kN + 1 ..= (k + 3) N`, in order.
    pub tail_energies: Vec<f64>,
    pub warning: bool,
}

/// Relative aliasing error of `sigma(f)` on the grid resolving band `n`.
pub fn aliasing_error(f: &CoeffSeries, sigma: Activation, n: usize) -> Result<AliasingReport> {
    aliasing_error_refined(f, sigma, n, 1)
}

/// Aliasing error when `f` is first interpolated onto a grid `k` times finer,
/// so that harmonics up to `kN` are resolved.
///
/// Norms are computed by Gauss-Legendre quadrature split at the kinks of
/// `sigma(f)`, so the result does not depend on an oversampling factor.
pub fn aliasing_error_refined(
    f: &CoeffSeries,
    sigma: Activation,
    n: usize,
    k: usize,
) -> Result<AliasingReport> {
    if f.dim() != 1 {
        return Err(Error::Shape("aliasing analysis is one-dimensional".into()));
    }
    if k < 1 {
        return Err(Error::InvalidArgument("refinement factor must be >= 1".into()));
    }
    let scale = f.max_abs().max(f64::MIN_POSITIVE);
    for i in 0..f.len() {
        if f.wavenumber(0, i).unsigned_abs() as usize > n && f.coeffs()[i].norm() > 1e-14 * scale {
            return Err(Error::InvalidArgument(format!(
                "input has harmonics beyond the band {n}"
            )));
        }
    }
    let basis = f.basis();
    let resolved_max = k * n;
    let tail_max = (k + 3) * n.max(1);
    let deg = (0..f.len())
        .map(|i| f.wavenumber(0, i).unsigned_abs() as usize)
        .max()
        .unwrap_or(0);
    let quad = Quadrature::build(f, sigma, tail_max.max(32 * n.max(deg)).max(8));

    let total2: f64 = quad.w.iter().zip(&quad.s).map(|(w, s)| w * s * s).sum();
    let energies = quad.harmonic_energies(basis, tail_max);
    let resolved2: f64 = energies[..=resolved_max.min(tail_max)].iter().sum();
    let tail_energies = energies[resolved_max + 1..].to_vec();
    let tail2 = total2 - resolved2;
    let warning = tail2 < -1e-10 * total2;
    let tail2 = tail2.max(0.0);
    let e_a = if total2 > 0.0 {
        (tail2 / total2).sqrt().min(1.0)
    } else {
        0.0
    };
    Ok(AliasingReport {
        tail_norm: tail2.sqrt(),
        resolved_norm: resolved2.sqrt(),
        total_norm: total2.sqrt(),
        e_a,
        band: n,
        oversample: k,
        tail_energies,
        warning,
    })
}

/// Quadrature rule for the basis measure, in the variable `t` where `x = cos t`
/// (Chebyshev, `t in [0, pi]`) or `x = t` (Fourier, `t in [-1, 1]`).
struct Quadrature {
    t: Vec<f64>,
    w: Vec<f64>,
    s: Vec<f64>,
}

impl Quadrature {
    fn build(f: &CoeffSeries, sigma: Activation, freq: usize) -> Self {
        let basis = f.basis();
        let packed = f.real_signal();
        let coeffs = f.coeffs();
        let value = |t: f64| -> f64 {
            match basis {
                Basis::Chebyshev => cheb_eval_line(coeffs, t.cos()).re,
                Basis::Fourier => fourier_eval_line(coeffs, t, packed).re,
            }
        };
        let (a, b, hmax) = match basis {
            Basis::Chebyshev => (0.0, PI, PI / freq as f64),
            Basis::Fourier => (-1.0, 1.0, 1.0 / freq as f64),
        };
        let mut breaks = vec![a, b];
        if sigma.kinked() {
            breaks.extend(sign_changes(&value, a, b, 16 * freq));
        }
        breaks.sort_by(|x, y| x.partial_cmp(y).expect("finite"));
        breaks.dedup_by(|x, y| (*x - *y).abs() < 1e-15);

        let (gx, gw) = gauss_legendre(20);
        let mut t = Vec::new();
        let mut w = Vec::new();
        for piece in breaks.windows(2) {
            let (lo, hi) = (piece[0], piece[1]);
            let m = ((hi - lo) / hmax).ceil().max(1.0) as usize;
            let h = (hi - lo) / m as f64;
            for j in 0..m {
                let l = lo + j as f64 * h;
                for (x, wx) in gx.iter().zip(&gw) {
                    t.push(l + 0.5 * h * (x + 1.0));
                    w.push(0.5 * h * wx);
                }
            }
        }
        let s = t.iter().map(|&ti| sigma.apply(value(ti))).collect();
        Self { t, w, s }
    }

    /// Energy of `sigma(f)` in each harmonic `0..=hmax`, where the Fourier
    /// entry `j` collects both `+j` and `-j`.
    fn harmonic_energies(&self, basis: Basis, hmax: usize) -> Vec<f64> {
        let mut pos = vec![C64::new(0.0, 0.0); hmax + 1];
        let mut neg = vec![C64::new(0.0, 0.0); hmax + 1];
        for ((&t, &w), &s) in self.t.iter().zip(&self.w).zip(&self.s) {
            let angle = match basis {
                Basis::Chebyshev => t,
                Basis::Fourier => PI * t,
            };
            let step = C64::from_polar(1.0, -angle);
            let mut ph = C64::new(w * s, 0.0);
            for j in 0..=hmax {
                pos[j] += ph;
                neg[j] += ph.conj();
                ph *= step;
            }
        }
        (0..=hmax)
            .map(|j| match basis {
                Basis::Chebyshev => {
                    // c_j = (2 - delta) / pi * int s cos(j t); energy |c_j|^2 pi / (2 - delta)
                    let d = if j == 0 { 1.0 } else { 2.0 };
                    let cj = pos[j].re * d / PI;
                    cj * cj * PI / d
                }
                Basis::Fourier => {
                    let cp = pos[j] * 0.5;
                    let cn = neg[j] * 0.5;
                    if j == 0 {
                        2.0 * cp.norm_sqr()
                    } else {
                        2.0 * (cp.norm_sqr() + cn.norm_sqr())
                    }
                }
            })
            .collect()
    }
}

/// Roots of `g` on `[a, b]` located from sign changes on `samples` intervals.
fn sign_changes(g: &impl Fn(f64) -> f64, a: f64, b: f64, samples: usize) -> Vec<f64> {
    let mut roots = Vec::new();
    let h = (b - a) / samples as f64;
    let mut x0 = a;
    let mut g0 = g(a);
    for i in 1..=samples {
        let x1 = if i == samples { b } else { a + i as f64 * h };
        let g1 = g(x1);
        if g0 == 0.0 {
            roots.push(x0);
        } else if g0 * g1 < 0.0 {
            let (mut lo, mut hi, mut glo) = (x0, x1, g0);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let gm = g(mid);
                if gm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (gm < 0.0) == (glo < 0.0) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        x0 = x1;
        g0 = g1;
    }
    if g0 == 0.0 {
        roots.push(b);
    }
    roots
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub(crate) fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
    (x, w)
}

/// How a fine-grid output is brought to the coarse grid.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Projection {
    /// Keep the coincident nodes.
    #[default]
    Subsample,
    /// Truncate the spectrum to the coarse band and resample.
    SpectralTruncation,
}

/// Per-input relative coarse/fine discrepancies and their summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Discrepancy {
    pub per_input: Vec<f64>,
    pub mean: f64,
    pub median: f64,
    pub max: f64,
}

impl Discrepancy {
    pub fn from_values(per_input: Vec<f64>) -> Self {
        let mut sorted = per_input.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("finite discrepancies"));
        let n = sorted.len();
        let median = if n == 0 {
            0.0
        } else if n % 2 == 1 {
            sorted[n / 2]
        } else {
            0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
        };
        Self {
            mean: sorted.iter().sum::<f64>() / n.max(1) as f64,
            max: sorted.last().copied().unwrap_or(0.0),
            median,
            per_input,
        }
    }
}

/// Coarse grid sharing every other node of `g` (1d).
pub fn coarsen(g: &GridFunction) -> Result<GridFunction> {
    if g.dim() != 1 {
        return Err(Error::Shape("grid coarsening is one-dimensional".into()));
    }
    let n = g.shape()[0];
    let ok = match g.grids()[0] {
        GridKind::Uniform => n % 2 == 0,
        GridKind::Chebyshev => n >= 3 && (n - 1) % 2 == 0,
    };
    if !ok {
        return Err(Error::GridMismatch(format!(
            "a {:?} grid of size {n} has no nested coarse grid",
            g.grids()[0]
        )));
    }
    let values: Vec<C64> = g.values().iter().step_by(2).copied().collect();
    GridFunction::new(g.grids().to_vec(), vec![values.len()], values)
}

fn project(g: &GridFunction, how: Projection) -> Result<GridFunction> {
    match how {
        Projection::Subsample => coarsen(g),
        Projection::SpectralTruncation => {
            let target = coarsen(g)?.shape()[0];
            let c = analysis(g, false)?;
            let c = chop(&c, target);
            interpolate_to_grid(&c, &[target], g.grids())
        }
    }
}

/// `||N(u_2h) - [N(u_h)]_2h|| / ||[N(u_h)]_2h||` for every input `u_h` given
/// on a fine grid; `u_2h` keeps every other node.
pub fn operator_grid_discrepancy<F>(
    mut op: F,
    inputs: &[GridFunction],
    projection: Projection,
) -> Result<Discrepancy>
where
    F: FnMut(&GridFunction) -> Result<GridFunction>,
{
    let mut out = Vec::with_capacity(inputs.len());
    for u in inputs {
        let coarse_in = coarsen(u)?;
        let fine_out = op(u)?;
        let coarse_out = op(&coarse_in)?;
        let projected = project(&fine_out, projection)?;
        if projected.shape() != coarse_out.shape() {
            return Err(Error::GridMismatch(
                "operator output grids are not nested".into(),
            ));
        }
        let denom = projected.l2();
        let diff = coarse_out
            .values()
            .iter()
            .zip(projected.values())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        out.push(if denom > 0.0 { diff / denom } else { diff });
    }
    Ok(Discrepancy::from_values(out))
}

/// One CSV row of the aliasing study.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AliasingRow {
    pub input_id: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub k: usize,
    #[serde(rename = "E_a")]
    pub e_a: f64,
    pub tail_norm: f64,
    pub total_norm: f64,
    pub warning_flag: bool,
}

impl AliasingRow {
    pub fn new(input_id: impl Into<String>, r: &AliasingReport) -> Self {
        Self {
            input_id: input_id.into(),
            n: r.band,
            k: r.oversample,
            e_a: r.e_a,
            tail_norm: r.tail_norm,
            total_norm: r.total_norm,
            warning_flag: r.warning,
        }
    }
}

pub fn write_aliasing_csv<W: std::io::Write>(w: W, rows: &[AliasingRow]) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r)
            .map_err(|e| Error::Format(format!("csv: {e}")))?;
    }
    wr.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relu_coefficients() {
        assert!((relu_cheb_coeff(0) - 0.318_309_886_183_790_7).abs() < 1e-15);
        assert!((relu_cheb_coeff(2) - 2.0 / (3.0 * PI)).abs() < 1e-15);
        assert_eq!(relu_cheb_coeff(3), 0.0);
        assert!((relu_cheb_coeff(4) + 2.0 / (15.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let (x, w) = gauss_legendre(10);
        let int = |p: i32| x.iter().zip(&w).map(|(x, w)| w * x.powi(p)).sum::<f64>();
        assert!((int(0) - 2.0).abs() < 1e-14);
        assert!((int(18) - 2.0 / 19.0).abs() < 1e-14);
        assert!(int(7).abs() < 1e-15);
    }

    #[test]
    fn square_of_cosine() {
        let f = CoeffSeries::fourier(vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)]);
        let c = compose_with_activation(&f, Activation::Square, 4).unwrap();
        assert!((c.series.harmonic(0) - C64::new(0.5, 0.0)).norm() < 1e-14);
        assert!((c.series.harmonic(2) - C64::new(0.25, 0.0)).norm() < 1e-14);
        let r = aliasing_error(&f, Activation::Square, 1).unwrap();
        assert!((r.e_a - 1.0 / 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn theorem_constant() {
        assert!((theorem1_reference() - 0.307_758_453_061_242).abs() < 1e-14);
    }

    #[test]
    fn nested_grid_required() {
        let g = GridFunction::sample(GridKind::Uniform, 7, |x| x).unwrap();
        assert!(matches!(coarsen(&g), Err(Error::GridMismatch(_))));
    }

    #[test]
    fn csv_header() {
        let mut buf = Vec::new();
        let r = AliasingReport {
            tail_norm: 0.1,
            resolved_norm: 0.2,
            total_norm: 0.3,
            e_a: 0.5,
            band: 4,
            oversample: 1,
            tail_energies: vec![],
            warning: false,
        };
        write_aliasing_csv(&mut buf, &[AliasingRow::new("a", &r)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("input_id,N,k,E_a,tail_norm,total_norm,warning_flag\n"));
    }
}
