use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::{cheb_points, interpolate_to_grid, CoeffSeries, GridFunction, GridKind};

/// Largest Chebyshev degree per axis accepted by the dense 2d solver.
pub const MAX_DEGREE_2D: usize = 48;

/// Chebyshev differentiation matrix on `cheb_points(n)`.
pub fn cheb_diff_matrix(n: usize) -> Result<DMatrix<f64>> {
    if n < 1 {
        return Err(Error::DegenerateGrid("differentiation needs n >= 1".into()));
    }
    let x = cheb_points(n)?;
    let c = |i: usize| {
        let s = if i % 2 == 0 { 1.0 } else { -1.0 };
        if i == 0 || i == n { 2.0 * s } else { s }
    };
    let mut d = DMatrix::zeros(n + 1, n + 1);
    for i in 0..=n {
        for j in 0..=n {
            if i != j {
                d[(i, j)] = c(i) / c(j) / (x[i] - x[j]);
            }
        }
    }
    for i in 0..=n {
        let s: f64 = (0..=n).filter(|&j| j != i).map(|j| d[(i, j)]).sum();
        d[(i, i)] = -s;
    }
    Ok(d)
}

fn lu_solve(a: DMatrix<f64>, b: DVector<f64>) -> Result<DVector<f64>> {
    a.lu()
        .solve(&b)
        .ok_or_else(|| Error::Singular("collocation matrix is singular".into()))
}

/// Solves `-(k u')' = rhs` with `u(+-1) = 0` by collocation on
/// `cheb_points(n)`; `k` and `rhs` are nodal values.
pub fn elliptic_solve_1d_nodal(k: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = k.len().checked_sub(1).filter(|&n| n >= 2).ok_or_else(|| {
        Error::DegenerateGrid("the boundary value problem needs at least 3 nodes".into())
    })?;
    if rhs.len() != n + 1 {
        return Err(Error::Shape("one forcing value per node is required".into()));
    }
    let d = cheb_diff_matrix(n)?;
    let kd = DMatrix::from_fn(n + 1, n + 1, |i, j| k[i] * d[(i, j)]);
    let full = -(&d * kd);
    let a = full.view((1, 1), (n - 1, n - 1)).into_owned();
    let b = DVector::from_column_slice(&rhs[1..n]);
    let mut u = vec![0.0; n + 1];
    u[1..n].copy_from_slice(lu_solve(a, b)?.as_slice());
    Ok(u)
}

/// Solution of `-(k u')' = 1`, `u(+-1) = 0`, on the Chebyshev grid with
/// `n + 1` nodes.
pub fn elliptic_solve_1d(k: &CoeffSeries, n: usize) -> Result<GridFunction> {
    let kv = interpolate_to_grid(k, &[n + 1], &[GridKind::Chebyshev])?.real_values();
    if let Some(bad) = kv.iter().find(|&&v| !(v > 0.0)) {
        return Err(Error::InvalidArgument(format!("diffusion coefficient {bad} is not positive")));
    }
    let u = elliptic_solve_1d_nodal(&kv, &vec![1.0; n + 1])?;
    GridFunction::from_real(GridKind::Chebyshev, &u)
}

/// Solves `-div(kx(x) ky(y) grad u) = rhs` on the square with zero boundary
/// values; `rhs` is row-major over `(x_i, y_j)` on `cheb_points(n)^2`.
pub fn elliptic_solve_2d_nodal(kx: &[f64], ky: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = kx.len().saturating_sub(1);
    if n < 2 || ky.len() != n + 1 || rhs.len() != (n + 1) * (n + 1) {
        return Err(Error::Shape("nodal data must cover an (n+1)^2 grid, n >= 2".into()));
    }
    if n > MAX_DEGREE_2D {
        return Err(Error::InvalidArgument(format!(
            "dense 2d solve limited to degree {MAX_DEGREE_2D} per axis, got {n}"
        )));
    }
    let d = cheb_diff_matrix(n)?;
    let m = n - 1;
    let idx = |i: usize, j: usize| (i - 1) * m + (j - 1);
    let mut a = DMatrix::zeros(m * m, m * m);
    // d/dx k d/dx acts along i for fixed j; d/dy k d/dy along j for fixed i
    for j in 1..n {
        for i in 1..n {
            for q in 1..n {
                let sx: f64 = (0..=n).map(|p| d[(i, p)] * kx[p] * d[(p, q)]).sum::<f64>() * ky[j];
                a[(idx(i, j), idx(q, j))] -= sx;
            }
        }
    }
    for i in 1..n {
        for j in 1..n {
            for q in 1..n {
                let sy: f64 = (0..=n).map(|p| d[(j, p)] * ky[p] * d[(p, q)]).sum::<f64>() * kx[i];
                a[(idx(i, j), idx(i, q))] -= sy;
            }
        }
    }
    let b = DVector::from_fn(m * m, |r, _| rhs[(r / m + 1) * (n + 1) + r % m + 1]);
    let sol = lu_solve(a, b)?;
    let mut u = vec![0.0; (n + 1) * (n + 1)];
    for i in 1..n {
        for j in 1..n {
            u[i * (n + 1) + j] = sol[idx(i, j)];
        }
    }
    Ok(u)
}

/// Solution of `-div(kx(x) ky(y) grad u) = 1` with zero boundary values on
/// the `(n + 1)^2` Chebyshev grid.
pub fn elliptic_solve_2d(kx: &CoeffSeries, ky: &CoeffSeries, n: usize) -> Result<GridFunction> {
    let nodes = |k: &CoeffSeries| interpolate_to_grid(k, &[n + 1], &[GridKind::Chebyshev]).map(|g| g.real_values());
    let (kxv, kyv) = (nodes(kx)?, nodes(ky)?);
    let u = elliptic_solve_2d_nodal(&kxv, &kyv, &vec![1.0; (n + 1) * (n + 1)])?;
    GridFunction::new(
        vec![GridKind::Chebyshev; 2],
        vec![n + 1, n + 1],
        u.into_iter().map(|v| C64::new(v, 0.0)).collect(),
    )
}
