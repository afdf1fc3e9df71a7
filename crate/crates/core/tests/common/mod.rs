#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use sno::problems::*;
use sno::spectral::{
    analysis, differentiate, differentiate_axis, evaluate, interpolate_to_grid, multiply, CoeffSeries,
    GridFunction, GridKind,
};

/// Space-time samples of `field` on `[0, tau] x [-1, 1]`: Chebyshev in
/// time, `kind` in space.
pub fn space_time(
    field: impl Fn(f64, f64) -> C64,
    tau: f64,
    nt: usize,
    nx: usize,
    kind: GridKind,
    real: bool,
) -> CoeffSeries {
    let g = GridFunction::sample_2d([GridKind::Chebyshev, kind], [nt, nx], |s, x| {
        field(x, tau * (1.0 + s) / 2.0)
    })
    .unwrap();
    analysis(&g, real).unwrap()
}

pub fn on_grid(c: &CoeffSeries, nt: usize, nx: usize, kind: GridKind) -> Vec<C64> {
    interpolate_to_grid(c, &[nt, nx], &[GridKind::Chebyshev, kind])
        .unwrap()
        .values()
        .to_vec()
}

/// `max |u_t + p u u_x + u_xxx| / max |u|` for a periodic space-time series.
pub fn kdv_residual(u: &CoeffSeries, tau: f64, p: f64, nt: usize, nx: usize) -> f64 {
    let ut = differentiate_axis(u, 0).scale(2.0 / tau);
    let ux = differentiate_axis(u, 1);
    let uxxx = differentiate_axis(&differentiate_axis(&ux, 1), 1);
    let k = GridKind::Uniform;
    let (v, vt, vx, vxxx) = (
        on_grid(u, nt, nx, k),
        on_grid(&ut, nt, nx, k),
        on_grid(&ux, nt, nx, k),
        on_grid(&uxxx, nt, nx, k),
    );
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (0..v.len())
        .map(|i| (vt[i] + p * v[i] * vx[i] + vxxx[i]).norm())
        .fold(0.0, f64::max)
        / scale
}

pub fn soliton_residual() -> f64 {
    let p = SolitonParams { a: 20.0, x0: 0.0 };
    let tau = 1e-4;
    let field = |x: f64, t: f64| C64::new(periodize(|y| kdv_soliton(&p, y, t), x, &[p.center(t)]), 0.0);
    let u = space_time(field, tau, 24, 256, GridKind::Uniform, true);
    kdv_residual(&u, tau, 1.0, 24, 256)
}

pub fn two_soliton_residual() -> f64 {
    let p = TwoSolitonParams { a1: 20.0, a2: 15.0, x01: 0.05, x02: -0.05 };
    let field = |x: f64, t: f64| C64::new(periodize(|y| kdv_two_soliton(&p, y, t), x, &p.centers(t)), 0.0);
    let tau = 1e-5;
    let u = space_time(field, tau, 32, 384, GridKind::Uniform, true);
    kdv_residual(&u, tau, 6.0, 32, 384)
}

/// `max |i u_t + u_xx + |u|^2 u| / max |u|` for the breather.
pub fn breather_residual() -> f64 {
    let b = BreatherParams { nu: 2.0 };
    let tau = 1.0;
    let (nt, nx) = (40, 96);
    let u = space_time(|x, t| km_breather_field(&b, x, t), tau, nt, nx, GridKind::Chebyshev, false);
    let ut = differentiate_axis(&u, 0).scale(2.0 / tau);
    let uxx = differentiate_axis(&differentiate_axis(&u, 1), 1);
    let k = GridKind::Chebyshev;
    let (v, vt, vxx) = (on_grid(&u, nt, nx, k), on_grid(&ut, nt, nx, k), on_grid(&uxx, nt, nx, k));
    let scale = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    (0..v.len())
        .map(|i| (C64::i() * vt[i] + vxx[i] + v[i].norm_sqr() * v[i]).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Max nodal error of the 1d elliptic solver against
/// `u = sin(pi x) (1 - x^2)` with `k = 2 + sin 3x`.
pub fn elliptic_manufactured_error(n: usize) -> f64 {
    let x = GridKind::Chebyshev.nodes(n + 1).unwrap();
    let k = |x: f64| 2.0 + (3.0 * x).sin();
    let u = |x: f64| (PI * x).sin() * (1.0 - x * x);
    let fine = 128;
    let series = |f: &dyn Fn(f64) -> f64| {
        analysis(&GridFunction::sample(GridKind::Chebyshev, fine, f).unwrap(), true).unwrap()
    };
    let flux = multiply(&series(&k), &differentiate(&series(&u))).unwrap();
    let forcing = differentiate(&flux).scale(-1.0);
    let rhs: Vec<f64> = x.iter().map(|&xi| evaluate(&forcing, &[xi]).unwrap().re).collect();
    let kv: Vec<f64> = x.iter().map(|&xi| k(xi)).collect();
    let sol = elliptic_solve_1d_nodal(&kv, &rhs).unwrap();
    x.iter().zip(&sol).map(|(&xi, s)| (s - u(xi)).abs()).fold(0.0, f64::max)
}
