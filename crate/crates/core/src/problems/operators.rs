use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::spectral::{
    analysis, chop, differentiate, integrate, interpolate_to_grid, multiply, shift, Basis,
    CoeffSeries, GridKind,
};

/// Antiderivative with zero mean of a periodic series.
pub fn target_integrate(f: &CoeffSeries) -> Result<CoeffSeries> {
    integrate(f)
}

/// `f(x) f(x + 1)`.
pub fn target_shift_product(f: &CoeffSeries) -> Result<CoeffSeries> {
    multiply(f, &shift(f, 1.0)?)
}

pub fn target_derivative(f: &CoeffSeries) -> Result<CoeffSeries> {
    Ok(differentiate(f))
}

/// Periodic real function `g(F(x))` of a real periodic series, sampled on
/// an oversampled grid and truncated to `len` packed coefficients.
pub fn compose_periodic(f: &CoeffSeries, len: usize, g: impl Fn(f64) -> f64) -> Result<CoeffSeries> {
    if f.bases() != [Basis::Fourier] {
        return Err(Error::BasisMismatch("expected a 1d Fourier series".into()));
    }
    let m = 8 * len.max(f.len());
    let vals = interpolate_to_grid(f, &[m], &[GridKind::Uniform])?.map(|v| C64::new(g(v.re), 0.0));
    Ok(chop(&analysis(&vals, true)?, len))
}

/// Solution `y = exp(F)` of `y' = y f`, with `F` the zero-mean
/// antiderivative of `f`, as a packed Fourier series of length `len`.
pub fn parametric_ode_solution(f: &CoeffSeries, len: usize) -> Result<CoeffSeries> {
    let big_f = integrate(f)?;
    compose_periodic(&big_f, len, f64::exp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::evaluate;
    use std::f64::consts::PI;

    fn cos_pi() -> CoeffSeries {
        CoeffSeries::fourier(vec![C64::new(0.0, 0.0), C64::new(0.5, 0.0)])
    }

    fn at(c: &CoeffSeries, x: f64) -> f64 {
        evaluate(c, &[x]).unwrap().re
    }

    #[test]
    fn closed_forms_for_cosine() {
        let f = cos_pi();
        let i = target_integrate(&f).unwrap();
        let s = target_shift_product(&f).unwrap();
        let d = target_derivative(&f).unwrap();
        for x in [-0.9, -0.3, 0.1, 0.77] {
            assert!((at(&i, x) - (PI * x).sin() / PI).abs() < 1e-14);
            assert!((at(&s, x) + (PI * x).cos().powi(2)).abs() < 1e-14);
            assert!((at(&d, x) + PI * (PI * x).sin()).abs() < 1e-13);
        }
        assert!(target_integrate(&CoeffSeries::fourier(vec![C64::new(1.0, 0.0)])).is_err());
    }

    #[test]
    fn ode_solution_for_cosine_and_zero() {
        let y = parametric_ode_solution(&cos_pi(), 20).unwrap();
        for x in [-1.0, -0.4, 0.2, 0.9] {
            assert!((at(&y, x) - ((PI * x).sin() / PI).exp()).abs() < 1e-13);
        }
        let one = parametric_ode_solution(&CoeffSeries::fourier(vec![C64::new(0.0, 0.0); 4]), 5).unwrap();
        assert!((one.coeffs()[0].re - 1.0).abs() < 1e-15);
        assert!(one.coeffs()[1..].iter().all(|c| c.norm() < 1e-15));
    }
}
