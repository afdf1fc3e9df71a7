//! Calculus on Chebyshev and Fourier coefficients.

use std::f64::consts::PI;

use sno::spectral::{
    analysis, differentiate, evaluate, integrate, multiply, norm_l2, shift, GridFunction, GridKind,
};

fn main() -> sno::Result<()> {
    // exp(x) on 17 Chebyshev points
    let g = GridFunction::sample(GridKind::Chebyshev, 17, f64::exp)?;
    let c = analysis(&g, true)?;
    let d = differentiate(&c);
    let i = integrate(&c)?;
    println!("Chebyshev: exp(0.3) = {:.15}", evaluate(&c, &[0.3])?.re);
    println!("  derivative at 0.3   {:.15}", evaluate(&d, &[0.3])?.re);
    println!("  integral from -1    {:.15} (exact {:.15})", evaluate(&i, &[0.3])?.re, 0.3f64.exp() - (-1f64).exp());

    // a periodic signal on 32 uniform points
    let u = GridFunction::sample(GridKind::Uniform, 32, |x| (PI * x).sin() + 0.5 * (3.0 * PI * x).cos())?;
    let f = analysis(&u, true)?;
    let du = differentiate(&f);
    println!("Fourier: u'(0.2) = {:.12} (exact {:.12})", evaluate(&du, &[0.2])?.re, PI * (0.2 * PI).cos() - 1.5 * PI * (0.6 * PI).sin());
    let sq = multiply(&f, &f)?;
    println!("  u^2 at 0.2 = {:.12}, from the product series {:.12}", evaluate(&f, &[0.2])?.re.powi(2), evaluate(&sq, &[0.2])?.re);
    let moved = shift(&f, 0.25)?;
    println!("  u(0.2 + 0.25) = {:.12}", evaluate(&moved, &[0.2])?.re);
    println!("  L2 norm {:.12} (exact {:.12})", norm_l2(&f), (1.0f64 + 0.25).sqrt());
    Ok(())
}
