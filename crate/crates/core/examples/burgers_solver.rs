//! Viscous Burgers equation: conserved mean and decaying energy.

use sno::problems::{random_function, sample_rng, Burgers};
use sno::spectral::{evaluate, norm_l2};

fn main() -> sno::Result<()> {
    let f = random_function(0, 6, 2.0, &mut sample_rng(3, 0)).scale(0.5);
    let solver = Burgers::new(0.01, 1e-4, 128)?;
    let times: Vec<f64> = (0..=5).map(|i| 0.2 * i as f64).collect();
    let snapshots = solver.solve(&f, &times)?;
    for (t, u) in times.iter().zip(&snapshots) {
        println!(
            "t = {t:.1}  mean {:+.12}  energy {:.6}  u(0) {:+.6}",
            u.coeffs()[0].re,
            norm_l2(u).powi(2),
            evaluate(u, &[0.0])?.re
        );
    }
    Ok(())
}
