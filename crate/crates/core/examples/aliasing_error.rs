//! How much of an activation's output escapes the band of its input.

use sno::aliasing::{aliasing_error, aliasing_error_refined, theorem1_reference, Activation};
use sno::problems::{random_function, sample_rng};
use sno::spectral::CoeffSeries;
use sno::C64;

fn main() -> sno::Result<()> {
    println!("ReLU on the highest harmonic, closed form {:.10}", theorem1_reference());
    for n in [4, 8, 16] {
        let mut c = vec![C64::new(0.0, 0.0); n + 1];
        c[n] = C64::new(0.5, 0.0);
        let mut t = vec![0.0; n + 1];
        t[n] = 1.0;
        let ef = aliasing_error(&CoeffSeries::fourier(c), Activation::Relu, n)?.e_a;
        let ec = aliasing_error(&CoeffSeries::chebyshev(&t), Activation::Relu, n)?.e_a;
        println!("  N = {n:2}: cos(pi N x) {ef:.10}  T_N {ec:.10}");
    }

    let f = random_function(0, 8, 2.0, &mut sample_rng(1, 0));
    println!("random input in band 8, error against refinement factor k:");
    for act in [Activation::Relu, Activation::Tanh, Activation::Softplus, Activation::Square] {
        let e: Vec<String> = (1..=4)
            .map(|k| aliasing_error_refined(&f, act, 8, k).map(|r| format!("{:.2e}", r.e_a)))
            .collect::<sno::Result<_>>()?;
        println!("  {:8} {}", act.name(), e.join("  "));
    }
    Ok(())
}
