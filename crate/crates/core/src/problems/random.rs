use num_complex::Complex64 as C64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::CoeffSeries;

/// Parameters of the random trigonometric family.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomFamilyParams {
    pub k_min: usize,
    pub k_max: usize,
    pub sigma: f64,
    pub count: usize,
    pub seed: u64,
}

impl RandomFamilyParams {
    pub fn new(k_min: usize, k_max: usize, sigma: f64) -> Self {
        Self {
            k_min,
            k_max,
            sigma,
            count: 1,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.k_min > self.k_max {
            return Err(Error::InvalidArgument(format!(
                "k_min {} exceeds k_max {}",
                self.k_min, self.k_max
            )));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidArgument(format!("sigma must be positive, got {}", self.sigma)));
        }
        Ok(())
    }
}

/// Random stream of sample `index` under `seed`; streams of different
/// samples are independent, so generation order does not matter.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Raw coefficients `d_k`, `k = k_min..=k_max`, with real and imaginary
/// parts drawn from `N(0, sigma^2)`.
pub fn draw_coefficients<R: Rng>(k_min: usize, k_max: usize, sigma: f64, rng: &mut R) -> Vec<C64> {
    let normal = Normal::new(0.0, sigma).expect("sigma validated");
    (k_min..=k_max)
        .map(|_| {
            let re = normal.sample(rng);
            let im = normal.sample(rng);
            C64::new(re, im)
        })
        .collect()
}

/// One member of the family: the real part of `sum d_k exp(i pi k x)` over
/// the band, divided by the norm of `d`, as a packed Fourier series of
/// length `k_max + 1`.
pub fn random_function<R: Rng>(k_min: usize, k_max: usize, sigma: f64, rng: &mut R) -> CoeffSeries {
    let d = draw_coefficients(k_min, k_max, sigma, rng);
    let norm = d.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let mut c = vec![C64::new(0.0, 0.0); k_max + 1];
    for (k, dk) in (k_min..=k_max).zip(&d) {
        let v = dk / norm;
        c[k] = if k == 0 { C64::new(v.re, 0.0) } else { v * 0.5 };
    }
    CoeffSeries::fourier(c)
}

/// `count` members of the family; sample `j` uses stream `j` of `seed`.
pub fn sample_random_family(p: &RandomFamilyParams) -> Result<Vec<CoeffSeries>> {
    p.validate()?;
    Ok((0..p.count)
        .map(|j| random_function(p.k_min, p.k_max, p.sigma, &mut sample_rng(p.seed, j as u64)))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_harmonic_has_unit_amplitude() {
        let p = RandomFamilyParams { count: 5, ..RandomFamilyParams::new(3, 3, 2.0) };
        for f in sample_random_family(&p).unwrap() {
            assert!((f.coeffs()[3].norm() - 0.5).abs() < 1e-15);
            assert!(f.coeffs()[..3].iter().all(|c| c.norm() == 0.0));
        }
    }

    #[test]
    fn coefficient_variance_matches_sigma() {
        let mut rng = sample_rng(11, 0);
        let sigma = 2.0;
        let mut acc = 0.0;
        let mut n = 0.0;
        for _ in 0..10_000 {
            for d in draw_coefficients(0, 0, sigma, &mut rng) {
                acc += d.re * d.re + d.im * d.im;
                n += 2.0;
            }
        }
        let var = acc / n;
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.1, "{var}");
    }

    #[test]
    fn deterministic_and_order_independent() {
        let p = RandomFamilyParams { count: 4, seed: 9, ..RandomFamilyParams::new(0, 10, 2.0) };
        let a = sample_random_family(&p).unwrap();
        let b = sample_random_family(&p).unwrap();
        assert_eq!(a, b);
        let third = random_function(0, 10, 2.0, &mut sample_rng(9, 2));
        assert_eq!(a[2], third);
        assert!(sample_random_family(&RandomFamilyParams::new(3, 2, 1.0)).is_err());
    }
}
