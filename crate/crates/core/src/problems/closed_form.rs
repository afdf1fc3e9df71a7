use rand::Rng;
use serde::{Deserialize, Serialize};

/// Single KdV soliton.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolitonParams {
    pub a: f64,
    pub x0: f64,
}

impl SolitonParams {
    /// `a ~ U[10, 25]`, `x0 ~ U[-1, 1]`.
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        Self {
            a: rng.random_range(10.0..=25.0),
            x0: rng.random_range(-1.0..=1.0),
        }
    }

    /// Position of the maximum at time `t`.
    pub fn center(&self, t: f64) -> f64 {
        self.a * self.a * t - self.x0
    }
}

/// `3 (a / cosh(a (x + x0) / 2 - a^3 t / 2))^2`, a solution of
/// `u_t + u u_x + u_xxx = 0` on the real line.
pub fn kdv_soliton(p: &SolitonParams, x: f64, t: f64) -> f64 {
    let arg = p.a * (x + p.x0) / 2.0 - p.a.powi(3) * t / 2.0;
    let s = 1.0 / arg.cosh();
    3.0 * p.a * p.a * s * s
}

/// Two interacting KdV solitons, `a1 > a2 > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSolitonParams {
    pub a1: f64,
    pub a2: f64,
    pub x01: f64,
    pub x02: f64,
}

impl TwoSolitonParams {
    /// `a1 ~ U[10, 25]`, `a2 = chi a1` with `chi ~ U[1/2, 1)`, starting at
    /// `x = 0.6` and `x = 0.5`.
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        let a1 = rng.random_range(10.0..=25.0);
        let chi: f64 = rng.random_range(0.5..1.0);
        Self {
            a1,
            a2: chi * a1,
            x01: -0.6,
            x02: -0.5,
        }
    }

    /// Asymptotic soliton positions at time `t`.
    pub fn centers(&self, t: f64) -> [f64; 2] {
        [
            4.0 * self.a1 * self.a1 * t - self.x01,
            4.0 * self.a2 * self.a2 * t - self.x02,
        ]
    }
}

/// Two-soliton solution of `u_t + 6 u u_x + u_xxx = 0`.
///
/// Evaluated as
/// `2 (a1^2 - a2^2) (a2^2 tanh^2 p1 sech^2 p2 + a1^2 sech^2 p1) / (a1 - a2 tanh p1 tanh p2)^2`,
/// which stays finite for any phase `p_i = a_i (x + x0_i) - 4 a_i^3 t`.
pub fn kdv_two_soliton(p: &TwoSolitonParams, x: f64, t: f64) -> f64 {
    let (a1, a2) = (p.a1, p.a2);
    let p1 = a1 * (x + p.x01) - 4.0 * a1.powi(3) * t;
    let p2 = a2 * (x + p.x02) - 4.0 * a2.powi(3) * t;
    let (t1, t2) = (p1.tanh(), p2.tanh());
    let s1 = 1.0 / p1.cosh();
    let s2 = 1.0 / p2.cosh();
    let num = a2 * a2 * t1 * t1 * s2 * s2 + a1 * a1 * s1 * s1;
    let den = a1 - a2 * t1 * t2;
    2.0 * (a1 * a1 - a2 * a2) * num / (den * den)
}

/// Sum of the translates `u(x + 2 m)` covering the given centres: the
/// period-2 extension of a field localised near them.
pub fn periodize(u: impl Fn(f64) -> f64, x: f64, centers: &[f64]) -> f64 {
    let lo = centers.iter().cloned().fold(f64::INFINITY, f64::min) - 4.0;
    let hi = centers.iter().cloned().fold(f64::NEG_INFINITY, f64::max) + 4.0;
    let m_lo = ((lo - x) / 2.0).floor() as i64;
    let m_hi = ((hi - x) / 2.0).ceil() as i64;
    (m_lo..=m_hi).map(|m| u(x + 2.0 * m as f64)).sum()
}

/// Kuznetsov-Ma breather parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BreatherParams {
    pub nu: f64,
}

impl BreatherParams {
    /// `nu ~ U[1.5, 3.5]`.
    pub fn sample<R: Rng>(rng: &mut R) -> Self {
        Self {
            nu: rng.random_range(1.5..=3.5),
        }
    }

    /// `p = 2 sqrt(nu^2 - 1)`.
    pub fn p(&self) -> f64 {
        2.0 * (self.nu * self.nu - 1.0).sqrt()
    }

    /// `omega = p nu`.
    pub fn omega(&self) -> f64 {
        self.p() * self.nu
    }
}

/// Complex breather field `psi(x, t)`, a solution of
/// `i psi_t + psi_xx + |psi|^2 psi = 0`.
pub fn km_breather_field(b: &BreatherParams, x: f64, t: f64) -> num_complex::Complex64 {
    use num_complex::Complex64 as C64;
    let (p, w, nu) = (b.p(), b.omega(), b.nu);
    let num = C64::new(-p * p * (w * t).cos(), -2.0 * p * nu * (w * t).sin());
    let den = 2.0 * (w * t).cos() - 2.0 * nu * (p * x / std::f64::consts::SQRT_2).cosh();
    (num / den - 1.0) * C64::from_polar(1.0, t)
}

/// `|psi(x, t)|`.
pub fn km_breather(b: &BreatherParams, x: f64, t: f64) -> f64 {
    km_breather_field(b, x, t).norm()
}
