use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Basis along one axis of a series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Basis {
    /// Chebyshev polynomials of the first kind, `T_n(x)`.
    Chebyshev,
    /// Complex exponentials `exp(i pi k x)`, period 2.
    Fourier,
}

impl Basis {
    /// Grid on which the basis has a fast transform.
    pub fn native_grid(self) -> GridKind {
        match self {
            Basis::Chebyshev => GridKind::Chebyshev,
            Basis::Fourier => GridKind::Uniform,
        }
    }
}

/// Sampling grid along one axis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKind {
    /// `cos(k pi / n)`, `k = 0..n`, descending.
    Chebyshev,
    /// `-1 + 2 j / m`, `j = 0..m-1`.
    Uniform,
}

impl GridKind {
    pub fn basis(self) -> Basis {
        match self {
            GridKind::Chebyshev => Basis::Chebyshev,
            GridKind::Uniform => Basis::Fourier,
        }
    }

    /// Nodes of a grid with `size` points.
    pub fn nodes(self, size: usize) -> Result<Vec<f64>> {
        match self {
            GridKind::Chebyshev => {
                if size < 2 {
                    return Err(Error::DegenerateGrid(format!(
                        "a Chebyshev grid needs at least 2 nodes, got {size}"
                    )));
                }
                cheb_points(size - 1)
            }
            GridKind::Uniform => {
                if size == 0 {
                    return Err(Error::DegenerateGrid("empty uniform grid".into()));
                }
                Ok(uniform_points(size))
            }
        }
    }
}

/// Chebyshev extreme points `cos(k pi / n)` for `k = 0..=n`.
///
/// The nodes are symmetrised so that `x_k == -x_{n-k}` holds exactly.
pub fn cheb_points(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(Error::DegenerateGrid("cheb_points requires n >= 1".into()));
    }
    // sin form keeps the symmetry exact: cos(k pi/n) = sin(pi (n - 2k) / (2n))
    Ok((0..=n)
        .map(|k| (PI * (n as f64 - 2.0 * k as f64) / (2.0 * n as f64)).sin())
        .collect())
}

/// Periodic uniform grid `-1 + 2 j / m`.
pub fn uniform_points(m: usize) -> Vec<f64> {
    (0..m).map(|j| -1.0 + 2.0 * j as f64 / m as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_chebyshev_grids() {
        assert_eq!(cheb_points(1).unwrap(), vec![1.0, -1.0]);
        let p2 = cheb_points(2).unwrap();
        assert_eq!(p2, vec![1.0, 0.0, -1.0]);
        let p4 = cheb_points(4).unwrap();
        let h = 2f64.sqrt() / 2.0;
        let want = [1.0, h, 0.0, -h, -1.0];
        for (a, b) in p4.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_grid_rejected() {
        assert!(matches!(cheb_points(0), Err(Error::DegenerateGrid(_))));
        assert!(GridKind::Chebyshev.nodes(1).is_err());
    }

    #[test]
    fn chebyshev_grid_is_symmetric() {
        for n in 1..40 {
            let p = cheb_points(n).unwrap();
            for k in 0..=n {
                assert_eq!(p[k], -p[n - k]);
            }
            assert!(p.windows(2).all(|w| w[0] > w[1]));
        }
    }

    #[test]
    fn uniform_grid_excludes_right_end() {
        assert_eq!(uniform_points(4), vec![-1.0, -0.5, 0.0, 0.5]);
    }
}
