//! Spectral function calculus on truncated Chebyshev and Fourier series, and
//! neural operators that act on those series.
//!
//! The crate is organised bottom-up:
//!
//! * [`spectral`] – grids, coefficient series, fast transforms and exact
//!   calculus (differentiation, integration, shifts, products).
//! * [`seq`] – linear algebra on zero-tailed coefficient sequences.
//! * [`aliasing`] – aliasing error of pointwise activations on band-limited
//!   functions and the coarse/fine grid discrepancy of grid-based operators.
//! * [`autodiff`] and [`nets`] – a reverse-mode engine over complex matrices,
//!   the spectral neural operator family, FNO and DeepONet baselines, Adam.
//! * [`problems`] – random function families, closed-form solutions and
//!   pseudospectral reference solvers used to build datasets.
//! * [`harness`] – experiment protocols, configs and result tables.

pub mod aliasing;
pub mod autodiff;
pub mod error;
pub mod harness;
pub mod nets;
pub mod problems;
pub mod seq;
pub mod spectral;

pub use error::{Error, Result};
pub use num_complex::Complex64 as C64;
