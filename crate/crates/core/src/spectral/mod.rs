//! Truncated Chebyshev and Fourier series on `[-1, 1]` (and tensor products of
//! two such axes), with grid <-> coefficient transforms and exact calculus.
//!
//! Conventions used throughout:
//!
//! * A Chebyshev axis of length `n + 1` stores `c_0..c_n` of `sum c_j T_j(x)`.
//!   Its native grid is `x_k = cos(k pi / n)`, `k = 0..n`, in descending order.
//! * A Fourier axis stores coefficients of `exp(i pi k x)`. In real-signal mode
//!   the last Fourier axis keeps only `k >= 0`; the `k < 0` partners are the
//!   complex conjugates and are implicit. Otherwise the axis holds the full
//!   spectrum in FFT order (`0, 1, .., -2, -1`).
//! * The uniform grid of size `m` is `x_j = -1 + 2 j / m`, right end excluded.

mod basis;
mod calculus;
pub mod io;
mod lines;
mod series;
mod transform;

pub use basis::{cheb_points, uniform_points, Basis, GridKind};
pub use calculus::{
    chop, chop_axis, differentiate, differentiate_axis, integrate, integrate_axis, multiply,
    norm_l2, pad, pad_axis, shift, shift_axis,
};
pub use series::{CoeffSeries, GridFunction};
pub use transform::{
    analysis, cheb_analysis, cheb_synthesis, evaluate, fourier_analysis, fourier_synthesis,
    interpolate_to_grid, native_grid,
};

pub(crate) use lines::map_lines;
pub(crate) use transform::{cheb_eval_line, fourier_eval_line};
