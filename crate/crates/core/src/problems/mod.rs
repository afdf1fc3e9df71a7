//! Benchmark problems: random inputs, exact operators, closed-form PDE
//! solutions and reference solvers.

mod burgers;
mod closed_form;
mod elliptic;
mod operators;
mod random;
mod suite;

pub use burgers::Burgers;
pub use closed_form::{
    kdv_soliton, kdv_two_soliton, km_breather, km_breather_field, periodize, BreatherParams,
    SolitonParams, TwoSolitonParams,
};
pub use elliptic::{
    cheb_diff_matrix, elliptic_solve_1d, elliptic_solve_1d_nodal, elliptic_solve_2d,
    elliptic_solve_2d_nodal, MAX_DEGREE_2D,
};
pub use operators::{
    compose_periodic, parametric_ode_solution, target_derivative, target_integrate,
    target_shift_product,
};
pub use random::{draw_coefficients, random_function, sample_random_family, sample_rng, RandomFamilyParams};
pub use suite::{broadcast_in_t, build_dataset, DataOptions, Dataset, DatasetManifest, ProblemId};
