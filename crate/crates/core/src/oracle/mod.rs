//! Independent reference solvers used to certify optimal values.

mod grid;
mod simplex;

pub use grid::{grid_minimize, grid_minimize_1d};
pub use simplex::{l1l1_minimizer, solve_standard_form, LpSolution};
