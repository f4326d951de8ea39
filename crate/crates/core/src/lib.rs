//! Adaptive Nesterov smoothing for fully nonsmooth composite convex problems
//!
//! ```text
//! minimize F(x) = f(x) + g(x),    f(x) = max_{u in U} { <x, A u> - phi(u) }
//! ```
//!
//! `f` is replaced by its smoothed surrogate `f_gamma` (a quadratic prox-function
//! is subtracted inside the max) and `gamma` is driven to zero while a single
//! accelerated proximal-gradient step is taken per value of `gamma`.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the bottom of this file fix the scalar to `f64`, which is what the
//! experiments and the reference oracles use.

// Negated comparisons are the NaN-rejecting form of argument checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod linops;
pub mod oracle;
pub mod problems;
pub mod prox;
pub mod scalar;
pub mod smoothing;
pub mod solvers;
pub mod vector;

pub use error::{Error, Result};
pub use linops::LinearMap;
pub use prox::{ProxFn, SetSpec};
pub use scalar::Scalar;
pub use smoothing::{MaxBlock, MaxStructure, Phi, SmoothEval, SmoothTerm};
pub use solvers::{
    CompositeProblem, Provenance, Reference, Regularizer, Schedule, ScheduleRule, SolverState, Trace, TraceOptions,
    TraceRow,
};

pub type LinearMap64 = linops::LinearMap<f64>;
pub type LinearMap32 = linops::LinearMap<f32>;
pub type SetSpec64 = prox::SetSpec<f64>;
pub type ProxFn64 = prox::ProxFn<f64>;
pub type MaxStructure64 = smoothing::MaxStructure<f64>;
pub type MaxStructure32 = smoothing::MaxStructure<f32>;
pub type CompositeProblem64 = solvers::CompositeProblem<f64>;
pub type CompositeProblem32 = solvers::CompositeProblem<f32>;
pub type SolverState64 = solvers::SolverState<f64>;
pub type Schedule64 = solvers::Schedule<f64>;
