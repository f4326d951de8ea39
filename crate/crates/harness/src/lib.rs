//! Experiment driver for the adaptive smoothing solvers: seeded instance
//! generation, algorithm runs, parameter sweeps and PSNR scoring.

pub mod error;
pub mod experiment;
pub mod image;
pub mod instance;
pub mod rng;

pub use error::{HarnessError, Result};
pub use experiment::{
    run_algorithm, run_experiment, run_sweep, sweep, AlgorithmSpec, ExperimentConfig, Prepared, ReferenceChoice,
    SummaryRow, SweepResult, SweepSpec,
};
pub use image::{psnr, synthetic_image, PSNR_CAP_DB};
pub use instance::{build_problem, gen_instance, BuiltProblem, Design, Family, Instance, InstanceSpec};
pub use rng::GaussianStream;
