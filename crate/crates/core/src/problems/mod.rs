//! Builders for the experiment families and the reference-optimum oracle.

use crate::error::{check_len, Error, Result};
use crate::linops::{Blur, LinearMap};
use crate::oracle;
use crate::prox::{ProxFn, SetSpec};
use crate::scalar::Scalar;
use crate::smoothing::{MaxBlock, MaxStructure, Phi, SmoothTerm};
use crate::solvers::{
    run_adaptive, step_adaptive, CompositeProblem, ConstrainedProblem, Provenance, Reference, Regularizer, Schedule,
    SolverState, TraceOptions,
};
use crate::vector;

/// `f(x) = ‖Bx - b‖` written as `max { <Bᵀu, x> - <b, u> : u ∈ U }`.
fn residual_norm<T: Scalar>(matrix: LinearMap<T>, rhs: Vec<T>, dual_ball: SetSpec<T>) -> Result<SmoothTerm<T>> {
    check_len("right-hand side", matrix.out_dim(), rhs.len())?;
    let block = MaxBlock::new(matrix.transpose(), Phi::linear(rhs), dual_ball, None, None)?;
    Ok(SmoothTerm::Max(MaxStructure::new(block)))
}

fn l1_regularizer<T: Scalar>(lambda: T) -> Result<Regularizer<T>> {
    Ok(Regularizer::Prox(ProxFn::l1(lambda)?))
}

/// `min ‖Bx - b‖₁ + λ‖x‖₁`, with `U` the unit `l∞` ball and `D_U = n/2`.
pub fn build_l1l1<T: Scalar>(matrix: LinearMap<T>, rhs: Vec<T>, lambda: T) -> Result<CompositeProblem<T>> {
    let f = residual_norm(matrix, rhs, SetSpec::linf_ball(T::one())?)?;
    CompositeProblem::new(f, l1_regularizer(lambda)?)
}

/// `min ‖Bx - b‖₂ + λ‖x‖₁`, with `U` the unit Euclidean ball and `D_U = 1/2`.
pub fn build_sqrt_lasso<T: Scalar>(matrix: LinearMap<T>, rhs: Vec<T>, lambda: T) -> Result<CompositeProblem<T>> {
    let f = residual_norm(matrix, rhs, SetSpec::l2_ball(T::one())?)?;
    CompositeProblem::new(f, l1_regularizer(lambda)?)
}

/// Haar levels used by the deblurring regularizer.
pub const DEBLUR_HAAR_LEVELS: usize = 4;

/// `min ‖K x - b‖_α + λ‖W x‖₁` over images, with `K` a periodic blur, `W` the
/// 4-level Haar transform and `α ∈ {1, 2}`.
pub fn build_deblur<T: Scalar>(observed: Vec<T>, blur: Blur<T>, lambda: T, alpha: u8) -> Result<CompositeProblem<T>> {
    let (h, w) = blur.dims();
    let cell = 1 << DEBLUR_HAAR_LEVELS;
    if h % cell != 0 || w % cell != 0 {
        return Err(Error::arg(format!("image sides must be divisible by {cell}")));
    }
    let ball = match alpha {
        1 => SetSpec::linf_ball(T::one())?,
        2 => SetSpec::l2_ball(T::one())?,
        _ => return Err(Error::arg("fidelity norm must be 1 or 2")),
    };
    let f = residual_norm(LinearMap::Blur(blur), observed, ball)?;
    let g = ProxFn::l1_orthogonal(LinearMap::haar(h, w, DEBLUR_HAAR_LEVELS)?, lambda)?;
    CompositeProblem::new(f, Regularizer::Prox(g))
}

/// `min φ(u) s.t. b - Au ∈ K, u ∈ U`, prepared for dual solution with primal recovery.
pub fn build_constrained<T: Scalar>(
    phi: Phi<T>,
    map: LinearMap<T>,
    rhs: Vec<T>,
    cone: SetSpec<T>,
    set: SetSpec<T>,
) -> Result<ConstrainedProblem<T>> {
    ConstrainedProblem::new(phi, map, rhs, cone, set, None)
}

/// `min { ‖u‖₁ : u₁ + u₂ = 1, ‖u‖∞ ≤ 10 }` with `φ* = 1` and dual solution `x* = 1`.
pub fn basis_pursuit_toy<T: Scalar>() -> Result<ConstrainedProblem<T>> {
    let p = build_constrained(
        Phi::l1(T::one()),
        LinearMap::from_rows(&[vec![T::one(), T::one()]])?,
        vec![T::one()],
        SetSpec::ZeroCone,
        SetSpec::linf_ball(T::lit(10.0))?,
    )?;
    p.with_solution(T::one(), Some(vec![T::one()]))
}

/// `f = 0` on `R^dim` (zero map) with the given `g`.
pub fn zero_problem<T: Scalar>(dim: usize, g: ProxFn<T>) -> Result<CompositeProblem<T>> {
    let block = MaxBlock::new(
        LinearMap::zero(dim, 1),
        Phi::zero(),
        SetSpec::linf_ball(T::one())?,
        None,
        None,
    )?;
    CompositeProblem::new(SmoothTerm::Max(MaxStructure::new(block)), Regularizer::Prox(g))
}

/// Reference optimum strategies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReferenceMethod {
    /// Exact LP for the `l1-l1` family, `p <= 60`.
    Lp,
    /// Search on the box `[-radius, radius]^p` for convex objectives, `p <= 3`.
    Grid { radius: f64, resolution: f64 },
    /// Best objective over a long adaptive run with a pilot-tuned `γ1`; approximate.
    LongRun { iters: usize },
}

pub const LP_MAX_DIM: usize = 60;
pub const GRID_MAX_DIM: usize = 3;

/// `(B, b, λ)` when `P` is `‖Bx - b‖₁ + λ‖x‖₁` with a dense `B`.
#[allow(clippy::type_complexity)]
pub fn as_l1l1(problem: &CompositeProblem<f64>) -> Option<(usize, usize, &[f64], &[f64], f64)> {
    let ms = problem.f.max_structure()?;
    let [block] = ms.blocks() else { return None };
    let LinearMap::Adjoint(inner) = &block.map else {
        return None;
    };
    let LinearMap::Dense { rows, cols, data } = inner.as_ref() else {
        return None;
    };
    let rhs = block.phi.linear.as_deref()?;
    if block.phi.l1_weight != 0.0 || block.center.is_some() {
        return None;
    }
    match &block.set {
        SetSpec::LinfBall { center: None, radius } if *radius == 1.0 => {}
        _ => return None,
    }
    let lambda = match problem.g.as_prox()? {
        ProxFn::L1 { weight, shift: None } => *weight,
        ProxFn::Zero => 0.0,
        _ => return None,
    };
    Some((*rows, *cols, data, rhs, lambda))
}

pub fn reference_optimum(problem: &CompositeProblem<f64>, method: ReferenceMethod) -> Result<Reference<f64>> {
    let p = problem.dim();
    match method {
        ReferenceMethod::Lp => {
            let (rows, cols, data, rhs, lambda) = as_l1l1(problem).ok_or_else(|| {
                Error::unsupported(
                    "the LP oracle handles ‖Bx - b‖₁ + λ‖x‖₁ with dense B only; use the grid or long-run oracle",
                )
            })?;
            if p > LP_MAX_DIM {
                return Err(Error::unsupported(format!(
                    "the LP oracle is limited to p <= {LP_MAX_DIM}; use the long-run oracle"
                )));
            }
            let x = oracle::l1l1_minimizer(rows, cols, data, rhs, lambda)?;
            Ok(Reference {
                value: problem.objective(&x)?,
                x_star: Some(x),
                provenance: Provenance::LpOracle,
            })
        }
        ReferenceMethod::Grid { radius, resolution } => {
            if p > GRID_MAX_DIM {
                return Err(Error::unsupported(format!(
                    "the grid oracle is limited to p <= {GRID_MAX_DIM}; use the LP or long-run oracle"
                )));
            }
            let lo = vec![-radius; p];
            let hi = vec![radius; p];
            let (value, x) =
                oracle::grid_minimize(|x| problem.objective(x).unwrap_or(f64::INFINITY), &lo, &hi, resolution)?;
            Ok(Reference {
                value,
                x_star: Some(x),
                provenance: Provenance::GridOracle,
            })
        }
        ReferenceMethod::LongRun { iters } => long_run(problem, iters),
    }
}

fn long_run(problem: &CompositeProblem<f64>, iters: usize) -> Result<Reference<f64>> {
    if iters == 0 {
        return Err(Error::arg("long-run oracle needs at least one iteration"));
    }
    let p = problem.dim();
    let d = problem.f.prox_diameter();
    let scale = problem.opnorm.max(1.0) / (6.0 * d.max(f64::MIN_POSITIVE)).sqrt();
    let x0 = vector::zeros(p);
    let pilot_iters = (iters / 10).clamp(1, 10_000);
    let pilot = Schedule::adaptive(scale, 1.0)?;
    let (pilot_state, _) = run_adaptive(
        problem,
        &pilot,
        x0.clone(),
        pilot_iters,
        &TraceOptions {
            report_every: pilot_iters,
            ..Default::default()
        },
    )?;
    let r0 = vector::dist(&x0, &pilot_state.x).max(1e-3);
    let schedule = Schedule::adaptive(scale * r0, 1.0)?;
    let mut state = SolverState::start(problem, &schedule, x0.clone())?;
    let mut best = (problem.objective(&x0)?, x0);
    let pilot_value = problem.objective(&pilot_state.x)?;
    if pilot_value < best.0 {
        best = (pilot_value, pilot_state.x);
    }
    for _ in 0..iters {
        state = step_adaptive(problem, &schedule, &state)?;
        let v = problem.objective(&state.x)?;
        if v < best.0 {
            best = (v, state.x.clone());
        }
    }
    Ok(Reference {
        value: best.0,
        x_star: Some(best.1),
        provenance: Provenance::LongRun,
    })
}
