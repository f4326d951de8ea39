//! The adaptive smoothing accelerated proximal-gradient method and its
//! double-prox specialization.

use crate::error::{check_len, Error, Result};
use crate::prox::ProxFn;
use crate::scalar::Scalar;
use crate::smoothing::SmoothTerm;
use crate::vector;

use super::bounds::lyapunov_value;
use super::trace::Recorder;
use super::{
    momentum, require_iters, theoretical_bound, BoundKind, BoundParams, CompositeProblem, Schedule, SolverState, Trace,
    TraceOptions, TraceRow,
};

fn prox_regularizer<T: Scalar>(problem: &CompositeProblem<T>) -> Result<&ProxFn<T>> {
    problem
        .g
        .as_prox()
        .ok_or_else(|| Error::config("this method needs a proximable g; use the smooth-g variant for differentiable g"))
}

fn check_state<T: Scalar>(problem: &CompositeProblem<T>, state: &SolverState<T>) -> Result<()> {
    check_len("solver state", problem.dim(), state.x.len())?;
    check_len("solver state", problem.dim(), state.x_hat.len())?;
    check_len("solver state", problem.dim(), state.x_tilde.len())
}

fn finish_step<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &mut SolverState<T>,
    x_next: Vec<T>,
    u_hat: Vec<T>,
) -> Result<()> {
    let k = state.k;
    let weight = momentum(schedule.c_bar, k);
    let (tau, gamma) = schedule.schedule_next(k + 1)?;
    state.u_hat = Some(u_hat);
    state.advance(x_next, weight, tau, gamma, gamma / problem.step_opnorm_sq());
    Ok(())
}

pub(crate) fn adaptive_in_place<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &mut SolverState<T>,
) -> Result<()> {
    let g = prox_regularizer(problem)?;
    let ev = problem.f.smooth_eval(state.gamma_next, &state.x_hat)?;
    let beta = state.beta_next;
    let x_next = g.prox_of(beta, &vector::axpy(&state.x_hat, -beta, &ev.grad))?;
    finish_step(problem, schedule, state, x_next, ev.u_star)
}

fn double_prox_in_place<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &mut SolverState<T>,
) -> Result<()> {
    let f = match &problem.f {
        SmoothTerm::Conjugate { f, .. } => f,
        SmoothTerm::Max(_) => {
            return Err(Error::config("double-prox step needs f given by its proximal operator"));
        }
    };
    let g = prox_regularizer(problem)?;
    let gamma = state.gamma_next;
    let pf = f.prox_of(gamma, &state.x_hat)?;
    let u_hat: Vec<T> = state.x_hat.iter().zip(&pf).map(|(&a, &b)| (a - b) / gamma).collect();
    let x_next = g.prox_of(gamma, &pf)?;
    finish_step(problem, schedule, state, x_next, u_hat)
}

/// One iteration: maximize at `x̂^k` with `γ_{k+1}`, take the prox-gradient step
/// with `β_{k+1} = γ_{k+1}/‖A‖²`, extrapolate and advance the schedule.
pub fn step_adaptive<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &SolverState<T>,
) -> Result<SolverState<T>> {
    check_state(problem, state)?;
    let mut next = state.clone();
    adaptive_in_place(problem, schedule, &mut next)?;
    Ok(next)
}

/// `x^{k+1} = prox_{γg}(prox_{γf}(x̂^k))` with `γ = γ_{k+1}`; requires `‖A‖ = 1`.
pub fn step_double_prox<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &SolverState<T>,
) -> Result<SolverState<T>> {
    check_state(problem, state)?;
    let mut next = state.clone();
    double_prox_in_place(problem, schedule, &mut next)?;
    Ok(next)
}

pub fn run_adaptive<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    x0: Vec<T>,
    iters: usize,
    opts: &TraceOptions<T>,
) -> Result<(SolverState<T>, Trace)> {
    prox_regularizer(problem)?;
    drive(problem, schedule, x0, iters, opts, "adaptive", adaptive_in_place)
}

pub fn run_double_prox<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    x0: Vec<T>,
    iters: usize,
    opts: &TraceOptions<T>,
) -> Result<(SolverState<T>, Trace)> {
    if problem.f.max_structure().is_some() {
        return Err(Error::config("double-prox step needs f given by its proximal operator"));
    }
    prox_regularizer(problem)?;
    drive(problem, schedule, x0, iters, opts, "double-prox", double_prox_in_place)
}

/// Reference point and value for a run: explicit options win over the problem's reference.
pub(crate) fn resolve_reference<T: Scalar>(
    problem: &CompositeProblem<T>,
    opts: &TraceOptions<T>,
) -> (Option<Vec<T>>, Option<T>) {
    let x_star = opts
        .x_star
        .clone()
        .or_else(|| problem.reference_point().map(<[T]>::to_vec));
    let f_star = opts.f_star.or_else(|| problem.reference_value());
    (x_star, f_star)
}

pub(crate) fn base_row<T: Scalar>(
    problem: &CompositeProblem<T>,
    k: usize,
    x: &[T],
    gamma: T,
    f_star: Option<T>,
) -> Result<(TraceRow, T)> {
    let mut row = TraceRow::new(k);
    let obj = problem.objective(x)?;
    let smoothed = problem.smoothed_objective(gamma, x)?;
    row.objective = obj.to_f64_lossy();
    row.smoothed_objective = smoothed.to_f64_lossy();
    row.gamma = gamma.to_f64_lossy();
    if let Some(fs) = f_star {
        row.gap = (obj - fs).to_f64_lossy();
    }
    Ok((row, smoothed))
}

pub(crate) fn note_common<T: Scalar>(trace: &mut Trace, algorithm: &str, problem: &CompositeProblem<T>) {
    trace.note("algorithm", algorithm);
    trace.note("opnorm", format!("{:.16e}", problem.opnorm.to_f64_lossy()));
    trace.note(
        "prox_diameter",
        format!("{:.16e}", problem.f.prox_diameter().to_f64_lossy()),
    );
    if let Some(r) = &problem.reference {
        trace.note(
            "reference",
            format!("{:.16e} ({})", r.value.to_f64_lossy(), r.provenance.as_str()),
        );
    }
}

type StepFn<T> = fn(&CompositeProblem<T>, &Schedule<T>, &mut SolverState<T>) -> Result<()>;

fn drive<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    x0: Vec<T>,
    iters: usize,
    opts: &TraceOptions<T>,
    name: &str,
    step: StepFn<T>,
) -> Result<(SolverState<T>, Trace)> {
    require_iters(iters)?;
    let (x_star, f_star) = resolve_reference(problem, opts);
    if let Some(xs) = &x_star {
        check_len("reference minimizer", problem.dim(), xs.len())?;
    }
    let mut state = SolverState::start(problem, schedule, x0)?;
    let mut trace = Trace::default();
    note_common(&mut trace, name, problem);
    trace.note("gamma1", format!("{:.16e}", schedule.gamma1.to_f64_lossy()));
    trace.note("c_bar", format!("{:.16e}", schedule.c_bar.to_f64_lossy()));
    if schedule.c_bar > T::one() {
        trace.note("gamma0", "set to gamma1 (only enters the Lyapunov bound)");
    }
    let params = x_star.as_ref().map(|xs| BoundParams {
        r0: Some(vector::dist(&state.x, xs)),
        opnorm: Some(problem.opnorm),
        diameter: Some(problem.f.prox_diameter()),
        gamma1: Some(schedule.gamma1),
        ..Default::default()
    });
    if params.is_none() {
        trace.note("bounds", "omitted (no reference minimizer)");
    }
    let recorder = Recorder::new(opts, iters);
    for _ in 0..iters {
        let (tau, gamma) = (state.tau, state.gamma_next);
        step(problem, schedule, &mut state)?;
        if !recorder.wants(state.k) {
            continue;
        }
        let (mut row, smoothed) = base_row(problem, state.k, &state.x, gamma, f_star)?;
        if let Some(p) = &params {
            if schedule.c_bar == T::one() {
                row.bound_adaptive = theoretical_bound(BoundKind::AdaptiveGeneral, p, state.k)?.to_f64_lossy();
            }
            row.bound_nonadaptive = theoretical_bound(BoundKind::Nonadaptive, p, state.k)?.to_f64_lossy();
        }
        if let (Some(xs), Some(fs)) = (&x_star, f_star) {
            row.lyapunov = lyapunov_value(problem, gamma, tau, smoothed, &state.x_tilde, xs, fs).to_f64_lossy();
        }
        row.elapsed_ns = recorder.elapsed_ns();
        trace.rows.push(row);
    }
    Ok((state, trace))
}
