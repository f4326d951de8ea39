//! Variant for a differentiable `g`: a plain gradient step replaces the prox and
//! `γ` follows a recurrence tied to `L_g`.

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;
use crate::vector;

use super::adaptive::{base_row, note_common, resolve_reference};
use super::trace::Recorder;
use super::{
    momentum, require_iters, smooth_g_next, theoretical_bound, BoundKind, BoundParams, CompositeProblem, Schedule,
    ScheduleRule, SmoothFn, SolverState, Trace, TraceOptions,
};

fn parts<'a, T: Scalar>(
    problem: &'a CompositeProblem<T>,
    schedule: &Schedule<T>,
) -> Result<(&'a dyn SmoothFn<T>, T, T)> {
    let g = problem
        .g
        .as_smooth()
        .ok_or_else(|| Error::config("smooth-g variant needs a differentiable g"))?;
    match schedule.rule {
        ScheduleRule::SmoothG { lg, opnorm_sq } => Ok((g, lg, opnorm_sq)),
        _ => Err(Error::config("smooth-g variant needs the smooth-g schedule")),
    }
}

/// Initial state: `τ_0 = 1`, `γ_1 = ‖A‖²/L_g`, `β_1 = 1/(L_g + ‖A‖²/γ_1)`.
pub(crate) fn start<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    x0: Vec<T>,
) -> Result<SolverState<T>> {
    let (_, lg, a2) = parts(problem, schedule)?;
    check_len("starting point", problem.dim(), x0.len())?;
    let gamma = schedule.gamma1;
    Ok(SolverState {
        k: 0,
        x_hat: x0.clone(),
        x_tilde: x0.clone(),
        x: x0,
        tau: T::one(),
        gamma_next: gamma,
        beta_next: T::one() / (lg + a2 / gamma),
        u_hat: None,
        average: None,
    })
}

fn in_place<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &mut SolverState<T>,
) -> Result<()> {
    let (g, lg, a2) = parts(problem, schedule)?;
    let ev = problem.f.smooth_eval(state.gamma_next, &state.x_hat)?;
    let dir = vector::add(&g.gradient(&state.x_hat), &ev.grad);
    let x_next = vector::axpy(&state.x_hat, -state.beta_next, &dir);
    let k = state.k;
    let gamma = smooth_g_next(state.gamma_next, k + 1, lg, a2);
    let tau = T::one() / T::from_index(k + 2);
    state.u_hat = Some(ev.u_star);
    state.advance(x_next, momentum(T::one(), k), tau, gamma, T::one() / (lg + a2 / gamma));
    Ok(())
}

pub fn step_smooth_g<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &SolverState<T>,
) -> Result<SolverState<T>> {
    check_len("solver state", problem.dim(), state.x.len())?;
    let mut next = state.clone();
    in_place(problem, schedule, &mut next)?;
    Ok(next)
}

/// Runs the smooth-`g` variant; the schedule is derived from `L_g` and `‖A‖`.
pub fn run_smooth_g<T: Scalar>(
    problem: &CompositeProblem<T>,
    x0: Vec<T>,
    iters: usize,
    opts: &TraceOptions<T>,
) -> Result<(SolverState<T>, Trace)> {
    require_iters(iters)?;
    let lg = problem
        .g
        .as_smooth()
        .ok_or_else(|| Error::config("smooth-g variant needs a differentiable g"))?
        .lipschitz();
    let schedule = Schedule::smooth_g(lg, problem.opnorm)?;
    let (x_star, f_star) = resolve_reference(problem, opts);
    let mut state = start(problem, &schedule, x0)?;
    let mut trace = Trace::default();
    note_common(&mut trace, "smooth-g", problem);
    trace.note("lg", format!("{:.16e}", lg.to_f64_lossy()));
    trace.note("gamma1", format!("{:.16e}", schedule.gamma1.to_f64_lossy()));
    trace.note("bound_adaptive", "smooth-g bound");
    let params = match &x_star {
        Some(xs) => {
            check_len("reference minimizer", problem.dim(), xs.len())?;
            Some(BoundParams {
                r0: Some(vector::dist(&state.x, xs)),
                opnorm: Some(problem.opnorm),
                diameter: Some(problem.f.prox_diameter()),
                lg: Some(lg),
                ..Default::default()
            })
        }
        None => None,
    };
    let recorder = Recorder::new(opts, iters);
    for _ in 0..iters {
        let gamma = state.gamma_next;
        in_place(problem, &schedule, &mut state)?;
        if !recorder.wants(state.k) {
            continue;
        }
        let (mut row, _) = base_row(problem, state.k, &state.x, gamma, f_star)?;
        if let Some(p) = &params {
            row.bound_adaptive = theoretical_bound(BoundKind::SmoothG, p, state.k)?.to_f64_lossy();
        }
        row.elapsed_ns = recorder.elapsed_ns();
        trace.rows.push(row);
    }
    Ok((state, trace))
}
