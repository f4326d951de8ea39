//! Methods the adaptive scheme is compared against: accelerated gradient on a
//! fixed smoothing of `f`, and variable smoothing of both `f` and an `l1`-type `g`.

use crate::error::{check_len, Error, Result};
use crate::prox::ProxFn;
use crate::scalar::Scalar;
use crate::vector;

use super::adaptive::{base_row, note_common, resolve_reference};
use super::trace::Recorder;
use super::{
    bot_hendrich_param, require_iters, theoretical_bound, BoundKind, BoundParams, CompositeProblem, Regularizer,
    SolverState, Trace, TraceOptions,
};

/// `γ* = ε / (2 D)`
pub fn fixed_gamma_for_accuracy<T: Scalar>(eps: T, diameter: T) -> Result<T> {
    if !(eps > T::zero() && diameter > T::zero()) {
        return Err(Error::arg("accuracy and prox-diameter must be positive"));
    }
    Ok(eps / (T::lit(2.0) * diameter))
}

/// `⌊2√2 ‖A‖ R0 √D / ε⌋`
pub fn iteration_budget<T: Scalar>(opnorm: T, r0: T, diameter: T, eps: T) -> Result<usize> {
    if !(eps > T::zero()) {
        return Err(Error::arg("accuracy must be positive"));
    }
    let k = (T::lit(2.0) * T::SQRT_2() * opnorm * r0 * diameter.sqrt() / eps).floor();
    k.to_usize()
        .ok_or_else(|| Error::arg("iteration budget does not fit in usize"))
}

/// `γ* = √2 ‖A‖ R0 / (√D (k + 1))`, the fixed smoothing tuned to a budget of `k` iterations.
pub fn fixed_gamma_for_budget<T: Scalar>(opnorm: T, r0: T, diameter: T, k: usize) -> Result<T> {
    if !(diameter > T::zero()) {
        return Err(Error::arg("prox-diameter must be positive"));
    }
    Ok(T::SQRT_2() * opnorm * r0 / (diameter.sqrt() * T::from_index(k + 1)))
}

fn fista_next<T: Scalar>(t: T) -> T {
    (T::one() + (T::one() + T::lit(4.0) * t * t).sqrt()) / T::lit(2.0)
}

/// Accelerated (FISTA) method on `f_γ + g` with `γ` held fixed and step `γ/‖A‖²`.
pub fn run_nonadaptive<T: Scalar>(
    problem: &CompositeProblem<T>,
    gamma: T,
    x0: Vec<T>,
    iters: usize,
    opts: &TraceOptions<T>,
) -> Result<(SolverState<T>, Trace)> {
    require_iters(iters)?;
    if !(gamma > T::zero()) {
        return Err(Error::arg("fixed gamma must be positive"));
    }
    check_len("starting point", problem.dim(), x0.len())?;
    let beta = match &problem.g {
        Regularizer::Prox(_) => gamma / problem.step_opnorm_sq(),
        Regularizer::Smooth(s) => T::one() / (problem.step_opnorm_sq() / gamma + s.lipschitz()),
    };
    let (x_star, f_star) = resolve_reference(problem, opts);
    let mut state = SolverState {
        k: 0,
        x_hat: x0.clone(),
        x_tilde: x0.clone(),
        x: x0,
        tau: T::one(),
        gamma_next: gamma,
        beta_next: beta,
        u_hat: None,
        average: None,
    };
    let mut trace = Trace::default();
    note_common(&mut trace, "nonadaptive", problem);
    trace.note("gamma", format!("{:.16e}", gamma.to_f64_lossy()));
    let params = match &x_star {
        Some(xs) => {
            check_len("reference minimizer", problem.dim(), xs.len())?;
            Some(BoundParams {
                r0: Some(vector::dist(&state.x, xs)),
                opnorm: Some(problem.opnorm),
                diameter: Some(problem.f.prox_diameter()),
                gamma: Some(gamma),
                ..Default::default()
            })
        }
        None => None,
    };
    let recorder = Recorder::new(opts, iters);
    for _ in 0..iters {
        let ev = problem.f.smooth_eval(gamma, &state.x_hat)?;
        let x_next = match &problem.g {
            Regularizer::Prox(g) => g.prox_of(beta, &vector::axpy(&state.x_hat, -beta, &ev.grad))?,
            Regularizer::Smooth(s) => {
                let dir = vector::add(&ev.grad, &s.gradient(&state.x_hat));
                vector::axpy(&state.x_hat, -beta, &dir)
            }
        };
        let t = T::one() / state.tau;
        let t_next = fista_next(t);
        state.u_hat = Some(ev.u_star);
        state.advance(x_next, (t - T::one()) / t_next, T::one() / t_next, gamma, beta);
        if !recorder.wants(state.k) {
            continue;
        }
        let (mut row, _) = base_row(problem, state.k, &state.x, gamma, f_star)?;
        if let Some(p) = &params {
            row.bound_nonadaptive = theoretical_bound(BoundKind::NonadaptiveFixed, p, state.k)?.to_f64_lossy();
        }
        row.elapsed_ns = recorder.elapsed_ns();
        trace.rows.push(row);
    }
    Ok((state, trace))
}

/// `g_β(z) = max { <z, v> - β/2 ‖v‖² : ‖v‖∞ ≤ λ }`; returns the value and the maximizer.
pub fn smoothed_l1<T: Scalar>(z: &[T], weight: T, beta: T) -> Result<(T, Vec<T>)> {
    if !(beta > T::zero()) {
        return Err(Error::arg("smoothing parameter must be positive"));
    }
    let v: Vec<T> = z.iter().map(|&zi| (zi / beta).max(-weight).min(weight)).collect();
    let value = vector::dot(z, &v) - T::lit(0.5) * beta * vector::norm2_sq(&v);
    Ok((value, v))
}

/// Value and gradient of the smoothed regularizer.
fn smoothed_regularizer<T: Scalar>(g: &ProxFn<T>, beta: T, x: &[T]) -> Result<(T, Vec<T>)> {
    match g {
        ProxFn::L1 { weight, shift: None } => smoothed_l1(x, *weight, beta),
        ProxFn::L1Orthogonal { map, weight } => {
            let (value, v) = smoothed_l1(&map.apply(x)?, *weight, beta)?;
            Ok((value, map.adjoint(&v)?))
        }
        _ => Err(Error::config("variable smoothing of g needs g = λ‖x‖₁ or λ‖Wx‖₁")),
    }
}

/// Accelerated gradient on `f_{γ_k} + g_{β_k}` with `γ_k = 1/(c_a(k+1))`,
/// `β_k = 1/(c_b(k+1))` and step `1/(‖A‖²/γ_k + 1/β_k)`.
pub fn run_bot_hendrich<T: Scalar>(
    problem: &CompositeProblem<T>,
    c_a: T,
    c_b: T,
    x0: Vec<T>,
    iters: usize,
    opts: &TraceOptions<T>,
) -> Result<(SolverState<T>, Trace)> {
    require_iters(iters)?;
    if !(c_a > T::zero() && c_b > T::zero()) {
        return Err(Error::arg("c_a and c_b must be positive"));
    }
    let g = problem
        .g
        .as_prox()
        .ok_or_else(|| Error::config("variable smoothing of g needs g = λ‖x‖₁ or λ‖Wx‖₁"))?;
    check_len("starting point", problem.dim(), x0.len())?;
    smoothed_regularizer(g, T::one(), &x0)?;
    let (_, f_star) = resolve_reference(problem, opts);
    let a2 = problem.step_opnorm_sq();
    let step = |k: usize| {
        let (gm, bt) = (bot_hendrich_param(c_a, k), bot_hendrich_param(c_b, k));
        (gm, bt, T::one() / (a2 / gm + T::one() / bt))
    };
    let (gamma1, beta_g1, step1) = step(1);
    let mut state = SolverState {
        k: 0,
        x_hat: x0.clone(),
        x_tilde: x0.clone(),
        x: x0,
        tau: T::one(),
        gamma_next: gamma1,
        beta_next: step1,
        u_hat: None,
        average: None,
    };
    let mut beta_g = beta_g1;
    let mut trace = Trace::default();
    note_common(&mut trace, "bot-hendrich", problem);
    trace.note("c_a", format!("{:.16e}", c_a.to_f64_lossy()));
    trace.note("c_b", format!("{:.16e}", c_b.to_f64_lossy()));
    let recorder = Recorder::new(opts, iters);
    for _ in 0..iters {
        let gamma = state.gamma_next;
        let ev = problem.f.smooth_eval(gamma, &state.x_hat)?;
        let (_, gg) = smoothed_regularizer(g, beta_g, &state.x_hat)?;
        let x_next = vector::axpy(&state.x_hat, -state.beta_next, &vector::add(&ev.grad, &gg));
        let t = T::one() / state.tau;
        let t_next = fista_next(t);
        let (gm, bt, st) = step(state.k + 2);
        state.u_hat = Some(ev.u_star);
        state.advance(x_next, (t - T::one()) / t_next, T::one() / t_next, gm, st);
        let used_beta = beta_g;
        beta_g = bt;
        if !recorder.wants(state.k) {
            continue;
        }
        let (mut row, _) = base_row(problem, state.k, &state.x, gamma, f_star)?;
        let smoothed_f = problem.f.smooth_eval(gamma, &state.x)?.value;
        let (smoothed_g, _) = smoothed_regularizer(g, used_beta, &state.x)?;
        row.smoothed_objective = (smoothed_f + smoothed_g).to_f64_lossy();
        row.elapsed_ns = recorder.elapsed_ns();
        trace.rows.push(row);
    }
    Ok((state, trace))
}
