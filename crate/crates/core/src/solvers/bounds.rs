//! Closed-form convergence bounds and the Lyapunov energy used to check them.

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;
use crate::vector;

use super::{CompositeProblem, Schedule, ScheduleRule, SolverState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `‖A‖²R0²/(2γ1k) + 3γ1D/k`, plus `γ1(L_b-1)(ln k + 1)D/k` when `L_b > 1`.
    AdaptiveGeneral,
    /// `R0‖A‖√(6D)/k`, the general bound at its best `γ1`.
    AdaptiveOptimal,
    /// `2√2‖A‖R0√D/(k+1)`, the fixed-γ method at its best `γ`.
    Nonadaptive,
    /// `2‖A‖²R0²/(γ(k+1)²) + γD` for a given fixed `γ`.
    NonadaptiveFixed,
    /// Smooth-`g` variant.
    SmoothG,
    /// Upper objective bound of the primal average in the constrained setting.
    DualObjective,
    /// Feasibility bound of the primal average in the constrained setting.
    DualFeasibility,
}

/// Inputs for [`theoretical_bound`]; each kind reads only the fields it needs.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct BoundParams<T> {
    /// `‖x0 - x*‖`
    pub r0: Option<T>,
    pub opnorm: Option<T>,
    pub diameter: Option<T>,
    pub gamma1: Option<T>,
    /// Defaults to 1.
    pub lb: Option<T>,
    pub lg: Option<T>,
    pub gamma: Option<T>,
    /// `‖x0‖`, used by the constrained objective bound.
    pub x0_norm: Option<T>,
}

fn need<T>(v: Option<T>, name: &str) -> Result<T> {
    v.ok_or_else(|| Error::arg(format!("bound requires parameter `{name}`")))
}

pub fn theoretical_bound<T: Scalar>(kind: BoundKind, p: &BoundParams<T>, k: usize) -> Result<T> {
    let kf = T::from_index(k);
    let two = T::lit(2.0);
    let lb = p.lb.unwrap_or_else(T::one);
    match kind {
        BoundKind::AdaptiveGeneral => {
            check_k(k, 1)?;
            let (r0, a, d, g1) = (
                need(p.r0, "r0")?,
                need(p.opnorm, "opnorm")?,
                need(p.diameter, "diameter")?,
                need(p.gamma1, "gamma1")?,
            );
            let mut b = a * a * r0 * r0 / (two * g1 * kf) + T::lit(3.0) * g1 * d / kf;
            if lb > T::one() {
                b = b + g1 * (lb - T::one()) * (kf.ln() + T::one()) * d / kf;
            }
            Ok(b)
        }
        BoundKind::AdaptiveOptimal => {
            check_k(k, 1)?;
            let (r0, a, d) = (
                need(p.r0, "r0")?,
                need(p.opnorm, "opnorm")?,
                need(p.diameter, "diameter")?,
            );
            Ok(r0 * a * (T::lit(6.0) * d).sqrt() / kf)
        }
        BoundKind::Nonadaptive => {
            let (r0, a, d) = (
                need(p.r0, "r0")?,
                need(p.opnorm, "opnorm")?,
                need(p.diameter, "diameter")?,
            );
            Ok(two * T::SQRT_2() * a * r0 * d.sqrt() / (kf + T::one()))
        }
        BoundKind::NonadaptiveFixed => {
            let (r0, a, d, g) = (
                need(p.r0, "r0")?,
                need(p.opnorm, "opnorm")?,
                need(p.diameter, "diameter")?,
                need(p.gamma, "gamma")?,
            );
            let k1 = kf + T::one();
            Ok(two * a * a * r0 * r0 / (g * k1 * k1) + g * d)
        }
        BoundKind::SmoothG => {
            check_k(k, 1)?;
            let (r0, a, d, lg) = (
                need(p.r0, "r0")?,
                need(p.opnorm, "opnorm")?,
                need(p.diameter, "diameter")?,
                need(p.lg, "lg")?,
            );
            let a2 = a * a;
            let mut b = T::lit(3.0) * lg * r0 * r0 / (two * kf) + a2 / (lg * kf) * (two * lb / lg + T::one()) * d;
            if lb > T::one() {
                b = b + (lb - T::one()) * a2 / (lg * lg * kf) * (kf.ln() + T::one()) * d;
            }
            Ok(b)
        }
        BoundKind::DualObjective => {
            let (a, d, g1, x0) = (
                need(p.opnorm, "opnorm")?,
                need(p.diameter, "diameter")?,
                need(p.gamma1, "gamma1")?,
                need(p.x0_norm, "x0_norm")?,
            );
            Ok((a * a * x0 * x0 + two * (g1 + two * g1 * g1) * d) / (g1 * (kf + T::one())))
        }
        BoundKind::DualFeasibility => {
            let (r0, a, d, g1) = (
                need(p.r0, "r0")?,
                need(p.opnorm, "opnorm")?,
                need(p.diameter, "diameter")?,
                need(p.gamma1, "gamma1")?,
            );
            let a2 = a * a;
            let inner = (r0 * r0 + two / a2 * (two * g1 * g1 + g1) * d).sqrt();
            Ok(a2 * (r0 + inner) / (g1 * (kf + T::one())))
        }
    }
}

fn check_k(k: usize, min: usize) -> Result<()> {
    if k < min {
        Err(Error::arg(format!("bound is defined for k >= {min}")))
    } else {
        Ok(())
    }
}

/// `V = (γ_{k}/τ_{k-1}²)(F_{γ_k}(x^k) - F*) + ‖A‖²/2 ‖x̃^k - x*‖²` for a state at `k >= 1`.
pub fn lyapunov_diagnostic<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    state: &SolverState<T>,
    x_star: &[T],
    f_star: T,
) -> Result<T> {
    if state.k == 0 {
        return Err(Error::arg("the Lyapunov energy is defined after the first step"));
    }
    check_len("reference minimizer", problem.dim(), x_star.len())?;
    let (tau, gamma) = match schedule.rule {
        ScheduleRule::Adaptive => schedule.schedule_next(state.k - 1)?,
        _ => return Err(Error::arg("the Lyapunov energy is tied to the adaptive rule")),
    };
    let fg = problem.smoothed_objective(gamma, &state.x)?;
    Ok(lyapunov_value(problem, gamma, tau, fg, &state.x_tilde, x_star, f_star))
}

pub(crate) fn lyapunov_value<T: Scalar>(
    problem: &CompositeProblem<T>,
    gamma: T,
    tau: T,
    smoothed: T,
    x_tilde: &[T],
    x_star: &[T],
    f_star: T,
) -> T {
    gamma / (tau * tau) * (smoothed - f_star)
        + T::lit(0.5) * problem.opnorm * problem.opnorm * vector::norm2_sq(&vector::sub(x_tilde, x_star))
}

/// Right-hand side the Lyapunov energy must stay under:
/// `(1-τ0)γ0/τ0² (F_{γ0}(x0) - F*) + ‖A‖²/2 ‖x0 - x*‖² + γ1²(c+1) D`.
pub fn lyapunov_bound<T: Scalar>(
    problem: &CompositeProblem<T>,
    schedule: &Schedule<T>,
    x0: &[T],
    x_star: &[T],
    f_star: T,
) -> Result<T> {
    check_len("starting point", problem.dim(), x0.len())?;
    check_len("reference minimizer", problem.dim(), x_star.len())?;
    let (tau0, _) = schedule.schedule_next(0)?;
    let mut v = T::lit(0.5) * problem.opnorm * problem.opnorm * vector::norm2_sq(&vector::sub(x0, x_star));
    if tau0 < T::one() {
        let g0 = schedule.gamma0();
        v = v + (T::one() - tau0) * g0 / (tau0 * tau0) * (problem.smoothed_objective(g0, x0)? - f_star);
    }
    let g1 = schedule.gamma1;
    Ok(v + g1 * g1 * (schedule.c_bar + T::one()) * problem.f.prox_diameter())
}
