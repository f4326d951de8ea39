//! The adaptive smoothing solver family, the baselines it is compared against,
//! and the theoretical bounds used as per-iteration diagnostics.

mod adaptive;
mod baselines;
mod bounds;
mod dual;
mod schedule;
mod smooth_g;
mod trace;

use std::fmt::Debug;
use std::sync::Arc;

pub use adaptive::{run_adaptive, run_double_prox, step_adaptive, step_double_prox};
pub use baselines::{
    fixed_gamma_for_accuracy, fixed_gamma_for_budget, iteration_budget, run_bot_hendrich, run_nonadaptive, smoothed_l1,
};
pub use bounds::{lyapunov_bound, lyapunov_diagnostic, theoretical_bound, BoundKind, BoundParams};
pub use dual::{run_dual_primal, ConstrainedProblem, DualRun, PrimalAverage, PrimalRecord};
pub use schedule::{
    adaptive_pair, bot_hendrich_param, momentum, smooth_g_next, AveragingWeights, Schedule, ScheduleRule,
};
pub use smooth_g::{run_smooth_g, step_smooth_g};
pub use trace::{Trace, TraceOptions, TraceRow, TRACE_COLUMNS};

use crate::error::{check_len, Error, Result};
use crate::prox::ProxFn;
use crate::scalar::Scalar;
use crate::smoothing::SmoothTerm;
use crate::vector;

/// A differentiable `g` with Lipschitz-continuous gradient.
pub trait SmoothFn<T>: Debug + Send + Sync {
    fn value(&self, x: &[T]) -> T;
    fn gradient(&self, x: &[T]) -> Vec<T>;
    fn lipschitz(&self) -> T;
}

/// `weight/2 ‖x‖²`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalfSquaredNorm<T> {
    pub weight: T,
}

impl<T: Scalar> SmoothFn<T> for HalfSquaredNorm<T> {
    fn value(&self, x: &[T]) -> T {
        T::lit(0.5) * self.weight * vector::norm2_sq(x)
    }

    fn gradient(&self, x: &[T]) -> Vec<T> {
        vector::scale(x, self.weight)
    }

    fn lipschitz(&self) -> T {
        self.weight
    }
}

/// The second term `g` of `F = f + g`.
#[derive(Debug, Clone)]
pub enum Regularizer<T> {
    Prox(ProxFn<T>),
    Smooth(Arc<dyn SmoothFn<T>>),
}

impl<T: Scalar> Regularizer<T> {
    pub fn value(&self, x: &[T]) -> Result<T> {
        match self {
            Regularizer::Prox(g) => g.value(x),
            Regularizer::Smooth(g) => Ok(g.value(x)),
        }
    }

    pub fn as_prox(&self) -> Option<&ProxFn<T>> {
        match self {
            Regularizer::Prox(g) => Some(g),
            Regularizer::Smooth(_) => None,
        }
    }

    pub fn as_smooth(&self) -> Option<&dyn SmoothFn<T>> {
        match self {
            Regularizer::Prox(_) => None,
            Regularizer::Smooth(g) => Some(g.as_ref()),
        }
    }
}

impl<T: Scalar> From<ProxFn<T>> for Regularizer<T> {
    fn from(g: ProxFn<T>) -> Self {
        Regularizer::Prox(g)
    }
}

/// Where a reference optimum came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    LpOracle,
    GridOracle,
    /// Best objective of a long solver run; approximate.
    LongRun,
    Analytic,
    Supplied,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::LpOracle => "lp-oracle",
            Provenance::GridOracle => "grid-oracle",
            Provenance::LongRun => "long-run",
            Provenance::Analytic => "analytic",
            Provenance::Supplied => "supplied",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reference<T> {
    pub value: T,
    pub x_star: Option<Vec<T>>,
    pub provenance: Provenance,
}

/// `min_x F(x) = f(x) + g(x)`.
#[derive(Debug, Clone)]
pub struct CompositeProblem<T> {
    pub f: SmoothTerm<T>,
    pub g: Regularizer<T>,
    /// `‖A‖`, zero only for the zero map.
    pub opnorm: T,
    pub reference: Option<Reference<T>>,
}

impl<T: Scalar> CompositeProblem<T> {
    /// Builds the problem and estimates `‖A‖` by power iteration.
    pub fn new(f: SmoothTerm<T>, g: Regularizer<T>) -> Result<Self> {
        let opnorm = match &f {
            SmoothTerm::Max(ms) => {
                let tol = (T::epsilon() * T::lit(1e3)).max(T::lit(1e-13));
                ms.map().operator_norm(tol, 200_000)?
            }
            SmoothTerm::Conjugate { .. } => T::one(),
        };
        Self::with_opnorm(f, g, opnorm)
    }

    pub fn with_opnorm(f: SmoothTerm<T>, g: Regularizer<T>, opnorm: T) -> Result<Self> {
        if !(opnorm >= T::zero() && opnorm.is_finite()) {
            return Err(Error::arg("operator norm must be finite and nonnegative"));
        }
        if let Regularizer::Prox(p) = &g {
            if let Some(d) = p.fixed_dim() {
                check_len("regularizer dimension", f.dim(), d)?;
            }
        }
        if let Regularizer::Smooth(s) = &g {
            if !(s.lipschitz() >= T::zero()) {
                return Err(Error::arg("L_g must be nonnegative"));
            }
        }
        Ok(CompositeProblem {
            f,
            g,
            opnorm,
            reference: None,
        })
    }

    pub fn with_reference(mut self, reference: Reference<T>) -> Result<Self> {
        if let Some(x) = &reference.x_star {
            check_len("reference minimizer", self.dim(), x.len())?;
        }
        self.reference = Some(reference);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.f.dim()
    }

    /// `‖A‖²` used in step sizes; the zero map falls back to 1 so steps stay finite.
    pub fn step_opnorm_sq(&self) -> T {
        if self.opnorm > T::zero() {
            self.opnorm * self.opnorm
        } else {
            T::one()
        }
    }

    pub fn objective(&self, x: &[T]) -> Result<T> {
        Ok(self.f.nonsmooth_value(x)? + self.g.value(x)?)
    }

    /// `F_gamma(x) = f_gamma(x) + g(x)`
    pub fn smoothed_objective(&self, gamma: T, x: &[T]) -> Result<T> {
        Ok(self.f.smooth_eval(gamma, x)?.value + self.g.value(x)?)
    }

    pub fn reference_value(&self) -> Option<T> {
        self.reference.as_ref().map(|r| r.value)
    }

    pub fn reference_point(&self) -> Option<&[T]> {
        self.reference.as_ref().and_then(|r| r.x_star.as_deref())
    }
}

/// Iterates and schedule values carried between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverState<T> {
    pub k: usize,
    pub x: Vec<T>,
    pub x_hat: Vec<T>,
    pub x_tilde: Vec<T>,
    /// `tau_k`
    pub tau: T,
    /// `gamma_{k+1}`
    pub gamma_next: T,
    /// `beta_{k+1}`
    pub beta_next: T,
    /// Maximizer computed at `x_hat^{k-1}` by the last step.
    pub u_hat: Option<Vec<T>>,
    pub average: Option<PrimalAverage<T>>,
}

impl<T: Scalar> SolverState<T> {
    /// State at `k = 0`.
    ///
    /// The smooth-`g` schedule starts from its own `γ_1` and step instead.
    pub fn start(problem: &CompositeProblem<T>, schedule: &Schedule<T>, x0: Vec<T>) -> Result<Self> {
        if let ScheduleRule::SmoothG { .. } = schedule.rule {
            return smooth_g::start(problem, schedule, x0);
        }
        check_len("starting point", problem.dim(), x0.len())?;
        let (tau, gamma_next) = schedule.schedule_next(0)?;
        Ok(SolverState {
            k: 0,
            x_hat: x0.clone(),
            x_tilde: x0.clone(),
            x: x0,
            tau,
            gamma_next,
            beta_next: gamma_next / problem.step_opnorm_sq(),
            u_hat: None,
            average: None,
        })
    }

    /// Moves to `k + 1` given `x^{k+1}`, the momentum weight and the next schedule values.
    pub(crate) fn advance(&mut self, x_next: Vec<T>, weight: T, tau: T, gamma_next: T, beta_next: T) {
        let inv_tau = T::one() / self.tau;
        let x_tilde: Vec<T> = self
            .x_tilde
            .iter()
            .zip(self.x_hat.iter().zip(&x_next))
            .map(|(&t, (&h, &n))| t - inv_tau * (h - n))
            .collect();
        let x_hat: Vec<T> = x_next
            .iter()
            .zip(&self.x)
            .map(|(&n, &o)| n + weight * (n - o))
            .collect();
        self.x = x_next;
        self.x_hat = x_hat;
        self.x_tilde = x_tilde;
        self.tau = tau;
        self.gamma_next = gamma_next;
        self.beta_next = beta_next;
        self.k += 1;
    }
}

fn require_iters(iters: usize) -> Result<()> {
    if iters == 0 {
        Err(Error::arg("iteration count must be at least 1"))
    } else {
        Ok(())
    }
}
