//! Constrained programs `min φ(u) s.t. b - Au ∈ K, u ∈ U`, solved through their
//! dual with the adaptive method while a weighted average of the dual-step
//! maximizers recovers a primal point.

use crate::error::{check_len, Error, Result};
use crate::linops::LinearMap;
use crate::prox::{ProxFn, SetSpec};
use crate::scalar::Scalar;
use crate::smoothing::{MaxBlock, MaxStructure, Phi, SmoothTerm};
use crate::vector;

use super::adaptive::{adaptive_in_place, base_row, note_common};
use super::trace::Recorder;
use super::{
    require_iters, theoretical_bound, AveragingWeights, BoundKind, BoundParams, CompositeProblem, Provenance,
    Reference, Regularizer, Schedule, ScheduleRule, SolverState, Trace, TraceOptions,
};

#[derive(Debug, Clone, PartialEq)]
pub struct ConstrainedProblem<T> {
    pub phi: Phi<T>,
    /// `u ↦ A u`, from the primal space `R^n` into `R^p`.
    pub map: LinearMap<T>,
    pub rhs: Vec<T>,
    pub cone: SetSpec<T>,
    pub set: SetSpec<T>,
    pub center: Option<Vec<T>>,
    pub diameter: T,
    /// Known primal optimal value and dual solution, when available.
    pub phi_star: Option<T>,
    pub x_star: Option<Vec<T>>,
}

impl<T: Scalar> ConstrainedProblem<T> {
    pub fn new(
        phi: Phi<T>,
        map: LinearMap<T>,
        rhs: Vec<T>,
        cone: SetSpec<T>,
        set: SetSpec<T>,
        center: Option<Vec<T>>,
    ) -> Result<Self> {
        check_len("constraint right-hand side", map.out_dim(), rhs.len())?;
        match cone {
            SetSpec::ZeroCone | SetSpec::NonnegativeOrthant | SetSpec::Box { .. } => cone.check_dim(rhs.len())?,
            _ => {
                return Err(Error::config(
                    "constraint cone must be the zero cone, the nonnegative orthant or a box",
                ))
            }
        }
        let block = MaxBlock::new(map.clone(), phi.clone(), set.clone(), center.clone(), None)?;
        if !block.diameter.is_finite() {
            return Err(Error::config("primal set U must be bounded"));
        }
        Ok(ConstrainedProblem {
            phi,
            map,
            rhs,
            cone,
            set,
            center,
            diameter: block.diameter,
            phi_star: None,
            x_star: None,
        })
    }

    pub fn with_solution(mut self, phi_star: T, x_star: Option<Vec<T>>) -> Result<Self> {
        if let Some(x) = &x_star {
            check_len("dual solution", self.rhs.len(), x.len())?;
        }
        self.phi_star = Some(phi_star);
        self.x_star = x_star;
        Ok(self)
    }

    /// The dual `min_x max_u <x, Au> - φ(u) + s_K(x) - <b, x>`, whose optimal value is `-φ*`.
    pub fn dual(&self) -> Result<CompositeProblem<T>> {
        let block = MaxBlock::new(
            self.map.clone(),
            self.phi.clone(),
            self.set.clone(),
            self.center.clone(),
            Some(self.diameter),
        )?;
        let f = SmoothTerm::Max(MaxStructure::new(block));
        let g = Regularizer::Prox(ProxFn::support(self.cone.clone(), self.rhs.clone())?);
        let mut p = CompositeProblem::new(f, g)?;
        if let Some(ps) = self.phi_star {
            p = p.with_reference(Reference {
                value: -ps,
                x_star: self.x_star.clone(),
                provenance: Provenance::Supplied,
            })?;
        }
        Ok(p)
    }

    pub fn objective(&self, u: &[T]) -> Result<T> {
        check_len("primal point", self.map.in_dim(), u.len())?;
        Ok(self.phi.value(u))
    }

    /// `dist(b - Au, K)`
    pub fn feasibility(&self, u: &[T]) -> Result<T> {
        let r = vector::sub(&self.rhs, &self.map.apply(u)?);
        self.cone.dist(&r)
    }
}

/// Running weighted average `ū^k = (1 - ν_k) ū^{k-1} + ν_k û^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PrimalAverage<T> {
    pub u_bar: Vec<T>,
    pub weights: AveragingWeights<T>,
    /// Last weight `ν_k`.
    pub nu: T,
}

impl<T: Scalar> PrimalAverage<T> {
    pub fn new(dim: usize) -> Self {
        PrimalAverage {
            u_bar: vector::zeros(dim),
            weights: AveragingWeights::default(),
            nu: T::zero(),
        }
    }

    pub fn push(&mut self, gamma_next: T, tau: T, u: &[T]) -> T {
        let nu = self.weights.push(gamma_next, tau);
        let keep = T::one() - nu;
        self.u_bar.iter_mut().zip(u).for_each(|(a, &v)| *a = keep * *a + nu * v);
        self.nu = nu;
        nu
    }
}

/// Primal quantities of the average after dual step `k` (counted from 0).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrimalRecord<T> {
    pub k: usize,
    pub objective: T,
    /// `φ(ū^k) - φ*`, `NaN` without a known optimum.
    pub gap: T,
    pub feasibility: T,
    pub nu: T,
    /// Upper objective bound and feasibility bound, `NaN` without a known dual solution.
    pub objective_bound: T,
    pub feasibility_bound: T,
}

#[derive(Debug, Clone)]
pub struct DualRun<T> {
    pub state: SolverState<T>,
    pub trace: Trace,
    pub primal: Vec<PrimalRecord<T>>,
}

pub fn run_dual_primal<T: Scalar>(
    problem: &ConstrainedProblem<T>,
    schedule: &Schedule<T>,
    x0: Vec<T>,
    iters: usize,
    opts: &TraceOptions<T>,
) -> Result<DualRun<T>> {
    require_iters(iters)?;
    if schedule.rule != ScheduleRule::Adaptive || schedule.c_bar != T::one() {
        return Err(Error::config(
            "primal recovery needs the adaptive schedule with c_bar = 1",
        ));
    }
    let dual = problem.dual()?;
    let x_star = opts.x_star.clone().or_else(|| problem.x_star.clone());
    let f_star = opts.f_star.or(problem.phi_star.map(|v| -v));
    let mut state = SolverState::start(&dual, schedule, x0)?;
    state.average = Some(PrimalAverage::new(problem.map.in_dim()));
    let params = BoundParams {
        r0: x_star.as_ref().map(|xs| vector::dist(&state.x, xs)),
        opnorm: Some(dual.opnorm),
        diameter: Some(problem.diameter),
        gamma1: Some(schedule.gamma1),
        x0_norm: Some(vector::norm2(&state.x)),
        ..Default::default()
    };
    let mut trace = Trace::default();
    note_common(&mut trace, "dual-primal", &dual);
    trace.note("gamma1", format!("{:.16e}", schedule.gamma1.to_f64_lossy()));
    trace.note("bound_adaptive", "primal objective bound");
    trace.note("bound_nonadaptive", "primal feasibility bound");
    let recorder = Recorder::new(opts, iters);
    let mut primal = Vec::with_capacity(iters);
    for _ in 0..iters {
        let (tau, gamma) = (state.tau, state.gamma_next);
        adaptive_in_place(&dual, schedule, &mut state)?;
        let u = state.u_hat.clone().expect("dual step records its maximizer");
        let avg = state.average.as_mut().expect("average initialized above");
        let nu = avg.push(gamma, tau, &u);
        let k = state.k - 1;
        let objective = problem.objective(&avg.u_bar)?;
        let feasibility = problem.feasibility(&avg.u_bar)?;
        let objective_bound = theoretical_bound(BoundKind::DualObjective, &params, k)?;
        let feasibility_bound = match params.r0 {
            Some(_) => theoretical_bound(BoundKind::DualFeasibility, &params, k)?,
            None => T::nan(),
        };
        primal.push(PrimalRecord {
            k,
            objective,
            gap: problem.phi_star.map_or(T::nan(), |ps| objective - ps),
            feasibility,
            nu,
            objective_bound,
            feasibility_bound,
        });
        if recorder.wants(state.k) {
            let (mut row, _) = base_row(&dual, state.k, &state.x, gamma, f_star)?;
            row.feasibility = feasibility.to_f64_lossy();
            row.bound_adaptive = objective_bound.to_f64_lossy();
            row.bound_nonadaptive = feasibility_bound.to_f64_lossy();
            row.elapsed_ns = recorder.elapsed_ns();
            trace.rows.push(row);
        }
    }
    Ok(DualRun { state, trace, primal })
}
