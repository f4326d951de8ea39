//! Smoothness-parameter schedules.
//!
//! The formula helpers are generic over any `num_traits::Num` so the schedule
//! identities can be checked exactly in rational arithmetic as well as in floats.

use num_traits::{FromPrimitive, Num};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

fn idx<N: FromPrimitive>(k: usize) -> N {
    N::from_usize(k).expect("index must convert")
}

/// `(tau_k, gamma_{k+1}) = (1 / (k + c), gamma1 c / (k + c))`
pub fn adaptive_pair<N: Num + Clone + FromPrimitive>(gamma1: N, c_bar: N, k: usize) -> (N, N) {
    let denom = idx::<N>(k) + c_bar.clone();
    let tau = N::one() / denom.clone();
    (tau, gamma1 * c_bar / denom)
}

/// Momentum weight `(k + c - 1) / (k + c + 1)` applied after producing `x^{k+1}`.
pub fn momentum<N: Num + Clone + FromPrimitive>(c_bar: N, k: usize) -> N {
    let base = idx::<N>(k) + c_bar;
    (base.clone() - N::one()) / (base + N::one())
}

/// One step of the smooth-`g` recurrence:
/// `gamma_{k+1} = k gamma_k a / (L_g gamma_k + a (k + 1))` with `a = ‖A‖²`, valid for `k >= 1`.
pub fn smooth_g_next<N: Num + Clone + FromPrimitive>(gamma_k: N, k: usize, lg: N, opnorm_sq: N) -> N {
    let kk = idx::<N>(k);
    let num = kk.clone() * gamma_k.clone() * opnorm_sq.clone();
    num / (lg * gamma_k + opnorm_sq * (kk + N::one()))
}

/// Variable-smoothing decay `1 / (c (k + 1))`.
pub fn bot_hendrich_param<N: Num + Clone + FromPrimitive>(c: N, k: usize) -> N {
    N::one() / (c * (idx::<N>(k) + N::one()))
}

/// Running weights of the primal average: pushes `gamma_{k+1} / tau_k` into
/// `Gamma_k` and returns `nu_k = gamma_{k+1} / (Gamma_k tau_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct AveragingWeights<N> {
    total: N,
}

impl<N: Num + Clone> Default for AveragingWeights<N> {
    fn default() -> Self {
        AveragingWeights { total: N::zero() }
    }
}

impl<N: Num + Clone> AveragingWeights<N> {
    pub fn push(&mut self, gamma_next: N, tau: N) -> N {
        let w = gamma_next / tau;
        self.total = self.total.clone() + w.clone();
        w / self.total.clone()
    }

    /// `Gamma_k`
    pub fn total(&self) -> N {
        self.total.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ScheduleRule<T> {
    /// `tau_k = 1/(k + c)`, `gamma_{k+1} = gamma1 c / (k + c)`.
    Adaptive,
    /// `tau_k = 1/(k+1)` with the smooth-`g` gamma recurrence; `gamma1 = ‖A‖² / L_g`.
    SmoothG {
        lg: T,
        opnorm_sq: T,
    },
    Fixed {
        gamma: T,
    },
    BotHendrich {
        c_a: T,
        c_b: T,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Schedule<T> {
    pub c_bar: T,
    pub gamma1: T,
    pub rule: ScheduleRule<T>,
}

impl<T: Scalar> Schedule<T> {
    pub fn adaptive(gamma1: T, c_bar: T) -> Result<Self> {
        if !(c_bar >= T::one()) {
            return Err(Error::arg("c_bar must be at least 1"));
        }
        if !(gamma1 > T::zero() && gamma1.is_finite()) {
            return Err(Error::arg("gamma1 must be positive"));
        }
        Ok(Schedule {
            c_bar,
            gamma1,
            rule: ScheduleRule::Adaptive,
        })
    }

    /// Smooth-`g` schedule; `gamma1` is forced to `‖A‖² / L_g`.
    pub fn smooth_g(lg: T, opnorm: T) -> Result<Self> {
        if !(lg > T::zero()) {
            return Err(Error::arg("L_g must be positive"));
        }
        if !(opnorm > T::zero()) {
            return Err(Error::arg("smooth-g schedule needs a nonzero operator norm"));
        }
        let opnorm_sq = opnorm * opnorm;
        Ok(Schedule {
            c_bar: T::one(),
            gamma1: opnorm_sq / lg,
            rule: ScheduleRule::SmoothG { lg, opnorm_sq },
        })
    }

    pub fn fixed(gamma: T) -> Result<Self> {
        if !(gamma > T::zero()) {
            return Err(Error::arg("fixed gamma must be positive"));
        }
        Ok(Schedule {
            c_bar: T::one(),
            gamma1: gamma,
            rule: ScheduleRule::Fixed { gamma },
        })
    }

    pub fn bot_hendrich(c_a: T, c_b: T) -> Result<Self> {
        if !(c_a > T::zero() && c_b > T::zero()) {
            return Err(Error::arg("c_a and c_b must be positive"));
        }
        Ok(Schedule {
            c_bar: T::one(),
            gamma1: bot_hendrich_param(c_a, 0),
            rule: ScheduleRule::BotHendrich { c_a, c_b },
        })
    }

    /// `(tau_k, gamma_{k+1})` for the adaptive rule.
    pub fn schedule_next(&self, k: usize) -> Result<(T, T)> {
        match self.rule {
            ScheduleRule::Adaptive => Ok(adaptive_pair(self.gamma1, self.c_bar, k)),
            _ => Err(Error::arg("schedule_next is defined for the adaptive rule only")),
        }
    }

    /// `gamma_k` as consumed when producing `x^k` (`k >= 1`).
    pub fn gamma_at(&self, k: usize) -> Result<T> {
        if k == 0 {
            return Err(Error::arg("gamma_k is indexed from k = 1"));
        }
        match self.rule {
            ScheduleRule::Adaptive => Ok(adaptive_pair(self.gamma1, self.c_bar, k - 1).1),
            ScheduleRule::Fixed { gamma } => Ok(gamma),
            ScheduleRule::BotHendrich { c_a, .. } => Ok(bot_hendrich_param(c_a, k)),
            ScheduleRule::SmoothG { lg, opnorm_sq } => {
                let mut g = self.gamma1;
                for i in 1..k {
                    g = smooth_g_next(g, i, lg, opnorm_sq);
                }
                Ok(g)
            }
        }
    }

    /// `gamma_0` for the adaptive rule: never used when `c_bar = 1`; set to `gamma1` otherwise.
    pub fn gamma0(&self) -> T {
        self.gamma1
    }
}
