//! Closed-form proximal operators, Euclidean projections and the Moreau bridge
//! between a function's prox and its conjugate's prox.

mod sets;

pub use sets::SetSpec;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{check_len, Error, Result};
use crate::linops::LinearMap;
use crate::scalar::Scalar;
use crate::vector;

/// Componentwise `sign(x_i) * max(|x_i| - t, 0)`.
pub fn soft_threshold<T: Scalar>(x: &[T], t: T) -> Result<Vec<T>> {
    if !(t >= T::zero()) {
        return Err(Error::arg("soft-threshold level must be nonnegative"));
    }
    Ok(shrink(x, t))
}

pub(crate) fn shrink<T: Scalar>(x: &[T], t: T) -> Vec<T> {
    x.iter()
        .map(|&v| {
            let m = v.abs() - t;
            if m > T::zero() {
                m.copysign(v)
            } else {
                T::zero()
            }
        })
        .collect()
}

/// Proper closed convex functions whose prox has a closed form.
#[derive(Debug, Clone, PartialEq)]
pub enum ProxFn<T> {
    Zero,
    /// `weight * ‖x - shift‖₁`
    L1 {
        weight: T,
        shift: Option<Vec<T>>,
    },
    /// `weight * ‖W x‖₁` for an orthogonal `W`.
    L1Orthogonal {
        map: LinearMap<T>,
        weight: T,
    },
    Indicator(SetSpec<T>),
    /// `s_K(x) - <shift, x>`, the support function of `K` tilted by a linear term.
    Support {
        set: SetSpec<T>,
        shift: Vec<T>,
    },
    /// `½‖x - center‖²`
    QuadraticDistance {
        center: Vec<T>,
    },
}

impl<T: Scalar> ProxFn<T> {
    pub fn l1(weight: T) -> Result<Self> {
        check_weight(weight)?;
        Ok(ProxFn::L1 { weight, shift: None })
    }

    pub fn l1_shifted(weight: T, shift: Vec<T>) -> Result<Self> {
        check_weight(weight)?;
        Ok(ProxFn::L1 {
            weight,
            shift: Some(shift),
        })
    }

    /// Rejects `W` unless `WᵀW x = x` on a handful of seeded random probes.
    pub fn l1_orthogonal(map: LinearMap<T>, weight: T) -> Result<Self> {
        check_weight(weight)?;
        let n = map.in_dim();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0b7a);
        let probes: Vec<Vec<T>> = (0..3)
            .map(|_| (0..n).map(|_| T::lit(rng.gen_range(-1.0..1.0))).collect())
            .collect();
        let tol = T::epsilon().sqrt() * T::lit(10.0);
        if !map.is_orthogonal_on(&probes, tol) {
            return Err(Error::config(
                "l1-after-orthogonal requires an orthogonal map (round-trip check failed)",
            ));
        }
        Ok(ProxFn::L1Orthogonal { map, weight })
    }

    pub fn support(set: SetSpec<T>, shift: Vec<T>) -> Result<Self> {
        set.check_dim(shift.len())?;
        Ok(ProxFn::Support { set, shift })
    }

    /// Expected argument dimension when the function's data fixes one.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            ProxFn::L1 { shift: Some(s), .. } => Some(s.len()),
            ProxFn::L1Orthogonal { map, .. } => Some(map.in_dim()),
            ProxFn::Indicator(set) => set.fixed_dim(),
            ProxFn::Support { shift, .. } => Some(shift.len()),
            ProxFn::QuadraticDistance { center } => Some(center.len()),
            _ => None,
        }
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) => check_len("prox argument", d, n),
            None => Ok(()),
        }
    }

    pub fn value(&self, x: &[T]) -> Result<T> {
        self.check_dim(x.len())?;
        Ok(match self {
            ProxFn::Zero => T::zero(),
            ProxFn::L1 { weight, shift } => {
                *weight
                    * match shift {
                        Some(s) => x.iter().zip(s).map(|(&a, &b)| (a - b).abs()).sum(),
                        None => vector::norm1(x),
                    }
            }
            ProxFn::L1Orthogonal { map, weight } => *weight * vector::norm1(&map.apply(x)?),
            ProxFn::Indicator(set) => {
                let tol = T::epsilon().sqrt() * (T::one() + vector::norm2(x));
                if set.contains(x, tol)? {
                    T::zero()
                } else {
                    T::infinity()
                }
            }
            ProxFn::Support { set, shift } => set.support(x)? - vector::dot(shift, x),
            ProxFn::QuadraticDistance { center } => T::lit(0.5) * vector::norm2_sq(&vector::sub(x, center)),
        })
    }

    /// `argmin_y g(y) + ‖y - x‖² / (2 beta)`.
    pub fn prox_of(&self, beta: T, x: &[T]) -> Result<Vec<T>> {
        if !(beta > T::zero()) {
            return Err(Error::arg("prox step must be positive"));
        }
        self.check_dim(x.len())?;
        Ok(match self {
            ProxFn::Zero => x.to_vec(),
            ProxFn::L1 { weight, shift: None } => shrink(x, beta * *weight),
            ProxFn::L1 { weight, shift: Some(s) } => {
                let d = shrink(&vector::sub(x, s), beta * *weight);
                vector::add(s, &d)
            }
            ProxFn::L1Orthogonal { map, weight } => map.adjoint(&shrink(&map.apply(x)?, beta * *weight))?,
            ProxFn::Indicator(set) => set.project_unchecked(x),
            ProxFn::Support { set, shift } => {
                // prox_{beta s_K}(v) = v - beta proj_K(v / beta), v = x + beta b
                let v = vector::axpy(x, beta, shift);
                let p = set.project_unchecked(&vector::scale(&v, T::one() / beta));
                vector::axpy(&v, -beta, &p)
            }
            ProxFn::QuadraticDistance { center } => {
                let s = T::one() / (T::one() + beta);
                x.iter().zip(center).map(|(&xi, &ci)| (xi + beta * ci) * s).collect()
            }
        })
    }

    /// `prox_{f*/gamma}(v)` through the Moreau decomposition.
    pub fn prox_conjugate(&self, gamma: T, v: &[T]) -> Result<Vec<T>> {
        moreau_conjugate_prox(|t, w| self.prox_of(t, w), gamma, v)
    }
}

/// `prox_{γ⁻¹ f*}(v) = γ⁻¹(γ v - prox_{γ f}(γ v))` given any evaluator of `(t, w) ↦ prox_{t f}(w)`.
pub fn moreau_conjugate_prox<T, F>(prox_f: F, gamma: T, v: &[T]) -> Result<Vec<T>>
where
    T: Scalar,
    F: Fn(T, &[T]) -> Result<Vec<T>>,
{
    if !(gamma > T::zero()) {
        return Err(Error::arg("Moreau parameter must be positive"));
    }
    let gv = vector::scale(v, gamma);
    let p = prox_f(gamma, &gv)?;
    Ok(gv.iter().zip(&p).map(|(&a, &b)| (a - b) / gamma).collect())
}

fn check_weight<T: Scalar>(w: T) -> Result<()> {
    if w >= T::zero() && w.is_finite() {
        Ok(())
    } else {
        Err(Error::arg("norm weight must be finite and nonnegative"))
    }
}
