//! Smoothing oracle for max-structure functions
//!
//! ```text
//! f(x)       = max_{u in U} { <A^T x, u> - phi(u) }
//! f_gamma(x) = max_{u in U} { <A^T x, u> - phi(u) - gamma * b_U(u) },   b_U(u) = ½‖u - center‖²
//! ```
//!
//! With `phi(u) = <c, u> + mu ‖u‖₁` the maximizer is a shrink followed by a
//! projection onto `U`, which is exact when `U` is separable or an origin-centered
//! Euclidean ball. `grad f_gamma(x) = A u*`. The prox-function is quadratic, so its
//! gradient is 1-Lipschitz.

use crate::error::{check_len, Error, Result};
use crate::linops::LinearMap;
use crate::prox::{shrink, ProxFn, SetSpec};
use crate::scalar::Scalar;
use crate::vector;

/// `phi(u) = <linear, u> + l1_weight * ‖u‖₁`
#[derive(Debug, Clone, PartialEq)]
pub struct Phi<T> {
    pub linear: Option<Vec<T>>,
    pub l1_weight: T,
}

impl<T: Scalar> Phi<T> {
    pub fn zero() -> Self {
        Phi {
            linear: None,
            l1_weight: T::zero(),
        }
    }

    pub fn linear(c: Vec<T>) -> Self {
        Phi {
            linear: Some(c),
            l1_weight: T::zero(),
        }
    }

    pub fn l1(weight: T) -> Self {
        Phi {
            linear: None,
            l1_weight: weight,
        }
    }

    pub fn value(&self, u: &[T]) -> T {
        let lin = self.linear.as_ref().map_or(T::zero(), |c| vector::dot(c, u));
        lin + self.l1_weight * vector::norm1(u)
    }
}

/// One `(A_i, phi_i, U_i)` triple together with its prox-center and prox-diameter.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxBlock<T> {
    /// `u ↦ A u`, mapping the dual block into the primal space.
    pub map: LinearMap<T>,
    pub phi: Phi<T>,
    pub set: SetSpec<T>,
    /// Prox-center; `None` is the origin.
    pub center: Option<Vec<T>>,
    /// `D_U = sup_{u in U} b_U(u)`.
    pub diameter: T,
}

impl<T: Scalar> MaxBlock<T> {
    /// Validates the triple; `diameter` is computed from the set when not supplied.
    pub fn new(
        map: LinearMap<T>,
        phi: Phi<T>,
        set: SetSpec<T>,
        center: Option<Vec<T>>,
        diameter: Option<T>,
    ) -> Result<Self> {
        let n = map.in_dim();
        if let Some(c) = &phi.linear {
            check_len("phi linear term", n, c.len())?;
        }
        if !(phi.l1_weight >= T::zero()) {
            return Err(Error::arg("phi l1 weight must be nonnegative"));
        }
        set.check_dim(n)?;
        if let Some(c) = &center {
            check_len("prox center", n, c.len())?;
            let tol = T::epsilon().sqrt() * (T::one() + vector::norm2(c));
            if !set.contains(c, tol)? {
                return Err(Error::config("prox center must lie in U"));
            }
        } else if !set.contains(&vector::zeros(n), T::zero())? {
            return Err(Error::config("prox center (origin) must lie in U"));
        }
        if phi.l1_weight > T::zero() {
            if let SetSpec::L2Ball { center: Some(c), .. } = &set {
                if c.iter().any(|&v| v != T::zero()) {
                    return Err(Error::unsupported(
                        "phi with an l1 term over an off-center Euclidean ball has no closed-form maximizer",
                    ));
                }
            }
        }
        let diameter = match diameter {
            Some(d) if d >= T::zero() => d,
            Some(_) => return Err(Error::arg("prox-diameter must be nonnegative")),
            None => set.half_sq_diameter_from(center.as_deref(), n),
        };
        Ok(MaxBlock {
            map,
            phi,
            set,
            center,
            diameter,
        })
    }

    pub fn dual_dim(&self) -> usize {
        self.map.in_dim()
    }

    pub fn prox_fn_value(&self, u: &[T]) -> T {
        let d = match &self.center {
            Some(c) => vector::norm2_sq(&vector::sub(u, c)),
            None => vector::norm2_sq(u),
        };
        T::lit(0.5) * d
    }

    /// Maximizer of `<z, u> - phi(u) - gamma b_U(u)` over `U`.
    pub fn maximizer(&self, gamma: T, z: &[T]) -> Vec<T> {
        let inv = T::one() / gamma;
        let mut w: Vec<T> = match &self.phi.linear {
            Some(c) => z.iter().zip(c).map(|(&zi, &ci)| (zi - ci) * inv).collect(),
            None => vector::scale(z, inv),
        };
        if let Some(c) = &self.center {
            w.iter_mut().zip(c).for_each(|(wi, &ci)| *wi = *wi + ci);
        }
        if self.phi.l1_weight > T::zero() {
            w = shrink(&w, self.phi.l1_weight * inv);
        }
        self.set.project_unchecked(&w)
    }

    /// `max_{u in U} <z, u> - phi(u)`, possibly `+inf`.
    pub fn support_value(&self, z: &[T]) -> T {
        let w: Vec<T> = match &self.phi.linear {
            Some(c) => vector::sub(z, c),
            None => z.to_vec(),
        };
        let mu = self.phi.l1_weight;
        match &self.set {
            SetSpec::L2Ball { center, radius } => {
                if mu > T::zero() {
                    *radius * vector::norm2(&shrink(&w, mu))
                } else {
                    center.as_ref().map_or(T::zero(), |c| vector::dot(c, &w)) + *radius * vector::norm2(&w)
                }
            }
            set => w
                .iter()
                .enumerate()
                .map(|(i, &wi)| {
                    let (lo, hi) = set.coord_bounds(i);
                    coord_max(wi, mu, lo, hi)
                })
                .sum(),
        }
    }
}

/// `max_{u in [lo, hi]} w u - mu |u|`
fn coord_max<T: Scalar>(w: T, mu: T, lo: T, hi: T) -> T {
    if (hi == T::infinity() && w - mu > T::zero()) || (lo == T::neg_infinity() && w + mu < T::zero()) {
        return T::infinity();
    }
    let eval = |u: T| w * u - mu * u.abs();
    let mut best = T::neg_infinity();
    for u in [lo, hi] {
        if u.is_finite() {
            best = best.max(eval(u));
        }
    }
    if lo <= T::zero() && T::zero() <= hi {
        best = best.max(T::zero());
    }
    best
}

/// Smoothed-function evaluation at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothEval<T> {
    pub value: T,
    pub u_star: Vec<T>,
    pub grad: Vec<T>,
    pub gamma: T,
}

/// A (possibly decomposable) max-structure `f(x) = sum_i max_{u_i in U_i} { <x, A_i u_i> - phi_i(u_i) }`.
#[derive(Debug, Clone, PartialEq)]
pub struct MaxStructure<T> {
    blocks: Vec<MaxBlock<T>>,
    map: LinearMap<T>,
}

impl<T: Scalar> MaxStructure<T> {
    pub fn new(block: MaxBlock<T>) -> Self {
        let map = block.map.clone();
        MaxStructure {
            blocks: vec![block],
            map,
        }
    }

    pub fn decomposable(blocks: Vec<MaxBlock<T>>) -> Result<Self> {
        let map = LinearMap::block_row(blocks.iter().map(|b| b.map.clone()).collect())?;
        Ok(MaxStructure { blocks, map })
    }

    pub fn blocks(&self) -> &[MaxBlock<T>] {
        &self.blocks
    }

    /// The full map `u ↦ A u = sum_i A_i u_i`.
    pub fn map(&self) -> &LinearMap<T> {
        &self.map
    }

    /// Primal dimension `p`.
    pub fn dim(&self) -> usize {
        self.map.out_dim()
    }

    /// Dual dimension `n = sum_i n_i`.
    pub fn dual_dim(&self) -> usize {
        self.map.in_dim()
    }

    pub fn prox_diameter(&self) -> T {
        self.blocks.iter().map(|b| b.diameter).sum()
    }

    /// Lipschitz constant of the prox-function gradient.
    pub fn lb(&self) -> T {
        T::one()
    }

    pub fn prox_fn_value(&self, u: &[T]) -> Result<T> {
        check_len("prox-function argument", self.dual_dim(), u.len())?;
        let mut off = 0;
        let mut total = T::zero();
        for b in &self.blocks {
            let n = b.dual_dim();
            total = total + b.prox_fn_value(&u[off..off + n]);
            off += n;
        }
        Ok(total)
    }

    pub fn phi_value(&self, u: &[T]) -> Result<T> {
        check_len("phi argument", self.dual_dim(), u.len())?;
        let mut off = 0;
        let mut total = T::zero();
        for b in &self.blocks {
            let n = b.dual_dim();
            total = total + b.phi.value(&u[off..off + n]);
            off += n;
        }
        Ok(total)
    }

    /// Whether `u` lies in `U_1 x ... x U_m` up to `tol` (Euclidean projection residual).
    pub fn contains_dual(&self, u: &[T], tol: T) -> Result<bool> {
        check_len("dual point", self.dual_dim(), u.len())?;
        let mut off = 0;
        let mut sq = T::zero();
        for b in &self.blocks {
            let n = b.dual_dim();
            let part = &u[off..off + n];
            sq = sq + vector::norm2_sq(&vector::sub(part, &b.set.project_unchecked(part)));
            off += n;
        }
        Ok(sq.sqrt() <= tol)
    }

    pub fn smooth_eval(&self, gamma: T, x: &[T]) -> Result<SmoothEval<T>> {
        if !(gamma > T::zero()) {
            return Err(Error::arg("smoothness parameter must be positive"));
        }
        check_len("smooth_eval point", self.dim(), x.len())?;
        let mut value = T::zero();
        let mut u_star = Vec::with_capacity(self.dual_dim());
        for b in &self.blocks {
            let z = b.map.adjoint(x)?;
            let u = b.maximizer(gamma, &z);
            value = value + vector::dot(&z, &u) - b.phi.value(&u) - gamma * b.prox_fn_value(&u);
            u_star.extend(u);
        }
        let grad = self.map.apply(&u_star)?;
        Ok(SmoothEval {
            value,
            u_star,
            grad,
            gamma,
        })
    }

    /// Exact `f(x)`.
    pub fn nonsmooth_value(&self, x: &[T]) -> Result<T> {
        check_len("nonsmooth_value point", self.dim(), x.len())?;
        let mut total = T::zero();
        for b in &self.blocks {
            total = total + b.support_value(&b.map.adjoint(x)?);
        }
        Ok(total)
    }

    /// `gamma * D_U`, the uniform gap `f - f_gamma`.
    pub fn envelope_gap(&self, gamma: T) -> Result<T> {
        envelope_gap(self.prox_diameter(), gamma)
    }
}

pub fn envelope_gap<T: Scalar>(diameter: T, gamma: T) -> Result<T> {
    if !(gamma >= T::zero()) {
        return Err(Error::arg("smoothness parameter must be nonnegative"));
    }
    if !diameter.is_finite() {
        return Err(Error::unsupported("prox-diameter is infinite"));
    }
    Ok(gamma * diameter)
}

/// The nonsmooth term `f` of a composite problem, in one of two representations.
#[derive(Debug, Clone, PartialEq)]
pub enum SmoothTerm<T> {
    Max(MaxStructure<T>),
    /// `f` known through its prox; smoothed via its conjugate with `b(u) = ½‖u‖²`
    /// (so `f_gamma` is the Moreau envelope and `A` is the identity).
    Conjugate {
        f: ProxFn<T>,
        dim: usize,
        diameter: T,
    },
}

impl<T: Scalar> SmoothTerm<T> {
    pub fn dim(&self) -> usize {
        match self {
            SmoothTerm::Max(ms) => ms.dim(),
            SmoothTerm::Conjugate { dim, .. } => *dim,
        }
    }

    pub fn prox_diameter(&self) -> T {
        match self {
            SmoothTerm::Max(ms) => ms.prox_diameter(),
            SmoothTerm::Conjugate { diameter, .. } => *diameter,
        }
    }

    pub fn max_structure(&self) -> Option<&MaxStructure<T>> {
        match self {
            SmoothTerm::Max(ms) => Some(ms),
            SmoothTerm::Conjugate { .. } => None,
        }
    }

    pub fn smooth_eval(&self, gamma: T, x: &[T]) -> Result<SmoothEval<T>> {
        match self {
            SmoothTerm::Max(ms) => ms.smooth_eval(gamma, x),
            SmoothTerm::Conjugate { f, dim, .. } => {
                if !(gamma > T::zero()) {
                    return Err(Error::arg("smoothness parameter must be positive"));
                }
                check_len("smooth_eval point", *dim, x.len())?;
                let p = f.prox_of(gamma, x)?;
                let u: Vec<T> = x.iter().zip(&p).map(|(&a, &b)| (a - b) / gamma).collect();
                let value = f.value(&p)? + vector::norm2_sq(&vector::sub(x, &p)) / (T::lit(2.0) * gamma);
                Ok(SmoothEval {
                    value,
                    grad: u.clone(),
                    u_star: u,
                    gamma,
                })
            }
        }
    }

    pub fn nonsmooth_value(&self, x: &[T]) -> Result<T> {
        match self {
            SmoothTerm::Max(ms) => ms.nonsmooth_value(x),
            SmoothTerm::Conjugate { f, dim, .. } => {
                check_len("nonsmooth_value point", *dim, x.len())?;
                f.value(x)
            }
        }
    }

    /// `b_U(u)` for a maximizer produced by [`Self::smooth_eval`].
    pub fn prox_fn_value(&self, u: &[T]) -> Result<T> {
        match self {
            SmoothTerm::Max(ms) => ms.prox_fn_value(u),
            SmoothTerm::Conjugate { .. } => Ok(T::lit(0.5) * vector::norm2_sq(u)),
        }
    }
}
