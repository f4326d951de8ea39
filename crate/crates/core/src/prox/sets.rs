use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;
use crate::vector;

/// Closed convex sets with closed-form Euclidean projections.
///
/// A `None` center means the origin.
#[derive(Debug, Clone, PartialEq)]
pub enum SetSpec<T> {
    L2Ball { center: Option<Vec<T>>, radius: T },
    LinfBall { center: Option<Vec<T>>, radius: T },
    NonnegativeOrthant,
    ZeroCone,
    Box { lo: Vec<T>, hi: Vec<T> },
}

impl<T: Scalar> SetSpec<T> {
    pub fn l2_ball(radius: T) -> Result<Self> {
        Self::l2_ball_at(None, radius)
    }

    pub fn l2_ball_at(center: Option<Vec<T>>, radius: T) -> Result<Self> {
        check_radius(radius)?;
        Ok(SetSpec::L2Ball { center, radius })
    }

    pub fn linf_ball(radius: T) -> Result<Self> {
        Self::linf_ball_at(None, radius)
    }

    pub fn linf_ball_at(center: Option<Vec<T>>, radius: T) -> Result<Self> {
        check_radius(radius)?;
        Ok(SetSpec::LinfBall { center, radius })
    }

    pub fn boxed(lo: Vec<T>, hi: Vec<T>) -> Result<Self> {
        check_len("box bounds", lo.len(), hi.len())?;
        if lo.iter().zip(&hi).any(|(l, h)| !(l <= h)) {
            return Err(Error::arg("box requires lo <= hi componentwise"));
        }
        Ok(SetSpec::Box { lo, hi })
    }

    /// Dimension fixed by the set's own data, if any.
    pub fn fixed_dim(&self) -> Option<usize> {
        match self {
            SetSpec::L2Ball { center: Some(c), .. } | SetSpec::LinfBall { center: Some(c), .. } => Some(c.len()),
            SetSpec::Box { lo, .. } => Some(lo.len()),
            _ => None,
        }
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        match self.fixed_dim() {
            Some(d) => check_len("set dimension", d, n),
            None => Ok(()),
        }
    }

    /// True when coordinates can be projected independently.
    pub fn is_separable(&self) -> bool {
        !matches!(self, SetSpec::L2Ball { .. })
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, SetSpec::NonnegativeOrthant)
    }

    pub fn project(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_dim(v.len())?;
        Ok(self.project_unchecked(v))
    }

    pub(crate) fn project_unchecked(&self, v: &[T]) -> Vec<T> {
        match self {
            SetSpec::L2Ball { center, radius } => {
                let shifted = match center {
                    Some(c) => vector::sub(v, c),
                    None => v.to_vec(),
                };
                let nrm = vector::norm2(&shifted);
                // Points a few ulps outside the sphere count as on it, which keeps projection idempotent.
                if nrm <= *radius * (T::one() + T::lit(8.0) * T::epsilon()) {
                    return v.to_vec();
                }
                let s = *radius / nrm;
                match center {
                    Some(c) => c.iter().zip(&shifted).map(|(&ci, &d)| ci + s * d).collect(),
                    None => vector::scale(&shifted, s),
                }
            }
            SetSpec::LinfBall { center, radius } => match center {
                Some(c) => v
                    .iter()
                    .zip(c)
                    .map(|(&x, &ci)| x.max(ci - *radius).min(ci + *radius))
                    .collect(),
                None => v.iter().map(|&x| x.max(-*radius).min(*radius)).collect(),
            },
            SetSpec::NonnegativeOrthant => v.iter().map(|&x| x.max(T::zero())).collect(),
            SetSpec::ZeroCone => vec![T::zero(); v.len()],
            SetSpec::Box { lo, hi } => v
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&x, (&l, &h))| x.max(l).min(h))
                .collect(),
        }
    }

    /// Bounds `[lo_i, hi_i]` of coordinate `i` for separable sets.
    pub(crate) fn coord_bounds(&self, i: usize) -> (T, T) {
        match self {
            SetSpec::LinfBall { center, radius } => {
                let c = center.as_ref().map_or(T::zero(), |c| c[i]);
                (c - *radius, c + *radius)
            }
            SetSpec::NonnegativeOrthant => (T::zero(), T::infinity()),
            SetSpec::ZeroCone => (T::zero(), T::zero()),
            SetSpec::Box { lo, hi } => (lo[i], hi[i]),
            SetSpec::L2Ball { .. } => (T::neg_infinity(), T::infinity()),
        }
    }

    pub fn dist(&self, v: &[T]) -> Result<T> {
        Ok(vector::dist(v, &self.project(v)?))
    }

    pub fn contains(&self, v: &[T], tol: T) -> Result<bool> {
        Ok(self.dist(v)? <= tol)
    }

    /// Support function `s(x) = sup_{r in S} <x, r>`; may be `+inf` for unbounded sets.
    pub fn support(&self, x: &[T]) -> Result<T> {
        self.check_dim(x.len())?;
        Ok(match self {
            SetSpec::L2Ball { center, radius } => {
                center.as_ref().map_or(T::zero(), |c| vector::dot(c, x)) + *radius * vector::norm2(x)
            }
            SetSpec::LinfBall { center, radius } => {
                center.as_ref().map_or(T::zero(), |c| vector::dot(c, x)) + *radius * vector::norm1(x)
            }
            SetSpec::NonnegativeOrthant => {
                if x.iter().all(|&v| v <= T::zero()) {
                    T::zero()
                } else {
                    T::infinity()
                }
            }
            SetSpec::ZeroCone => T::zero(),
            SetSpec::Box { lo, hi } => x
                .iter()
                .zip(lo.iter().zip(hi))
                .map(|(&xi, (&l, &h))| (xi * l).max(xi * h))
                .sum(),
        })
    }

    /// `sup_{u in S} ½‖u - center‖²`, infinite for unbounded sets.
    pub fn half_sq_diameter_from(&self, center: Option<&[T]>, n: usize) -> T {
        let half = T::lit(0.5);
        let at = |i: usize| center.map_or(T::zero(), |c| c[i]);
        match self {
            SetSpec::L2Ball { center: c, radius } => {
                let offset = match (c, center) {
                    (None, None) => T::zero(),
                    (Some(c), None) => vector::norm2(c),
                    (None, Some(p)) => vector::norm2(p),
                    (Some(c), Some(p)) => vector::dist(c, p),
                };
                half * (offset + *radius).powi(2)
            }
            SetSpec::NonnegativeOrthant => T::infinity(),
            _ => {
                (0..n)
                    .map(|i| {
                        let (l, h) = self.coord_bounds(i);
                        let p = at(i);
                        (p - l).abs().max((h - p).abs()).powi(2)
                    })
                    .sum::<T>()
                    * half
            }
        }
    }
}

fn check_radius<T: Scalar>(radius: T) -> Result<()> {
    if radius > T::zero() && radius.is_finite() {
        Ok(())
    } else {
        Err(Error::arg("ball radius must be positive and finite"))
    }
}
