//! Linear operators with forward/adjoint application and spectral-norm estimation.

mod blur;
mod haar;

pub use blur::{gaussian_kernel, Blur};
pub use haar::{haar_forward, haar_inverse};

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;
use crate::vector;

/// A linear map `R^in_dim -> R^out_dim`.
///
/// Operator data is immutable once built; `apply` and `adjoint` are pure.
#[derive(Debug, Clone, PartialEq)]
pub enum LinearMap<T> {
    Identity {
        dim: usize,
    },
    /// Row-major `rows x cols` matrix.
    Dense {
        rows: usize,
        cols: usize,
        data: Vec<T>,
    },
    /// Periodic 2-D convolution on a fixed image grid.
    Blur(Blur<T>),
    /// Orthonormal multilevel 2-D Haar analysis on a `height x width` grid.
    Haar {
        height: usize,
        width: usize,
        levels: usize,
    },
    /// `outer ∘ inner`
    Compose {
        outer: Box<LinearMap<T>>,
        inner: Box<LinearMap<T>>,
    },
    /// `[A_1 ... A_m]`: the input is split into blocks and the images are summed.
    BlockRow(Vec<LinearMap<T>>),
    /// The transpose of the wrapped map.
    Adjoint(Box<LinearMap<T>>),
}

impl<T: Scalar> LinearMap<T> {
    pub fn identity(dim: usize) -> Self {
        LinearMap::Identity { dim }
    }

    pub fn dense(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::arg("dense map needs positive dimensions"));
        }
        check_len("dense map data", rows * cols, data.len())?;
        Ok(LinearMap::Dense { rows, cols, data })
    }

    /// Builds a dense map from nested rows.
    pub fn from_rows(rows: &[Vec<T>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            check_len("dense map row", cols, r.len())?;
            data.extend_from_slice(r);
        }
        Self::dense(rows.len(), cols, data)
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearMap::Dense {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn haar(height: usize, width: usize, levels: usize) -> Result<Self> {
        haar::check_dims(height, width, levels)?;
        Ok(LinearMap::Haar { height, width, levels })
    }

    /// `outer ∘ inner`; fails unless `inner.out_dim() == outer.in_dim()`.
    pub fn compose(outer: LinearMap<T>, inner: LinearMap<T>) -> Result<Self> {
        check_len("composition", outer.in_dim(), inner.out_dim())?;
        Ok(LinearMap::Compose {
            outer: Box::new(outer),
            inner: Box::new(inner),
        })
    }

    pub fn block_row(blocks: Vec<LinearMap<T>>) -> Result<Self> {
        let out = blocks
            .first()
            .ok_or_else(|| Error::arg("block concatenation needs at least one block"))?
            .out_dim();
        for b in &blocks {
            check_len("block concatenation", out, b.out_dim())?;
        }
        Ok(LinearMap::BlockRow(blocks))
    }

    pub fn transpose(self) -> Self {
        match self {
            LinearMap::Adjoint(inner) => *inner,
            LinearMap::Identity { dim } => LinearMap::Identity { dim },
            other => LinearMap::Adjoint(Box::new(other)),
        }
    }

    pub fn in_dim(&self) -> usize {
        match self {
            LinearMap::Identity { dim } => *dim,
            LinearMap::Dense { cols, .. } => *cols,
            LinearMap::Blur(b) => b.len(),
            LinearMap::Haar { height, width, .. } => height * width,
            LinearMap::Compose { inner, .. } => inner.in_dim(),
            LinearMap::BlockRow(blocks) => blocks.iter().map(LinearMap::in_dim).sum(),
            LinearMap::Adjoint(m) => m.out_dim(),
        }
    }

    pub fn out_dim(&self) -> usize {
        match self {
            LinearMap::Identity { dim } => *dim,
            LinearMap::Dense { rows, .. } => *rows,
            LinearMap::Blur(b) => b.len(),
            LinearMap::Haar { height, width, .. } => height * width,
            LinearMap::Compose { outer, .. } => outer.out_dim(),
            LinearMap::BlockRow(blocks) => blocks.first().map_or(0, LinearMap::out_dim),
            LinearMap::Adjoint(m) => m.in_dim(),
        }
    }

    pub fn apply(&self, x: &[T]) -> Result<Vec<T>> {
        check_len("apply", self.in_dim(), x.len())?;
        Ok(self.apply_unchecked(x))
    }

    pub fn adjoint(&self, y: &[T]) -> Result<Vec<T>> {
        check_len("adjoint", self.out_dim(), y.len())?;
        Ok(self.adjoint_unchecked(y))
    }

    fn apply_unchecked(&self, x: &[T]) -> Vec<T> {
        match self {
            LinearMap::Identity { .. } => x.to_vec(),
            LinearMap::Dense { rows, cols, data } => (0..*rows)
                .map(|i| vector::dot(&data[i * cols..(i + 1) * cols], x))
                .collect(),
            LinearMap::Blur(b) => b.convolve(x),
            LinearMap::Haar { height, width, levels } => haar::forward_unchecked(x, *height, *width, *levels),
            LinearMap::Compose { outer, inner } => outer.apply_unchecked(&inner.apply_unchecked(x)),
            LinearMap::BlockRow(blocks) => {
                let mut out = vec![T::zero(); self.out_dim()];
                let mut offset = 0;
                for b in blocks {
                    let n = b.in_dim();
                    for (o, v) in out.iter_mut().zip(b.apply_unchecked(&x[offset..offset + n])) {
                        *o = *o + v;
                    }
                    offset += n;
                }
                out
            }
            LinearMap::Adjoint(m) => m.adjoint_unchecked(x),
        }
    }

    fn adjoint_unchecked(&self, y: &[T]) -> Vec<T> {
        match self {
            LinearMap::Identity { .. } => y.to_vec(),
            LinearMap::Dense { rows, cols, data } => {
                let mut out = vec![T::zero(); *cols];
                for (i, &yi) in y.iter().enumerate().take(*rows) {
                    if yi == T::zero() {
                        continue;
                    }
                    for (o, &a) in out.iter_mut().zip(&data[i * cols..(i + 1) * cols]) {
                        *o = *o + a * yi;
                    }
                }
                out
            }
            LinearMap::Blur(b) => b.correlate(y),
            LinearMap::Haar { height, width, levels } => haar::inverse_unchecked(y, *height, *width, *levels),
            LinearMap::Compose { outer, inner } => inner.adjoint_unchecked(&outer.adjoint_unchecked(y)),
            LinearMap::BlockRow(blocks) => blocks.iter().flat_map(|b| b.adjoint_unchecked(y)).collect(),
            LinearMap::Adjoint(m) => m.apply_unchecked(y),
        }
    }

    /// Largest singular value by power iteration on `MᵀM`.
    ///
    /// Starts from the normalized all-ones vector, so the result is deterministic.
    /// Stops once successive estimates agree to `tol` relative.
    pub fn operator_norm(&self, tol: T, max_iter: usize) -> Result<T> {
        if !(tol > T::zero()) {
            return Err(Error::arg("operator_norm tolerance must be positive"));
        }
        match self {
            LinearMap::Identity { .. } | LinearMap::Haar { .. } => return Ok(T::one()),
            LinearMap::Adjoint(m) => return m.operator_norm(tol, max_iter),
            _ => {}
        }
        let n = self.in_dim();
        let start = vec![T::one() / T::from_index(n).sqrt(); n];
        let est = self.power_iterate(start, tol, max_iter)?;
        if est > T::zero() {
            return Ok(est);
        }
        // All-ones was in the kernel of MᵀM; retry once from a fixed non-symmetric vector.
        let mut alt: Vec<T> = (0..n)
            .map(|i| T::from_index(i + 1) * (T::from_index((i * 7 + 3) % 11) - T::lit(5.0)))
            .collect();
        let nrm = vector::norm2(&alt);
        if nrm == T::zero() {
            return Ok(T::zero());
        }
        alt.iter_mut().for_each(|v| *v = *v / nrm);
        self.power_iterate(alt, tol, max_iter)
    }

    fn power_iterate(&self, mut v: Vec<T>, tol: T, max_iter: usize) -> Result<T> {
        let mut prev = T::zero();
        for _ in 0..max_iter {
            let w = self.adjoint_unchecked(&self.apply_unchecked(&v));
            let lam = vector::norm2(&w);
            if lam == T::zero() {
                return Ok(T::zero());
            }
            let sigma = lam.sqrt();
            v = vector::scale(&w, T::one() / lam);
            if (sigma - prev).abs() <= tol * sigma {
                return Ok(sigma);
            }
            prev = sigma;
        }
        Err(Error::NoConvergence {
            iterations: max_iter,
            estimate: prev.to_f64_lossy(),
        })
    }

    /// True when `MᵀM p = p` holds on every probe.
    pub fn is_orthogonal_on(&self, probes: &[Vec<T>], tol: T) -> bool {
        if self.in_dim() != self.out_dim() {
            return false;
        }
        probes.iter().all(|p| {
            let back = self.adjoint_unchecked(&self.apply_unchecked(p));
            vector::dist(&back, p) <= tol * (T::one() + vector::norm2(p))
        })
    }
}
