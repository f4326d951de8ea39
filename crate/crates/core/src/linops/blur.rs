use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Periodic (circular) 2-D convolution on a `height x width` grid.
///
/// `y[i, j] = sum_{a, b} k[a, b] * x[i - a + anchor_row, j - b + anchor_col]`
/// with indices taken modulo the grid. The adjoint is correlation with the same
/// taps, i.e. convolution with the flipped kernel.
#[derive(Debug, Clone, PartialEq)]
pub struct Blur<T> {
    taps: Vec<T>,
    kernel_rows: usize,
    kernel_cols: usize,
    anchor: (usize, usize),
    height: usize,
    width: usize,
}

impl<T: Scalar> Blur<T> {
    pub fn new(
        taps: Vec<T>,
        kernel_rows: usize,
        kernel_cols: usize,
        anchor: (usize, usize),
        height: usize,
        width: usize,
    ) -> Result<Self> {
        if kernel_rows == 0 || kernel_cols == 0 || height == 0 || width == 0 {
            return Err(Error::arg("blur kernel and image dimensions must be positive"));
        }
        if taps.len() != kernel_rows * kernel_cols {
            return Err(Error::dims("blur taps", kernel_rows * kernel_cols, taps.len()));
        }
        if taps.iter().any(|t| !t.is_finite()) {
            return Err(Error::arg("blur taps must be finite"));
        }
        if anchor.0 >= kernel_rows || anchor.1 >= kernel_cols {
            return Err(Error::arg("blur anchor outside the kernel"));
        }
        Ok(Blur {
            taps,
            kernel_rows,
            kernel_cols,
            anchor,
            height,
            width,
        })
    }

    /// Centered-anchor blur with the default 9x9 Gaussian (sigma = 2 px, unit sum).
    pub fn gaussian_default(height: usize, width: usize) -> Result<Self> {
        Self::new(gaussian_kernel(9, T::lit(2.0)), 9, 9, (4, 4), height, width)
    }

    pub fn len(&self) -> usize {
        self.height * self.width
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.height, self.width)
    }

    pub fn taps(&self) -> &[T] {
        &self.taps
    }

    pub(crate) fn convolve(&self, x: &[T]) -> Vec<T> {
        self.run(x, false)
    }

    pub(crate) fn correlate(&self, y: &[T]) -> Vec<T> {
        self.run(y, true)
    }

    fn run(&self, x: &[T], adjoint: bool) -> Vec<T> {
        let (h, w) = (self.height as isize, self.width as isize);
        let (ar, ac) = (self.anchor.0 as isize, self.anchor.1 as isize);
        let mut out = vec![T::zero(); self.len()];
        for a in 0..self.kernel_rows {
            for b in 0..self.kernel_cols {
                let k = self.taps[a * self.kernel_cols + b];
                if k == T::zero() {
                    continue;
                }
                let (mut di, mut dj) = (ar - a as isize, ac - b as isize);
                if adjoint {
                    di = -di;
                    dj = -dj;
                }
                for i in 0..h {
                    let src_row = ((i + di).rem_euclid(h) * w) as usize;
                    let dst_row = (i * w) as usize;
                    for j in 0..w {
                        let sj = (j + dj).rem_euclid(w) as usize;
                        out[dst_row + j as usize] = out[dst_row + j as usize] + k * x[src_row + sj];
                    }
                }
            }
        }
        out
    }
}

/// Square truncated Gaussian with the given standard deviation, normalized to sum 1.
pub fn gaussian_kernel<T: Scalar>(size: usize, sigma: T) -> Vec<T> {
    let c = T::from_index(size.saturating_sub(1)) / T::lit(2.0);
    let two_s2 = T::lit(2.0) * sigma * sigma;
    let mut taps = Vec::with_capacity(size * size);
    for a in 0..size {
        for b in 0..size {
            let (da, db) = (T::from_index(a) - c, T::from_index(b) - c);
            taps.push((-(da * da + db * db) / two_s2).exp());
        }
    }
    let total: T = taps.iter().copied().sum();
    taps.into_iter().map(|t| t / total).collect()
}
