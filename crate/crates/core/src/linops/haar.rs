use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;

pub(crate) fn check_dims(height: usize, width: usize, levels: usize) -> Result<()> {
    let block = 1usize
        .checked_shl(levels as u32)
        .ok_or_else(|| Error::arg("too many Haar levels"))?;
    if height == 0 || width == 0 || !height.is_multiple_of(block) || !width.is_multiple_of(block) {
        return Err(Error::arg(format!(
            "image {height}x{width} is not divisible by 2^{levels} = {block}"
        )));
    }
    Ok(())
}

/// Orthonormal 2-D Haar analysis of a row-major `height x width` image.
///
/// Coefficients use the usual in-place pyramid layout: after level `l` the
/// approximation band occupies the top-left `(h >> l) x (w >> l)` corner.
pub fn haar_forward<T: Scalar>(x: &[T], height: usize, width: usize, levels: usize) -> Result<Vec<T>> {
    check_dims(height, width, levels)?;
    check_len("haar_forward", height * width, x.len())?;
    Ok(forward_unchecked(x, height, width, levels))
}

/// Exact inverse (and adjoint) of [`haar_forward`].
pub fn haar_inverse<T: Scalar>(c: &[T], height: usize, width: usize, levels: usize) -> Result<Vec<T>> {
    check_dims(height, width, levels)?;
    check_len("haar_inverse", height * width, c.len())?;
    Ok(inverse_unchecked(c, height, width, levels))
}

pub(crate) fn forward_unchecked<T: Scalar>(x: &[T], height: usize, width: usize, levels: usize) -> Vec<T> {
    let mut out = x.to_vec();
    let mut buf = Vec::with_capacity(height.max(width));
    for l in 0..levels {
        let (h, w) = (height >> l, width >> l);
        for i in 0..h {
            analyze(&mut out, i * width, 1, w, &mut buf);
        }
        for j in 0..w {
            analyze(&mut out, j, width, h, &mut buf);
        }
    }
    out
}

pub(crate) fn inverse_unchecked<T: Scalar>(c: &[T], height: usize, width: usize, levels: usize) -> Vec<T> {
    let mut out = c.to_vec();
    let mut buf = Vec::with_capacity(height.max(width));
    for l in (0..levels).rev() {
        let (h, w) = (height >> l, width >> l);
        for j in 0..w {
            synthesize(&mut out, j, width, h, &mut buf);
        }
        for i in 0..h {
            synthesize(&mut out, i * width, 1, w, &mut buf);
        }
    }
    out
}

/// One 1-D Haar analysis step on the strided line `data[start + t * stride]`, `t < len`.
fn analyze<T: Scalar>(data: &mut [T], start: usize, stride: usize, len: usize, buf: &mut Vec<T>) {
    let r = T::FRAC_1_SQRT_2();
    let half = len / 2;
    buf.clear();
    buf.resize(len, T::zero());
    for t in 0..half {
        let a = data[start + 2 * t * stride];
        let b = data[start + (2 * t + 1) * stride];
        buf[t] = (a + b) * r;
        buf[half + t] = (a - b) * r;
    }
    for (t, &v) in buf.iter().enumerate() {
        data[start + t * stride] = v;
    }
}

fn synthesize<T: Scalar>(data: &mut [T], start: usize, stride: usize, len: usize, buf: &mut Vec<T>) {
    let r = T::FRAC_1_SQRT_2();
    let half = len / 2;
    buf.clear();
    buf.resize(len, T::zero());
    for t in 0..half {
        let s = data[start + t * stride];
        let d = data[start + (half + t) * stride];
        buf[2 * t] = (s + d) * r;
        buf[2 * t + 1] = (s - d) * r;
    }
    for (t, &v) in buf.iter().enumerate() {
        data[start + t * stride] = v;
    }
}
