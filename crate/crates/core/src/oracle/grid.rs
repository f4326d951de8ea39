//! Exhaustive 1-D grids and nested section search for low-dimensional convex objectives.

use crate::error::{check_len, Error, Result};

/// Exhaustive 1-D search on `lo, lo + step, ...` up to `hi`.
pub fn grid_minimize_1d<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, step: f64) -> Result<(f64, f64)> {
    if !(step > 0.0 && hi >= lo) {
        return Err(Error::arg("grid needs step > 0 and hi >= lo"));
    }
    let n = ((hi - lo) / step).floor() as usize;
    let mut best = (f64::INFINITY, lo);
    for i in 0..=n {
        let x = lo + i as f64 * step;
        let v = f(x);
        if v < best.0 {
            best = (v, x);
        }
    }
    Ok(best)
}

/// Golden-section search for a convex function on `[lo, hi]`, to interval width `tol`.
fn section_1d<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (lo, hi);
    let mut c = b - ratio * (b - a);
    let mut d = a + ratio * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = f(d);
        }
    }
    let mut best = if fc <= fd { (fc, c) } else { (fd, d) };
    for x in [lo, hi] {
        let v = f(x);
        if v < best.0 {
            best = (v, x);
        }
    }
    best
}

fn nested<F: Fn(&[f64]) -> f64>(f: &F, lo: &[f64], hi: &[f64], tol: f64, point: &mut Vec<f64>) -> (f64, Vec<f64>) {
    let depth = point.len();
    if depth == lo.len() {
        return (f(point), point.clone());
    }
    let mut best = (f64::INFINITY, Vec::new());
    section_1d(
        |x| {
            point.push(x);
            let (v, a) = nested(f, lo, hi, tol, point);
            point.pop();
            if best.1.is_empty() || v < best.0 {
                best = (v, a);
            }
            v
        },
        lo[depth],
        hi[depth],
        tol,
    );
    best
}

/// Minimizes a convex function of one to three variables over the box `[lo, hi]`
/// by nested golden-section searches, each resolved to width `resolution`.
///
/// For convex `f` the partial minimum over trailing coordinates is convex in the
/// leading ones, so every level brackets a minimizer.
pub fn grid_minimize<F: Fn(&[f64]) -> f64>(f: F, lo: &[f64], hi: &[f64], resolution: f64) -> Result<(f64, Vec<f64>)> {
    let d = lo.len();
    check_len("search box", d, hi.len())?;
    if d == 0 || d > 3 {
        return Err(Error::unsupported("box search is limited to 1 to 3 variables"));
    }
    if !(resolution > 0.0) || lo.iter().zip(hi).any(|(l, h)| !(l <= h)) {
        return Err(Error::arg("search needs resolution > 0 and lo <= hi"));
    }
    let mut point = Vec::with_capacity(d);
    let (_, x) = nested(&f, lo, hi, resolution, &mut point);
    Ok((f(&x), x))
}
