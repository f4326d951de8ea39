//! Dense vector helpers over slices.

use crate::scalar::Scalar;

pub fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

pub fn norm2<T: Scalar>(a: &[T]) -> T {
    dot(a, a).sqrt()
}

pub fn norm2_sq<T: Scalar>(a: &[T]) -> T {
    dot(a, a)
}

pub fn norm1<T: Scalar>(a: &[T]) -> T {
    a.iter().map(|v| v.abs()).sum()
}

pub fn norm_inf<T: Scalar>(a: &[T]) -> T {
    a.iter().fold(T::zero(), |m, v| m.max(v.abs()))
}

pub fn sub<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x - y).collect()
}

pub fn add<T: Scalar>(a: &[T], b: &[T]) -> Vec<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + y).collect()
}

pub fn scale<T: Scalar>(a: &[T], s: T) -> Vec<T> {
    a.iter().map(|&x| x * s).collect()
}

/// `a + s * b`
pub fn axpy<T: Scalar>(a: &[T], s: T, b: &[T]) -> Vec<T> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x + s * y).collect()
}

pub fn dist<T: Scalar>(a: &[T], b: &[T]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt()
}

pub fn zeros<T: Scalar>(n: usize) -> Vec<T> {
    vec![T::zero(); n]
}

pub fn cast<T: Scalar>(a: &[f64]) -> Vec<T> {
    a.iter().map(|&v| T::lit(v)).collect()
}

pub fn to_f64<T: Scalar>(a: &[T]) -> Vec<f64> {
    a.iter().map(|v| v.to_f64_lossy()).collect()
}
