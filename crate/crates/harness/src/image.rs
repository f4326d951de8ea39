//! Synthetic test images and PSNR scoring.

use crate::error::{HarnessError, Result};

/// Reported PSNR for identical images, where the MSE is zero.
pub const PSNR_CAP_DB: f64 = 200.0;

/// Checkerboard of 8-pixel cells over a diagonal gradient, with values in `[0.15, 0.95]`.
pub fn synthetic_image(height: usize, width: usize) -> Vec<f64> {
    let span = (height + width).saturating_sub(2).max(1) as f64;
    let mut pixels = Vec::with_capacity(height * width);
    for i in 0..height {
        for j in 0..width {
            let checker = ((i / 8 + j / 8) % 2) as f64;
            pixels.push(0.15 + 0.5 * checker + 0.3 * (i + j) as f64 / span);
        }
    }
    pixels
}

pub fn clamp_unit(x: &[f64]) -> Vec<f64> {
    x.iter().map(|v| v.clamp(0.0, 1.0)).collect()
}

/// `10 log10(1 / MSE)` for images with values in `[0, 1]`, capped at [`PSNR_CAP_DB`].
pub fn psnr(x: &[f64], reference: &[f64]) -> Result<f64> {
    if x.len() != reference.len() {
        return Err(HarnessError::config(format!(
            "PSNR needs equal image sizes, got {} and {} pixels",
            x.len(),
            reference.len()
        )));
    }
    if x.is_empty() {
        return Err(HarnessError::config("PSNR of an empty image"));
    }
    if x.iter().chain(reference).any(|v| !(0.0..=1.0).contains(v)) {
        return Err(HarnessError::config("PSNR expects pixel values in [0, 1]"));
    }
    let mse = x.iter().zip(reference).map(|(a, b)| (a - b) * (a - b)).sum::<f64>() / x.len() as f64;
    if mse == 0.0 {
        return Ok(PSNR_CAP_DB);
    }
    Ok((10.0 * (1.0 / mse).log10()).min(PSNR_CAP_DB))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn psnr_examples() {
        let a = vec![0.25; 16];
        assert_eq!(psnr(&a, &a).unwrap(), PSNR_CAP_DB);
        assert_eq!(psnr(&[0.0; 4], &[1.0; 4]).unwrap(), 0.0);
        let b: Vec<f64> = a.iter().map(|v| v + 0.1).collect();
        assert!((psnr(&b, &a).unwrap() - 20.0).abs() < 1e-9);
    }

    #[test]
    fn psnr_rejects_bad_input() {
        assert!(matches!(psnr(&[0.0; 3], &[0.0; 4]), Err(HarnessError::Config(_))));
        assert!(psnr(&[1.5], &[0.5]).is_err());
        assert!(psnr(&[], &[]).is_err());
    }

    #[test]
    fn synthetic_image_range() {
        let img = synthetic_image(64, 64);
        assert_eq!(img.len(), 4096);
        assert!(img.iter().all(|v| (0.15..=0.95).contains(v)));
        assert_eq!(img[0], 0.15);
    }
}
