use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// `rho(lambda) = A sinc(b (lambda - 1/2))^{2K}` with `b = epsilon / (2K)`.
///
/// `rho_hat` is `2K`-fold convolution of boxes of half-width `b`, hence
/// supported in `[-epsilon, epsilon]`; `A` makes `rho(0) = rho(1) = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralWindow {
    pub epsilon: f64,
    /// Half the decay order `2K`.
    pub k: u32,
    pub amplitude: f64,
}

fn sinc(s: f64) -> f64 {
    if s.abs() < 1e-5 {
        1.0 - s * s / 6.0
    } else {
        s.sin() / s
    }
}

/// Centered cardinal B-spline of order `n` (unit-width boxes convolved `n`
/// times), by the Cox-de Boor recursion.
pub(crate) fn centered_bspline(n: u32, x: f64) -> f64 {
    let y = x + 0.5 * n as f64;
    if y <= 0.0 || y >= n as f64 {
        return 0.0;
    }
    let n = n as usize;
    let mut vals: Vec<f64> = (0..n).map(|j| if (y - j as f64) >= 0.0 && (y - j as f64) < 1.0 { 1.0 } else { 0.0 }).collect();
    for k in 2..=n {
        for j in 0..=(n - k) {
            let t = y - j as f64;
            vals[j] = (t * vals[j] + (k as f64 - t) * vals[j + 1]) / (k - 1) as f64;
        }
    }
    vals[0]
}

impl SpectralWindow {
    pub fn new(epsilon: f64, k: u32) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return invalid(format!("epsilon must be positive and finite, got {epsilon}"));
        }
        if k < 2 {
            return invalid(format!("K must be at least 2, got {k}"));
        }
        let s0 = epsilon / (4.0 * k as f64);
        Ok(Self { epsilon, k, amplitude: sinc(s0).powi(-2 * k as i32) })
    }

    fn b(&self) -> f64 {
        self.epsilon / (2.0 * self.k as f64)
    }

    pub fn decay_order(&self) -> u32 {
        2 * self.k
    }

    pub fn rho(&self, lambda: f64) -> f64 {
        self.amplitude * sinc(self.b() * (lambda - 0.5)).powi(self.decay_order() as i32)
    }

    /// `rho_hat(t) = int rho(lambda) e^{-i t lambda} d lambda`.
    pub fn rho_hat(&self, t: f64) -> Complex64 {
        let b = self.b();
        let mag = self.amplitude * PI / b * centered_bspline(self.decay_order(), t / (2.0 * b));
        Complex64::from_polar(mag, -0.5 * t)
    }

    /// `int rho = rho_hat(0)`.
    pub fn integral(&self) -> f64 {
        self.rho_hat(0.0).re
    }

    /// `A (2K / (epsilon |lambda - 1/2|))^{2K}`, an upper bound for `rho`.
    pub fn tail_bound(&self, lambda: f64) -> f64 {
        let d = (lambda - 0.5).abs();
        if d == 0.0 {
            return f64::INFINITY;
        }
        self.amplitude * (1.0 / (self.b() * d)).powi(self.decay_order() as i32)
    }
}

/// Free-function constructor.
pub fn make_window(epsilon: f64, k: u32) -> Result<SpectralWindow> {
    SpectralWindow::new(epsilon, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn normalization() {
        for (e, k) in [(1.0, 2), (1.0, 6), (0.3, 4), (2.5, 9)] {
            let w = SpectralWindow::new(e, k).unwrap();
            assert_abs_diff_eq!(w.rho(0.0), 1.0, epsilon = 1e-14);
            assert_abs_diff_eq!(w.rho(1.0), 1.0, epsilon = 1e-14);
            assert_eq!(w.rho(0.5), w.amplitude);
            assert!(w.amplitude >= 1.0);
            for i in 0..=100 {
                assert!(w.rho(i as f64 / 100.0) >= 1.0 - 1e-14);
            }
        }
        assert!(SpectralWindow::new(0.0, 3).is_err());
        assert!(SpectralWindow::new(1.0, 1).is_err());
    }

    #[test]
    fn bspline_is_a_density() {
        for n in [1, 2, 4, 12] {
            let h = 1e-3;
            let total: f64 = (-8000..8000).map(|i| centered_bspline(n, (i as f64 + 0.5) * h) * h).sum();
            assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
        }
        assert_abs_diff_eq!(centered_bspline(2, 0.0), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(centered_bspline(4, 0.0), 2.0 / 3.0, epsilon = 1e-15);
        assert_eq!(centered_bspline(4, 2.0), 0.0);
    }

    /// Riemann sum of the Fourier integral; exact for band-limited `rho` up to
    /// aliasing at multiples of `2 pi / h` and truncation of the tails.
    fn sampled_transform(w: &SpectralWindow, t: f64) -> Complex64 {
        let h = 0.25;
        let n = 40_000;
        (-n..=n)
            .map(|i| {
                let l = 0.5 + i as f64 * h;
                Complex64::from_polar(w.rho(l) * h, -t * l)
            })
            .sum()
    }

    #[test]
    fn transform_matches_sampling_oracle() {
        let w = SpectralWindow::new(1.0, 4).unwrap();
        let scale = w.integral();
        for t in [-0.9, -0.3, 0.0, 0.45, 0.99] {
            let diff = (sampled_transform(&w, t) - w.rho_hat(t)).norm();
            assert!(diff < 1e-8 * scale, "t = {t}: {diff}");
        }
        for t in [-3.0, -1.5, -1.05, 1.02, 1.3, 2.0, 4.0] {
            assert_eq!(w.rho_hat(t).norm(), 0.0);
            assert!(sampled_transform(&w, t).norm() < 1e-8 * scale, "t = {t}");
        }
    }

    #[test]
    fn tail_bound_dominates() {
        let w = SpectralWindow::new(1.0, 6).unwrap();
        for i in 0..2000 {
            let l = 0.5 + 12.0 + i as f64 * 0.37;
            assert!(w.rho(l) <= w.tail_bound(l));
            assert!(w.rho(1.0 - l) <= w.tail_bound(1.0 - l));
        }
    }
}
