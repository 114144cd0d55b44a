use serde::{Deserialize, Serialize};

use super::bessel::{jn_pair, MAX_ORDER};
use crate::error::{ensure_finite, invalid, Error, Result};

/// `-a_1 / 2^{1/3}` where `a_1` is the first zero of the Airy function: the
/// limit of `(j_{m,1} - m) / m^{1/3}`.
pub const WHISPERING_CONSTANT: f64 = 1.855_757_081_489_239;

// Consecutive zeros of J_m or J_m' are more than 3 apart for every m >= 0.
const MARCH_STEP: f64 = 2.5;
const MAX_INDEX: u32 = 10_000;

/// Which function's zeros are sought.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroKind {
    /// Zeros of `J_m` (Dirichlet spectrum of the disk).
    Value,
    /// Positive zeros of `J_m'` (Neumann spectrum of the disk).
    Derivative,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselZero {
    pub order: u32,
    pub index: u32,
    pub location: f64,
}

/// `j_{m,k}`, the `k`-th positive zero of `J_m`.
pub fn bessel_zero(m: u32, k: u32) -> Result<BesselZero> {
    kth_zero(m, k, ZeroKind::Value)
}

/// `j'_{m,k}`, the `k`-th positive zero of `J_m'` (`x = 0` is not counted).
pub fn bessel_deriv_zero(m: u32, k: u32) -> Result<BesselZero> {
    kth_zero(m, k, ZeroKind::Derivative)
}

fn target(kind: ZeroKind, m: u32, x: f64) -> f64 {
    let (j, j1) = jn_pair(m, x);
    match kind {
        ZeroKind::Value => j,
        ZeroKind::Derivative => m as f64 / x * j - j1,
    }
}

/// Target value and its derivative, for Newton steps.
fn target_with_slope(kind: ZeroKind, m: u32, x: f64) -> (f64, f64) {
    let (j, j1) = jn_pair(m, x);
    let mf = m as f64;
    let dj = mf / x * j - j1;
    match kind {
        ZeroKind::Value => (j, dj),
        // Bessel's equation: J'' = -J'/x - (1 - m^2/x^2) J
        ZeroKind::Derivative => (dj, -dj / x - (1.0 - mf * mf / (x * x)) * j),
    }
}

/// A point below the first positive zero where the target has a known sign.
fn march_start(kind: ZeroKind, m: u32) -> f64 {
    let mf = m as f64;
    match (kind, m) {
        (_, 0) => 1.0,
        // j_{m,1} > m + 1.8557571 m^{1/3}
        (ZeroKind::Value, _) => mf + 1.855 * mf.cbrt(),
        // j'_{m,1} > sqrt(m(m+2)) > m
        (ZeroKind::Derivative, _) => mf,
    }
}

struct ZeroMarch {
    kind: ZeroKind,
    m: u32,
    x: f64,
    f: f64,
}

impl ZeroMarch {
    fn new(kind: ZeroKind, m: u32) -> Self {
        let x = march_start(kind, m);
        Self { kind, m, x, f: target(kind, m, x) }
    }

    /// Next zero strictly above the current position, or `None` once past `limit`.
    fn next_zero(&mut self, limit: f64) -> Option<f64> {
        loop {
            if self.x > limit {
                return None;
            }
            let b = self.x + MARCH_STEP;
            let fb = target(self.kind, self.m, b);
            let (a, fa) = (self.x, self.f);
            self.x = b;
            self.f = fb;
            if fb == 0.0 {
                self.x = b + 1e-9 * b;
                self.f = target(self.kind, self.m, self.x);
                return (b <= limit).then_some(b);
            }
            if fa.signum() != fb.signum() {
                let z = refine(self.kind, self.m, a, b, fa);
                if z > limit {
                    return None;
                }
                return Some(z);
            }
        }
    }
}

/// Safeguarded Newton iteration on a sign-change bracket.
fn refine(kind: ZeroKind, m: u32, mut a: f64, mut b: f64, fa: f64) -> f64 {
    let sa = fa.signum();
    let mut x = 0.5 * (a + b);
    for _ in 0..200 {
        let (f, df) = target_with_slope(kind, m, x);
        if f == 0.0 {
            return x;
        }
        if f.signum() == sa {
            a = x;
        } else {
            b = x;
        }
        let newton = x - f / df;
        let next = if df != 0.0 && newton > a && newton < b { newton } else { 0.5 * (a + b) };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x || b - a <= 4.0 * f64::EPSILON * x {
            return next;
        }
        x = next;
    }
    x
}

fn kth_zero(m: u32, k: u32, kind: ZeroKind) -> Result<BesselZero> {
    if m > MAX_ORDER {
        return invalid(format!("order {m} exceeds {MAX_ORDER}"));
    }
    if k == 0 || k > MAX_INDEX {
        return invalid(format!("zero index {k} outside 1..={MAX_INDEX}"));
    }
    let mut march = ZeroMarch::new(kind, m);
    if target(kind, m, march.x) == 0.0 {
        return Err(Error::Bracketing(format!("start point for m = {m} is a zero")));
    }
    let mut found = 0;
    while let Some(z) = march.next_zero(f64::INFINITY) {
        found += 1;
        if found == k {
            return Ok(BesselZero { order: m, index: k, location: z });
        }
    }
    Err(Error::Bracketing(format!("lost zero {k} of order {m}")))
}

/// All positive zeros in `(0, limit]`, in increasing order.
pub fn bessel_zeros_upto(m: u32, limit: f64, kind: ZeroKind) -> Result<Vec<f64>> {
    ensure_finite("limit", limit)?;
    if m > MAX_ORDER {
        return invalid(format!("order {m} exceeds {MAX_ORDER}"));
    }
    let mut out = Vec::new();
    if limit <= march_start(kind, m) {
        return Ok(out);
    }
    let mut march = ZeroMarch::new(kind, m);
    while let Some(z) = march.next_zero(limit) {
        out.push(z);
    }
    Ok(out)
}

/// Estimates of the whispering-gallery constant `a` in
/// `j_{m,1} = m + a m^{1/3} + O(m^{-1/3})`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WhisperingEstimate {
    /// Mean of `(j_{m,1} - m) / m^{1/3}` over the supplied orders.
    pub a_estimate: f64,
    /// `max - min` of the same samples.
    pub spread: f64,
    /// Intercept of a least-squares fit `a + b m^{-2/3}`; equals the single
    /// sample when only one order is given.
    pub extrapolated: f64,
    pub samples: Vec<(u32, f64)>,
}

pub fn whispering_constant_estimate(orders: &[u32]) -> Result<WhisperingEstimate> {
    if orders.is_empty() {
        return invalid("at least one order is required");
    }
    if orders.iter().any(|&m| m == 0) {
        return invalid("orders must be positive");
    }
    let samples = orders
        .iter()
        .map(|&m| {
            let j = bessel_zero(m, 1)?.location;
            let mf = m as f64;
            Ok((m, (j - mf) / mf.cbrt()))
        })
        .collect::<Result<Vec<_>>>()?;
    let n = samples.len() as f64;
    let values = samples.iter().map(|s| s.1);
    let mean = values.clone().sum::<f64>() / n;
    let max = values.clone().fold(f64::NEG_INFINITY, f64::max);
    let min = values.fold(f64::INFINITY, f64::min);

    let xs: Vec<f64> = samples.iter().map(|&(m, _)| (m as f64).powf(-2.0 / 3.0)).collect();
    let x_mean = xs.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    let extrapolated = if sxx > 0.0 {
        let sxy: f64 = xs.iter().zip(&samples).map(|(x, s)| (x - x_mean) * (s.1 - mean)).sum();
        mean - sxy / sxx * x_mean
    } else {
        mean
    };
    Ok(WhisperingEstimate { a_estimate: mean, spread: max - min, extrapolated, samples })
}

#[cfg(test)]
mod tests {
    use super::super::bessel::jn;
    use super::*;
    use approx::assert_abs_diff_eq;

    /// Bisection on sign changes of the plain power series; fine for small x.
    fn series_oracle_zero(m: u32, lo: f64, hi: f64, derivative: bool) -> f64 {
        let f = |x: f64| {
            let mut term = (0.5 * x).powi(m as i32) / (1..=m).map(|i| i as f64).product::<f64>();
            let mut sum = 0.0;
            let mut dsum = 0.0;
            for k in 0..80 {
                sum += term;
                dsum += term * (2 * k + m) as f64 / x;
                term *= -(0.25 * x * x) / ((k + 1) as f64 * (k + 1 + m) as f64);
            }
            if derivative {
                dsum
            } else {
                sum
            }
        };
        let (mut a, mut b) = (lo, hi);
        assert!(f(a).signum() != f(b).signum());
        for _ in 0..200 {
            let c = 0.5 * (a + b);
            if f(c).signum() == f(a).signum() {
                a = c;
            } else {
                b = c;
            }
        }
        0.5 * (a + b)
    }

    #[test]
    fn zeros_of_j0_match_series_oracle() {
        let z1 = series_oracle_zero(0, 2.0, 3.0, false);
        let z2 = series_oracle_zero(0, 5.0, 6.0, false);
        assert_abs_diff_eq!(z1, 2.404825557695773, epsilon = 1e-12);
        assert_abs_diff_eq!(z2, 5.520078110286311, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_zero(0, 1).unwrap().location, z1, epsilon = 1e-9);
        assert_abs_diff_eq!(bessel_zero(0, 2).unwrap().location, z2, epsilon = 1e-9);
    }

    #[test]
    fn derivative_zeros_match_series_oracle() {
        let z = series_oracle_zero(1, 1.5, 2.0, true);
        assert_abs_diff_eq!(z, 1.841183781340659, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_deriv_zero(1, 1).unwrap().location, z, epsilon = 1e-9);
        let z0 = series_oracle_zero(0, 3.5, 4.0, true);
        assert_abs_diff_eq!(z0, 3.831705970207512, epsilon = 1e-12);
        assert_abs_diff_eq!(bessel_deriv_zero(0, 1).unwrap().location, z0, epsilon = 1e-9);
    }

    #[test]
    fn first_zero_exceeds_order() {
        for m in 1..=50u32 {
            let j = bessel_zero(m, 1).unwrap().location;
            assert!(j > m as f64);
            // no sign change of J_m on (0, m]
            let mut prev = jn(m, 1e-3);
            for i in 1..=200 {
                let x = m as f64 * i as f64 / 200.0;
                let v = jn(m, x);
                assert!(v.signum() == prev.signum() || v == 0.0);
                prev = v;
            }
        }
    }

    #[test]
    fn zeros_increase_with_index() {
        for m in [0u32, 1, 7, 40] {
            let zs: Vec<f64> = (1..=12).map(|k| bessel_deriv_zero(m, k).unwrap().location).collect();
            assert!(zs.windows(2).all(|w| w[0] < w[1]));
            let zs: Vec<f64> = (1..=12).map(|k| bessel_zero(m, k).unwrap().location).collect();
            assert!(zs.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn zeros_upto_agrees_with_kth_zero() {
        let zs = bessel_zeros_upto(3, 40.0, ZeroKind::Value).unwrap();
        for (i, z) in zs.iter().enumerate() {
            assert_eq!(*z, bessel_zero(3, i as u32 + 1).unwrap().location);
        }
        assert!(bessel_zero(3, zs.len() as u32 + 1).unwrap().location > 40.0);
    }

    #[test]
    fn index_bounds() {
        assert!(bessel_zero(0, 0).is_err());
        assert!(bessel_zero(MAX_ORDER + 1, 1).is_err());
        assert!(bessel_zero(0, MAX_INDEX + 1).is_err());
    }

    #[test]
    fn large_order_first_zero() {
        let j = bessel_zero(10_000, 1).unwrap().location;
        // Olver: m + 1.8557571 m^{1/3} + 1.033150 m^{-1/3} - 0.00397 m^{-1}
        let m = 10_000f64;
        let olver = m + 1.8557571 * m.cbrt() + 1.033150 / m.cbrt() - 0.00397 / m;
        assert_abs_diff_eq!(j, olver, epsilon = 1e-5);
    }

    #[test]
    fn whispering_single_order_has_no_spread() {
        let est = whispering_constant_estimate(&[50]).unwrap();
        assert_eq!(est.spread, 0.0);
        assert_eq!(est.extrapolated, est.a_estimate);
    }

    #[test]
    fn whispering_estimates() {
        let est = whispering_constant_estimate(&[100, 200, 400]).unwrap();
        // frozen from scipy.special.jn_zeros
        assert_abs_diff_eq!(est.a_estimate, 1.888147046816735, epsilon = 1e-8);
        assert_abs_diff_eq!(est.spread, 0.02890827172601451, epsilon = 1e-8);
        assert_abs_diff_eq!(est.extrapolated, WHISPERING_CONSTANT, epsilon = 2e-3);
        assert!(est.a_estimate > 0.0);
    }

    #[test]
    fn whispering_residual_shrinks() {
        let a = |m: u32| whispering_constant_estimate(&[m]).unwrap().a_estimate;
        let diffs: Vec<f64> = [25u32, 50, 100, 200].iter().map(|&m| (a(m) - a(2 * m)).abs()).collect();
        assert!(diffs.windows(2).all(|w| w[1] < w[0]), "{diffs:?}");
    }
}
