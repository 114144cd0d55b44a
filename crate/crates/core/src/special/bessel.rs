use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{ensure_finite, invalid, Result};
use crate::quadrature::GaussLegendre;

/// Largest order accepted by the public evaluators.
pub const MAX_ORDER: u32 = 10_000;

const SERIES_LIMIT: f64 = 8.0;
const HANKEL_LIMIT: f64 = 1000.0;
const RESCALE: f64 = 1e250;

/// `J_m(x)` together with `J_m'(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselPoint {
    pub order: u32,
    pub argument: f64,
    pub value: f64,
    pub derivative: f64,
}

/// Evaluates `J_m(x)` and its derivative for `x >= 0`.
pub fn bessel_j(m: u32, x: f64) -> Result<BesselPoint> {
    ensure_finite("x", x)?;
    if x < 0.0 {
        return invalid(format!("Bessel argument must be nonnegative, got {x}"));
    }
    if m > MAX_ORDER {
        return invalid(format!("Bessel order {m} exceeds {MAX_ORDER}"));
    }
    let (value, next) = jn_pair(m, x);
    let derivative = if x == 0.0 {
        if m == 1 {
            0.5
        } else {
            0.0
        }
    } else {
        m as f64 / x * value - next
    };
    Ok(BesselPoint { order: m, argument: x, value, derivative })
}

/// `J_m(x)` without argument validation.
#[inline]
pub(crate) fn jn(m: u32, x: f64) -> f64 {
    jn_pair(m, x).0
}

/// `(J_m(x), J_{m+1}(x))` for finite `x >= 0`.
pub(crate) fn jn_pair(m: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        return (if m == 0 { 1.0 } else { 0.0 }, 0.0);
    }
    if x <= SERIES_LIMIT {
        (series(m, x), series(m + 1, x))
    } else if x > HANKEL_LIMIT && 4.0 * (m as f64 + 1.0).powi(2) <= x {
        (hankel(m, x), hankel(m + 1, x))
    } else {
        miller(m, x)
    }
}

/// Ascending series; only used where the terms do not cancel badly.
fn series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut prefactor = 1.0;
    for i in 1..=m {
        prefactor *= half / i as f64;
        if prefactor == 0.0 {
            return 0.0;
        }
    }
    let q = -half * half;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mf = m as f64;
    for k in 1..200 {
        let kf = k as f64;
        term *= q / (kf * (kf + mf));
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    prefactor * sum
}

/// Hankel's large-argument expansion.
fn hankel(m: u32, x: f64) -> f64 {
    let mu = 4.0 * (m as f64).powi(2);
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (8.0 * k as f64 * x);
        if term.abs() > last {
            break;
        }
        last = term.abs();
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if term.abs() < 1e-17 {
            break;
        }
    }
    // chi = x - (m/2 + 1/4) pi, with the phase reduced modulo 2 pi first.
    let phase = ((2 * (m as u64) + 1) % 8) as f64 * FRAC_PI_4;
    let (sx, cx) = x.sin_cos();
    let (sp, cp) = phase.sin_cos();
    let cos_chi = cx * cp + sx * sp;
    let sin_chi = sx * cp - cx * sp;
    (2.0 / (PI * x)).sqrt() * (p * cos_chi - q * sin_chi)
}

/// Miller's backward recurrence normalised by `J_0 + 2 sum J_2k = 1`.
fn miller(m: u32, x: f64) -> (f64, f64) {
    let tail = 30.0 + 12.0 * x.cbrt();
    let mut n = (x.max(m as f64 + 1.0) + tail).ceil() as u64;
    if n % 2 == 1 {
        n += 1;
    }
    let m = m as u64;
    let two_over_x = 2.0 / x;
    let mut f_next = 0.0_f64; // f_{k+1}
    let mut f_cur = 1e-30_f64; // f_k
    let mut norm = if n % 2 == 0 { 2.0 * f_cur } else { 0.0 };
    let mut jm = if n == m { f_cur } else { 0.0 };
    let mut jm1 = if n == m + 1 { f_cur } else { 0.0 };
    let mut k = n;
    while k > 0 {
        let f_prev = k as f64 * two_over_x * f_cur - f_next;
        k -= 1;
        f_next = f_cur;
        f_cur = f_prev;
        if k == m {
            jm = f_cur;
        }
        if k == m + 1 {
            jm1 = f_cur;
        }
        if k == 0 {
            norm += f_cur;
        } else if k % 2 == 0 {
            norm += 2.0 * f_cur;
        }
        if f_cur.abs() > RESCALE {
            let s = 1.0 / RESCALE;
            f_cur *= s;
            f_next *= s;
            norm *= s;
            jm *= s;
            jm1 *= s;
        }
    }
    (jm / norm, jm1 / norm)
}

/// Relative discrepancy between Poisson's integral and `J_m(r)`.
///
/// Poisson's representation `J_m(r) = C_m r^m \int_{-1}^1 e^{irt}(1-t^2)^{m-1/2} dt`
/// is evaluated with Gauss–Legendre after `t = cos(phi)`, which removes the
/// endpoint singularity of the weight.
pub fn poisson_integral_check(m: u32, r: f64) -> Result<f64> {
    ensure_finite("r", r)?;
    if m > 10 {
        return invalid(format!("order {m} outside 0..=10"));
    }
    if !(0.0..=20.0).contains(&r) {
        return invalid(format!("r = {r} outside [0, 20]"));
    }
    let nodes = 48 + 2 * r.ceil() as usize;
    let gl = GaussLegendre::new(nodes);
    let integral = gl.integrate(0.0, PI, |phi| (r * phi.cos()).cos() * phi.sin().powi(2 * m as i32));
    // C_m r^m = (2r)^m m! / (pi (2m)!)
    let mut scale = 1.0 / PI;
    for i in 1..=m {
        scale *= 2.0 * r * i as f64 / ((2 * i - 1) as f64 * (2 * i) as f64);
    }
    let quad = scale * integral;
    let exact = jn(m, r);
    Ok((quad - exact).abs() / (exact.abs() + 1e-30))
}

/// Location and value of the maximum of `r^{-m} J_m(r)` over a radial sample set.
pub fn scaled_bessel_peak(m: u32, grid: &[f64]) -> Result<(f64, f64)> {
    if m > MAX_ORDER {
        return invalid(format!("Bessel order {m} exceeds {MAX_ORDER}"));
    }
    if grid.iter().any(|r| !r.is_finite() || *r < 0.0) {
        return invalid("radial grid must be finite and nonnegative");
    }
    if !grid.contains(&0.0) {
        return invalid("radial grid must include r = 0");
    }
    let third_zero = super::bessel_zero(m, 3)?.location;
    if grid.iter().all(|&r| r <= third_zero) {
        return invalid(format!("radial grid must extend past j_(m,3) = {third_zero}"));
    }
    let mut best = (f64::NAN, f64::NEG_INFINITY);
    for &r in grid {
        let v = if r == 0.0 { scaled_limit(m) } else { jn(m, r) / r.powi(m as i32) };
        if v > best.1 {
            best = (r, v);
        }
    }
    Ok(best)
}

/// `lim_{r->0} r^{-m} J_m(r) = 1/(2^m m!)`.
fn scaled_limit(m: u32) -> f64 {
    (1..=m).fold(1.0, |acc, i| acc / (2.0 * i as f64))
}
