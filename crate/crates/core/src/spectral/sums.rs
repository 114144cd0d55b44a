use std::f64::consts::PI;

use serde::Serialize;

use super::window::SpectralWindow;
use crate::eigenbasis::{enumerate_modes_with, unit_ball_volume, unit_sphere_area, BoundaryCondition, DomainSpec, MAX_ENUMERATION_LAMBDA};
use crate::error::{ensure_finite, invalid, Error, Result};
use crate::exec::{compensated_sum, Execution};
use crate::lattice::{ball_count, max_norm_sq, representation_table};
use crate::quadrature::GaussLegendre;

/// Relative tail tolerance used when none is given.
pub const DEFAULT_TAIL_TOL: f64 = 1e-12;
/// Largest `lambda` accepted by the smoothed sums.
pub const MAX_SUM_LAMBDA: f64 = 500.0;
const MAX_CUTOFF: f64 = 1e5;
const MAX_NORM_SQ_2D: u64 = 4_000_000;
const MAX_NORM_SQ_3D: u64 = 250_000;
/// Safety factor on the lattice shell bound when counting modes of a domain
/// with boundary near a given spectral shell.
const MODE_DENSITY_FACTOR: f64 = 16.0;

fn lattice_ball_bound(dim: usize, r: f64) -> f64 {
    if r < 0.0 {
        return 0.0;
    }
    unit_ball_volume(dim) * (r + 0.5 * (dim as f64).sqrt()).powi(dim as i32)
}

/// Upper bound on lattice points with `|a|` in `[r, r + 1)`.
fn lattice_shell_bound(dim: usize, r: f64) -> f64 {
    let h = 0.5 * (dim as f64).sqrt();
    let inner = (r - h).max(0.0);
    unit_ball_volume(dim) * ((r + 1.0 + h).powi(dim as i32) - inner.powi(dim as i32))
}

fn window_bound(w: &SpectralWindow, distance: f64) -> f64 {
    w.tail_bound(0.5 + distance)
}

/// Smallest `Lambda` (on a geometric grid) such that the spectral points with
/// `|lambda - lambda_j| > Lambda` contribute less than `rel_tol` times a lower
/// bound for the smoothed sum. `density` scales the lattice shell counts.
pub(crate) fn certified_cutoff(w: &SpectralWindow, lambda: f64, dim: usize, rel_tol: f64, density: f64) -> Result<f64> {
    if !(rel_tol > 0.0 && rel_tol < 1.0) {
        return invalid(format!("tail tolerance must lie in (0, 1), got {rel_tol}"));
    }
    let order = w.decay_order() as i32;
    if order <= dim as i32 {
        return invalid(format!("decay order {order} too small for a {dim}-dimensional sum"));
    }
    let main = (unit_sphere_area(dim) * lambda.max(0.0).powi(dim as i32 - 1) * w.integral() / 2.0).max(1.0);
    let target = rel_tol * main;
    let tail = |cut: f64| -> f64 {
        let inner = if lambda > cut { lattice_ball_bound(dim, lambda - cut) * window_bound(w, cut - 0.5) } else { 0.0 };
        let mut outer = 0.0;
        let mut j = 0.0;
        loop {
            let t = lattice_shell_bound(dim, lambda + cut + j) * window_bound(w, cut + j + 0.5);
            outer += t;
            let remainder = t * (lambda + cut + j + 1.0) / (order - dim as i32) as f64;
            if remainder < 1e-3 * target || j > 1e6 {
                outer += remainder;
                break;
            }
            j += 1.0;
        }
        density * (inner + outer)
    };
    let mut cut = (2.0 * w.k as f64 / w.epsilon).max(1.0);
    while tail(cut) >= target {
        cut *= 1.05;
        if cut > MAX_CUTOFF {
            return Err(Error::ResourceLimit(format!("no tail cutoff below {MAX_CUTOFF} meets tolerance {rel_tol}")));
        }
    }
    Ok(cut)
}

fn check_lambda(lambda: f64) -> Result<()> {
    ensure_finite("lambda", lambda)?;
    if lambda < 0.0 {
        return invalid(format!("lambda must be non-negative, got {lambda}"));
    }
    if lambda > MAX_SUM_LAMBDA {
        return Err(Error::ResourceLimit(format!("lambda = {lambda} exceeds {MAX_SUM_LAMBDA}")));
    }
    Ok(())
}

fn torus_dim(domain: DomainSpec) -> Result<usize> {
    domain.validate()?;
    match domain {
        DomainSpec::Torus { dim } => Ok(dim),
        _ => Err(Error::Unsupported(format!(
            "lattice sums need the torus; use the mode-sum variant for the {}",
            domain.name()
        ))),
    }
}

/// `r_n(N)` for `N <= N_max` where `sqrt(N_max) <= radius`.
fn lattice_table(dim: usize, radius: f64) -> Result<Vec<u64>> {
    let n_max = max_norm_sq(radius).unwrap_or(0);
    let limit = if dim == 2 { MAX_NORM_SQ_2D } else { MAX_NORM_SQ_3D };
    if n_max > limit {
        return Err(Error::ResourceLimit(format!("lattice radius {radius} exceeds the table limit")));
    }
    Ok(representation_table(dim, n_max))
}

/// `(2 pi)^{-n} sum_a f(|a|)` over the table, in index order.
fn lattice_sum<F: Fn(f64) -> f64 + Sync + Send>(exec: Execution, dim: usize, table: &[u64], f: F) -> f64 {
    let terms = exec.map_range(0..table.len(), |n| if table[n] == 0 { 0.0 } else { table[n] as f64 * f((n as f64).sqrt()) });
    compensated_sum(terms) * (2.0 * PI).powi(-(dim as i32))
}

/// `sum_j rho(lambda - lambda_j) u_j(x)^2` on the flat torus, which does not
/// depend on `x`: every `|u_a|^2` equals `(2 pi)^{-n}`.
pub fn smoothed_local_sum(domain: DomainSpec, x: &[f64], lambda: f64, w: &SpectralWindow) -> Result<f64> {
    smoothed_local_sum_with(Execution::default(), domain, x, lambda, w, DEFAULT_TAIL_TOL)
}

pub fn smoothed_local_sum_with(
    exec: Execution,
    domain: DomainSpec,
    x: &[f64],
    lambda: f64,
    w: &SpectralWindow,
    rel_tol: f64,
) -> Result<f64> {
    let dim = torus_dim(domain)?;
    domain.check_point(x)?;
    check_lambda(lambda)?;
    let cut = certified_cutoff(w, lambda, dim, rel_tol, 1.0)?;
    let table = lattice_table(dim, lambda + cut)?;
    Ok(lattice_sum(exec, dim, &table, |r| if (lambda - r).abs() <= cut { w.rho(lambda - r) } else { 0.0 }))
}

/// The same smoothed sum evaluated mode by mode; works on every domain whose
/// spectrum can be enumerated.
pub fn smoothed_mode_sum(
    exec: Execution,
    domain: DomainSpec,
    bc: BoundaryCondition,
    x: &[f64],
    lambda: f64,
    w: &SpectralWindow,
) -> Result<f64> {
    let (direct, _) = mode_window_sums(exec, domain, bc, x, lambda, w)?;
    Ok(direct)
}

/// `(sum rho(lambda - lambda_j) u_j^2, sum rho(lambda + lambda_j) u_j^2)`.
fn mode_window_sums(
    exec: Execution,
    domain: DomainSpec,
    bc: BoundaryCondition,
    x: &[f64],
    lambda: f64,
    w: &SpectralWindow,
) -> Result<(f64, f64)> {
    domain.check_bc(bc)?;
    domain.check_point(x)?;
    check_lambda(lambda)?;
    let dim = domain.dimension();
    let cut = certified_cutoff(w, lambda, dim, DEFAULT_TAIL_TOL, MODE_DENSITY_FACTOR)?;
    if lambda + cut > MAX_ENUMERATION_LAMBDA {
        return Err(Error::ResourceLimit(format!(
            "mode sum needs the spectrum up to {}, beyond {MAX_ENUMERATION_LAMBDA}",
            lambda + cut
        )));
    }
    let modes = enumerate_modes_with(exec, domain, bc, lambda + cut)?;
    let terms = exec.map_slice(&modes, |m| {
        let u = m.value_unchecked(x);
        (w.rho(lambda - m.lambda()) * u * u, w.rho(lambda + m.lambda()) * u * u)
    });
    Ok((compensated_sum(terms.iter().map(|t| t.0)), compensated_sum(terms.iter().map(|t| t.1))))
}

/// Euclidean prediction split as `(direct, reflected)`:
/// `(2 pi)^{-n} |S^{n-1}| int_0^inf rho(lambda -/+ r) r^{n-1} dr`.
pub fn continuum_terms(lambda: f64, w: &SpectralWindow, dim: usize) -> Result<(f64, f64)> {
    continuum_terms_with(Execution::default(), lambda, w, dim, DEFAULT_TAIL_TOL)
}

pub fn continuum_terms_with(exec: Execution, lambda: f64, w: &SpectralWindow, dim: usize, rel_tol: f64) -> Result<(f64, f64)> {
    if !(1..=3).contains(&dim) {
        return invalid(format!("dimension must be 1, 2 or 3, got {dim}"));
    }
    check_lambda(lambda)?;
    let cut = certified_cutoff(w, lambda, dim, rel_tol, 1.0)?;
    let upper = lambda + cut;
    let rule = GaussLegendre::new(20);
    let panel = 0.5;
    let panels = (upper / panel).ceil() as usize;
    let h = upper / panels as f64;
    let parts = exec.map_range(0..panels, |p| {
        let a = p as f64 * h;
        let b = if p + 1 == panels { upper } else { a + h };
        let nodes: Vec<(f64, f64)> = rule.on_interval(a, b).collect();
        let jac = |r: f64| r.powi(dim as i32 - 1);
        let direct = compensated_sum(nodes.iter().map(|&(r, wt)| wt * w.rho(lambda - r) * jac(r)));
        let reflected = compensated_sum(nodes.iter().map(|&(r, wt)| wt * w.rho(lambda + r) * jac(r)));
        (direct, reflected)
    });
    let scale = (2.0 * PI).powi(-(dim as i32)) * unit_sphere_area(dim);
    Ok((
        scale * compensated_sum(parts.iter().map(|p| p.0)),
        scale * compensated_sum(parts.iter().map(|p| p.1)),
    ))
}

pub fn continuum_prediction(lambda: f64, w: &SpectralWindow, dim: usize) -> Result<f64> {
    let (d, r) = continuum_terms(lambda, w, dim)?;
    Ok(d + r)
}

fn torus_ball_count(dim: usize, radius: f64) -> u64 {
    max_norm_sq(radius).map_or(0, |n| ball_count(dim, n))
}

/// `u_I(x) = sqrt(sum_{lambda_j in I} u_j(x)^2)` for the band `I = (lambda - 1, lambda]`.
pub fn band_function(domain: DomainSpec, bc: BoundaryCondition, x: &[f64], lambda: f64) -> Result<f64> {
    band_function_with(Execution::default(), domain, bc, x, lambda)
}

pub fn band_function_with(exec: Execution, domain: DomainSpec, bc: BoundaryCondition, x: &[f64], lambda: f64) -> Result<f64> {
    Ok(spectral_projector_diag(exec, domain, bc, x, lambda - 1.0, lambda)?.sqrt())
}

/// `sum_{lo < lambda_j <= hi} u_j(x)^2`.
fn spectral_projector_diag(exec: Execution, domain: DomainSpec, bc: BoundaryCondition, x: &[f64], lo: f64, hi: f64) -> Result<f64> {
    domain.check_bc(bc)?;
    domain.check_point(x)?;
    ensure_finite("lambda", hi)?;
    if let DomainSpec::Torus { dim } = domain {
        if hi > MAX_SUM_LAMBDA {
            return Err(Error::ResourceLimit(format!("lambda = {hi} exceeds {MAX_SUM_LAMBDA}")));
        }
        let count = torus_ball_count(dim, hi) - torus_ball_count(dim, lo);
        return Ok(count as f64 * (2.0 * PI).powi(-(dim as i32)));
    }
    let modes = enumerate_modes_with(exec, domain, bc, hi)?;
    let terms = exec.map_slice(&modes, |m| {
        if m.lambda() > lo {
            let u = m.value_unchecked(x);
            u * u
        } else {
            0.0
        }
    });
    Ok(compensated_sum(terms))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandWindowCheck {
    pub lambda: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

/// Compares `u_{(lambda-1, lambda]}(x)^2` with the window sum
/// `sum_j [rho(lambda - lambda_j) + rho(lambda + lambda_j)] u_j(x)^2`.
pub fn band_window_inequality(
    domain: DomainSpec,
    bc: BoundaryCondition,
    x: &[f64],
    lambda: f64,
    w: &SpectralWindow,
) -> Result<BandWindowCheck> {
    let exec = Execution::default();
    let lhs = band_function_with(exec, domain, bc, x, lambda)?.powi(2);
    let rhs = if let DomainSpec::Torus { dim } = domain {
        check_lambda(lambda)?;
        let cut = certified_cutoff(w, lambda, dim, DEFAULT_TAIL_TOL, 1.0)?;
        let table = lattice_table(dim, lambda + cut)?;
        lattice_sum(exec, dim, &table, |r| w.rho(lambda - r) + w.rho(lambda + r))
    } else {
        let (d, r) = mode_window_sums(exec, domain, bc, x, lambda, w)?;
        d + r
    };
    Ok(BandWindowCheck { lambda, lhs, rhs, holds: lhs <= rhs + 1e-10 })
}

/// `gamma' = (2 pi)^{-n/2} sqrt(|B^n|)`.
pub fn carleman_constant(dim: usize) -> f64 {
    (2.0 * PI).powf(-(dim as f64) / 2.0) * unit_ball_volume(dim).sqrt()
}

pub const CARLEMAN_MIN_DISTANCE: f64 = 0.2;
pub const CARLEMAN_MIN_SCALE: f64 = 10.0;

/// `u_{[0, lambda]}(x) / (gamma' lambda^{n/2})`.
///
/// Needs `dist(x, boundary) >= 0.2` and `lambda * min(dist, 1) >= 10`; on the
/// torus the distance is infinite and the second condition reads `lambda >= 10`.
pub fn carleman_ratio(domain: DomainSpec, bc: BoundaryCondition, x: &[f64], lambda: f64) -> Result<f64> {
    domain.check_bc(bc)?;
    let dist = domain.boundary_distance(x)?;
    ensure_finite("lambda", lambda)?;
    if dist < CARLEMAN_MIN_DISTANCE {
        return invalid(format!("point is {dist} from the boundary, closer than {CARLEMAN_MIN_DISTANCE}"));
    }
    if lambda * dist.min(1.0) < CARLEMAN_MIN_SCALE {
        return invalid(format!("lambda * dist = {} is below {CARLEMAN_MIN_SCALE}", lambda * dist.min(1.0)));
    }
    let dim = domain.dimension();
    let diag = spectral_projector_diag(Execution::default(), domain, bc, x, -1.0, lambda)?;
    Ok(diag.sqrt() / (carleman_constant(dim) * lambda.powf(dim as f64 / 2.0)))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LocalityRow {
    pub lambda: f64,
    pub smoothed: f64,
    pub continuum: f64,
    pub rel_err: f64,
}

/// Torus smoothed sums against the Euclidean prediction.
pub fn locality_table(exec: Execution, dim: usize, lambdas: &[f64], w: &SpectralWindow, rel_tol: f64) -> Result<Vec<LocalityRow>> {
    let domain = DomainSpec::Torus { dim };
    let x = vec![0.0; dim];
    lambdas
        .iter()
        .map(|&lambda| {
            let smoothed = smoothed_local_sum_with(exec, domain, &x, lambda, w, rel_tol)?;
            let (d, r) = continuum_terms_with(exec, lambda, w, dim, rel_tol)?;
            let continuum = d + r;
            Ok(LocalityRow { lambda, smoothed, continuum, rel_err: (smoothed - continuum).abs() / continuum })
        })
        .collect()
}

pub fn locality_csv(rows: &[LocalityRow]) -> String {
    let mut out = String::from("lambda,smoothed,continuum,rel_err\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            crate::fmt_sig(r.lambda),
            crate::fmt_sig(r.smoothed),
            crate::fmt_sig(r.continuum),
            crate::fmt_sig(r.rel_err)
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BandRow {
    pub lambda: f64,
    pub band_sup: f64,
    /// `band_sup / lambda^{(n-1)/2}`.
    pub ratio: f64,
}

/// Sup over the torus of the unit-band function; the band function is
/// constant in `x` there, so one point suffices.
pub fn torus_band_table(dim: usize, lambdas: &[f64]) -> Result<Vec<BandRow>> {
    let domain = DomainSpec::Torus { dim };
    let x = vec![0.0; dim];
    lambdas
        .iter()
        .map(|&lambda| {
            let band_sup = band_function(domain, BoundaryCondition::None, &x, lambda)?;
            Ok(BandRow { lambda, band_sup, ratio: band_sup / lambda.powf((dim as f64 - 1.0) / 2.0) })
        })
        .collect()
}

pub fn band_csv(rows: &[BandRow]) -> String {
    let mut out = String::from("lambda,band_sup,ratio\n");
    for r in rows {
        out.push_str(&format!("{},{},{}\n", crate::fmt_sig(r.lambda), crate::fmt_sig(r.band_sup), crate::fmt_sig(r.ratio)));
    }
    out
}
