//! Extremal combinations inside an eigenspace, spherical averages and the
//! empirical local estimate constant.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigenbasis::{norm, unit_sphere_area, DomainSpec, Eigenmode};
use crate::error::{invalid, Error, Result};
use crate::exec::{compensated_sum, Execution};
use crate::norms::QuadratureGrid;
use crate::quadrature::GaussLegendre;

/// Something that can be evaluated at points of a domain.
pub trait Field: Sync {
    fn domain(&self) -> DomainSpec;
    /// Largest frequency present; sets angular resolution.
    fn frequency(&self) -> f64;
    /// Value at a point of the closed domain (not re-checked).
    fn eval(&self, x: &[f64]) -> f64;
}

impl Field for Eigenmode {
    fn domain(&self) -> DomainSpec {
        Eigenmode::domain(self)
    }

    fn frequency(&self) -> f64 {
        self.lambda()
    }

    fn eval(&self, x: &[f64]) -> f64 {
        self.value_unchecked(x)
    }
}

/// `u(x) = sum_i v_i(y) v_i(x)` for an orthonormal family `v_i` and anchor `y`
/// maximizing `a(y) = sum_i v_i(y)^2`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CombinedFunction {
    pub modes: Vec<Eigenmode>,
    pub anchor: Vec<f64>,
    pub coefficients: Vec<f64>,
    /// `a(anchor)`, which also equals `u(anchor)` and `||u||_2^2`.
    pub a_anchor: f64,
    /// `||u||_2` by quadrature on the grid.
    pub l2_norm: f64,
    /// `max(|u| on the grid, u(anchor))`.
    pub sup_norm: f64,
    /// `sup_norm / l2_norm`.
    pub ratio: f64,
    /// `sqrt(m / |M|)`.
    pub bound: f64,
    /// `|M| * (max grid spacing) * lambda_max * a(anchor)`.
    pub slack: f64,
    pub grid_nodes: usize,
}

impl Field for CombinedFunction {
    fn domain(&self) -> DomainSpec {
        self.modes[0].domain()
    }

    fn frequency(&self) -> f64 {
        self.modes.iter().map(Eigenmode::lambda).fold(0.0, f64::max)
    }

    fn eval(&self, x: &[f64]) -> f64 {
        compensated_sum(self.modes.iter().zip(&self.coefficients).map(|(v, c)| c * v.value_unchecked(x)))
    }
}

/// Largest deviation of the quadrature Gram matrix from the identity that is
/// accepted as orthonormal.
pub const GRAM_TOL: f64 = 1e-6;

struct RowScan {
    gram: Vec<f64>,
    best: f64,
    best_index: usize,
}

pub fn extremal_combination(modes: &[Eigenmode], grid: &QuadratureGrid) -> Result<CombinedFunction> {
    extremal_combination_with(Execution::default(), modes, grid)
}

pub fn extremal_combination_with(
    exec: Execution,
    modes: &[Eigenmode],
    grid: &QuadratureGrid,
) -> Result<CombinedFunction> {
    if modes.is_empty() {
        return invalid("at least one mode is required");
    }
    for u in modes {
        grid.check_resolves(u)?;
    }
    let m = modes.len();
    let dim = grid.domain().dimension();
    let rows = grid_rows(grid);
    let per_row = grid.len() / rows;

    let scans = exec.map_range(0..rows, |row| {
        let mut gram_terms = vec![Vec::with_capacity(per_row); m * m];
        let mut best = f64::NEG_INFINITY;
        let mut best_index = 0;
        let mut vals = vec![0.0; m];
        for i in row * per_row..(row + 1) * per_row {
            let (p, w) = grid.node(i);
            for (v, u) in vals.iter_mut().zip(modes) {
                *v = u.value_unchecked(&p[..dim]);
            }
            for a in 0..m {
                for b in a..m {
                    gram_terms[a * m + b].push(w * vals[a] * vals[b]);
                }
            }
            let a: f64 = compensated_sum(vals.iter().map(|v| v * v));
            if a > best {
                best = a;
                best_index = i;
            }
        }
        RowScan { gram: gram_terms.into_iter().map(compensated_sum).collect(), best, best_index }
    });

    for a in 0..m {
        for b in a..m {
            let g = compensated_sum(scans.iter().map(|s| s.gram[a * m + b]));
            let target = if a == b { 1.0 } else { 0.0 };
            if (g - target).abs() > GRAM_TOL {
                return invalid(format!("modes {a} and {b} are not orthonormal on the grid: <v_a, v_b> = {g}"));
            }
        }
    }

    // lowest node index wins ties
    let mut best = &scans[0];
    for s in &scans[1..] {
        if s.best > best.best {
            best = s;
        }
    }
    let start = grid.node(best.best_index).0[..dim].to_vec();
    let a_fn = |y: &[f64]| compensated_sum(modes.iter().map(|u| u.value_unchecked(y).powi(2)));
    let anchor = local_ascent(grid.domain(), &start, 0.5 * grid.max_spacing(), a_fn);
    let coefficients: Vec<f64> = modes.iter().map(|u| u.value_unchecked(&anchor)).collect();
    let a_anchor = a_fn(&anchor);

    let combined = CombinedFunction {
        modes: modes.to_vec(),
        anchor,
        coefficients,
        a_anchor,
        l2_norm: 0.0,
        sup_norm: 0.0,
        ratio: 0.0,
        bound: 0.0,
        slack: 0.0,
        grid_nodes: grid.len(),
    };
    let stats = exec.map_range(0..rows, |row| {
        let mut sq = Vec::with_capacity(per_row);
        let mut max: f64 = 0.0;
        for i in row * per_row..(row + 1) * per_row {
            let (p, w) = grid.node(i);
            let v = combined.eval(&p[..dim]);
            sq.push(w * v * v);
            max = max.max(v.abs());
        }
        (compensated_sum(sq), max)
    });
    let l2_norm = compensated_sum(stats.iter().map(|s| s.0)).sqrt();
    let sup_norm = stats.iter().map(|s| s.1).fold(a_anchor, f64::max);
    let volume = grid.domain().volume();
    let lambda_max = combined.frequency();
    Ok(CombinedFunction {
        l2_norm,
        sup_norm,
        ratio: sup_norm / l2_norm,
        bound: (m as f64 / volume).sqrt(),
        slack: volume * grid.max_spacing() * lambda_max * a_anchor,
        ..combined
    })
}

fn grid_rows(grid: &QuadratureGrid) -> usize {
    // any divisor works; rows only batch the parallel scan
    let n = grid.len();
    (1..=n.min(4096)).rev().find(|r| n % r == 0).unwrap_or(1)
}

/// Compass search for a local maximum of `f`, staying inside the domain.
fn local_ascent<F: Fn(&[f64]) -> f64>(domain: DomainSpec, start: &[f64], step: f64, f: F) -> Vec<f64> {
    let mut x = start.to_vec();
    let mut fx = f(&x);
    let mut h = step;
    while h > 1e-10 {
        let mut moved = false;
        for axis in 0..x.len() {
            for dir in [1.0, -1.0] {
                let mut y = x.clone();
                y[axis] += dir * h;
                if !domain.contains(&y) {
                    continue;
                }
                let fy = f(&y);
                if fy > fx * (1.0 + 1e-14) {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
        }
        if !moved {
            h *= 0.5;
        }
    }
    x
}

/// CSV `index1,index2,lambda,coefficient` of a combination.
pub fn combination_csv(c: &CombinedFunction) -> String {
    let mut out = String::from("index1,index2,lambda,coefficient\n");
    for (u, coef) in c.modes.iter().zip(&c.coefficients) {
        let (i1, i2) = u.index_fields();
        out.push_str(&format!("{},{},{},{}\n", i1, i2, crate::fmt_sig(u.lambda()), crate::fmt_sig(*coef)));
    }
    out
}

/// Radial profile `h(r)` of the spherical mean of `u` about `center`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SphericalAverage {
    pub center: Vec<f64>,
    pub radius: f64,
    /// `h(0) = u(center)`.
    pub center_value: f64,
    /// Gauss-Legendre nodes on `[0, radius]`.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    /// `||h||_{L^2(B)}` and `||u||_{L^2(B)}` on the ball `B(center, radius)`.
    pub h_l2: f64,
    pub u_l2: f64,
}

fn check_ball(domain: DomainSpec, center: &[f64], radius: f64) -> Result<()> {
    if !(radius > 0.0 && radius.is_finite()) {
        return invalid(format!("radius must be positive, got {radius}"));
    }
    let d = domain.boundary_distance(center)?;
    if d + 1e-12 < radius {
        return Err(Error::OutsideDomain { point: center.to_vec() });
    }
    Ok(())
}

/// Unit directions and weights summing to one over the sphere `S^{n-1}`.
fn sphere_rule(dim: usize, lambda_r: f64) -> Vec<(Vec<f64>, f64)> {
    let n_theta = (8.0 * lambda_r.ceil()).max(16.0) as usize;
    let azimuth = |k: usize| 2.0 * PI * k as f64 / n_theta as f64;
    if dim == 2 {
        return (0..n_theta).map(|k| (vec![azimuth(k).cos(), azimuth(k).sin()], 1.0 / n_theta as f64)).collect();
    }
    let gl = GaussLegendre::new((n_theta / 2).max(8));
    let mut out = Vec::new();
    for (z, wz) in gl.on_interval(-1.0, 1.0) {
        let s = (1.0 - z * z).sqrt();
        for k in 0..n_theta {
            let t = azimuth(k);
            out.push((vec![s * t.cos(), s * t.sin(), z], 0.5 * wz / n_theta as f64));
        }
    }
    out
}

pub fn spherical_average<F: Field + ?Sized>(
    u: &F,
    center: &[f64],
    radius: f64,
    radial_nodes: usize,
) -> Result<SphericalAverage> {
    let domain = u.domain();
    check_ball(domain, center, radius)?;
    if radial_nodes == 0 {
        return invalid("radial_nodes must be positive");
    }
    let dim = domain.dimension();
    let sphere = sphere_rule(dim, u.frequency() * radius);
    let gl = GaussLegendre::new(radial_nodes);
    let (nodes, weights): (Vec<f64>, Vec<f64>) = gl.on_interval(0.0, radius).unzip();
    let means = Execution::default().map_slice(&nodes, |&r| {
        let mut p = vec![0.0; dim];
        let (mut m1, mut m2) = (Vec::with_capacity(sphere.len()), Vec::with_capacity(sphere.len()));
        for (dir, w) in &sphere {
            for k in 0..dim {
                p[k] = center[k] + r * dir[k];
            }
            let v = u.eval(&p);
            m1.push(w * v);
            m2.push(w * v * v);
        }
        (compensated_sum(m1), compensated_sum(m2))
    });
    let area = unit_sphere_area(dim);
    let jac = |r: f64| area * r.powi(dim as i32 - 1);
    let h_l2 = compensated_sum(nodes.iter().zip(&weights).zip(&means).map(|((&r, &w), m)| w * jac(r) * m.0 * m.0)).sqrt();
    let u_l2 = compensated_sum(nodes.iter().zip(&weights).zip(&means).map(|((&r, &w), m)| w * jac(r) * m.1)).sqrt();
    Ok(SphericalAverage {
        center: center.to_vec(),
        radius,
        center_value: u.eval(center),
        values: means.iter().map(|m| m.0).collect(),
        nodes,
        weights,
        h_l2,
        u_l2,
    })
}

/// Smallest `lambda R` accepted by [`local_estimate_constant`].
pub const MIN_LAMBDA_R: f64 = 5.0;

/// `|u(center)| lambda^{-(n-1)/2} R^{1/2} / ||u||_{L^2(B(center, R))}`.
pub fn local_estimate_constant(mode: &Eigenmode, center: &[f64], radius: f64) -> Result<f64> {
    check_ball(mode.domain(), center, radius)?;
    let lr = mode.lambda() * radius;
    if lr < MIN_LAMBDA_R {
        return invalid(format!("lambda R = {lr} below {MIN_LAMBDA_R}"));
    }
    let nodes = (4.0 * lr.ceil()).max(32.0) as usize;
    let avg = spherical_average(mode, center, radius, nodes)?;
    let n = mode.domain().dimension() as f64;
    Ok(avg.center_value.abs() * mode.lambda().powf(-(n - 1.0) / 2.0) * radius.sqrt() / avg.u_l2)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalEstimateSample {
    pub m: i64,
    pub k: u32,
    pub lambda: f64,
    pub center_r: f64,
    pub radius: f64,
    pub c_emp: f64,
}

fn frac(x: f64) -> f64 {
    x - x.floor()
}

/// Deterministic low-discrepancy sweep of `pairs` (disk mode, center, R)
/// triples with `lambda R >= 5`.
pub fn local_estimate_sweep(pairs: usize) -> Result<Vec<LocalEstimateSample>> {
    // additive recurrence with the generalized golden ratio in 5 dimensions
    let g = {
        let mut x: f64 = 1.5;
        for _ in 0..60 {
            x = (1.0 + x).powf(1.0 / 6.0);
        }
        x
    };
    let alpha: Vec<f64> = (1..=5).map(|j| 1.0 / g.powi(j)).collect();
    let params: Vec<[f64; 5]> = (1..=pairs)
        .map(|i| {
            let mut p = [0.0; 5];
            for (slot, a) in p.iter_mut().zip(&alpha) {
                *slot = frac(0.5 + i as f64 * a);
            }
            p
        })
        .collect();
    Execution::default()
        .map_slice(&params, |p| {
            let m = (p[0] * 12.0).floor() as i64 * if p[1] < 0.5 { 1 } else { -1 };
            let k = 6 + (p[2] * 10.0).floor() as u32;
            let mode = Eigenmode::disk(crate::eigenbasis::BoundaryCondition::Dirichlet, m, k)?;
            let rho = 0.5 * p[3];
            let phi = 2.0 * PI * p[4];
            let center = [rho * phi.cos(), rho * phi.sin()];
            let r_min = MIN_LAMBDA_R / mode.lambda();
            let radius = r_min + (1.0 - rho - r_min) * frac(p[0] * 7.0 + p[3]);
            let c_emp = local_estimate_constant(&mode, &center, radius)?;
            Ok(LocalEstimateSample { m, k, lambda: mode.lambda(), center_r: norm(&center), radius, c_emp })
        })
        .into_iter()
        .collect()
}

/// CSV `lambda,center_r,R,C_emp`.
pub fn sweep_csv(samples: &[LocalEstimateSample]) -> String {
    let mut out = String::from("lambda,center_r,R,C_emp\n");
    for s in samples {
        let f = crate::fmt_sig;
        out.push_str(&format!("{},{},{},{}\n", f(s.lambda), f(s.center_r), f(s.radius), f(s.c_emp)));
    }
    out
}
