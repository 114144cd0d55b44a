use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use statrs::function::gamma::ln_gamma;

use super::grid::{QuadratureGrid, DEFAULT_NODES_PER_WAVELENGTH};
use super::grid::RadialRule;
use crate::eigenbasis::{BoundaryCondition, DomainSpec, Eigenmode, ModeIndex};
use crate::error::{invalid, Result};
use crate::exec::{compensated_sum, Execution};
use crate::special::{bessel_zeros_upto, ZeroKind};

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Maximum of `|u|` and a point where it is attained.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupNorm {
    pub value: f64,
    pub argmax: Vec<f64>,
}

impl SupNorm {
    /// Distance of the maximizer from the origin.
    pub fn argmax_r(&self) -> f64 {
        crate::eigenbasis::norm(&self.argmax)
    }
}

/// Mean of `|cos|^p` over a period, `Gamma((p+1)/2) / (sqrt(pi) Gamma(p/2+1))`.
pub fn mean_abs_cos_pow(p: f64) -> f64 {
    (ln_gamma(0.5 * (p + 1.0)) - ln_gamma(0.5 * p + 1.0)).exp() / PI.sqrt()
}

fn check_p(p: f64) -> Result<()> {
    if !(p.is_finite() && p >= 1.0) {
        return invalid(format!("p must be finite and at least 1, got {p}"));
    }
    Ok(())
}

/// Interior zeros of the radial profile, where `|R|^p` has kinks.
fn radial_breaks(mode: &Eigenmode) -> Result<Vec<f64>> {
    let lam = mode.lambda();
    if lam == 0.0 {
        return Ok(Vec::new());
    }
    Ok(match mode.index() {
        ModeIndex::Disk { m, .. } => bessel_zeros_upto(m.unsigned_abs() as u32, lam, ZeroKind::Value)?
            .into_iter()
            .map(|z| z / lam)
            .filter(|&r| r < 1.0)
            .collect(),
        ModeIndex::BallRadial { .. } => (1..)
            .map(|k| k as f64 * PI / lam)
            .take_while(|&r| r < 1.0)
            .collect(),
        _ => Vec::new(),
    })
}

/// `int_0^1 |R(r)|^p r^{n-1} dr` on the composite rule split at the zeros of `R`.
pub(crate) fn radial_moment(mode: &Eigenmode, rule: &RadialRule, p: f64) -> Result<f64> {
    let breaks = radial_breaks(mode)?;
    let jacobian = mode.domain().dimension() as i32 - 1;
    let nodes = rule.nodes_with_breaks(&breaks);
    Ok(compensated_sum(
        nodes.iter().map(|&(r, w)| w * mode.radial_factor(r).abs().powf(p) * r.powi(jacobian)),
    ))
}

/// `||u||_p` on the mode's domain.
///
/// Torus and rectangle modes are products of trigonometric factors over whole
/// periods, so `int |u|^p` is `norm^p |M| mean|cos|^p` per oscillating factor.
/// Disk and ball modes use the grid's radial rule (re-split at the zeros of
/// the profile) times the closed-form angular integral.
pub fn lp_norm(mode: &Eigenmode, p: f64, grid: &QuadratureGrid) -> Result<f64> {
    check_p(p)?;
    grid.check_resolves(mode)?;
    let c = mode.norm_const().powf(p);
    let mu = mean_abs_cos_pow(p);
    let integral = match (mode.domain(), mode.index()) {
        (DomainSpec::Torus { .. }, ModeIndex::Lattice { a }) => {
            let vol = mode.domain().volume();
            if a == [0; 3] {
                c * vol
            } else {
                c * vol * mu
            }
        }
        (DomainSpec::Rectangle { width, height }, ModeIndex::Rectangle { p: px, q }) => {
            let f = |j: u32| if j == 0 { 1.0 } else { mu };
            c * width * f(px) * height * f(q)
        }
        (DomainSpec::Disk, ModeIndex::Disk { m, .. }) => {
            let rule = grid.radial_rule().expect("disk grid has a radial rule");
            let angular = if m == 0 { 2.0 * PI } else { 2.0 * PI * mu };
            radial_moment(mode, rule, p)? * angular
        }
        (DomainSpec::Ball, ModeIndex::BallRadial { .. }) => {
            let rule = grid.radial_rule().expect("ball grid has a radial rule");
            radial_moment(mode, rule, p)? * 4.0 * PI
        }
        _ => return invalid("mode index does not match its domain"),
    };
    Ok(integral.powf(1.0 / p))
}

/// `(int |f|^p)^{1/p}` by plain quadrature on the grid.
pub fn lp_norm_of<F>(grid: &QuadratureGrid, p: f64, f: F) -> Result<f64>
where
    F: Fn(&[f64]) -> f64 + Sync + Send,
{
    check_p(p)?;
    Ok(grid.integrate(Execution::default(), |x| f(x).abs().powf(p)).powf(1.0 / p))
}

/// Golden-section search for the maximum of `g` on `[a, b]`.
pub(crate) fn golden_max<G: Fn(f64) -> f64>(g: G, mut a: f64, mut b: f64) -> (f64, f64) {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    for _ in 0..100 {
        if (b - a).abs() <= 1e-14 * (1.0 + a.abs()) {
            break;
        }
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - GOLDEN * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + GOLDEN * (b - a);
            gd = g(d);
        }
    }
    if gc >= gd {
        (c, gc)
    } else {
        (d, gd)
    }
}

/// Maximum of `g` on `[a, b]`: dense samples, then golden-section refinement
/// around the best sample. Endpoints are kept exactly when they win.
pub(crate) fn dense_max<G: Fn(f64) -> f64>(g: G, a: f64, b: f64, samples: usize) -> (f64, f64) {
    let n = samples.max(2);
    let h = (b - a) / n as f64;
    let xs: Vec<f64> = (0..=n).map(|i| if i == n { b } else { a + i as f64 * h }).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| g(x)).collect();
    let mut best = 0;
    for i in 1..=n {
        if vals[i] > vals[best] {
            best = i;
        }
    }
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(n)];
    let (x, v) = golden_max(&g, lo, hi);
    if v > vals[best] {
        (x, v)
    } else {
        (xs[best], vals[best])
    }
}

/// Samples per wavelength used by [`sup_norm`].
pub const SUP_SAMPLES_PER_WAVELENGTH: f64 = 30.0;

/// `max |u|` with a maximizer. Analytic on the torus and rectangle; dense
/// radial sampling plus golden-section refinement on the disk and ball.
pub fn sup_norm(mode: &Eigenmode) -> SupNorm {
    let c = mode.norm_const();
    match (mode.domain(), mode.index()) {
        (DomainSpec::Torus { dim }, ModeIndex::Lattice { a }) => {
            let mut x = vec![0.0; dim];
            let first = a.iter().find(|&&v| v != 0).copied().unwrap_or(0);
            if first < 0 {
                // sin(b.x) = 1 at b.x = pi/2
                let b2: i64 = a.iter().map(|v| v * v).sum();
                for (xi, &ai) in x.iter_mut().zip(&a) {
                    *xi = -(ai as f64) * PI / (2.0 * b2 as f64);
                }
            }
            SupNorm { value: c, argmax: x }
        }
        (DomainSpec::Rectangle { width, height }, ModeIndex::Rectangle { p, q }) => {
            let at = |j: u32, side: f64| {
                if mode.bc() == BoundaryCondition::Dirichlet {
                    side / (2.0 * j as f64)
                } else {
                    0.0
                }
            };
            SupNorm { value: c, argmax: vec![at(p, width), at(q, height)] }
        }
        (_, ModeIndex::Disk { m, .. }) => {
            let (r, v) = radial_max(mode);
            let theta = if m < 0 { PI / (2.0 * (-m) as f64) } else { 0.0 };
            SupNorm { value: v, argmax: vec![r * theta.cos(), r * theta.sin()] }
        }
        (_, ModeIndex::BallRadial { .. }) => {
            let (r, v) = radial_max(mode);
            SupNorm { value: v, argmax: vec![r, 0.0, 0.0] }
        }
        _ => SupNorm { value: f64::NAN, argmax: Vec::new() },
    }
}

fn radial_max(mode: &Eigenmode) -> (f64, f64) {
    let samples = (SUP_SAMPLES_PER_WAVELENGTH * mode.lambda() / (2.0 * PI)).ceil() as usize;
    dense_max(|r| mode.radial_factor(r).abs(), 0.0, 1.0, samples.max(60))
}

/// One row of the per-family norm table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormRow {
    pub lambda: f64,
    pub sup: f64,
    pub l2: f64,
    pub l6: f64,
    pub ratio: f64,
    pub argmax_r: f64,
}

pub fn norm_row(mode: &Eigenmode) -> Result<NormRow> {
    let grid = QuadratureGrid::with_density(mode.domain(), mode.lambda(), DEFAULT_NODES_PER_WAVELENGTH)?;
    let s = sup_norm(mode);
    let l2 = lp_norm(mode, 2.0, &grid)?;
    let l6 = lp_norm(mode, 6.0, &grid)?;
    Ok(NormRow { lambda: mode.lambda(), sup: s.value, l2, l6, ratio: s.value / l2, argmax_r: s.argmax_r() })
}

pub fn norm_table(exec: Execution, modes: &[Eigenmode]) -> Result<Vec<NormRow>> {
    exec.map_slice(modes, norm_row).into_iter().collect()
}

/// CSV `lambda,sup,l2,l6,ratio,argmax_r`.
pub fn norm_table_csv(rows: &[NormRow]) -> String {
    let mut out = String::from("lambda,sup,l2,l6,ratio,argmax_r\n");
    for r in rows {
        let f = crate::fmt_sig;
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            f(r.lambda),
            f(r.sup),
            f(r.l2),
            f(r.l6),
            f(r.ratio),
            f(r.argmax_r)
        ));
    }
    out
}
