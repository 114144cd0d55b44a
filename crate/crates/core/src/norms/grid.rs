use std::f64::consts::PI;

use crate::eigenbasis::{DomainSpec, Eigenmode};
use crate::error::{invalid, Error, Result};
use crate::exec::{compensated_sum, Execution};
use crate::quadrature::{composite_nodes, GaussLegendre};

/// Nodes per wavelength a grid must provide for a mode to count as resolved.
pub const MIN_NODES_PER_WAVELENGTH: f64 = 10.0;
/// Default nodes per wavelength.
pub const DEFAULT_NODES_PER_WAVELENGTH: usize = 16;

const MIN_TORUS_NODES: usize = 32;
const MIN_ANGULAR_NODES: usize = 64;
const MAX_PANEL: f64 = 0.25;

/// Tensor-product quadrature on one of the model domains.
///
/// Torus: uniform trapezoid per axis. Rectangle: composite Gauss-Legendre per
/// axis. Disk: composite Gauss-Legendre in `r` (weights include `r`) times a
/// uniform trapezoid in `theta`. Ball: radial rule with weight `4 pi r^2`;
/// integrands are sampled on the ray `(r, 0, 0)`, so only radial functions are
/// integrated correctly.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureGrid {
    domain: DomainSpec,
    axes: Axes,
    resolved_lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Axes {
    Torus { dim: usize, n: usize },
    Rectangle { order: usize, panel: (f64, f64), x: Vec<(f64, f64)>, y: Vec<(f64, f64)> },
    Polar { radial: RadialRule, angular: usize },
    Radial { radial: RadialRule },
}

/// Composite Gauss-Legendre rule on `[0, 1]`, kept together with its layout
/// so that integrands with kinks can be re-split.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct RadialRule {
    pub order: usize,
    pub panel: f64,
    /// Panel width in the boundary layer `[1 - boundary_layer, 1]`.
    pub boundary_panel: f64,
    pub boundary_layer: f64,
    pub nodes: Vec<(f64, f64)>,
}

impl RadialRule {
    pub(crate) fn new(lambda: f64, order: usize) -> Self {
        let wavelength = if lambda > 0.0 { 2.0 * PI / lambda } else { f64::INFINITY };
        let panel = wavelength.min(MAX_PANEL);
        let boundary_layer = wavelength.min(0.5);
        let boundary_panel = 0.5 * panel;
        let mut rule = Self { order, panel, boundary_panel, boundary_layer, nodes: Vec::new() };
        rule.nodes = rule.nodes_with_breaks(&[]);
        rule
    }

    /// Nodes on `[0, 1]` with extra cuts at `breaks`.
    pub(crate) fn nodes_with_breaks(&self, breaks: &[f64]) -> Vec<(f64, f64)> {
        self.nodes_on(0.0, 1.0, breaks)
    }

    pub(crate) fn nodes_on(&self, a: f64, b: f64, breaks: &[f64]) -> Vec<(f64, f64)> {
        let gl = GaussLegendre::new(self.order);
        let split = 1.0 - self.boundary_layer;
        let mut inner_breaks: Vec<f64> = breaks.iter().copied().filter(|&c| c < split).collect();
        let mut outer_breaks: Vec<f64> = breaks.iter().copied().filter(|&c| c > split).collect();
        inner_breaks.sort_by(f64::total_cmp);
        outer_breaks.sort_by(f64::total_cmp);
        let mut out = Vec::new();
        if a < split {
            out.extend(composite_nodes(&gl, a, split.min(b), &inner_breaks, self.panel));
        }
        if b > split {
            out.extend(composite_nodes(&gl, split.max(a), b, &outer_breaks, self.boundary_panel));
        }
        out
    }

    /// Frequency resolved at the minimum node density.
    fn resolved_lambda(&self) -> f64 {
        panel_resolution(self.panel.max(self.boundary_panel), self.order)
    }
}

fn axis_panel(length: f64, lambda: f64) -> f64 {
    let wavelength = if lambda > 0.0 { 2.0 * PI / lambda } else { f64::INFINITY };
    let panels = (length / wavelength.min(length / 4.0)).ceil();
    length / panels
}

fn gl_axis(length: f64, panel: f64, order: usize) -> Vec<(f64, f64)> {
    composite_nodes(&GaussLegendre::new(order), 0.0, length, &[], panel * (1.0 + 1e-12))
}

fn panel_resolution(panel: f64, order: usize) -> f64 {
    2.0 * PI * order as f64 / (MIN_NODES_PER_WAVELENGTH * panel)
}

impl QuadratureGrid {
    /// Grid resolving every mode with frequency up to `lambda_max` at the
    /// default density.
    pub fn new(domain: DomainSpec, lambda_max: f64) -> Result<Self> {
        Self::with_density(domain, lambda_max, DEFAULT_NODES_PER_WAVELENGTH)
    }

    pub fn with_density(domain: DomainSpec, lambda_max: f64, nodes_per_wavelength: usize) -> Result<Self> {
        domain.validate()?;
        if !(lambda_max >= 0.0 && lambda_max.is_finite()) {
            return invalid(format!("lambda_max must be finite and nonnegative, got {lambda_max}"));
        }
        if (nodes_per_wavelength as f64) < MIN_NODES_PER_WAVELENGTH {
            return invalid(format!(
                "density {nodes_per_wavelength} is below {MIN_NODES_PER_WAVELENGTH} nodes per wavelength"
            ));
        }
        let d = nodes_per_wavelength;
        let lam = lambda_max.max(1.0);
        let (axes, resolved) = match domain {
            DomainSpec::Torus { dim } => {
                let n = ((d as f64 * lam).ceil() as usize).max(MIN_TORUS_NODES);
                let cells = (n as f64).powi(dim as i32);
                if cells > 2.0e7 {
                    return Err(Error::ResourceLimit(format!("{cells:.2e} torus grid nodes")));
                }
                (Axes::Torus { dim, n }, n as f64 / MIN_NODES_PER_WAVELENGTH)
            }
            DomainSpec::Rectangle { width, height } => {
                let panel = (axis_panel(width, lam), axis_panel(height, lam));
                let res = panel_resolution(panel.0.max(panel.1), d);
                let (x, y) = (gl_axis(width, panel.0, d), gl_axis(height, panel.1, d));
                (Axes::Rectangle { order: d, panel, x, y }, res)
            }
            DomainSpec::Disk => {
                let radial = RadialRule::new(lam, d);
                let angular = ((d as f64 * lam).ceil() as usize).max(MIN_ANGULAR_NODES);
                let res = radial.resolved_lambda().min(angular as f64 / MIN_NODES_PER_WAVELENGTH);
                (Axes::Polar { radial, angular }, res)
            }
            DomainSpec::Ball => {
                let radial = RadialRule::new(lam, d);
                let res = radial.resolved_lambda();
                (Axes::Radial { radial }, res)
            }
        };
        Ok(Self { domain, axes, resolved_lambda: resolved })
    }

    /// Uniform `n`-point-per-axis torus grid.
    pub fn torus_uniform(dim: usize, n: usize) -> Result<Self> {
        let domain = DomainSpec::Torus { dim };
        domain.validate()?;
        if n < 2 {
            return invalid("a torus grid needs at least 2 nodes per axis");
        }
        Ok(Self { domain, axes: Axes::Torus { dim, n }, resolved_lambda: n as f64 / MIN_NODES_PER_WAVELENGTH })
    }

    /// The same layout with twice the node density along every axis.
    pub fn refined(&self) -> Self {
        let mut g = self.clone();
        match &mut g.axes {
            Axes::Torus { n, .. } => *n *= 2,
            Axes::Rectangle { order, panel, x, y } => {
                *panel = (0.5 * panel.0, 0.5 * panel.1);
                if let DomainSpec::Rectangle { width, height } = self.domain {
                    *x = gl_axis(width, panel.0, *order);
                    *y = gl_axis(height, panel.1, *order);
                }
            }
            Axes::Polar { radial, angular } => {
                *radial = radial.halved();
                *angular *= 2;
            }
            Axes::Radial { radial } => *radial = radial.halved(),
        }
        g.resolved_lambda *= 2.0;
        g
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn resolved_lambda(&self) -> f64 {
        self.resolved_lambda
    }

    /// Rejects modes whose frequency exceeds what the grid resolves.
    pub fn check_resolves(&self, mode: &Eigenmode) -> Result<()> {
        if mode.domain() != self.domain {
            return invalid(format!("grid on {} used for a mode on {}", self.domain.name(), mode.domain().name()));
        }
        if mode.lambda() > self.resolved_lambda * (1.0 + 1e-12) {
            return Err(Error::UnderResolved(format!(
                "mode frequency {} above resolved frequency {}",
                mode.lambda(),
                self.resolved_lambda
            )));
        }
        Ok(())
    }

    pub(crate) fn radial_rule(&self) -> Option<&RadialRule> {
        match &self.axes {
            Axes::Polar { radial, .. } | Axes::Radial { radial } => Some(radial),
            _ => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.axes {
            Axes::Torus { dim, n } => n.pow(*dim as u32),
            Axes::Rectangle { x, y, .. } => x.len() * y.len(),
            Axes::Polar { radial, angular } => radial.nodes.len() * angular,
            Axes::Radial { radial } => radial.nodes.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Number of nodes along the outermost loop; `node` indices are laid out
    /// row-major with this axis first.
    fn rows(&self) -> usize {
        match &self.axes {
            Axes::Torus { n, .. } => *n,
            Axes::Rectangle { x, .. } => x.len(),
            Axes::Polar { radial, .. } | Axes::Radial { radial } => radial.nodes.len(),
        }
    }

    /// Largest spacing between neighboring nodes along any axis.
    pub fn max_spacing(&self) -> f64 {
        let gap = |nodes: &[(f64, f64)], lo: f64, hi: f64| {
            let mut prev = lo;
            let mut g: f64 = 0.0;
            for &(x, _) in nodes {
                g = g.max(x - prev);
                prev = x;
            }
            g.max(hi - prev)
        };
        match &self.axes {
            Axes::Torus { n, .. } => 2.0 * PI / *n as f64,
            Axes::Rectangle { x, y, .. } => match self.domain {
                DomainSpec::Rectangle { width, height } => gap(x, 0.0, width).max(gap(y, 0.0, height)),
                _ => unreachable!(),
            },
            Axes::Polar { radial, angular } => gap(&radial.nodes, 0.0, 1.0).max(2.0 * PI / *angular as f64),
            Axes::Radial { radial } => gap(&radial.nodes, 0.0, 1.0),
        }
    }

    /// Node `i` as `(point, weight)`; unused coordinates are zero.
    pub fn node(&self, i: usize) -> ([f64; 3], f64) {
        match &self.axes {
            Axes::Torus { dim, n } => {
                let h = 2.0 * PI / *n as f64;
                let mut p = [0.0; 3];
                let mut rest = i;
                for slot in (0..*dim).rev() {
                    p[slot] = (rest % n) as f64 * h;
                    rest /= n;
                }
                (p, h.powi(*dim as i32))
            }
            Axes::Rectangle { x, y, .. } => {
                let (xi, wx) = x[i / y.len()];
                let (yi, wy) = y[i % y.len()];
                ([xi, yi, 0.0], wx * wy)
            }
            Axes::Polar { radial, angular } => {
                let (r, wr) = radial.nodes[i / angular];
                let theta = 2.0 * PI * (i % angular) as f64 / *angular as f64;
                ([r * theta.cos(), r * theta.sin(), 0.0], wr * r * 2.0 * PI / *angular as f64)
            }
            Axes::Radial { radial } => {
                let (r, wr) = radial.nodes[i];
                ([r, 0.0, 0.0], wr * 4.0 * PI * r * r)
            }
        }
    }

    /// `sum_i w_i f(x_i)`, parallel over rows, compensated sequential reduction.
    pub fn integrate<F>(&self, exec: Execution, f: F) -> f64
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        let dim = self.domain.dimension();
        let per_row = self.len() / self.rows().max(1);
        let rows = exec.map_range(0..self.rows(), |row| {
            compensated_sum((row * per_row..(row + 1) * per_row).map(|i| {
                let (p, w) = self.node(i);
                w * f(&p[..dim])
            }))
        });
        compensated_sum(rows)
    }

    /// `f` at every node, in node order.
    pub fn sample<F>(&self, exec: Execution, f: F) -> Vec<f64>
    where
        F: Fn(&[f64]) -> f64 + Sync + Send,
    {
        let dim = self.domain.dimension();
        exec.map_range(0..self.len(), |i| f(&self.node(i).0[..dim]))
    }

    /// Sum of all weights.
    pub fn total_weight(&self) -> f64 {
        self.integrate(Execution::Sequential, |_| 1.0)
    }
}

impl RadialRule {
    fn halved(&self) -> Self {
        let mut r = self.clone();
        r.panel *= 0.5;
        r.boundary_panel *= 0.5;
        r.nodes = r.nodes_with_breaks(&[]);
        r
    }
}
