use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

const CONTAINS_TOL: f64 = 1e-12;

/// A flat model domain. The torus is `R^n / (2 pi Z)^n`, the rectangle is
/// `[0, width] x [0, height]`, disk and ball are unit and centered at 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Torus { dim: usize },
    Rectangle { width: f64, height: f64 },
    Disk,
    Ball,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryCondition {
    /// The only admissible choice on the torus.
    None,
    Dirichlet,
    Neumann,
}

/// Volume of the Euclidean unit ball in dimension `n`.
pub fn unit_ball_volume(n: usize) -> f64 {
    match n {
        1 => 2.0,
        2 => PI,
        3 => 4.0 * PI / 3.0,
        _ => PI.powf(n as f64 / 2.0) / statrs::function::gamma::gamma(n as f64 / 2.0 + 1.0),
    }
}

/// Surface area of the unit sphere `S^{n-1}`.
pub fn unit_sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

impl DomainSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::Torus { dim } if dim == 2 || dim == 3 => Ok(()),
            DomainSpec::Torus { dim } => invalid(format!("torus dimension {dim} not in {{2, 3}}")),
            DomainSpec::Rectangle { width, height } => {
                if width.is_finite() && height.is_finite() && width > 0.0 && height > 0.0 {
                    Ok(())
                } else {
                    invalid(format!("rectangle sides must be positive, got {width} x {height}"))
                }
            }
            DomainSpec::Disk | DomainSpec::Ball => Ok(()),
        }
    }

    pub fn dimension(&self) -> usize {
        match *self {
            DomainSpec::Torus { dim } => dim,
            DomainSpec::Rectangle { .. } | DomainSpec::Disk => 2,
            DomainSpec::Ball => 3,
        }
    }

    pub fn volume(&self) -> f64 {
        match *self {
            DomainSpec::Torus { dim } => (2.0 * PI).powi(dim as i32),
            DomainSpec::Rectangle { width, height } => width * height,
            DomainSpec::Disk => PI,
            DomainSpec::Ball => 4.0 * PI / 3.0,
        }
    }

    pub fn has_boundary(&self) -> bool {
        !matches!(self, DomainSpec::Torus { .. })
    }

    /// Radius of the largest inscribed ball (`+inf` on the torus).
    pub fn inradius(&self) -> f64 {
        match *self {
            DomainSpec::Torus { .. } => f64::INFINITY,
            DomainSpec::Rectangle { width, height } => 0.5 * width.min(height),
            DomainSpec::Disk | DomainSpec::Ball => 1.0,
        }
    }

    pub fn check_bc(&self, bc: BoundaryCondition) -> Result<()> {
        self.validate()?;
        match (self.has_boundary(), bc) {
            (false, BoundaryCondition::None) => Ok(()),
            (false, _) => invalid("the torus has no boundary; use BoundaryCondition::None"),
            (true, BoundaryCondition::None) => invalid("a boundary condition is required"),
            (true, _) => Ok(()),
        }
    }

    fn check_arity(&self, point: &[f64]) -> Result<()> {
        if point.len() != self.dimension() {
            return invalid(format!(
                "point has {} coordinates, domain dimension is {}",
                point.len(),
                self.dimension()
            ));
        }
        if point.iter().any(|x| !x.is_finite()) {
            return invalid(format!("point {point:?} is not finite"));
        }
        Ok(())
    }

    /// Distance to the boundary; negative outside, `+inf` on the torus.
    pub fn signed_boundary_distance(&self, point: &[f64]) -> f64 {
        match *self {
            DomainSpec::Torus { .. } => f64::INFINITY,
            DomainSpec::Rectangle { width, height } => {
                let (x, y) = (point[0], point[1]);
                x.min(width - x).min(y).min(height - y)
            }
            DomainSpec::Disk | DomainSpec::Ball => 1.0 - norm(point),
        }
    }

    /// `dist(x, boundary)` for a point in the closure; rejects other points.
    pub fn boundary_distance(&self, point: &[f64]) -> Result<f64> {
        self.check_point(point)?;
        Ok(self.signed_boundary_distance(point).max(0.0))
    }

    pub fn contains(&self, point: &[f64]) -> bool {
        point.len() == self.dimension()
            && point.iter().all(|x| x.is_finite())
            && self.signed_boundary_distance(point) >= -CONTAINS_TOL
    }

    pub fn check_point(&self, point: &[f64]) -> Result<()> {
        self.check_arity(point)?;
        if self.signed_boundary_distance(point) < -CONTAINS_TOL {
            return Err(Error::OutsideDomain { point: point.to_vec() });
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        match *self {
            DomainSpec::Torus { dim } => format!("torus{dim}"),
            DomainSpec::Rectangle { .. } => "rectangle".into(),
            DomainSpec::Disk => "disk".into(),
            DomainSpec::Ball => "ball".into(),
        }
    }

    /// Weyl constant `(2 pi)^{-n} vol(B^n) vol(M)`.
    pub fn weyl_constant(&self) -> f64 {
        let n = self.dimension();
        (2.0 * PI).powi(-(n as i32)) * unit_ball_volume(n) * self.volume()
    }
}

impl BoundaryCondition {
    pub fn name(&self) -> &'static str {
        match self {
            BoundaryCondition::None => "none",
            BoundaryCondition::Dirichlet => "dirichlet",
            BoundaryCondition::Neumann => "neumann",
        }
    }
}

pub(crate) fn norm(p: &[f64]) -> f64 {
    p.iter().map(|x| x * x).sum::<f64>().sqrt()
}
