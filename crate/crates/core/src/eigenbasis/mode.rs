use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::domain::{norm, BoundaryCondition, DomainSpec};
use crate::error::{invalid, Result};
use crate::special::{bessel_deriv_zero, bessel_zero, jn, MAX_ORDER};

/// Quantum numbers of a separable eigenfunction.
///
/// Torus modes are indexed by a lattice vector `a`; the real basis uses
/// `cos(a.x)` when the first nonzero entry of `a` is positive and `sin(-a.x)`
/// otherwise. Disk modes carry a signed angular number: `m > 0` is the cosine
/// partner, `m < 0` the sine partner.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeIndex {
    Lattice { a: [i64; 3] },
    Rectangle { p: u32, q: u32 },
    Disk { m: i64, k: u32 },
    BallRadial { k: u32 },
}

/// An L2-normalized eigenfunction, `(Delta + lambda^2) u = 0`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Eigenmode {
    domain: DomainSpec,
    bc: BoundaryCondition,
    index: ModeIndex,
    lambda: f64,
    norm: f64,
}

/// `(2 pi)^{-n/2} exp(i a.x)`, the complex torus basis.
pub fn torus_complex_value(a: &[i64], x: &[f64]) -> Complex64 {
    let n = a.len() as i32;
    let phase: f64 = a.iter().zip(x).map(|(&ai, &xi)| ai as f64 * xi).sum();
    Complex64::from_polar((2.0 * PI).powf(-0.5 * n as f64), phase)
}

fn first_nonzero_sign(a: &[i64]) -> i64 {
    a.iter().find(|&&v| v != 0).map_or(0, |v| v.signum())
}

/// k-th positive root of `tan x = x`, which lies in `(k pi, k pi + pi/2)`.
fn tan_fixed_point(k: u32) -> f64 {
    let f = |x: f64| x.sin() - x * x.cos();
    let (mut a, mut b) = (k as f64 * PI, k as f64 * PI + 0.5 * PI);
    let fa = f(a);
    for _ in 0..200 {
        let c = 0.5 * (a + b);
        if f(c).signum() == fa.signum() {
            a = c;
        } else {
            b = c;
        }
        if b - a <= 2.0 * f64::EPSILON * b {
            break;
        }
    }
    0.5 * (a + b)
}

fn spherical_sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        1.0 - x * x / 6.0 + x.powi(4) / 120.0
    } else {
        x.sin() / x
    }
}

impl Eigenmode {
    /// Builds the normalized mode with the given quantum numbers.
    pub fn new(domain: DomainSpec, bc: BoundaryCondition, index: ModeIndex) -> Result<Self> {
        domain.check_bc(bc)?;
        match (domain, index) {
            (DomainSpec::Torus { dim }, ModeIndex::Lattice { a }) => Self::torus(dim, a),
            (DomainSpec::Rectangle { width, height }, ModeIndex::Rectangle { p, q }) => {
                Self::rectangle(width, height, bc, p, q)
            }
            (DomainSpec::Disk, ModeIndex::Disk { m, k }) => Self::disk(bc, m, k),
            (DomainSpec::Ball, ModeIndex::BallRadial { k }) => Self::ball_radial(bc, k),
            _ => invalid(format!("index {index:?} does not belong to {}", domain.name())),
        }
    }

    pub fn torus(dim: usize, a: [i64; 3]) -> Result<Self> {
        let domain = DomainSpec::Torus { dim };
        domain.validate()?;
        if dim == 2 && a[2] != 0 {
            return invalid("2-torus lattice vectors have a[2] = 0");
        }
        let a2: i64 = a.iter().map(|v| v * v).sum();
        let base = (2.0 * PI).powf(-0.5 * dim as f64);
        let norm = if a2 == 0 { base } else { SQRT_2 * base };
        Ok(Self {
            domain,
            bc: BoundaryCondition::None,
            index: ModeIndex::Lattice { a },
            lambda: (a2 as f64).sqrt(),
            norm,
        })
    }

    pub fn rectangle(width: f64, height: f64, bc: BoundaryCondition, p: u32, q: u32) -> Result<Self> {
        let domain = DomainSpec::Rectangle { width, height };
        domain.check_bc(bc)?;
        let norm = match bc {
            BoundaryCondition::Dirichlet => {
                if p == 0 || q == 0 {
                    return invalid("Dirichlet rectangle modes need p, q >= 1");
                }
                2.0 / (width * height).sqrt()
            }
            _ => {
                let eps = |j: u32| if j == 0 { 1.0 } else { 2.0 };
                (eps(p) * eps(q) / (width * height)).sqrt()
            }
        };
        let kx = p as f64 * PI / width;
        let ky = q as f64 * PI / height;
        Ok(Self { domain, bc, index: ModeIndex::Rectangle { p, q }, lambda: kx.hypot(ky), norm })
    }

    pub fn disk(bc: BoundaryCondition, m: i64, k: u32) -> Result<Self> {
        DomainSpec::Disk.check_bc(bc)?;
        let order = m.unsigned_abs();
        if order > MAX_ORDER as u64 {
            return invalid(format!("angular order {m} exceeds {MAX_ORDER}"));
        }
        let location = match (bc, k) {
            (BoundaryCondition::Dirichlet, _) => bessel_zero(order as u32, k)?.location,
            (_, 0) => 0.0,
            _ => bessel_deriv_zero(order as u32, k)?.location,
        };
        Self::disk_from_zero(bc, m, k, location)
    }

    /// Disk mode whose eigenvalue `lambda` (a zero of `J_|m|` or `J_|m|'`) is
    /// already known.
    pub(crate) fn disk_from_zero(bc: BoundaryCondition, m: i64, k: u32, lambda: f64) -> Result<Self> {
        let order = m.unsigned_abs() as u32;
        let angular = if m == 0 { 1.0 / (2.0 * PI).sqrt() } else { 1.0 / PI.sqrt() };
        let norm = match bc {
            BoundaryCondition::Dirichlet => SQRT_2 / jn(order + 1, lambda).abs() * angular,
            _ if k == 0 => {
                if m != 0 {
                    return invalid("k = 0 is only the constant Neumann mode (m = 0)");
                }
                1.0 / PI.sqrt()
            }
            _ => {
                let mf = order as f64;
                let s = (1.0 - mf * mf / (lambda * lambda)).sqrt();
                SQRT_2 / (jn(order, lambda).abs() * s) * angular
            }
        };
        Ok(Self { domain: DomainSpec::Disk, bc, index: ModeIndex::Disk { m, k }, lambda, norm })
    }

    /// Radial eigenfunctions of the unit ball, `c sin(lambda r) / (lambda r)`.
    pub fn ball_radial(bc: BoundaryCondition, k: u32) -> Result<Self> {
        DomainSpec::Ball.check_bc(bc)?;
        let (lambda, norm) = match bc {
            BoundaryCondition::Dirichlet => {
                if k == 0 {
                    return invalid("Dirichlet ball modes start at k = 1");
                }
                let l = k as f64 * PI;
                (l, l / (2.0 * PI).sqrt())
            }
            _ if k == 0 => (0.0, (3.0 / (4.0 * PI)).sqrt()),
            _ => {
                let l = tan_fixed_point(k);
                let s = 0.5 - (2.0 * l).sin() / (4.0 * l);
                (l, l / (4.0 * PI * s).sqrt())
            }
        };
        Ok(Self { domain: DomainSpec::Ball, bc, index: ModeIndex::BallRadial { k }, lambda, norm })
    }

    pub fn domain(&self) -> DomainSpec {
        self.domain
    }

    pub fn bc(&self) -> BoundaryCondition {
        self.bc
    }

    pub fn index(&self) -> ModeIndex {
        self.index
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// Normalization constant multiplying the unit-amplitude product of factors.
    pub fn norm_const(&self) -> f64 {
        self.norm
    }

    /// Bessel order for disk modes.
    pub fn disk_order(&self) -> Option<u32> {
        match self.index {
            ModeIndex::Disk { m, .. } => Some(m.unsigned_abs() as u32),
            _ => None,
        }
    }

    /// `u(point)`, rejecting points outside the closed domain.
    pub fn value(&self, point: &[f64]) -> Result<f64> {
        self.domain.check_point(point)?;
        Ok(self.value_unchecked(point))
    }

    pub(crate) fn value_unchecked(&self, p: &[f64]) -> f64 {
        match self.index {
            ModeIndex::Lattice { a } => {
                let phase: f64 = a.iter().zip(p).map(|(&ai, &xi)| ai as f64 * xi).sum();
                match first_nonzero_sign(&a) {
                    0 => self.norm,
                    1 => self.norm * phase.cos(),
                    _ => self.norm * (-phase).sin(),
                }
            }
            ModeIndex::Rectangle { .. } => self.norm * self.rect_factor(0, p[0]) * self.rect_factor(1, p[1]),
            ModeIndex::Disk { .. } => {
                let r = p[0].hypot(p[1]);
                self.radial_factor(r) * self.angular_factor(p[1].atan2(p[0]))
            }
            ModeIndex::BallRadial { .. } => self.radial_factor(norm(p)),
        }
    }

    /// Disk/ball: the radial profile including the normalization constant, so
    /// that `u = radial_factor(r) * angular_factor(theta)`.
    pub fn radial_factor(&self, r: f64) -> f64 {
        match self.index {
            ModeIndex::Disk { m, .. } => {
                if self.lambda == 0.0 {
                    self.norm
                } else {
                    self.norm * jn(m.unsigned_abs() as u32, self.lambda * r)
                }
            }
            ModeIndex::BallRadial { .. } => self.norm * spherical_sinc(self.lambda * r),
            _ => f64::NAN,
        }
    }

    /// Disk: `cos(m theta)`, `sin(|m| theta)` or 1. Ball: 1.
    pub fn angular_factor(&self, theta: f64) -> f64 {
        match self.index {
            ModeIndex::Disk { m, .. } if m > 0 => (m as f64 * theta).cos(),
            ModeIndex::Disk { m, .. } if m < 0 => (-m as f64 * theta).sin(),
            ModeIndex::Disk { .. } | ModeIndex::BallRadial { .. } => 1.0,
            _ => f64::NAN,
        }
    }

    /// Rectangle: unit-amplitude factor along `axis` (0 = x, 1 = y).
    pub fn rect_factor(&self, axis: usize, x: f64) -> f64 {
        match (self.domain, self.index) {
            (DomainSpec::Rectangle { width, height }, ModeIndex::Rectangle { p, q }) => {
                let (j, side) = if axis == 0 { (p, width) } else { (q, height) };
                let arg = j as f64 * PI * x / side;
                if self.bc == BoundaryCondition::Dirichlet {
                    arg.sin()
                } else {
                    arg.cos()
                }
            }
            _ => f64::NAN,
        }
    }

    /// The two index columns of the CSV export.
    pub fn index_fields(&self) -> (String, String) {
        match self.index {
            ModeIndex::Lattice { a } => match self.domain.dimension() {
                2 => (a[0].to_string(), a[1].to_string()),
                _ => (a[0].to_string(), format!("{};{}", a[1], a[2])),
            },
            ModeIndex::Rectangle { p, q } => (p.to_string(), q.to_string()),
            ModeIndex::Disk { m, k } => (m.to_string(), k.to_string()),
            ModeIndex::BallRadial { k } => ("0".into(), k.to_string()),
        }
    }
}

/// Free-function form of [`Eigenmode::value`].
pub fn evaluate_mode(mode: &Eigenmode, point: &[f64]) -> Result<f64> {
    mode.value(point)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn disk_ground_state_value_at_center() {
        let u = Eigenmode::disk(BoundaryCondition::Dirichlet, 0, 1).unwrap();
        // 1 / (sqrt(pi) |J_1(j_{0,1})|), J_1(2.404825557695773) = 0.5191474972894669
        let expected = 1.0 / (PI.sqrt() * 0.5191474972894669);
        assert_abs_diff_eq!(u.value(&[0.0, 0.0]).unwrap(), expected, epsilon = 1e-12);
        assert_abs_diff_eq!(expected, 1.0867616, epsilon = 1e-6);
        assert!(u.value(&[1.0, 0.0]).unwrap().abs() < 1e-10);
        assert!(u.value(&[0.9, 0.5]).is_err());
    }

    #[test]
    fn torus_real_mode_amplitude() {
        for a in [[1, 2, 0], [-1, 2, 0], [0, -3, 0]] {
            let u = Eigenmode::torus(2, a).unwrap();
            let mut max: f64 = 0.0;
            for i in 0..64 {
                for j in 0..64 {
                    let x = [2.0 * PI * i as f64 / 64.0, 2.0 * PI * j as f64 / 64.0];
                    max = max.max(u.value(&x).unwrap().abs());
                }
            }
            assert!(max <= SQRT_2 / (2.0 * PI) + 1e-12);
        }
        let z = torus_complex_value(&[1, 2], &[0.3, 1.7]);
        assert_abs_diff_eq!(z.norm(), 1.0 / (2.0 * PI), epsilon = 1e-15);
    }

    #[test]
    fn sin_and_cos_partners() {
        let c = Eigenmode::torus(2, [1, 2, 0]).unwrap();
        let s = Eigenmode::torus(2, [-1, -2, 0]).unwrap();
        let x = [0.4, 0.9];
        let phase: f64 = 0.4 + 1.8;
        assert_abs_diff_eq!(c.value(&x).unwrap(), c.norm_const() * phase.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(s.value(&x).unwrap(), s.norm_const() * phase.sin(), epsilon = 1e-15);
    }

    #[test]
    fn ball_modes() {
        let u = Eigenmode::ball_radial(BoundaryCondition::Dirichlet, 2).unwrap();
        assert_abs_diff_eq!(u.lambda(), 2.0 * PI, epsilon = 1e-15);
        assert!(u.value(&[0.0, 0.6, 0.8]).unwrap().abs() < 1e-12);
        let n = Eigenmode::ball_radial(BoundaryCondition::Neumann, 1).unwrap();
        // first positive root of tan x = x
        assert_abs_diff_eq!(n.lambda(), 4.493409457909064, epsilon = 1e-12);
    }

    #[test]
    fn rejects_mismatched_index() {
        assert!(Eigenmode::new(DomainSpec::Disk, BoundaryCondition::Dirichlet, ModeIndex::Rectangle { p: 1, q: 1 })
            .is_err());
        assert!(Eigenmode::disk(BoundaryCondition::Dirichlet, 0, 0).is_err());
        assert!(Eigenmode::disk(BoundaryCondition::Neumann, 2, 0).is_err());
        assert!(Eigenmode::torus(2, [0, 0, 1]).is_err());
    }
}
