use std::cmp::Ordering;

use super::domain::{BoundaryCondition, DomainSpec};
use super::mode::Eigenmode;
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::lattice::isqrt;
use crate::special::{bessel_zeros_upto, ZeroKind};

/// Largest frequency `enumerate_modes` accepts.
pub const MAX_ENUMERATION_LAMBDA: f64 = 500.0;
/// Largest number of modes one enumeration may produce.
pub const MAX_MODES: f64 = 4.0e6;

/// All modes with `lambda <= lambda_max`, counted with multiplicity and
/// sorted by `(lambda, index)`.
pub fn enumerate_modes(domain: DomainSpec, bc: BoundaryCondition, lambda_max: f64) -> Result<Vec<Eigenmode>> {
    enumerate_modes_with(Execution::default(), domain, bc, lambda_max)
}

pub fn enumerate_modes_with(
    exec: Execution,
    domain: DomainSpec,
    bc: BoundaryCondition,
    lambda_max: f64,
) -> Result<Vec<Eigenmode>> {
    domain.check_bc(bc)?;
    check_budget(domain, lambda_max)?;
    if lambda_max < 0.0 {
        return Ok(Vec::new());
    }
    let mut modes = match domain {
        DomainSpec::Torus { dim } => torus(exec, dim, lambda_max)?,
        DomainSpec::Rectangle { width, height } => rectangle(exec, width, height, bc, lambda_max)?,
        DomainSpec::Disk => disk(exec, bc, lambda_max)?,
        DomainSpec::Ball => {
            return Err(Error::Unsupported(
                "only radial ball modes are implemented, so the full ball spectrum cannot be enumerated".into(),
            ))
        }
    };
    sort_modes(&mut modes);
    Ok(modes)
}

pub(crate) fn sort_modes(modes: &mut [Eigenmode]) {
    modes.sort_by(|a, b| match a.lambda().total_cmp(&b.lambda()) {
        Ordering::Equal => a.index().cmp(&b.index()),
        o => o,
    });
}

fn check_budget(domain: DomainSpec, lambda_max: f64) -> Result<()> {
    if lambda_max.is_nan() {
        return invalid("lambda_max is NaN");
    }
    if lambda_max > MAX_ENUMERATION_LAMBDA {
        return Err(Error::ResourceLimit(format!(
            "lambda_max = {lambda_max} exceeds {MAX_ENUMERATION_LAMBDA}"
        )));
    }
    let lm = lambda_max.max(0.0);
    // Weyl count plus a generous boundary allowance
    let estimate = domain.weyl_constant() * lm.powi(domain.dimension() as i32) * 1.1 + 8.0 * (lm + 1.0).powi(2);
    if estimate > MAX_MODES {
        return Err(Error::ResourceLimit(format!(
            "about {estimate:.3e} modes below {lambda_max} on {}; limit is {MAX_MODES:.0e}",
            domain.name()
        )));
    }
    Ok(())
}

fn torus(exec: Execution, dim: usize, lambda_max: f64) -> Result<Vec<Eigenmode>> {
    let l = lambda_max.floor() as i64;
    let side = (2 * l + 1) as usize;
    let rows: Vec<Vec<Eigenmode>> = exec.map_range(0..side, |i| {
        let x = i as i64 - l;
        let mut out = Vec::new();
        let ys = if dim == 2 { 0..1 } else { 0..side };
        for j in ys {
            let y = if dim == 2 { 0 } else { j as i64 - l };
            for k in 0..side {
                let z = k as i64 - l;
                let a = if dim == 2 { [x, z, 0] } else { [x, y, z] };
                let a2: i64 = a.iter().map(|v| v * v).sum();
                if (a2 as f64).sqrt() <= lambda_max {
                    out.push(Eigenmode::torus(dim, a).expect("valid torus index"));
                }
            }
        }
        out
    });
    Ok(rows.into_iter().flatten().collect())
}

fn rectangle(
    exec: Execution,
    width: f64,
    height: f64,
    bc: BoundaryCondition,
    lambda_max: f64,
) -> Result<Vec<Eigenmode>> {
    let start = u32::from(bc == BoundaryCondition::Dirichlet);
    let pmax = (lambda_max * width / std::f64::consts::PI).floor() as u32;
    let qmax = (lambda_max * height / std::f64::consts::PI).floor() as u32;
    if pmax < start || qmax < start {
        return Ok(Vec::new());
    }
    let rows: Vec<Result<Vec<Eigenmode>>> = exec.map_range(start as usize..pmax as usize + 1, |p| {
        let mut out = Vec::new();
        for q in start..=qmax {
            let u = Eigenmode::rectangle(width, height, bc, p as u32, q)?;
            if u.lambda() <= lambda_max {
                out.push(u);
            }
        }
        Ok(out)
    });
    let mut modes = Vec::new();
    for row in rows {
        modes.extend(row?);
    }
    Ok(modes)
}

fn disk(exec: Execution, bc: BoundaryCondition, lambda_max: f64) -> Result<Vec<Eigenmode>> {
    let kind = if bc == BoundaryCondition::Dirichlet { ZeroKind::Value } else { ZeroKind::Derivative };
    // every positive zero of J_m or J_m' exceeds m
    let m_top = lambda_max.floor() as usize;
    let rows: Vec<Result<Vec<Eigenmode>>> = exec.map_range(0..m_top + 1, |m| {
        let zeros = bessel_zeros_upto(m as u32, lambda_max, kind)?;
        let mut out = Vec::with_capacity(2 * zeros.len() + 1);
        if m == 0 && bc == BoundaryCondition::Neumann {
            out.push(Eigenmode::disk_from_zero(bc, 0, 0, 0.0)?);
        }
        for (i, &z) in zeros.iter().enumerate() {
            let k = i as u32 + 1;
            out.push(Eigenmode::disk_from_zero(bc, m as i64, k, z)?);
            if m > 0 {
                out.push(Eigenmode::disk_from_zero(bc, -(m as i64), k, z)?);
            }
        }
        Ok(out)
    });
    let mut modes = Vec::new();
    for row in rows {
        modes.extend(row?);
    }
    Ok(modes)
}

/// The `n`-th distinct value of `|a|^2` over `a` in `Z^2` (`n = 1` gives 0),
/// together with one representing vector.
pub(crate) fn torus_distinct_levels(count: usize) -> Vec<(u64, [i64; 3])> {
    let mut out = Vec::with_capacity(count);
    let mut n = 0u64;
    while out.len() < count {
        let l = isqrt(n);
        for x in 0..=l {
            let rest = n - x * x;
            let y = isqrt(rest);
            if y * y == rest {
                out.push((n, [x as i64, y as i64, 0]));
                break;
            }
        }
        n += 1;
    }
    out
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::bessel_zero;

    #[test]
    fn torus_small_ball() {
        let modes = enumerate_modes(DomainSpec::Torus { dim: 2 }, BoundaryCondition::None, 5f64.sqrt() + 1e-9).unwrap();
        assert_eq!(modes.len(), 21);
        let mut counts = std::collections::BTreeMap::new();
        for u in &modes {
            *counts.entry((u.lambda() * u.lambda()).round() as i64).or_insert(0) += 1;
        }
        assert_eq!(counts.into_iter().collect::<Vec<_>>(), vec![(0, 1), (1, 4), (2, 4), (4, 4), (5, 8)]);
    }

    #[test]
    fn disk_counts() {
        let j01 = bessel_zero(0, 1).unwrap().location;
        let d = enumerate_modes(DomainSpec::Disk, BoundaryCondition::Dirichlet, j01 + 1e-9).unwrap();
        assert_eq!(d.len(), 1);
        let n = enumerate_modes(DomainSpec::Disk, BoundaryCondition::Neumann, 1.0).unwrap();
        assert_eq!(n.len(), 1);
        assert_eq!(n[0].lambda(), 0.0);
        assert!((n[0].norm_const() - 1.0 / std::f64::consts::PI.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn sorted_and_limits() {
        let modes = enumerate_modes(DomainSpec::Disk, BoundaryCondition::Neumann, 30.0).unwrap();
        assert!(modes.windows(2).all(|w| w[0].lambda() <= w[1].lambda()));
        assert!(matches!(
            enumerate_modes(DomainSpec::Disk, BoundaryCondition::Dirichlet, 501.0),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            enumerate_modes(DomainSpec::Torus { dim: 3 }, BoundaryCondition::None, 400.0),
            Err(Error::ResourceLimit(_))
        ));
        assert!(matches!(
            enumerate_modes(DomainSpec::Ball, BoundaryCondition::Dirichlet, 10.0),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn sequential_matches_parallel() {
        let a = enumerate_modes_with(Execution::Sequential, DomainSpec::Disk, BoundaryCondition::Dirichlet, 40.0).unwrap();
        let b = enumerate_modes_with(Execution::Parallel, DomainSpec::Disk, BoundaryCondition::Dirichlet, 40.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rectangle_dirichlet() {
        let r = DomainSpec::Rectangle { width: 1.0, height: 2.0 };
        let modes = enumerate_modes(r, BoundaryCondition::Dirichlet, 10.0).unwrap();
        // (pi p)^2 + (pi q / 2)^2 <= 100
        let mut expected = 0;
        for p in 1..5 {
            for q in 1..8 {
                let l2 = (std::f64::consts::PI * p as f64).powi(2) + (std::f64::consts::PI * q as f64 / 2.0).powi(2);
                if l2.sqrt() <= 10.0 {
                    expected += 1;
                }
            }
        }
        assert_eq!(modes.len(), expected);
    }

    #[test]
    fn distinct_levels() {
        let levels: Vec<u64> = torus_distinct_levels(8).into_iter().map(|l| l.0).collect();
        assert_eq!(levels, vec![0, 1, 2, 4, 5, 8, 9, 10]);
    }
}
