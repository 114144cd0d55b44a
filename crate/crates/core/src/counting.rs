//! Eigenvalue counting, lattice representation numbers and multiplicities.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::eigenbasis::{enumerate_modes_with, BoundaryCondition, DomainSpec};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::fit::least_squares_line;
use crate::lattice::{ball_count, isqrt, max_norm_sq};
use crate::special::{bessel_zeros_upto, ZeroKind};

pub const MAX_COUNT_LAMBDA: f64 = 500.0;
pub const MAX_DISK_COUNT_LAMBDA: f64 = 200.0;
/// Relative gap below which two eigenvalues are treated as one cluster.
pub const DEGENERACY_TOL: f64 = 1e-9;

/// `N(lambda) = #{j : lambda_j <= lambda}` next to the Weyl term `gamma lambda^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CountReport {
    pub lambda: f64,
    pub count: u64,
    pub prediction: f64,
    /// `count / prediction`; NaN when the prediction is zero.
    pub ratio: f64,
}

pub fn weyl_count(domain: DomainSpec, bc: BoundaryCondition, lambda: f64) -> Result<CountReport> {
    weyl_count_with(Execution::default(), domain, bc, lambda)
}

pub fn weyl_count_with(exec: Execution, domain: DomainSpec, bc: BoundaryCondition, lambda: f64) -> Result<CountReport> {
    domain.check_bc(bc)?;
    if lambda.is_nan() {
        return invalid("lambda is NaN");
    }
    let limit = if domain == DomainSpec::Disk { MAX_DISK_COUNT_LAMBDA } else { MAX_COUNT_LAMBDA };
    if lambda > limit {
        return Err(Error::ResourceLimit(format!("lambda = {lambda} exceeds {limit} on {}", domain.name())));
    }
    let count = if lambda < 0.0 {
        0
    } else {
        match domain {
            DomainSpec::Torus { dim } => ball_count(dim, max_norm_sq(lambda).unwrap_or(0)),
            DomainSpec::Rectangle { width, height } => rectangle_count(width, height, bc, lambda),
            DomainSpec::Disk => disk_count(exec, bc, lambda)?,
            DomainSpec::Ball => return Err(Error::Unsupported("only radial ball modes are implemented".into())),
        }
    };
    let prediction = domain.weyl_constant() * lambda.max(0.0).powi(domain.dimension() as i32);
    let ratio = if prediction > 0.0 { count as f64 / prediction } else { f64::NAN };
    Ok(CountReport { lambda, count, prediction, ratio })
}

fn rectangle_count(width: f64, height: f64, bc: BoundaryCondition, lambda: f64) -> u64 {
    let start = u32::from(bc == BoundaryCondition::Dirichlet);
    let pmax = (lambda * width / PI).floor() as u32;
    let qmax = (lambda * height / PI).floor() as u32;
    let mut n = 0;
    for p in start..=pmax {
        for q in start..=qmax {
            let kx = p as f64 * PI / width;
            let ky = q as f64 * PI / height;
            if kx.hypot(ky) <= lambda {
                n += 1;
            }
        }
    }
    n
}

fn disk_count(exec: Execution, bc: BoundaryCondition, lambda: f64) -> Result<u64> {
    let kind = if bc == BoundaryCondition::Dirichlet { ZeroKind::Value } else { ZeroKind::Derivative };
    let per_order = exec.map_range(0..lambda.floor() as usize + 1, |m| {
        bessel_zeros_upto(m as u32, lambda, kind).map(|z| z.len() as u64 * if m == 0 { 1 } else { 2 })
    });
    let mut total = u64::from(bc == BoundaryCondition::Neumann);
    for c in per_order {
        total += c?;
    }
    Ok(total)
}

/// CSV `lambda,count,prediction,ratio`.
pub fn weyl_csv(rows: &[CountReport]) -> String {
    let mut out = String::from("lambda,count,prediction,ratio\n");
    for r in rows {
        out.push_str(&format!(
            "{},{},{},{}\n",
            crate::fmt_sig(r.lambda),
            r.count,
            crate::fmt_sig(r.prediction),
            crate::fmt_sig(r.ratio)
        ));
    }
    out
}

pub const MAX_SQUARES_N2: u64 = 1_000_000_000_000;
pub const MAX_SQUARES_N3: u64 = 1_000_000;

/// `r_n(N)`: ordered integer tuples (signs included) with `sum x_i^2 = N`.
pub fn sum_of_squares_count(n_value: u64, dim: usize) -> Result<u64> {
    match dim {
        2 if n_value <= MAX_SQUARES_N2 => Ok(r2(n_value)),
        3 if n_value <= MAX_SQUARES_N3 => {
            let l = isqrt(n_value);
            Ok((0..=l).map(|z| if z == 0 { r2(n_value) } else { 2 * r2(n_value - z * z) }).sum())
        }
        2 | 3 => Err(Error::ResourceLimit(format!("N = {n_value} too large for dimension {dim}"))),
        _ => invalid(format!("dimension {dim} not in {{2, 3}}")),
    }
}

fn r2(n: u64) -> u64 {
    let l = isqrt(n);
    let mut count = 0;
    for x in 0..=l {
        let rest = n - x * x;
        let y = isqrt(rest);
        if y * y == rest {
            // (+-x, +-y) with zeros counted once
            count += match (x == 0, y == 0) {
                (true, true) => 1,
                (true, false) | (false, true) => 2,
                (false, false) => 4,
            };
        }
    }
    count
}

/// Dimension of the eigenspace of `-Delta` for the eigenvalue `lambda_sq`,
/// grouping eigenvalues within relative distance `tolerance`. Zero when
/// `lambda_sq` is not an eigenvalue.
pub fn eigenvalue_multiplicity(
    domain: DomainSpec,
    bc: BoundaryCondition,
    lambda_sq: f64,
    tolerance: f64,
) -> Result<u64> {
    domain.check_bc(bc)?;
    if !(lambda_sq.is_finite() && tolerance >= 0.0) {
        return invalid("lambda_sq must be finite and tolerance nonnegative");
    }
    if lambda_sq < 0.0 {
        return Ok(0);
    }
    let near = |mu_sq: f64| (mu_sq - lambda_sq).abs() <= tolerance * lambda_sq.max(1.0);
    match domain {
        DomainSpec::Torus { dim } => {
            let n = lambda_sq.round();
            if near(n) {
                sum_of_squares_count(n as u64, dim)
            } else {
                Ok(0)
            }
        }
        DomainSpec::Ball => Err(Error::Unsupported("only radial ball modes are implemented".into())),
        _ => {
            let top = (lambda_sq + tolerance * lambda_sq.max(1.0)).sqrt() * (1.0 + 1e-12);
            let modes = enumerate_modes_with(Execution::default(), domain, bc, top)?;
            Ok(modes.iter().filter(|u| near(u.lambda() * u.lambda())).count() as u64)
        }
    }
}

/// A group of numerically coincident eigenvalues.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Cluster {
    pub lambda: f64,
    pub multiplicity: u64,
}

/// Eigenvalue clusters up to `lambda_max` (consecutive `lambda` within
/// relative gap `tolerance`).
pub fn multiplicity_clusters(
    domain: DomainSpec,
    bc: BoundaryCondition,
    lambda_max: f64,
    tolerance: f64,
) -> Result<Vec<Cluster>> {
    let modes = enumerate_modes_with(Execution::default(), domain, bc, lambda_max)?;
    let mut out: Vec<Cluster> = Vec::new();
    for u in &modes {
        match out.last_mut() {
            Some(c) if (u.lambda() - c.lambda).abs() <= tolerance * c.lambda.max(1e-300) || u.lambda() == c.lambda => {
                c.multiplicity += 1
            }
            _ => out.push(Cluster { lambda: u.lambda(), multiplicity: 1 }),
        }
    }
    Ok(out)
}

/// Largest multiplicity, and largest `multiplicity / lambda^{n-1}` over
/// nonzero eigenvalues up to `lambda_max`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplicityReport {
    pub lambda_max: f64,
    pub max_multiplicity: u64,
    pub max_multiplicity_at: f64,
    pub max_ratio: f64,
    pub max_ratio_at: f64,
}

pub fn multiplicity_report(domain: DomainSpec, bc: BoundaryCondition, lambda_max: f64) -> Result<MultiplicityReport> {
    let clusters = multiplicity_clusters(domain, bc, lambda_max, DEGENERACY_TOL)?;
    let n1 = domain.dimension() as i32 - 1;
    let mut rep =
        MultiplicityReport { lambda_max, max_multiplicity: 0, max_multiplicity_at: 0.0, max_ratio: 0.0, max_ratio_at: 0.0 };
    for c in clusters {
        if c.multiplicity > rep.max_multiplicity {
            rep.max_multiplicity = c.multiplicity;
            rep.max_multiplicity_at = c.lambda;
        }
        if c.lambda > 0.0 {
            let ratio = c.multiplicity as f64 / c.lambda.powi(n1);
            if ratio > rep.max_ratio {
                rep.max_ratio = ratio;
                rep.max_ratio_at = c.lambda;
            }
        }
    }
    Ok(rep)
}

/// One row of the `lambda^2 = 5^l` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogGrowthRow {
    pub l: u32,
    pub lambda_sq: u64,
    pub lambda: f64,
    /// `r_2(5^l)`, the multiplicity.
    pub r2: u64,
    /// Extremal lower bound `sqrt(r2 / |T^2|)`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogGrowthTable {
    pub rows: Vec<LogGrowthRow>,
    /// Slope of `log bound` against `log log lambda` over `l >= 1`; absent
    /// with fewer than two such rows.
    pub exponent: Option<f64>,
    pub intercept: Option<f64>,
    pub residual: Option<f64>,
}

pub const MAX_LOG_GROWTH_L: u32 = 12;

pub fn torus_log_growth_check(l_max: u32) -> Result<LogGrowthTable> {
    if l_max > MAX_LOG_GROWTH_L {
        return invalid(format!("l_max = {l_max} exceeds {MAX_LOG_GROWTH_L}"));
    }
    let volume = DomainSpec::Torus { dim: 2 }.volume();
    let rows = (0..=l_max)
        .map(|l| {
            let lambda_sq = 5u64.pow(l);
            let r2 = sum_of_squares_count(lambda_sq, 2)?;
            Ok(LogGrowthRow { l, lambda_sq, lambda: (lambda_sq as f64).sqrt(), r2, bound: (r2 as f64 / volume).sqrt() })
        })
        .collect::<Result<Vec<_>>>()?;
    let (x, y): (Vec<f64>, Vec<f64>) =
        rows.iter().filter(|r| r.l >= 1).map(|r| (r.lambda.ln().ln(), r.bound.ln())).unzip();
    let fit = least_squares_line(&x, &y);
    Ok(LogGrowthTable {
        rows,
        exponent: fit.map(|f| f.0),
        intercept: fit.map(|f| f.1),
        residual: fit.map(|f| f.2),
    })
}

/// CSV `l,lambda_sq,r2,bound`.
pub fn log_growth_csv(table: &LogGrowthTable) -> String {
    let mut out = String::from("l,lambda_sq,r2,bound\n");
    for r in &table.rows {
        out.push_str(&format!("{},{},{},{}\n", r.l, r.lambda_sq, r.r2, crate::fmt_sig(r.bound)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenbasis::enumerate_modes;
    use approx::assert_abs_diff_eq;

    use BoundaryCondition::{Dirichlet, Neumann};

    const T2: DomainSpec = DomainSpec::Torus { dim: 2 };

    /// Brute-force lattice count over the full square.
    fn lattice_oracle(lambda: f64) -> u64 {
        let l = lambda.floor() as i64;
        let mut n = 0;
        for x in -l..=l {
            for y in -l..=l {
                if ((x * x + y * y) as f64).sqrt() <= lambda {
                    n += 1;
                }
            }
        }
        n
    }

    #[test]
    fn torus_weyl_at_100() {
        let rep = weyl_count(T2, BoundaryCondition::None, 100.0).unwrap();
        assert_eq!(rep.count, lattice_oracle(100.0));
        assert_abs_diff_eq!(rep.prediction, PI * 1e4, epsilon = 1e-8);
        assert!((0.99..=1.01).contains(&rep.ratio));
    }

    #[test]
    fn disk_weyl_at_100() {
        let rep = weyl_count(DomainSpec::Disk, Dirichlet, 100.0).unwrap();
        assert_abs_diff_eq!(rep.prediction / 1e4, 0.25, epsilon = 1e-15);
        assert!((0.95..=1.0).contains(&rep.ratio), "{rep:?}");
        let modes = enumerate_modes(DomainSpec::Disk, Dirichlet, 100.0).unwrap();
        assert_eq!(rep.count, modes.len() as u64);
    }

    #[test]
    fn counts_below_ground_state() {
        assert_eq!(weyl_count(DomainSpec::Disk, Dirichlet, 2.0).unwrap().count, 0);
        assert_eq!(weyl_count(DomainSpec::Disk, Neumann, 1.0).unwrap().count, 1);
        let r = DomainSpec::Rectangle { width: 1.0, height: 1.0 };
        assert_eq!(weyl_count(r, Dirichlet, 4.0).unwrap().count, 0);
        assert_eq!(weyl_count(r, Neumann, 3.0).unwrap().count, 1);
        assert!(weyl_count(DomainSpec::Disk, Dirichlet, 250.0).is_err());
    }

    #[test]
    fn rectangle_count_matches_enumeration() {
        let r = DomainSpec::Rectangle { width: 1.3, height: 0.7 };
        for bc in [Dirichlet, Neumann] {
            for lam in [5.0, 20.0, 61.5] {
                let n = weyl_count(r, bc, lam).unwrap().count;
                assert_eq!(n, enumerate_modes(r, bc, lam).unwrap().len() as u64);
            }
        }
    }

    #[test]
    fn squares_examples() {
        assert_eq!(sum_of_squares_count(5, 2).unwrap(), 8);
        assert_eq!(sum_of_squares_count(3, 2).unwrap(), 0);
        assert_eq!(sum_of_squares_count(1, 3).unwrap(), 6);
        assert_eq!(sum_of_squares_count(0, 2).unwrap(), 1);
        for l in 0..=10 {
            assert_eq!(sum_of_squares_count(5u64.pow(l), 2).unwrap(), 4 * (l as u64 + 1));
        }
        assert!(sum_of_squares_count(MAX_SQUARES_N3 + 1, 3).is_err());
        assert!(sum_of_squares_count(5, 4).is_err());
    }

    #[test]
    fn torus_count_is_sum_of_representations() {
        for dim in [2, 3] {
            let d = DomainSpec::Torus { dim };
            let lam = 9.5f64;
            let direct = weyl_count(d, BoundaryCondition::None, lam).unwrap().count;
            let summed: u64 = (0..=90).map(|n| sum_of_squares_count(n, dim).unwrap()).sum();
            assert_eq!(direct, summed);
        }
    }

    #[test]
    fn multiplicities() {
        assert_eq!(eigenvalue_multiplicity(T2, BoundaryCondition::None, 5.0, DEGENERACY_TOL).unwrap(), 8);
        assert_eq!(eigenvalue_multiplicity(T2, BoundaryCondition::None, 0.0, DEGENERACY_TOL).unwrap(), 1);
        assert_eq!(eigenvalue_multiplicity(T2, BoundaryCondition::None, 3.0, DEGENERACY_TOL).unwrap(), 0);
        assert_eq!(eigenvalue_multiplicity(T2, BoundaryCondition::None, 5.5, DEGENERACY_TOL).unwrap(), 0);
        let j11 = 3.831705970207512f64;
        assert_eq!(eigenvalue_multiplicity(DomainSpec::Disk, Dirichlet, j11 * j11, 1e-9).unwrap(), 2);
        assert_eq!(eigenvalue_multiplicity(DomainSpec::Disk, Dirichlet, 10.0, 1e-9).unwrap(), 0);
    }

    #[test]
    fn disk_clusters_at_most_two() {
        let rep = multiplicity_report(DomainSpec::Disk, Dirichlet, 100.0).unwrap();
        assert_eq!(rep.max_multiplicity, 2);
        let t = multiplicity_report(T2, BoundaryCondition::None, 100.0).unwrap();
        assert!(t.max_multiplicity >= 8 && t.max_ratio.is_finite());
    }

    #[test]
    fn log_growth_table() {
        let t = torus_log_growth_check(12).unwrap();
        assert_eq!(t.rows[0].r2, 4);
        assert_abs_diff_eq!(t.rows[0].bound, 1.0 / PI, epsilon = 1e-15);
        assert_eq!(t.rows[1].r2, 8);
        assert_abs_diff_eq!(t.rows[1].bound, 2f64.sqrt() / PI, epsilon = 1e-15);
        assert_eq!(t.rows[12].r2, 52);
        let e = t.exponent.unwrap();
        assert!((0.35..=0.55).contains(&e), "{e}");
        assert!(torus_log_growth_check(13).is_err());
        assert!(torus_log_growth_check(1).unwrap().exponent.is_none());
    }

    #[test]
    fn csv_headers() {
        let rows = vec![weyl_count(T2, BoundaryCondition::None, 3.0).unwrap()];
        assert!(weyl_csv(&rows).starts_with("lambda,count,prediction,ratio\n3,29,"));
        assert!(log_growth_csv(&torus_log_growth_check(1).unwrap()).starts_with("l,lambda_sq,r2,bound\n0,1,4,"));
    }
}
