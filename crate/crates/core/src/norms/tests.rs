use std::f64::consts::{PI, SQRT_2};

use approx::{assert_abs_diff_eq, assert_relative_eq};

use super::*;
use crate::eigenbasis::{make_family, make_family_range, torus_complex_value, BoundaryCondition, DomainSpec, Eigenmode, FamilyLabel};
use crate::error::Error;
use crate::special::{jn, whispering_constant_estimate};

use BoundaryCondition::{Dirichlet, Neumann};

fn sample_modes() -> Vec<Eigenmode> {
    vec![
        Eigenmode::torus(2, [0, 0, 0]).unwrap(),
        Eigenmode::torus(2, [3, -1, 0]).unwrap(),
        Eigenmode::torus(3, [-1, 2, 2]).unwrap(),
        Eigenmode::rectangle(1.0, 2.0, Dirichlet, 3, 2).unwrap(),
        Eigenmode::rectangle(1.0, 2.0, Neumann, 0, 4).unwrap(),
        Eigenmode::disk(Dirichlet, 0, 1).unwrap(),
        Eigenmode::disk(Dirichlet, -4, 3).unwrap(),
        Eigenmode::disk(Neumann, 0, 0).unwrap(),
        Eigenmode::disk(Neumann, 7, 2).unwrap(),
        Eigenmode::ball_radial(Dirichlet, 3).unwrap(),
        Eigenmode::ball_radial(Neumann, 2).unwrap(),
    ]
}

/// Adaptive Simpson quadrature, independent of the Gauss-Legendre machinery.
fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn rec<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
            return left + right + (left + right - whole) / 15.0;
        }
        rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) + rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    rec(f, a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), tol, 40)
}

#[test]
fn every_mode_is_normalized() {
    for u in sample_modes() {
        let g = QuadratureGrid::new(u.domain(), u.lambda()).unwrap();
        assert_abs_diff_eq!(lp_norm(&u, 2.0, &g).unwrap(), 1.0, epsilon = 1e-6);
    }
}

#[test]
fn closed_forms_match_grid_quadrature() {
    // plain tensor quadrature agrees with the analytic/product evaluation
    for u in sample_modes().into_iter().filter(|u| u.domain() != DomainSpec::Ball) {
        let g = QuadratureGrid::new(u.domain(), u.lambda().max(4.0)).unwrap();
        for p in [2.0, 4.0] {
            let direct = lp_norm_of(&g, p, |x| u.value(x).unwrap_or(0.0)).unwrap();
            assert_relative_eq!(lp_norm(&u, p, &g).unwrap(), direct, max_relative = 1e-8);
        }
    }
}

#[test]
fn complex_torus_l6() {
    let g = QuadratureGrid::new(DomainSpec::Torus { dim: 2 }, 3.0).unwrap();
    let v = lp_norm_of(&g, 6.0, |x| torus_complex_value(&[1, 2], x).norm()).unwrap();
    let expected = (2.0 * PI).powi(-1) * (4.0 * PI * PI).powf(1.0 / 6.0);
    assert_abs_diff_eq!(v, expected, epsilon = 1e-12);
    assert_abs_diff_eq!(expected, 0.293684, epsilon = 1e-6);
}

#[test]
fn disk_l1_against_simpson_oracle() {
    let u = Eigenmode::disk(Dirichlet, 0, 1).unwrap();
    let j = u.lambda();
    let c = u.norm_const();
    let oracle = 2.0 * PI * c * simpson(&|r: f64| jn(0, j * r).abs() * r, 0.0, 1.0, 1e-13);
    let g = QuadratureGrid::new(DomainSpec::Disk, j).unwrap();
    assert_relative_eq!(lp_norm(&u, 1.0, &g).unwrap(), oracle, max_relative = 1e-4);
    // the kink-aware rule is far better than the required tolerance
    let u5 = Eigenmode::disk(Dirichlet, 3, 5).unwrap();
    let g5 = QuadratureGrid::new(DomainSpec::Disk, u5.lambda()).unwrap();
    let angular = 2.0 * PI * mean_abs_cos_pow(1.0);
    let oracle5 = angular * u5.norm_const() * simpson(&|r: f64| jn(3, u5.lambda() * r).abs() * r, 0.0, 1.0, 1e-13);
    assert_relative_eq!(lp_norm(&u5, 1.0, &g5).unwrap(), oracle5, max_relative = 1e-9);
}

#[test]
fn lp_rejects_bad_input() {
    let u = Eigenmode::disk(Dirichlet, 0, 40).unwrap();
    let coarse = QuadratureGrid::new(DomainSpec::Disk, 10.0).unwrap();
    assert!(matches!(lp_norm(&u, 2.0, &coarse), Err(Error::UnderResolved(_))));
    let g = QuadratureGrid::new(DomainSpec::Disk, u.lambda()).unwrap();
    assert!(lp_norm(&u, 0.5, &g).is_err());
    assert!(lp_norm(&u, f64::INFINITY, &g).is_err());
    let t = QuadratureGrid::new(DomainSpec::Torus { dim: 2 }, 200.0).unwrap();
    assert!(lp_norm(&u, 2.0, &t).is_err());
}

#[test]
fn refinement_gate() {
    for u in sample_modes() {
        let g = QuadratureGrid::new(u.domain(), u.lambda()).unwrap();
        let r = g.refined();
        for p in [1.0, 2.0, 3.0, 6.0] {
            let a = lp_norm(&u, p, &g).unwrap();
            let b = lp_norm(&u, p, &r).unwrap();
            assert_relative_eq!(a, b, max_relative = 1e-4);
        }
    }
}

#[test]
fn radial_sup_at_center() {
    for k in [1, 4, 17] {
        let u = Eigenmode::disk(Dirichlet, 0, k).unwrap();
        let s = sup_norm(&u);
        assert_eq!(s.argmax, vec![0.0, 0.0]);
        assert_eq!(s.value, u.value(&[0.0, 0.0]).unwrap());
    }
    let b = Eigenmode::ball_radial(Dirichlet, 4).unwrap();
    assert_eq!(sup_norm(&b).argmax_r(), 0.0);
    assert_abs_diff_eq!(sup_norm(&b).value, b.norm_const(), epsilon = 1e-15);
}

#[test]
fn torus_and_rectangle_sup() {
    for a in [[1, 2, 0], [-2, 1, 0], [0, -5, 0]] {
        let u = Eigenmode::torus(2, a).unwrap();
        let s = sup_norm(&u);
        assert_abs_diff_eq!(s.value, SQRT_2 / (2.0 * PI), epsilon = 1e-15);
        assert_abs_diff_eq!(u.value(&s.argmax).unwrap().abs(), s.value, epsilon = 1e-14);
    }
    let r = Eigenmode::rectangle(2.0, 1.0, Dirichlet, 3, 2).unwrap();
    let s = sup_norm(&r);
    assert_abs_diff_eq!(r.value(&s.argmax).unwrap().abs(), s.value, epsilon = 1e-14);
}

#[test]
fn disk_sup_is_attained_and_dominates_samples() {
    for (m, k) in [(3, 2), (-5, 1), (12, 4)] {
        let u = Eigenmode::disk(Dirichlet, m, k).unwrap();
        let s = sup_norm(&u);
        assert_abs_diff_eq!(u.value(&s.argmax).unwrap().abs(), s.value, epsilon = 1e-12);
        for i in 0..=400 {
            let r = i as f64 / 400.0;
            assert!(u.radial_factor(r).abs() <= s.value + 1e-12);
        }
    }
}

#[test]
fn whispering_peak_sits_in_boundary_layer() {
    let a = whispering_constant_estimate(&[100, 200, 400]).unwrap().extrapolated;
    for m in [50, 80, 150] {
        let u = Eigenmode::disk(Dirichlet, m, 1).unwrap();
        let r = sup_norm(&u).argmax_r();
        assert!(1.0 - r <= 2.0 * a * (m as f64).powf(-2.0 / 3.0));
    }
}

#[test]
fn growth_examples() {
    let radial = make_family_range(FamilyLabel::DiskRadial, 5, 60).unwrap();
    let fit = growth_exponent_fit(&radial, NormSelector::SupOverL2).unwrap();
    assert!((fit.exponent - 0.5).abs() <= 0.03 && fit.residual <= 0.1, "{fit:?}");
    let l6 = growth_exponent_fit(&radial, NormSelector::LpOverL2(6.0)).unwrap();
    assert!((l6.exponent - 1.0 / 6.0).abs() <= 0.05, "{l6:?}");

    let torus = make_family(FamilyLabel::TorusStandard, 120).unwrap();
    let fit = growth_exponent_fit(&torus, NormSelector::Sup).unwrap();
    assert!(fit.exponent.abs() <= 0.02, "{fit:?}");
}

#[test]
fn fit_window_is_last_eighty_percent() {
    let f = make_family_range(FamilyLabel::DiskRadial, 1, 20).unwrap();
    let fit = growth_exponent_fit(&f, NormSelector::Sup).unwrap();
    assert_eq!(fit.lambda_min, f.modes[4].lambda());
    assert_eq!(fit.lambda_max, f.modes[19].lambda());
}

#[test]
fn fit_preconditions() {
    let short = make_family(FamilyLabel::DiskRadial, 9).unwrap();
    assert!(growth_exponent_fit(&short, NormSelector::Sup).is_err());
    let narrow = make_family_range(FamilyLabel::DiskRadial, 40, 60).unwrap();
    assert!(growth_exponent_fit(&narrow, NormSelector::Sup).is_err());
    assert!(fit_power_law(&[3.0, 3.0, 3.0], &[1.0, 2.0, 3.0]).is_err());
}

#[test]
fn strip_mass_examples() {
    let a = whispering_constant_estimate(&[100, 200, 400]).unwrap().extrapolated;
    for m in [50, 100, 200] {
        let u = Eigenmode::disk(Dirichlet, m, 1).unwrap();
        let w = 2.0 * a * u.lambda().powf(-2.0 / 3.0);
        assert!(boundary_strip_mass(&u, w).unwrap() >= 0.5);
    }
    let mut prev = 1.0;
    for k in [5, 10, 20, 40] {
        let u = Eigenmode::disk(Dirichlet, 0, k).unwrap();
        let w = u.lambda().powf(-2.0 / 3.0);
        let mass = boundary_strip_mass(&u, w).unwrap();
        assert!(mass <= 5.0 * w && mass < prev);
        prev = mass;
    }
    for u in sample_modes().into_iter().filter(|u| u.domain().has_boundary() && u.bc() == Dirichlet) {
        let r = u.domain().inradius();
        assert_abs_diff_eq!(boundary_strip_mass(&u, r).unwrap(), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(boundary_strip_mass(&u, 0.0).unwrap(), 0.0, epsilon = 1e-12);
    }
    assert!(boundary_strip_mass(&Eigenmode::torus(2, [1, 0, 0]).unwrap(), 0.1).is_err());
    assert!(boundary_strip_mass(&Eigenmode::disk(Dirichlet, 0, 1).unwrap(), 1.5).is_err());
}

#[test]
fn rectangle_strip_mass_matches_grid() {
    let u = Eigenmode::rectangle(1.0, 2.0, Neumann, 2, 3).unwrap();
    let w = 0.15;
    let g = QuadratureGrid::with_density(u.domain(), 40.0, 24).unwrap();
    let d = u.domain();
    let direct = g.integrate(crate::Execution::Sequential, |x| {
        if d.boundary_distance(x).unwrap() < w {
            u.value(x).unwrap().powi(2)
        } else {
            0.0
        }
    });
    // the indicator is discontinuous, so the grid value is only accurate to ~1e-3
    assert_abs_diff_eq!(boundary_strip_mass(&u, w).unwrap(), direct, epsilon = 5e-3);
}

#[test]
fn whispering_bounds_report() {
    let a = whispering_constant_estimate(&[100, 200, 400]).unwrap().extrapolated;
    let grid = default_t_grid(a, 701);
    let limit = 2f64.cbrt() / (3f64.powf(2.0 / 3.0) * statrs::function::gamma::gamma(2.0 / 3.0));
    let mut cs = Vec::new();
    for m in [50, 100, 200, 400] {
        let b = whispering_bessel_bounds(m, a, &grid).unwrap();
        assert_abs_diff_eq!(b.at_turning_point, limit, epsilon = 2e-3);
        assert!(b.kappa <= b.at_turning_point);
        assert_eq!(b.lower_ok, b.kappa >= 1.0);
        assert!(b.small_c > 0.0 && b.big_c.is_finite());
        cs.push(b.small_c);
    }
    let (lo, hi) = cs.iter().fold((f64::INFINITY, 0.0f64), |(l, h), &c| (l.min(c), h.max(c)));
    assert!(hi / lo < 2.0);
    assert!(whispering_bessel_bounds(49, a, &grid).is_err());
    assert!(whispering_bessel_bounds(100, a, &[3.0, 4.0]).is_err());
}
