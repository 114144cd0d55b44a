use proptest::prelude::*;
use speclab::boundary_layer::{comparison_dirichlet, comparison_neumann};
use speclab::eigenbasis::{BoundaryCondition, Eigenmode};
use speclab::extremal::spherical_average;
use speclab::norms::{lp_norm, norm_table, sup_norm, QuadratureGrid};
use speclab::spectral::{locality_table, make_window};
use speclab::Execution;

const DIR: BoundaryCondition = BoundaryCondition::Dirichlet;
const NEU: BoundaryCondition = BoundaryCondition::Neumann;

fn mode_strategy() -> impl Strategy<Value = Eigenmode> {
    prop_oneof![
        (-6i64..=6, -6i64..=6).prop_map(|(a, b)| Eigenmode::torus(2, [a, b, 0]).unwrap()),
        (1u32..=6, 1u32..=6).prop_map(|(p, q)| Eigenmode::rectangle(1.0, 1.3, DIR, p, q).unwrap()),
        (0u32..=5, 0u32..=5).prop_map(|(p, q)| Eigenmode::rectangle(1.0, 1.3, NEU, p, q).unwrap()),
        (-8i64..=8, 1u32..=5).prop_map(|(m, k)| Eigenmode::disk(DIR, m, k).unwrap()),
        (-8i64..=8, 1u32..=5).prop_map(|(m, k)| Eigenmode::disk(NEU, m, k).unwrap()),
        (1u32..=12).prop_map(|k| Eigenmode::ball_radial(DIR, k).unwrap()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn holder_interpolation_and_sup_bounds(mode in mode_strategy()) {
        let grid = QuadratureGrid::new(mode.domain(), mode.lambda().max(1.0)).unwrap();
        let vol = mode.domain().volume();
        let sup = sup_norm(&mode).value;
        let norms: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 6.0]
            .iter()
            .map(|&p| (p, lp_norm(&mode, p, &grid).unwrap()))
            .collect();
        let l2 = norms[1].1;
        let mut prev = 0.0;
        for &(p, v) in &norms {
            let avg = v / vol.powf(1.0 / p);
            prop_assert!(avg >= prev * (1.0 - 1e-12), "p = {p}: {avg} < {prev}");
            prop_assert!(sup >= avg * (1.0 - 1e-9));
            prev = avg;
            if p >= 2.0 {
                prop_assert!(v <= sup.powf(1.0 - 2.0 / p) * l2.powf(2.0 / p) * (1.0 + 1e-9));
            }
        }
    }

    #[test]
    fn minkowski_contraction(m in -6i64..=6, k in 1u32..=6, cx in -0.3f64..0.3, cy in -0.3f64..0.3, r in 0.1f64..0.6) {
        let mode = Eigenmode::disk(DIR, m, k).unwrap();
        prop_assume!((cx * cx + cy * cy).sqrt() + r <= 1.0);
        let avg = spherical_average(&mode, &[cx, cy], r, 48).unwrap();
        prop_assert!(avg.h_l2 <= avg.u_l2 + 1e-10);
    }

    #[test]
    fn window_invariants(eps in 0.05f64..4.0, k in 2u32..=12, lam in -300.0f64..300.0) {
        let w = make_window(eps, k).unwrap();
        let v = w.rho(lam);
        prop_assert!(v >= 0.0);
        if (0.0..=1.0).contains(&lam) {
            prop_assert!(v >= 1.0 - 1e-13);
        }
        if (lam - 0.5).abs() > 2.0 * k as f64 / eps {
            prop_assert!(v <= w.tail_bound(lam));
        }
        let t = eps * (1.0 + (lam.abs() + 1e-3) / 300.0);
        prop_assert_eq!(w.rho_hat(t).norm(), 0.0);
        prop_assert_eq!(w.rho_hat(-t).norm(), 0.0);
    }

    #[test]
    fn comparison_functions_bounded(lam in 1.0f64..500.0, s in 0.0f64..=1.0) {
        let c = 1.5f64.cos();
        let d = comparison_dirichlet(lam, s / lam).unwrap();
        let n = comparison_neumann(lam, s / lam).unwrap();
        prop_assert!(d >= 0.0707 && d <= 1.0);
        prop_assert!(n >= c - 1e-15 && n <= 1.0);
    }
}

#[test]
fn execution_modes_give_identical_bits() {
    let modes: Vec<Eigenmode> = (1..=20).map(|k| Eigenmode::disk(DIR, 3, k).unwrap()).collect();
    let a = norm_table(Execution::Sequential, &modes).unwrap();
    let b = norm_table(Execution::Parallel, &modes).unwrap();
    assert_eq!(a, b);
    let w = make_window(1.0, 6).unwrap();
    let s = locality_table(Execution::Sequential, 2, &[30.0, 60.0], &w, 1e-14).unwrap();
    let p = locality_table(Execution::Parallel, 2, &[30.0, 60.0], &w, 1e-14).unwrap();
    assert_eq!(s, p);
}

#[test]
fn ball_radial_spherical_mean_matches_center_formula() {
    // 3D mean over a sphere of radius r about the center: u(0) sin(lambda r)/(lambda r).
    let mode = Eigenmode::ball_radial(DIR, 3).unwrap();
    let avg = spherical_average(&mode, &[0.0, 0.0, 0.0], 0.8, 16).unwrap();
    let lam = mode.lambda();
    for (r, h) in avg.nodes.iter().zip(&avg.values) {
        let expect = avg.center_value * (lam * r).sin() / (lam * r);
        assert!((h - expect).abs() < 1e-10, "{h} {expect}");
    }
}
