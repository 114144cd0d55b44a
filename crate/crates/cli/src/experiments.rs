//! Experiment drivers. Each turns a configuration into claims, a results
//! block and data files; nothing here touches the filesystem.

use serde::Serialize;
use serde_json::{json, Value};
use speclab::boundary_layer::{layer_csv, layer_sweep, sign_condition_threshold, LayerCheck};
use speclab::counting::{
    eigenvalue_multiplicity, log_growth_csv, multiplicity_report, sum_of_squares_count, torus_log_growth_check,
    weyl_count, weyl_csv, DEGENERACY_TOL,
};
use speclab::eigenbasis::{enumerate_modes, make_family_range, modes_csv, BoundaryCondition, DomainSpec, Eigenmode, FamilyLabel};
use speclab::extremal::{combination_csv, extremal_combination, local_estimate_sweep, spherical_average, sweep_csv};
use speclab::norms::{
    boundary_strip_mass, default_t_grid, growth_exponent_fit, norm_table, norm_table_csv, whispering_bessel_bounds,
    NormSelector, QuadratureGrid,
};
use speclab::special::{
    bessel_j, bessel_zero, bessel_zeros_upto, poisson_integral_check, ZeroKind, WHISPERING_CONSTANT,
};
use speclab::spectral::{band_csv, carleman_ratio, locality_csv, locality_table, make_window, torus_band_table};
use speclab::{fmt_sig, Execution};

use crate::config::*;
use crate::report::{round_sig, to_rounded_value, Artifact, Claim, Report, RunOutput};
use crate::CliError;

struct Outcome {
    paper_ref: &'static str,
    params: Value,
    claims: Vec<Claim>,
    results: Value,
    artifacts: Vec<(&'static str, String)>,
}

/// Runs one experiment under the given run name.
pub fn run(name: &str, config: &ExperimentConfig) -> Result<RunOutput, CliError> {
    let o = match config.experiment {
        ExperimentKind::Growth => growth(config.params()?)?,
        ExperimentKind::Weyl => weyl(config.params()?)?,
        ExperimentKind::Multiplicity => multiplicity(config.params()?)?,
        ExperimentKind::Extremal => extremal(config.params()?)?,
        ExperimentKind::WindowLocality => window_locality(config.params()?)?,
        ExperimentKind::Carleman => carleman(config.params()?)?,
        ExperimentKind::Maxprinciple => maxprinciple(config.params()?)?,
        ExperimentKind::Whispering => whispering(config.params()?)?,
        ExperimentKind::Averaging => averaging(config.params()?)?,
        ExperimentKind::Bessel => bessel(config.params()?)?,
    };
    let artifacts: Vec<Artifact> = o
        .artifacts
        .into_iter()
        .map(|(suffix, contents)| Artifact { file: format!("{name}_{suffix}.csv"), contents })
        .collect();
    let passed = o.claims.iter().all(|c| c.passed);
    let report = Report {
        run: name.to_string(),
        experiment: config.experiment,
        paper_ref: o.paper_ref.to_string(),
        params: o.params,
        claims: o.claims,
        results: o.results,
        files: artifacts.iter().map(|a| a.file.clone()).collect(),
        passed,
    };
    Ok(RunOutput { report, artifacts })
}

/// The configurations run by `speclab all`, in order.
pub fn suite() -> Vec<(&'static str, ExperimentConfig)> {
    let with = |kind: ExperimentKind, params: Value| ExperimentConfig { experiment: kind, out: None, params };
    let default = |kind| ExperimentConfig::defaults(kind);
    vec![
        ("growth_radial", default(ExperimentKind::Growth)),
        (
            "growth_torus",
            with(
                ExperimentKind::Growth,
                json!({"family": "torus_standard", "first": 1, "last": 150, "expected_exponent": 0.0, "tolerance": 0.02}),
            ),
        ),
        ("weyl_torus", default(ExperimentKind::Weyl)),
        (
            "weyl_disk",
            with(
                ExperimentKind::Weyl,
                json!({"domain": {"kind": "disk"}, "bc": "dirichlet", "lambdas": [50, 75, 100],
                       "ratio_min": 0.9, "ratio_max": 1.0, "increasing": true}),
            ),
        ),
        ("multiplicity", default(ExperimentKind::Multiplicity)),
        ("extremal", default(ExperimentKind::Extremal)),
        ("window_locality", default(ExperimentKind::WindowLocality)),
        ("carleman", default(ExperimentKind::Carleman)),
        ("maxprinciple", default(ExperimentKind::Maxprinciple)),
        ("whispering", default(ExperimentKind::Whispering)),
        ("averaging", default(ExperimentKind::Averaging)),
        ("bessel", default(ExperimentKind::Bessel)),
    ]
}

fn exec() -> Execution {
    Execution::default()
}

fn within(x: f64, lo: f64, hi: f64) -> bool {
    x >= lo && x <= hi
}

fn growth(p: GrowthParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let family = make_family_range(p.family, p.first, p.last)?;
    let fit = growth_exponent_fit(&family, p.norm)?;
    let rows = norm_table(exec(), &family.modes)?;
    let claims = vec![
        Claim::new(
            "exponent",
            "fitted growth exponent of the selected norm ratio",
            fit.exponent,
            format!("{} +/- {}", fmt_sig(p.expected_exponent), fmt_sig(p.tolerance)),
            (fit.exponent - p.expected_exponent).abs() <= p.tolerance,
        ),
        Claim::new(
            "fit_residual",
            "largest log deviation from the fitted power law",
            fit.residual,
            format!("<= {}", fmt_sig(p.max_residual)),
            fit.residual <= p.max_residual,
        ),
    ];
    let paper_ref = match p.family {
        FamilyLabel::DiskRadial | FamilyLabel::DiskNeumannRadial => "sup-norm saturation by radial disk modes",
        FamilyLabel::TorusStandard => "uniformly bounded torus exponentials",
        FamilyLabel::DiskWhispering => "whispering-gallery concentration",
        FamilyLabel::RectangleStandard => "sup-norm growth on the rectangle",
    };
    Ok(Outcome {
        paper_ref,
        params: to_rounded_value(&p),
        claims,
        results: json!({ "fit": to_rounded_value(&fit), "modes": family.len() }),
        artifacts: vec![("norms", norm_table_csv(&rows)), ("modes", modes_csv(&family.modes))],
    })
}

fn weyl(p: WeylParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let rows = p
        .lambdas
        .iter()
        .map(|&l| weyl_count(p.domain, p.bc, l))
        .collect::<speclab::Result<Vec<_>>>()?;
    let last = rows.last().expect("validated non-empty");
    let mut claims = vec![Claim::new(
        "ratio_at_largest_lambda",
        "eigenvalue count over the Weyl prediction",
        last.ratio,
        format!("in [{}, {}]", fmt_sig(p.ratio_min), fmt_sig(p.ratio_max)),
        within(last.ratio, p.ratio_min, p.ratio_max),
    )];
    if p.increasing {
        let steps = rows.windows(2).filter(|w| w[1].ratio <= w[0].ratio).count();
        claims.push(Claim::new(
            "ratio_increasing",
            "number of non-increasing steps of the count ratio",
            steps as f64,
            "0",
            steps == 0,
        ));
    }
    Ok(Outcome {
        paper_ref: "Weyl law for the eigenvalue counting function",
        params: to_rounded_value(&p),
        claims,
        results: json!({ "counts": to_rounded_value(&rows) }),
        artifacts: vec![("counts", weyl_csv(&rows))],
    })
}

fn multiplicity(p: MultiplicityParams) -> Result<Outcome, CliError> {
    if p.l_max > speclab::counting::MAX_LOG_GROWTH_L {
        return Err(CliError::Usage(format!("l_max = {} is too large", p.l_max)));
    }
    let mut mismatches = 0;
    let mut counts = Vec::new();
    for l in 0..=p.l_max {
        let r = sum_of_squares_count(5u64.pow(l), 2)?;
        counts.push(json!({"l": l, "r2": r}));
        if r != 4 * (l as u64 + 1) {
            mismatches += 1;
        }
    }
    let level = eigenvalue_multiplicity(DomainSpec::Torus { dim: 2 }, BoundaryCondition::None, p.level as f64, DEGENERACY_TOL)?;
    let table = torus_log_growth_check(p.l_max)?;
    let disk = multiplicity_report(DomainSpec::Disk, BoundaryCondition::Dirichlet, p.disk_lambda_max)?;
    let claims = vec![
        Claim::new(
            "powers_of_five",
            "number of l with r2(5^l) != 4(l+1)",
            mismatches as f64,
            "0",
            mismatches == 0,
        ),
        Claim::new(
            "level_multiplicity",
            "multiplicity of the torus eigenvalue",
            level as f64,
            p.expected_multiplicity.to_string(),
            level == p.expected_multiplicity,
        ),
    ];
    Ok(Outcome {
        paper_ref: "torus multiplicities from sums of two squares",
        params: to_rounded_value(&p),
        claims,
        results: json!({
            "r2_powers_of_five": counts,
            "log_growth": to_rounded_value(&table),
            "disk_dirichlet": to_rounded_value(&disk),
        }),
        artifacts: vec![("log_growth", log_growth_csv(&table))],
    })
}

fn torus_level(level: u64) -> Result<Vec<Eigenmode>, CliError> {
    let lam = (level as f64).sqrt();
    let modes: Vec<Eigenmode> = enumerate_modes(DomainSpec::Torus { dim: 2 }, BoundaryCondition::None, lam + 1e-9)?
        .into_iter()
        .filter(|u| (u.lambda() * u.lambda() - level as f64).abs() < 1e-9)
        .collect();
    if modes.is_empty() {
        return Err(CliError::Usage(format!("{level} is not a torus eigenvalue")));
    }
    Ok(modes)
}

fn extremal(p: ExtremalParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let modes = torus_level(p.level)?;
    let coarse = extremal_combination(&modes, &QuadratureGrid::torus_uniform(2, p.grid_n)?)?;
    let fine = extremal_combination(&modes, &QuadratureGrid::torus_uniform(2, 2 * p.grid_n)?)?;
    let summary = |c: &speclab::extremal::CombinedFunction| {
        to_rounded_value(&json!({
            "ratio": c.ratio, "bound": c.bound, "slack": c.slack, "a_anchor": c.a_anchor,
            "anchor": c.anchor, "grid_nodes": c.grid_nodes,
        }))
    };
    let claims = vec![
        Claim::new(
            "achieved_ratio",
            "sup/L2 of the extremal combination over sqrt(m/|M|)",
            coarse.ratio / coarse.bound,
            format!(">= {}", fmt_sig(p.min_fraction)),
            coarse.ratio >= p.min_fraction * coarse.bound,
        ),
        Claim::new(
            "refinement_monotone",
            "change of the achieved ratio on the doubled grid (slack must shrink)",
            fine.ratio - coarse.ratio,
            ">= 0 with smaller slack",
            fine.ratio >= coarse.ratio && fine.slack < coarse.slack,
        ),
    ];
    Ok(Outcome {
        paper_ref: "extremal combination attaining sqrt(m/|M|)",
        params: to_rounded_value(&p),
        claims,
        results: json!({ "multiplicity": modes.len(), "grid": summary(&coarse), "doubled_grid": summary(&fine) }),
        artifacts: vec![("coefficients", combination_csv(&fine))],
    })
}

fn window_locality(p: LocalityParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let w = make_window(p.epsilon, p.k)?;
    let rows = locality_table(exec(), p.dim, &p.lambdas, &w, p.tail_tol)?;
    let mut claims: Vec<Claim> = p
        .gap_limits
        .iter()
        .zip(&rows)
        .map(|(&limit, r)| {
            Claim::new(
                &format!("gap_at_{}", fmt_sig(r.lambda)),
                "relative gap between lattice sum and continuum prediction",
                r.rel_err,
                format!("<= {}", fmt_sig(limit)),
                r.rel_err <= limit,
            )
        })
        .collect();
    let steps = rows.windows(2).filter(|w| w[1].rel_err >= w[0].rel_err).count();
    claims.push(Claim::new(
        "gap_decreasing",
        "number of non-decreasing steps of the relative gap",
        steps as f64,
        "0",
        steps == 0,
    ));
    Ok(Outcome {
        paper_ref: "locality of window-smoothed spectral sums",
        params: to_rounded_value(&p),
        claims,
        results: json!({ "window": to_rounded_value(&w), "window_integral": round_sig(w.integral()), "rows": to_rounded_value(&rows) }),
        artifacts: vec![("locality", locality_csv(&rows))],
    })
}

fn carleman(p: CarlemanParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let torus = carleman_ratio(DomainSpec::Torus { dim: 2 }, BoundaryCondition::None, &[0.0, 0.0], p.torus_lambda)?;
    let disk = carleman_ratio(DomainSpec::Disk, p.disk_bc, &p.disk_point, p.disk_lambda)?;
    let band = torus_band_table(2, &p.band_lambdas)?;
    let (lo, hi) = band.iter().fold((f64::INFINITY, 0.0f64), |(a, b), r| (a.min(r.ratio), b.max(r.ratio)));
    let claims = vec![
        Claim::new(
            "torus_ratio",
            "local Weyl ratio on the torus",
            torus,
            format!("within {} of 1", fmt_sig(p.torus_tolerance)),
            (torus - 1.0).abs() <= p.torus_tolerance,
        ),
        Claim::new(
            "disk_ratio",
            "local Weyl ratio at an interior disk point",
            disk,
            format!("within {} of 1", fmt_sig(p.disk_tolerance)),
            (disk - 1.0).abs() <= p.disk_tolerance,
        ),
        Claim::new(
            "band_spread",
            "max over min of the scaled torus band function",
            hi / lo,
            format!("<= {}", fmt_sig(p.band_max_spread)),
            hi / lo <= p.band_max_spread,
        ),
    ];
    Ok(Outcome {
        paper_ref: "local Weyl law and the unit-band interior estimate",
        params: to_rounded_value(&p),
        claims,
        results: json!({ "torus_ratio": round_sig(torus), "disk_ratio": round_sig(disk), "band": to_rounded_value(&band) }),
        artifacts: vec![("band", band_csv(&band))],
    })
}

fn maxprinciple(p: MaxPrincipleParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let dir = layer_sweep(exec(), BoundaryCondition::Dirichlet, p.lambda_min, p.lambda_max)?;
    let neu = layer_sweep(exec(), BoundaryCondition::Neumann, p.lambda_min, p.lambda_max)?;
    let failures = |v: &[LayerCheck]| v.iter().filter(|c| !c.holds).count();
    let worst = neu.iter().map(LayerCheck::empirical_factor).fold(0.0, f64::max);
    let scan: Vec<f64> = (2..=p.sign_scan_max).map(f64::from).collect();
    let threshold = |bc| sign_condition_threshold(bc, &scan).map(|t| t.map(round_sig));
    let claims = vec![
        Claim::new(
            "dirichlet_layer",
            "Dirichlet modes violating the layer maximum principle",
            failures(&dir) as f64,
            "0",
            failures(&dir) == 0 && !dir.is_empty(),
        ),
        Claim::new(
            "neumann_layer",
            "Neumann modes violating the layer bound with factor 20",
            failures(&neu) as f64,
            "0",
            failures(&neu) == 0 && !neu.is_empty(),
        ),
        Claim::new(
            "neumann_empirical_factor",
            "largest inside/inner ratio over Neumann modes",
            worst,
            format!("<= {}", fmt_sig(p.neumann_factor_limit)),
            worst <= p.neumann_factor_limit,
        ),
    ];
    Ok(Outcome {
        paper_ref: "maximum principle in the boundary layer",
        params: to_rounded_value(&p),
        claims,
        results: json!({
            "dirichlet_modes": dir.len(),
            "neumann_modes": neu.len(),
            "sign_threshold_dirichlet": threshold(BoundaryCondition::Dirichlet)?,
            "sign_threshold_neumann": threshold(BoundaryCondition::Neumann)?,
        }),
        artifacts: vec![("dirichlet", layer_csv(&dir)), ("neumann", layer_csv(&neu))],
    })
}

#[derive(Serialize)]
struct StripRow {
    order: u32,
    lambda: f64,
    width: f64,
    mass: f64,
}

fn whispering(p: WhisperingParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let family = make_family_range(FamilyLabel::DiskWhispering, p.first_m, p.last_m)?;
    let fit = growth_exponent_fit(&family, NormSelector::LpOverL2(6.0))?;
    let rows = norm_table(exec(), &family.modes)?;
    let a = WHISPERING_CONSTANT;
    let mut strips = Vec::new();
    let mut bounds = Vec::new();
    for &m in &p.strip_orders {
        let mode = Eigenmode::disk(BoundaryCondition::Dirichlet, m as i64, 1)?;
        let width = 2.0 * a * mode.lambda().powf(-2.0 / 3.0);
        strips.push(StripRow { order: m, lambda: mode.lambda(), width, mass: boundary_strip_mass(&mode, width)? });
        bounds.push(whispering_bessel_bounds(m, a, &default_t_grid(a, p.t_grid_points))?);
    }
    let min_mass = strips.iter().map(|s| s.mass).fold(f64::INFINITY, f64::min);
    let min_c = bounds.iter().map(|b| b.small_c.min(b.big_c)).fold(f64::INFINITY, f64::min);
    let (k_lo, k_hi) = bounds.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), b| (lo.min(b.kappa), hi.max(b.kappa)));
    let claims = vec![
        Claim::new(
            "l6_exponent",
            "fitted growth exponent of L6/L2 over whispering modes",
            fit.exponent,
            format!("{} +/- {}", fmt_sig(p.expected_exponent), fmt_sig(p.tolerance)),
            (fit.exponent - p.expected_exponent).abs() <= p.tolerance,
        ),
        Claim::new(
            "strip_mass",
            "smallest L2 mass in the boundary strip of width 2a lambda^(-2/3)",
            min_mass,
            format!(">= {}", fmt_sig(p.strip_min_mass)),
            min_mass >= p.strip_min_mass,
        ),
        Claim::new(
            "envelope_constant",
            "smallest fitted decay rate or envelope constant",
            min_c,
            "> 0",
            min_c > 0.0,
        ),
        Claim::new(
            "kappa_low",
            "smallest lower-bound constant near the turning point",
            k_lo,
            format!(">= {}", fmt_sig(p.kappa_min)),
            k_lo >= p.kappa_min,
        ),
        Claim::new(
            "kappa_high",
            "largest lower-bound constant near the turning point",
            k_hi,
            format!("<= {}", fmt_sig(p.kappa_max)),
            k_hi <= p.kappa_max,
        ),
    ];
    let mut bounds_csv = String::from("order,kappa,lower_ok,big_c,small_c,at_turning_point\n");
    for b in &bounds {
        bounds_csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            b.order,
            fmt_sig(b.kappa),
            b.lower_ok,
            fmt_sig(b.big_c),
            fmt_sig(b.small_c),
            fmt_sig(b.at_turning_point)
        ));
    }
    Ok(Outcome {
        paper_ref: "whispering-gallery modes near the boundary",
        params: to_rounded_value(&p),
        claims,
        results: json!({
            "fit": to_rounded_value(&fit),
            "strips": to_rounded_value(&strips),
            "bounds": to_rounded_value(&bounds),
            "whispering_constant": round_sig(a),
        }),
        artifacts: vec![("norms", norm_table_csv(&rows)), ("bounds", bounds_csv)],
    })
}

fn averaging_nodes(mode: &Eigenmode, radius: f64) -> usize {
    (4.0 * (mode.lambda() * radius).ceil()).max(32.0) as usize
}

fn averaging(p: AveragingParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let mut violations = 0;
    let mut cases = Vec::new();
    for c in &p.cases {
        let mode = Eigenmode::disk(BoundaryCondition::Dirichlet, c.m, c.k)?;
        let avg = spherical_average(&mode, &c.center, c.radius, averaging_nodes(&mode, c.radius))?;
        if avg.h_l2 > avg.u_l2 + 1e-10 {
            violations += 1;
        }
        cases.push(json!({"m": c.m, "k": c.k, "h_l2": avg.h_l2, "u_l2": avg.u_l2}));
    }
    let c = p.off_center;
    let mode = Eigenmode::disk(BoundaryCondition::Dirichlet, c.m, c.k)?;
    let avg = spherical_average(&mode, &c.center, c.radius, averaging_nodes(&mode, c.radius))?;
    let beta = avg.center_value;
    let mut profile = String::from("r,h,beta_j0\n");
    let mut worst: f64 = 0.0;
    for (&r, &h) in avg.nodes.iter().zip(&avg.values) {
        let model = beta * bessel_j(0, mode.lambda() * r)?.value;
        worst = worst.max((h - model).abs() / beta.abs());
        profile.push_str(&format!("{},{},{}\n", fmt_sig(r), fmt_sig(h), fmt_sig(model)));
    }
    let sweep = local_estimate_sweep(p.sweep_pairs)?;
    let mut c_emp: Vec<f64> = sweep.iter().map(|s| s.c_emp).collect();
    c_emp.sort_by(f64::total_cmp);
    let median = c_emp[c_emp.len() / 2];
    let spread = c_emp[c_emp.len() - 1] / median;
    let claims = vec![
        Claim::new(
            "minkowski",
            "cases with ||h|| > ||u|| on the ball",
            violations as f64,
            "0",
            violations == 0,
        ),
        Claim::new(
            "off_center_profile",
            "largest relative deviation of the spherical mean from u(c) J0(lambda r)",
            worst,
            format!("<= {}", fmt_sig(p.j0_tolerance)),
            worst <= p.j0_tolerance,
        ),
        Claim::new(
            "local_estimate_spread",
            "max over median of the empirical local-estimate constant",
            spread,
            format!("< {}", fmt_sig(p.max_spread)),
            spread < p.max_spread,
        ),
    ];
    Ok(Outcome {
        paper_ref: "spherical averages of eigenfunctions",
        params: to_rounded_value(&p),
        claims,
        results: to_rounded_value(&json!({ "cases": cases, "beta": beta, "median_constant": median })),
        artifacts: vec![("profile", profile), ("sweep", sweep_csv(&sweep))],
    })
}

/// Fractional part of `i alpha`: a deterministic low-discrepancy sample.
fn kronecker(i: usize, alpha: f64) -> f64 {
    let x = i as f64 * alpha;
    x - x.floor()
}

fn bessel(p: BesselParams) -> Result<Outcome, CliError> {
    p.validate()?;
    let j = |m: u32, x: f64| bessel_j(m, x).map(|b| b.value);
    let mut recurrence: f64 = 0.0;
    for i in 1..=p.recurrence_samples {
        let m = 1 + (kronecker(i, 0.618_033_988_749_895) * p.recurrence_max_order as f64) as u32;
        let m = m.min(p.recurrence_max_order);
        let x = 0.1 + kronecker(i, 0.414_213_562_373_095) * 499.9;
        let r = j(m - 1, x)? + j(m + 1, x)? - 2.0 * m as f64 / x * j(m, x)?;
        recurrence = recurrence.max(r.abs());
    }

    let mut interlace_violations = 0;
    let mut sign_violations = 0;
    for m in 0..=p.interlace_max_order {
        let a = bessel_zeros_upto(m, p.interlace_limit, ZeroKind::Value)?;
        let b = bessel_zeros_upto(m + 1, p.interlace_limit, ZeroKind::Value)?;
        for (i, &zb) in b.iter().enumerate() {
            let below = a.get(i).is_some_and(|&za| za < zb);
            let above = a.get(i + 1).is_none_or(|&za| zb < za);
            if !(below && above) {
                interlace_violations += 1;
            }
        }
        for w in a.windows(2) {
            let n = 400;
            let mut changes = 0;
            let mut prev = bessel_j(m, w[0] + 1e-9)?.derivative;
            for s in 1..n {
                let d = bessel_j(m, w[0] + (w[1] - w[0]) * s as f64 / n as f64)?.derivative;
                if d.signum() != prev.signum() {
                    changes += 1;
                }
                prev = d;
            }
            if changes != 1 {
                sign_violations += 1;
            }
        }
    }

    let mut zero_residual: f64 = 0.0;
    let mut zeros_csv = String::from("m,k,location\n");
    for m in 0..=p.zero_max_order {
        for k in 1..=p.zero_max_index {
            let z = bessel_zero(m, k)?;
            let b = bessel_j(m, z.location)?;
            zero_residual = zero_residual.max(b.value.abs() / b.derivative.abs().max(1.0));
            zeros_csv.push_str(&format!("{m},{k},{}\n", fmt_sig(z.location)));
        }
    }

    let mut poisson: f64 = 0.0;
    for m in 0..=10 {
        for &r in &p.poisson_radii {
            poisson = poisson.max(poisson_integral_check(m, r)?);
        }
    }

    let claims = vec![
        Claim::new("recurrence", "largest three-term recurrence residual", recurrence, "<= 1e-8", recurrence <= 1e-8),
        Claim::new(
            "interlacing",
            "zeros of consecutive orders that fail to interlace",
            interlace_violations as f64,
            "0",
            interlace_violations == 0,
        ),
        Claim::new(
            "derivative_sign_changes",
            "zero gaps without exactly one sign change of the derivative",
            sign_violations as f64,
            "0",
            sign_violations == 0,
        ),
        Claim::new(
            "zero_residual",
            "largest |J_m(j)| / max(1, |J_m'(j)|) over computed zeros",
            zero_residual,
            "<= 1e-8",
            zero_residual <= 1e-8,
        ),
        Claim::new("poisson_integral", "largest relative Poisson-integral discrepancy", poisson, "<= 1e-8", poisson <= 1e-8),
    ];
    Ok(Outcome {
        paper_ref: "Bessel functions and their zeros",
        params: to_rounded_value(&p),
        claims,
        results: json!({}),
        artifacts: vec![("zeros", zeros_csv)],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_are_unique_and_configs_parse() {
        let s = suite();
        let mut names: Vec<_> = s.iter().map(|(n, _)| *n).collect();
        names.sort();
        names.dedup();
        assert_eq!(names.len(), s.len());
        for (_, c) in &s {
            let text = serde_json::to_string(c).unwrap();
            assert_eq!(&ExperimentConfig::from_json(&text).unwrap(), c);
        }
    }

    #[test]
    fn weyl_run_writes_documented_schema() {
        let c = ExperimentConfig::defaults(ExperimentKind::Weyl);
        let out = run("w", &c).unwrap();
        assert_eq!(out.artifacts[0].file, "w_counts.csv");
        assert!(out.artifacts[0].contents.starts_with("lambda,count,prediction,ratio\n"));
        assert!(out.report.passed);
        assert_eq!(out.report.paper_ref, "Weyl law for the eigenvalue counting function");
    }

    #[test]
    fn invalid_parameters_are_usage_errors() {
        let c = ExperimentConfig::from_json(r#"{"experiment": "weyl", "params": {"lambdas": []}}"#).unwrap();
        assert_eq!(run("w", &c).unwrap_err().exit_code(), 2);
        let c = ExperimentConfig::from_json(r#"{"experiment": "extremal", "params": {"level": 3}}"#).unwrap();
        assert_eq!(run("e", &c).unwrap_err().exit_code(), 2);
    }
}
