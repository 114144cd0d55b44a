//! Experiment configuration. Every document and parameter block rejects
//! unknown fields; omitted parameters take the defaults below.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use speclab::eigenbasis::{BoundaryCondition, DomainSpec, FamilyLabel};
use speclab::norms::NormSelector;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Growth,
    Weyl,
    Multiplicity,
    Extremal,
    WindowLocality,
    Carleman,
    Maxprinciple,
    Whispering,
    Averaging,
    Bessel,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        ExperimentKind::Growth,
        ExperimentKind::Weyl,
        ExperimentKind::Multiplicity,
        ExperimentKind::Extremal,
        ExperimentKind::WindowLocality,
        ExperimentKind::Carleman,
        ExperimentKind::Maxprinciple,
        ExperimentKind::Whispering,
        ExperimentKind::Averaging,
        ExperimentKind::Bessel,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Growth => "growth",
            ExperimentKind::Weyl => "weyl",
            ExperimentKind::Multiplicity => "multiplicity",
            ExperimentKind::Extremal => "extremal",
            ExperimentKind::WindowLocality => "window_locality",
            ExperimentKind::Carleman => "carleman",
            ExperimentKind::Maxprinciple => "maxprinciple",
            ExperimentKind::Whispering => "whispering",
            ExperimentKind::Averaging => "averaging",
            ExperimentKind::Bessel => "bessel",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// Top-level configuration document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Output directory; the `--out` flag takes precedence.
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default = "empty_object")]
    pub params: serde_json::Value,
}

fn empty_object() -> serde_json::Value {
    serde_json::Value::Object(Default::default())
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Usage(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn defaults(kind: ExperimentKind) -> Self {
        Self { experiment: kind, out: None, params: empty_object() }
    }

    /// Parameter block parsed for this experiment, with defaults filled in.
    pub fn params<T: DeserializeOwned>(&self) -> Result<T, CliError> {
        check_domains(&self.params)?;
        serde_json::from_value(self.params.clone())
            .map_err(|e| CliError::Usage(format!("invalid {} parameters: {e}", self.experiment.name())))
    }
}

/// Serde ignores extra keys on tagged unit variants, so domain objects are
/// checked by hand wherever they appear.
fn check_domains(v: &Value) -> Result<(), CliError> {
    match v {
        Value::Object(map) => {
            if let Some(Value::Object(d)) = map.get("domain") {
                let allowed: &[&str] = match d.get("kind").and_then(Value::as_str) {
                    Some("torus") => &["kind", "dim"],
                    Some("rectangle") => &["kind", "width", "height"],
                    _ => &["kind"],
                };
                if let Some(extra) = d.keys().find(|k| !allowed.contains(&k.as_str())) {
                    return usage(format!("unknown domain field `{extra}`"));
                }
            }
            map.values().try_for_each(check_domains)
        }
        Value::Array(items) => items.iter().try_for_each(check_domains),
        _ => Ok(()),
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, CliError> {
    Err(CliError::Usage(msg.into()))
}

fn check_lambdas(lambdas: &[f64]) -> Result<(), CliError> {
    if lambdas.is_empty() {
        return usage("lambda list is empty");
    }
    if lambdas.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return usage("lambda values must be finite and non-negative");
    }
    if lambdas.windows(2).any(|w| w[1] <= w[0]) {
        return usage("lambda values must be strictly increasing");
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrowthParams {
    pub family: FamilyLabel,
    pub first: usize,
    pub last: usize,
    pub norm: NormSelector,
    pub expected_exponent: f64,
    pub tolerance: f64,
    pub max_residual: f64,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            family: FamilyLabel::DiskRadial,
            first: 5,
            last: 60,
            norm: NormSelector::SupOverL2,
            expected_exponent: 0.5,
            tolerance: 0.03,
            max_residual: 0.1,
        }
    }
}

impl GrowthParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.first == 0 || self.first > self.last {
            return usage(format!("empty family range {}..={}", self.first, self.last));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeylParams {
    pub domain: DomainSpec,
    pub bc: BoundaryCondition,
    pub lambdas: Vec<f64>,
    /// Bounds on `count / prediction` at the largest lambda.
    pub ratio_min: f64,
    pub ratio_max: f64,
    /// Require the ratio to increase along `lambdas`.
    pub increasing: bool,
}

impl Default for WeylParams {
    fn default() -> Self {
        Self {
            domain: DomainSpec::Torus { dim: 2 },
            bc: BoundaryCondition::None,
            lambdas: vec![25.0, 50.0, 100.0],
            ratio_min: 0.99,
            ratio_max: 1.01,
            increasing: false,
        }
    }
}

impl WeylParams {
    pub fn validate(&self) -> Result<(), CliError> {
        check_lambdas(&self.lambdas)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MultiplicityParams {
    /// `r_2(5^l) = 4 (l + 1)` is checked for `l = 0..=l_max`.
    pub l_max: u32,
    /// Torus eigenvalue `lambda^2` whose multiplicity is checked.
    pub level: u64,
    pub expected_multiplicity: u64,
    /// Disk Dirichlet spectrum scanned for clusters up to this lambda.
    pub disk_lambda_max: f64,
}

impl Default for MultiplicityParams {
    fn default() -> Self {
        Self { l_max: 10, level: 5, expected_multiplicity: 8, disk_lambda_max: 40.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExtremalParams {
    /// Torus eigenvalue `lambda^2`.
    pub level: u64,
    /// Uniform grid points per side; the check is repeated at twice this.
    pub grid_n: usize,
    /// Required fraction of `sqrt(m / |M|)`.
    pub min_fraction: f64,
}

impl Default for ExtremalParams {
    fn default() -> Self {
        Self { level: 5, grid_n: 512, min_fraction: 0.98 }
    }
}

impl ExtremalParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(8..=2048).contains(&self.grid_n) {
            return usage(format!("grid_n = {} outside 8..=2048", self.grid_n));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LocalityParams {
    pub epsilon: f64,
    pub k: u32,
    pub dim: usize,
    pub lambdas: Vec<f64>,
    /// Upper bounds on the relative gap, paired with the leading lambdas.
    pub gap_limits: Vec<f64>,
    pub tail_tol: f64,
}

impl Default for LocalityParams {
    fn default() -> Self {
        Self {
            epsilon: 1.0,
            k: 6,
            dim: 2,
            lambdas: vec![25.0, 50.0, 100.0],
            gap_limits: vec![1e-3, 1e-4],
            tail_tol: 1e-16,
        }
    }
}

impl LocalityParams {
    pub fn validate(&self) -> Result<(), CliError> {
        check_lambdas(&self.lambdas)?;
        if self.gap_limits.len() > self.lambdas.len() {
            return usage("more gap limits than lambda values");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CarlemanParams {
    pub torus_lambda: f64,
    pub torus_tolerance: f64,
    pub disk_bc: BoundaryCondition,
    pub disk_point: [f64; 2],
    pub disk_lambda: f64,
    pub disk_tolerance: f64,
    /// Torus band functions are tabulated here; max/min of the scaled value
    /// must stay below `band_max_spread`.
    pub band_lambdas: Vec<f64>,
    pub band_max_spread: f64,
}

impl Default for CarlemanParams {
    fn default() -> Self {
        Self {
            torus_lambda: 100.0,
            torus_tolerance: 0.01,
            disk_bc: BoundaryCondition::Dirichlet,
            disk_point: [0.5, 0.0],
            disk_lambda: 80.0,
            disk_tolerance: 0.05,
            band_lambdas: vec![25.0, 50.0, 100.0, 200.0],
            band_max_spread: 2.0,
        }
    }
}

impl CarlemanParams {
    pub fn validate(&self) -> Result<(), CliError> {
        check_lambdas(&self.band_lambdas)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MaxPrincipleParams {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub neumann_factor_limit: f64,
    /// Integer lambdas `2..=sign_scan_max` are scanned for the sign condition.
    pub sign_scan_max: u32,
}

impl Default for MaxPrincipleParams {
    fn default() -> Self {
        Self { lambda_min: 20.0, lambda_max: 100.0, neumann_factor_limit: 14.7, sign_scan_max: 100 }
    }
}

impl MaxPrincipleParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if !(self.lambda_min < self.lambda_max) {
            return usage("lambda_min must be below lambda_max");
        }
        if self.sign_scan_max < 2 {
            return usage("sign_scan_max must be at least 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WhisperingParams {
    pub first_m: usize,
    pub last_m: usize,
    pub expected_exponent: f64,
    pub tolerance: f64,
    pub strip_orders: Vec<u32>,
    pub strip_min_mass: f64,
    pub kappa_min: f64,
    pub kappa_max: f64,
    pub t_grid_points: usize,
}

impl Default for WhisperingParams {
    fn default() -> Self {
        Self {
            first_m: 20,
            last_m: 200,
            expected_exponent: 1.0 / 3.0,
            tolerance: 0.05,
            strip_orders: vec![50, 100, 200],
            strip_min_mass: 0.5,
            kappa_min: 0.25,
            kappa_max: 0.5,
            t_grid_points: 2001,
        }
    }
}

impl WhisperingParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.first_m == 0 || self.first_m > self.last_m {
            return usage(format!("empty order range {}..={}", self.first_m, self.last_m));
        }
        if self.strip_orders.is_empty() {
            return usage("strip_orders is empty");
        }
        if self.t_grid_points < 2 {
            return usage("t_grid_points must be at least 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AveragingCase {
    pub m: i64,
    pub k: u32,
    pub center: [f64; 2],
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AveragingParams {
    /// Disk Dirichlet balls on which `||h|| <= ||u||` is checked.
    pub cases: Vec<AveragingCase>,
    /// Off-center ball whose average is compared with `u(c) J_0(lambda r)`.
    pub off_center: AveragingCase,
    pub j0_tolerance: f64,
    pub sweep_pairs: usize,
    pub max_spread: f64,
}

impl Default for AveragingParams {
    fn default() -> Self {
        let case = |m, k, cx, cy, radius| AveragingCase { m, k, center: [cx, cy], radius };
        Self {
            cases: vec![
                case(0, 3, 0.0, 0.0, 0.8),
                case(2, 4, 0.3, 0.1, 0.5),
                case(-5, 2, -0.2, 0.4, 0.4),
                case(7, 6, 0.1, -0.1, 0.7),
                case(1, 10, 0.5, 0.2, 0.3),
                case(-11, 3, -0.4, -0.3, 0.35),
            ],
            off_center: case(3, 5, 0.3, 0.2, 0.5),
            j0_tolerance: 1e-3,
            sweep_pairs: 50,
            max_spread: 10.0,
        }
    }
}

impl AveragingParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.sweep_pairs < 2 {
            return usage("sweep_pairs must be at least 2");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BesselParams {
    pub recurrence_samples: usize,
    pub recurrence_max_order: u32,
    pub seed: u64,
    pub interlace_max_order: u32,
    pub interlace_limit: f64,
    pub zero_max_order: u32,
    pub zero_max_index: u32,
    pub poisson_radii: Vec<f64>,
}

impl Default for BesselParams {
    fn default() -> Self {
        Self {
            recurrence_samples: 2000,
            recurrence_max_order: 100,
            seed: 20_240_611,
            interlace_max_order: 10,
            interlace_limit: 60.0,
            zero_max_order: 60,
            zero_max_index: 20,
            poisson_radii: vec![0.0, 0.5, 1.0, 3.0, 6.5, 10.0, 13.0, 17.0, 20.0],
        }
    }
}

impl BesselParams {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.recurrence_samples == 0 || self.recurrence_max_order == 0 {
            return usage("recurrence sample set is empty");
        }
        if self.zero_max_index == 0 {
            return usage("zero_max_index must be positive");
        }
        Ok(())
    }
}
