use serde::{Deserialize, Serialize};

use super::domain::{BoundaryCondition, DomainSpec};
use super::enumerate::{enumerate_modes, torus_distinct_levels};
use super::mode::Eigenmode;
use crate::error::{invalid, Result};
use crate::exec::Execution;

pub const MAX_FAMILY_INDEX: usize = 500;

/// Sides of the rectangle used by [`FamilyLabel::RectangleStandard`]; the
/// squared aspect ratio is irrational, so Dirichlet eigenvalues are simple.
pub const STANDARD_RECTANGLE: (f64, f64) = (1.0, 1.618_033_988_749_895);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyLabel {
    /// Dirichlet disk modes `(0, k)`.
    DiskRadial,
    /// Dirichlet disk modes `(m, 1)`.
    DiskWhispering,
    /// One real 2-torus mode per distinct eigenvalue.
    TorusStandard,
    /// One Dirichlet mode per eigenvalue of [`STANDARD_RECTANGLE`].
    RectangleStandard,
    /// Non-constant radial Neumann disk modes `(0, k)`.
    DiskNeumannRadial,
}

/// Modes of one domain and boundary condition with strictly increasing `lambda`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeFamily {
    pub label: FamilyLabel,
    pub modes: Vec<Eigenmode>,
}

impl FamilyLabel {
    pub fn domain(&self) -> DomainSpec {
        match self {
            FamilyLabel::TorusStandard => DomainSpec::Torus { dim: 2 },
            FamilyLabel::RectangleStandard => {
                DomainSpec::Rectangle { width: STANDARD_RECTANGLE.0, height: STANDARD_RECTANGLE.1 }
            }
            _ => DomainSpec::Disk,
        }
    }

    pub fn bc(&self) -> BoundaryCondition {
        match self {
            FamilyLabel::TorusStandard => BoundaryCondition::None,
            FamilyLabel::DiskNeumannRadial => BoundaryCondition::Neumann,
            _ => BoundaryCondition::Dirichlet,
        }
    }
}

/// Members `1..=count` of the family.
pub fn make_family(label: FamilyLabel, count: usize) -> Result<ModeFamily> {
    make_family_range(label, 1, count)
}

/// Members `first..=last` (1-based: radial number `k`, angular order `m`, or
/// position in the family's eigenvalue order).
pub fn make_family_range(label: FamilyLabel, first: usize, last: usize) -> Result<ModeFamily> {
    if first == 0 || first > last {
        return invalid(format!("empty or invalid member range {first}..={last}"));
    }
    if last > MAX_FAMILY_INDEX {
        return invalid(format!("member index {last} exceeds {MAX_FAMILY_INDEX}"));
    }
    let exec = Execution::default();
    let modes = match label {
        FamilyLabel::DiskRadial => exec
            .map_range(first..last + 1, |k| Eigenmode::disk(BoundaryCondition::Dirichlet, 0, k as u32))
            .into_iter()
            .collect::<Result<Vec<_>>>()?,
        FamilyLabel::DiskNeumannRadial => exec
            .map_range(first..last + 1, |k| Eigenmode::disk(BoundaryCondition::Neumann, 0, k as u32))
            .into_iter()
            .collect::<Result<Vec<_>>>()?,
        FamilyLabel::DiskWhispering => exec
            .map_range(first..last + 1, |m| Eigenmode::disk(BoundaryCondition::Dirichlet, m as i64, 1))
            .into_iter()
            .collect::<Result<Vec<_>>>()?,
        FamilyLabel::TorusStandard => torus_distinct_levels(last)
            .into_iter()
            .skip(first - 1)
            .map(|(_, a)| Eigenmode::torus(2, a))
            .collect::<Result<Vec<_>>>()?,
        FamilyLabel::RectangleStandard => {
            let (w, h) = STANDARD_RECTANGLE;
            // Weyl: N(lambda) ~ w h lambda^2 / (4 pi); pad for the boundary term
            let mut lambda = (4.0 * std::f64::consts::PI * last as f64 / (w * h)).sqrt() + 5.0;
            loop {
                let all = enumerate_modes(label.domain(), label.bc(), lambda)?;
                if all.len() >= last {
                    break all.into_iter().skip(first - 1).take(last + 1 - first).collect();
                }
                lambda *= 1.25;
            }
        }
    };
    Ok(ModeFamily { label, modes })
}

impl ModeFamily {
    pub fn lambdas(&self) -> Vec<f64> {
        self.modes.iter().map(Eigenmode::lambda).collect()
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }
}

/// Mode list in the CSV layout `domain,bc,index1,index2,lambda,norm_const`.
pub fn modes_csv(modes: &[Eigenmode]) -> String {
    let mut out = String::from("domain,bc,index1,index2,lambda,norm_const\n");
    for u in modes {
        let (i1, i2) = u.index_fields();
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            u.domain().name(),
            u.bc().name(),
            i1,
            i2,
            crate::fmt_sig(u.lambda()),
            crate::fmt_sig(u.norm_const())
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn radial_family() {
        let f = make_family(FamilyLabel::DiskRadial, 3).unwrap();
        let l = f.lambdas();
        assert_abs_diff_eq!(l[0], 2.404825557695773, epsilon = 1e-9);
        assert_abs_diff_eq!(l[1], 5.520078110286311, epsilon = 1e-9);
        assert_abs_diff_eq!(l[2], 8.653727912911013, epsilon = 1e-9);
    }

    #[test]
    fn whispering_family() {
        let l = make_family(FamilyLabel::DiskWhispering, 2).unwrap().lambdas();
        assert_abs_diff_eq!(l[0], 3.831705970207512, epsilon = 1e-9);
        assert_abs_diff_eq!(l[1], 5.135622301840683, epsilon = 1e-9);
    }

    #[test]
    fn torus_family_starts_with_constant() {
        let f = make_family(FamilyLabel::TorusStandard, 1).unwrap();
        assert_eq!(f.modes[0].lambda(), 0.0);
        let f = make_family(FamilyLabel::TorusStandard, 200).unwrap();
        assert!(f.lambdas().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rectangle_family_strictly_increasing() {
        let f = make_family_range(FamilyLabel::RectangleStandard, 10, 120).unwrap();
        assert_eq!(f.len(), 111);
        assert!(f.lambdas().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn bad_ranges() {
        assert!(make_family(FamilyLabel::DiskRadial, 0).is_err());
        assert!(make_family(FamilyLabel::DiskRadial, 501).is_err());
        assert!(make_family_range(FamilyLabel::DiskRadial, 5, 4).is_err());
    }

    #[test]
    fn csv_header_and_rows() {
        let f = make_family(FamilyLabel::DiskWhispering, 1).unwrap();
        let csv = modes_csv(&f.modes);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("domain,bc,index1,index2,lambda,norm_const"));
        assert!(lines.next().unwrap().starts_with("disk,dirichlet,1,1,3.83170597020751,"));
    }
}
