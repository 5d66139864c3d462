//! Verification suite: runs the theorem-level checks over a sweep of
//! generated geometries and aggregates a structured report.

mod checks;

pub use checks::{
    check_coordinate_eigenfunctions, check_expander_residual, check_ground_state_equation,
    check_lambda1_lower_bound, check_mu1_inequality, check_simons_identities,
    check_weighted_a2_growth, subsample, CheckRecord, SurfaceSpectra, A2_GROWTH_FACTOR,
    TOL_IDENTITY, TOL_SPECTRAL,
};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::generators::SweepMember;
use crate::spectral::{bottom_spectrum, ground_state_transform, PotentialKind, ReductionConfig};

/// Discretization context echoed into the report.
#[derive(Debug, Clone)]
pub struct Environment {
    pub grid_size: usize,
    pub domain_radius: f64,
    pub ds: f64,
    pub version: String,
    /// Absent by default so reports stay byte-identical across reruns.
    pub timestamp: Option<String>,
}

impl Environment {
    pub fn new(reduction: &ReductionConfig, ds: f64) -> Self {
        Self {
            grid_size: reduction.grid_size,
            domain_radius: reduction.domain_radius,
            ds,
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp: None,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub environment: Environment,
    pub checks: Vec<CheckRecord>,
}

impl VerificationReport {
    /// True when every record behaves as designed (expected failures count
    /// as passes) and no check errored out.
    pub fn all_as_designed(&self) -> bool {
        self.checks.iter().all(|c| c.as_designed())
    }

    pub fn unexpected(&self) -> Vec<&CheckRecord> {
        self.checks.iter().filter(|c| !c.as_designed()).collect()
    }

    pub fn count_pass(&self) -> usize {
        self.checks.iter().filter(|c| c.as_designed()).count()
    }
}

/// Name filter for a subset run; matches on the leading token of the check
/// name (e.g. "lambda1", "mu1", "simons").
pub fn check_matches_theorem(check_name: &str, theorem: &str) -> bool {
    check_name.starts_with(theorem)
}

fn spectra_for(member: &SweepMember, reduction: &ReductionConfig) -> Result<SurfaceSpectra> {
    let m = 2;
    let drift_op = ground_state_transform(&member.surface, PotentialKind::DriftOnly, reduction)?;
    let drift = bottom_spectrum(&drift_op, m)
        .map_err(|e| Error::SpectrumUnavailable(format!("{} drift: {e}", member.surface.id())))?;
    let stab_op = ground_state_transform(&member.surface, PotentialKind::Stability, reduction)?;
    let stability = bottom_spectrum(&stab_op, m).map_err(|e| {
        Error::SpectrumUnavailable(format!("{} stability: {e}", member.surface.id()))
    })?;
    Ok(SurfaceSpectra { drift, stability })
}

fn records_for(
    member: &SweepMember,
    reduction: &ReductionConfig,
    theorem: Option<&str>,
) -> Vec<CheckRecord> {
    let id = member.surface.id().to_string();
    let mut records = Vec::new();
    let mut push = |res: Result<Vec<CheckRecord>>, name: &str| match res {
        Ok(mut recs) => records.append(&mut recs),
        Err(e) => records.push(CheckRecord::from_error(name, &id, &e)),
    };

    push(
        check_expander_residual(member).map(|r| vec![r]),
        "expander_residual",
    );
    if member.control.is_some() {
        // controls run only their designated checks
        push(
            check_coordinate_eigenfunctions(member).map(|r| vec![r]),
            "coordinate_eigenfunctions",
        );
    } else {
        match spectra_for(member, reduction) {
            Ok(spectra) => {
                push(check_lambda1_lower_bound(member, &spectra), "lambda1");
                push(check_mu1_inequality(member, &spectra), "mu1");
            }
            Err(e) => {
                let msg = e.to_string();
                push(Err(Error::SpectrumUnavailable(msg.clone())), "lambda1");
                push(Err(Error::SpectrumUnavailable(msg)), "mu1");
            }
        }
        push(check_simons_identities(member), "simons");
        push(
            check_coordinate_eigenfunctions(member).map(|r| vec![r]),
            "coordinate_eigenfunctions",
        );
        push(
            check_ground_state_equation(member).map(|r| vec![r]),
            "ground_state_equation",
        );
        if member.mean_convex == Some(true)
            && member.surface.kind() != crate::geometry::SurfaceKind::Hyperplane
        {
            push(
                check_weighted_a2_growth(member).map(|r| vec![r]),
                "weighted_a2_growth",
            );
        }
    }

    if let Some(filter) = theorem {
        records.retain(|r| check_matches_theorem(&r.name, filter) || r.name == "expander_residual");
    }
    records
}

/// Run all checks on all sweep members; per-check errors become failed
/// records, never an abort. The report is merged in (surface, check) order so
/// identical inputs produce identical reports regardless of parallelism.
pub fn run_full_suite(
    members: &[SweepMember],
    reduction: &ReductionConfig,
    ds: f64,
    theorem: Option<&str>,
) -> VerificationReport {
    let mut checks: Vec<CheckRecord> = members
        .par_iter()
        .flat_map(|member| records_for(member, reduction, theorem))
        .collect();
    checks.sort_by(|a, b| a.surface.cmp(&b.surface).then_with(|| a.name.cmp(&b.name)));
    VerificationReport {
        environment: Environment::new(reduction, ds),
        checks,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{default_sweep, negative_controls, SweepParams};

    fn small_reduction() -> ReductionConfig {
        ReductionConfig {
            grid_size: 801,
            domain_radius: 10.0,
        }
    }

    #[test]
    fn hyperplane_suite_passes() {
        let params = SweepParams {
            curve_d0: vec![],
            rotational_heights: vec![],
            ..Default::default()
        };
        let members = default_sweep(&params).unwrap();
        let report = run_full_suite(&members, &small_reduction(), params.ds, None);
        assert!(
            report.all_as_designed(),
            "unexpected: {:?}",
            report
                .unexpected()
                .iter()
                .map(|c| format!(
                    "{}/{} margin {:.3e} err={:?}",
                    c.surface, c.name, c.margin, c.error
                ))
                .collect::<Vec<_>>()
        );
    }

    #[test]
    fn negative_controls_fail_designated_checks() {
        let params = SweepParams {
            s_max: 4.0,
            ..Default::default()
        };
        let controls = negative_controls(&params).unwrap();
        let report = run_full_suite(&controls, &small_reduction(), params.ds, None);
        assert!(report.all_as_designed());
        for rec in &report.checks {
            if rec.surface == "control_circle" {
                assert!(!rec.pass, "{} unexpectedly passed", rec.name);
                if rec.name == "coordinate_eigenfunctions" {
                    assert!(rec.measured["max_residual"] > 0.1);
                }
            }
        }
    }

    #[test]
    fn ground_state_equation_refines_at_second_order() {
        let config = crate::generators::ShootingConfig {
            d0: 1.0,
            s_max: 6.0,
            ..Default::default()
        };
        let member = crate::generators::curve_cylinder_member(&config, 2).unwrap();
        let rec = check_ground_state_equation(&member).unwrap();
        assert!(rec.pass);
        assert!(rec.measured["max_residual"] <= 1e-4);
        let ratio = rec.measured["refinement_ratio"];
        assert!((2.8..=5.7).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn theorem_filter_subsets_records() {
        let params = SweepParams {
            curve_d0: vec![],
            rotational_heights: vec![],
            hyperplane_dims: vec![2],
            ..Default::default()
        };
        let members = default_sweep(&params).unwrap();
        let report = run_full_suite(&members, &small_reduction(), params.ds, Some("lambda1"));
        assert!(report
            .checks
            .iter()
            .all(|c| c.name.starts_with("lambda1") || c.name == "expander_residual"));
        assert!(report.checks.iter().any(|c| c.name == "lambda1_universal"));
    }
}
