//! Sample families and end-to-end validation of computed bounds.

use std::io::{self, Write};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bound::BoundReport;
use crate::error::{Error, Result};
use crate::lab::grid::{solve_dirichlet, GridField, GridSpec};
use crate::lab::sample::{Harmonic, LabSample};
use crate::majorant::{log_plus, Majorant};

/// Slack on the premise `|u| ≤ M` for samples that are not renormalized.
pub const PREMISE_SLACK: f64 = 1e-12;

pub const VALIDATION_CSV_HEADER: &str =
    "sample_id,normalized_sup,u_at_origin,loglog_margin,verdict";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryKind {
    /// `Re z^d` for each requested degree.
    Monomial,
    /// Independent `U[-1, 1]` node values on the boundary.
    Random,
    /// The constant `value`.
    Constant,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    #[default]
    Grid,
    ClosedForm,
}

/// A family of sample harmonic functions, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub cells: usize,
    pub boundary: BoundaryKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degrees: Option<Vec<u32>>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_count")]
    pub count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default)]
    pub solver: Solver,
    /// Rescale each sample so that `sup |u|/M = 1` off `y = 0`.
    #[serde(default = "default_true")]
    pub normalize: bool,
    /// Multiplier applied to every sample before validation.
    #[serde(default = "default_scale")]
    pub scale: f64,
}

fn default_count() -> usize {
    1
}

fn default_true() -> bool {
    true
}

fn default_scale() -> f64 {
    1.0
}

impl FamilySpec {
    pub fn new(cells: usize, boundary: BoundaryKind) -> Self {
        FamilySpec {
            cells,
            boundary,
            degree: None,
            degrees: None,
            seed: 0,
            count: default_count(),
            value: None,
            solver: Solver::Grid,
            normalize: true,
            scale: 1.0,
        }
    }

    pub fn monomials(cells: usize, degrees: Vec<u32>, solver: Solver) -> Self {
        FamilySpec {
            degrees: Some(degrees),
            solver,
            ..Self::new(cells, BoundaryKind::Monomial)
        }
    }

    pub fn random(cells: usize, count: usize, seed: u64) -> Self {
        FamilySpec {
            count,
            seed,
            ..Self::new(cells, BoundaryKind::Random)
        }
    }

    pub fn constant(cells: usize, value: f64) -> Self {
        FamilySpec {
            value: Some(value),
            ..Self::new(cells, BoundaryKind::Constant)
        }
    }

    fn degree_list(&self) -> Result<Vec<u32>> {
        match (&self.degree, &self.degrees) {
            (Some(d), None) => Ok(vec![*d]),
            (None, Some(ds)) if !ds.is_empty() => Ok(ds.clone()),
            _ => Err(Error::InvalidArgument(
                "monomial family needs exactly one of `degree` or a nonempty `degrees`".into(),
            )),
        }
    }

    /// Samples in a fixed order; random boundaries are drawn sequentially
    /// from one ChaCha8 stream seeded by `seed`.
    pub fn build(&self) -> Result<Vec<LabSample>> {
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "scale must be finite and positive, got {}",
                self.scale
            )));
        }
        let closed = self.solver == Solver::ClosedForm;
        let samples = match self.boundary {
            BoundaryKind::Monomial => self
                .degree_list()?
                .into_iter()
                .map(|d| self.realize(Harmonic::monomial(d)))
                .collect::<Result<Vec<_>>>()?,
            BoundaryKind::Constant => {
                let value = self.value.ok_or_else(|| {
                    Error::InvalidArgument("constant family needs `value`".into())
                })?;
                if !value.is_finite() {
                    return Err(Error::InvalidArgument(format!(
                        "constant value must be finite, got {value}"
                    )));
                }
                vec![self.realize(Harmonic::constant(value))?]
            }
            BoundaryKind::Random => {
                if closed {
                    return Err(Error::InvalidArgument(
                        "random boundaries have no closed form; use the grid solver".into(),
                    ));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                (0..self.count)
                    .map(|_| {
                        let spec = GridSpec::random(self.cells, &mut rng)?;
                        Ok(LabSample::Grid(solve_dirichlet(&spec)?.scaled(self.scale)))
                    })
                    .collect::<Result<Vec<_>>>()?
            }
        };
        Ok(samples)
    }

    fn realize(&self, h: Harmonic) -> Result<LabSample> {
        let h = h.scaled(self.scale);
        match self.solver {
            Solver::ClosedForm => Ok(LabSample::Closed(h)),
            Solver::Grid => {
                let spec = GridSpec::from_fn(self.cells, |x, y| h.eval(x, y))?;
                Ok(LabSample::Grid(solve_dirichlet(&spec)?))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PremiseViolation,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::PremiseViolation => "premise-violation",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidationRow {
    pub sample_id: usize,
    /// `sup |u|/M` off `y = 0` after any normalization.
    #[serde(with = "crate::serde_ext")]
    pub normalized_sup: f64,
    #[serde(with = "crate::serde_ext")]
    pub u_at_origin: f64,
    /// `top_exponent − log⁺ log⁺ |u(0)|`; NaN for premise violations.
    #[serde(with = "crate::serde_ext")]
    pub loglog_margin: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub passed: usize,
    pub failed: usize,
    pub premise_violations: usize,
    pub rows: Vec<ValidationRow>,
}

impl ValidationReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{VALIDATION_CSV_HEADER}")?;
        for r in &self.rows {
            writeln!(
                out,
                "{},{:e},{:e},{},{}",
                r.sample_id,
                r.normalized_sup,
                r.u_at_origin,
                r.loglog_margin,
                r.verdict.as_str()
            )?;
        }
        Ok(())
    }
}

/// `ln sup |u|/M` over nodes with `0 < |y| < 1`; `-∞` when `u` vanishes there
/// or `M` is infinite wherever `u` does not.
fn log_sup_ratio(m: &Majorant, g: &GridField) -> Result<f64> {
    let n = g.cells();
    let mut log_sup = f64::NEG_INFINITY;
    for j in (1..n).filter(|&j| 2 * j != n) {
        let ln_m = m.ln_eval(g.coord(j))?;
        for i in 0..=n {
            let u = g.value(i, j).abs();
            if u > 0.0 {
                log_sup = log_sup.max(u.ln() - ln_m);
            }
        }
    }
    Ok(log_sup)
}

fn validate_sample(
    m: &Majorant,
    report: &BoundReport,
    family: &FamilySpec,
    sample_id: usize,
    sample: &LabSample,
) -> Result<ValidationRow> {
    let g = sample.to_grid(family.cells)?;
    let log_sup = log_sup_ratio(m, &g)?;
    let violation = ValidationRow {
        sample_id,
        normalized_sup: log_sup.exp(),
        u_at_origin: g.value_at_origin().abs(),
        loglog_margin: f64::NAN,
        verdict: Verdict::PremiseViolation,
    };
    if !log_sup.is_finite() {
        return Ok(violation);
    }
    let log_shift = if family.normalize {
        log_sup
    } else if log_sup > PREMISE_SLACK.ln_1p() {
        return Ok(violation);
    } else {
        0.0
    };
    let ln_u0 = g.value_at_origin().abs().ln() - log_shift;
    let loglog = if ln_u0 > 0.0 { log_plus(ln_u0) } else { 0.0 };
    let verdict = if report.bound.dominates_loglog(loglog) {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(ValidationRow {
        sample_id,
        normalized_sup: (log_sup - log_shift).exp(),
        u_at_origin: ln_u0.exp(),
        loglog_margin: report.bound.top_exponent as f64 - loglog,
        verdict,
    })
}

/// Checks `log⁺ log⁺ |u(0)| ≤ top_exponent` for every sample of the family,
/// after normalizing `sup |u|/M` to 1 on nodes off `y = 0`.
pub fn validate_bound(
    m: &Majorant,
    report: &BoundReport,
    family: &FamilySpec,
) -> Result<ValidationReport> {
    let samples = family.build()?;
    validate_samples(m, report, family, &samples)
}

/// [`validate_bound`] over prebuilt samples; node values are taken at
/// `family.cells` resolution for closed forms.
pub fn validate_samples(
    m: &Majorant,
    report: &BoundReport,
    family: &FamilySpec,
    samples: &[LabSample],
) -> Result<ValidationReport> {
    let rows = samples
        .iter()
        .enumerate()
        .map(|(id, s)| validate_sample(m, report, family, id, s))
        .collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| rows.iter().filter(|r| r.verdict == v).count();
    Ok(ValidationReport {
        passed: count(Verdict::Pass),
        failed: count(Verdict::Fail),
        premise_violations: count(Verdict::PremiseViolation),
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bound::bound_case_a;
    use crate::certificates::WildSetCertificate;

    fn case_a_report() -> (Majorant, BoundReport) {
        let m = Majorant::exp_inv(1.0, 1.0).unwrap();
        let cert = WildSetCertificate::new(0.25f64.powi(3) - 1e-9, 1.0, 0.5, 3).unwrap();
        let report = bound_case_a(&m, &cert, 0.5).unwrap();
        (m, report)
    }

    #[test]
    fn quadratic_passes_with_zero_at_origin() {
        let (m, report) = case_a_report();
        let family = FamilySpec {
            degree: Some(2),
            ..FamilySpec::new(64, BoundaryKind::Monomial)
        };
        let out = validate_bound(&m, &report, &family).unwrap();
        assert_eq!(out.passed, 1);
        let row = out.rows[0];
        assert!(row.u_at_origin < 1e-12);
        assert_eq!(row.loglog_margin, 16.0);
        assert!((row.normalized_sup - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_sample_under_constant_majorant() {
        let (_, report) = case_a_report();
        let kappa = 20.0_f64;
        let m = Majorant::constant(kappa).unwrap();
        let family = FamilySpec {
            normalize: false,
            ..FamilySpec::constant(32, kappa)
        };
        let out = validate_bound(&m, &report, &family).unwrap();
        assert_eq!(out.rows[0].verdict, Verdict::Pass);
        let expected = 16.0 - kappa.ln().ln();
        assert!((out.rows[0].loglog_margin - expected).abs() < 1e-12);

        let small = FamilySpec {
            normalize: false,
            ..FamilySpec::constant(32, 2.0)
        };
        let out = validate_bound(&Majorant::constant(2.0).unwrap(), &report, &small).unwrap();
        assert_eq!(out.rows[0].loglog_margin, 16.0);
    }

    #[test]
    fn oversized_sample_is_a_premise_violation() {
        let (m, report) = case_a_report();
        let family = FamilySpec {
            normalize: false,
            scale: 10.0,
            ..FamilySpec::monomials(64, vec![1], Solver::ClosedForm)
        };
        let out = validate_bound(&m, &report, &family).unwrap();
        assert_eq!(out.premise_violations, 1);
        assert_eq!(out.failed, 0);
        assert!(out.rows[0].normalized_sup > 1.0);

        let zero = FamilySpec::constant(32, 0.0);
        let out = validate_bound(&m, &report, &zero).unwrap();
        assert_eq!(out.rows[0].verdict, Verdict::PremiseViolation);
    }

    #[test]
    fn random_family_is_deterministic_and_passes() {
        let (m, report) = case_a_report();
        let family = FamilySpec::random(32, 5, 11);
        let a = validate_bound(&m, &report, &family).unwrap();
        let b = validate_bound(&m, &report, &family).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.passed, 5);
        let mut csv = Vec::new();
        a.write_csv(&mut csv).unwrap();
        let text = String::from_utf8(csv).unwrap();
        assert!(text.starts_with(VALIDATION_CSV_HEADER));
        assert_eq!(text.lines().count(), 6);
    }

    #[test]
    fn family_spec_json() {
        let spec: FamilySpec = serde_json::from_str(
            r#"{"cells": 64, "boundary": "monomial", "degree": 3, "seed": 1}"#,
        )
        .unwrap();
        assert_eq!(spec.degree, Some(3));
        assert!(spec.normalize);
        assert_eq!(spec.solver, Solver::Grid);
        let bad = serde_json::from_str::<FamilySpec>(r#"{"cells": 64, "boundary": "wavy"}"#);
        assert!(bad.is_err());
        let no_degree = FamilySpec::new(64, BoundaryKind::Monomial);
        assert!(no_degree.build().is_err());
    }
}
