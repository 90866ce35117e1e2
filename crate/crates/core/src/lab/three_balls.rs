//! Empirical three-balls exponents and certificate residuals.
//!
//! These are desk-scale measurements on discrete or closed-form harmonic
//! functions. They are not certified constants for any operator.

use serde::Serialize;

use crate::certificates::ThreeBallsCertificate;
use crate::error::{Error, Result};
use crate::lab::sample::{Point, Sample};

/// Worst-case exponent over a sample set, with `C` fixed to 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaEstimate {
    #[serde(rename = "C_emp")]
    pub c_emp: f64,
    pub alpha_emp: f64,
    pub skipped: usize,
    /// Per-sample exponent, `None` for skipped samples.
    pub per_sample: Vec<Option<f64>>,
}

/// The three sups `(m0, m1, m2)` on radii `r, a·r, b·r`.
pub fn ball_sups<S: Sample + ?Sized>(
    f: &S,
    center: Point,
    ratios: (f64, f64),
    r: f64,
) -> Result<(f64, f64, f64)> {
    let (a, b) = ratios;
    Ok((
        f.sup_on_ball(center, r)?,
        f.sup_on_ball(center, a * r)?,
        f.sup_on_ball(center, b * r)?,
    ))
}

fn check_ratios(ratios: (f64, f64)) -> Result<()> {
    let (a, b) = ratios;
    if a.is_finite() && b.is_finite() && 1.0 < a && a < b {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "ratios (1, {a}, {b}) must satisfy 1 < a < b"
        )))
    }
}

/// Largest `α` with `m1 ≤ m0^α m2^{1−α}` for a single sample, or `None` when
/// `m0 = m2` (constant on the outer ball).
fn sample_alpha(m0: f64, m1: f64, m2: f64) -> Option<f64> {
    if m0 == m2 {
        return None;
    }
    if m1 == 0.0 {
        return Some(1.0);
    }
    if m0 == 0.0 {
        return Some(0.0);
    }
    Some((m2.ln() - m1.ln()) / (m2.ln() - m0.ln()))
}

/// `α_emp = min_s (ln m2 − ln m1)/(ln m2 − ln m0)`, skipping samples with
/// `m0 = m2`.
pub fn empirical_alpha<'a, S, I>(
    samples: I,
    center: Point,
    ratios: (f64, f64),
    r: f64,
) -> Result<AlphaEstimate>
where
    S: Sample + ?Sized + 'a,
    I: IntoIterator<Item = &'a S>,
{
    check_ratios(ratios)?;
    let mut per_sample = Vec::new();
    for s in samples {
        let (m0, m1, m2) = ball_sups(s, center, ratios, r)?;
        per_sample.push(sample_alpha(m0, m1, m2));
    }
    let skipped = per_sample.iter().filter(|v| v.is_none()).count();
    let alpha_emp = per_sample
        .iter()
        .flatten()
        .copied()
        .reduce(f64::min)
        .ok_or_else(|| {
            Error::Degenerate(format!(
                "all {} samples are constant on the outer ball",
                per_sample.len()
            ))
        })?;
    Ok(AlphaEstimate {
        c_emp: 1.0,
        alpha_emp,
        skipped,
        per_sample,
    })
}

/// `ln C + α ln m0 + (1−α) ln m2 − ln m1`: nonnegative iff the certificate
/// holds for this sample at this ball.
pub fn check_three_balls<S: Sample + ?Sized>(
    f: &S,
    center: Point,
    r: f64,
    cert: &ThreeBallsCertificate,
) -> Result<f64> {
    let (m0, m1, m2) = ball_sups(f, center, (cert.mid(), cert.outer()), r)?;
    if m1 == 0.0 {
        return Ok(f64::INFINITY);
    }
    if m0 == 0.0 {
        return Err(Error::Degenerate(format!(
            "sample vanishes on the inner ball but not on the middle one (sup {m1})"
        )));
    }
    let alpha = cert.alpha();
    Ok(cert.log_constant() + alpha * m0.ln() + (1.0 - alpha) * m2.ln() - m1.ln())
}
