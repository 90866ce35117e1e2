//! The point-sequence iteration behind the uniform bound.
//!
//! Starting from a point where `|u| > e^{e^{2N}}`, each step finds a nearby
//! point with `log log |u|` larger by the growth rate `a`, moving by at most a
//! fixed multiple of `F(e^{ak})`. If the total displacement fits inside the
//! distance `d` to the boundary the sequence converges while `|u|` explodes,
//! which is impossible; so `e^{e^{2N}}` bounds `|u|` on the compact set. The
//! engine picks `a` and the smallest admissible `N` and records the budget.

use std::io::{self, Write};

use serde::Serialize;

use crate::certificates::{ThreeBallsCertificate, WildSetCertificate};
use crate::error::{Error, Result};
use crate::majorant::{DistributionFunction, Majorant};

/// Largest start index tried before reporting divergence.
pub const MAX_START_INDEX: u64 = 1_000_000;

/// Number of iteration steps kept in a report's trace.
pub const TRACE_ROWS: u64 = 64;

/// Displacement per step is `2 F(e^{ak})` with a wild-set certificate.
pub const CASE_A_FACTOR: f64 = 2.0;

/// Displacement per step is `20 F(e^{ak})` with a plain three-balls
/// certificate and a symmetric monotone majorant.
pub const CASE_B_FACTOR: f64 = 20.0;

/// Ratios the three-balls certificate is converted to in case B: the inner
/// ball of radius `F`, the ball of radius `4F` around `q_k`, and its double.
pub const CASE_B_RATIOS: (f64, f64) = (4.0, 8.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Case {
    A,
    B,
}

/// An iterated exponential `e^{e^{…^{top}}}` with `height` exponentials,
/// never evaluated in floating point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Tower {
    #[serde(rename = "tower_height")]
    pub height: u32,
    pub top_exponent: u64,
}

impl Tower {
    /// `e^{e^{2N}}`
    pub fn double_exp_of_twice(n: u64) -> Self {
        Tower {
            height: 2,
            top_exponent: 2 * n,
        }
    }

    /// Whether `ln ln x ≤ top_exponent`, given `loglog = ln ln x`.
    pub fn dominates_loglog(&self, loglog: f64) -> bool {
        debug_assert_eq!(self.height, 2);
        loglog <= self.top_exponent as f64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IterationStep {
    pub k: u64,
    /// `F(e^{ak})`, radius scale of step `k`.
    pub r_k: f64,
    /// `ak + N`: the iteration guarantees `log log |u(p_k)| ≥ ak + N`.
    pub loglog_value: f64,
    pub displacement_bound: f64,
    pub cumulative_budget: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub case: Case,
    /// Effective `α` after conversion and clamping.
    pub alpha: f64,
    #[serde(rename = "log_C")]
    pub log_constant: f64,
    pub growth_rate: f64,
    pub start_index: u64,
    pub bound: Tower,
    pub displacement_factor: f64,
    /// `factor · Σ_{k≥N} F(e^{ak})`, the displacement of the whole sequence.
    pub budget_used: f64,
    pub budget_limit: f64,
    /// Length of the radius schedule used to convert the certificate (case B).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conversion_steps: Option<usize>,
    pub trace: Vec<IterationStep>,
}

/// `a = ln((1 − α/2)/(1 − α))` for `0 < α ≤ 1/2`.
pub fn growth_rate(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha <= 0.5) {
        return Err(Error::InvalidArgument(format!(
            "alpha = {alpha} must lie in (0, 1/2]; clamp it first"
        )));
    }
    // (1 − α/2)/(1 − α) = 1 + (α/2)/(1 − α)
    Ok((0.5 * alpha / (1.0 - alpha)).ln_1p())
}

fn check_distance(d: f64) -> Result<()> {
    if d > 0.0 && d <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "distance d = {d} must lie in (0, 1]"
        )))
    }
}

/// Whether `log sup_B |u| ≥ e^{ak+N} ≥ 2e^{ak} + 2 ln C/α` holds at `k = N`.
///
/// `e^{ak}(e^N − 2)` increases with `k` once `e^N > 2`, so the check at `k = N`
/// covers every later step.
fn growth_condition(a: f64, n: u64, log_c: f64, alpha: f64) -> bool {
    let nf = n as f64;
    let en = nf.exp();
    if en <= 2.0 {
        return false;
    }
    (a * nf).exp() * (en - 2.0) >= 2.0 * log_c / alpha
}

/// Smallest `N` with `factor · Σ_{k≥N} F(e^{ak}) < d` and the growth condition.
pub fn min_start_index(
    f: &DistributionFunction,
    a: f64,
    d: f64,
    log_c: f64,
    alpha: f64,
    factor: f64,
) -> Result<u64> {
    if !(a.is_finite() && a > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "growth rate a = {a} must be positive"
        )));
    }
    if !(d.is_finite() && d > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "distance d = {d} must be positive"
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) || !(log_c.is_finite() && log_c >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "need 0 < alpha < 1 and C ≥ 1, got alpha = {alpha}, ln C = {log_c}"
        )));
    }
    for n in 0..=MAX_START_INDEX {
        if factor * f.tail_sum(a, n)? < d && growth_condition(a, n, log_c, alpha) {
            return Ok(n);
        }
    }
    Err(Error::Divergent {
        cap: MAX_START_INDEX,
        budget: d,
    })
}

/// Case A search: displacement factor 2, constant `C` given directly.
pub fn min_start_index_a(
    f: &DistributionFunction,
    a: f64,
    d: f64,
    c: f64,
    alpha: f64,
) -> Result<u64> {
    if !(c.is_finite() && c >= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "constant C = {c} must be at least 1"
        )));
    }
    min_start_index(f, a, d, c.ln(), alpha, CASE_A_FACTOR)
}

fn build_trace(f: &DistributionFunction, a: f64, n: u64, factor: f64) -> Vec<IterationStep> {
    let mut cumulative = 0.0;
    (n..n + TRACE_ROWS)
        .map(|k| {
            let r_k = f.at_index(a, k);
            let displacement_bound = factor * r_k;
            cumulative += displacement_bound;
            IterationStep {
                k,
                r_k,
                loglog_value: a * k as f64 + n as f64,
                displacement_bound,
                cumulative_budget: cumulative,
            }
        })
        .collect()
}

struct Search<'a> {
    f: &'a DistributionFunction,
    alpha: f64,
    log_c: f64,
    d: f64,
    factor: f64,
}

impl Search<'_> {
    fn run(self, case: Case, conversion_steps: Option<usize>) -> Result<BoundReport> {
        let a = growth_rate(self.alpha)?;
        let n = min_start_index(self.f, a, self.d, self.log_c, self.alpha, self.factor)?;
        let budget_used = self.factor * self.f.tail_sum(a, n)?;
        // a ≤ ln(3/2) < 1, so e^{e^{2N}} covers the starting level e^{e^{aN+N}}.
        debug_assert!(a * n as f64 + n as f64 <= 2.0 * n as f64);
        Ok(BoundReport {
            case,
            alpha: self.alpha,
            log_constant: self.log_c,
            growth_rate: a,
            start_index: n,
            bound: Tower::double_exp_of_twice(n),
            displacement_factor: self.factor,
            budget_used,
            budget_limit: self.d,
            conversion_steps,
            trace: build_trace(self.f, a, n, self.factor),
        })
    }
}

/// Uniform bound from a wild-set certificate (any measurable majorant).
pub fn bound_case_a(m: &Majorant, cert: &WildSetCertificate, d: f64) -> Result<BoundReport> {
    check_distance(d)?;
    let limit = cert.density_limit();
    if cert.density() >= limit {
        return Err(Error::WeakCertificate {
            c: cert.density(),
            dimension: cert.dimension(),
            limit,
        });
    }
    let cert = cert.clamp_alpha();
    let f = m.distribution_function();
    Search {
        f: &f,
        alpha: cert.alpha(),
        log_c: cert.log_constant(),
        d,
        factor: CASE_A_FACTOR,
    }
    .run(Case::A, None)
}

/// Uniform bound from a three-balls certificate and a symmetric nonincreasing
/// majorant.
pub fn bound_case_b(m: &Majorant, cert: &ThreeBallsCertificate, d: f64) -> Result<BoundReport> {
    if !m.is_symmetric_monotone() {
        return Err(Error::NotSymmetricMonotone);
    }
    check_distance(d)?;
    let conversion = cert.convert_ratios(CASE_B_RATIOS.0, CASE_B_RATIOS.1)?;
    let converted = conversion.certificate.clamp_alpha();
    let f = m.distribution_function();
    Search {
        f: &f,
        alpha: converted.alpha(),
        log_c: converted.log_constant(),
        d,
        factor: CASE_B_FACTOR,
    }
    .run(Case::B, Some(conversion.steps()))
}

/// The iteration table of a report.
pub fn trace_iteration(report: &BoundReport) -> &[IterationStep] {
    &report.trace
}

pub const TRACE_CSV_HEADER: &str = "k,r_k,loglog_value,displacement_bound,cumulative_budget";

pub fn write_trace_csv<W: Write>(steps: &[IterationStep], mut out: W) -> io::Result<()> {
    writeln!(out, "{TRACE_CSV_HEADER}")?;
    for s in steps {
        writeln!(
            out,
            "{},{},{},{},{}",
            s.k, s.r_k, s.loglog_value, s.displacement_bound, s.cumulative_budget
        )?;
    }
    Ok(())
}
