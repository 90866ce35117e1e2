//! Majorants `M(y)` on `(-1, 1)`, the `log⁺log⁺` integrability criterion, the
//! distribution function of `log⁺ M` and its tail sums along `t = e^{ak}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::special::{exp_integral_e1, hurwitz_zeta_scaled};

/// Lebesgue measure of the domain `(-1, 1)`.
pub const TOTAL_LENGTH: f64 = 2.0;

/// Terms below this value end a numerical tail summation.
pub const TERM_FLOOR: f64 = 1e-30;

/// Partial sums above this value are reported as `+∞`.
pub const DIVERGENCE_CEILING: f64 = 1e15;

/// A numerical tail summation that has not reached [`TERM_FLOOR`] after this
/// many terms is treated as non-decaying and reported as `+∞`.
pub const MAX_TAIL_TERMS: u64 = 10_000_000;

/// `log⁺ x`: `ln x` for `x ≥ 1`, zero otherwise.
pub fn log_plus(x: f64) -> f64 {
    if x >= 1.0 {
        x.ln()
    } else {
        0.0
    }
}

/// Analytic majorant families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Preset {
    /// `e^{β/|y|^p}`
    ExpInv { beta: f64, p: f64 },
    /// `e^{e^{β/|y|^p}}`
    DoubleExpInv { beta: f64, p: f64 },
    /// `|y|^{-p}`
    Power { p: f64 },
    /// `κ`
    Constant { kappa: f64 },
}

/// One piece of a piecewise-constant majorant: value on `[lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
    pub value: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }
}

/// Piecewise-constant majorant. Intervals are sorted, disjoint and cover
/// `(-1, 1)`; every value is finite and positive.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    intervals: Vec<Interval>,
}

const JOIN_TOLERANCE: f64 = 1e-12;

impl Table {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::InvalidMajorant("table has no intervals".into()));
        }
        for iv in &intervals {
            if !(iv.lo.is_finite() && iv.hi.is_finite() && iv.lo < iv.hi) {
                return Err(Error::InvalidMajorant(format!(
                    "interval [{}, {}] is empty or not finite",
                    iv.lo, iv.hi
                )));
            }
            if !(iv.value.is_finite() && iv.value > 0.0) {
                return Err(Error::InvalidMajorant(format!(
                    "table value {} on [{}, {}] must be finite and positive",
                    iv.value, iv.lo, iv.hi
                )));
            }
        }
        intervals.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let first = intervals[0].lo;
        let last = intervals[intervals.len() - 1].hi;
        if (first + 1.0).abs() > JOIN_TOLERANCE || (last - 1.0).abs() > JOIN_TOLERANCE {
            return Err(Error::InvalidMajorant(format!(
                "table covers [{first}, {last}] instead of (-1, 1)"
            )));
        }
        for pair in intervals.windows(2) {
            if (pair[0].hi - pair[1].lo).abs() > JOIN_TOLERANCE {
                return Err(Error::InvalidMajorant(format!(
                    "intervals ending at {} and starting at {} leave a gap or overlap",
                    pair[0].hi, pair[1].lo
                )));
            }
        }
        Ok(Table { intervals })
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    fn value_at(&self, y: f64) -> f64 {
        let idx = self.intervals.partition_point(|iv| iv.hi <= y);
        self.intervals[idx.min(self.intervals.len() - 1)].value
    }
}

/// A measurable dominating function on `(-1, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Majorant {
    Preset(Preset),
    Table(Table),
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidMajorant(format!(
            "parameter {name} = {v} must be finite and positive"
        )))
    }
}

impl Majorant {
    pub fn exp_inv(beta: f64, p: f64) -> Result<Self> {
        check_positive("beta", beta)?;
        check_positive("p", p)?;
        Ok(Majorant::Preset(Preset::ExpInv { beta, p }))
    }

    pub fn double_exp_inv(beta: f64, p: f64) -> Result<Self> {
        check_positive("beta", beta)?;
        check_positive("p", p)?;
        Ok(Majorant::Preset(Preset::DoubleExpInv { beta, p }))
    }

    pub fn power(p: f64) -> Result<Self> {
        check_positive("p", p)?;
        Ok(Majorant::Preset(Preset::Power { p }))
    }

    pub fn constant(kappa: f64) -> Result<Self> {
        check_positive("kappa", kappa)?;
        Ok(Majorant::Preset(Preset::Constant { kappa }))
    }

    /// Builds a table from `(lo, hi, value)` triples.
    pub fn table<I>(pieces: I) -> Result<Self>
    where
        I: IntoIterator<Item = (f64, f64, f64)>,
    {
        let intervals = pieces
            .into_iter()
            .map(|(lo, hi, value)| Interval { lo, hi, value })
            .collect();
        Ok(Majorant::Table(Table::new(intervals)?))
    }

    fn check_domain(y: f64) -> Result<()> {
        if y.is_finite() && y.abs() < 1.0 {
            Ok(())
        } else {
            Err(Error::Domain(y))
        }
    }

    /// `M(y)`, possibly `+∞` (presets at `y = 0`, or on float overflow).
    pub fn eval(&self, y: f64) -> Result<f64> {
        Self::check_domain(y)?;
        Ok(match self {
            Majorant::Preset(p) => match *p {
                Preset::ExpInv { beta, p } => (beta / y.abs().powf(p)).exp(),
                Preset::DoubleExpInv { beta, p } => (beta / y.abs().powf(p)).exp().exp(),
                Preset::Power { p } => y.abs().powf(-p),
                Preset::Constant { kappa } => kappa,
            },
            Majorant::Table(t) => t.value_at(y),
        })
    }

    /// `ln M(y)`; stays finite for `exp-inv` wherever `y ≠ 0`.
    pub fn ln_eval(&self, y: f64) -> Result<f64> {
        Self::check_domain(y)?;
        Ok(match self {
            Majorant::Preset(p) => match *p {
                Preset::ExpInv { beta, p } => beta / y.abs().powf(p),
                Preset::DoubleExpInv { beta, p } => (beta / y.abs().powf(p)).exp(),
                Preset::Power { p } => -p * y.abs().ln(),
                Preset::Constant { kappa } => kappa.ln(),
            },
            Majorant::Table(t) => t.value_at(y).ln(),
        })
    }

    /// `∫_{-1}^{1} log⁺ log⁺ M(y) dy`, `+∞` when divergent.
    pub fn loglog_integral(&self) -> f64 {
        match self {
            Majorant::Preset(p) => match *p {
                Preset::ExpInv { beta, p } => {
                    // log⁺log⁺M = max(0, ln β − p ln|y|), positive for |y| < y0.
                    let y0 = beta.powf(1.0 / p).min(1.0);
                    let half = y0 * (beta.ln() - p * y0.ln()) + p * y0;
                    2.0 * half
                }
                Preset::DoubleExpInv { beta, p } => {
                    if p >= 1.0 {
                        f64::INFINITY
                    } else {
                        2.0 * beta / (1.0 - p)
                    }
                }
                Preset::Power { p } => {
                    // ∫_0^1 log⁺(p ln(1/y)) dy = E1(1/p)
                    2.0 * exp_integral_e1(1.0 / p)
                }
                Preset::Constant { kappa } => TOTAL_LENGTH * log_plus(log_plus(kappa)),
            },
            Majorant::Table(t) => t
                .intervals
                .iter()
                .map(|iv| iv.len() * log_plus(log_plus(iv.value)))
                .sum(),
        }
    }

    /// `F(t) = λ₁{y ∈ (-1, 1) : log⁺ M(y) ≥ t}`.
    pub fn distribution_function(&self) -> DistributionFunction {
        match self {
            Majorant::Preset(p) => match *p {
                Preset::ExpInv { beta, p } => DistributionFunction::PowerLaw {
                    scale: beta,
                    exponent: 1.0 / p,
                },
                Preset::DoubleExpInv { beta, p } => DistributionFunction::LogPowerLaw {
                    scale: beta,
                    exponent: 1.0 / p,
                },
                Preset::Power { p } => DistributionFunction::Exponential { rate: 1.0 / p },
                Preset::Constant { kappa } => {
                    let level = log_plus(kappa);
                    let steps = if level > 0.0 {
                        vec![Step {
                            threshold: level,
                            value: TOTAL_LENGTH,
                        }]
                    } else {
                        Vec::new()
                    };
                    DistributionFunction::Steps { steps }
                }
            },
            Majorant::Table(t) => {
                let mut levels: Vec<(f64, f64)> = t
                    .intervals
                    .iter()
                    .map(|iv| (log_plus(iv.value), iv.len()))
                    .filter(|(level, _)| *level > 0.0)
                    .collect();
                levels.sort_by(|a, b| a.0.total_cmp(&b.0));
                // Accumulate measure from the top level downwards.
                let mut steps: Vec<Step> = Vec::new();
                let mut above = 0.0;
                for (level, len) in levels.into_iter().rev() {
                    above += len;
                    match steps.last_mut() {
                        Some(last) if last.threshold == level => last.value = above,
                        _ => steps.push(Step {
                            threshold: level,
                            value: above,
                        }),
                    }
                }
                steps.reverse();
                DistributionFunction::Steps { steps }
            }
        }
    }

    /// True iff `M(y) = M(|y|)` and `M` is nonincreasing on `(0, 1)`.
    pub fn is_symmetric_monotone(&self) -> bool {
        match self {
            // Every preset family is even and nonincreasing in |y|.
            Majorant::Preset(_) => true,
            Majorant::Table(t) => {
                let mut cuts: Vec<f64> = t
                    .intervals
                    .iter()
                    .flat_map(|iv| [iv.lo.abs(), iv.hi.abs()])
                    .filter(|c| *c < 1.0)
                    .collect();
                cuts.push(0.0);
                cuts.push(1.0);
                cuts.sort_by(f64::total_cmp);
                cuts.dedup();
                let mut previous = f64::INFINITY;
                for w in cuts.windows(2) {
                    let mid = 0.5 * (w[0] + w[1]);
                    let right = t.value_at(mid);
                    let left = t.value_at(-mid);
                    if right != left || right > previous {
                        return false;
                    }
                    previous = right;
                }
                true
            }
        }
    }

    /// Checks both sides of the integrability equivalence at growth rate `a`.
    pub fn lemma_check(&self, a: f64) -> Result<LemmaReport> {
        let integral = self.loglog_integral();
        let tail = self.distribution_function().tail_sum(a, 0)?;
        Ok(LemmaReport {
            loglog_integral: integral,
            tail_sum: tail,
            integral_finite: integral.is_finite(),
            tail_finite: tail.is_finite(),
            consistent: integral.is_finite() == tail.is_finite(),
        })
    }
}

/// Both verdicts of the `log⁺log⁺` integrability equivalence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaReport {
    #[serde(with = "crate::serde_ext")]
    pub loglog_integral: f64,
    #[serde(with = "crate::serde_ext")]
    pub tail_sum: f64,
    pub integral_finite: bool,
    pub tail_finite: bool,
    pub consistent: bool,
}

/// One level of a step distribution function: `F(t) = value` on
/// `(previous threshold, threshold]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub threshold: f64,
    pub value: f64,
}

/// Distribution function of `log⁺ M`, for `t > 0`. For `t ≤ 0` every
/// representation returns [`TOTAL_LENGTH`].
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "form", rename_all = "kebab-case")]
pub enum DistributionFunction {
    /// `2 min(1, (scale / t)^exponent)`
    PowerLaw { scale: f64, exponent: f64 },
    /// `2` for `t ≤ 1`, else `2 min(1, (scale / ln t)^exponent)`
    LogPowerLaw { scale: f64, exponent: f64 },
    /// `2 e^{-rate·t}`
    Exponential { rate: f64 },
    /// Thresholds strictly increasing, values strictly decreasing, zero past
    /// the last threshold.
    Steps { steps: Vec<Step> },
}

/// `#{k ≥ 0 : e^{ak} ≤ t}` minus one, i.e. the largest such `k`, or −1.
fn last_index_at_or_below(a: f64, t: f64) -> i64 {
    if t < 1.0 {
        return -1;
    }
    if !t.is_finite() {
        return i64::MAX;
    }
    let mut k = (t.ln() / a).floor() as i64;
    // Agree exactly with pointwise evaluation of e^{ak}.
    while (a * (k + 1) as f64).exp() <= t {
        k += 1;
    }
    while k >= 0 && (a * k as f64).exp() > t {
        k -= 1;
    }
    k
}

fn check_rate(a: f64) -> Result<()> {
    if a.is_finite() && a > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "growth rate a = {a} must be finite and positive"
        )))
    }
}

fn cap(sum: f64) -> f64 {
    if sum > DIVERGENCE_CEILING {
        f64::INFINITY
    } else {
        sum
    }
}

impl DistributionFunction {
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return TOTAL_LENGTH;
        }
        match self {
            DistributionFunction::PowerLaw { scale, exponent } => {
                if t <= *scale {
                    TOTAL_LENGTH
                } else {
                    TOTAL_LENGTH * (scale / t).powf(*exponent)
                }
            }
            DistributionFunction::LogPowerLaw { scale, exponent } => {
                if t <= 1.0 {
                    return TOTAL_LENGTH;
                }
                let level = t.ln();
                if level <= *scale {
                    TOTAL_LENGTH
                } else {
                    TOTAL_LENGTH * (scale / level).powf(*exponent)
                }
            }
            DistributionFunction::Exponential { rate } => TOTAL_LENGTH * (-rate * t).exp(),
            DistributionFunction::Steps { steps } => steps
                .iter()
                .find(|s| t <= s.threshold)
                .map_or(0.0, |s| s.value),
        }
    }

    /// `F(e^{ak})`
    pub fn at_index(&self, a: f64, k: u64) -> f64 {
        let level = a * k as f64;
        match self {
            DistributionFunction::PowerLaw { scale, exponent } => {
                let ln_scale = scale.ln();
                if level <= ln_scale {
                    TOTAL_LENGTH
                } else {
                    TOTAL_LENGTH * (exponent * (ln_scale - level)).exp()
                }
            }
            // `e^{ak}` overflows long before these terms become negligible.
            DistributionFunction::LogPowerLaw { scale, exponent } => {
                if level <= scale.max(0.0) {
                    TOTAL_LENGTH
                } else {
                    TOTAL_LENGTH * (scale / level).powf(*exponent)
                }
            }
            _ => self.eval(level.exp()),
        }
    }

    /// `Σ_{k ≥ n} F(e^{ak})`, `+∞` when divergent or above
    /// [`DIVERGENCE_CEILING`].
    pub fn tail_sum(&self, a: f64, n: u64) -> Result<f64> {
        check_rate(a)?;
        let nf = n as f64;
        let sum = match self {
            DistributionFunction::PowerLaw { scale, exponent } => {
                // Terms equal 2 while ak ≤ ln(scale), then decay geometrically
                // with ratio e^{-a·exponent}.
                let ln_scale = scale.ln();
                let first_geometric = if ln_scale < 0.0 {
                    nf
                } else {
                    nf.max((ln_scale / a).floor() + 1.0)
                };
                let flat = TOTAL_LENGTH * (first_geometric - nf);
                let ratio_log = -a * exponent;
                let head = (exponent * ln_scale + ratio_log * first_geometric).exp();
                flat + TOTAL_LENGTH * head / -ratio_log.exp_m1()
            }
            DistributionFunction::LogPowerLaw { scale, exponent } => {
                let first_decaying = nf.max(1.0_f64.max((scale / a).floor() + 1.0));
                let flat = TOTAL_LENGTH * (first_decaying - nf);
                if *exponent <= 1.0 {
                    f64::INFINITY
                } else {
                    // Σ_{k≥K} (scale/(ak))^s = (scale/(aK))^s · K^s ζ(s, K)
                    let lead = (exponent * (scale / (a * first_decaying)).ln()).exp();
                    flat + TOTAL_LENGTH * lead * hurwitz_zeta_scaled(*exponent, first_decaying)
                }
            }
            DistributionFunction::Exponential { .. } => self.sum_numerically(a, n),
            DistributionFunction::Steps { steps } => {
                let count_up_to = |t: f64| -> f64 {
                    let last = last_index_at_or_below(a, t);
                    if last < n as i64 {
                        0.0
                    } else {
                        (last - n as i64 + 1) as f64
                    }
                };
                let mut sum = 0.0;
                let mut below = 0.0;
                for s in steps {
                    let upto = count_up_to(s.threshold);
                    sum += s.value * (upto - below);
                    below = upto;
                }
                sum
            }
        };
        Ok(cap(sum))
    }

    /// Term-by-term summation with the documented floor, ceiling and term cap.
    fn sum_numerically(&self, a: f64, n: u64) -> f64 {
        let mut sum = 0.0;
        for k in n..n.saturating_add(MAX_TAIL_TERMS) {
            let term = self.at_index(a, k);
            if term < TERM_FLOOR {
                return sum;
            }
            sum += term;
            if sum > DIVERGENCE_CEILING {
                return f64::INFINITY;
            }
        }
        f64::INFINITY
    }
}

/// Free-function form of [`DistributionFunction::tail_sum`].
pub fn tail_sum(f: &DistributionFunction, a: f64, n: u64) -> Result<f64> {
    f.tail_sum(a, n)
}

/// On-disk majorant description.
///
/// ```json
/// {"kind": "preset", "family": "exp-inv", "beta": 1, "p": 1}
/// {"kind": "preset", "family": "constant", "kappa": 3}
/// {"kind": "table", "intervals": [[-1, 0, 1], [0, 1, 15.2]]}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MajorantFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intervals: Option<Vec<[f64; 3]>>,
}

impl TryFrom<MajorantFile> for Majorant {
    type Error = Error;

    fn try_from(file: MajorantFile) -> Result<Self> {
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::InvalidMajorant(format!("missing field {name:?}")))
        };
        match file.kind.as_str() {
            "preset" => {
                let family = file
                    .family
                    .as_deref()
                    .ok_or_else(|| Error::InvalidMajorant("missing field \"family\"".into()))?;
                match family {
                    "exp-inv" => Majorant::exp_inv(need("beta", file.beta)?, need("p", file.p)?),
                    "double-exp-inv" => {
                        Majorant::double_exp_inv(need("beta", file.beta)?, need("p", file.p)?)
                    }
                    "power" => Majorant::power(need("p", file.p)?),
                    "constant" => Majorant::constant(need("kappa", file.kappa)?),
                    other => Err(Error::InvalidMajorant(format!(
                        "unknown preset family {other:?}"
                    ))),
                }
            }
            "table" => {
                let intervals = file
                    .intervals
                    .ok_or_else(|| Error::InvalidMajorant("missing field \"intervals\"".into()))?;
                Majorant::table(intervals.into_iter().map(|[lo, hi, v]| (lo, hi, v)))
            }
            other => Err(Error::InvalidMajorant(format!(
                "unknown majorant kind {other:?}"
            ))),
        }
    }
}

impl From<&Majorant> for MajorantFile {
    fn from(m: &Majorant) -> Self {
        let mut file = MajorantFile {
            kind: "preset".into(),
            family: None,
            beta: None,
            p: None,
            kappa: None,
            intervals: None,
        };
        match m {
            Majorant::Preset(Preset::ExpInv { beta, p }) => {
                file.family = Some("exp-inv".into());
                file.beta = Some(*beta);
                file.p = Some(*p);
            }
            Majorant::Preset(Preset::DoubleExpInv { beta, p }) => {
                file.family = Some("double-exp-inv".into());
                file.beta = Some(*beta);
                file.p = Some(*p);
            }
            Majorant::Preset(Preset::Power { p }) => {
                file.family = Some("power".into());
                file.p = Some(*p);
            }
            Majorant::Preset(Preset::Constant { kappa }) => {
                file.family = Some("constant".into());
                file.kappa = Some(*kappa);
            }
            Majorant::Table(t) => {
                file.kind = "table".into();
                file.intervals = Some(
                    t.intervals
                        .iter()
                        .map(|iv| [iv.lo, iv.hi, iv.value])
                        .collect(),
                );
            }
        }
        file
    }
}
