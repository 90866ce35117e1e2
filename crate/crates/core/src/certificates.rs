//! Three-balls and wild-set certificates, and conversion of a three-balls
//! certificate to other radius ratios by iterated ball expansion.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Upper bound on the length of a radius schedule.
pub const MAX_SCHEDULE_LEN: usize = 1_000_000;

/// `M_x(a·r) ≤ C · M_x(r)^α · M_x(b·r)^{1−α}` whenever `B_{b·r}(x) ⊂ Ω`.
///
/// Stored normalized to inner radius 1; `C` is kept as `ln C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThreeBallsCertificate {
    mid: f64,
    outer: f64,
    log_c: f64,
    alpha: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidCertificate(format!(
            "alpha = {alpha} must lie in (0, 1)"
        )))
    }
}

fn check_log_c(log_c: f64) -> Result<()> {
    if log_c.is_finite() && log_c >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidCertificate(format!(
            "constant C = e^{log_c} must be finite and at least 1"
        )))
    }
}

fn log_of_constant(c: f64) -> Result<f64> {
    if c.is_finite() && c >= 1.0 {
        Ok(c.ln())
    } else {
        Err(Error::InvalidCertificate(format!(
            "constant C = {c} must be finite and at least 1"
        )))
    }
}

impl ThreeBallsCertificate {
    /// Certificate for ratios `(1, mid, outer)`.
    pub fn new(mid: f64, outer: f64, c: f64, alpha: f64) -> Result<Self> {
        Self::with_log_constant(mid, outer, log_of_constant(c)?, alpha)
    }

    pub fn with_log_constant(mid: f64, outer: f64, log_c: f64, alpha: f64) -> Result<Self> {
        if !(mid.is_finite() && outer.is_finite() && 1.0 < mid && mid < outer) {
            return Err(Error::InvalidCertificate(format!(
                "ratios (1, {mid}, {outer}) must satisfy 1 < a < b"
            )));
        }
        check_alpha(alpha)?;
        check_log_c(log_c)?;
        Ok(ThreeBallsCertificate {
            mid,
            outer,
            log_c,
            alpha,
        })
    }

    /// From three concentric radii `r1 < r2 < r3` (any scale).
    pub fn from_radii(radii: (f64, f64, f64), c: f64, alpha: f64) -> Result<Self> {
        let (_, mid, outer) = normalize(radii)?;
        Self::new(mid, outer, c, alpha)
    }

    /// From the relative form `sup_B ≤ C (sup_{εB})^α (sup_{AB})^{1−α}` with
    /// `ε ∈ (0, 1)` and `A > 1`: ratios `(1, 1/ε, A/ε)`.
    pub fn from_relative(inner: f64, outer: f64, c: f64, alpha: f64) -> Result<Self> {
        if !(inner > 0.0 && inner < 1.0 && outer > 1.0) {
            return Err(Error::InvalidCertificate(format!(
                "relative ratios need 0 < a < 1 < A, got a = {inner}, A = {outer}"
            )));
        }
        Self::from_radii((inner, 1.0, outer), c, alpha)
    }

    pub fn mid(&self) -> f64 {
        self.mid
    }

    pub fn outer(&self) -> f64 {
        self.outer
    }

    pub fn ratios(&self) -> [f64; 3] {
        [1.0, self.mid, self.outer]
    }

    pub fn log_constant(&self) -> f64 {
        self.log_c
    }

    /// `C`; may be `+∞` when `ln C` exceeds the float range.
    pub fn constant(&self) -> f64 {
        self.log_c.exp()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Replaces `α` by `min(α, 1/2)`.
    pub fn clamp_alpha(self) -> Self {
        ThreeBallsCertificate {
            alpha: self.alpha.min(0.5),
            ..self
        }
    }

    /// Certificate for target ratios `(1, mid, outer)`.
    pub fn convert_ratios(&self, target_mid: f64, target_outer: f64) -> Result<Conversion> {
        let schedule = rho_schedule(self.mid, self.outer, target_mid, target_outer)?;
        let n = schedule.len() as i32;
        let alpha_n = self.alpha.powi(n);
        // C^{(1-α^n)/(1-α)}, accumulated in log space
        let exponent = (1.0 - alpha_n) / (1.0 - self.alpha);
        let certificate = ThreeBallsCertificate {
            mid: target_mid,
            outer: target_outer,
            log_c: self.log_c * exponent,
            alpha: alpha_n,
        };
        Ok(Conversion {
            certificate,
            schedule,
        })
    }
}

/// Result of [`ThreeBallsCertificate::convert_ratios`].
#[derive(Debug, Clone, PartialEq)]
pub struct Conversion {
    pub certificate: ThreeBallsCertificate,
    pub schedule: Vec<f64>,
}

impl Conversion {
    pub fn steps(&self) -> usize {
        self.schedule.len()
    }
}

/// `sup_B ≤ C (sup_S)^α (sup_{2B})^{1−α}` for every measurable `S ⊂ B` with
/// `|S| > c|B|`, in dimension `n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WildSetCertificate {
    density: f64,
    log_c: f64,
    alpha: f64,
    dimension: u32,
}

impl WildSetCertificate {
    pub fn new(density: f64, c: f64, alpha: f64, dimension: u32) -> Result<Self> {
        Self::with_log_constant(density, log_of_constant(c)?, alpha, dimension)
    }

    pub fn with_log_constant(density: f64, log_c: f64, alpha: f64, dimension: u32) -> Result<Self> {
        if !(density > 0.0 && density < 1.0) {
            return Err(Error::InvalidCertificate(format!(
                "density threshold c = {density} must lie in (0, 1)"
            )));
        }
        if dimension == 0 {
            return Err(Error::InvalidCertificate(
                "dimension must be positive".into(),
            ));
        }
        check_alpha(alpha)?;
        check_log_c(log_c)?;
        Ok(WildSetCertificate {
            density,
            log_c,
            alpha,
            dimension,
        })
    }

    pub fn density(&self) -> f64 {
        self.density
    }

    pub fn log_constant(&self) -> f64 {
        self.log_c
    }

    pub fn constant(&self) -> f64 {
        self.log_c.exp()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    /// `4^{-n}`: the density of a quarter-radius ball that avoids the strip.
    pub fn density_limit(&self) -> f64 {
        0.25f64.powi(self.dimension as i32)
    }

    pub fn clamp_alpha(self) -> Self {
        WildSetCertificate {
            alpha: self.alpha.min(0.5),
            ..self
        }
    }
}

/// Rescales `(r1, r2, r3)` to `(1, r2/r1, r3/r1)`.
pub fn normalize(radii: (f64, f64, f64)) -> Result<(f64, f64, f64)> {
    let (r1, r2, r3) = radii;
    if !(r1.is_finite() && r3.is_finite() && 0.0 < r1 && r1 < r2 && r2 < r3) {
        return Err(Error::InvalidCertificate(format!(
            "radii ({r1}, {r2}, {r3}) must satisfy 0 < r1 < r2 < r3"
        )));
    }
    Ok((1.0, r2 / r1, r3 / r1))
}

/// Expansion radii `ρ_1..ρ_n` that grow the unit ball to radius `target_mid`
/// inside the ball of radius `target_outer`, using a native `(1, a, b)`
/// inequality at each step:
///
/// `ρ_{i+1} = min(1/2, (R − 1 − (a−1)Σ_{j≤i} ρ_j) / (b−1))`, `R = target_outer`,
///
/// stopping at the first `n` with `1 + (a−1)Σρ ≥ target_mid`. The cap `1/2`
/// refers to the original inner radius at every step.
pub fn rho_schedule(a: f64, b: f64, target_mid: f64, target_outer: f64) -> Result<Vec<f64>> {
    if !(a.is_finite() && b.is_finite() && 1.0 < a && a < b) {
        return Err(Error::InvalidCertificate(format!(
            "native ratios (1, {a}, {b}) must satisfy 1 < a < b"
        )));
    }
    if !(target_mid.is_finite() && target_outer.is_finite() && target_mid > 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target ratios ({target_mid}, {target_outer}) must be finite with a' > 1"
        )));
    }
    if target_mid >= target_outer {
        return Err(Error::InvalidArgument(format!(
            "target a' = {target_mid} must be strictly below b' = {target_outer}"
        )));
    }
    let r = 1.0;
    let big_r = target_outer;
    let mut schedule = Vec::new();
    let mut total = 0.0;
    while r + (a - 1.0) * total < target_mid {
        if schedule.len() >= MAX_SCHEDULE_LEN {
            return Err(Error::ScheduleTooLong(MAX_SCHEDULE_LEN));
        }
        let room = (big_r - r - (a - 1.0) * total) / (b - 1.0);
        let rho = (r / 2.0).min(room);
        schedule.push(rho);
        total += rho;
    }
    Ok(schedule)
}

/// On-disk certificate description.
///
/// ```json
/// {"type": "three-balls", "ratios": [1, 2, 4], "C": 1, "alpha": 0.5}
/// {"type": "wild-set", "c": 0.0156, "C": 1, "alpha": 0.5, "dimension": 3}
/// ```
///
/// `log_C` may be given instead of `C` (and is always written on output, since
/// converted constants can exceed the float range).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    #[serde(rename = "type")]
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ratios: Option<Vec<f64>>,
    #[serde(rename = "C", default, skip_serializing_if = "Option::is_none")]
    pub c_const: Option<f64>,
    #[serde(rename = "log_C", default, skip_serializing_if = "Option::is_none")]
    pub log_c: Option<f64>,
    pub alpha: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dimension: Option<u32>,
}

/// Either kind of certificate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Certificate {
    ThreeBalls(ThreeBallsCertificate),
    WildSet(WildSetCertificate),
}

impl CertificateFile {
    fn log_constant(&self) -> Result<f64> {
        match (self.c_const, self.log_c) {
            (_, Some(l)) => Ok(l),
            (Some(c), None) => log_of_constant(c),
            (None, None) => Err(Error::InvalidCertificate("missing field \"C\"".into())),
        }
    }
}

impl TryFrom<CertificateFile> for Certificate {
    type Error = Error;

    fn try_from(file: CertificateFile) -> Result<Self> {
        let log_c = file.log_constant()?;
        match file.kind.as_str() {
            "three-balls" => {
                let ratios = file
                    .ratios
                    .as_deref()
                    .ok_or_else(|| Error::InvalidCertificate("missing field \"ratios\"".into()))?;
                let [r1, r2, r3] = ratios else {
                    return Err(Error::InvalidCertificate(format!(
                        "\"ratios\" needs three radii, got {}",
                        ratios.len()
                    )));
                };
                let (_, mid, outer) = normalize((*r1, *r2, *r3))?;
                Ok(Certificate::ThreeBalls(
                    ThreeBallsCertificate::with_log_constant(mid, outer, log_c, file.alpha)?,
                ))
            }
            "wild-set" => {
                let c = file
                    .c
                    .ok_or_else(|| Error::InvalidCertificate("missing field \"c\"".into()))?;
                let n = file.dimension.ok_or_else(|| {
                    Error::InvalidCertificate("missing field \"dimension\"".into())
                })?;
                Ok(Certificate::WildSet(WildSetCertificate::with_log_constant(
                    c, log_c, file.alpha, n,
                )?))
            }
            other => Err(Error::InvalidCertificate(format!(
                "unknown certificate type {other:?}"
            ))),
        }
    }
}

fn finite_or_none(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

impl From<&ThreeBallsCertificate> for CertificateFile {
    fn from(c: &ThreeBallsCertificate) -> Self {
        CertificateFile {
            kind: "three-balls".into(),
            ratios: Some(c.ratios().to_vec()),
            c_const: finite_or_none(c.constant()),
            log_c: Some(c.log_constant()),
            alpha: c.alpha(),
            c: None,
            dimension: None,
        }
    }
}

impl From<&WildSetCertificate> for CertificateFile {
    fn from(c: &WildSetCertificate) -> Self {
        CertificateFile {
            kind: "wild-set".into(),
            ratios: None,
            c_const: finite_or_none(c.constant()),
            log_c: Some(c.log_constant()),
            alpha: c.alpha(),
            c: Some(c.density()),
            dimension: Some(c.dimension()),
        }
    }
}
