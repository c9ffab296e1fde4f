//! Riesz kernels averaged over the rotation ring, as functions of two points
//! in the closed right half-plane.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quadrature::periodic_mean;
use crate::specfun::{elliptic_k_complement, gamma, gauss_2f1_split, ln_gamma, FunctionAccuracy};

/// A point `x + iy` with `x >= 0`; `x` is the distance from the rotation axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct HalfPlanePoint {
    x: f64,
    y: f64,
}

impl HalfPlanePoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return domain(format!("point ({x}, {y}) is not finite"));
        }
        if x < 0.0 {
            return Err(Error::Geometry(format!("point ({x}, {y}) lies left of the axis")));
        }
        // normalise -0.0 so reflections of axis points stay on the axis
        Ok(Self { x: x + 0.0, y })
    }

    pub const AXIS_ORIGIN: Self = Self { x: 0.0, y: 0.0 };

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> f64 {
        self.y
    }

    /// Translation by `r` away from the axis.
    pub fn shifted(&self, r: f64) -> Result<Self> {
        Self::new(self.x + r, self.y)
    }

    pub fn scaled(&self, r: f64) -> Result<Self> {
        Self::new(self.x * r, self.y * r)
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    /// Distance to the mirror image of `other` across the axis.
    pub fn reflected_distance(&self, other: &Self) -> f64 {
        (self.x + other.x).hypot(self.y - other.y)
    }
}

impl TryFrom<[f64; 2]> for HalfPlanePoint {
    type Error = Error;

    fn try_from(p: [f64; 2]) -> Result<Self> {
        Self::new(p[0], p[1])
    }
}

impl From<HalfPlanePoint> for [f64; 2] {
    fn from(p: HalfPlanePoint) -> Self {
        [p.x, p.y]
    }
}

/// An unconstrained point of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl From<HalfPlanePoint> for Point2 {
    fn from(p: HalfPlanePoint) -> Self {
        Self { x: p.x, y: p.y }
    }
}

/// Mirror image `w* = -u + iv` across the rotation axis.
pub fn reflect(w: HalfPlanePoint) -> Point2 {
    Point2 { x: -w.x + 0.0, y: w.y }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelVariant {
    /// Ring-averaged Riesz s-kernel.
    Ks,
    /// Ks on the translate `R + A`, renormalised by `2R`.
    #[serde(rename = "ksr")]
    KsR,
    /// Large-translate limit, proportional to `|z - w|^{1-s}`.
    #[serde(rename = "ksinf")]
    KsInf,
    /// Logarithmic kernel.
    K0,
    /// Newtonian kernel in elliptic-integral form.
    K1,
}

/// Plain description of a kernel, the form used in JSON files.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KernelConfig {
    pub variant: KernelVariant,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(default, rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<f64>,
}

/// A validated kernel choice with its gamma-function coefficients cached.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(try_from = "KernelConfig", into = "KernelConfig")]
pub struct KernelSpec {
    variant: KernelVariant,
    s: f64,
    r: f64,
    /// I_s for 0 < s < 1, else NaN.
    diag: f64,
    /// Coefficient of |z - w|^{1-s} in KsInf, else NaN.
    inf_coef: f64,
}

impl KernelSpec {
    pub fn ks(s: f64) -> Result<Self> {
        Self::new(KernelVariant::Ks, Some(s), None)
    }

    pub fn ks_r(s: f64, r: f64) -> Result<Self> {
        Self::new(KernelVariant::KsR, Some(s), Some(r))
    }

    pub fn ks_inf(s: f64) -> Result<Self> {
        Self::new(KernelVariant::KsInf, Some(s), None)
    }

    pub fn k0() -> Self {
        Self { variant: KernelVariant::K0, s: f64::NAN, r: f64::NAN, diag: f64::NAN, inf_coef: f64::NAN }
    }

    pub fn k1() -> Self {
        Self { variant: KernelVariant::K1, ..Self::k0() }
    }

    pub fn new(variant: KernelVariant, s: Option<f64>, r: Option<f64>) -> Result<Self> {
        use KernelVariant::*;
        match variant {
            K0 | K1 => {
                if s.is_some() || r.is_some() {
                    return domain(format!("{variant:?} takes no s or R"));
                }
                return Ok(if variant == K0 { Self::k0() } else { Self::k1() });
            }
            Ks | KsInf if r.is_some() => return domain(format!("{variant:?} takes no R")),
            _ => {}
        }
        let s = s.ok_or_else(|| Error::Domain(format!("{variant:?} requires s")))?;
        if !(s.is_finite() && s > 0.0) {
            return domain(format!("s = {s} must be positive"));
        }
        let r = match variant {
            KsR => {
                let r = r.ok_or_else(|| Error::Domain("KsR requires R".into()))?;
                if !(r.is_finite() && r > 0.0) {
                    return domain(format!("R = {r} must be positive"));
                }
                r
            }
            _ => f64::NAN,
        };
        if variant == KsInf && s == 1.0 {
            return domain("KsInf is undefined at s = 1");
        }
        let diag = if s < 1.0 { i_s_circle(s)? } else { f64::NAN };
        let inf_coef = if variant == KsInf { ks_inf_coefficient(s)? } else { f64::NAN };
        Ok(Self { variant, s, r, diag, inf_coef })
    }

    pub fn variant(&self) -> KernelVariant {
        self.variant
    }

    pub fn s(&self) -> Option<f64> {
        (!self.s.is_nan()).then_some(self.s)
    }

    pub fn radius(&self) -> Option<f64> {
        (!self.r.is_nan()).then_some(self.r)
    }

    /// True when the kernel is infinite on the diagonal `z = w`.
    pub fn is_singular(&self) -> bool {
        match self.variant {
            KernelVariant::K0 => false,
            KernelVariant::K1 => true,
            KernelVariant::KsInf => self.s > 1.0,
            KernelVariant::Ks | KernelVariant::KsR => self.s >= 1.0,
        }
    }

    /// True when the kernel depends on the points only through `|z - w|`.
    pub fn is_translation_invariant(&self) -> bool {
        self.variant == KernelVariant::KsInf
    }

    pub fn eval(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64> {
        kernel_eval(self, z, w)
    }
}

impl PartialEq for KernelSpec {
    fn eq(&self, other: &Self) -> bool {
        KernelConfig::from(*self) == KernelConfig::from(*other)
    }
}

impl TryFrom<KernelConfig> for KernelSpec {
    type Error = Error;

    fn try_from(c: KernelConfig) -> Result<Self> {
        Self::new(c.variant, c.s, c.r)
    }
}

impl From<KernelSpec> for KernelConfig {
    fn from(k: KernelSpec) -> Self {
        Self { variant: k.variant, s: k.s(), r: k.radius() }
    }
}

/// `Γ(1-s) / Γ(1-s/2)²`, the ring self-energy of the unit circle.
pub fn i_s_circle(s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("i_s_circle needs 0 < s < 1, got {s}"));
    }
    let value = (ln_gamma(1.0 - s)? - 2.0 * ln_gamma(1.0 - 0.5 * s)?).exp();
    debug_assert!({
        let alt = (-s * 2f64.ln() + ln_gamma(0.5 * (1.0 - s))?
            - 0.5 * PI.ln()
            - ln_gamma(1.0 - 0.5 * s)?)
        .exp();
        (alt - value).abs() <= 1e-12 * value
    });
    Ok(value)
}

/// `Γ((s-1)/2) / (√π Γ(s/2))`.
pub fn ks_inf_coefficient(s: f64) -> Result<f64> {
    if !(s > 0.0) || s == 1.0 {
        return domain(format!("KsInf coefficient undefined at s = {s}"));
    }
    Ok(gamma(0.5 * (s - 1.0))? / (PI.sqrt() * gamma(0.5 * s)?))
}

fn singular(variant: KernelVariant, z: HalfPlanePoint) -> Error {
    Error::Singularity(format!("{variant:?} is infinite at z = w = ({}, {})", z.x, z.y))
}

/// Kernel value for the pair `(z, w)`.
pub fn kernel_eval(spec: &KernelSpec, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64> {
    match spec.variant {
        KernelVariant::Ks => ks(spec, z, w),
        KernelVariant::KsR => {
            let r = spec.r;
            let v = ks(spec, z.shifted(r)?, w.shifted(r)?)?;
            if spec.s < 1.0 {
                Ok(2.0 * r * (v - spec.diag * r.powf(-spec.s)))
            } else {
                Ok(2.0 * r * v)
            }
        }
        KernelVariant::KsInf => {
            let d = z.distance(&w);
            if d == 0.0 && spec.s > 1.0 {
                return Err(singular(spec.variant, z));
            }
            Ok(spec.inf_coef * d.powf(1.0 - spec.s))
        }
        KernelVariant::K0 => {
            let d = z.distance(&w);
            let dr = z.reflected_distance(&w);
            if dr == 0.0 {
                return Err(singular(spec.variant, z));
            }
            Ok((2.0 / (d + dr)).ln())
        }
        KernelVariant::K1 => {
            let d = z.distance(&w);
            if d == 0.0 {
                return Err(singular(spec.variant, z));
            }
            let dr = z.reflected_distance(&w);
            let sum = d + dr;
            // descending Landen transformation of K(4xu/|z-w*|²)
            let mc = 4.0 * d * dr / (sum * sum);
            Ok(2.0 / PI * 2.0 / sum * elliptic_k_complement(mc))
        }
    }
}

fn ks(spec: &KernelSpec, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64> {
    let s = spec.s;
    let d = z.distance(&w);
    if d == 0.0 {
        if s >= 1.0 || z.x == 0.0 {
            return Err(singular(spec.variant, z));
        }
        return Ok(spec.diag * z.x.powf(-s));
    }
    if z.x == 0.0 || w.x == 0.0 {
        return Ok(d.powf(-s));
    }
    let dr = z.reflected_distance(&w);
    let ratio = d / dr;
    let arg = 4.0 * (z.x * w.x) / (dr * dr);
    let arg = arg.min(1.0);
    let complement = ratio * ratio;
    let acc = FunctionAccuracy::default();
    if s < 1.0 {
        Ok(dr.powf(-s) * gauss_2f1_split(0.5 * s, 0.5, 1.0, arg, complement, &acc)?)
    } else {
        let f = gauss_2f1_split(1.0 - 0.5 * s, 0.5, 1.0, arg, complement, &acc)?;
        Ok(d.powf(1.0 - s) / dr * f)
    }
}

/// Ring average of the Riesz kernel by the midpoint trapezoid rule.
///
/// Independent of the hypergeometric representations; used as their oracle.
pub fn kernel_quadrature(s: f64, z: HalfPlanePoint, w: HalfPlanePoint, nodes: usize) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("s = {s} must be positive"));
    }
    if nodes < 16 || !nodes.is_multiple_of(2) {
        return domain(format!("node count {nodes} must be even and at least 16"));
    }
    let d = z.distance(&w);
    if d == 0.0 && (s >= 1.0 || z.x == 0.0) {
        return Err(singular(KernelVariant::Ks, z));
    }
    let d2 = d * d;
    let f = 2.0 * (z.x * w.x);
    // E + F cos ψ written as d² + 2F cos²(ψ/2) to stay positive near ψ = ±π
    Ok(periodic_mean(nodes, |psi| {
        let c = (0.5 * psi).cos();
        (d2 + 2.0 * f * c * c).powf(-0.5 * s)
    }))
}

/// The three displayed terms of the large-`R` expansion of `Ks(R + z, R + w)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ExpansionTerms {
    pub leading: f64,
    pub infinity_term: f64,
    pub drift_term: f64,
}

impl ExpansionTerms {
    pub fn sum(&self) -> f64 {
        self.leading + self.infinity_term + self.drift_term
    }
}

pub fn expansion_terms(s: f64, z: HalfPlanePoint, w: HalfPlanePoint, r: f64) -> Result<ExpansionTerms> {
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("expansion needs 0 < s < 1, got {s}"));
    }
    let reach = z.x.hypot(z.y).max(w.x.hypot(w.y));
    if !(r > reach) {
        return domain(format!("R = {r} must exceed max(|z|, |w|) = {reach}"));
    }
    let is = i_s_circle(s)?;
    let lead = is * r.powf(-s);
    let inf = ks_inf_coefficient(s)? * z.distance(&w).powf(1.0 - s);
    Ok(ExpansionTerms {
        leading: lead,
        infinity_term: inf / (2.0 * r),
        drift_term: -s * (z.x + w.x) / (2.0 * r) * lead,
    })
}
