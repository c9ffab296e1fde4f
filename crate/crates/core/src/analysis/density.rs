//! Closed-form limit densities, their distribution functions, and the
//! Kolmogorov distance of a configuration from them.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::energy::Configuration;
use crate::error::{domain, Error, Result};
use crate::geometry::Curve;
use crate::quadrature::GradedRule;
use crate::specfun::{gauss_2f1, ln_gamma};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityModel {
    /// `c r^{1-s} (r² - T²)^{s/2 - 1}` on `[-r, r]`, `0 < s < 1`.
    SegmentKInf { s: f64, r: f64 },
    /// `(R + t cos φ)^{1/(s-1)}` on `[-1, 1]` for the segment
    /// `R + t e^{iφ}`, `s > 2`, `R > |cos φ|`.
    SegmentHyper {
        s: f64,
        #[serde(rename = "R")]
        r: f64,
        phi: f64,
    },
    /// `((R + cos φ)/(R + 1))^{1/(s-1)}` on `[-π, π]` for the unit circle
    /// about `R`, `s > 2`.
    CircleHyper {
        s: f64,
        #[serde(rename = "R")]
        r: f64,
    },
    /// Normalised arc length on a circle, `[-π, π]`.
    UniformCircle,
    /// `1/(π √(r² - T²))` on `[-r, r]`.
    Arcsine { r: f64 },
}

impl DensityModel {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            DensityModel::SegmentKInf { s, r } => s > 0.0 && s < 1.0 && r > 0.0 && r.is_finite(),
            DensityModel::SegmentHyper { s, r, phi } => {
                s > 2.0 && s.is_finite() && (0.0..PI).contains(&phi) && r > phi.cos().abs() && r.is_finite()
            }
            DensityModel::CircleHyper { s, r } => s > 2.0 && s.is_finite() && r > 1.0 && r.is_finite(),
            DensityModel::UniformCircle => true,
            DensityModel::Arcsine { r } => r > 0.0 && r.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            domain(format!("invalid density parameters {self:?}"))
        }
    }

    /// Interval carrying the density.
    pub fn support(&self) -> (f64, f64) {
        match *self {
            DensityModel::SegmentKInf { r, .. } | DensityModel::Arcsine { r } => (-r, r),
            DensityModel::SegmentHyper { .. } => (-1.0, 1.0),
            DensityModel::CircleHyper { .. } | DensityModel::UniformCircle => (-PI, PI),
        }
    }

    fn normalizer(&self) -> Result<f64> {
        Ok(match *self {
            DensityModel::SegmentKInf { s, r } => {
                (ln_gamma(0.5 * (1.0 + s))? - 0.5 * PI.ln() - ln_gamma(0.5 * s)?).exp() * r.powf(1.0 - s)
            }
            DensityModel::SegmentHyper { s, r, phi } => {
                let c = phi.cos();
                let q = s / (s - 1.0);
                let z = if c == 0.0 {
                    2.0 * r.powf(q - 1.0)
                } else {
                    // ((R + c)^q - (R - c)^q)/(q c), without cancellation for small c
                    (r - c).powf(q) * (q * (2.0 * c / (r - c)).ln_1p()).exp_m1() / (q * c)
                };
                1.0 / z
            }
            DensityModel::CircleHyper { s, r } => {
                1.0 / (2.0 * PI * gauss_2f1(-1.0 / (s - 1.0), 0.5, 1.0, 2.0 / (1.0 + r))?)
            }
            DensityModel::UniformCircle => 0.5 / PI,
            DensityModel::Arcsine { .. } => 1.0 / PI,
        })
    }

    /// Density at `t`, with `to_lo`, `to_hi` the distances to the support
    /// ends (used to avoid cancellation near them).
    fn raw(&self, t: f64, to_lo: f64, to_hi: f64) -> f64 {
        match *self {
            DensityModel::SegmentKInf { s, .. } => (to_lo * to_hi).powf(0.5 * s - 1.0),
            DensityModel::SegmentHyper { s, r, phi } => (r + t * phi.cos()).powf(1.0 / (s - 1.0)),
            DensityModel::CircleHyper { s, r } => ((r + t.cos()) / (r + 1.0)).powf(1.0 / (s - 1.0)),
            DensityModel::UniformCircle => 1.0,
            DensityModel::Arcsine { .. } => 1.0 / (to_lo * to_hi).sqrt(),
        }
    }

    pub fn density(&self, t: f64) -> Result<f64> {
        self.validate()?;
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&t) {
            return domain(format!("{t} is outside the support [{lo}, {hi}]"));
        }
        Ok(self.normalizer()? * self.raw(t, t - lo, hi - t))
    }

    /// Distribution function by graded Gauss quadrature of the density.
    pub fn cdf(&self, t: f64) -> Result<f64> {
        self.validate()?;
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&t) {
            return domain(format!("{t} is outside the support [{lo}, {hi}]"));
        }
        let norm = self.normalizer()?;
        let rule = GradedRule::default();
        // integrate over the shorter side so values near 1 keep full accuracy
        if t - lo <= hi - t {
            let mass = rule.integrate(lo, t, |x, da, _| self.raw(x, da, hi - x));
            Ok((norm * mass).clamp(0.0, 1.0))
        } else {
            let mass = rule.integrate(t, hi, |x, _, db| self.raw(x, x - lo, db));
            Ok((1.0 - norm * mass).clamp(0.0, 1.0))
        }
    }

    /// Closed-form distribution function where one is available.
    pub fn cdf_closed_form(&self, t: f64) -> Option<f64> {
        let (lo, hi) = self.support();
        if !(lo..=hi).contains(&t) {
            return None;
        }
        match *self {
            DensityModel::UniformCircle => Some((t + PI) / (2.0 * PI)),
            DensityModel::Arcsine { r } => Some(0.5 + (t / r).clamp(-1.0, 1.0).asin() / PI),
            DensityModel::SegmentHyper { s, r, phi } => {
                let c = phi.cos();
                if c == 0.0 {
                    return Some(0.5 * (t + 1.0));
                }
                // ((R + tc)^q - (R - c)^q) / ((R + c)^q - (R - c)^q)
                let q = s / (s - 1.0);
                let grow = |u: f64| (q * (u * c / (r - c)).ln_1p()).exp_m1();
                Some(grow(1.0 + t) / grow(2.0))
            }
            DensityModel::SegmentKInf { s, r } => {
                // incomplete beta B(x; 1/2, s/2) = 2 √x 2F1(1/2, 1 - s/2; 3/2; x)
                let x = (t / r).powi(2);
                let beta = 2.0 * x.sqrt() * gauss_2f1(0.5, 1.0 - 0.5 * s, 1.5, x).ok()?;
                let c = (ln_gamma(0.5 * (1.0 + s)).ok()? - 0.5 * PI.ln() - ln_gamma(0.5 * s).ok()?).exp();
                Some(0.5 + t.signum() * 0.5 * c * beta)
            }
            DensityModel::CircleHyper { .. } => None,
        }
    }
}

/// Coordinates of the configuration in the model's variable: the signed arc
/// position from the segment midpoint, or the polar angle about the circle's
/// centre in `[-π, π)`.
pub fn model_coordinates(config: &Configuration, model: &DensityModel) -> Result<Vec<f64>> {
    model.validate()?;
    let mismatch = |why: &str| Err(Error::DomainMismatch(format!("{model:?} vs {:?}: {why}", config.curve())));
    match (config.curve(), model) {
        (Curve::Segment { start, end }, DensityModel::SegmentKInf { r, .. } | DensityModel::Arcsine { r }) => {
            let half = 0.5 * start.distance(end);
            if (half - r).abs() > 1e-9 * r {
                return mismatch("segment half-length differs from r");
            }
            Ok(config.params().iter().map(|t| (2.0 * t - 1.0) * half).collect())
        }
        (Curve::Segment { start, end }, DensityModel::SegmentHyper { r, phi, .. }) => {
            let (mx, my) = (0.5 * (start.x() + end.x()), 0.5 * (start.y() + end.y()));
            let (dx, dy) = (0.5 * (end.x() - start.x()), 0.5 * (end.y() - start.y()));
            let (c, s) = (phi.cos(), phi.sin());
            let sign = if (dx - c).abs() < 1e-9 && (dy - s).abs() < 1e-9 {
                1.0
            } else if (dx + c).abs() < 1e-9 && (dy + s).abs() < 1e-9 {
                -1.0
            } else {
                return mismatch("segment is not R + t e^{iφ}, |t| <= 1");
            };
            if (mx - r).abs() > 1e-9 || my.abs() > 1e-9 {
                return mismatch("segment midpoint is not R");
            }
            Ok(config.params().iter().map(|t| sign * (2.0 * t - 1.0)).collect())
        }
        (Curve::Circle { center, radius }, DensityModel::UniformCircle | DensityModel::CircleHyper { .. }) => {
            if let DensityModel::CircleHyper { r, .. } = model {
                if (radius - 1.0).abs() > 1e-12 || (center.x() - r).abs() > 1e-12 {
                    return mismatch("circle is not the unit circle about R");
                }
            }
            Ok(config
                .params()
                .iter()
                .map(|t| {
                    let phi = 2.0 * PI * t;
                    if phi >= PI { phi - 2.0 * PI } else { phi }
                })
                .collect())
        }
        _ => mismatch("curve kind does not carry this density"),
    }
}

/// Sorted CDF values of the configuration under the model.
fn cdf_values(config: &Configuration, model: &DensityModel) -> Result<Vec<f64>> {
    let mut u = model_coordinates(config, model)?
        .into_iter()
        .map(|t| model.cdf(t))
        .collect::<Result<Vec<f64>>>()?;
    u.sort_by(f64::total_cmp);
    Ok(u)
}

/// `max_i max(|i/N - F(t_i)|, |(i-1)/N - F(t_i)|)` over sorted `t_i`.
pub fn empirical_cdf_distance(config: &Configuration, model: &DensityModel) -> Result<f64> {
    Ok(kolmogorov(&cdf_values(config, model)?))
}

/// Distance after the best rotation of the configuration about the circle.
///
/// Rotating shifts every CDF value of the uniform law by the same amount, so
/// the optimum is half of Kuiper's statistic `D⁺ + D⁻`.
pub fn aligned_circle_distance(config: &Configuration) -> Result<f64> {
    let u = cdf_values(config, &DensityModel::UniformCircle)?;
    let n = u.len() as f64;
    let mut plus = f64::NEG_INFINITY;
    let mut minus = f64::NEG_INFINITY;
    for (i, &v) in u.iter().enumerate() {
        plus = plus.max((i as f64 + 1.0) / n - v);
        minus = minus.max(v - i as f64 / n);
    }
    Ok(0.5 * (plus + minus))
}

pub fn kolmogorov(sorted_cdf: &[f64]) -> f64 {
    let n = sorted_cdf.len() as f64;
    sorted_cdf.iter().enumerate().fold(0.0, |d, (i, &u)| {
        let i = i as f64;
        d.max(((i + 1.0) / n - u).abs()).max((i / n - u).abs())
    })
}
