//! The three-point exclusion quantity `Δ_s` for the points `x`, `1 + iγ`
//! and `1 - iγ`, its zero in `s`, and the sign table of its level surface.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::kernel::{kernel_eval, HalfPlanePoint, KernelSpec};
use crate::specfun::{gamma as gamma_fn, gauss_2f1};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaResult {
    pub x: f64,
    pub gamma: f64,
    pub s: f64,
    pub delta: f64,
}

impl DeltaResult {
    pub fn compute(x: f64, gamma: f64, s: f64) -> Result<Self> {
        Ok(Self { x, gamma, s, delta: delta_s(x, gamma, s)? })
    }
}

fn check(x: f64, gamma: f64) -> Result<(HalfPlanePoint, HalfPlanePoint, HalfPlanePoint)> {
    if !(x > 0.0 && x.is_finite() && gamma > 0.0 && gamma.is_finite()) {
        return domain(format!("need x > 0 and gamma > 0, got x = {x}, gamma = {gamma}"));
    }
    Ok((HalfPlanePoint::new(x, 0.0)?, HalfPlanePoint::new(1.0, gamma)?, HalfPlanePoint::new(1.0, -gamma)?))
}

/// `K_s(x, w) - ½[K_s(w, w) + K_s(w, w̄)]` with `w = 1 + iγ`, `0 < s < 1`.
pub fn delta_s(x: f64, gamma: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("delta_s needs 0 < s < 1, got {s}"));
    }
    let (z, w, wb) = check(x, gamma)?;
    let spec = KernelSpec::ks(s)?;
    Ok(kernel_eval(&spec, z, w)? - 0.5 * (kernel_eval(&spec, w, w)? + kernel_eval(&spec, w, wb)?))
}

/// The same quantity written out through the hypergeometric representation.
pub fn delta_s_explicit(x: f64, gamma: f64, s: f64) -> Result<f64> {
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("delta_s needs 0 < s < 1, got {s}"));
    }
    check(x, gamma)?;
    let g2 = gamma * gamma;
    let outer = (1.0 + x) * (1.0 + x) + g2;
    let cross = outer.powf(-0.5 * s) * gauss_2f1(0.5 * s, 0.5, 1.0, 4.0 * x / outer)?;
    let mirror = 2f64.powf(-s) * (1.0 + g2).powf(-0.5 * s) * gauss_2f1(0.5 * s, 0.5, 1.0, 1.0 / (1.0 + g2))?;
    let diagonal = 2f64.powf(-s) * gamma_fn(0.5 * (1.0 - s))? / (PI.sqrt() * gamma_fn(1.0 - 0.5 * s)?);
    Ok(cross - 0.5 * mirror - 0.5 * diagonal)
}

/// `lim_{s→0⁺} Δ_s / s`, the logarithmic-kernel analogue of `Δ_s`.
pub fn delta_slope_at_zero(x: f64, gamma: f64) -> Result<f64> {
    let (z, w, wb) = check(x, gamma)?;
    let k0 = KernelSpec::k0();
    Ok(kernel_eval(&k0, z, w)? - 0.5 * (kernel_eval(&k0, w, w)? + kernel_eval(&k0, w, wb)?))
}

/// The zero `s₁ ∈ (0, 1)` of `s ↦ Δ_s(x, γ)`.
pub fn find_s1(x: f64, gamma: f64) -> Result<f64> {
    find_s1_in(x, gamma, 1e-6, 1.0 - 1e-6)
}

/// [`find_s1`] searching the bracket `[lo, hi]`.
///
/// Uniqueness of the zero is checked by a 100-point sign scan; bisection then
/// runs on the single sign change.
pub fn find_s1_in(x: f64, gamma: f64, lo: f64, hi: f64) -> Result<f64> {
    if !(0.0 < lo && lo < hi && hi < 1.0) {
        return domain(format!("bracket [{lo}, {hi}] must lie inside (0, 1)"));
    }
    let slope = delta_slope_at_zero(x, gamma)?;
    if slope <= 0.0 {
        return Err(Error::NoSignChange(format!(
            "slope of Δ_s at s = 0 is {slope} <= 0 for x = {x}, gamma = {gamma}"
        )));
    }
    let f = |s: f64| delta_s(x, gamma, s);
    const SCAN: usize = 100;
    let mut bracket = None;
    let mut prev = (lo, f(lo)?);
    for k in 1..=SCAN {
        let s = lo + (hi - lo) * k as f64 / SCAN as f64;
        let v = f(s)?;
        if (prev.1 > 0.0) != (v > 0.0) {
            if bracket.is_some() {
                return Err(Error::NonConvergence(format!(
                    "Δ_s changes sign more than once on [{lo}, {hi}] for x = {x}, gamma = {gamma}"
                )));
            }
            bracket = Some((prev.0, s));
        }
        prev = (s, v);
    }
    let (mut a, mut b) = bracket.ok_or_else(|| {
        Error::NoSignChange(format!("Δ_s keeps one sign on [{lo}, {hi}] for x = {x}, gamma = {gamma}"))
    })?;
    let positive_at_a = f(a)? > 0.0;
    while b - a > 1e-13 {
        let m = 0.5 * (a + b);
        if (f(m)? > 0.0) == positive_at_a {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(0.5 * (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LevelCell {
    pub x: f64,
    pub inv_gamma: f64,
    pub s: f64,
    pub delta: f64,
    pub sign: i8,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LevelSurface {
    pub cells: Vec<LevelCell>,
    /// Largest `s` of any cell with `Δ_s > 0`.
    pub max_positive_s: Option<f64>,
}

/// Default grids: `x` in `[0.05, 0.95]`, `1/γ` in `[0.25, 4]`, `s` in
/// `[0.01, 0.6]`.
pub fn default_level_grids() -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let x = (1..=19).map(|k| 0.05 * k as f64).collect();
    let inv_gamma = (1..=16).map(|k| 0.25 * k as f64).collect();
    let s = (1..=60).map(|k| 0.01 * k as f64).collect();
    (x, inv_gamma, s)
}

/// Sign of `Δ_s` on the product grid, ordered by `x`, then `1/γ`, then `s`.
pub fn delta_level_surface(x_grid: &[f64], inv_gamma_grid: &[f64], s_grid: &[f64]) -> Result<LevelSurface> {
    let mut cells = Vec::with_capacity(x_grid.len() * inv_gamma_grid.len() * s_grid.len());
    let mut max_positive_s: Option<f64> = None;
    for &x in x_grid {
        for &ig in inv_gamma_grid {
            if !(ig > 0.0 && ig.is_finite()) {
                return domain(format!("1/gamma = {ig} must be positive"));
            }
            for &s in s_grid {
                let delta = delta_s(x, 1.0 / ig, s)?;
                let sign = if delta > 0.0 {
                    1
                } else if delta < 0.0 {
                    -1
                } else {
                    0
                };
                if sign > 0 {
                    max_positive_s = Some(max_positive_s.map_or(s, |m| m.max(s)));
                }
                cells.push(LevelCell { x, inv_gamma: ig, s, delta, sign });
            }
        }
    }
    Ok(LevelSurface { cells, max_positive_s })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_values() {
        // mpmath, 30 digits
        let d = delta_s(0.5, 0.5, 1.0 / 3.0).unwrap();
        assert!((d - 0.001_100_720_611_116_611_8).abs() < 1e-13, "{d}");
        let d = delta_s(0.7, 0.3, 0.2).unwrap();
        assert!((d - 0.007_057_325_368_687_862_6).abs() < 1e-13, "{d}");
    }

    #[test]
    fn explicit_form_agrees() {
        for &(x, g, s) in &[(0.5, 0.5, 0.3), (0.2, 1.7, 0.05), (0.9, 0.1, 0.8), (2.0, 3.0, 0.5)] {
            let a = delta_s(x, g, s).unwrap();
            let b = delta_s_explicit(x, g, s).unwrap();
            assert!((a - b).abs() < 1e-11, "{a} vs {b}");
        }
    }

    #[test]
    fn s1_at_half_half() {
        let s1 = find_s1(0.5, 0.5).unwrap();
        assert!((s1 - 0.341_107_128_857_585_95).abs() < 1e-10, "{s1}");
        let narrow = find_s1_in(0.5, 0.5, 1e-4, 0.9).unwrap();
        assert!((s1 - narrow).abs() < 1e-9);
        for s in [0.05, 0.15, 0.30] {
            assert!(delta_s(0.5, 0.5, s).unwrap() > 0.0);
        }
        for s in [0.35, 0.5] {
            assert!(delta_s(0.5, 0.5, s).unwrap() < 0.0);
        }
    }

    #[test]
    fn slope_limit() {
        let want = 0.5 * (5f64.sqrt() - 1.0).ln();
        assert!((delta_slope_at_zero(0.5, 0.5).unwrap() - want).abs() < 1e-15);
        let ratio = delta_s(0.5, 0.5, 1e-5).unwrap() / 1e-5;
        assert!((ratio - want).abs() < 1e-5, "{ratio}");
    }

    #[test]
    fn nonpositive_slope_is_reported() {
        // far from the axis the three-point condition fails
        assert!(delta_slope_at_zero(0.99, 3.0).unwrap() <= 0.0);
        assert!(matches!(find_s1(0.99, 3.0), Err(Error::NoSignChange(_))));
    }

    #[test]
    fn level_surface_signs() {
        let surface = delta_level_surface(&[0.5], &[2.0], &[1.0 / 3.0, 0.5]).unwrap();
        assert_eq!(surface.cells[0].sign, 1);
        assert_eq!(surface.cells[1].sign, -1);
        assert_eq!(surface.max_positive_s, Some(1.0 / 3.0));
    }

    #[test]
    fn domain_errors() {
        assert!(delta_s(0.0, 0.5, 0.3).is_err());
        assert!(delta_s(0.5, 0.5, 1.0).is_err());
        assert!(find_s1_in(0.5, 0.5, 0.5, 0.4).is_err());
    }
}
