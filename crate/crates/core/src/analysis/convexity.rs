//! Second derivative of `K_s` along vertical lines.

use crate::error::{domain, Error, Result};
use crate::specfun::{gauss_2f1_split, FunctionAccuracy};

/// `|Δ|^{1+s} ∂²/∂y² K_s(R + iy, R + iv)` at `Δ = y - v`.
///
/// Finite at `Δ = 0`, where it equals `s² ₂F₁(½, 1 - s/2; 2; 1) / (4R)`.
pub fn vertical_convexity_scaled(r: f64, delta_y: f64, s: f64) -> Result<f64> {
    if !(r > 0.0 && r.is_finite() && delta_y.is_finite()) {
        return domain(format!("need R > 0 and finite Δ, got R = {r}, Δ = {delta_y}"));
    }
    if !(s > 0.0 && s < 1.0) {
        return domain(format!("vertical_convexity needs 0 < s < 1, got {s}"));
    }
    let r2 = r * r;
    let d2 = delta_y * delta_y;
    let q = 4.0 * r2 + d2;
    let (z, zc) = (4.0 * r2 / q, d2 / q);
    let acc = FunctionAccuracy::default();
    // the first term carries Δ⁴ against a 2F1 that diverges like Δ^{s-1}
    let f1 = if d2 == 0.0 { 0.0 } else { gauss_2f1_split(0.5, 1.0 - 0.5 * s, 1.0, z, zc, &acc)? };
    let f2 = gauss_2f1_split(0.5, 1.0 - 0.5 * s, 2.0, z, zc, &acc)?;
    let num = (1.0 + s) * d2 * d2 * f1 + 2.0 * r2 * (4.0 * s * r2 + (1.0 + 2.0 * s) * d2) * f2;
    Ok(s * num / q.powf(2.5))
}

/// `∂²/∂y² K_s(R + iy, R + iv)` at `Δ = y - v ≠ 0`.
pub fn vertical_convexity(r: f64, delta_y: f64, s: f64) -> Result<f64> {
    if delta_y == 0.0 {
        return Err(Error::Singularity(format!("vertical convexity is infinite at Δ = 0 (R = {r})")));
    }
    Ok(vertical_convexity_scaled(r, delta_y, s)? / delta_y.abs().powf(1.0 + s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{HalfPlanePoint, KernelSpec};

    #[test]
    fn reference_values() {
        // mpmath second derivative of the ring average
        for &(r, d, s, want) in &[
            (1.0, 0.7, 0.5, 0.173_951_938_638_438_78),
            (0.1, 0.01, 0.1, 7.331_409_849_147_534_6),
            (10.0, 5.0, 0.9, 0.001_246_857_504_501_907_7),
        ] {
            let got = vertical_convexity(r, d, s).unwrap();
            assert!((got - want).abs() < 1e-12 * want, "{got} vs {want}");
        }
    }

    #[test]
    fn matches_finite_differences() {
        let (r, d, s) = (1.0, 0.7, 0.5);
        let spec = KernelSpec::ks(s).unwrap();
        let w = HalfPlanePoint::new(r, 0.0).unwrap();
        let k = |y: f64| spec.eval(HalfPlanePoint::new(r, y).unwrap(), w).unwrap();
        let h = 1e-3;
        let fd = (k(d + h) - 2.0 * k(d) + k(d - h)) / (h * h);
        let exact = vertical_convexity(r, d, s).unwrap();
        assert!((fd - exact).abs() < 1e-5 * exact, "{fd} vs {exact}");
    }

    #[test]
    fn scaled_limit_at_zero() {
        let got = vertical_convexity_scaled(1.0, 0.0, 0.5).unwrap();
        assert!((got - 0.095_344_970_437_726_649).abs() < 1e-13, "{got}");
        let near = vertical_convexity_scaled(1.0, 1e-6, 0.5).unwrap();
        assert!((near - got).abs() < 1e-9);
        assert!(matches!(vertical_convexity(1.0, 0.0, 0.5), Err(Error::Singularity(_))));
    }
}
