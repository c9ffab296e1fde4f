//! Quadrature of `∫₋₁¹ (1 - x²)^{-(1+α)/2} |x - y|^α dx`, whose value
//! `π / cos(πα/2)` does not depend on `y`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Error, Result};
use crate::quadrature::GradedRule;

/// The integral by `x = sin θ` and graded Gauss rules with `nodes` points per
/// panel on each side of `θ_y = asin y`.
///
/// Compares against a rule with half again as many points and reports
/// non-convergence when the two differ by more than `1e-10` relative.
pub fn hilfssatz_integral(alpha: f64, y: f64, nodes: usize) -> Result<f64> {
    if !(alpha > -1.0 && alpha < 1.0 && alpha != 0.0) {
        return domain(format!("alpha = {alpha} must lie in (-1, 1) without 0"));
    }
    if !(-1.0..=1.0).contains(&y) {
        return domain(format!("y = {y} must lie in [-1, 1]"));
    }
    if nodes < 2 {
        return domain(format!("need at least 2 nodes, got {nodes}"));
    }
    let value = integrate(alpha, y, nodes);
    let check = integrate(alpha, y, nodes + nodes / 2);
    if (value - check).abs() > 1e-10 * check.abs() {
        return Err(Error::NonConvergence(format!(
            "hilfssatz quadrature with {nodes} nodes: {value} vs {check}"
        )));
    }
    Ok(value)
}

fn integrate(alpha: f64, y: f64, nodes: usize) -> f64 {
    let rule = GradedRule::with_points(nodes);
    let theta_y = y.asin();
    // distances of θ_y from -π/2 and π/2
    let (below, above) = ((-y).acos(), y.acos());
    // cos θ = sin(distance to the nearer end); sin θ - sin θ_y =
    // 2 cos((θ + θ_y)/2) sin((θ - θ_y)/2), with the cosine taken as a sine of
    // distances so it stays accurate when both angles approach ±π/2
    let term = |to_low: f64, to_high: f64, gap: f64| {
        let cos_theta = to_low.min(to_high).sin();
        let half_sum = if to_high + above < to_low + below {
            (0.5 * (to_high + above)).sin()
        } else {
            (0.5 * (to_low + below)).sin()
        };
        // separate powers: the product of the two small sines can underflow
        cos_theta.powf(-alpha) * (2.0 * half_sum).powf(alpha) * (0.5 * gap).sin().powf(alpha)
    };
    let left = rule.integrate(-FRAC_PI_2, theta_y, |_, da, db| term(da, db + above, db));
    let right = rule.integrate(theta_y, FRAC_PI_2, |_, da, db| term(da + below, db, da));
    left + right
}
