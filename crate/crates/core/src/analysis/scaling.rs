//! Growth of minimal discrete energies with `N` and extrapolation of the
//! normalised energy to `N → ∞`.

use serde::{Deserialize, Serialize};

use crate::energy::{separation_radius, PairKernel};
use crate::error::{domain, Result};
use crate::geometry::Curve;
use crate::kernel::{KernelSpec, KernelVariant};
use crate::optimize::{minimize_energy, OptimizeOptions};

/// Normalisation applied to a minimal energy on a curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScalingRegime {
    /// `E / N²`.
    Potential,
    /// `E / (N² log N)`, a Riesz `1`-kernel on a curve.
    Boundary,
    /// `E / N^{1 + σ}` for a Riesz `σ`-kernel, `σ > 1`.
    Hypersingular { exponent: f64 },
}

impl ScalingRegime {
    /// Regime of a kernel on a curve. `K_s` and `K_s^∞` behave like a Riesz
    /// `(s - 1)`-kernel near the diagonal.
    pub fn for_kernel(spec: &KernelSpec) -> Self {
        let s = match spec.variant() {
            KernelVariant::K0 | KernelVariant::K1 => return Self::Potential,
            _ => spec.s().unwrap_or(0.0),
        };
        if s < 2.0 {
            Self::Potential
        } else if s == 2.0 {
            Self::Boundary
        } else {
            Self::Hypersingular { exponent: s }
        }
    }

    pub fn normalize(&self, energy: f64, n: usize) -> f64 {
        let n = n as f64;
        match *self {
            Self::Potential => energy / (n * n),
            Self::Boundary => energy / (n * n * n.ln()),
            Self::Hypersingular { exponent } => energy / n.powf(exponent),
        }
    }

    /// Removes the leading correction from two consecutive normalised values:
    /// `O(1/N)` in general, `O(1/log N)` in the boundary case.
    pub fn richardson(&self, prev: (usize, f64), next: (usize, f64)) -> f64 {
        let (h0, h1) = match self {
            Self::Boundary => (1.0 / (prev.0 as f64).ln(), 1.0 / (next.0 as f64).ln()),
            _ => (1.0 / prev.0 as f64, 1.0 / next.0 as f64),
        };
        (h0 * next.1 - h1 * prev.1) / (h0 - h1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub energy: f64,
    pub normalized: f64,
    /// Richardson value from this row and the previous one.
    pub extrapolated: Option<f64>,
    pub separation: f64,
    pub separation_times_n: f64,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingEstimate {
    pub regime: ScalingRegime,
    /// Extrapolated value from the last two rows.
    pub limit: f64,
    pub rows: Vec<ScalingRow>,
}

/// Minimises the energy for every `N` in `n_list` (at least three entries,
/// each double the previous) and extrapolates the normalised energy.
pub fn energy_scaling_estimate(
    spec: &KernelSpec,
    curve: &Curve,
    n_list: &[usize],
    opts: &OptimizeOptions,
) -> Result<ScalingEstimate> {
    check_doubling(n_list)?;
    let regime = ScalingRegime::for_kernel(spec);
    scaling_table(spec, curve, n_list, opts, regime)
}

fn check_doubling(n_list: &[usize]) -> Result<()> {
    if n_list.len() < 3 {
        return domain(format!("need at least 3 values of N, got {}", n_list.len()));
    }
    if n_list[0] < 2 || n_list.windows(2).any(|w| w[1] != 2 * w[0]) {
        return domain(format!("N values must start at 2 or more and double: {n_list:?}"));
    }
    Ok(())
}

/// [`energy_scaling_estimate`] for any pair kernel and a given regime.
pub fn scaling_table<K: PairKernel + ?Sized>(
    kernel: &K,
    curve: &Curve,
    n_list: &[usize],
    opts: &OptimizeOptions,
    regime: ScalingRegime,
) -> Result<ScalingEstimate> {
    check_doubling(n_list)?;
    let mut rows: Vec<ScalingRow> = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let (config, report) = minimize_energy(kernel, curve, n, opts)?;
        let normalized = regime.normalize(report.energy, n);
        let extrapolated = rows.last().map(|p| regime.richardson((p.n, p.normalized), (n, normalized)));
        let separation = separation_radius(&config);
        rows.push(ScalingRow {
            n,
            energy: report.energy,
            normalized,
            extrapolated,
            separation,
            separation_times_n: separation * n as f64,
            iterations: report.iterations,
            converged: report.converged,
        });
    }
    let limit = rows.last().and_then(|r| r.extrapolated).unwrap_or(f64::NAN);
    Ok(ScalingEstimate { regime, limit, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regimes() {
        assert_eq!(ScalingRegime::for_kernel(&KernelSpec::ks(0.5).unwrap()), ScalingRegime::Potential);
        assert_eq!(ScalingRegime::for_kernel(&KernelSpec::ks_inf(1.5).unwrap()), ScalingRegime::Potential);
        assert_eq!(ScalingRegime::for_kernel(&KernelSpec::ks_inf(2.0).unwrap()), ScalingRegime::Boundary);
        assert_eq!(
            ScalingRegime::for_kernel(&KernelSpec::ks(3.0).unwrap()),
            ScalingRegime::Hypersingular { exponent: 3.0 }
        );
        assert_eq!(ScalingRegime::for_kernel(&KernelSpec::k1()), ScalingRegime::Potential);
    }

    #[test]
    fn richardson_removes_first_order_term() {
        let a = |n: usize| 2.0 + 3.0 / n as f64;
        let r = ScalingRegime::Potential.richardson((64, a(64)), (128, a(128)));
        assert!((r - 2.0).abs() < 1e-13);
        let b = |n: usize| 2.0 + 3.0 / (n as f64).ln();
        let r = ScalingRegime::Boundary.richardson((64, b(64)), (128, b(128)));
        assert!((r - 2.0).abs() < 1e-13);
    }

    #[test]
    fn rejects_non_doubling_lists() {
        let spec = KernelSpec::ks_inf(3.0).unwrap();
        let curve = Curve::segment(
            crate::kernel::HalfPlanePoint::new(1.0, 0.0).unwrap(),
            crate::kernel::HalfPlanePoint::new(2.0, 0.0).unwrap(),
        )
        .unwrap();
        let opts = OptimizeOptions::default();
        assert!(energy_scaling_estimate(&spec, &curve, &[8, 16], &opts).is_err());
        assert!(energy_scaling_estimate(&spec, &curve, &[8, 16, 24], &opts).is_err());
    }
}
