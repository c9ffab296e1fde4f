//! Discrete energies of point configurations on curves, their potentials and
//! finite-difference gradients.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::geometry::{Curve, SurfacePoint3};
use crate::kernel::{HalfPlanePoint, KernelSpec};

/// A symmetric interaction between two half-plane points.
pub trait PairKernel {
    fn pair(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64>;
}

impl PairKernel for KernelSpec {
    fn pair(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64> {
        self.eval(z, w)
    }
}

impl<K: PairKernel + ?Sized> PairKernel for &K {
    fn pair(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64> {
        (**self).pair(z, w)
    }
}

/// `N` points on a curve given by sorted parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Configuration {
    curve: Curve,
    params: Vec<f64>,
    points: Vec<HalfPlanePoint>,
}

impl Configuration {
    /// Sorts the parameters; on closed curves they are first reduced modulo 1.
    pub fn new(curve: Curve, params: Vec<f64>) -> Result<Self> {
        if params.len() < 2 {
            return domain(format!("a configuration needs at least 2 points, got {}", params.len()));
        }
        let mut params = params;
        if curve.is_closed() {
            for t in params.iter_mut() {
                if !t.is_finite() {
                    return domain(format!("parameter {t} is not finite"));
                }
                *t = t.rem_euclid(1.0);
                if *t >= 1.0 {
                    *t = 0.0;
                }
            }
        } else if let Some(t) = params.iter().find(|t| !(0.0..=1.0).contains(*t)) {
            return domain(format!("parameter {t} is outside [0, 1]"));
        }
        params.sort_by(f64::total_cmp);
        let points = curve.points(&params)?;
        Ok(Self { curve, params, points })
    }

    /// `n` parameters spaced evenly; open curves include both endpoints.
    pub fn equispaced(curve: Curve, n: usize) -> Result<Self> {
        let params = equispaced_params(&curve, n);
        Self::new(curve, params)
    }

    pub fn curve(&self) -> &Curve {
        &self.curve
    }

    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn points(&self) -> &[HalfPlanePoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }
}

pub(crate) fn equispaced_params(curve: &Curve, n: usize) -> Vec<f64> {
    if curve.is_closed() {
        (0..n).map(|k| k as f64 / n as f64).collect()
    } else if n == 1 {
        vec![0.5]
    } else {
        (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnergyReport {
    pub energy: f64,
    pub gradient_sup_norm: f64,
    pub separation: f64,
    pub iterations: usize,
    pub restarts_used: usize,
    /// Gradient tolerance reached.
    pub converged: bool,
    /// Line search could not decrease the energy further before the tolerance
    /// was reached; the finite-difference noise floor was hit.
    pub stalled: bool,
}

/// Sum of the kernel over ordered pairs `j != k`, in ascending index order.
pub fn discrete_energy<K: PairKernel + ?Sized>(kernel: &K, config: &Configuration) -> Result<f64> {
    energy_of_points(kernel, config.points())
}

pub(crate) fn energy_of_points<K: PairKernel + ?Sized>(kernel: &K, points: &[HalfPlanePoint]) -> Result<f64> {
    let mut total = 0.0;
    for (j, &z) in points.iter().enumerate() {
        for (k, &w) in points.iter().enumerate() {
            if j != k {
                total += kernel.pair(z, w)?;
            }
        }
    }
    Ok(total)
}

/// Mean kernel value between `z` and the configuration points.
pub fn discrete_potential<K: PairKernel + ?Sized>(
    kernel: &K,
    config: &Configuration,
    z: HalfPlanePoint,
) -> Result<f64> {
    let mut total = 0.0;
    for &w in config.points() {
        total += kernel.pair(z, w)?;
    }
    Ok(total / config.len() as f64)
}

/// Interaction of a moving point with every configuration point except `skip`.
fn row<K: PairKernel + ?Sized>(kernel: &K, points: &[HalfPlanePoint], skip: usize, z: HalfPlanePoint) -> Result<f64> {
    let mut total = 0.0;
    for (k, &w) in points.iter().enumerate() {
        if k != skip {
            total += kernel.pair(z, w)?;
        }
    }
    Ok(total)
}

/// `∂E/∂params[i]` by central differences with step `cbrt(eps) max(1, |t_i|)`.
///
/// Only row `i` of the pair sum depends on `params[i]`, so each component
/// costs `2(N - 1)` kernel evaluations. Steps that would leave [0, 1] on an
/// open curve or come within the step of a neighbouring parameter use a
/// second-order one-sided stencil instead.
pub fn energy_gradient<K: PairKernel + ?Sized>(kernel: &K, config: &Configuration) -> Result<Vec<f64>> {
    gradient_at(kernel, config.curve(), config.params(), config.points())
}

pub(crate) fn gradient_at<K: PairKernel + ?Sized>(
    kernel: &K,
    curve: &Curve,
    params: &[f64],
    points: &[HalfPlanePoint],
) -> Result<Vec<f64>> {
    Ok(stencils(kernel, curve, params, points, false)?.0)
}

/// Gradient and the diagonal of the Hessian, from the same row stencils.
pub(crate) fn gradient_and_curvature<K: PairKernel + ?Sized>(
    kernel: &K,
    curve: &Curve,
    params: &[f64],
    points: &[HalfPlanePoint],
) -> Result<(Vec<f64>, Vec<f64>)> {
    stencils(kernel, curve, params, points, true)
}

fn stencils<K: PairKernel + ?Sized>(
    kernel: &K,
    curve: &Curve,
    params: &[f64],
    points: &[HalfPlanePoint],
    curvature: bool,
) -> Result<(Vec<f64>, Vec<f64>)> {
    let n = params.len();
    let closed = curve.is_closed();
    let mut grad = vec![0.0; n];
    let mut diag = if curvature { vec![0.0; n] } else { Vec::new() };
    for i in 0..n {
        let t = params[i];
        let h = f64::EPSILON.cbrt() * t.abs().max(1.0);
        // room to the neighbours (and the ends of an open curve)
        let (left, right) = if closed {
            let prev = if i == 0 { params[n - 1] - 1.0 } else { params[i - 1] };
            let next = if i == n - 1 { params[0] + 1.0 } else { params[i + 1] };
            (t - prev, next - t)
        } else {
            let prev = if i == 0 { 0.0 } else { params[i - 1] };
            let next = if i == n - 1 { 1.0 } else { params[i + 1] };
            (t - prev, next - t)
        };
        let at = |d: f64| -> Result<f64> { row(kernel, points, i, curve.point_wrapped(t + d)?) };
        let roomy = |gap: f64, bound: bool| if bound { gap >= h } else { gap > 2.0 * h };
        let open_end_left = !closed && i == 0;
        let open_end_right = !closed && i == n - 1;
        let (d1, d2) = if roomy(left, open_end_left) && roomy(right, open_end_right) {
            let (fp, fm) = (at(h)?, at(-h)?);
            let d2 = if curvature { (fp - 2.0 * at(0.0)? + fm) / (h * h) } else { 0.0 };
            ((fp - fm) / (2.0 * h), d2)
        } else {
            // one-sided toward the larger gap, shrinking the step to fit
            let h = h.min(0.25 * left.max(right));
            let sign = if right >= left { 1.0 } else { -1.0 };
            if h <= 0.0 {
                (0.0, 0.0)
            } else {
                let (f0, f1, f2) = (at(0.0)?, at(sign * h)?, at(sign * 2.0 * h)?);
                (sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * h), (f0 - 2.0 * f1 + f2) / (h * h))
            }
        };
        grad[i] = 2.0 * d1;
        if curvature {
            diag[i] = 2.0 * d2;
        }
    }
    Ok((grad, diag))
}

/// `Σ_{j≠k} |x_j - x_k|^{-s}` in 3-space.
pub fn riesz_energy_3d(s: f64, points: &[SurfacePoint3]) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return domain(format!("s = {s} must be positive"));
    }
    let mut total = 0.0;
    for (j, a) in points.iter().enumerate() {
        for (k, b) in points.iter().enumerate() {
            if j != k {
                let d = a.distance(b);
                if d == 0.0 {
                    return Err(Error::Singularity(format!("points {j} and {k} coincide")));
                }
                total += d.powf(-s);
            }
        }
    }
    Ok(total)
}

/// Smallest pairwise Euclidean distance.
pub fn separation_radius(config: &Configuration) -> f64 {
    min_distance(config.points())
}

pub(crate) fn min_distance(points: &[HalfPlanePoint]) -> f64 {
    let mut best = f64::INFINITY;
    for (j, z) in points.iter().enumerate() {
        for w in &points[j + 1..] {
            best = best.min(z.distance(w));
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::kernel_quadrature;
    use std::cell::Cell;
    use std::f64::consts::PI;

    fn p(x: f64, y: f64) -> HalfPlanePoint {
        HalfPlanePoint::new(x, y).unwrap()
    }

    fn circle() -> Curve {
        Curve::circle(p(1.5, 0.0), 1.0).unwrap()
    }

    struct Counting<'a> {
        inner: &'a KernelSpec,
        calls: Cell<usize>,
    }

    impl PairKernel for Counting<'_> {
        fn pair(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64> {
            self.calls.set(self.calls.get() + 1);
            self.inner.eval(z, w)
        }
    }

    struct Quadrature(f64);

    impl PairKernel for Quadrature {
        fn pair(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> Result<f64> {
            kernel_quadrature(self.0, z, w, 2048)
        }
    }

    #[test]
    fn energy_examples() {
        let seg = Curve::segment(p(1.0, 0.0), p(2.0, 0.0)).unwrap();
        let config = Configuration::new(seg, vec![0.0, 1.0]).unwrap();
        let e = discrete_energy(&KernelSpec::ks_inf(0.5).unwrap(), &config).unwrap();
        assert!((e + 1.525_519_527_003_626_378).abs() < 1e-13);

        let axis = Curve::segment(p(0.0, 0.0), p(0.0, 2.0)).unwrap();
        let config = Configuration::new(axis, vec![0.0, 1.0]).unwrap();
        let e = discrete_energy(&KernelSpec::k0(), &config).unwrap();
        assert!((e + 2.0 * 2f64.ln()).abs() < 1e-15);

        let config = Configuration::equispaced(circle(), 3).unwrap();
        let e = discrete_energy(&KernelSpec::ks(0.5).unwrap(), &config).unwrap();
        let oracle = discrete_energy(&Quadrature(0.5), &config).unwrap();
        assert!((e - oracle).abs() < 1e-9 * oracle.abs());
    }

    #[test]
    fn evaluation_count_is_n_times_n_minus_one() {
        let spec = KernelSpec::ks(0.5).unwrap();
        for n in [2, 5, 17] {
            let counter = Counting { inner: &spec, calls: Cell::new(0) };
            let config = Configuration::equispaced(circle(), n).unwrap();
            discrete_energy(&counter, &config).unwrap();
            assert_eq!(counter.calls.get(), n * (n - 1));
        }
    }

    #[test]
    fn potential_examples() {
        let spec = KernelSpec::ks_inf(0.5).unwrap();
        let config = Configuration::equispaced(circle(), 12).unwrap();
        let a = discrete_potential(&spec, &config, p(1.2, 0.4)).unwrap();
        let b = discrete_potential(&spec, &config, p(1.2, -0.4)).unwrap();
        assert!((a - b).abs() < 1e-14 * a.abs());
        let seg = Curve::segment(p(1.0, 0.0), p(2.0, 0.0)).unwrap();
        let single = Configuration::new(seg, vec![0.0, 1.0]).unwrap();
        let z = p(1.5, 1.0);
        let v = discrete_potential(&spec, &single, z).unwrap();
        let want = 0.5 * (spec.eval(z, p(1.0, 0.0)).unwrap() + spec.eval(z, p(2.0, 0.0)).unwrap());
        assert_eq!(v, want);
    }

    #[test]
    fn gradient_vanishes_by_symmetry() {
        let spec = KernelSpec::ks_inf(0.5).unwrap();
        let config = Configuration::new(circle(), vec![0.1, 0.6]).unwrap();
        let g = energy_gradient(&spec, &config).unwrap();
        assert!(g.iter().all(|x| x.abs() <= 1e-7), "{g:?}");
        let config = Configuration::equispaced(circle(), 9).unwrap();
        let g = energy_gradient(&spec, &config).unwrap();
        assert!(g.iter().all(|x| x.abs() <= 1e-7), "{g:?}");
    }

    #[test]
    fn gradient_matches_five_point_stencil() {
        let spec = KernelSpec::ks_inf(0.5).unwrap();
        let seg = Curve::segment(p(1.0, -1.0), p(2.0, 1.0)).unwrap();
        let params = vec![0.05, 0.21, 0.5, 0.63, 0.9];
        let config = Configuration::new(seg.clone(), params.clone()).unwrap();
        let g = energy_gradient(&spec, &config).unwrap();
        let energy = |t: &[f64]| discrete_energy(&spec, &Configuration::new(seg.clone(), t.to_vec()).unwrap()).unwrap();
        for i in 0..params.len() {
            let h = 1e-3;
            let shifted = |d: f64| {
                let mut t = params.clone();
                t[i] += d;
                energy(&t)
            };
            let want = (-shifted(2.0 * h) + 8.0 * shifted(h) - 8.0 * shifted(-h) + shifted(-2.0 * h)) / (12.0 * h);
            assert!((g[i] - want).abs() < 1e-5 * want.abs().max(1.0), "{i}: {} vs {want}", g[i]);
        }
    }

    #[test]
    fn one_sided_near_ends_and_collisions() {
        let spec = KernelSpec::ks_inf(0.5).unwrap();
        let seg = Curve::segment(p(1.0, 0.0), p(2.0, 0.0)).unwrap();
        let config = Configuration::new(seg, vec![0.0, 0.5, 0.5 + 1e-7, 1.0]).unwrap();
        let g = energy_gradient(&spec, &config).unwrap();
        assert!(g.iter().all(|x| x.is_finite()));
        // the left end point is pushed outward
        assert!(g[0] > 0.0 && g[3] < 0.0);
    }

    #[test]
    fn riesz_3d_examples() {
        let ring = [SurfacePoint3 { x: 1.0, y: 0.0, z: 0.0 }, SurfacePoint3 { x: -1.0, y: 0.0, z: 0.0 }];
        assert!((riesz_energy_3d(1.0, &ring).unwrap() - 1.0).abs() < 1e-15);
        let tri: Vec<_> = (0..3)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / 3.0;
                SurfacePoint3 { x: a.cos(), y: a.sin(), z: 0.0 }
            })
            .collect();
        assert!((riesz_energy_3d(2.0, &tri).unwrap() - 2.0).abs() < 1e-14);
        assert!(riesz_energy_3d(1.0, &[ring[0], ring[0]]).is_err());
    }

    #[test]
    fn separation_examples() {
        let seg = Curve::segment(p(1.0, 0.0), p(1.0, 1.0)).unwrap();
        let config = Configuration::new(seg, vec![0.0, 1.0]).unwrap();
        assert_eq!(separation_radius(&config), 1.0);
        for n in [2, 7, 40] {
            let config = Configuration::equispaced(circle(), n).unwrap();
            let want = 2.0 * (PI / n as f64).sin();
            assert!((separation_radius(&config) - want).abs() < 1e-14);
        }
    }

    #[test]
    fn configuration_validation() {
        assert!(Configuration::new(circle(), vec![0.5]).is_err());
        let seg = Curve::segment(p(1.0, 0.0), p(2.0, 0.0)).unwrap();
        assert!(Configuration::new(seg, vec![0.0, 1.5]).is_err());
        let c = Configuration::new(circle(), vec![1.25, -0.5, 0.1]).unwrap();
        assert_eq!(c.params(), &[0.1, 0.25, 0.5]);
    }
}
