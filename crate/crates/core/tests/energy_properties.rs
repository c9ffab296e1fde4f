use std::f64::consts::PI;

use proptest::prelude::*;
use riesz_core::energy::{
    discrete_energy, discrete_potential, energy_gradient, riesz_energy_3d, Configuration, PairKernel,
};
use riesz_core::geometry::{lift_to_3d, Curve};
use riesz_core::kernel::{HalfPlanePoint, KernelSpec};
use riesz_core::optimize::{minimize_energy, OptimizeOptions};

fn p(x: f64, y: f64) -> HalfPlanePoint {
    HalfPlanePoint::new(x, y).unwrap()
}

fn circle() -> Curve {
    Curve::circle(p(1.5, 0.0), 1.0).unwrap()
}

/// Each half-plane point becomes a ring of `m` points; dropping the pairs
/// inside one ring leaves `m²` times the reduced energy.
#[test]
fn three_dimensional_ring_consistency() {
    let m = 512;
    for s in [0.5, 1.5] {
        let config = Configuration::equispaced(circle(), 4).unwrap();
        let spec = KernelSpec::ks(s).unwrap();
        let rings: Vec<Vec<_>> = config
            .points()
            .iter()
            .map(|&z| (0..m).map(|k| lift_to_3d(z, 2.0 * PI * k as f64 / m as f64)).collect())
            .collect();
        let all: Vec<_> = rings.iter().flatten().copied().collect();
        let within: f64 = rings.iter().map(|r| riesz_energy_3d(s, r).unwrap()).sum();
        let reduced = (riesz_energy_3d(s, &all).unwrap() - within) / (m * m) as f64;
        let e = discrete_energy(&spec, &config).unwrap();
        assert!((reduced - e).abs() < 1e-6 * e, "s={s}: {reduced} vs {e}");
    }
}

fn params(n: usize) -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0..1.0f64, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn permutation_invariant(mut t in params(7), seed in 0usize..100) {
        let spec = KernelSpec::ks(0.5).unwrap();
        let a = discrete_energy(&spec, &Configuration::new(circle(), t.clone()).unwrap()).unwrap();
        let n = t.len();
        t.rotate_left(seed % n);
        t.swap(0, seed % n);
        let b = discrete_energy(&spec, &Configuration::new(circle(), t).unwrap()).unwrap();
        prop_assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn homogeneous_under_scaling(t in params(6), r in 0.2..5.0f64, s in 0.1..0.9f64) {
        let seg = Curve::segment(p(0.5, -1.0), p(2.0, 0.7)).unwrap();
        let big = Curve::segment(p(0.5 * r, -r), p(2.0 * r, 0.7 * r)).unwrap();
        let spec = KernelSpec::ks(s).unwrap();
        let a = discrete_energy(&spec, &Configuration::new(seg, t.clone()).unwrap()).unwrap();
        let b = discrete_energy(&spec, &Configuration::new(big, t).unwrap()).unwrap();
        prop_assert!((b - r.powf(-s) * a).abs() <= 1e-11 * b.abs());
    }

    #[test]
    fn ordered_sum_is_twice_unordered(t in params(9)) {
        let spec = KernelSpec::ks_inf(0.5).unwrap();
        let config = Configuration::new(circle(), t).unwrap();
        let pts = config.points();
        let mut half = 0.0;
        for j in 0..pts.len() {
            for k in j + 1..pts.len() {
                half += spec.eval(pts[j], pts[k]).unwrap();
            }
        }
        let e = discrete_energy(&spec, &config).unwrap();
        prop_assert!((e - 2.0 * half).abs() <= 1e-14 * e.abs().max(1.0) * pts.len() as f64);
    }
}

#[test]
fn equispaced_gradient_components_agree() {
    for spec in [KernelSpec::ks_inf(0.5).unwrap(), KernelSpec::ks_inf(3.0).unwrap()] {
        let config = Configuration::new(circle(), (0..10).map(|k| 0.013 + k as f64 / 10.0).collect()).unwrap();
        let g = energy_gradient(&spec, &config).unwrap();
        for v in &g {
            assert!((v - g[0]).abs() < 1e-7, "{g:?}");
        }
    }
}

#[test]
fn potential_is_symmetric_under_reflection() {
    let spec = KernelSpec::ks_inf(0.5).unwrap();
    let config = Configuration::equispaced(circle(), 9).unwrap();
    let a = discrete_potential(&spec, &config, p(1.2, 0.4)).unwrap();
    let b = discrete_potential(&spec, &config, p(1.2, -0.4)).unwrap();
    assert!((a - b).abs() < 1e-14);
}

/// At an optimum the potential at the points is constant up to an `O(1/N)`
/// discretisation term.
#[test]
fn optimized_potential_is_nearly_flat() {
    let seg = Curve::segment(p(1.0, 0.0), p(3.0, 0.0)).unwrap();
    let spec = KernelSpec::ks_inf(0.5).unwrap();
    let opts = OptimizeOptions { restarts: 1, ..Default::default() };
    let spread = |n: usize| {
        let (config, _) = minimize_energy(&spec, &seg, n, &opts).unwrap();
        let pots: Vec<f64> = config.points().iter().map(|&z| discrete_potential(&spec, &config, z).unwrap()).collect();
        let max = pots.iter().copied().fold(f64::MIN, f64::max);
        let min = pots.iter().copied().fold(f64::MAX, f64::min);
        let mean = pots.iter().sum::<f64>() / n as f64;
        (max - min) / mean.abs()
    };
    let (s64, s128) = (spread(64), spread(128));
    assert!(s64 <= 2e-3, "{s64}");
    let ratio = s128 / s64;
    assert!((0.4..=0.6).contains(&ratio), "{s64} {s128}");
}

struct Counting<'a> {
    inner: &'a KernelSpec,
    calls: std::cell::Cell<usize>,
}

impl PairKernel for Counting<'_> {
    fn pair(&self, z: HalfPlanePoint, w: HalfPlanePoint) -> riesz_core::Result<f64> {
        self.calls.set(self.calls.get() + 1);
        self.inner.eval(z, w)
    }
}

#[test]
fn energy_costs_one_evaluation_per_ordered_pair() {
    let spec = KernelSpec::ks(0.5).unwrap();
    for n in [2, 5, 17] {
        let counting = Counting { inner: &spec, calls: Default::default() };
        discrete_energy(&counting, &Configuration::equispaced(circle(), n).unwrap()).unwrap();
        assert_eq!(counting.calls.get(), n * (n - 1));
    }
}
