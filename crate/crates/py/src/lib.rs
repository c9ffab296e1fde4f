//! Python bindings: kernels, curves, configurations, the optimizer and the
//! analysis routines.

use pyo3::exceptions::{PyArithmeticError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use riesz_core::analysis::{self, DensityModel};
use riesz_core::energy::{self, Configuration};
use riesz_core::geometry;
use riesz_core::kernel::{self, HalfPlanePoint, KernelSpec, KernelVariant};
use riesz_core::optimize::{self, OptimizeOptions};
use riesz_core::Error;

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Domain(_) | Error::Geometry(_) | Error::DomainMismatch(_) | Error::UnsupportedParameter(_) => {
            PyValueError::new_err(e.to_string())
        }
        Error::Singularity(_) => PyArithmeticError::new_err(e.to_string()),
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn point(z: (f64, f64)) -> PyResult<HalfPlanePoint> {
    HalfPlanePoint::new(z.0, z.1).map_err(py_err)
}

fn json_err(e: serde_json::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

/// A validated kernel: `ks`, `ksr`, `ksinf`, `k0` or `k1`.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Kernel(KernelSpec);

#[pymethods]
impl Kernel {
    #[new]
    #[pyo3(signature = (variant, s=None, R=None))]
    #[allow(non_snake_case)]
    fn new(variant: &str, s: Option<f64>, R: Option<f64>) -> PyResult<Self> {
        let v: KernelVariant = serde_json::from_value(serde_json::Value::String(variant.into())).map_err(json_err)?;
        KernelSpec::new(v, s, R).map(Kernel).map_err(py_err)
    }

    fn __call__(&self, z: (f64, f64), w: (f64, f64)) -> PyResult<f64> {
        self.0.eval(point(z)?, point(w)?).map_err(py_err)
    }

    #[getter]
    fn s(&self) -> Option<f64> {
        self.0.s()
    }

    fn __repr__(&self) -> String {
        format!("Kernel({})", serde_json::to_string(&self.0).unwrap_or_default())
    }
}

/// A planar curve in the closed right half-plane, parametrised over `[0, 1]`.
#[pyclass(frozen, from_py_object)]
#[derive(Clone)]
struct Curve(geometry::Curve);

#[pymethods]
impl Curve {
    #[staticmethod]
    fn segment(start: (f64, f64), end: (f64, f64)) -> PyResult<Self> {
        geometry::Curve::segment(point(start)?, point(end)?).map(Curve).map_err(py_err)
    }

    #[staticmethod]
    fn circle(center: (f64, f64), radius: f64) -> PyResult<Self> {
        geometry::Curve::circle(point(center)?, radius).map(Curve).map_err(py_err)
    }

    #[staticmethod]
    fn arc(center: (f64, f64), radius: f64, start_angle: f64, end_angle: f64) -> PyResult<Self> {
        geometry::Curve::arc(point(center)?, radius, start_angle, end_angle).map(Curve).map_err(py_err)
    }

    #[staticmethod]
    fn cassinian_oval(a: f64, b: f64, translate: f64) -> PyResult<Self> {
        geometry::Curve::cassinian_oval(a, b, translate).map(Curve).map_err(py_err)
    }

    /// Any curve in the JSON form used by the command-line specs.
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let c: geometry::Curve = serde_json::from_str(text).map_err(json_err)?;
        c.validate().map_err(py_err)?;
        Ok(Curve(c))
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).unwrap_or_default()
    }

    fn point(&self, t: f64) -> PyResult<(f64, f64)> {
        let z = self.0.point(t).map_err(py_err)?;
        Ok((z.x(), z.y()))
    }

    fn translated(&self, dx: f64) -> PyResult<Self> {
        self.0.translated(dx).map(Curve).map_err(py_err)
    }

    #[getter]
    fn length(&self) -> f64 {
        self.0.length()
    }

    #[getter]
    fn is_closed(&self) -> bool {
        self.0.is_closed()
    }
}

/// Sorted curve parameters together with their points.
#[pyclass(frozen)]
struct Config(Configuration);

#[pymethods]
impl Config {
    #[new]
    fn new(curve: Curve, params: Vec<f64>) -> PyResult<Self> {
        Configuration::new(curve.0, params).map(Config).map_err(py_err)
    }

    #[staticmethod]
    fn equispaced(curve: Curve, n: usize) -> PyResult<Self> {
        Configuration::equispaced(curve.0, n).map(Config).map_err(py_err)
    }

    #[getter]
    fn params(&self) -> Vec<f64> {
        self.0.params().to_vec()
    }

    #[getter]
    fn points(&self) -> Vec<(f64, f64)> {
        self.0.points().iter().map(|z| (z.x(), z.y())).collect()
    }

    fn energy(&self, kernel: &Kernel) -> PyResult<f64> {
        energy::discrete_energy(&kernel.0, &self.0).map_err(py_err)
    }

    fn potential(&self, kernel: &Kernel, z: (f64, f64)) -> PyResult<f64> {
        energy::discrete_potential(&kernel.0, &self.0, point(z)?).map_err(py_err)
    }

    fn gradient(&self, kernel: &Kernel) -> PyResult<Vec<f64>> {
        energy::energy_gradient(&kernel.0, &self.0).map_err(py_err)
    }

    #[getter]
    fn separation(&self) -> f64 {
        energy::separation_radius(&self.0)
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }
}

fn options(max_iterations: usize, grad_tol: f64, restarts: usize, jitter: f64, seed: u64) -> PyResult<OptimizeOptions> {
    let o = OptimizeOptions { max_iterations, grad_tol, restarts, jitter, seed };
    o.validate().map_err(py_err)?;
    Ok(o)
}

/// Minimal-energy configuration and its report as a JSON string.
#[pyfunction]
#[pyo3(signature = (kernel, curve, n, *, restarts=8, seed=0, max_iterations=10_000, grad_tol=1e-9, jitter=0.1))]
#[allow(clippy::too_many_arguments)]
fn minimize_energy(
    kernel: &Kernel,
    curve: &Curve,
    n: usize,
    restarts: usize,
    seed: u64,
    max_iterations: usize,
    grad_tol: f64,
    jitter: f64,
) -> PyResult<(Config, String)> {
    let opts = options(max_iterations, grad_tol, restarts, jitter, seed)?;
    let (config, report) = optimize::minimize_energy(&kernel.0, &curve.0, n, &opts).map_err(py_err)?;
    Ok((Config(config), serde_json::to_string(&report).map_err(json_err)?))
}

/// Limit estimate and the per-N table (JSON) of the normalised minimal energies.
#[pyfunction]
#[pyo3(signature = (kernel, curve, n_list, *, restarts=8, seed=0))]
fn energy_scaling_estimate(
    kernel: &Kernel,
    curve: &Curve,
    n_list: Vec<usize>,
    restarts: usize,
    seed: u64,
) -> PyResult<(f64, String)> {
    let opts = options(10_000, 1e-9, restarts, 0.1, seed)?;
    let est = analysis::energy_scaling_estimate(&kernel.0, &curve.0, &n_list, &opts).map_err(py_err)?;
    Ok((est.limit, serde_json::to_string(&est.rows).map_err(json_err)?))
}

/// Kolmogorov distance between a configuration and a density model given as JSON.
#[pyfunction]
fn empirical_cdf_distance(config: &Config, model: &str) -> PyResult<f64> {
    let model: DensityModel = serde_json::from_str(model).map_err(json_err)?;
    model.validate().map_err(py_err)?;
    analysis::empirical_cdf_distance(&config.0, &model).map_err(py_err)
}

#[pyfunction]
fn aligned_circle_distance(config: &Config) -> PyResult<f64> {
    analysis::aligned_circle_distance(&config.0).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (s, z, w, nodes=1024))]
fn kernel_quadrature(s: f64, z: (f64, f64), w: (f64, f64), nodes: usize) -> PyResult<f64> {
    kernel::kernel_quadrature(s, point(z)?, point(w)?, nodes).map_err(py_err)
}

#[pyfunction]
fn delta_s(x: f64, gamma: f64, s: f64) -> PyResult<f64> {
    analysis::delta_s(x, gamma, s).map_err(py_err)
}

#[pyfunction]
fn find_s1(x: f64, gamma: f64) -> PyResult<f64> {
    analysis::find_s1(x, gamma).map_err(py_err)
}

#[pyfunction]
#[allow(non_snake_case)]
fn vertical_convexity(R: f64, delta_y: f64, s: f64) -> PyResult<f64> {
    analysis::vertical_convexity(R, delta_y, s).map_err(py_err)
}

#[pyfunction]
#[pyo3(signature = (alpha, y, nodes=64))]
fn hilfssatz_integral(alpha: f64, y: f64, nodes: usize) -> PyResult<f64> {
    analysis::hilfssatz_integral(alpha, y, nodes).map_err(py_err)
}

#[pymodule]
fn riesz(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Kernel>()?;
    m.add_class::<Curve>()?;
    m.add_class::<Config>()?;
    m.add_function(wrap_pyfunction!(minimize_energy, m)?)?;
    m.add_function(wrap_pyfunction!(energy_scaling_estimate, m)?)?;
    m.add_function(wrap_pyfunction!(empirical_cdf_distance, m)?)?;
    m.add_function(wrap_pyfunction!(aligned_circle_distance, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_quadrature, m)?)?;
    m.add_function(wrap_pyfunction!(delta_s, m)?)?;
    m.add_function(wrap_pyfunction!(find_s1, m)?)?;
    m.add_function(wrap_pyfunction!(vertical_convexity, m)?)?;
    m.add_function(wrap_pyfunction!(hilfssatz_integral, m)?)?;
    Ok(())
}
