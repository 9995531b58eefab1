//! Python bindings for the toolkit's main pipelines. Structured reports are
//! returned as JSON strings so callers can feed them straight into
//! `json.loads`.

use bbkit_core::error::BbError;
use bbkit_core::funcgrid::{chi_value, Grid, LibraryFunction};
use bbkit_core::kernels::{kernel_stft_roundtrip, tensor_embed};
use bbkit_core::kothe::{
    build_phi0, check_kothe_n, kothe_from_system, sampling_s, verify_s_t_identity, IndexWindow,
    IndexedSequence,
};
use bbkit_core::report::Variant;
use bbkit_core::stft::reconstruct;
use bbkit_core::weights::{
    check_alpha, check_condition_m, check_condition_n, check_condition_s, check_condition_sq,
    check_gamma, QuadratureSpec, SearchSpec, WeightExpr, WeightSystem,
};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

fn err(e: BbError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_variant(variant: &str) -> PyResult<Variant> {
    match variant {
        "beurling" => Ok(Variant::Beurling),
        "roumieu" => Ok(Variant::Roumieu),
        other => Err(PyValueError::new_err(format!(
            "variant must be 'beurling' or 'roumieu', got {other:?}"
        ))),
    }
}

fn parse_function(tag: &str) -> PyResult<LibraryFunction> {
    LibraryFunction::from_tag(tag).map_err(err)
}

fn to_json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Exponential weight system `{e^{ω/λ}}` over a generator described by a
/// JSON expression, e.g. `{"family": "power", "a": 1.0, "s": 1.0}`.
#[pyclass]
struct PyWeightSystem {
    system: WeightSystem,
    omega: WeightExpr,
    dim: usize,
}

#[pymethods]
impl PyWeightSystem {
    #[new]
    #[pyo3(signature = (omega_json, dim = 1))]
    fn new(omega_json: &str, dim: usize) -> PyResult<Self> {
        let omega: WeightExpr = serde_json::from_str(omega_json)
            .map_err(|e| PyValueError::new_err(format!("bad generator expression: {e}")))?;
        let system = WeightSystem::exponential(omega.clone(), dim).map_err(err)?;
        Ok(PyWeightSystem { system, omega, dim })
    }

    /// `w^λ(x)`.
    fn eval(&self, lam: f64, x: Vec<f64>) -> PyResult<f64> {
        self.system.eval(lam, &x).map_err(err)
    }

    /// Run one structural condition checker; returns the report as JSON.
    /// Conditions: "alpha", "gamma", "m", "sq", "n", "s".
    fn check(&self, condition: &str, variant: &str) -> PyResult<String> {
        let v = parse_variant(variant)?;
        let mut search = SearchSpec::default();
        search.dim = self.dim;
        let mut quad = QuadratureSpec::default();
        quad.dim = self.dim;
        let report = match condition {
            "alpha" => check_alpha(&self.omega, &search),
            "gamma" => check_gamma(&self.omega, v, &search),
            "m" => check_condition_m(&self.system, v, &search),
            "sq" => check_condition_sq(&self.system, v, &search),
            "n" => check_condition_n(&self.system, v, &quad),
            "s" => check_condition_s(&self.system, v, &quad),
            other => {
                return Err(PyValueError::new_err(format!("unknown condition {other:?}")))
            }
        }
        .map_err(err)?;
        to_json(&report)
    }

    /// Discrete summability check on the lattice-sampled system (JSON report).
    #[pyo3(signature = (variant, window_radius = 5))]
    fn check_lattice(&self, variant: &str, window_radius: i64) -> PyResult<String> {
        let v = parse_variant(variant)?;
        let mut quad = QuadratureSpec::default();
        quad.dim = self.dim;
        let window = IndexWindow::new(self.dim, window_radius).map_err(err)?;
        let set =
            kothe_from_system(&self.system, window, quad.lambda_lattice.clone()).map_err(err)?;
        to_json(&check_kothe_n(&set, v, &quad).map_err(err)?)
    }
}

/// `χ(x) = ∏ sin(2πx_i)/(2πx_i)`.
#[pyfunction]
fn chi(x: Vec<f64>) -> f64 {
    chi_value(&x)
}

/// Sup error of the window reconstruction identity applied to a library
/// function on a centered 1-d grid.
#[pyfunction]
#[pyo3(signature = (function = "gaussian", window = "gaussian", n = 256, h = 1.0 / 16.0))]
fn reconstruction_error(function: &str, window: &str, n: usize, h: f64) -> PyResult<f64> {
    let grid = Grid::new(1, n, h).map_err(err)?;
    let f = parse_function(function)?.sample(grid).map_err(err)?;
    let w = parse_function(window)?.sample(grid).map_err(err)?;
    let (_, e) = reconstruct(&f, &w, &w).map_err(err)?;
    Ok(e)
}

/// Sup error of the separable-kernel round-trip with gaussian windows; the
/// kernel is the tensor square of a library function.
#[pyfunction]
#[pyo3(signature = (factor = "gaussian", n = 32, h = 0.25))]
fn kernel_roundtrip_error(factor: &str, n: usize, h: f64) -> PyResult<f64> {
    let grid = Grid::new(1, n, h).map_err(err)?;
    let f = parse_function(factor)?.sample(grid).map_err(err)?;
    let g = LibraryFunction::Gaussian.sample(grid).map_err(err)?;
    let kernel = tensor_embed(&[f.clone()], &[f]).map_err(err)?;
    let (_, report) = kernel_stft_roundtrip(&kernel, &g, &g, &g, &g).map_err(err)?;
    Ok(report.sup_error)
}

/// Build the sinc-windowed bump from a gaussian and return
/// `(max |S(φ₀)_j − δ_j|, sampling-identity error)`.
#[pyfunction]
#[pyo3(signature = (n = 4096, h = 1.0 / 128.0, window_radius = 5, identity_radius = 3))]
fn phi0_identity_errors(
    n: usize,
    h: f64,
    window_radius: i64,
    identity_radius: i64,
) -> PyResult<(f64, f64)> {
    let grid = Grid::new(1, n, h).map_err(err)?;
    let phi = LibraryFunction::Gaussian.sample(grid).map_err(err)?;
    let phi0 = build_phi0(&phi).map_err(err)?;
    let window = IndexWindow::new(1, window_radius).map_err(err)?;
    let samples = sampling_s(&phi0, window).map_err(err)?;
    let mut max_dev = 0.0f64;
    for j in -window_radius..=window_radius {
        let v = samples.get(&[j]).map_err(err)?;
        let expected = if j == 0 { 1.0 } else { 0.0 };
        max_dev = max_dev.max((v - Complex64::new(expected, 0.0)).norm());
    }
    let idwin = IndexWindow::new(1, identity_radius).map_err(err)?;
    let e0 = IndexedSequence::unit(idwin, &[0]).map_err(err)?;
    let (_, identity_error) = verify_s_t_identity(&e0, &phi0).map_err(err)?;
    Ok((max_dev, identity_error))
}

#[pymodule]
fn bbkit(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWeightSystem>()?;
    m.add_function(wrap_pyfunction!(chi, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruction_error, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_roundtrip_error, m)?)?;
    m.add_function(wrap_pyfunction!(phi0_identity_errors, m)?)?;
    Ok(())
}
