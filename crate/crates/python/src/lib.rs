//! Python bindings: `import tempent_py`.

use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use tempent::axioms::{self, AxiomReport};
use tempent::entropy::{self as ent, Derivative, EntropyParams, ProbDist};
use tempent::fracderiv::{self, FracParams, QuadResult};
use tempent::lesche::{self, Family, StabilityRecord};
use tempent::Error;

fn to_py(err: Error) -> PyErr {
    match err {
        Error::ToleranceNotReached { .. } => PyRuntimeError::new_err(err.to_string()),
        other => PyValueError::new_err(other.to_string()),
    }
}

#[pyclass(name = "ProbDist", frozen, module = "tempent_py")]
struct PyProbDist {
    inner: ProbDist,
}

#[pymethods]
impl PyProbDist {
    #[new]
    fn new(weights: Vec<f64>) -> PyResult<Self> {
        Ok(Self {
            inner: ProbDist::new(weights).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn uniform(n: usize) -> PyResult<Self> {
        Ok(Self {
            inner: ProbDist::uniform(n).map_err(to_py)?,
        })
    }

    #[getter]
    fn weights(&self) -> Vec<f64> {
        self.inner.weights().to_vec()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn l1_distance(&self, other: &PyProbDist) -> PyResult<f64> {
        self.inner.l1_distance(&other.inner).map_err(to_py)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("ProbDist({:?})", self.inner.weights())
    }
}

#[pyclass(name = "EntropyParams", frozen, module = "tempent_py")]
struct PyEntropyParams {
    inner: EntropyParams,
}

#[pymethods]
impl PyEntropyParams {
    #[new]
    #[pyo3(signature = (sigma, lambda_ = 0.0))]
    fn new(sigma: f64, lambda_: f64) -> PyResult<Self> {
        Ok(Self {
            inner: EntropyParams::new(sigma, lambda_).map_err(to_py)?,
        })
    }

    #[getter]
    fn sigma(&self) -> f64 {
        self.inner.sigma()
    }

    #[getter]
    fn lambda_(&self) -> f64 {
        self.inner.lambda()
    }

    fn __repr__(&self) -> String {
        format!(
            "EntropyParams(sigma={}, lambda_={})",
            self.inner.sigma(),
            self.inner.lambda()
        )
    }
}

#[pyclass(name = "StabilityRecord", frozen, get_all, module = "tempent_py")]
struct PyStabilityRecord {
    family: String,
    n: usize,
    delta: f64,
    sigma: f64,
    lambda_: f64,
    s_p: f64,
    s_p_prime: f64,
    ratio: f64,
}

impl From<StabilityRecord> for PyStabilityRecord {
    fn from(r: StabilityRecord) -> Self {
        Self {
            family: r.label(),
            n: r.n,
            delta: r.delta,
            sigma: r.sigma,
            lambda_: r.lambda,
            s_p: r.s_p,
            s_p_prime: r.s_p_prime,
            ratio: r.ratio,
        }
    }
}

#[pymethods]
impl PyStabilityRecord {
    fn __repr__(&self) -> String {
        format!(
            "StabilityRecord(family={:?}, n={}, ratio={})",
            self.family, self.n, self.ratio
        )
    }
}

#[pyclass(name = "AxiomReport", frozen, get_all, module = "tempent_py")]
struct PyAxiomReport {
    axiom: String,
    samples_checked: usize,
    worst_violation: f64,
    tolerance: f64,
    passed: bool,
}

impl From<AxiomReport> for PyAxiomReport {
    fn from(r: AxiomReport) -> Self {
        Self {
            axiom: r.axiom.to_string(),
            samples_checked: r.samples_checked,
            worst_violation: r.worst_violation,
            tolerance: r.tolerance,
            passed: r.passed(),
        }
    }
}

#[pymethods]
impl PyAxiomReport {
    fn __repr__(&self) -> String {
        format!(
            "AxiomReport(axiom={:?}, worst_violation={}, passed={})",
            self.axiom, self.worst_violation, self.passed
        )
    }
}

#[pyclass(name = "QuadResult", frozen, get_all, module = "tempent_py")]
struct PyQuadResult {
    value: f64,
    err_estimate: f64,
    evaluations: usize,
}

impl From<QuadResult> for PyQuadResult {
    fn from(q: QuadResult) -> Self {
        Self {
            value: q.value,
            err_estimate: q.err_estimate,
            evaluations: q.evaluations,
        }
    }
}

#[pyfunction]
fn entropy(p: &PyProbDist, params: &PyEntropyParams) -> f64 {
    ent::entropy(&p.inner, &params.inner).get()
}

#[pyfunction]
fn ubriaco_entropy(p: &PyProbDist, alpha: f64) -> PyResult<f64> {
    Ok(ent::ubriaco_entropy(&p.inner, alpha).map_err(to_py)?.get())
}

#[pyfunction]
fn shannon_entropy(p: &PyProbDist) -> f64 {
    ent::shannon_entropy(&p.inner).get()
}

#[pyfunction]
fn max_entropy(n: usize, params: &PyEntropyParams) -> PyResult<f64> {
    Ok(ent::max_entropy(n, &params.inner).map_err(to_py)?.get())
}

#[pyfunction]
fn generator(x: f64, params: &PyEntropyParams) -> PyResult<f64> {
    ent::generator(x, &params.inner).map_err(to_py)
}

/// Returns `-inf` where the derivative is unbounded.
#[pyfunction]
fn generator_derivative(x: f64, params: &PyEntropyParams) -> PyResult<f64> {
    Ok(
        match ent::generator_derivative(x, &params.inner).map_err(to_py)? {
            Derivative::Finite(v) => v,
            Derivative::NegInfinite => f64::NEG_INFINITY,
        },
    )
}

#[pyfunction]
fn g_func(x: f64, params: &PyEntropyParams) -> PyResult<f64> {
    ent::g_func(x, &params.inner).map_err(to_py)
}

#[pyfunction]
fn renyi_entropy(p: &PyProbDist, q: f64) -> PyResult<f64> {
    lesche::renyi_entropy(&p.inner, q).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (n, count, seed = 0))]
fn sample_simplex(n: usize, count: usize, seed: u64) -> PyResult<Vec<PyProbDist>> {
    Ok(axioms::sample_simplex(n, count, seed)
        .map_err(to_py)?
        .into_iter()
        .map(|inner| PyProbDist { inner })
        .collect())
}

#[pyfunction]
#[pyo3(signature = (n, params, samples = 10_000, seed = 0))]
fn check_maximality(
    n: usize,
    params: &PyEntropyParams,
    samples: usize,
    seed: u64,
) -> PyResult<PyAxiomReport> {
    Ok(axioms::check_maximality(n, &params.inner, samples, seed)
        .map_err(to_py)?
        .into())
}

#[pyfunction]
fn check_expansibility(p: &PyProbDist, params: &PyEntropyParams) -> PyAxiomReport {
    axioms::check_expansibility(&p.inner, &params.inner).into()
}

#[pyfunction]
#[pyo3(signature = (params, grid_points = 199))]
fn check_generator_concavity(
    params: &PyEntropyParams,
    grid_points: usize,
) -> PyResult<PyAxiomReport> {
    Ok(
        axioms::check_generator_concavity(&params.inner, grid_points)
            .map_err(to_py)?
            .into(),
    )
}

#[pyfunction]
fn check_entropy_concavity(
    p: &PyProbDist,
    q: &PyProbDist,
    t: f64,
    params: &PyEntropyParams,
) -> PyResult<PyAxiomReport> {
    Ok(
        axioms::check_entropy_concavity(&p.inner, &q.inner, t, &params.inner)
            .map_err(to_py)?
            .into(),
    )
}

#[pyfunction]
fn check_lambda_inequality(p: &PyProbDist, sigma: f64, lambda_: f64) -> PyResult<PyAxiomReport> {
    Ok(axioms::check_lambda_inequality(&p.inner, sigma, lambda_)
        .map_err(to_py)?
        .into())
}

#[pyfunction]
fn check_power_subadditivity(x: f64, y: f64, alpha: f64) -> PyResult<PyAxiomReport> {
    Ok(axioms::check_power_subadditivity(x, y, alpha)
        .map_err(to_py)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (families, n_grid, delta, params, control_q = None))]
fn sweep(
    families: Vec<String>,
    n_grid: Vec<usize>,
    delta: f64,
    params: &PyEntropyParams,
    control_q: Option<f64>,
) -> PyResult<Vec<PyStabilityRecord>> {
    let families = families
        .iter()
        .map(|f| f.parse::<Family>())
        .collect::<Result<Vec<_>, _>>()
        .map_err(to_py)?;
    Ok(
        lesche::sweep(&families, &n_grid, delta, &params.inner, control_q)
            .map_err(to_py)?
            .into_iter()
            .map(Into::into)
            .collect(),
    )
}

/// Returns the best searched pair as `(p, p_prime, record)`.
#[pyfunction]
#[pyo3(signature = (n, delta, params, iterations = 10_000, seed = 0))]
fn random_pair_search(
    n: usize,
    delta: f64,
    params: &PyEntropyParams,
    iterations: usize,
    seed: u64,
) -> PyResult<(PyProbDist, PyProbDist, PyStabilityRecord)> {
    let out =
        lesche::random_pair_search(n, delta, &params.inner, iterations, seed).map_err(to_py)?;
    Ok((
        PyProbDist { inner: out.pair.p },
        PyProbDist {
            inner: out.pair.p_prime,
        },
        out.record.into(),
    ))
}

#[pyfunction]
fn gamma_fn(t: f64) -> PyResult<f64> {
    fracderiv::gamma_fn(t).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (c, sigma, tol = fracderiv::DEFAULT_QUAD_TOL))]
fn laplace_singular_quad(c: f64, sigma: f64, tol: f64) -> PyResult<PyQuadResult> {
    Ok(fracderiv::laplace_singular_quad(c, sigma, tol)
        .map_err(to_py)?
        .into())
}

#[pyfunction]
#[pyo3(signature = (sigma, lambda_, p, t = -1.0, h = None))]
fn tempered_derivative_numeric(
    sigma: f64,
    lambda_: f64,
    p: f64,
    t: f64,
    h: Option<f64>,
) -> PyResult<f64> {
    let params = FracParams::new(sigma, lambda_, p, t).map_err(to_py)?;
    let h = h.unwrap_or_else(|| fracderiv::default_step(t));
    fracderiv::tempered_derivative_numeric(&params, h).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (sigma, lambda_, p, t = -1.0))]
fn closed_form_derivative(sigma: f64, lambda_: f64, p: f64, t: f64) -> PyResult<f64> {
    let params = FracParams::new(sigma, lambda_, p, t).map_err(to_py)?;
    Ok(fracderiv::closed_form_derivative(&params))
}

#[pymodule]
fn tempent_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyProbDist>()?;
    m.add_class::<PyEntropyParams>()?;
    m.add_class::<PyStabilityRecord>()?;
    m.add_class::<PyAxiomReport>()?;
    m.add_class::<PyQuadResult>()?;

    m.add_function(wrap_pyfunction!(entropy, m)?)?;
    m.add_function(wrap_pyfunction!(ubriaco_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(shannon_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(max_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(generator, m)?)?;
    m.add_function(wrap_pyfunction!(generator_derivative, m)?)?;
    m.add_function(wrap_pyfunction!(g_func, m)?)?;
    m.add_function(wrap_pyfunction!(renyi_entropy, m)?)?;
    m.add_function(wrap_pyfunction!(sample_simplex, m)?)?;
    m.add_function(wrap_pyfunction!(check_maximality, m)?)?;
    m.add_function(wrap_pyfunction!(check_expansibility, m)?)?;
    m.add_function(wrap_pyfunction!(check_generator_concavity, m)?)?;
    m.add_function(wrap_pyfunction!(check_entropy_concavity, m)?)?;
    m.add_function(wrap_pyfunction!(check_lambda_inequality, m)?)?;
    m.add_function(wrap_pyfunction!(check_power_subadditivity, m)?)?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(random_pair_search, m)?)?;
    m.add_function(wrap_pyfunction!(gamma_fn, m)?)?;
    m.add_function(wrap_pyfunction!(laplace_singular_quad, m)?)?;
    m.add_function(wrap_pyfunction!(tempered_derivative_numeric, m)?)?;
    m.add_function(wrap_pyfunction!(closed_form_derivative, m)?)?;
    Ok(())
}
