//! Python bindings for `multisym`.
//!
//! Configurations are lists of points (lists of floats); embeddings are flat
//! lists in the basis order. Library errors surface as `MultisymError`, a
//! subclass of `ValueError`.

use multisym::decompose::{eval_g_values, FIT_SYMMETRY_TOL};
use multisym::probes::{geometric_params, DEFAULT_T_START, DEFAULT_T_STEPS};
use multisym::separation::optimal_matching;
use multisym::{calculus::DEFAULT_RANK_TOL, Embedding, Error, ExponentVector};
use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

create_exception!(pymultisym, MultisymError, PyValueError);

fn err(e: Error) -> PyErr {
    match &e {
        Error::SymmetryViolation(report) => {
            let detail = serde_json::to_string(&**report).unwrap_or_default();
            MultisymError::new_err(format!("{e}: {detail}"))
        }
        _ => MultisymError::new_err(e.to_string()),
    }
}

#[pyclass(name = "Basis", module = "pymultisym", frozen)]
struct PyBasis {
    inner: multisym::GeneratorBasis,
}

#[pymethods]
impl PyBasis {
    #[new]
    #[pyo3(signature = (d, n, include_constant = false))]
    fn new(d: usize, n: usize, include_constant: bool) -> PyResult<Self> {
        let inner = multisym::enumerate_generators(d, n, include_constant).map_err(err)?;
        Ok(PyBasis { inner })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn include_constant(&self) -> bool {
        self.inner.include_constant()
    }

    fn exponents(&self) -> Vec<Vec<u32>> {
        self.inner.exponents().iter().map(|s| s.entries().to_vec()).collect()
    }

    fn index_of(&self, exponent: Vec<u32>) -> Option<usize> {
        self.inner.index_of(&exponent)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __repr__(&self) -> String {
        format!(
            "Basis(d={}, n={}, include_constant={}, len={})",
            self.inner.d(),
            self.inner.n(),
            if self.inner.include_constant() { "True" } else { "False" },
            self.inner.len()
        )
    }
}

#[pyclass(name = "Configuration", module = "pymultisym", frozen)]
struct PyConfiguration {
    inner: multisym::Configuration,
}

#[pymethods]
impl PyConfiguration {
    #[new]
    fn new(points: Vec<Vec<f64>>) -> PyResult<Self> {
        let inner = multisym::Configuration::new(points).map_err(err)?;
        Ok(PyConfiguration { inner })
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    fn points(&self) -> Vec<Vec<f64>> {
        self.inner.points().map(<[f64]>::to_vec).collect()
    }

    /// Points reordered as `x[sigma[i]]`.
    fn permuted(&self, sigma: Vec<usize>) -> PyResult<Self> {
        let p = multisym::Permutation::new(sigma).map_err(err)?;
        let inner = self.inner.permuted(&p).map_err(err)?;
        Ok(PyConfiguration { inner })
    }

    /// Lexicographically sorted representative of the orbit.
    fn canonical(&self) -> Self {
        PyConfiguration {
            inner: multisym::canonicalize(&self.inner),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!("Configuration({:?})", self.points())
    }
}

#[pyclass(name = "SeparatingPolynomial", module = "pymultisym", frozen)]
struct PySeparatingPolynomial {
    inner: multisym::SeparatingPolynomial,
}

#[pymethods]
impl PySeparatingPolynomial {
    #[getter]
    fn degree(&self) -> u32 {
        self.inner.degree()
    }

    /// `(exponent, coefficient)` pairs of the single-point polynomial `q`.
    fn terms(&self) -> Vec<(Vec<u32>, f64)> {
        self.inner
            .terms()
            .iter()
            .map(|(s, c)| (s.entries().to_vec(), *c))
            .collect()
    }

    /// `p(x) = sum_i q(x_i)`.
    fn __call__(&self, config: PyRef<'_, PyConfiguration>) -> PyResult<f64> {
        multisym::evaluate_separating(&self.inner, &config.inner).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.inner).expect("polynomial serializes")
    }
}

#[pyclass(name = "FittedDecomposition", module = "pymultisym", frozen)]
struct PyFittedDecomposition {
    inner: multisym::FittedDecomposition,
}

#[pymethods]
impl PyFittedDecomposition {
    /// Table lookup at an embedding vector.
    fn __call__(&self, z: Vec<f64>) -> PyResult<f64> {
        eval_g_values(&self.inner, &z).map_err(err)
    }

    /// `g(embed(config))`.
    fn at(&self, config: PyRef<'_, PyConfiguration>) -> PyResult<f64> {
        let z = multisym::embed(self.inner.basis(), &config.inner).map_err(err)?;
        multisym::eval_g(&self.inner, &z).map_err(err)
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let value: serde_json::Value =
            serde_json::from_str(text).map_err(|e| MultisymError::new_err(format!("malformed JSON: {e}")))?;
        let inner = multisym::FittedDecomposition::from_json(&value).map_err(err)?;
        Ok(PyFittedDecomposition { inner })
    }
}

fn dataset(d: usize, configs: Vec<PyRef<'_, PyConfiguration>>, values: Vec<f64>) -> PyResult<multisym::LabeledDataset> {
    if configs.len() != values.len() {
        return Err(MultisymError::new_err(format!(
            "{} configurations but {} values",
            configs.len(),
            values.len()
        )));
    }
    let n = configs.first().map_or(0, |c| c.inner.n());
    let basis = multisym::enumerate_generators(d, n, false).map_err(err)?;
    let records = configs.iter().map(|c| c.inner.clone()).zip(values).collect();
    multisym::LabeledDataset::from_records(basis, records).map_err(err)
}

#[pyfunction]
fn generator_count(d: usize, n: usize) -> PyResult<u64> {
    multisym::generator_count(d, n).map_err(err)
}

#[pyfunction]
fn embed(basis: PyRef<'_, PyBasis>, config: PyRef<'_, PyConfiguration>) -> PyResult<Vec<f64>> {
    Ok(multisym::embed(&basis.inner, &config.inner).map_err(err)?.into_values())
}

/// Rows in basis order, columns point-major.
#[pyfunction]
fn jacobian(basis: PyRef<'_, PyBasis>, config: PyRef<'_, PyConfiguration>) -> PyResult<Vec<Vec<f64>>> {
    Ok(multisym::jacobian(&basis.inner, &config.inner).map_err(err)?.to_rows())
}

/// Coincident pair indices are 0-based here.
#[pyfunction]
#[pyo3(signature = (basis, config, tol = DEFAULT_RANK_TOL))]
fn classify_rank<'py>(
    py: Python<'py>,
    basis: PyRef<'py, PyBasis>,
    config: PyRef<'py, PyConfiguration>,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let r = multisym::classify_rank(&basis.inner, &config.inner, tol).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("sigma_min", r.smallest_singular_value)?;
    out.set_item("sigma_max", r.largest_singular_value)?;
    out.set_item("rank", r.rank)?;
    out.set_item("full_column_rank", r.full_column_rank)?;
    out.set_item("coincident_pair", r.coincident_pair)?;
    out.set_item("numerically_singular", r.numerically_singular)?;
    Ok(out)
}

#[pyfunction]
fn reconstruct_norm(basis: PyRef<'_, PyBasis>, values: Vec<f64>) -> PyResult<f64> {
    let e = Embedding::from_values(&basis.inner, values).map_err(err)?;
    multisym::reconstruct_norm(&basis.inner, &e).map_err(err)
}

#[pyfunction]
#[pyo3(signature = (x, y, eps = 0.0))]
fn orbit_equal(x: PyRef<'_, PyConfiguration>, y: PyRef<'_, PyConfiguration>, eps: f64) -> PyResult<bool> {
    multisym::orbit_equal(&x.inner, &y.inner, eps).map_err(err)
}

/// Distance and a 0-based optimal matching `i -> matching[i]`.
#[pyfunction]
fn quotient_distance(x: PyRef<'_, PyConfiguration>, y: PyRef<'_, PyConfiguration>) -> PyResult<(f64, Vec<usize>)> {
    let d = multisym::quotient_distance(&x.inner, &y.inner).map_err(err)?;
    let m = optimal_matching(&x.inner, &y.inner).map_err(err)?;
    Ok((d, m))
}

#[pyfunction]
fn separating_polynomial(
    x: PyRef<'_, PyConfiguration>,
    y: PyRef<'_, PyConfiguration>,
) -> PyResult<PySeparatingPolynomial> {
    let inner = multisym::separating_polynomial(&x.inner, &y.inner).map_err(err)?;
    Ok(PySeparatingPolynomial { inner })
}

#[pyfunction]
fn fit_g(d: usize, configs: Vec<PyRef<'_, PyConfiguration>>, values: Vec<f64>) -> PyResult<PyFittedDecomposition> {
    let ds = dataset(d, configs, values)?;
    let inner = multisym::fit_g(&ds).map_err(err)?;
    Ok(PyFittedDecomposition { inner })
}

type Violation = (Vec<Vec<f64>>, Vec<usize>, f64, f64);

/// Violations as `(representative points, 0-based record indices, min, max)`.
#[pyfunction]
#[pyo3(signature = (d, configs, values, tol = FIT_SYMMETRY_TOL))]
fn check_symmetry(
    d: usize,
    configs: Vec<PyRef<'_, PyConfiguration>>,
    values: Vec<f64>,
    tol: f64,
) -> PyResult<Vec<Violation>> {
    let ds = dataset(d, configs, values)?;
    let report = multisym::check_symmetry(&ds, tol).map_err(err)?;
    Ok(report
        .violations
        .into_iter()
        .map(|v| {
            let pts = v.representative.points().map(<[f64]>::to_vec).collect();
            (pts, v.records, v.min, v.max)
        })
        .collect())
}

#[pyfunction]
fn invert_d1(power_sums: Vec<f64>) -> PyResult<Vec<f64>> {
    multisym::invert_d1(&power_sums).map_err(err)
}

#[pyfunction]
fn image_membership(z: Vec<f64>) -> PyResult<bool> {
    Ok(multisym::image_membership(
        &multisym::FiberQuery::from_slice(&z).map_err(err)?,
    ))
}

#[pyfunction]
fn fiber<'py>(py: Python<'py>, z: Vec<f64>) -> PyResult<Bound<'py, PyDict>> {
    let f = multisym::fiber(&multisym::FiberQuery::from_slice(&z).map_err(err)?);
    let witnesses: Vec<PyConfiguration> = f.witnesses.into_iter().map(|inner| PyConfiguration { inner }).collect();
    let out = PyDict::new(py);
    out.set_item("case", f.case.as_str())?;
    out.set_item("w", f.w_values)?;
    out.set_item("witnesses", witnesses)?;
    out.set_item("near_boundary", f.near_boundary)?;
    Ok(out)
}

#[pyfunction]
#[pyo3(signature = (example, t_start = DEFAULT_T_START, t_steps = DEFAULT_T_STEPS))]
fn probe<'py>(py: Python<'py>, example: &str, t_start: f64, t_steps: usize) -> PyResult<Bound<'py, PyDict>> {
    let ex = multisym::builtin_example(example).map_err(err)?;
    let params = geometric_params(t_start, t_steps).map_err(err)?;
    let report = ex.run(&params).map_err(err)?;
    let out = PyDict::new(py);
    out.set_item("example", ex.id)?;
    out.set_item("expected_exponent", ex.expected_exponent)?;
    out.set_item("exponent", report.exponent)?;
    out.set_item("t", report.ratios.samples.iter().map(|s| s.t).collect::<Vec<_>>())?;
    out.set_item("ratios", report.ratios.ratios())?;
    out.set_item(
        "log_log",
        report.log_log.iter().map(|p| (p.log_dz, p.log_df)).collect::<Vec<_>>(),
    )?;
    Ok(out)
}

#[pyfunction]
fn monomial(point: Vec<f64>, exponent: Vec<u32>) -> f64 {
    multisym::embed::monomial(&point, &ExponentVector::new(exponent))
}

#[pymodule]
fn pymultisym(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("MultisymError", m.py().get_type::<MultisymError>())?;
    m.add_class::<PyBasis>()?;
    m.add_class::<PyConfiguration>()?;
    m.add_class::<PySeparatingPolynomial>()?;
    m.add_class::<PyFittedDecomposition>()?;
    m.add_function(wrap_pyfunction!(generator_count, m)?)?;
    m.add_function(wrap_pyfunction!(embed, m)?)?;
    m.add_function(wrap_pyfunction!(jacobian, m)?)?;
    m.add_function(wrap_pyfunction!(classify_rank, m)?)?;
    m.add_function(wrap_pyfunction!(reconstruct_norm, m)?)?;
    m.add_function(wrap_pyfunction!(orbit_equal, m)?)?;
    m.add_function(wrap_pyfunction!(quotient_distance, m)?)?;
    m.add_function(wrap_pyfunction!(separating_polynomial, m)?)?;
    m.add_function(wrap_pyfunction!(fit_g, m)?)?;
    m.add_function(wrap_pyfunction!(check_symmetry, m)?)?;
    m.add_function(wrap_pyfunction!(invert_d1, m)?)?;
    m.add_function(wrap_pyfunction!(image_membership, m)?)?;
    m.add_function(wrap_pyfunction!(fiber, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    m.add_function(wrap_pyfunction!(monomial, m)?)?;
    Ok(())
}
