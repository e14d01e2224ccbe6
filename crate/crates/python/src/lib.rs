//! Python bindings. Built as the extension module `cone_propagator`.
//!
//! Scalar results come back as Python numbers and complex values. Nested reports
//! (classification tables, bound reports, scan metadata) are exposed as JSON strings.

use num_complex::Complex64;
use pyo3::exceptions::{PyArithmeticError, PyNotImplementedError, PyOSError, PyValueError};
use pyo3::prelude::*;

use cone_propagator::asymptotics::{self, Pairing, Regime};
use cone_propagator::critical_points::{self, BranchLabel, ConjugateAngle, Sign};
use cone_propagator::harness::{self, BoundKind, ScanOptions};
use cone_propagator::{Error, KernelPoint, PhysicalPoint};

fn to_py(err: Error) -> PyErr {
    let msg = err.to_string();
    match err {
        Error::Domain(_) | Error::InvalidParams(_) | Error::Input(_) => PyValueError::new_err(msg),
        Error::Precision { .. } | Error::Capacity(_) => PyArithmeticError::new_err(msg),
        Error::UnsupportedRegime(_) => PyNotImplementedError::new_err(msg),
        Error::Io(_) => PyOSError::new_err(msg),
    }
}

fn json<T: serde::Serialize>(value: &T) -> PyResult<String> {
    serde_json::to_string(value).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn sign(value: i64) -> PyResult<Sign> {
    match value {
        1 => Ok(Sign::Plus),
        -1 => Ok(Sign::Minus),
        _ => Err(PyValueError::new_err(format!("sign must be +1 or -1, got {value}"))),
    }
}

fn phi0(value: &str) -> PyResult<ConjugateAngle> {
    match value {
        "0" => Ok(ConjugateAngle::Zero),
        "pi" => Ok(ConjugateAngle::Pi),
        _ => Err(PyValueError::new_err(format!(
            "phi0 must be \"0\" or \"pi\", got {value:?}"
        ))),
    }
}

fn pairing(value: &str) -> PyResult<Pairing> {
    match value {
        "literal" => Ok(Pairing::Literal),
        "algebraic" => Ok(Pairing::Algebraic),
        _ => Err(PyValueError::new_err(format!(
            "pairing must be \"literal\" or \"algebraic\", got {value:?}"
        ))),
    }
}

fn regime(value: &str) -> PyResult<Regime> {
    match value {
        "interior" => Ok(Regime::Interior),
        "general" => Ok(Regime::General),
        _ => Err(PyValueError::new_err(format!(
            "regime must be \"interior\" or \"general\", got {value:?}"
        ))),
    }
}

fn bound_kind(value: &str) -> PyResult<BoundKind> {
    match value {
        "interior" => Ok(BoundKind::Interior),
        "general" => Ok(BoundKind::General),
        "smallx" => Ok(BoundKind::Smallx),
        _ => Err(PyValueError::new_err(format!(
            "bound must be interior, general or smallx, got {value:?}"
        ))),
    }
}

/// Cone `C(ρ S^{n-1})` with coupling `c`. Give either `n` or a real `d = (n-2)/2`.
#[pyclass(name = "ConeParams", frozen)]
struct PyConeParams {
    inner: cone_propagator::ConeParams,
}

#[pymethods]
impl PyConeParams {
    #[new]
    #[pyo3(signature = (rho, n=None, c=0.0, d=None))]
    fn new(rho: f64, n: Option<u32>, c: f64, d: Option<f64>) -> PyResult<Self> {
        let inner = match (n, d) {
            (Some(n), None) => cone_propagator::ConeParams::new(rho, n, c),
            (None, Some(d)) => cone_propagator::ConeParams::with_real_d(rho, d, c),
            _ => return Err(PyValueError::new_err("give exactly one of n and d")),
        }
        .map_err(to_py)?;
        Ok(Self { inner })
    }

    #[getter]
    fn rho(&self) -> f64 {
        self.inner.rho()
    }

    #[getter]
    fn n(&self) -> Option<u32> {
        self.inner.n()
    }

    #[getter]
    fn c(&self) -> f64 {
        self.inner.c()
    }

    #[getter]
    fn d(&self) -> f64 {
        self.inner.d()
    }

    #[getter]
    fn nu0(&self) -> f64 {
        self.inner.nu0()
    }

    /// Order `ν_m` of the m-th Bessel factor.
    fn nu(&self, m: u64) -> f64 {
        self.inner.nu(m)
    }

    fn to_json(&self) -> PyResult<String> {
        json(&self.inner)
    }

    fn __repr__(&self) -> String {
        match self.inner.n() {
            Some(n) => format!("ConeParams(rho={}, n={}, c={})", self.inner.rho(), n, self.inner.c()),
            None => format!(
                "ConeParams(rho={}, d={}, c={})",
                self.inner.rho(),
                self.inner.d(),
                self.inner.c()
            ),
        }
    }
}

#[pyclass(name = "SeriesResult", frozen, get_all)]
struct PySeriesResult {
    value: Complex64,
    terms_used: u64,
    tail_bound: f64,
    special_function_error: f64,
}

impl From<cone_propagator::SeriesResult> for PySeriesResult {
    fn from(r: cone_propagator::SeriesResult) -> Self {
        Self {
            value: r.value,
            terms_used: r.terms_used,
            tail_bound: r.tail_bound,
            special_function_error: r.special_function_error,
        }
    }
}

#[pymethods]
impl PySeriesResult {
    fn __repr__(&self) -> String {
        format!(
            "SeriesResult(value={}, terms_used={}, tail_bound={:e})",
            self.value, self.terms_used, self.tail_bound
        )
    }
}

/// A point of a critical set.
#[pyclass(name = "CriticalPoint", frozen, get_all)]
struct PyCriticalPoint {
    mu0: f64,
    sigma1: i8,
    sigma2: i8,
    q: i64,
    frequency: f64,
    boundary: bool,
}

#[pymethods]
impl PyCriticalPoint {
    fn __repr__(&self) -> String {
        format!(
            "CriticalPoint(mu0={}, sigma1={}, sigma2={}, q={}, frequency={})",
            self.mu0, self.sigma1, self.sigma2, self.q, self.frequency
        )
    }
}

impl From<critical_points::CriticalDatum> for PyCriticalPoint {
    fn from(c: critical_points::CriticalDatum) -> Self {
        Self {
            mu0: c.mu0,
            sigma1: c.branch.sigma1.value() as i8,
            sigma2: c.branch.sigma2.value() as i8,
            q: c.branch.q,
            frequency: c.frequency,
            boundary: c.boundary,
        }
    }
}

/// One term `amplitude · e^{i(σ₁·frequency·x + phase_constant)} · x^d` of the principal part.
#[pyclass(name = "PrincipalTerm", frozen)]
struct PyPrincipalTerm {
    inner: asymptotics::PrincipalTerm,
    d: f64,
}

#[pymethods]
impl PyPrincipalTerm {
    #[getter]
    fn sigma1(&self) -> i8 {
        self.inner.sigma1.value() as i8
    }

    #[getter]
    fn mu0(&self) -> f64 {
        self.inner.mu0
    }

    #[getter]
    fn amplitude(&self) -> f64 {
        self.inner.amplitude
    }

    #[getter]
    fn frequency(&self) -> f64 {
        self.inner.frequency
    }

    #[getter]
    fn phase_constant(&self) -> f64 {
        self.inner.phase_constant
    }

    fn __call__(&self, x: f64) -> Complex64 {
        self.inner.eval(self.d, x)
    }
}

#[pyclass(name = "FitResult", frozen, get_all)]
struct PyFitResult {
    slope: f64,
    intercept: f64,
    r_squared: f64,
    x_range: (f64, f64),
}

/// Result of a grid scan, sorted by `(phi, x)`.
#[pyclass(name = "ScanTable", frozen)]
struct PyScanTable {
    inner: harness::ScanTable,
}

#[pymethods]
impl PyScanTable {
    fn __len__(&self) -> usize {
        self.inner.rows.len()
    }

    /// Rows as `(x, phi, value, modulus)`; failed rows carry `None`.
    fn rows(&self) -> Vec<(f64, f64, Option<Complex64>, Option<f64>)> {
        self.inner
            .rows
            .iter()
            .map(|r| (r.x, r.phi, r.value, r.modulus))
            .collect()
    }

    fn moduli(&self, phi: f64) -> Vec<(f64, f64)> {
        self.inner.moduli(phi)
    }

    fn values(&self, phi: f64) -> Vec<(f64, Complex64)> {
        self.inner.values(phi)
    }

    /// `(x, |value - prediction|)` where a prediction is attached.
    fn residuals(&self, phi: f64) -> Vec<(f64, f64)> {
        self.inner.residuals(phi)
    }

    fn failed_rows(&self) -> usize {
        self.inner.failed_rows()
    }

    fn to_csv(&self) -> PyResult<String> {
        let mut buf = Vec::new();
        self.inner.write_csv(&mut buf).map_err(to_py)?;
        String::from_utf8(buf).map_err(|e| PyValueError::new_err(e.to_string()))
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        let file = std::fs::File::create(path).map_err(|e| PyOSError::new_err(format!("{path}: {e}")))?;
        self.inner.write_csv(std::io::BufWriter::new(file)).map_err(to_py)
    }

    /// Pairing selections and notes for the conjugate angles, as JSON.
    fn predictions_json(&self) -> PyResult<String> {
        json(&self.inner.predictions)
    }
}

/// `𝓘(x, φ)` with its truncation data.
#[pyfunction]
#[pyo3(signature = (params, x, phi, tol=1e-10))]
fn eval_series(params: &PyConeParams, x: f64, phi: f64, tol: f64) -> PyResult<PySeriesResult> {
    let pt = KernelPoint::new(x, phi).map_err(to_py)?;
    cone_propagator::eval_series(&params.inner, pt, tol)
        .map(Into::into)
        .map_err(to_py)
}

/// Physical kernel `K(t, r₁, r₂, φ)`.
#[pyfunction]
#[pyo3(signature = (params, t, r1, r2, phi, tol=1e-10))]
fn eval_kernel(params: &PyConeParams, t: f64, r1: f64, r2: f64, phi: f64, tol: f64) -> PyResult<Complex64> {
    let pt = PhysicalPoint::new(t, r1, r2, phi).map_err(to_py)?;
    cone_propagator::eval_kernel(&params.inner, pt, tol).map_err(to_py)
}

#[pyfunction]
#[pyo3(signature = (params, x, tol=1e-10))]
fn truncation_index(params: &PyConeParams, x: f64, tol: f64) -> PyResult<u64> {
    cone_propagator::truncation_index(&params.inner, x, tol).map_err(to_py)
}

/// `Q = ⌊1/(2ρ) + 1/2⌋ + 1`, the bound on `|q|` for nonempty critical sets.
#[pyfunction]
fn q_bound(rho: f64) -> i64 {
    critical_points::q_bound(rho)
}

#[pyfunction]
fn critical_set(rho: f64, sigma1: i64, sigma2: i64, q: i64, phi: f64) -> PyResult<Vec<PyCriticalPoint>> {
    let branch = BranchLabel::new(sign(sigma1)?, sign(sigma2)?, q);
    Ok(critical_points::critical_set(rho, branch, phi)
        .into_iter()
        .map(Into::into)
        .collect())
}

/// Union of the critical sets over `|q| <= Q`.
#[pyfunction]
fn critical_union(rho: f64, sigma1: i64, sigma2: i64, phi: f64) -> PyResult<Vec<PyCriticalPoint>> {
    Ok(critical_points::critical_union(rho, sign(sigma1)?, sign(sigma2)?, phi)
        .into_iter()
        .map(Into::into)
        .collect())
}

/// `(mu0, q, frequency)` for each conjugate point at `phi0` in `{"0", "pi"}`.
#[pyfunction]
fn conjugate_frequencies(rho: f64, sigma1: i64, phi0: &str) -> PyResult<Vec<(f64, i64, f64)>> {
    Ok(
        critical_points::conjugate_frequencies(rho, sign(sigma1)?, self::phi0(phi0)?)
            .into_iter()
            .map(|c| (c.mu0, c.q, c.frequency))
            .collect(),
    )
}

/// Regime flags and emptiness tables, as JSON.
#[pyfunction]
fn classify(rho: f64) -> PyResult<String> {
    json(&critical_points::classify(rho))
}

#[pyfunction]
#[pyo3(signature = (params, phi0, pairing="algebraic"))]
fn principal_terms(params: &PyConeParams, phi0: &str, pairing: &str) -> PyResult<Vec<PyPrincipalTerm>> {
    let d = params.inner.d();
    Ok(
        asymptotics::principal_terms(&params.inner, self::phi0(phi0)?, self::pairing(pairing)?)
            .map_err(to_py)?
            .into_iter()
            .map(|inner| PyPrincipalTerm { inner, d })
            .collect(),
    )
}

#[pyfunction]
#[pyo3(signature = (params, phi0, x, pairing="algebraic"))]
fn principal_prediction(params: &PyConeParams, phi0: &str, x: f64, pairing: &str) -> PyResult<Complex64> {
    asymptotics::principal_prediction(&params.inner, self::phi0(phi0)?, x, self::pairing(pairing)?).map_err(to_py)
}

#[pyfunction]
fn series_envelope(params: &PyConeParams, x: f64, regime: &str) -> PyResult<f64> {
    Ok(asymptotics::series_envelope(&params.inner, x, self::regime(regime)?))
}

#[pyfunction]
fn dispersive_envelope(params: &PyConeParams, t: f64, r1: f64, r2: f64, phi: f64, regime: &str) -> PyResult<f64> {
    let pt = PhysicalPoint::new(t, r1, r2, phi).map_err(to_py)?;
    Ok(asymptotics::dispersive_envelope(
        &params.inner,
        pt,
        self::regime(regime)?,
    ))
}

#[pyfunction]
#[pyo3(signature = (params, x_grid, phis, tol=1e-10, with_prediction=false, workers=1))]
fn scan(
    py: Python<'_>,
    params: &PyConeParams,
    x_grid: Vec<f64>,
    phis: Vec<f64>,
    tol: f64,
    with_prediction: bool,
    workers: usize,
) -> PyResult<PyScanTable> {
    let options = ScanOptions {
        tol,
        with_prediction,
        workers,
    };
    let inner = py
        .detach(|| harness::scan(&params.inner, &x_grid, &phis, options))
        .map_err(to_py)?;
    Ok(PyScanTable { inner })
}

/// Least-squares slope of `ln|y|` against `ln x`.
#[pyfunction]
fn fit_decay_exponent(samples: Vec<(f64, f64)>) -> PyResult<PyFitResult> {
    let f = harness::fit_decay_exponent(&samples).map_err(to_py)?;
    Ok(PyFitResult {
        slope: f.slope,
        intercept: f.intercept,
        r_squared: f.r_squared,
        x_range: f.x_range,
    })
}

#[pyfunction]
#[pyo3(signature = (samples, bins_per_octave=1))]
fn octave_maxima(samples: Vec<(f64, f64)>, bins_per_octave: usize) -> Vec<(f64, f64)> {
    harness::octave_maxima(&samples, bins_per_octave)
}

/// Angular frequency of the strongest oscillation, or `None` when there is none.
#[pyfunction]
#[pyo3(signature = (samples, expected_growth=0.0))]
fn dominant_frequency(samples: Vec<(f64, Complex64)>, expected_growth: f64) -> PyResult<Option<f64>> {
    Ok(harness::dominant_frequency(&samples, expected_growth)
        .map_err(to_py)?
        .frequency())
}

/// Bound report as JSON; `bound` is one of interior, general, smallx.
#[pyfunction]
#[pyo3(signature = (table, bound, threshold=10.0))]
fn verify_bound(table: &PyScanTable, bound: &str, threshold: f64) -> PyResult<String> {
    json(&harness::verify_bound(&table.inner, bound_kind(bound)?, threshold).map_err(to_py)?)
}

#[pymodule]
#[pyo3(name = "cone_propagator")]
fn init(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyConeParams>()?;
    m.add_class::<PySeriesResult>()?;
    m.add_class::<PyCriticalPoint>()?;
    m.add_class::<PyPrincipalTerm>()?;
    m.add_class::<PyFitResult>()?;
    m.add_class::<PyScanTable>()?;
    m.add_function(wrap_pyfunction!(eval_series, m)?)?;
    m.add_function(wrap_pyfunction!(eval_kernel, m)?)?;
    m.add_function(wrap_pyfunction!(truncation_index, m)?)?;
    m.add_function(wrap_pyfunction!(q_bound, m)?)?;
    m.add_function(wrap_pyfunction!(critical_set, m)?)?;
    m.add_function(wrap_pyfunction!(critical_union, m)?)?;
    m.add_function(wrap_pyfunction!(conjugate_frequencies, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    m.add_function(wrap_pyfunction!(principal_terms, m)?)?;
    m.add_function(wrap_pyfunction!(principal_prediction, m)?)?;
    m.add_function(wrap_pyfunction!(series_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(dispersive_envelope, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    m.add_function(wrap_pyfunction!(fit_decay_exponent, m)?)?;
    m.add_function(wrap_pyfunction!(octave_maxima, m)?)?;
    m.add_function(wrap_pyfunction!(dominant_frequency, m)?)?;
    m.add_function(wrap_pyfunction!(verify_bound, m)?)?;
    Ok(())
}
