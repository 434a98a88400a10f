//! Python bindings. Angular momenta are passed as twice their value, so
//! `j = 1/2` is `1`; operator labels use `L` and `M` directly.

use blochspace_core::bloch::{self, INPUT_TOLERANCE};
use blochspace_core::positivity::{self, Verdict, DEFAULT_TOLERANCE};
use blochspace_core::sections::{self, Param, QutritParams, Section, SectionType};
use blochspace_core::{eigen, polarization, ComplexMatrix, HalfInt, PolOpLabel};
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn py_err(e: blochspace_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_rows(m: &ComplexMatrix) -> Vec<Vec<Complex64>> {
    m.rows().map(<[Complex64]>::to_vec).collect()
}

fn from_rows(rows: Vec<Vec<Complex64>>) -> PyResult<ComplexMatrix> {
    ComplexMatrix::from_rows(rows).map_err(py_err)
}

fn section_type(name: &str) -> PyResult<SectionType> {
    name.parse().map_err(py_err)
}

/// Exact value of an angular momentum coefficient: `sign * sqrt(p/q)`.
fn exact(v: blochspace_core::SignedSqrtRational) -> (f64, String) {
    (v.to_f64(), v.to_string())
}

/// Clebsch-Gordan coefficient `<j1 m1; j2 m2 | J M>` as `(float, exact string)`.
#[pyfunction]
fn cgc(two_j1: i32, two_m1: i32, two_j2: i32, two_m2: i32, two_j: i32, two_m: i32) -> PyResult<(f64, String)> {
    let h = HalfInt::from_twice;
    blochspace_core::cgc(h(two_j1), h(two_m1), h(two_j2), h(two_m2), h(two_j), h(two_m))
        .map(exact)
        .map_err(py_err)
}

/// Wigner 6j symbol `{a b c; d e f}` as `(float, exact string)`.
#[pyfunction]
fn wigner6j(two_a: i32, two_b: i32, two_c: i32, two_d: i32, two_e: i32, two_f: i32) -> PyResult<(f64, String)> {
    let h = HalfInt::from_twice;
    blochspace_core::wigner6j(h(two_a), h(two_b), h(two_c), h(two_d), h(two_e), h(two_f))
        .map(exact)
        .map_err(py_err)
}

/// `(L, M)` labels for spin `j = two_j / 2` in canonical order.
#[pyfunction]
fn labels(two_j: u32) -> Vec<(u32, i32)> {
    polarization::labels(two_j).into_iter().map(|l| (l.l, l.m)).collect()
}

/// Matrix of `T_LM(j)`; row `i` is the projection `m = j - i`.
#[pyfunction]
#[pyo3(signature = (two_j, l, m))]
fn polarization_operator(two_j: u32, l: u32, m: i32) -> PyResult<Vec<Vec<Complex64>>> {
    let label = PolOpLabel::new(two_j, l, m).map_err(py_err)?;
    polarization::polarization_operator(label).map(|t| to_rows(&t)).map_err(py_err)
}

/// Generalized Bloch vector of a `(2j+1)`-level system.
#[pyclass(name = "BlochVector", module = "blochspace", from_py_object)]
#[derive(Clone)]
struct PyBlochVector(bloch::BlochVector);

#[pymethods]
impl PyBlochVector {
    /// Real parameters in canonical order: for each `L`, `V_L0` then
    /// `(Re V_LM, Im V_LM)` for `M = 1..L`.
    #[new]
    fn new(two_j: u32, params: Vec<f64>) -> PyResult<Self> {
        bloch::BlochVector::from_real_params(two_j, &params).map(Self).map_err(py_err)
    }

    #[staticmethod]
    #[pyo3(signature = (two_j))]
    fn zero(two_j: u32) -> PyResult<Self> {
        bloch::BlochVector::zero(two_j).map(Self).map_err(py_err)
    }

    /// Bloch vector of a hermitian unit-trace matrix.
    #[staticmethod]
    #[pyo3(signature = (rho, tolerance = INPUT_TOLERANCE))]
    fn from_density(rho: Vec<Vec<Complex64>>, tolerance: f64) -> PyResult<Self> {
        bloch::density_to_bloch(&from_rows(rho)?, tolerance).map(Self).map_err(py_err)
    }

    /// `rho = 1/N + V·T`. Positivity is not implied.
    fn density(&self) -> PyResult<Vec<Vec<Complex64>>> {
        bloch::bloch_to_density(&self.0).map(|m| to_rows(&m)).map_err(py_err)
    }

    #[getter]
    fn two_j(&self) -> u32 {
        self.0.two_j()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.0.dim()
    }

    #[getter]
    fn params(&self) -> Vec<f64> {
        self.0.real_params()
    }

    /// Component `V_LM`, including `M < 0`.
    fn get(&self, l: u32, m: i32) -> Complex64 {
        self.0.get(l, m)
    }

    fn norm_sq(&self) -> f64 {
        self.0.norm_sq()
    }

    fn dot(&self, other: &Self) -> PyResult<f64> {
        bloch::bloch_dot(&self.0, &other.0).map_err(py_err)
    }

    fn __repr__(&self) -> String {
        format!("BlochVector(two_j={}, params={:?})", self.0.two_j(), self.0.real_params())
    }
}

#[pyclass(name = "PositivityReport", module = "blochspace", get_all, skip_from_py_object)]
#[derive(Clone)]
struct PyPositivityReport {
    n: usize,
    /// `S_1..S_N`.
    s: Vec<f64>,
    /// `T_2..T_N`.
    t: Vec<f64>,
    traces: Vec<f64>,
    verdict: String,
    is_positive: bool,
    tolerance: f64,
    method: String,
}

#[pymethods]
impl PyPositivityReport {
    fn min_s(&self) -> f64 {
        self.s.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn __repr__(&self) -> String {
        format!("PositivityReport(N={}, verdict={}, S={:?})", self.n, self.verdict, self.s)
    }
}

impl From<positivity::PositivityReport> for PyPositivityReport {
    fn from(r: positivity::PositivityReport) -> Self {
        Self {
            n: r.n,
            verdict: r.verdict.name().to_string(),
            is_positive: r.verdict.is_positive(),
            method: format!("{:?}", r.method),
            s: r.s,
            t: r.t,
            traces: r.traces,
            tolerance: r.tolerance,
        }
    }
}

enum State {
    Matrix(ComplexMatrix),
    Bloch(bloch::BlochVector),
}

fn extract_state(state: &Bound<'_, PyAny>) -> PyResult<State> {
    if let Ok(v) = state.cast::<PyBlochVector>() {
        return Ok(State::Bloch(v.borrow().0.clone()));
    }
    Ok(State::Matrix(from_rows(state.extract()?)?))
}

/// Positivity from the characteristic-polynomial coefficients. `state` is a
/// `BlochVector` or a nested list of complex entries. With `oracle=True` the
/// verdict is confirmed against the eigenvalues and a mismatch raises.
#[pyfunction]
#[pyo3(signature = (state, tolerance = DEFAULT_TOLERANCE, oracle = false))]
fn check_positivity(state: &Bound<'_, PyAny>, tolerance: f64, oracle: bool) -> PyResult<PyPositivityReport> {
    let report = match (extract_state(state)?, oracle) {
        (State::Matrix(m), false) => positivity::check_positivity(&m, tolerance),
        (State::Matrix(m), true) => positivity::check_positivity_with_oracle(&m, tolerance),
        (State::Bloch(v), false) => positivity::check_positivity(&v, tolerance),
        (State::Bloch(v), true) => positivity::check_positivity_with_oracle(&v, tolerance),
    };
    report.map(Into::into).map_err(py_err)
}

/// `S_1..S_N` of a hermitian matrix.
#[pyfunction]
fn char_poly_coeffs(rho: Vec<Vec<Complex64>>) -> PyResult<Vec<f64>> {
    positivity::char_poly_coeffs(&from_rows(rho)?).map_err(py_err)
}

/// Eigenvalues of a hermitian matrix, descending.
#[pyfunction]
fn eigenvalues(rho: Vec<Vec<Complex64>>) -> PyResult<Vec<f64>> {
    eigen::eigen_oracle(&from_rows(rho)?).map_err(py_err)
}

/// Whether a verdict name counts as a physical state.
#[pyfunction]
fn verdict_is_positive(name: &str) -> PyResult<bool> {
    [Verdict::Positive, Verdict::Marginal, Verdict::NonPositive]
        .into_iter()
        .find(|v| v.name() == name)
        .map(Verdict::is_positive)
        .ok_or_else(|| PyValueError::new_err(format!("unknown verdict {name:?}")))
}

/// `F = 1/9 - |V|²/2 + T_3` for qutrit parameters `(x, a, b, y, α1, β1, α2, β2)`.
#[pyfunction]
fn qutrit_f(params: [f64; 8]) -> f64 {
    sections::qutrit_f(&QutritParams::from_array(params))
}

/// Type name (`"I"`..`"VII"`) of the section spanned by two parameters.
#[pyfunction]
fn section_type_of(p: &str, q: &str) -> PyResult<String> {
    let p: Param = p.parse().map_err(py_err)?;
    let q: Param = q.parse().map_err(py_err)?;
    sections::section_members(p, q).map(|k| k.name().to_string()).map_err(py_err)
}

/// Closed-form `F(s, t)` on a section type.
#[pyfunction]
fn section_f(kind: &str, s: f64, t: f64) -> PyResult<f64> {
    Ok(sections::section_f(section_type(kind)?, s, t))
}

/// Pure states lying in a section type's plane.
#[pyfunction]
fn pure_states(kind: &str) -> PyResult<Vec<(f64, f64)>> {
    Ok(sections::pure_states(section_type(kind)?))
}

/// Grid scan of a section (`"x,y"` or `"VI"`) over `[-1, 1]²`. Returns a dict
/// with `points` as `(s, t, norm_sq, F, class)` rows, `class` being 0 for
/// allowed, 1 for inside the trace ball only and 2 for outside it.
#[pyfunction]
#[pyo3(signature = (section, resolution = 401, tolerance = DEFAULT_TOLERANCE))]
fn scan<'py>(py: Python<'py>, section: &str, resolution: usize, tolerance: f64) -> PyResult<Bound<'py, PyDict>> {
    let section = Section::parse(section).map_err(py_err)?;
    let result = py
        .detach(|| sections::scan(section, resolution, tolerance))
        .map_err(py_err)?;
    let points: Vec<(f64, f64, f64, f64, u8)> = result
        .points
        .iter()
        .map(|p| (p.s, p.t, p.norm_sq, p.f, p.class as u8))
        .collect();
    let out = PyDict::new(py);
    out.set_item("type", result.section.kind.name())?;
    out.set_item("pair", (result.section.s.name(), result.section.t.name()))?;
    out.set_item("resolution", result.resolution)?;
    out.set_item("tolerance", result.tolerance)?;
    out.set_item("points", points)?;
    out.set_item("boundary", result.boundary)?;
    out.set_item("pure_states", result.pure_states)?;
    Ok(out)
}

#[pymodule]
fn blochspace(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBlochVector>()?;
    m.add_class::<PyPositivityReport>()?;
    m.add_function(wrap_pyfunction!(cgc, m)?)?;
    m.add_function(wrap_pyfunction!(wigner6j, m)?)?;
    m.add_function(wrap_pyfunction!(labels, m)?)?;
    m.add_function(wrap_pyfunction!(polarization_operator, m)?)?;
    m.add_function(wrap_pyfunction!(check_positivity, m)?)?;
    m.add_function(wrap_pyfunction!(char_poly_coeffs, m)?)?;
    m.add_function(wrap_pyfunction!(eigenvalues, m)?)?;
    m.add_function(wrap_pyfunction!(verdict_is_positive, m)?)?;
    m.add_function(wrap_pyfunction!(qutrit_f, m)?)?;
    m.add_function(wrap_pyfunction!(section_type_of, m)?)?;
    m.add_function(wrap_pyfunction!(section_f, m)?)?;
    m.add_function(wrap_pyfunction!(pure_states, m)?)?;
    m.add_function(wrap_pyfunction!(scan, m)?)?;
    Ok(())
}
