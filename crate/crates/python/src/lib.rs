//! Python bindings for the mpzeta core crate.

use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use mpzeta::analytics;
use mpzeta::boundary::{builtin_curve_zeros, load_zeros, residue_ledger, zeta_zero_scan, ZeroList};
use mpzeta::lfunc::builders::build_lambda_e;
use mpzeta::lfunc::elliptic::{ec_an_integers, DEFAULT_DEPTH};
use mpzeta::lfunc::{build_z_e, build_z_e_squared, build_z_k, completed_l, LFunctionSpec, QuadField};
use mpzeta::meanper::{self, TestFunction};
use mpzeta::mellin;
use mpzeta::Error;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidInput(_) | Error::Parse { .. } | Error::InvalidDiscriminant(_) | Error::UnsupportedField(_) => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

/// An elliptic curve over Q given by a minimal Weierstrass model.
#[pyclass(name = "EllipticCurve", module = "mpzeta_py", frozen)]
struct PyCurve {
    inner: mpzeta::lfunc::EllipticCurve,
}

#[pymethods]
impl PyCurve {
    #[new]
    #[pyo3(signature = (label, a, conductor, sign))]
    fn new(label: &str, a: [i64; 5], conductor: u64, sign: i32) -> PyResult<Self> {
        Ok(PyCurve { inner: mpzeta::lfunc::EllipticCurve::new(label, a, conductor, sign).map_err(to_py)? })
    }

    /// One of the curves shipped with the library (11a1, 37a1, 389a1).
    #[staticmethod]
    fn builtin(label: &str) -> PyResult<Self> {
        Ok(PyCurve { inner: mpzeta::lfunc::EllipticCurve::builtin(label).map_err(to_py)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn conductor(&self) -> u64 {
        self.inner.conductor
    }

    #[getter]
    fn sign(&self) -> i32 {
        self.inner.sign_omega
    }

    /// Dirichlet coefficients a_1 .. a_n.
    fn an(&self, n: usize) -> PyResult<Vec<i64>> {
        let a = ec_an_integers(&self.inner, n).map_err(to_py)?;
        Ok(a[1..=n].to_vec())
    }

    fn __repr__(&self) -> String {
        format!("EllipticCurve('{}', conductor={})", self.inner.label, self.inner.conductor)
    }
}

/// A completed zeta or L-function Z(s) = γ(s)D(s).
#[pyclass(name = "LFunction", module = "mpzeta_py", frozen)]
struct PyLFunction {
    inner: LFunctionSpec,
}

#[pymethods]
impl PyLFunction {
    /// Λ_Q(s) = π^{-s/2}Γ(s/2)ζ(s).
    #[staticmethod]
    fn riemann() -> Self {
        PyLFunction { inner: LFunctionSpec::riemann() }
    }

    #[staticmethod]
    fn dedekind(d: i64) -> PyResult<Self> {
        let field = QuadField::new(d).map_err(to_py)?;
        Ok(PyLFunction { inner: LFunctionSpec::dedekind(field).map_err(to_py)? })
    }

    #[staticmethod]
    fn z_k(d: i64) -> PyResult<Self> {
        let field = QuadField::new(d).map_err(to_py)?;
        Ok(PyLFunction { inner: build_z_k(&field).map_err(to_py)? })
    }

    #[staticmethod]
    fn z_e(curve: &PyCurve) -> PyResult<Self> {
        Ok(PyLFunction { inner: build_z_e(&curve.inner).map_err(to_py)? })
    }

    #[staticmethod]
    fn z_e_squared(curve: &PyCurve) -> PyResult<Self> {
        Ok(PyLFunction { inner: build_z_e_squared(&curve.inner).map_err(to_py)? })
    }

    /// Λ(E,s) of the curve.
    #[staticmethod]
    fn lambda_e(curve: &PyCurve) -> PyResult<Self> {
        Ok(PyLFunction { inner: build_lambda_e(&curve.inner, DEFAULT_DEPTH).map_err(to_py)? })
    }

    #[getter]
    fn label(&self) -> String {
        self.inner.label.clone()
    }

    #[getter]
    fn sign(&self) -> Complex64 {
        self.inner.sign_eps
    }

    fn __call__(&self, s: Complex64) -> PyResult<Complex64> {
        completed_l(&self.inner, s).map_err(to_py)
    }

    /// D(s) = Z(s)/γ(s).
    fn dirichlet(&self, s: Complex64) -> PyResult<Complex64> {
        self.inner.dirichlet_part(s).map_err(to_py)
    }

    /// |Z(s) - ε Z(d+1-s)|.
    fn functional_equation_defect(&self, s: Complex64) -> PyResult<f64> {
        let k = Complex64::new(self.inner.weight_d as f64 + 1.0, 0.0);
        let a = completed_l(&self.inner, s).map_err(to_py)?;
        let b = completed_l(&self.inner, k - s).map_err(to_py)?;
        Ok((a - self.inner.sign_eps * b).norm())
    }

    fn __repr__(&self) -> String {
        format!("LFunction('{}')", self.inner.label)
    }
}

/// Boundary terms of Z_E from the theta and Bessel series.
#[pyclass(name = "EllipticBoundary", module = "mpzeta_py", frozen)]
struct PyBoundary {
    inner: mellin::EllipticBoundary,
}

#[pymethods]
impl PyBoundary {
    #[new]
    fn new(curve: &PyCurve) -> PyResult<Self> {
        Ok(PyBoundary { inner: mellin::EllipticBoundary::new(&curve.inner).map_err(to_py)? })
    }

    fn theta(&self, t: f64) -> PyResult<f64> {
        self.inner.theta(t).map_err(to_py)
    }

    #[pyo3(signature = (t, k = 1))]
    fn theta_derivative(&self, t: f64, k: usize) -> PyResult<f64> {
        self.inner.theta_derivative(t, k).map_err(to_py)
    }

    fn bessel2(&self, t: f64) -> PyResult<f64> {
        self.inner.bessel2(t).map_err(to_py)
    }
}

fn zero_list(zeros: &ZeroList) -> Vec<f64> {
    zeros.ordinates.clone()
}

/// Ordinates of the zeros of ζ on the critical line up to `height` (at most 100).
#[pyfunction]
fn zeta_zeros(height: f64) -> PyResult<Vec<f64>> {
    zeta_zero_scan(height).map(|z| zero_list(&z)).map_err(to_py)
}

/// Shipped zero ordinates of L(E,s), or those in `path` when given.
#[pyfunction]
#[pyo3(signature = (label, path = None))]
fn curve_zeros(label: &str, path: Option<std::path::PathBuf>) -> PyResult<Vec<f64>> {
    let z = match path {
        Some(p) => load_zeros(&p),
        None => builtin_curve_zeros(label),
    };
    z.map(|z| zero_list(&z)).map_err(to_py)
}

/// Residual of v ∗ h on a log grid over [0.1, 10]; `curve` may be "riemann".
#[pyfunction]
#[pyo3(signature = (curve, perturb = 0.0, points = 21))]
fn certify<'py>(py: Python<'py>, curve: &str, perturb: f64, points: usize) -> PyResult<Bound<'py, PyDict>> {
    let (v, h) = if curve.eq_ignore_ascii_case("riemann") {
        (meanper::lambda_q_convolutor(0).map_err(to_py)?, mpzeta::boundary::lambda_q_boundary())
    } else {
        let c = mpzeta::lfunc::EllipticCurve::builtin(curve).map_err(to_py)?;
        let v = meanper::build_convolutor_v(&c, None, 0).map_err(to_py)?;
        (v, mellin::EllipticBoundary::new(&c).map_err(to_py)?.theta_term())
    };
    let h = if perturb != 0.0 { h.perturbed(perturb, 0.25) } else { h };
    let grid = meanper::log_grid(0.1, 10.0, points.max(2));
    let r = meanper::certify_mean_periodicity(&v, &h, &grid).map_err(to_py)?;
    let d = PyDict::new(py);
    d.set_item("label", r.label)?;
    d.set_item("grid", r.grid)?;
    d.set_item("residuals", r.residuals)?;
    d.set_item("scale", r.scale)?;
    d.set_item("ratio", r.ratio)?;
    d.set_item("pass", r.pass)?;
    Ok(d)
}

/// Both sides of the explicit formula for Λ_Q and a bump supported on [lo, hi].
#[pyfunction]
#[pyo3(signature = (lo = 0.5, hi = 2.0, amplitude = 1.0))]
fn explicit_formula(lo: f64, hi: f64, amplitude: f64) -> PyResult<(f64, f64)> {
    let q = LFunctionSpec::riemann();
    let ledger = residue_ledger(&q, &q.structural_poles).map_err(to_py)?;
    let phi = TestFunction::Bump { lo, hi, amplitude };
    let r = meanper::explicit_formula_check(&q, &phi, &ledger).map_err(to_py)?;
    Ok((r.lhs, r.rhs))
}

/// Brackets around sign changes of the k-th t-derivative of H_E.
#[pyfunction]
#[pyo3(signature = (curve, k, t_from, t_to, step = 0.01))]
fn sign_scan(curve: &PyCurve, k: usize, t_from: f64, t_to: f64, step: f64) -> PyResult<Vec<(f64, f64)>> {
    analytics::single_sign_scan(&curve.inner, k, (t_from, t_to), step).map(|r| r.sign_changes).map_err(to_py)
}

/// Accepted heights in (T, T+1), the exponent A and the excluded measure.
#[pyfunction]
#[pyo3(signature = (spec, t, h, sigma_from = -1.0, sigma_to = 2.0))]
fn good_ordinates(spec: &PyLFunction, t: f64, h: f64, sigma_from: f64, sigma_to: f64) -> PyResult<(Vec<f64>, f64, f64)> {
    let r = analytics::good_ordinates(&spec.inner, t, h, (sigma_from, sigma_to)).map_err(to_py)?;
    Ok((r.accepted, r.exponent_a, r.excluded_measure_estimate))
}

#[pymodule]
fn mpzeta_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCurve>()?;
    m.add_class::<PyLFunction>()?;
    m.add_class::<PyBoundary>()?;
    m.add_function(wrap_pyfunction!(zeta_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(curve_zeros, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(explicit_formula, m)?)?;
    m.add_function(wrap_pyfunction!(sign_scan, m)?)?;
    m.add_function(wrap_pyfunction!(good_ordinates, m)?)?;
    Ok(())
}
