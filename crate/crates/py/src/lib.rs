//! Python bindings, imported as `nncalc`.
//!
//! Positive reals may be passed as `NNReal`, a Python float (the plain
//! value) or a literal string such as `"e^1.5"`. Expressions may be passed
//! as `Expr` or as text.

use nncalc::analysis::{
    nn_antideriv_symbolic, nn_deriv_conj, nn_deriv_limit, nn_deriv_n, nn_integral_detailed,
    DerivativeResult, DEFAULT_H_LOG, DEFAULT_QUAD_TOL,
};
use nncalc::optim::{nn_gradient_descent, DEFAULT_STATIONARITY_TOL};
use nncalc::varcalc::{
    el_residual_profile, functional_eval, fundamental_lemma_probe, solve_direct,
    solve_el_bvp_with, BvpOptions, DirectOptions, Lagrangian, ProbeVerdict, Solution,
    VariationalProblem, HARMONIC_LAGRANGIAN,
};
use nncalc::{parse as parse_expr, Expr, NNError, NNFunction, NNReal};
use pyo3::create_exception;
use pyo3::exceptions::{PyTypeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyString};

create_exception!(nncalc, NNCalcError, PyValueError, "Invalid input or failed numerics.");
create_exception!(
    nncalc,
    WellPosednessError,
    NNCalcError,
    "Boundary data admit no unique extremal."
);
create_exception!(nncalc, ConvergenceError, NNCalcError, "An iteration did not converge.");

fn to_py(e: NNError) -> PyErr {
    match e {
        NNError::WellPosedness(_) => WellPosednessError::new_err(e.to_string()),
        NNError::NonConvergence { .. } => ConvergenceError::new_err(e.to_string()),
        _ => NNCalcError::new_err(e.to_string()),
    }
}

trait OrRaise<T> {
    fn or_raise(self) -> PyResult<T>;
}

impl<T> OrRaise<T> for nncalc::Result<T> {
    fn or_raise(self) -> PyResult<T> {
        self.map_err(to_py)
    }
}

/// A positive real stored by its natural logarithm. The arithmetic
/// operators are the NN field operations: `+` is ⊕ (product of values),
/// `*` is ⊙, and so on.
#[pyclass(name = "NNReal", module = "nncalc", frozen, skip_from_py_object)]
#[derive(Clone, Copy)]
pub struct PyNNReal(NNReal);

fn real(obj: &Bound<'_, PyAny>) -> PyResult<NNReal> {
    if let Ok(r) = obj.cast::<PyNNReal>() {
        return Ok(r.get().0);
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return s.to_str()?.parse::<NNReal>().or_raise();
    }
    if let Ok(v) = obj.extract::<f64>() {
        return NNReal::from_value(v).or_raise();
    }
    Err(PyTypeError::new_err(
        "expected NNReal, a positive float or a literal string",
    ))
}

#[pymethods]
impl PyNNReal {
    #[new]
    fn new(value: &Bound<'_, PyAny>) -> PyResult<Self> {
        real(value).map(Self)
    }

    #[staticmethod]
    fn from_log(log: f64) -> PyResult<Self> {
        NNReal::from_log(log).or_raise().map(Self)
    }

    /// NN zero, the plain value 1.
    #[classattr]
    #[allow(non_snake_case)]
    fn ZERO() -> Self {
        Self(NNReal::ZERO)
    }

    /// NN one, the plain value e.
    #[classattr]
    #[allow(non_snake_case)]
    fn ONE() -> Self {
        Self(NNReal::ONE)
    }

    #[getter]
    fn log(&self) -> f64 {
        self.0.log()
    }

    #[getter]
    fn value(&self) -> f64 {
        self.0.value()
    }

    fn oplus(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0.oplus(real(other)?).or_raise().map(Self)
    }

    fn ominus(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0.ominus(real(other)?).or_raise().map(Self)
    }

    fn odot(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0.odot(real(other)?).or_raise().map(Self)
    }

    fn oslash(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.0.oslash(real(other)?).or_raise().map(Self)
    }

    /// NN integer power.
    fn pow(&self, n: i32) -> PyResult<Self> {
        self.0.pow(n).or_raise().map(Self)
    }

    /// Multiplicative distance `exp|ln x - ln y|`.
    fn dist(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(self.0.dist(real(other)?)))
    }

    fn __add__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.oplus(other)
    }

    fn __sub__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.ominus(other)
    }

    fn __mul__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.odot(other)
    }

    fn __truediv__(&self, other: &Bound<'_, PyAny>) -> PyResult<Self> {
        self.oslash(other)
    }

    fn __eq__(&self, other: &Bound<'_, PyAny>) -> bool {
        real(other).map(|o| o == self.0).unwrap_or(false)
    }

    fn __lt__(&self, other: &Bound<'_, PyAny>) -> PyResult<bool> {
        Ok(self.0 < real(other)?)
    }

    fn __hash__(&self) -> u64 {
        // +0.0 and -0.0 compare equal, so hash them alike
        (self.0.log() + 0.0).to_bits()
    }

    fn __float__(&self) -> f64 {
        self.0.value()
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("NNReal('{}')", self.0.to_log_string())
    }
}

/// A symbolic expression in `x`.
#[pyclass(name = "Expr", module = "nncalc", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyExpr(Expr);

fn expr(obj: &Bound<'_, PyAny>) -> PyResult<Expr> {
    if let Ok(e) = obj.cast::<PyExpr>() {
        return Ok(e.get().0.clone());
    }
    if let Ok(s) = obj.cast::<PyString>() {
        return parse_expr(s.to_str()?).or_raise();
    }
    Err(PyTypeError::new_err("expected Expr or expression text"))
}

fn function(obj: &Bound<'_, PyAny>) -> PyResult<NNFunction> {
    Ok(NNFunction::from_expr(expr(obj)?))
}

#[pymethods]
impl PyExpr {
    #[new]
    fn new(text: &str) -> PyResult<Self> {
        parse_expr(text).or_raise().map(Self)
    }

    fn eval(&self, x: &Bound<'_, PyAny>) -> PyResult<PyNNReal> {
        self.0.eval(real(x)?).or_raise().map(PyNNReal)
    }

    /// Symbolic NN derivative with respect to `x`.
    fn derivative(&self) -> Self {
        Self(self.0.derivative("x"))
    }

    fn simplify(&self) -> Self {
        Self(self.0.simplify())
    }

    /// Table antiderivative, or `None` when the integrand has no entry.
    fn antiderivative(&self) -> Option<Self> {
        nn_antideriv_symbolic(&self.0).map(|a| Self(a.expr))
    }

    fn size(&self) -> usize {
        self.0.size()
    }

    fn is_constant(&self) -> bool {
        self.0.is_constant()
    }

    fn __str__(&self) -> String {
        self.0.pretty()
    }

    fn __repr__(&self) -> String {
        format!("Expr('{}')", self.0.pretty())
    }
}

#[pyfunction]
fn parse(text: &str) -> PyResult<PyExpr> {
    PyExpr::new(text)
}

/// NN derivative of order `order` at `x`. `engine` selects the first-order
/// method: "conjugation", "limit" or "symbolic".
#[pyfunction]
#[pyo3(signature = (f, x, engine = "conjugation", order = 1))]
fn derivative(
    f: &Bound<'_, PyAny>,
    x: &Bound<'_, PyAny>,
    engine: &str,
    order: u32,
) -> PyResult<PyNNReal> {
    let (f, x) = (function(f)?, real(x)?);
    let res: DerivativeResult = match (engine, order) {
        (_, n) if n != 1 => nn_deriv_n(&f, n, x),
        ("conjugation", _) => nn_deriv_conj(&f, x, DEFAULT_H_LOG),
        ("limit", _) => nn_deriv_limit(&f, x, None),
        ("symbolic", _) => nn_deriv_n(&f, 1, x),
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown engine {engine:?}; use conjugation, limit or symbolic"
            )))
        }
    }
    .or_raise()?;
    Ok(PyNNReal(res.value))
}

/// Product integral of `f` from `a` to `b`, to log-space tolerance `tol`.
#[pyfunction]
#[pyo3(signature = (f, a, b, tol = DEFAULT_QUAD_TOL))]
fn integral(
    f: &Bound<'_, PyAny>,
    a: &Bound<'_, PyAny>,
    b: &Bound<'_, PyAny>,
    tol: f64,
) -> PyResult<PyNNReal> {
    let q = nn_integral_detailed(&function(f)?, real(a)?, real(b)?, tol).or_raise()?;
    NNReal::from_log(q.value).or_raise().map(PyNNReal)
}

/// NN gradient descent. Returns a dict with the final `x`, `iterations`,
/// `converged` and the `trace` as `(iter, x_log, f_log, residual_log)` rows.
#[pyfunction]
#[pyo3(signature = (f, x0, eta = None, max_iter = 200, tol = DEFAULT_STATIONARITY_TOL))]
fn gradient_descent<'py>(
    py: Python<'py>,
    f: &Bound<'py, PyAny>,
    x0: &Bound<'py, PyAny>,
    eta: Option<&Bound<'py, PyAny>>,
    max_iter: usize,
    tol: f64,
) -> PyResult<Bound<'py, PyDict>> {
    let eta = match eta {
        Some(e) => real(e)?,
        None => NNReal::from_log(0.1).or_raise()?,
    };
    let run = nn_gradient_descent(&function(f)?, real(x0)?, eta, max_iter, tol).or_raise()?;
    let out = PyDict::new(py);
    out.set_item("x", PyNNReal(run.x))?;
    out.set_item("iterations", run.iterations)?;
    out.set_item("converged", run.converged)?;
    let trace: Vec<(usize, f64, f64, f64)> = run
        .trace
        .iter()
        .map(|t| (t.iter, t.x_log, t.f_log, t.residual_log))
        .collect();
    out.set_item("trace", trace)?;
    Ok(out)
}

fn problem(
    problem_json: Option<&str>,
    lagrangian: &str,
    ends: [Option<&Bound<'_, PyAny>>; 4],
) -> PyResult<VariationalProblem> {
    if let Some(text) = problem_json {
        return VariationalProblem::from_json(text).or_raise();
    }
    let mut vals = [NNReal::ZERO; 4];
    for (slot, v) in vals.iter_mut().zip(ends) {
        *slot = real(v.ok_or_else(|| {
            PyValueError::new_err("give problem_json or all of a, b, ya, yb")
        })?)?;
    }
    let l = Lagrangian::parse(lagrangian).or_raise()?;
    VariationalProblem::new(l, vals[0], vals[1], vals[2], vals[3]).or_raise()
}

/// Solves a fixed-endpoint variational problem on `n` intervals with
/// method "bvp" or "direct". The problem is either `problem_json` or the
/// Lagrangian text (harmonic by default) with `a, b, ya, yb`.
#[pyfunction]
#[pyo3(signature = (
    a = None, b = None, ya = None, yb = None, *,
    lagrangian = HARMONIC_LAGRANGIAN, problem_json = None, method = "bvp", n = 200, tol = None
))]
#[allow(clippy::too_many_arguments)]
fn solve<'py>(
    py: Python<'py>,
    a: Option<&Bound<'py, PyAny>>,
    b: Option<&Bound<'py, PyAny>>,
    ya: Option<&Bound<'py, PyAny>>,
    yb: Option<&Bound<'py, PyAny>>,
    lagrangian: &str,
    problem_json: Option<&str>,
    method: &str,
    n: usize,
    tol: Option<f64>,
) -> PyResult<Bound<'py, PyDict>> {
    let p = problem(problem_json, lagrangian, [a, b, ya, yb])?;
    let sol: Solution = match method {
        "bvp" => {
            let mut opts = BvpOptions::default();
            if let Some(t) = tol {
                opts.tol = t;
            }
            solve_el_bvp_with(&p, n, &opts)
        }
        "direct" => {
            let mut opts = DirectOptions::default();
            if let Some(t) = tol {
                opts.tol = t;
            }
            solve_direct(&p, n, &opts)
        }
        _ => {
            return Err(PyValueError::new_err(format!(
                "unknown method {method:?}; use bvp or direct"
            )))
        }
    }
    .or_raise()?;
    let profile = el_residual_profile(&p, &sol.path).or_raise()?;
    let worst = profile[1..profile.len() - 1].iter().cloned().fold(0.0, f64::max);
    let value = functional_eval(&p, &sol.path, DEFAULT_QUAD_TOL).or_raise()?;
    let out = PyDict::new(py);
    out.set_item("method", sol.method.name())?;
    out.set_item("iterations", sol.iterations)?;
    out.set_item("converged", sol.converged)?;
    out.set_item("solver_residual", sol.residual)?;
    out.set_item("max_residual_log", worst)?;
    out.set_item("functional_value", PyNNReal(value))?;
    let x_log: Vec<f64> = (0..=sol.path.n()).map(|i| sol.path.node_log(i)).collect();
    out.set_item("x_log", x_log)?;
    out.set_item("y_log", sol.path.logs().to_vec())?;
    Ok(out)
}

/// Tests `f ≡ 1` on `[a, b]` against random bumps. Returns `None` when
/// consistent with 1, else `(x1, x2, integral)` for the detecting bump.
#[pyfunction]
#[pyo3(signature = (f, a, b, trials = 16, seed = 0))]
fn probe(
    f: &Bound<'_, PyAny>,
    a: &Bound<'_, PyAny>,
    b: &Bound<'_, PyAny>,
    trials: usize,
    seed: u64,
) -> PyResult<Option<(PyNNReal, PyNNReal, PyNNReal)>> {
    let verdict = fundamental_lemma_probe(&function(f)?, real(a)?, real(b)?, trials, seed).or_raise()?;
    Ok(match verdict {
        ProbeVerdict::Detected { x1, x2, integral } => {
            Some((PyNNReal(x1), PyNNReal(x2), PyNNReal(integral)))
        }
        ProbeVerdict::ConsistentWithOne => None,
    })
}

#[pymodule]
#[pyo3(name = "nncalc")]
pub fn nncalc_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    let py = m.py();
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add("HARMONIC_LAGRANGIAN", HARMONIC_LAGRANGIAN)?;
    m.add("NNCalcError", py.get_type::<NNCalcError>())?;
    m.add("WellPosednessError", py.get_type::<WellPosednessError>())?;
    m.add("ConvergenceError", py.get_type::<ConvergenceError>())?;
    m.add_class::<PyNNReal>()?;
    m.add_class::<PyExpr>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(derivative, m)?)?;
    m.add_function(wrap_pyfunction!(integral, m)?)?;
    m.add_function(wrap_pyfunction!(gradient_descent, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(probe, m)?)?;
    Ok(())
}
