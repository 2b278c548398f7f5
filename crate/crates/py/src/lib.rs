//! Python bindings. Matrices cross the boundary as lists of rows.

// The pyfunction macro expansion trips this lint on every `PyResult` return.
#![allow(clippy::useless_conversion)]

use dantzig_kit::asymptotics;
use dantzig_kit::dantzig::{self, DantzigProblem, DesignData};
use dantzig_kit::kkt;
use dantzig_kit::lasso;
use dantzig_kit::linalg::Matrix;
use dantzig_kit::uniqueness;
use dantzig_kit::Error;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::InvalidArgument(_) | Error::InvalidInstance(_) | Error::DimensionCap { .. } => {
            PyValueError::new_err(e.to_string())
        }
        _ => PyRuntimeError::new_err(e.to_string()),
    }
}

fn matrix(rows: Vec<Vec<f64>>) -> PyResult<Matrix> {
    Matrix::from_rows(&rows).map_err(to_py)
}

fn design(x: Vec<Vec<f64>>, y: Vec<f64>) -> PyResult<DesignData> {
    DesignData::new(matrix(x)?, y).map_err(to_py)
}

fn problem(c: Vec<Vec<f64>>, v: Vec<f64>, lambda: f64) -> PyResult<DantzigProblem> {
    DantzigProblem::new(matrix(c)?, v, lambda).map_err(to_py)
}

/// Dantzig selector on data; returns `(beta_hat, l1_norm)`.
#[pyfunction]
fn dantzig_select(x: Vec<Vec<f64>>, y: Vec<f64>, lambda: f64) -> PyResult<(Vec<f64>, f64)> {
    let est = dantzig::dantzig_select(&design(x, y)?, lambda).map_err(to_py)?;
    if !est.is_optimal() {
        return Err(PyRuntimeError::new_err("Dantzig problem is infeasible"));
    }
    Ok((est.beta_hat, est.l1_norm))
}

/// `G(C, v, λ)`; `None` when infeasible.
#[pyfunction]
fn g_map(c: Vec<Vec<f64>>, v: Vec<f64>, lambda: f64) -> PyResult<Option<Vec<f64>>> {
    let est = dantzig::g_map(&problem(c, v, lambda)?).map_err(to_py)?;
    Ok(est.is_optimal().then_some(est.beta_hat))
}

/// Lasso by coordinate descent; returns `(beta_hat, objective)`.
#[pyfunction]
#[pyo3(signature = (x, y, lambda, max_sweeps = 100_000, tol = 1e-10))]
fn lasso_solve(x: Vec<Vec<f64>>, y: Vec<f64>, lambda: f64, max_sweeps: usize, tol: f64) -> PyResult<(Vec<f64>, f64)> {
    let est = lasso::lasso_solve(&design(x, y)?, lambda, max_sweeps, tol).map_err(to_py)?;
    Ok((est.beta_hat, est.objective))
}

/// Parallelism check; returns `(parallel, witnesses)` with 0-based index sets.
#[pyfunction]
#[pyo3(signature = (c, tol = uniqueness::DEFAULT_WITNESS_TOL, p_cap = uniqueness::DEFAULT_P_CAP))]
fn is_parallel(py: Python<'_>, c: Vec<Vec<f64>>, tol: f64, p_cap: usize) -> PyResult<(bool, Vec<PyObject>)> {
    let rep = uniqueness::is_parallel(&matrix(c)?, tol, p_cap).map_err(to_py)?;
    let witnesses = rep
        .witnesses
        .iter()
        .map(|w| {
            let d = PyDict::new_bound(py);
            d.set_item("a", w.a.indices().to_vec())?;
            d.set_item("b", w.b.indices().to_vec())?;
            d.set_item("w", w.w.clone())?;
            d.set_item("s", w.s.clone())?;
            Ok(d.into_any().unbind())
        })
        .collect::<PyResult<_>>()?;
    Ok((rep.parallel, witnesses))
}

/// Optimality certificate search; returns `(found, mu_hat)`.
#[pyfunction]
#[pyo3(signature = (x, y, lambda, beta, tol = 1e-7))]
fn dantzig_certificate(
    x: Vec<Vec<f64>>,
    y: Vec<f64>,
    lambda: f64,
    beta: Vec<f64>,
    tol: f64,
) -> PyResult<(bool, Vec<f64>)> {
    let cert = kkt::dantzig_certificate(&design(x, y)?, lambda, &beta, tol).map_err(to_py)?;
    Ok((cert.found, cert.mu_hat))
}

/// Fraction of standard-normal designs whose Gram matrix is parallel.
#[pyfunction]
fn prop2_experiment(n: usize, p: usize, reps: usize, seed: u64) -> PyResult<f64> {
    uniqueness::prop2_experiment(n, p, reps, seed).map_err(to_py)
}

/// Minimizer of the limiting objective at a given `v⁰`.
#[pyfunction]
fn limiting_problem_solve(
    c: Vec<Vec<f64>>,
    v0: Vec<f64>,
    lambda_tilde: f64,
    beta_star: Vec<f64>,
) -> PyResult<Vec<f64>> {
    asymptotics::limiting_problem_solve(&matrix(c)?, &v0, lambda_tilde, &beta_star).map_err(to_py)
}

/// Sup-norm diameter of the set of all optima.
#[pyfunction]
fn solution_set_diameter(c: Vec<Vec<f64>>, v: Vec<f64>, lambda: f64) -> PyResult<f64> {
    let d = dantzig::solution_set_diameter(&problem(c, v, lambda)?).map_err(to_py)?;
    Ok(d.diameter_inf)
}

/// Vertices of the feasible set inside `[−w, w]²`, counterclockwise.
#[pyfunction]
#[pyo3(signature = (c, v, lambda, box_halfwidth = 10.0))]
fn polygon_2d(c: Vec<Vec<f64>>, v: Vec<f64>, lambda: f64, box_halfwidth: f64) -> PyResult<Vec<(f64, f64)>> {
    let poly = dantzig::polygon_2d(&problem(c, v, lambda)?, box_halfwidth).map_err(to_py)?;
    Ok(poly.into_iter().map(|[a, b]| (a, b)).collect())
}

#[pymodule]
fn pydantzig(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_function(wrap_pyfunction!(dantzig_select, m)?)?;
    m.add_function(wrap_pyfunction!(g_map, m)?)?;
    m.add_function(wrap_pyfunction!(lasso_solve, m)?)?;
    m.add_function(wrap_pyfunction!(is_parallel, m)?)?;
    m.add_function(wrap_pyfunction!(dantzig_certificate, m)?)?;
    m.add_function(wrap_pyfunction!(prop2_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(limiting_problem_solve, m)?)?;
    m.add_function(wrap_pyfunction!(solution_set_diameter, m)?)?;
    m.add_function(wrap_pyfunction!(polygon_2d, m)?)?;
    Ok(())
}
