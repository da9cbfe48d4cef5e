//! Python bindings. Structured values cross the boundary as plain Python
//! objects (dicts, lists, floats) with the same layout as the JSON files the
//! command-line tool reads and writes.

use num_complex::Complex64;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use serde_json::Value;

use loopfact::assembly::{assemble_loop, assemble_triangular};
use loopfact::experiment::RoundtripReport;
use loopfact::factorization::{birkhoff_factor, triangular_factor};
use loopfact::oracle::OracleFixture;
use loopfact::rootsub::xi_enum;
use loopfact::solver::{solve_all, SolveOptions};
use loopfact::{Error, MatrixLoop, RootSubgroupCoordinates};

create_exception!(pyloopfact, LoopfactError, PyException);
create_exception!(pyloopfact, NotTopStratum, LoopfactError);
create_exception!(pyloopfact, NoTriangularFactorization, LoopfactError);
create_exception!(pyloopfact, NotUnitary, LoopfactError);
create_exception!(pyloopfact, OracleMismatch, LoopfactError);

fn to_py_err(e: Error) -> PyErr {
    let msg = e.to_string();
    match e {
        Error::NotTopStratum { .. } => NotTopStratum::new_err(msg),
        Error::NoTriangularFactorization { .. } => NoTriangularFactorization::new_err(msg),
        Error::NotUnitary { .. } => NotUnitary::new_err(msg),
        Error::MismatchAt { .. } => OracleMismatch::new_err(msg),
        Error::Input(_) => PyValueError::new_err(msg),
        _ => LoopfactError::new_err(msg),
    }
}

fn to_value(obj: &Bound<'_, PyAny>) -> PyResult<Value> {
    let text: String = obj.py().import("json")?.call_method1("dumps", (obj,))?.extract()?;
    serde_json::from_str(&text).map_err(|e| PyValueError::new_err(e.to_string()))
}

fn to_py<'py>(py: Python<'py>, v: &Value) -> PyResult<Bound<'py, PyAny>> {
    py.import("json")?.call_method1("loads", (v.to_string(),))
}

fn coords_of(obj: &Bound<'_, PyAny>) -> PyResult<RootSubgroupCoordinates> {
    RootSubgroupCoordinates::from_json(&to_value(obj)?).map_err(to_py_err)
}

fn loop_of(obj: &Bound<'_, PyAny>) -> PyResult<MatrixLoop<Complex64>> {
    let v = to_value(obj)?;
    MatrixLoop::from_json(v.get("loop").unwrap_or(&v)).map_err(to_py_err)
}

/// The loop `k₁(η)*·diag(e^χ, e^{−χ})·k₂(ζ)` of a coordinates dict.
#[pyfunction]
fn forward<'py>(py: Python<'py>, coords: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let c = coords_of(coords)?.padded();
    to_py(py, &assemble_loop(&c, None).to_json())
}

/// Triangular factorization assembled directly from coordinates.
#[pyfunction]
fn forward_triangular<'py>(py: Python<'py>, coords: &Bound<'py, PyAny>) -> PyResult<Bound<'py, PyAny>> {
    let c = coords_of(coords)?.padded();
    to_py(py, &assemble_triangular(&c, None).to_json())
}

/// Birkhoff factorization from a Toeplitz section of size `toeplitz_size`.
#[pyfunction]
fn birkhoff<'py>(py: Python<'py>, g: &Bound<'py, PyAny>, toeplitz_size: usize) -> PyResult<Bound<'py, PyAny>> {
    let b = birkhoff_factor(&loop_of(g)?, toeplitz_size).map_err(to_py_err)?;
    to_py(py, &b.to_json())
}

#[pyfunction]
fn triangular<'py>(py: Python<'py>, g: &Bound<'py, PyAny>, toeplitz_size: usize) -> PyResult<Bound<'py, PyAny>> {
    let t = triangular_factor(&loop_of(g)?, toeplitz_size).map_err(to_py_err)?;
    to_py(py, &t.to_json())
}

fn options(
    degree: usize,
    toeplitz_size: Option<usize>,
    grid: Option<usize>,
    tol: f64,
    zeta_only: bool,
) -> SolveOptions {
    let d = SolveOptions::for_degree(degree);
    SolveOptions {
        toeplitz_size: toeplitz_size.unwrap_or(d.toeplitz_size),
        grid_size: grid.unwrap_or(d.grid_size),
        tol,
        zeta_only,
        ..d
    }
}

/// Coordinates of a loop, with diagnostics. `chi` is `None` for a loop
/// that is not unitary.
#[pyfunction]
#[pyo3(signature = (g, degree, toeplitz_size=None, grid=None, tol=1e-8, zeta_only=false))]
fn solve<'py>(
    py: Python<'py>,
    g: &Bound<'py, PyAny>,
    degree: usize,
    toeplitz_size: Option<usize>,
    grid: Option<usize>,
    tol: f64,
    zeta_only: bool,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = options(degree, toeplitz_size, grid, tol, zeta_only);
    let out = solve_all(&loop_of(g)?, &opts).map_err(to_py_err)?;
    to_py(py, &out.to_json())
}

/// Seeded forward/solve trials; returns the report dict.
#[pyfunction]
#[pyo3(signature = (seed, trials, degree, rho=0.6, toeplitz_size=None))]
fn roundtrip<'py>(
    py: Python<'py>,
    seed: u64,
    trials: u64,
    degree: usize,
    rho: f64,
    toeplitz_size: Option<usize>,
) -> PyResult<Bound<'py, PyAny>> {
    let opts = options(degree, toeplitz_size, None, 1e-8, false);
    let report = py.detach(|| RoundtripReport::run(seed, trials, rho, &opts));
    to_py(py, &report.to_json(false))
}

/// Runs an oracle fixture dict. Returns the report, or raises
/// `OracleMismatch` when `strict` and a check fails.
#[pyfunction]
#[pyo3(signature = (fixture, strict=true))]
fn verify<'py>(py: Python<'py>, fixture: &Bound<'py, PyAny>, strict: bool) -> PyResult<Bound<'py, PyAny>> {
    let f = OracleFixture::from_json(&to_value(fixture)?).map_err(to_py_err)?;
    let report = py.detach(|| f.run()).map_err(to_py_err)?;
    let json = report.to_json();
    if strict {
        report.into_result().map_err(to_py_err)?;
    }
    to_py(py, &json)
}

/// `ξₙ` by enumeration at a floating point `ζ = (ζ₁, …)`.
#[pyfunction]
fn xi_coefficient(zeta: Vec<Complex64>, n: i64) -> Complex64 {
    xi_enum(&zeta, n)
}

#[pymodule]
pub fn pyloopfact(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", loopfact::VERSION)?;
    m.add("LoopfactError", m.py().get_type::<LoopfactError>())?;
    m.add("NotTopStratum", m.py().get_type::<NotTopStratum>())?;
    m.add("NoTriangularFactorization", m.py().get_type::<NoTriangularFactorization>())?;
    m.add("NotUnitary", m.py().get_type::<NotUnitary>())?;
    m.add("OracleMismatch", m.py().get_type::<OracleMismatch>())?;
    m.add_function(wrap_pyfunction!(forward, m)?)?;
    m.add_function(wrap_pyfunction!(forward_triangular, m)?)?;
    m.add_function(wrap_pyfunction!(birkhoff, m)?)?;
    m.add_function(wrap_pyfunction!(triangular, m)?)?;
    m.add_function(wrap_pyfunction!(solve, m)?)?;
    m.add_function(wrap_pyfunction!(roundtrip, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    m.add_function(wrap_pyfunction!(xi_coefficient, m)?)?;
    Ok(())
}
