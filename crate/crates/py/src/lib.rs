//! Python bindings. Matrices are lists of rows of Python ints.

use std::collections::BTreeMap;

use ihull::bounds::instance_report;
use ihull::certify::{kernel_certificate, Certificate};
use ihull::concentration::{thm4_constant, ConstantVariant};
use ihull::enumerate::{enumerate_vertices as enumerate_core, EnumOptions};
use ihull::instances::{gen as gen_core, FamilySpec};
use ihull::model::{Instance, IntMatrix, IntPoint};
use ihull::oracle::{oracle_vertices as oracle_core, DEFAULT_MAX_POINTS};
use ihull::Error;
use num_bigint::BigInt;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

create_exception!(ihull_py, BudgetError, PyException);
create_exception!(ihull_py, InfeasibleError, PyException);

fn py_err(e: Error) -> PyErr {
    match e {
        Error::Budget(_) => BudgetError::new_err(e.to_string()),
        Error::Infeasible(_) | Error::Unbounded(_) => InfeasibleError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn instance(a: Vec<Vec<BigInt>>, b: Vec<BigInt>) -> PyResult<Instance> {
    let a = IntMatrix::from_rows(a).map_err(py_err)?;
    Instance::new("python", a, b).map_err(py_err)
}

fn coords(points: Vec<IntPoint>) -> Vec<Vec<BigInt>> {
    points.into_iter().map(|p| p.0).collect()
}

/// Vertices of the integer hull of `{x >= 0 : Ax = b}`, sorted.
#[pyfunction]
#[pyo3(signature = (a, b, max_boxes=50_000_000))]
fn enumerate_vertices(py: Python<'_>, a: Vec<Vec<BigInt>>, b: Vec<BigInt>, max_boxes: u64) -> PyResult<Vec<Vec<BigInt>>> {
    let inst = instance(a, b)?;
    let opts = EnumOptions {
        max_boxes,
        ..EnumOptions::default()
    };
    let r = py.detach(|| enumerate_core(&inst, &opts)).map_err(py_err)?;
    Ok(coords(r.vertices))
}

/// Same vertex set by listing every lattice point.
#[pyfunction]
#[pyo3(signature = (a, b, max_points=DEFAULT_MAX_POINTS))]
fn oracle_vertices(py: Python<'_>, a: Vec<Vec<BigInt>>, b: Vec<BigInt>, max_points: usize) -> PyResult<Vec<Vec<BigInt>>> {
    let inst = instance(a, b)?;
    let v = py.detach(|| oracle_core(&inst, max_points)).map_err(py_err)?;
    Ok(coords(v))
}

/// Support bounds by tag; `None` where a bound does not apply.
#[pyfunction]
#[pyo3(signature = (a, b, support=None))]
fn bounds(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, support: Option<Vec<usize>>) -> PyResult<BTreeMap<String, Option<f64>>> {
    let inst = instance(a, b)?;
    let r = instance_report(&inst, support.as_deref(), None);
    Ok(r.entries
        .into_iter()
        .filter(|e| e.exact.is_none())
        .map(|e| (e.tag, e.value.filter(|_| e.applicable).map(|v| v.to_f64())))
        .collect())
}

/// A kernel step `x` with `point ± x` feasible, or `None`.
#[pyfunction]
fn certify(a: Vec<Vec<BigInt>>, b: Vec<BigInt>, point: Vec<BigInt>) -> PyResult<Option<Vec<BigInt>>> {
    let inst = instance(a, b)?;
    match kernel_certificate(&inst, &IntPoint(point)).map_err(py_err)? {
        Certificate::Witness(w) => Ok(Some(w.x.0)),
        Certificate::NoWitness => Ok(None),
    }
}

/// `(A, b)` of a family such as `"knapsack-powers(3)"`.
#[pyfunction]
fn gen(spec: &str) -> PyResult<(Vec<Vec<BigInt>>, Vec<BigInt>)> {
    let spec: FamilySpec = spec.parse().map_err(py_err)?;
    let inst = gen_core(&spec).map_err(py_err)?;
    Ok((inst.a.to_rows(), inst.b))
}

/// Minimum of the single-row constant and where it is attained.
#[pyfunction]
fn knapsack_constant() -> PyResult<(f64, f64)> {
    let c = thm4_constant(1.0, 3.0, ConstantVariant::Printed, 1e-10).map_err(py_err)?;
    Ok((c.value.to_f64(), c.argmin.to_f64()))
}

#[pymodule]
fn ihull_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("BudgetError", m.py().get_type::<BudgetError>())?;
    m.add("InfeasibleError", m.py().get_type::<InfeasibleError>())?;
    m.add_function(wrap_pyfunction!(enumerate_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_vertices, m)?)?;
    m.add_function(wrap_pyfunction!(bounds, m)?)?;
    m.add_function(wrap_pyfunction!(certify, m)?)?;
    m.add_function(wrap_pyfunction!(gen, m)?)?;
    m.add_function(wrap_pyfunction!(knapsack_constant, m)?)?;
    Ok(())
}
