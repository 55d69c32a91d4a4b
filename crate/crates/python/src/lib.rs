//! Python bindings for `knotgrp`.
//!
//! Words cross the boundary as text in the usual notation (`"a^2 b^-3"`);
//! arbitrary-precision integers become Python `int`s.

use num_bigint::BigInt;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use knotgrp::geometry::{self, RegionPoint, RetractionParams};
use knotgrp::tietze::describe_script;
use knotgrp::torus::torus_alphabet;
use knotgrp::{Alphabet, Error, FactorOrders, Order, TorusParams, Word};

fn to_py_err(e: impl Into<Error>) -> PyErr {
    let e = e.into();
    if e.is_resource() {
        PyRuntimeError::new_err(e.to_string())
    } else {
        PyValueError::new_err(e.to_string())
    }
}

#[pyclass(name = "Presentation", module = "knotgrp_py", frozen, skip_from_py_object)]
#[derive(Clone)]
pub struct PyPresentation {
    inner: knotgrp::Presentation,
}

#[pymethods]
impl PyPresentation {
    /// Parses the `gens:` / `rel:` text format.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        let inner = knotgrp::Presentation::parse(text).map_err(to_py_err)?;
        Ok(PyPresentation { inner })
    }

    /// `<a, b | a^m = b^n>`; requires gcd(m, n) = 1.
    #[staticmethod]
    fn torus(m: i64, n: i64) -> PyResult<Self> {
        let inner = knotgrp::Presentation::torus(m, n).map_err(to_py_err)?;
        Ok(PyPresentation { inner })
    }

    /// `<a, b | a^m, b^n>`.
    #[staticmethod]
    fn free_product(m: i64, n: i64) -> PyResult<Self> {
        let inner = knotgrp::Presentation::free_product(m, n).map_err(to_py_err)?;
        Ok(PyPresentation { inner })
    }

    /// Wirtinger presentation of a diagram given as file text, or of a
    /// built-in diagram named `builtin:NAME`.
    #[staticmethod]
    fn wirtinger(diagram: &str) -> PyResult<Self> {
        let d = match diagram.strip_prefix("builtin:") {
            Some(name) => knotgrp::builtin_diagram(name),
            None => knotgrp::parse_diagram(diagram),
        }
        .map_err(to_py_err)?;
        Ok(PyPresentation {
            inner: knotgrp::wirtinger_presentation(&d),
        })
    }

    fn generators(&self) -> Vec<String> {
        self.inner.alphabet().iter().map(|g| g.name.clone()).collect()
    }

    fn relators(&self) -> Vec<String> {
        self.inner
            .relators()
            .iter()
            .map(|r| r.to_text(self.inner.alphabet()))
            .collect()
    }

    fn relation_matrix(&self) -> Vec<Vec<BigInt>> {
        knotgrp::relation_matrix(&self.inner).to_rows()
    }

    /// `(free_rank, torsion_factors)`.
    fn abelianization(&self) -> (usize, Vec<BigInt>) {
        let ab = knotgrp::abelianization(&self.inner);
        (ab.free_rank, ab.torsion_factors)
    }

    #[pyo3(signature = (target, max_evals = knotgrp::DEFAULT_MAX_EVALS))]
    fn hom_count(&self, py: Python<'_>, target: &str, max_evals: u64) -> PyResult<u64> {
        let table = knotgrp::builtin_table(target).map_err(to_py_err)?;
        py.detach(|| knotgrp::hom_count(&self.inner, &table, max_evals))
            .map_err(to_py_err)
    }

    /// Abelian invariants and hom counts as a dict.
    #[pyo3(signature = (targets, max_evals = knotgrp::DEFAULT_MAX_EVALS))]
    fn profile<'py>(
        &self,
        py: Python<'py>,
        targets: Vec<String>,
        max_evals: u64,
    ) -> PyResult<Bound<'py, PyDict>> {
        let names: Vec<&str> = targets.iter().map(String::as_str).collect();
        let profile = py
            .detach(|| knotgrp::invariant_profile(&self.inner, &names, max_evals))
            .map_err(to_py_err)?;
        let out = PyDict::new(py);
        out.set_item("abelian", profile.abelian.to_string())?;
        out.set_item("free_rank", profile.abelian.free_rank)?;
        out.set_item("torsion", profile.abelian.torsion_factors.clone())?;
        let homs = PyDict::new(py);
        for (name, count) in &profile.hom_counts {
            homs.set_item(name, count)?;
        }
        out.set_item("hom", homs)?;
        Ok(out)
    }

    /// Runs the deterministic simplifier; returns the result and a readable
    /// description of each Tietze move.
    fn simplify(&self) -> PyResult<(PyPresentation, Vec<String>)> {
        let (q, script) = knotgrp::auto_simplify(&self.inner);
        let lines = describe_script(&self.inner, &script).map_err(to_py_err)?;
        Ok((PyPresentation { inner: q }, lines))
    }

    fn to_text(&self) -> String {
        self.inner.to_text()
    }

    fn __str__(&self) -> String {
        self.inner.to_text()
    }

    fn __repr__(&self) -> String {
        format!("Presentation.parse({:?})", self.inner.to_text())
    }

    fn __eq__(&self, other: &PyPresentation) -> bool {
        self.inner == other.inner
    }
}

fn alphabet(gens: Vec<String>) -> PyResult<Alphabet> {
    Alphabet::new(gens).map_err(to_py_err)
}

fn word(text: &str, al: &Alphabet) -> PyResult<Word> {
    knotgrp::parse_word(text, al).map_err(to_py_err)
}

/// Freely reduces `text` over the generator names `gens`.
#[pyfunction]
fn reduce_word(text: &str, gens: Vec<String>) -> PyResult<String> {
    let al = alphabet(gens)?;
    Ok(word(text, &al)?.to_text(&al))
}

/// Reduced product of two words.
#[pyfunction]
fn multiply(u: &str, v: &str, gens: Vec<String>) -> PyResult<String> {
    let al = alphabet(gens)?;
    let product = word(u, &al)?.multiply(&word(v, &al)?).map_err(to_py_err)?;
    Ok(product.to_text(&al))
}

#[pyfunction]
fn invert(text: &str, gens: Vec<String>) -> PyResult<String> {
    let al = alphabet(gens)?;
    Ok(word(text, &al)?.inverse().to_text(&al))
}

/// `(core, conjugator)` with `w = conjugator · core · conjugator^-1`.
#[pyfunction]
fn cyclically_reduce(text: &str, gens: Vec<String>) -> PyResult<(String, String)> {
    let al = alphabet(gens)?;
    let (core, y) = word(text, &al)?.cyclically_reduce();
    Ok((core.to_text(&al), y.to_text(&al)))
}

fn torus_params(m: i64, n: i64) -> PyResult<TorusParams> {
    TorusParams::new(m, n).map_err(to_py_err)
}

fn torus_word(text: &str) -> PyResult<Word> {
    word(text, &torus_alphabet())
}

/// Normal form in `G(m,n)` as `(central, [(letter, exponent), ...])`.
#[pyfunction]
fn torus_normal_form(m: i64, n: i64, w: &str) -> PyResult<(i64, Vec<(String, i64)>)> {
    let nf = knotgrp::torus_normal_form(&torus_params(m, n)?, &torus_word(w)?).map_err(to_py_err)?;
    let syllables = nf
        .syllables
        .iter()
        .map(|&(l, e)| (torus_alphabet().name_of(l.gen()).unwrap_or("?").to_string(), e))
        .collect();
    Ok((nf.central, syllables))
}

/// Normal form in `G(m,n)` printed as `c^t · ...` (or `e`).
#[pyfunction]
fn torus_normal_form_text(m: i64, n: i64, w: &str) -> PyResult<String> {
    let nf = knotgrp::torus_normal_form(&torus_params(m, n)?, &torus_word(w)?).map_err(to_py_err)?;
    Ok(nf.to_string())
}

#[pyfunction]
fn words_equal(m: i64, n: i64, u: &str, v: &str) -> PyResult<bool> {
    knotgrp::words_equal_in_torus_group(&torus_params(m, n)?, &torus_word(u)?, &torus_word(v)?)
        .map_err(to_py_err)
}

#[pyfunction]
fn is_central(m: i64, n: i64, w: &str) -> PyResult<bool> {
    knotgrp::is_central(&torus_params(m, n)?, &torus_word(w)?).map_err(to_py_err)
}

/// Order of `w` in `Z/m * Z/n`; `None` means infinite.
#[pyfunction]
fn order_in_free_product(m: i64, n: i64, w: &str) -> PyResult<Option<u64>> {
    let orders = FactorOrders::new(m, n).map_err(to_py_err)?;
    match knotgrp::order_in_free_product(orders, &torus_word(w)?).map_err(to_py_err)? {
        Order::Finite(k) => Ok(Some(k)),
        Order::Infinite => Ok(None),
    }
}

#[pyfunction]
fn max_torsion_order(py: Python<'_>, m: i64, n: i64, max_len: usize) -> PyResult<u64> {
    py.detach(|| knotgrp::max_torsion_order(m, n, max_len))
        .map_err(to_py_err)
}

type Rows = Vec<Vec<BigInt>>;

/// `(D, U, V)` with `D = U · A · V`. `cols` is only needed for matrices
/// without rows.
#[pyfunction]
#[pyo3(signature = (rows, cols = None))]
fn smith_normal_form(
    rows: Rows,
    cols: Option<usize>,
) -> PyResult<(Rows, Rows, Rows)> {
    let cols = cols.or_else(|| rows.first().map(Vec::len)).unwrap_or(0);
    if let Some(i) = rows.iter().position(|r| r.len() != cols) {
        return Err(PyValueError::new_err(format!("row {i} does not have {cols} entries")));
    }
    let s = knotgrp::smith_normal_form(&knotgrp::IntMatrix::from_rows(cols, &rows));
    Ok((s.d.to_rows(), s.u.to_rows(), s.v.to_rows()))
}

#[pyfunction]
fn builtin_groups() -> Vec<&'static str> {
    knotgrp::finite_group::BUILTIN_NAMES.to_vec()
}

#[pyfunction]
fn retract(lambda: f64, x: f64, y: f64) -> PyResult<(f64, f64)> {
    let params = RetractionParams::new(lambda).map_err(to_py_err)?;
    let p = RegionPoint::new(&params, x, y).map_err(to_py_err)?;
    Ok(geometry::retract(&params, &p))
}

/// Grid check of the sector retraction; failures are reported in the dict.
#[pyfunction]
fn verify_retraction<'py>(py: Python<'py>, lambda: f64, grid: usize) -> PyResult<Bound<'py, PyDict>> {
    let params = RetractionParams::new(lambda).map_err(to_py_err)?;
    let r = geometry::verify_retraction(&params, grid).map_err(to_py_err)?;
    let out = PyDict::new(py);
    out.set_item("samples", r.samples)?;
    out.set_item("max_target_distance", r.max_target_distance)?;
    out.set_item("max_fixed_point_error", r.max_fixed_point_error)?;
    out.set_item("spurious_fixed_points", r.spurious_fixed_points)?;
    out.set_item("max_idempotence_error", r.max_idempotence_error)?;
    out.set_item("max_continuity_ratio", r.max_continuity_ratio)?;
    out.set_item("passed", r.passed())?;
    Ok(out)
}

#[pymodule]
fn knotgrp_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPresentation>()?;
    m.add_function(wrap_pyfunction!(reduce_word, m)?)?;
    m.add_function(wrap_pyfunction!(multiply, m)?)?;
    m.add_function(wrap_pyfunction!(invert, m)?)?;
    m.add_function(wrap_pyfunction!(cyclically_reduce, m)?)?;
    m.add_function(wrap_pyfunction!(torus_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(torus_normal_form_text, m)?)?;
    m.add_function(wrap_pyfunction!(words_equal, m)?)?;
    m.add_function(wrap_pyfunction!(is_central, m)?)?;
    m.add_function(wrap_pyfunction!(order_in_free_product, m)?)?;
    m.add_function(wrap_pyfunction!(max_torsion_order, m)?)?;
    m.add_function(wrap_pyfunction!(smith_normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(builtin_groups, m)?)?;
    m.add_function(wrap_pyfunction!(retract, m)?)?;
    m.add_function(wrap_pyfunction!(verify_retraction, m)?)?;
    Ok(())
}
