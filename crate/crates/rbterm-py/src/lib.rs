//! Python bindings for the tree-term kernel.
//!
//! Builds as `rbterm`, exposing trees, combinations, the rewrite engine,
//! the closed-form generators, the grid validator, and the counting
//! helpers. Big integers cross the boundary as Python ints; rationals as
//! `(numerator, denominator)` pairs.

use num::BigInt;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rbterm_core::closed_form::{self, Mode};
use rbterm_core::latex;
use rbterm_core::models;
use rbterm_core::{rewrite, Error as CoreError, Limits, Normalizer};

fn err(e: CoreError) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_mode(mode: &str) -> PyResult<Mode> {
    mode.parse().map_err(PyValueError::new_err)
}

/// The tree `T(a,b,c)`: `a` dots on the left leg, `b` on the right leg,
/// `c` on the neck; as an operator, `P^c(P^a(x)·P^b(y))`.
#[pyclass(frozen, eq, hash, skip_from_py_object, name = "Tree")]
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
struct PyTree {
    inner: rbterm_core::Tree,
}

#[pymethods]
impl PyTree {
    #[new]
    fn new(a: u32, b: u32, c: u32) -> Self {
        PyTree {
            inner: rbterm_core::Tree::new(a, b, c),
        }
    }

    #[getter]
    fn a(&self) -> u32 {
        self.inner.a
    }

    #[getter]
    fn b(&self) -> u32 {
        self.inner.b
    }

    #[getter]
    fn c(&self) -> u32 {
        self.inner.c
    }

    /// True when a leg is empty and no move applies.
    fn is_normal_form(&self) -> bool {
        self.inner.is_normal_form()
    }

    fn mirrored(&self) -> Self {
        PyTree {
            inner: self.inner.mirrored(),
        }
    }

    fn with_neck_added(&self, k: u32) -> Self {
        PyTree {
            inner: self.inner.with_neck_added(k),
        }
    }

    fn __repr__(&self) -> String {
        self.inner.to_string()
    }
}

/// A formal sum of trees with coefficients in Z[λ], canonically ordered.
#[pyclass(frozen, eq, skip_from_py_object, name = "Combination")]
#[derive(Clone, PartialEq)]
struct PyCombination {
    inner: rbterm_core::Combination,
}

#[pymethods]
impl PyCombination {
    /// Canonical JSON: sorted entries `{"tree":[a,b,c],"coeff":[[e,"n"],...]}`.
    fn to_json(&self) -> String {
        self.inner.to_canonical_json()
    }

    /// LaTeX rendering; with `operator_notation` trees print as
    /// `P^c(P^a(x)P^b(y))`.
    #[pyo3(signature = (operator_notation = false))]
    fn latex(&self, operator_notation: bool) -> String {
        latex::combination_latex(&self.inner, operator_notation)
    }

    /// Entries as `[(tree, [(exponent, coefficient), ...]), ...]`.
    fn items(&self) -> Vec<(PyTree, Vec<(u32, BigInt)>)> {
        self.inner
            .iter()
            .map(|(t, p)| {
                (
                    PyTree { inner: *t },
                    p.terms().iter().map(|(e, n)| (*e, n.clone())).collect(),
                )
            })
            .collect()
    }

    /// Coefficient of a tree as `[(exponent, coefficient), ...]` (empty when
    /// absent).
    fn coefficient(&self, tree: &PyTree) -> Vec<(u32, BigInt)> {
        self.inner
            .coefficient(&tree.inner)
            .terms()
            .iter()
            .map(|(e, n)| (*e, n.clone()))
            .collect()
    }

    /// Exact specialization λ = numerator/denominator:
    /// `[(tree, (p, q)), ...]` with zero results pruned.
    #[pyo3(signature = (numerator, denominator = 1))]
    fn evaluate_lambda(
        &self,
        numerator: i64,
        denominator: i64,
    ) -> PyResult<Vec<(PyTree, (BigInt, BigInt))>> {
        if denominator == 0 {
            return Err(PyValueError::new_err("denominator must be nonzero"));
        }
        let q = num::BigRational::new(BigInt::from(numerator), BigInt::from(denominator));
        Ok(self
            .inner
            .evaluate_lambda(&q)
            .into_iter()
            .map(|(t, v)| {
                (
                    PyTree { inner: t },
                    (v.numer().clone(), v.denom().clone()),
                )
            })
            .collect())
    }

    fn add(&self, other: &PyCombination) -> PyCombination {
        PyCombination {
            inner: &self.inner + &other.inner,
        }
    }

    /// Every tree gets `k` extra neck dots.
    fn neck_shift(&self, k: u32) -> PyCombination {
        PyCombination {
            inner: rewrite::neck_shift(&self.inner, k),
        }
    }

    fn __len__(&self) -> usize {
        self.inner.len()
    }

    fn __str__(&self) -> String {
        self.inner.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<Combination {}>", self.inner)
    }
}

/// One application of the Rota-Baxter identity to `T(a,b,c)`.
#[pyfunction]
#[pyo3(signature = (a, b, c = 0))]
fn expand_step(a: u32, b: u32, c: u32) -> PyResult<PyCombination> {
    rewrite::expand_step(rbterm_core::Tree::new(a, b, c))
        .map(|inner| PyCombination { inner })
        .map_err(err)
}

/// Memoized normal form of `T(a,b,c)`.
#[pyfunction]
#[pyo3(signature = (a, b, c = 0))]
fn normal_form(a: u32, b: u32, c: u32) -> PyResult<PyCombination> {
    Normalizer::default()
        .normal_form(rbterm_core::Tree::new(a, b, c))
        .map(|inner| PyCombination { inner })
        .map_err(err)
}

/// Exponential replace-until-fixpoint oracle (capped input size).
#[pyfunction]
#[pyo3(signature = (a, b, c = 0))]
fn normal_form_naive(a: u32, b: u32, c: u32) -> PyResult<PyCombination> {
    rewrite::normal_form_naive(rbterm_core::Tree::new(a, b, c), &Limits::default())
        .map(|inner| PyCombination { inner })
        .map_err(err)
}

/// The λ-free closed form (weight 0).
#[pyfunction]
#[pyo3(signature = (a, b, c = 0))]
fn restricted_identity(a: u32, b: u32, c: u32) -> PyResult<PyCombination> {
    closed_form::restricted_identity(a, b, c)
        .map(|inner| PyCombination { inner })
        .map_err(err)
}

/// The generic closed form; `mode` is `"reconciled"` or `"as-published"`.
#[pyfunction]
#[pyo3(signature = (a, b, c = 0, mode = "reconciled"))]
fn generic_identity(a: u32, b: u32, c: u32, mode: &str) -> PyResult<PyCombination> {
    closed_form::generic_identity(a, b, c, parse_mode(mode)?)
        .map(|inner| PyCombination { inner })
        .map_err(err)
}

/// Diff the closed form against the rewrite oracle over a grid; returns the
/// discrepancy report as a JSON string.
#[pyfunction]
#[pyo3(signature = (max_a, max_b, mode = "reconciled", lambda_zero = false, jobs = 1))]
fn validate_json(
    max_a: u32,
    max_b: u32,
    mode: &str,
    lambda_zero: bool,
    jobs: usize,
) -> PyResult<String> {
    let engine = Normalizer::default();
    closed_form::validate(&engine, max_a, max_b, parse_mode(mode)?, lambda_zero, jobs)
        .map(|report| report.to_json())
        .map_err(err)
}

/// `n! / (k1!·k2!·k3!)`; zero outside its support.
#[pyfunction]
fn multinomial(n: u64, k1: i64, k2: i64, k3: i64) -> BigInt {
    closed_form::multinomial(n, k1, k2, k3)
}

/// Exact binomial coefficient.
#[pyfunction]
fn binomial(n: u64, k: u64) -> BigInt {
    closed_form::binomial(n, k)
}

/// Number of weakly increasing `a`-tuples in `[1, m]`, by enumeration.
#[pyfunction]
fn chain_count(a: u32, m: u32) -> PyResult<BigInt> {
    models::chain_count(a, m, models::DEFAULT_ENUMERATION_CAP).map_err(err)
}

/// Chain-count agreement table (enumeration vs prefix sums vs the printed
/// closed form) as a JSON string.
#[pyfunction]
fn chain_count_report_json(max_a: u32, max_m: u32) -> PyResult<String> {
    models::chain_count_formula_report(max_a, max_m, models::DEFAULT_ENUMERATION_CAP)
        .map(|report| report.to_json())
        .map_err(err)
}

#[pymodule]
fn rbterm(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyTree>()?;
    m.add_class::<PyCombination>()?;
    m.add_function(wrap_pyfunction!(expand_step, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form, m)?)?;
    m.add_function(wrap_pyfunction!(normal_form_naive, m)?)?;
    m.add_function(wrap_pyfunction!(restricted_identity, m)?)?;
    m.add_function(wrap_pyfunction!(generic_identity, m)?)?;
    m.add_function(wrap_pyfunction!(validate_json, m)?)?;
    m.add_function(wrap_pyfunction!(multinomial, m)?)?;
    m.add_function(wrap_pyfunction!(binomial, m)?)?;
    m.add_function(wrap_pyfunction!(chain_count, m)?)?;
    m.add_function(wrap_pyfunction!(chain_count_report_json, m)?)?;
    Ok(())
}
