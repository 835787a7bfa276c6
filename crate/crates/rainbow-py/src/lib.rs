//! Python bindings: the `rainbow_zn` extension module.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use rainbow_core::certify;
use rainbow_core::construct;
use rainbow_core::format;
use rainbow_core::formulas;
use rainbow_core::group::{self, AffineMap, LinearEquation};
use rainbow_core::reduce;
use rainbow_core::solver;

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_equation(name: &str) -> PyResult<LinearEquation> {
    match name {
        "sidon" => Ok(LinearEquation::sidon()),
        "schur" => Ok(LinearEquation::schur()),
        _ => Err(value_err(format!("unknown equation {name:?}; use \"sidon\" or \"schur\""))),
    }
}

/// An exact coloring of Z_n.
#[pyclass(frozen, skip_from_py_object)]
#[derive(Clone)]
struct Coloring {
    inner: group::Coloring,
}

#[pymethods]
impl Coloring {
    /// Build from arbitrary color ids; ids are renumbered in
    /// first-occurrence order.
    #[new]
    fn new(ids: Vec<u32>) -> PyResult<Self> {
        let inner = group::Coloring::new(ids.len(), &ids).map_err(value_err)?;
        Ok(Coloring { inner })
    }

    /// Parse the two-line text format "n r\\n<ids>".
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Coloring { inner: format::parse_coloring(text).map_err(value_err)? })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    /// Palette size (number of colors used).
    #[getter]
    fn r(&self) -> u32 {
        self.inner.palette()
    }

    #[getter]
    fn colors(&self) -> Vec<u32> {
        self.inner.colors().to_vec()
    }

    fn color(&self, x: i64) -> u32 {
        self.inner.color(group::modn(x, self.inner.n()))
    }

    /// `result(x) = self(scale*x + shift)`; scale must be a unit mod n.
    fn apply_affine(&self, scale: i64, shift: i64) -> PyResult<Self> {
        let m = AffineMap::new(self.inner.n(), scale, shift).map_err(value_err)?;
        Ok(Coloring { inner: self.inner.apply_affine(&m).map_err(value_err)? })
    }

    /// Lex-least orbit representative under affine maps and relabeling.
    fn canonicalize(&self) -> Self {
        Coloring { inner: self.inner.canonicalize() }
    }

    /// Expand to Z_{p*n}, preserving rainbow-Sidon-freeness.
    fn lift(&self, p: u64) -> PyResult<Self> {
        Ok(Coloring { inner: construct::lift(&self.inner, p).map_err(value_err)? })
    }

    fn is_rainbow_free(&self, equation: &str) -> PyResult<bool> {
        Ok(solver::is_rainbow_free(&self.inner, &parse_equation(equation)?))
    }

    fn count_rainbow_solutions(&self, equation: &str) -> PyResult<u64> {
        Ok(solver::count_rainbow_solutions(&self.inner, &parse_equation(equation)?))
    }

    /// Brute-force rainbow witness: (elements, colors) or None.
    fn find_witness(&self, equation: &str) -> PyResult<Option<(Vec<usize>, Vec<u32>)>> {
        let eq = parse_equation(equation)?;
        Ok(solver::find_rainbow_witness(&self.inner, &eq).map(|w| (w.elements, w.colors)))
    }

    /// Rainbow Sidon witness via coset reduction; agrees with brute force
    /// on existence.
    fn witness_by_reduction(&self) -> Option<(Vec<usize>, Vec<u32>)> {
        reduce::find_witness_by_reduction(&self.inner).map(|w| {
            w.validate(&self.inner).expect("reduction witnesses revalidate");
            (w.elements, w.colors)
        })
    }

    fn __str__(&self) -> String {
        format::write_coloring(&self.inner)
    }

    fn __repr__(&self) -> String {
        format!("Coloring(n={}, r={}, colors={:?})", self.inner.n(), self.inner.palette(), self.inner.colors())
    }

    fn __eq__(&self, other: &Coloring) -> bool {
        self.inner == other.inner
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }
}

/// rb(Z_n) for the Sidon equation, from the closed form.
#[pyfunction]
fn rb_sidon(n: u64) -> PyResult<u64> {
    if n == 0 {
        return Err(value_err("n must be positive"));
    }
    Ok(formulas::rb_sidon(n))
}

/// rb(Z_n) for the Schur equation, from the closed form.
#[pyfunction]
fn rb_schur(n: u64) -> PyResult<u64> {
    formulas::rb_schur(n).map_err(value_err)
}

/// Exact rainbow-Sidon-free coloring of Z_n with rb_sidon(n) - 1 colors.
#[pyfunction]
fn extremal_coloring(n: u64) -> PyResult<Coloring> {
    Ok(Coloring { inner: construct::extremal_coloring(n).map_err(value_err)? })
}

/// Exhaustively certified rb(Z_n). Refuses n past the desk bound unless
/// allow_large is set.
#[pyfunction]
#[pyo3(signature = (n, equation = "sidon", allow_large = false))]
fn certify_rb(n: usize, equation: &str, allow_large: bool) -> PyResult<u64> {
    let eq = parse_equation(equation)?;
    let opts = certify::CertifyOptions { allow_large, ..Default::default() };
    let (rb, _) = certify::certify_rb(n, &eq, &opts).map_err(value_err)?;
    Ok(rb)
}

/// Largest n the certifier accepts without allow_large.
#[pyfunction]
#[pyo3(signature = (equation = "sidon"))]
fn desk_bound(equation: &str) -> PyResult<usize> {
    Ok(certify::desk_bound(&parse_equation(equation)?))
}

#[pymodule]
fn rainbow_zn(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Coloring>()?;
    m.add_function(wrap_pyfunction!(rb_sidon, m)?)?;
    m.add_function(wrap_pyfunction!(rb_schur, m)?)?;
    m.add_function(wrap_pyfunction!(extremal_coloring, m)?)?;
    m.add_function(wrap_pyfunction!(certify_rb, m)?)?;
    m.add_function(wrap_pyfunction!(desk_bound, m)?)?;
    Ok(())
}
