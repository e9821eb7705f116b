//! Python bindings. Exact values cross the boundary as `fractions.Fraction`
//! and big integers as Python `int`.

use num_bigint::BigUint;
use num_rational::BigRational;
use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;
use pyo3::types::{PyDict, PyFloat, PyString};
use tropline::ensembles::{self, SeededStream};
use tropline::segment::{self as seg, SegmentReport};
use tropline::tree::{self, parse_newick, write_newick};
use tropline::{EquidistantTree, ExactScalar, UltraVector};

create_exception!(pytropline, TheoremViolation, PyException);

fn err(e: tropline::Error) -> PyErr {
    match e {
        tropline::Error::TheoremViolation(_) => TheoremViolation::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Accepts `int`, `Fraction`, `float` (exact binary value) or a string such as `"3/2"`.
fn scalar(obj: &Bound<'_, PyAny>) -> PyResult<ExactScalar> {
    if obj.is_instance_of::<PyFloat>() {
        let x: f64 = obj.extract()?;
        return ExactScalar::from_f64(x).ok_or_else(|| PyValueError::new_err("non-finite float"));
    }
    if obj.is_instance_of::<PyString>() {
        let s: String = obj.extract()?;
        return s.parse().map_err(|e: tropline::metric::ParseScalarError| PyValueError::new_err(e.to_string()));
    }
    let r: BigRational = obj.extract()?;
    Ok(ExactScalar::from(r))
}

fn fraction<'py>(py: Python<'py>, x: &ExactScalar) -> PyResult<Bound<'py, PyAny>> {
    x.to_ratio().into_pyobject(py)
}

fn fractions<'py>(py: Python<'py>, xs: &[ExactScalar]) -> PyResult<Vec<Bound<'py, PyAny>>> {
    xs.iter().map(|x| fraction(py, x)).collect()
}

/// Distance vector over leaf pairs `(1,2), (1,3), ..., (n-1,n)`.
#[pyclass(name = "Ultrametric", module = "pytropline", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyUltrametric(UltraVector);

#[pymethods]
impl PyUltrametric {
    #[new]
    fn new(n: usize, entries: Vec<Bound<'_, PyAny>>) -> PyResult<Self> {
        let values = entries.iter().map(scalar).collect::<PyResult<Vec<_>>>()?;
        UltraVector::new(n, values).map(Self).map_err(err)
    }

    /// Parses the text format: `n` on the first line, then the entries.
    #[staticmethod]
    fn from_text(text: &str) -> PyResult<Self> {
        UltraVector::parse_text(text).map(Self).map_err(err)
    }

    fn to_text(&self) -> String {
        self.0.to_text()
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn entries<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        fractions(py, self.0.entries())
    }

    fn to_floats(&self) -> Vec<f64> {
        self.0.entries().iter().map(ExactScalar::to_f64).collect()
    }

    fn get<'py>(&self, py: Python<'py>, i: usize, j: usize) -> PyResult<Bound<'py, PyAny>> {
        let p = tropline::PairIndex::new(self.0.n(), i, j).map_err(err)?;
        fraction(py, self.0.at(p))
    }

    fn three_point_check(&self) -> bool {
        self.0.three_point_check()
    }

    fn four_point_check(&self) -> bool {
        self.0.four_point_check()
    }

    /// First triple whose maximum is attained once, if any.
    fn three_point_violation(&self) -> Option<(usize, usize, usize)> {
        self.0.three_point_violation()
    }

    /// Representative with minimum entry 0.
    fn normalize(&self) -> Self {
        Self(self.0.normalize_projective().into_rep())
    }

    fn projective_equal(&self, other: &Self) -> PyResult<bool> {
        self.0.projective_equal(&other.0).map_err(err)
    }

    fn trop_add(&self, other: &Self) -> PyResult<Self> {
        self.0.trop_add(&other.0).map(Self).map_err(err)
    }

    fn trop_scale(&self, lam: &Bound<'_, PyAny>) -> PyResult<Self> {
        Ok(Self(self.0.trop_scale(&scalar(lam)?)))
    }

    fn to_tree(&self) -> PyResult<PyTree> {
        EquidistantTree::from_ultrametric(&self.0).map(PyTree).map_err(err)
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __len__(&self) -> usize {
        self.0.entries().len()
    }

    fn __repr__(&self) -> String {
        format!("Ultrametric({}, {})", self.0.n(), self.0)
    }
}

/// Equidistant tree with exact heights.
#[pyclass(name = "Tree", module = "pytropline", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyTree(EquidistantTree);

#[pymethods]
impl PyTree {
    #[staticmethod]
    fn from_newick(text: &str) -> PyResult<Self> {
        parse_newick(text.trim()).map(Self).map_err(err)
    }

    fn to_newick(&self) -> String {
        write_newick(&self.0)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    fn to_ultrametric(&self) -> PyUltrametric {
        PyUltrametric(self.0.to_ultrametric())
    }

    fn is_generic(&self) -> bool {
        self.0.is_generic()
    }

    fn is_binary(&self) -> bool {
        self.0.topology().is_binary()
    }

    /// Child count of each internal vertex.
    fn branching_profile(&self) -> Vec<usize> {
        self.0.branching_profile()
    }

    /// Clades of the topology as sorted label lists, the root included.
    fn clades(&self) -> Vec<Vec<usize>> {
        self.0.topology().to_label_lists()
    }

    /// Internal clades with their heights.
    fn clade_heights<'py>(&self, py: Python<'py>) -> PyResult<Vec<(Vec<usize>, Bound<'py, PyAny>)>> {
        self.0
            .clade_heights()
            .iter()
            .map(|(c, h)| Ok((c.labels().collect(), fraction(py, h)?)))
            .collect()
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("Tree({:?})", write_newick(&self.0))
    }
}

/// The tropical segment between two ultrametrics.
#[pyclass(name = "Segment", module = "pytropline", frozen, skip_from_py_object)]
struct PySegment(tropline::TropicalSegment);

#[pymethods]
impl PySegment {
    #[new]
    fn new(u: &PyUltrametric, v: &PyUltrametric) -> PyResult<Self> {
        tropline::tropical_segment(&u.0, &v.0).map(Self).map_err(err)
    }

    #[staticmethod]
    fn between_trees(t1: &PyTree, t2: &PyTree) -> PyResult<Self> {
        tropline::TropicalSegment::between_trees(&t1.0, &t2.0).map(Self).map_err(err)
    }

    #[getter]
    fn generic_pair(&self) -> bool {
        self.0.is_generic_pair()
    }

    fn lambdas<'py>(&self, py: Python<'py>) -> PyResult<Vec<Bound<'py, PyAny>>> {
        self.0.lambdas().map(|l| fraction(py, l)).collect()
    }

    /// Turning points as canonical (minimum zero) ultrametrics.
    fn points(&self) -> Vec<PyUltrametric> {
        self.0.points().iter().map(|p| PyUltrametric(p.point.rep().clone())).collect()
    }

    fn trees(&self) -> Vec<PyTree> {
        self.0.points().iter().map(|p| PyTree(p.tree.clone())).collect()
    }

    /// `"NoChange"`, `"SingleNNI"`, `"FourClade"`, or `None` off the trichotomy.
    fn classes(&self) -> Vec<Option<&'static str>> {
        self.0.points().iter().map(|p| p.class.map(|c| c.as_str())).collect()
    }

    /// `u ⊕ (λ ⊙ v)` at any scalar.
    fn point_at(&self, lam: &Bound<'_, PyAny>) -> PyResult<PyUltrametric> {
        Ok(PyUltrametric(self.0.point_at(&scalar(lam)?)))
    }

    fn tropical_nni_number(&self) -> PyResult<usize> {
        self.0.tropical_nni_number().map_err(err)
    }

    /// True when every topology change matches its class.
    fn moves_consistent(&self) -> PyResult<bool> {
        Ok(seg::check_moves(&self.0).map_err(err)?.iter().all(|c| c.consistent))
    }

    #[pyo3(signature = (decimal = false))]
    fn to_json(&self, decimal: bool) -> String {
        SegmentReport::new(&self.0, decimal).to_json()
    }

    fn __len__(&self) -> usize {
        self.0.len()
    }

    fn __repr__(&self) -> String {
        format!("Segment(n={}, turning_points={})", self.0.n(), self.0.len())
    }
}

#[pyfunction]
fn tropical_segment(u: &PyUltrametric, v: &PyUltrametric) -> PyResult<PySegment> {
    PySegment::new(u, v)
}

#[pyfunction]
fn turning_scalars<'py>(py: Python<'py>, u: &PyUltrametric, v: &PyUltrametric) -> PyResult<Vec<Bound<'py, PyAny>>> {
    fractions(py, &seg::turning_scalars(&u.0, &v.0).map_err(err)?)
}

#[pyfunction]
fn is_generic_pair(t1: &PyTree, t2: &PyTree) -> bool {
    tree::is_generic_pair(&t1.0, &t2.0)
}

#[pyfunction]
fn tropical_interchange_number(t1: &PyTree, t2: &PyTree) -> PyResult<usize> {
    seg::tropical_interchange_number(&t1.0, &t2.0).map_err(err)
}

/// Breadth-first NNI distance between the topologies, for up to 7 leaves.
#[pyfunction]
fn nni_distance(t1: &PyTree, t2: &PyTree) -> PyResult<usize> {
    tree::nni_distance_exact(&t1.0.topology(), &t2.0.topology()).map_err(err)
}

#[pyfunction]
fn worst_case_pair(n: usize) -> PyResult<(PyUltrametric, PyUltrametric)> {
    let (u, v) = ensembles::worst_case_pair(n).map_err(err)?;
    Ok((PyUltrametric(u), PyUltrametric(v)))
}

#[pyfunction]
#[pyo3(signature = (n, seed = SeededStream::DEFAULT_SEED, height_range = None))]
fn random_pair(n: usize, seed: u64, height_range: Option<u64>) -> PyResult<(PyTree, PyTree)> {
    let m = height_range.unwrap_or_else(|| ensembles::default_height_range(n));
    let p = ensembles::sample_generic_pair(n, &mut SeededStream::new(seed).rng(), m).map_err(err)?;
    Ok((PyTree(p.t1), PyTree(p.t2)))
}

#[pyfunction]
fn count_planar(n: usize) -> PyResult<BigUint> {
    ensembles::count_planar(n).map_err(err)
}

#[pyfunction]
fn count_planar_marked(n: usize) -> PyResult<BigUint> {
    ensembles::count_planar_marked(n).map_err(err)
}

#[pyfunction]
fn count_planar_marked_ab(n: usize, a: usize, b: usize) -> PyResult<BigUint> {
    ensembles::count_planar_marked_ab(n, a, b).map_err(err)
}

#[pyfunction]
fn prob_p(py: Python<'_>, a: usize, b: usize, n: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &ensembles::prob_p(a, b, n).map_err(err)?)
}

#[pyfunction]
fn exact_q(py: Python<'_>, a1: usize, b1: usize, a2: usize, b2: usize, n: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &ensembles::exact_q(a1, b1, a2, b2, n).map_err(err)?)
}

#[pyfunction]
fn qtilde(py: Python<'_>, a1: usize, b1: usize, a2: usize, b2: usize, n: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &ensembles::qtilde(a1, b1, a2, b2, n).map_err(err)?)
}

/// Majorant of `S_n`: exact `Fraction` up to 512 leaves, `float` beyond.
#[pyfunction]
fn sum_sn_bound(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyAny>> {
    if n <= ensembles::EXACT_SUM_BOUND_MAX_LEAVES {
        fraction(py, &ensembles::sum_sn_bound(n).map_err(err)?)
    } else {
        Ok(ensembles::sum_sn_bound_f64(n).map_err(err)?.into_pyobject(py)?.into_any())
    }
}

#[pyfunction]
fn expected_pi_exact(py: Python<'_>, n: usize) -> PyResult<Bound<'_, PyAny>> {
    fraction(py, &ensembles::expected_pi_exact(n).map_err(err)?)
}

/// Runs a Monte-Carlo experiment and returns its report as a dict.
#[pyfunction]
#[pyo3(signature = (n, trials = 2000, seed = SeededStream::DEFAULT_SEED, height_range = None))]
fn expected_pi_monte_carlo(
    py: Python<'_>,
    n: usize,
    trials: usize,
    seed: u64,
    height_range: Option<u64>,
) -> PyResult<Bound<'_, PyDict>> {
    let m = height_range.unwrap_or_else(|| ensembles::default_height_range(n));
    let r = py
        .detach(|| ensembles::expected_pi_monte_carlo(n, trials, &SeededStream::new(seed), m))
        .map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("n", r.n)?;
    d.set_item("trials", r.trials)?;
    d.set_item("seed", r.seed)?;
    d.set_item("height_range", r.height_range)?;
    d.set_item("mean_pi", r.mean_pi)?;
    d.set_item("var", r.var)?;
    d.set_item("ci99", r.ci99)?;
    d.set_item("bound", r.bound)?;
    d.set_item("bound_exact", r.bound_exact.as_ref().map(|b| fraction(py, b)).transpose()?)?;
    d.set_item("mean_exact", fraction(py, &r.mean_exact())?)?;
    d.set_item("max_pi", r.max_pi)?;
    d.set_item("seconds", r.seconds)?;
    Ok(d)
}

#[pymodule]
fn pytropline(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("TheoremViolation", m.py().get_type::<TheoremViolation>())?;
    m.add_class::<PyUltrametric>()?;
    m.add_class::<PyTree>()?;
    m.add_class::<PySegment>()?;
    m.add_function(wrap_pyfunction!(tropical_segment, m)?)?;
    m.add_function(wrap_pyfunction!(turning_scalars, m)?)?;
    m.add_function(wrap_pyfunction!(is_generic_pair, m)?)?;
    m.add_function(wrap_pyfunction!(tropical_interchange_number, m)?)?;
    m.add_function(wrap_pyfunction!(nni_distance, m)?)?;
    m.add_function(wrap_pyfunction!(worst_case_pair, m)?)?;
    m.add_function(wrap_pyfunction!(random_pair, m)?)?;
    m.add_function(wrap_pyfunction!(count_planar, m)?)?;
    m.add_function(wrap_pyfunction!(count_planar_marked, m)?)?;
    m.add_function(wrap_pyfunction!(count_planar_marked_ab, m)?)?;
    m.add_function(wrap_pyfunction!(prob_p, m)?)?;
    m.add_function(wrap_pyfunction!(exact_q, m)?)?;
    m.add_function(wrap_pyfunction!(qtilde, m)?)?;
    m.add_function(wrap_pyfunction!(sum_sn_bound, m)?)?;
    m.add_function(wrap_pyfunction!(expected_pi_exact, m)?)?;
    m.add_function(wrap_pyfunction!(expected_pi_monte_carlo, m)?)?;
    Ok(())
}
