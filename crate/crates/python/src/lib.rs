use num_bigint::BigInt;
use pyo3::exceptions::{PyIndexError, PyValueError};
use pyo3::prelude::*;

use dsrg_core::{autiso, blockmat, family, io, polyring, search};

type Params = (usize, usize, usize, usize, usize);

fn err(e: dsrg_core::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn to_params(p: Params) -> PyResult<dsrg_core::DsrgParams> {
    dsrg_core::DsrgParams::new(p.0, p.1, p.2, p.3, p.4).map_err(err)
}

fn from_params(p: dsrg_core::DsrgParams) -> Params {
    (p.v, p.k, p.t, p.lambda, p.mu)
}

/// Element of Z[x]/(x^m - 1).
#[pyclass(name = "CycPoly", eq, frozen, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCycPoly(polyring::CycPoly);

#[pymethods]
impl PyCycPoly {
    #[new]
    fn new(coeffs: Vec<BigInt>) -> PyResult<Self> {
        polyring::CycPoly::from_coeffs(coeffs).map(Self).map_err(err)
    }

    #[staticmethod]
    fn monomial(modulus: usize, e: usize) -> Self {
        Self(polyring::CycPoly::monomial(modulus, e))
    }

    #[staticmethod]
    fn from_exponents(modulus: usize, exps: Vec<usize>) -> Self {
        Self(polyring::CycPoly::from_exponents(modulus, exps))
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[getter]
    fn modulus(&self) -> usize {
        self.0.modulus()
    }

    #[getter]
    fn coeffs(&self) -> Vec<BigInt> {
        self.0.coeffs().to_vec()
    }

    fn support(&self) -> Vec<usize> {
        self.0.support()
    }

    fn shift(&self, s: usize) -> Self {
        Self(self.0.shift(s))
    }

    fn eval_at_one(&self) -> BigInt {
        self.0.eval_at_one()
    }

    fn is_binary(&self) -> bool {
        self.0.is_binary()
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(err)
    }

    fn __sub__(&self, other: &Self) -> PyResult<Self> {
        self.0.sub(&other.0).map(Self).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.mul(&other.0).map(Self).map_err(err)
    }

    fn __neg__(&self) -> Self {
        Self(self.0.scalar_mul(-1))
    }

    fn __str__(&self) -> String {
        self.0.pretty()
    }

    fn __repr__(&self) -> String {
        format!("CycPoly('{}')", self.0)
    }
}

/// Square matrix of circulant blocks, each stored as its polynomial.
#[pyclass(name = "CompactMatrix", eq, frozen, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyCompactMatrix(blockmat::CompactMatrix);

#[pymethods]
impl PyCompactMatrix {
    #[new]
    fn new(rows: Vec<Vec<PyCycPoly>>) -> PyResult<Self> {
        let rows = rows.into_iter().map(|r| r.into_iter().map(|p| p.0).collect()).collect();
        blockmat::CompactMatrix::from_rows(rows).map(Self).map_err(err)
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        text.parse().map(Self).map_err(err)
    }

    #[getter]
    fn block_dim(&self) -> usize {
        self.0.block_dim()
    }

    #[getter]
    fn modulus(&self) -> usize {
        self.0.modulus()
    }

    fn entry(&self, i: usize, j: usize) -> PyResult<PyCycPoly> {
        let b = self.0.block_dim();
        if i >= b || j >= b {
            return Err(PyIndexError::new_err(format!("block ({i}, {j}) outside {b}x{b}")));
        }
        Ok(PyCycPoly(self.0.get(i, j).clone()))
    }

    fn is_binary(&self) -> bool {
        self.0.is_binary()
    }

    fn eval_at_one(&self) -> Vec<Vec<BigInt>> {
        let m = self.0.eval_at_one();
        (0..m.rows()).map(|i| (0..m.cols()).map(|j| m.get(i, j).clone()).collect()).collect()
    }

    fn to_digraph(&self) -> PyResult<PyDigraph> {
        let mat = blockmat::decompactify(&self.0).map_err(err)?;
        dsrg_core::Digraph::from_matrix(&mat).map(PyDigraph).map_err(err)
    }

    fn __add__(&self, other: &Self) -> PyResult<Self> {
        self.0.add(&other.0).map(Self).map_err(err)
    }

    fn __mul__(&self, other: &Self) -> PyResult<Self> {
        self.0.mul(&other.0).map(Self).map_err(err)
    }

    fn __str__(&self) -> String {
        self.0.to_string()
    }

    fn __repr__(&self) -> String {
        format!("<CompactMatrix {}x{} blocks, modulus {}>", self.0.block_dim(), self.0.block_dim(), self.0.modulus())
    }
}

/// Loopless digraph on vertices 0..v.
#[pyclass(name = "Digraph", eq, frozen, from_py_object)]
#[derive(Clone, PartialEq)]
struct PyDigraph(dsrg_core::Digraph);

#[pymethods]
impl PyDigraph {
    #[new]
    fn new(v: usize, arcs: Vec<(usize, usize)>) -> PyResult<Self> {
        dsrg_core::Digraph::from_arcs(v, arcs).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_adjacency(rows: Vec<Vec<u8>>) -> PyResult<Self> {
        let m = blockmat::BinaryMatrix::from_rows(&rows).map_err(err)?;
        dsrg_core::Digraph::from_matrix(&m).map(Self).map_err(err)
    }

    /// Reads any of the matrix, edge-list or compact text formats.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        io::parse_digraph(text).map(|l| Self(l.digraph)).map_err(err)
    }

    #[getter]
    fn order(&self) -> usize {
        self.0.order()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.0.arcs().collect()
    }

    fn has_arc(&self, a: usize, b: usize) -> bool {
        a < self.0.order() && b < self.0.order() && self.0.has_arc(a, b)
    }

    fn adjacency(&self) -> Vec<Vec<u8>> {
        let v = self.0.order();
        (0..v).map(|a| (0..v).map(|b| self.0.has_arc(a, b) as u8).collect()).collect()
    }

    fn converse(&self) -> Self {
        Self(self.0.converse())
    }

    fn relabel(&self, perm: Vec<usize>) -> PyResult<Self> {
        let v = self.0.order();
        let mut seen = vec![false; v];
        if perm.len() != v || perm.iter().any(|&p| p >= v || std::mem::replace(&mut seen[p], true)) {
            return Err(PyValueError::new_err("not a permutation of the vertex set"));
        }
        Ok(Self(self.0.relabel(&perm)))
    }

    /// `method` is "matrix", "count" or "both".
    #[pyo3(signature = (params, method = "both"))]
    fn verify(&self, params: Params, method: &str) -> PyResult<bool> {
        let p = to_params(params)?;
        if self.0.order() != p.v {
            return Ok(false);
        }
        let by_matrix = || dsrg_core::verify_matrix(&self.0, &p).map(|v| v.is_none()).map_err(err);
        let by_count = || dsrg_core::verify_combinatorial(&self.0, &p).map(|v| v.is_none()).map_err(err);
        match method {
            "matrix" => by_matrix(),
            "count" => by_count(),
            "both" => Ok(by_matrix()? && by_count()?),
            _ => Err(PyValueError::new_err(format!("unknown method {method:?}"))),
        }
    }

    fn infer_params(&self) -> PyResult<Option<Params>> {
        Ok(dsrg_core::infer_params(&self.0).map_err(err)?.ok().map(from_params))
    }

    fn aut_order(&self) -> BigInt {
        autiso::automorphism_group(&self.0).order.into()
    }

    fn aut_generators(&self) -> Vec<Vec<usize>> {
        autiso::automorphism_group(&self.0).generators
    }

    fn canonical_form(&self) -> Vec<Vec<u8>> {
        Self(dsrg_core::Digraph::from_matrix(&autiso::canonical_form(&self.0)).expect("loopless")).adjacency()
    }

    /// An isomorphism onto `other` (old label -> new label), if one exists.
    fn isomorphism(&self, other: &Self) -> Option<Vec<usize>> {
        autiso::are_isomorphic(&self.0, &other.0)
    }

    #[pyo3(signature = (format = "matrix", blocks = None))]
    fn to_text(&self, format: &str, blocks: Option<usize>) -> PyResult<String> {
        let f: io::Format = format.parse().map_err(err)?;
        io::render(&self.0, f, blocks).map_err(err)
    }

    fn compactify(&self, blocks: usize) -> PyResult<PyCompactMatrix> {
        let v = self.0.order();
        if blocks == 0 || !v.is_multiple_of(blocks) {
            return Err(PyValueError::new_err(format!("{v} vertices do not split into {blocks} blocks")));
        }
        blockmat::compactify(&self.0.to_matrix(), blocks, v / blocks).map(PyCompactMatrix).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!("<Digraph v={} arcs={}>", self.0.order(), self.0.arc_count())
    }
}

#[pyfunction]
fn params_for(n: usize) -> PyResult<Params> {
    family::params_for(n).map(from_params).map_err(err)
}

#[pyfunction]
fn build_cn(n: usize) -> PyResult<Vec<Vec<BigInt>>> {
    let c = family::build_cn(n).map_err(err)?;
    Ok((0..c.rows()).map(|i| (0..c.cols()).map(|j| c.get(i, j).clone()).collect()).collect())
}

#[pyfunction]
fn family_compact(n: usize) -> PyResult<PyCompactMatrix> {
    family::build_family_compact(n).map(PyCompactMatrix).map_err(err)
}

#[pyfunction]
fn family_digraph(n: usize) -> PyResult<PyDigraph> {
    family::build_family_digraph(n).map(PyDigraph).map_err(err)
}

#[pyfunction]
fn worked_example() -> PyDigraph {
    PyDigraph(dsrg_core::Digraph::from_matrix(&blockmat::worked_example()).expect("loopless"))
}

#[pyfunction]
fn make_p(n: usize) -> PyResult<PyCycPoly> {
    polyring::make_p(n).map(PyCycPoly).map_err(err)
}

#[pyfunction]
fn make_q(n: usize) -> PyResult<PyCycPoly> {
    polyring::make_q(n).map(PyCycPoly).map_err(err)
}

#[pyfunction]
fn make_r(n: usize) -> PyResult<PyCycPoly> {
    polyring::make_r(n).map(PyCycPoly).map_err(err)
}

#[pyfunction]
fn make_s(n: usize) -> PyResult<PyCycPoly> {
    polyring::make_s(n).map(PyCycPoly).map_err(err)
}

/// Returns (solutions, stats) where stats holds nodes, pruning counts, seconds and completeness.
#[pyfunction]
#[pyo3(signature = (n, budget = None, jobs = 1))]
fn run_search(py: Python<'_>, n: usize, budget: Option<u64>, jobs: usize) -> PyResult<(Vec<PyCompactMatrix>, Py<PyAny>)> {
    let mut spec = search::SearchSpec::new(n).map_err(err)?.with_jobs(jobs);
    if budget.is_some() {
        spec = spec.with_budget(budget);
    }
    let result = py.detach(|| search::search(&spec)).map_err(err)?;
    let stats = pyo3::types::PyDict::new(py);
    stats.set_item("nodes", result.stats.nodes)?;
    stats.set_item("pruned_overshoot", result.stats.pruned_overshoot)?;
    stats.set_item("pruned_mismatch", result.stats.pruned_mismatch)?;
    stats.set_item("seconds", result.stats.elapsed.as_secs_f64())?;
    stats.set_item("complete", result.stats.complete)?;
    stats.set_item("warnings", result.warnings)?;
    Ok((result.solutions.into_iter().map(PyCompactMatrix).collect(), stats.into_any().unbind()))
}

/// Groups digraphs into isomorphism classes: a list of (member indices, automorphism group order).
#[pyfunction]
fn classify(graphs: Vec<PyDigraph>) -> Vec<(Vec<usize>, BigInt)> {
    let gs: Vec<_> = graphs.into_iter().map(|g| g.0).collect();
    autiso::classify(&gs).into_iter().map(|c| (c.members, c.aut_order.into())).collect()
}

#[pymodule]
fn dsrg_circulant(_py: Python, m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyCycPoly>()?;
    m.add_class::<PyCompactMatrix>()?;
    m.add_class::<PyDigraph>()?;
    m.add_function(wrap_pyfunction!(params_for, m)?)?;
    m.add_function(wrap_pyfunction!(build_cn, m)?)?;
    m.add_function(wrap_pyfunction!(family_compact, m)?)?;
    m.add_function(wrap_pyfunction!(family_digraph, m)?)?;
    m.add_function(wrap_pyfunction!(worked_example, m)?)?;
    m.add_function(wrap_pyfunction!(make_p, m)?)?;
    m.add_function(wrap_pyfunction!(make_q, m)?)?;
    m.add_function(wrap_pyfunction!(make_r, m)?)?;
    m.add_function(wrap_pyfunction!(make_s, m)?)?;
    m.add_function(wrap_pyfunction!(run_search, m)?)?;
    m.add_function(wrap_pyfunction!(classify, m)?)?;
    Ok(())
}
