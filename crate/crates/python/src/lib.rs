//! Python bindings. Morphisms cross the boundary as wrapper classes or as the
//! same JSON the command line reads and writes.

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use revcomp_core::aux::{AuxMorphism, PInjBase};
use revcomp_core::classical::{FinObj, PartialFn};
use revcomp_core::cli;
use revcomp_core::ext::{pfn_functor, pfn_normalize, ExtEquality, ExtMorphism};
use revcomp_core::pipeline;
use revcomp_core::quantum::{self, CMatrix, C64};

fn err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn matrix(rows: Vec<Vec<C64>>) -> PyResult<CMatrix> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|row| row.len() != c) {
        return Err(err("ragged matrix"));
    }
    CMatrix::new(r, c, rows.into_iter().flatten().collect()).map_err(err)
}

fn nested(m: &CMatrix) -> Vec<Vec<C64>> {
    (0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)]).collect()).collect()
}

/// A partial function between `{0..dom}` and `{0..cod}`.
#[pyclass(name = "PartialFn", module = "revcomp", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyPartialFn(PartialFn);

#[pymethods]
impl PyPartialFn {
    #[new]
    fn new(dom: usize, cod: usize, graph: Vec<(usize, usize)>) -> PyResult<Self> {
        PartialFn::from_graph(FinObj::new(dom), FinObj::new(cod), graph).map(Self).map_err(err)
    }

    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serialisable")
    }

    #[getter]
    fn table(&self) -> Vec<Option<usize>> {
        self.0.table().to_vec()
    }

    fn apply(&self, x: usize) -> Option<usize> {
        self.0.apply(x)
    }

    /// `self ∘ f`
    fn compose(&self, f: &PyPartialFn) -> PyResult<Self> {
        self.0.compose(&f.0).map(Self).map_err(err)
    }

    fn tensor(&self, g: &PyPartialFn) -> Self {
        Self(self.0.tensor(&g.0))
    }

    fn ridm(&self) -> Self {
        Self(self.0.ridm())
    }

    fn is_total(&self) -> bool {
        self.0.is_total()
    }

    fn is_injective(&self) -> bool {
        self.0.is_injective()
    }

    fn bennett(&self) -> PyAuxPInj {
        PyAuxPInj(AuxMorphism::bennett(&self.0))
    }

    /// The partial injection behind `self`, or `None`.
    fn inv(&self) -> Option<Self> {
        pipeline::inv_pfn(&self.0).map(|p| Self(p.into_fn()))
    }

    fn __eq__(&self, other: &PyPartialFn) -> bool {
        self.0 == other.0
    }

    fn __repr__(&self) -> String {
        format!("PartialFn({})", self.to_json())
    }
}

/// A morphism of Aux(PInj): a partial injection with explicit garbage.
#[pyclass(name = "AuxPInj", module = "revcomp", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyAuxPInj(AuxMorphism<PInjBase>);

#[pymethods]
impl PyAuxPInj {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serialisable")
    }

    fn compose(&self, f: &PyAuxPInj) -> PyResult<Self> {
        self.0.compose(&f.0).map(Self).map_err(err)
    }

    fn tensor(&self, g: &PyAuxPInj) -> Self {
        Self(self.0.tensor(&g.0))
    }

    fn normal_form(&self) -> String {
        serde_json::to_string(&self.0.normal_form()).expect("serialisable")
    }

    /// The partial function seen after discarding garbage.
    fn collapse(&self) -> PyPartialFn {
        PyPartialFn(pfn_normalize(&ExtMorphism::new(self.0.clone())))
    }

    fn aux_equiv(&self, other: &PyAuxPInj) -> PyResult<bool> {
        self.0.aux_equiv(&other.0).map(|w| w.is_some()).map_err(err)
    }

    fn ext_equiv(&self, other: &PyAuxPInj) -> PyResult<bool> {
        ExtMorphism::new(self.0.clone()).ext_equiv(&ExtMorphism::new(other.0.clone())).map_err(err)
    }

    #[staticmethod]
    fn of_pfn(f: &PyPartialFn) -> Self {
        Self(pfn_functor(&f.0).into_rep())
    }

    fn __repr__(&self) -> String {
        format!("AuxPInj({})", self.to_json())
    }
}

/// A quantum channel stored as its Choi matrix.
#[pyclass(name = "Channel", module = "revcomp", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PyChannel(quantum::Channel);

#[pymethods]
impl PyChannel {
    #[staticmethod]
    fn from_json(s: &str) -> PyResult<Self> {
        serde_json::from_str(s).map(Self).map_err(err)
    }

    fn to_json(&self) -> String {
        serde_json::to_string(&self.0).expect("serialisable")
    }

    #[staticmethod]
    fn identity(d: usize) -> Self {
        Self(quantum::Channel::identity(d))
    }

    #[staticmethod]
    fn dephasing(d: usize) -> Self {
        Self(quantum::Channel::dephasing(d))
    }

    #[staticmethod]
    fn depolarizing(p: f64) -> Self {
        Self(quantum::Channel::depolarizing(p))
    }

    #[staticmethod]
    fn from_unitary(u: Vec<Vec<C64>>) -> PyResult<Self> {
        let u = quantum::UnitaryM::new(matrix(u)?).map_err(err)?;
        Ok(Self(quantum::Channel::unitary(&u)))
    }

    #[staticmethod]
    fn from_kraus(ks: Vec<Vec<Vec<C64>>>) -> PyResult<Self> {
        let ks = ks.into_iter().map(matrix).collect::<PyResult<Vec<_>>>()?;
        quantum::Channel::from_kraus(&ks).map(Self).map_err(err)
    }

    #[getter]
    fn din(&self) -> usize {
        self.0.din()
    }

    #[getter]
    fn dout(&self) -> usize {
        self.0.dout()
    }

    fn choi(&self) -> Vec<Vec<C64>> {
        nested(self.0.choi())
    }

    fn kraus(&self) -> PyResult<Vec<Vec<Vec<C64>>>> {
        Ok(self.0.kraus().map_err(err)?.iter().map(nested).collect())
    }

    fn choi_rank(&self) -> PyResult<usize> {
        self.0.choi_rank().map_err(err)
    }

    fn purity(&self) -> f64 {
        self.0.choi_purity()
    }

    fn apply(&self, rho: Vec<Vec<C64>>) -> PyResult<Vec<Vec<C64>>> {
        Ok(nested(&self.0.apply(&matrix(rho)?).map_err(err)?))
    }

    /// `self ∘ f`
    fn compose(&self, f: &PyChannel) -> PyResult<Self> {
        self.0.compose(&f.0).map(Self).map_err(err)
    }

    fn tensor(&self, g: &PyChannel) -> PyResult<Self> {
        self.0.tensor(&g.0).map(Self).map_err(err)
    }

    #[pyo3(signature = (other, tol = quantum::EQ_TOL))]
    fn approx_eq(&self, other: &PyChannel, tol: f64) -> bool {
        self.0.approx_eq(&other.0, tol)
    }

    /// Minimal Stinespring isometry and environment dimension.
    fn dilate(&self) -> PyResult<(Vec<Vec<C64>>, usize)> {
        let d = quantum::minimal_stinespring(&self.0).map_err(err)?;
        Ok((nested(d.isometry.matrix()), d.env_dim))
    }

    /// `(unitary, None)` for a reversible channel, else `(None, reason)`.
    fn inv(&self) -> (Option<Vec<Vec<C64>>>, Option<String>) {
        match pipeline::inv_cptp(&self.0) {
            Ok(u) => (Some(nested(u.rep().matrix())), None),
            Err(r) => (None, Some(r.to_string())),
        }
    }

    fn __repr__(&self) -> String {
        format!("Channel(din={}, dout={})", self.0.din(), self.0.dout())
    }
}

/// Channel of `u` read with `anc` ancilla inputs and an environment factor of dimension `env`.
#[pyfunction]
#[pyo3(signature = (u, anc = 0, env = 1))]
fn channel_of_unitary(u: Vec<Vec<C64>>, anc: usize, env: usize) -> PyResult<PyChannel> {
    let u = quantum::UnitaryM::new(matrix(u)?).map_err(err)?;
    pipeline::unitary_to_channel(&u, anc, env).map(PyChannel).map_err(err)
}

/// Complete an isometry to a unitary; returns the unitary and the ancilla dimension.
#[pyfunction]
fn complete_unitary(v: Vec<Vec<C64>>) -> PyResult<(Vec<Vec<C64>>, usize)> {
    let v = quantum::IsometryM::new(matrix(v)?).map_err(err)?;
    let inp = pipeline::isometry_to_inp(&v);
    Ok((nested(inp.unitary().matrix()), inp.anc_dim()))
}

/// Run a command-line invocation in-process; returns the exit code and the report JSON.
#[pyfunction]
fn run(args: Vec<String>) -> PyResult<(i32, String)> {
    use clap::Parser;
    let argv = std::iter::once("revcomp".to_string()).chain(args);
    let cmd = cli::Command::try_parse_from(argv).map_err(err)?;
    match cli::run(&cmd) {
        Ok(report) => Ok((report.status as i32, report.to_json())),
        Err(e) => Err(err(e)),
    }
}

#[pymodule]
fn revcomp(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyPartialFn>()?;
    m.add_class::<PyAuxPInj>()?;
    m.add_class::<PyChannel>()?;
    m.add_function(wrap_pyfunction!(channel_of_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(complete_unitary, m)?)?;
    m.add_function(wrap_pyfunction!(run, m)?)?;
    Ok(())
}
