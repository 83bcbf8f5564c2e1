//! Python bindings for fexlab.

use std::sync::Arc;

use fexlab::extcat::{baer_sum as baer, NExtension, NExtensionJson};
use fexlab::homology::{chain_complex, AbGroup};
use fexlab::modcat::{hom_count, Module as RModule, Ring};
use fexlab::poset::Poset as RPoset;
use fexlab::simplicial::{SimplicialJson, SimplicialSet as RSet};
use fexlab::verify::{run_all, VerifyConfig};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn err<E: std::fmt::Display>(e: E) -> PyErr {
    PyValueError::new_err(e.to_string())
}

const BUDGET: u64 = fexlab::fex::DEFAULT_BUDGET;

#[pyclass(frozen, name = "Poset")]
struct Poset(Arc<RPoset>);

#[pymethods]
impl Poset {
    fn __len__(&self) -> usize {
        self.0.len()
    }

    #[getter]
    fn elements(&self) -> Vec<String> {
        self.0.elements().to_vec()
    }

    /// Generating arrows as (source, target) label pairs.
    #[getter]
    fn generators(&self) -> Vec<(String, String)> {
        self.0.generator_labels()
    }

    fn leq(&self, a: &str, b: &str) -> PyResult<bool> {
        self.0
            .leq_labels(a, b)
            .ok_or_else(|| err(format!("unknown label in ({a}, {b})")))
    }

    fn nerve(&self) -> SimplicialSet {
        SimplicialSet(Arc::new(RSet::nerve(&self.0)))
    }

    fn to_dot(&self) -> String {
        self.0.to_dot()
    }

    fn __repr__(&self) -> String {
        format!("Poset({} elements)", self.0.len())
    }
}

#[pyclass(frozen, name = "SimplicialSet")]
struct SimplicialSet(Arc<RSet>);

#[pymethods]
impl SimplicialSet {
    #[staticmethod]
    fn simplex(m: usize) -> Self {
        SimplicialSet(Arc::new(RSet::standard_simplex(m)))
    }

    #[staticmethod]
    fn boundary(m: usize) -> Self {
        SimplicialSet(Arc::new(RSet::boundary(m)))
    }

    #[staticmethod]
    fn horn(m: usize, k: usize) -> PyResult<Self> {
        Ok(SimplicialSet(Arc::new(RSet::horn(m, k).map_err(err)?)))
    }

    #[staticmethod]
    fn circle() -> Self {
        SimplicialSet(Arc::new(RSet::quotient_circle()))
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: SimplicialJson = serde_json::from_str(text).map_err(err)?;
        Ok(SimplicialSet(Arc::new(RSet::from_json(&j).map_err(err)?)))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(err)
    }

    /// Nondegenerate simplices per dimension.
    fn counts(&self) -> Vec<usize> {
        self.0.counts()
    }

    /// Integral homology as (rank, torsion) per determined degree.
    fn homology(&self) -> Vec<(usize, Vec<u64>)> {
        chain_complex(&self.0)
            .all_homology()
            .into_iter()
            .flatten()
            .map(|g| (g.rank, g.torsion))
            .collect()
    }

    /// Nondegenerate simplices of fEx X per level up to m_max.
    fn fex_counts(&self, m_max: usize) -> PyResult<Vec<usize>> {
        Ok(fexlab::fex::fex_truncated(&self.0, m_max, BUDGET)
            .map_err(err)?
            .set
            .counts())
    }

    fn __repr__(&self) -> String {
        format!("SimplicialSet(counts={:?})", self.0.counts())
    }
}

#[pyclass(frozen, name = "Module")]
struct Module(RModule);

#[pymethods]
impl Module {
    #[new]
    fn new(ring: &str, invariants: Vec<u64>) -> PyResult<Self> {
        Ok(Module(
            RModule::new(Ring::parse(ring).map_err(err)?, invariants).map_err(err)?,
        ))
    }

    #[getter]
    fn ring(&self) -> String {
        self.0.ring.to_string()
    }

    #[getter]
    fn invariants(&self) -> Vec<u64> {
        self.0.inv.clone()
    }

    fn order(&self) -> u128 {
        self.0.order()
    }

    fn hom_count(&self, other: &Module) -> u128 {
        hom_count(&self.0, &other.0)
    }

    fn __repr__(&self) -> String {
        format!("Module({}, {})", self.0.ring, self.0)
    }
}

/// An n-extension A -> M_1 -> ... -> M_n -> B.
#[pyclass(frozen, name = "Extension")]
struct Extension(NExtension);

#[pymethods]
impl Extension {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let j: NExtensionJson = serde_json::from_str(text).map_err(err)?;
        Ok(Extension(NExtension::from_json(&j).map_err(err)?))
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.0.to_json()).map_err(err)
    }

    #[getter]
    fn n(&self) -> usize {
        self.0.n()
    }

    #[getter]
    fn a(&self) -> Module {
        Module(self.0.a().clone())
    }

    #[getter]
    fn b(&self) -> Module {
        Module(self.0.b().clone())
    }

    /// Class in Ext^n(B, A), in resolution coordinates.
    fn cocycle(&self) -> PyResult<Vec<i64>> {
        let g = fexlab::extcat::resolution::ext_group(self.0.b(), self.0.a(), self.0.n())
            .map_err(err)?;
        fexlab::extcat::resolution::cocycle_of_extension(&self.0, &g).map_err(err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Extension(n={}, A={}, B={})",
            self.0.n(),
            self.0.a(),
            self.0.b()
        )
    }
}

fn cyclic_ends(ring: &str, a: Vec<u64>, b: Vec<u64>) -> PyResult<(RModule, RModule)> {
    let r = Ring::parse(ring).map_err(err)?;
    Ok((
        RModule::new(r, a).map_err(err)?,
        RModule::new(r, b).map_err(err)?,
    ))
}

#[pyfunction]
fn fsd(m: usize) -> PyResult<Poset> {
    Ok(Poset(
        fexlab::subdivision::fsd(m).map_err(err)?.poset.clone(),
    ))
}

#[pyfunction]
fn fsd_horn(m: usize, k: usize) -> PyResult<Poset> {
    Ok(Poset(Arc::new(
        fexlab::subdivision::fsd_horn(m, k).map_err(err)?,
    )))
}

/// Number of cosimplicial identities checked and the failures.
#[pyfunction]
fn check_cosimplicial(m_max: usize) -> PyResult<(usize, Vec<String>)> {
    let r = fexlab::subdivision::check_cosimplicial_identities(m_max).map_err(err)?;
    Ok((r.checked, r.failures))
}

#[pyfunction]
#[pyo3(signature = (ring, a, b, n, cap = None))]
fn pi0<'py>(
    py: Python<'py>,
    ring: &str,
    a: Vec<u64>,
    b: Vec<u64>,
    n: usize,
    cap: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let (am, bm) = cyclic_ends(ring, a, b)?;
    let r = fexlab::extcat::pi0::pi0(&am, &bm, n, cap, BUDGET).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("classes", r.count())?;
    d.set_item("group", AbGroup::from_cyclic(&r.ext.inv).to_string())?;
    d.set_item("bijective", r.bijective)?;
    d.set_item("stable", r.stable)?;
    Ok(d)
}

#[pyfunction]
fn ext_resolution(ring: &str, a: Vec<u64>, b: Vec<u64>, n: usize) -> PyResult<String> {
    let (am, bm) = cyclic_ends(ring, a, b)?;
    Ok(fexlab::extcat::resolution::ext_resolution(&bm, &am, n)
        .map_err(err)?
        .to_string())
}

#[pyfunction]
#[pyo3(signature = (ring, a, b, n, cap = None))]
fn higher_ext<'py>(
    py: Python<'py>,
    ring: &str,
    a: Vec<u64>,
    b: Vec<u64>,
    n: usize,
    cap: Option<u64>,
) -> PyResult<Bound<'py, PyDict>> {
    let (am, bm) = cyclic_ends(ring, a, b)?;
    let h = fexlab::coend::higher_ext(&bm, &am, n, cap, BUDGET).map_err(err)?;
    let d = PyDict::new(py);
    d.set_item("group", h.group.to_string())?;
    d.set_item("invariants", h.group.torsion.clone())?;
    d.set_item("cap", h.cap)?;
    d.set_item("stable", h.stable)?;
    Ok(d)
}

#[pyfunction]
fn baer_sum(x: &Extension, y: &Extension) -> PyResult<Extension> {
    if x.0.n() != 1 || y.0.n() != 1 {
        return Err(err("Baer sums are defined here for 1-extensions"));
    }
    Ok(Extension(NExtension::from_ses(
        &baer(&x.0.station(1), &y.0.station(1)).map_err(err)?,
    )))
}

/// The ET4 octahedron for xi1: A -> B -> D and xi2: B -> C -> F; returns the third sequence and the three checks.
#[pyfunction]
fn et4(xi1: &Extension, xi2: &Extension) -> PyResult<(Extension, Extension, [bool; 3])> {
    let mut ext = fexlab::extcat::resolution::Ext1Cache::default();
    let w =
        fexlab::extri::et4_witness(&mut ext, &xi1.0.station(1), &xi2.0.station(1)).map_err(err)?;
    Ok((
        Extension(NExtension::from_ses(&w.third)),
        Extension(NExtension::from_ses(&w.bottom)),
        [w.et4_1, w.et4_2, w.et4_3],
    ))
}

/// Runs the acceptance checks; returns (id, title, pass, detail) per criterion.
#[pyfunction]
#[pyo3(signature = (quick = true, seed = 0))]
fn verify(py: Python<'_>, quick: bool, seed: u64) -> Vec<(usize, String, bool, String)> {
    let cfg = VerifyConfig {
        seed,
        budget: BUDGET,
        quick,
    };
    py.detach(|| run_all(&cfg))
        .into_iter()
        .map(|c| (c.id, c.title, c.pass, c.detail))
        .collect()
}

#[pymodule]
fn fexlab_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Poset>()?;
    m.add_class::<SimplicialSet>()?;
    m.add_class::<Module>()?;
    m.add_class::<Extension>()?;
    m.add_function(wrap_pyfunction!(fsd, m)?)?;
    m.add_function(wrap_pyfunction!(fsd_horn, m)?)?;
    m.add_function(wrap_pyfunction!(check_cosimplicial, m)?)?;
    m.add_function(wrap_pyfunction!(pi0, m)?)?;
    m.add_function(wrap_pyfunction!(ext_resolution, m)?)?;
    m.add_function(wrap_pyfunction!(higher_ext, m)?)?;
    m.add_function(wrap_pyfunction!(baer_sum, m)?)?;
    m.add_function(wrap_pyfunction!(et4, m)?)?;
    m.add_function(wrap_pyfunction!(verify, m)?)?;
    Ok(())
}
