use std::path::Path;

use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use superjordan as sj;
use sj::envelope::{self, systems, witness, SearchBounds};
use sj::{catalog, classify, iso, peirce, sca};

fn err(e: sj::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn field(spec: &str, ext: bool) -> PyResult<sj::Field> {
    sj::cli::parse_field(spec, ext).map_err(err)
}

/// A finite-dimensional superalgebra given by structure constants.
#[pyclass(name = "SuperAlgebra", module = "superjordan", frozen, skip_from_py_object)]
#[derive(Clone)]
struct PySuperAlgebra {
    inner: sj::SuperAlgebra,
}

impl From<sj::SuperAlgebra> for PySuperAlgebra {
    fn from(inner: sj::SuperAlgebra) -> Self {
        PySuperAlgebra { inner }
    }
}

#[pymethods]
impl PySuperAlgebra {
    #[staticmethod]
    fn catalog(name: &str) -> PyResult<Self> {
        Ok(catalog::get(name).map_err(err)?.algebra.into())
    }

    #[staticmethod]
    #[pyo3(signature = (path, no_complete = false))]
    fn load(path: &str, no_complete: bool) -> PyResult<Self> {
        Ok(sca::load(Path::new(path), no_complete).map_err(err)?.into())
    }

    #[staticmethod]
    fn from_sca(text: &str) -> PyResult<Self> {
        Ok(sca::parse("<string>", text, false).map_err(err)?.into())
    }

    fn to_sca(&self) -> String {
        sca::to_string(&self.inner)
    }

    #[getter]
    fn dim_even(&self) -> usize {
        self.inner.dim_even()
    }

    #[getter]
    fn dim_odd(&self) -> usize {
        self.inner.dim_odd()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    #[getter]
    fn field(&self) -> String {
        self.inner.field().to_string()
    }

    #[pyo3(signature = (spec, ext = false))]
    fn reduce(&self, spec: &str, ext: bool) -> PyResult<Self> {
        Ok(self.inner.reduce(&field(spec, ext)?).map_err(err)?.into())
    }

    fn direct_sum(&self, other: &PySuperAlgebra) -> PyResult<Self> {
        Ok(self.inner.direct_sum(&other.inner).map_err(err)?.into())
    }

    /// Product of two elements written as linear combinations of labels.
    fn multiply(&self, a: &str, b: &str) -> PyResult<String> {
        let x = self.inner.parse_element(a).map_err(err)?;
        let y = self.inner.parse_element(b).map_err(err)?;
        let p = self.inner.multiply(&x, &y).map_err(err)?;
        Ok(self.inner.format_element(&p))
    }

    fn jordan_defect(&self, a: &str, b: &str) -> PyResult<String> {
        let x = self.inner.parse_element(a).map_err(err)?;
        let y = self.inner.parse_element(b).map_err(err)?;
        let d = self.inner.jordan_defect(&x, &y).map_err(err)?;
        Ok(self.inner.format_element(&d))
    }

    fn check<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, PyDict>> {
        let sc = self.inner.check_supercommutativity();
        let sjr = self.inner.check_super_jordan();
        let out = PyDict::new(py);
        out.set_item("supercommutative", sc.holds)?;
        out.set_item("super_jordan", sjr.holds)?;
        let v: Vec<(String, String)> = sjr
            .violations
            .iter()
            .map(|v| (self.inner.format_indices(&v.indices), self.inner.format_element(&v.defect)))
            .collect();
        out.set_item("violations", v)?;
        Ok(out)
    }

    fn is_jordan_ungraded(&self) -> bool {
        self.inner.check_jordan_ungraded().holds
    }

    fn is_associative(&self) -> bool {
        self.inner.is_associative()
    }

    fn unit(&self) -> Option<String> {
        self.inner.find_unit().map(|u| self.inner.format_element(&u))
    }

    /// The isomorphism invariants as a JSON object.
    fn fingerprint(&self) -> String {
        serde_json::to_string(&iso::fingerprint(&self.inner)).expect("serializable")
    }

    fn idempotents(&self) -> PyResult<Vec<String>> {
        let es = if self.inner.field().is_finite() {
            peirce::find_idempotents(&self.inner)
        } else {
            peirce::scan_rational_idempotents(&self.inner)
        }
        .map_err(err)?;
        Ok(es.iter().map(|e| self.inner.format_element(e)).collect())
    }

    /// Bases of the 0, 1/2 and 1 components for an idempotent.
    fn peirce(&self, idempotent: &str) -> PyResult<[Vec<String>; 3]> {
        let e = self.inner.parse_element(idempotent).map_err(err)?;
        let d = peirce::peirce_decompose(&self.inner, &e).map_err(err)?;
        Ok(d.components.map(|c| c.iter().map(|x| self.inner.format_element(x)).collect()))
    }

    fn table(&self) -> String {
        self.inner.render_table()
    }

    fn __repr__(&self) -> String {
        format!(
            "SuperAlgebra(dim={}|{}, field={})",
            self.inner.dim_even(),
            self.inner.dim_odd(),
            self.inner.field()
        )
    }

    fn __eq__(&self, other: &PySuperAlgebra) -> bool {
        self.inner == other.inner
    }
}

/// Catalog names, optionally restricted to one total dimension.
#[pyfunction]
#[pyo3(signature = (dim = None))]
fn catalog_names(dim: Option<usize>) -> PyResult<Vec<String>> {
    match dim {
        Some(d) => Ok(catalog::names_of_dimension(d).map_err(err)?.iter().map(|s| s.to_string()).collect()),
        None => Ok(catalog::all_names()),
    }
}

/// Images of the first basis under a graded isomorphism, if one exists.
#[pyfunction]
fn find_isomorphism(a: &PySuperAlgebra, b: &PySuperAlgebra) -> PyResult<Option<Vec<String>>> {
    let m = iso::find_graded_isomorphism(&a.inner, &b.inner).map_err(err)?;
    Ok(m.map(|m| m.describe()))
}

/// Orbit representatives for a classification template over a finite field.
#[pyfunction]
#[pyo3(signature = (n, m, even, field_spec, ext = false))]
fn classify_type<'py>(
    py: Python<'py>,
    n: usize,
    m: usize,
    even: &str,
    field_spec: &str,
    ext: bool,
) -> PyResult<Vec<Bound<'py, PyDict>>> {
    let t = classify::standard_template(n, m, even).map_err(err)?;
    let f = field(field_spec, false)?;
    let r = py.detach(|| classify::classify(&t, &f, ext)).map_err(err)?;
    r.orbits
        .iter()
        .map(|(o, name)| {
            let d = PyDict::new(py);
            d.set_item("name", name.clone())?;
            d.set_item("size", o.members.len())?;
            d.set_item("representative", PySuperAlgebra::from(o.representative.clone()))?;
            Ok(d)
        })
        .collect()
}

/// Checks a stored special embedding; returns (holds, defect lines).
#[pyfunction]
fn verify_witness(name: &str) -> PyResult<(bool, Vec<String>)> {
    let w = match name.to_ascii_uppercase().as_str() {
        "K3" => witness::k3(),
        "S1_3" | "S3_1" => witness::s3_1_as_printed(),
        "S1_3-FIXED" | "S3_1-FIXED" => witness::s3_1(),
        "S8_3" | "S3_8" => witness::s3_8(),
        _ => return Err(PyValueError::new_err(format!("no witness named {name:?}"))),
    };
    let r = envelope::verify_special_embedding(&w.algebra, &w.images, &w.system).map_err(err)?;
    let lines = r
        .violations
        .iter()
        .map(|(i, j, p)| format!("({}, {}): {}", w.algebra.label(*i), w.algebra.label(*j), w.system.render(p)))
        .collect();
    Ok((r.holds, lines))
}

/// Bounded search for images in a named rewriting system.
#[pyfunction]
#[pyo3(signature = (algebra, system = "m11weyl"))]
fn search_embedding(py: Python<'_>, algebra: &PySuperAlgebra, system: &str) -> PyResult<Option<Vec<String>>> {
    let sys = systems::by_name(system).map_err(err)?;
    let j = algebra.inner.clone();
    let found = py
        .detach(|| envelope::search_embedding(&j, &sys, &SearchBounds::default()))
        .map_err(err)?;
    Ok(found.map(|imgs| imgs.iter().map(|p| sys.render(p)).collect()))
}

#[pymodule]
#[pyo3(name = "superjordan")]
fn superjordan_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PySuperAlgebra>()?;
    m.add_function(wrap_pyfunction!(catalog_names, m)?)?;
    m.add_function(wrap_pyfunction!(find_isomorphism, m)?)?;
    m.add_function(wrap_pyfunction!(classify_type, m)?)?;
    m.add_function(wrap_pyfunction!(verify_witness, m)?)?;
    m.add_function(wrap_pyfunction!(search_embedding, m)?)?;
    Ok(())
}
