/*! Python bindings for the fibred workbench: parse documents, run the
constructions and the property deciders, and collect JSON reports. */

use std::sync::Arc;

use pyo3::exceptions::{PyKeyError, PyValueError};
use pyo3::prelude::*;

use fibred::format::{self, Entity};

/// A document of named blocks: categories, functors, fibrations and
/// friends.
#[pyclass(name = "Document")]
struct PyDocument {
    doc: format::Document,
}

#[pymethods]
impl PyDocument {
    /// Parse the textual format; every block is validated on load.
    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        format::parse(text)
            .map(|doc| PyDocument { doc })
            .map_err(|e| PyValueError::new_err(e.to_string()))
    }

    /// The builtin example zoo.
    #[staticmethod]
    fn corpus() -> Self {
        PyDocument { doc: fibred::corpus::documents() }
    }

    /// (name, kind) pairs in document order.
    fn names(&self) -> Vec<(String, String)> {
        self.doc
            .order
            .iter()
            .map(|n| (n.clone(), self.doc.entities[n].kind().to_string()))
            .collect()
    }

    /// Canonical textual form.
    fn print(&self) -> String {
        format::print(&self.doc)
    }

    /// Decide a property of a named fibration; returns the JSON report.
    #[pyo3(signature = (property, name, at=None, cap=1_000_000))]
    fn check(&self, property: &str, name: &str, at: Option<usize>, cap: usize) -> PyResult<String> {
        let fib = self
            .doc
            .fibration(name)
            .ok_or_else(|| PyKeyError::new_err(format!("no fibration named `{name}`")))?;
        fibred::driver::check_property(fib, property, at, cap)
            .map(|r| r.to_json())
            .map_err(PyValueError::new_err)
    }

    /// Run a construction over named blocks; returns the JSON report whose
    /// last construction witness is the resulting document text.
    #[pyo3(signature = (kind, names, at=None, cap=1_000_000))]
    fn construct(&self, kind: &str, names: Vec<String>, at: Option<usize>, cap: usize) -> PyResult<String> {
        fibred::driver::run_construction(&self.doc, kind, &names, at, cap)
            .map(|r| r.to_json())
            .map_err(PyValueError::new_err)
    }

    /// Classify a named adjunction through both characterisation routes.
    fn classify_gm(&self, name: &str) -> PyResult<String> {
        fibred::driver::classify_gm(&self.doc, name)
            .map(|(r, _)| r.to_json())
            .map_err(PyValueError::new_err)
    }

    /// Moens reconstruction of a named fibration.
    #[pyo3(signature = (name, general=false))]
    fn moens(&self, name: &str, general: bool) -> PyResult<String> {
        fibred::driver::run_moens(&self.doc, name, general).map(|r| r.to_json()).map_err(PyValueError::new_err)
    }

    /// Number of objects and arrows of a named category.
    fn category_size(&self, name: &str) -> PyResult<(usize, usize)> {
        let c = self
            .doc
            .category(name)
            .ok_or_else(|| PyKeyError::new_err(format!("no category named `{name}`")))?;
        Ok((c.n_objects(), c.n_arrows()))
    }

    /// Insert the opposite of a named category under a new name.
    fn add_opposite(&mut self, name: &str, new_name: &str) -> PyResult<()> {
        let c = self
            .doc
            .category(name)
            .ok_or_else(|| PyKeyError::new_err(format!("no category named `{name}`")))?
            .clone();
        self.doc.insert(new_name, Entity::Category(Arc::new(fibred::cat::opposite_category(&c))));
        Ok(())
    }
}

/// Run the corpus verification sweep; returns (json_report, all_ok).
#[pyfunction]
#[pyo3(signature = (cap=1_000_000))]
fn sweep(cap: usize) -> (String, bool) {
    let (report, ok) = fibred::corpus::sweep(cap);
    (report.to_json(), ok)
}

/// Names of the acceptance criteria, in order.
#[pyfunction]
fn criteria() -> Vec<String> {
    fibred::corpus::CRITERIA.iter().map(|s| s.to_string()).collect()
}

#[pymodule]
fn fibred_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDocument>()?;
    m.add_function(wrap_pyfunction!(sweep, m)?)?;
    m.add_function(wrap_pyfunction!(criteria, m)?)?;
    Ok(())
}

#[cfg(all(test, not(feature = "extension-module")))]
mod tests {
    use pyo3::prelude::*;
    use pyo3::types::PyDict;

    use crate::fibred_py;

    #[test]
    fn bindings_drive_the_corpus_in_process() {
        pyo3::append_to_inittab!(fibred_py);
        Python::initialize();
        Python::attach(|py| {
            let code = pyo3::ffi::c_str!(
                r#"
import json
import fibred_py

doc = fibred_py.Document.corpus()
names = dict(doc.names())
assert names["pmod"] == "fibration"
reparsed = fibred_py.Document.parse(doc.print())
assert reparsed.print() == doc.print()
verdict = json.loads(doc.check("fibration", "pmod"))
assert verdict["checks"][0]["verdict"]["bifibration"] is True
report, ok = fibred_py.sweep()
assert ok
result = len(fibred_py.criteria())
"#
            );
            let locals = PyDict::new(py);
            py.run(code, None, Some(&locals)).expect("embedded smoke script runs");
            let n: usize = locals.get_item("result").unwrap().unwrap().extract().unwrap();
            assert_eq!(n, 12);
        });
    }
}
