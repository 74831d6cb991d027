//! Runs python/smoke_test.py against the bindings in an embedded
//! interpreter, so the module is tested without installing a wheel.

use pyo3::prelude::*;
use pyo3::types::{PyDict, PyModule};
use std::ffi::CString;

const SMOKE: &str = include_str!("../../../python/smoke_test.py");

#[test]
fn python_smoke_script_passes() {
    Python::initialize();
    Python::attach(|py| {
        let module = PyModule::new(py, "sketchlpa").unwrap();
        sketchlpa_py::sketchlpa_module(&module).unwrap();
        py.import("sys")
            .unwrap()
            .getattr("modules")
            .unwrap()
            .set_item("sketchlpa", &module)
            .unwrap();

        let globals = PyDict::new(py);
        globals.set_item("__name__", "smoke").unwrap();
        let code = CString::new(SMOKE).unwrap();
        py.run(&code, Some(&globals), None).unwrap();
        let main = globals.get_item("main").unwrap().unwrap();
        if let Err(e) = main.call0() {
            e.print(py);
            panic!("smoke test failed: {e}");
        }
    });
}
