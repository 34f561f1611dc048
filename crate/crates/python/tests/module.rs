use pyo3::prelude::*;
use pyo3::types::PyList;

use pydistinctq::pydistinctq;

fn with_module(f: impl for<'py> FnOnce(&Bound<'py, PyModule>) -> PyResult<()>) {
    pyo3::append_to_inittab!(pydistinctq);
    Python::initialize();
    Python::attach(|py| {
        let m = py.import("pydistinctq").unwrap();
        f(&m).unwrap();
    });
}

#[test]
fn module_round_trip() {
    with_module(|m| {
        let report: String = m.getattr("bound_report")?.call1(("Ch",))?.extract()?;
        let report: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert_eq!(report["q_lower"]["value"], 4);

        let q: usize = m.getattr("q_tree_complement")?.call1(("Ch",))?.extract()?;
        assert_eq!(q, 4);

        let (q, values): (usize, Vec<f64>) = m.getattr("spectrum")?.call1((vec![vec![0.0, 1.0], vec![1.0, 0.0]],))?.extract()?;
        assert_eq!(q, 2);
        assert!((values[1] - 1.0).abs() < 1e-12);

        let failures = m.getattr("bank_failures")?.call0()?;
        assert_eq!(failures.cast::<PyList>()?.len(), 0);

        let err = m.getattr("verdict")?.call1(("not graph6",)).unwrap_err();
        assert!(err.is_instance_of::<pyo3::exceptions::PyValueError>(m.py()));
        Ok(())
    });
}
