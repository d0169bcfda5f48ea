use pyo3::prelude::*;

#[pymodule]
fn diffbound_py(_m: &Bound<'_, PyModule>) -> PyResult<()> {
    Ok(())
}
