use pyo3::prelude::*;
use pyo3::types::PyDict;

use pyloopfact::pyloopfact;

// The interpreter can be initialized once per process, so everything runs
// in one test.
#[test]
fn module_from_an_embedded_interpreter() {
    pyo3::append_to_inittab!(pyloopfact);
    Python::initialize();
    Python::attach(|py| -> PyResult<()> {
        let lf = py.import("pyloopfact")?;
        let ns = PyDict::new(py);
        ns.set_item("lf", &lf)?;
        py.run(
            cr#"
coords = {"eta": [[0, 0]], "zeta": [[0.5, 0]], "chi0_im": 0.0, "chi_plus": [[0, 0]]}
g = lf.forward(coords)
t = lf.triangular(g, 10)
assert abs(t["a0"] - 1.25 ** 0.5) < 1e-12, t["a0"]
out = lf.solve(g, 1)
assert abs(complex(*out["zeta"][0]) - 0.5) < 1e-12
assert out["diagnostics"]["unitary"]
assert lf.xi_coefficient([0.5], 1) == -0.5
bad = {"mutation": "drop_j_le_prev_i",
       "points": [{"side": "zeta", "values": ["1", "1", "1"], "n_max": 3}]}
try:
    lf.verify(bad)
    raise AssertionError("negative control passed")
except lf.OracleMismatch:
    pass
assert not all(c["ok"] for c in lf.verify(bad, strict=False)["checks"])
swap = {"window": [0, 0], "entries": [
    [{"lo": 0, "hi": 0, "coeffs": [[0, 0]]}, {"lo": 0, "hi": 0, "coeffs": [[1, 0]]}],
    [{"lo": 0, "hi": 0, "coeffs": [[-1, 0]]}, {"lo": 0, "hi": 0, "coeffs": [[0, 0]]}]]}
try:
    lf.triangular(swap, 4)
    raise AssertionError("expected a failure")
except lf.NoTriangularFactorization:
    pass
try:
    lf.solve({"eta": 1}, 2)
    raise AssertionError("expected a failure")
except ValueError:
    pass
r = lf.roundtrip(2, 2, 3)
assert r == lf.roundtrip(2, 2, 3)
"#,
            Some(&ns),
            None,
        )
    })
    .unwrap();
}
