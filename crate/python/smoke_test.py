"""Smoke test for the pyloopfact extension module.

Build and install first:

    pip install --no-build-isolation -e crates/py

then run ``python3 python/smoke_test.py`` from the repository root.
"""

import json
import math
import pathlib
import sys

import pyloopfact as lf

ROOT = pathlib.Path(__file__).resolve().parent.parent


def coeff(series, n):
    if not series["lo"] <= n <= series["hi"]:
        return 0j
    re, im = series["coeffs"][n - series["lo"]]
    return complex(re, im)


def max_coord_error(a, b):
    err = 0.0
    for key in ("eta", "zeta", "chi_plus"):
        for x, y in zip(a[key], b[key]):
            err = max(err, abs(complex(*x) - complex(*y)))
    d = (a["chi0_im"] - b["chi0_im"]) % (2 * math.pi)
    return max(err, min(d, 2 * math.pi - d))


def check_single_factor():
    coords = {"eta": [[0, 0]], "zeta": [[0.5, 0]], "chi0_im": 0.0, "chi_plus": [[0, 0]]}
    t = lf.triangular(lf.forward(coords), 10)
    assert abs(t["a0"] - math.sqrt(1.25)) < 1e-12
    assert abs(coeff(t["l"]["entries"][0][1], -1) - 0.5) < 1e-12
    assert abs(coeff(t["u"]["entries"][1][0], 1) + 0.5) < 1e-12
    assert lf.xi_coefficient([0.5], 1) == -0.5


def check_round_trip():
    coords = {
        "eta": [[0.3, -0.1], [0.2, 0.1], [0.0, 0.05]],
        "zeta": [[-0.4, 0.2], [0.1, 0.1]],
        "chi0_im": 0.7,
        "chi_plus": [[0.2, 0.0], [0.0, -0.1]],
    }
    out = lf.solve(lf.forward(coords), 2)
    assert out["diagnostics"]["unitary"]
    err = max_coord_error(coords, out)
    assert err < 1e-8, err


def check_errors():
    swap = json.loads((ROOT / "fixtures" / "swap_loop.json").read_text())
    try:
        lf.triangular(swap, 4)
    except lf.NoTriangularFactorization:
        pass
    else:
        raise AssertionError("expected NoTriangularFactorization")
    lower = json.loads((ROOT / "fixtures" / "lower_stratum_loop.json").read_text())
    try:
        lf.birkhoff(lower, 6)
    except lf.NotTopStratum:
        pass
    else:
        raise AssertionError("expected NotTopStratum")


def check_oracle():
    stock = json.loads((ROOT / "fixtures" / "oracle" / "display.json").read_text())
    report = lf.verify(stock)
    assert all(c["ok"] for c in report["checks"])
    bad = json.loads((ROOT / "fixtures" / "oracle_negative" / "drop_j_le_prev_i.json").read_text())
    try:
        lf.verify(bad)
    except lf.OracleMismatch:
        pass
    else:
        raise AssertionError("negative control passed")


def check_report():
    a = lf.roundtrip(seed=1, trials=3, degree=4)
    b = lf.roundtrip(seed=1, trials=3, degree=4)
    assert a == b
    assert a["summary"]["error_p100"] < 1e-8


def main():
    for check in (check_single_factor, check_round_trip, check_errors, check_oracle, check_report):
        check()
        print(f"ok  {check.__name__}")
    print(f"pyloopfact {lf.__version__}: all smoke checks passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
