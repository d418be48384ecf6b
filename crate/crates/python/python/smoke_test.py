"""Smoke test for the pyrtau extension module.

Imports an installed ``pyrtau`` if there is one. Otherwise it loads the shared
library from ``PYRTAU_LIB`` or from ``target/release/libpyrtau.so``, built with

    cargo build -p pyrtau --release --features extension-module
"""

import importlib.util
import json
import os
import pathlib
import shutil
import sys
import tempfile


def load():
    try:
        import pyrtau

        return pyrtau
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parents[3]
    lib = pathlib.Path(os.environ.get("PYRTAU_LIB", root / "target" / "release" / "libpyrtau.so"))
    if not lib.exists():
        sys.exit(f"extension not found at {lib}; build it first (see module docstring)")
    tmp = pathlib.Path(tempfile.mkdtemp())
    target = tmp / "pyrtau.so"
    shutil.copy(lib, target)
    spec = importlib.util.spec_from_file_location("pyrtau", target)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def main():
    rt = load()

    # (x^2+1) y'''' + (1-3x) y''' + 3 y''
    op = rt.Operator.from_terms([(4, ["1", "0", "1"]), (3, ["1", "-3"]), (2, ["3"])])
    assert (op.order, op.height, op.cutoff) == (4, -2, 5)
    assert op.omega == [0, 1, 3, 5]

    ech = op.echelon()
    assert ech.inaccessible == [3]
    assert ech.zero_rows == 3

    basis = op.canonical(6)
    assert basis.indices == [0, 1, 2, 4, 5, 6]
    assert basis.r(4) == ["0/1", "0/1", "0/1", "4/3"]
    assert basis.class_of(1) == "derived_singular"
    assert basis.has_derived_singular()
    (s, coeffs), = basis.stmc(6)
    assert s == 3 and coeffs[3:7] == ["1/1", "-4/3", "-5/3", "10/3"]

    # y'' = 0, y(0) = 0, y(1) = 1
    d2 = rt.Operator([["0"], ["0"], ["1"]])
    problem = rt.TauProblem(d2, [], [([("0", 0, "1")], "0"), ([("1", 0, "1")], "1")])
    sol = problem.solve(2)
    assert sol.y == ["0/1", "1/1"] and sol.taus == [] and sol.exact

    text = problem.to_text()
    assert rt.TauProblem.from_text(text).to_text() == text

    # y' - y = 0, y(0) = 1 on [0, 1]
    exp_growth = rt.TauProblem(
        rt.Operator([["-1"], ["1"]]), [], [([("0", 0, "1")], "1")], interval=("0", "1")
    )
    sol = exp_growth.solve(5)
    assert sol.taus == ["-1/36689"]
    assert abs(float(sol.y_approx[1]) - 1.0) < 1e-3

    try:
        problem.solve(0)
    except rt.RtauError as e:
        assert "order must exceed N=" in str(e)
    else:
        raise AssertionError("expected RtauError")

    try:
        rt.TauProblem.from_text("[operator]\nd2 = 1, x\n")
    except rt.ParseError as e:
        assert "line 2" in str(e)
    else:
        raise AssertionError("expected ParseError")

    report = json.loads(rt.report_json("analyze", "[operator]\nd4 = 1\nd3 = 0, 1\nd2 = -3\n"))
    assert report["cutoff"] == 5 and report["inaccessible"] == [3]

    assert rt.classical_poly("chebyshev", 2) == ["-1/1", "0/1", "2/1"]
    print("pyrtau smoke test passed")


if __name__ == "__main__":
    main()
