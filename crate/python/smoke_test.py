"""Smoke test for the pybiflab extension.

Run after `pip install -e crates/python --no-build-isolation`, or directly: when the module is
not installed it is built with cargo and loaded from the target directory.
"""

import importlib
import math
import os
import shutil
import subprocess
import sys
import tempfile

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def load():
    try:
        return importlib.import_module("pybiflab")
    except ImportError:
        pass
    subprocess.run(
        ["cargo", "build", "--release", "-p", "biflab-python", "--features", "extension-module"],
        cwd=ROOT,
        check=True,
    )
    built = os.path.join(ROOT, "target", "release", "libpybiflab.so")
    dest = tempfile.mkdtemp()
    shutil.copy(built, os.path.join(dest, "pybiflab.so"))
    sys.path.insert(0, dest)
    return importlib.import_module("pybiflab")


bl = load()


def test_map_and_inverse():
    f = bl.CubicHenonMap(1, 0.7, -0.5)
    p = (0.3, -0.2)
    q = f.apply(p)
    assert q[0] == p[1]
    back = f.invert(q)
    assert abs(back[0] - p[0]) < 1e-14 and abs(back[1] - p[1]) < 1e-14
    d = f.differential(p)
    assert abs(d[0][0] * d[1][1] - d[0][1] * d[1][0] - 1.0) < 1e-14


def test_fixed_points_on_diagonal():
    for orbit in bl.CubicHenonMap(1, 0.0, 0.0).fixed_points():
        x, y = orbit.points[0]
        assert x == y
        assert orbit.period == 1


def test_period_doubling_at_minus_two():
    events, warnings = bl.scan(1, "m2", 0.0, -3.0, -1.0, 1, steps=41)
    assert not warnings
    assert any(kind == "period-doubling" and abs(v + 2.0) < 1e-8 for v, kind, _ in events)


def test_resonance_degeneracies():
    assert bl.resonance(-1, 1.0 / 3.0)["degeneracy"] == "AEqualsOne"
    assert bl.resonance(1, -1.0 / 3.0)["degeneracy"] == "B03Zero"


def test_curves_and_flow():
    m1 = bl.curve_m1("Lplus", -1.0, nu=1)
    assert abs(m1[1] - 2.0) < 1e-14 and abs(m1[0] + 2.0) < 1e-14
    eq = bl.flow_equilibria("eq11", 0.1, 0.01, b1=-1.0)
    kinds = [k for _, _, k in eq]
    assert kinds.count("saddle") == 4 and kinds.count("center") == 5


def test_exact_rescaling():
    assert bl.rescale_error(0.5, 0.0, 1.0, 1.0, 1.0, 1.0, 10, 0.3, -0.5) < 1e-12


def test_portrait_bounded_island():
    orbits = bl.portrait(1, 0.7, -0.5, [(0.3, 0.3), (5.0, 5.0)], iterations=500)
    assert len(orbits[0]) == 500
    assert len(orbits[1]) < 500
    assert all(math.hypot(x, y) < 10.0 for x, y in orbits[0])


def test_bad_sign_raises():
    try:
        bl.CubicHenonMap(2, 0.0, 0.0)
    except ValueError:
        return
    raise AssertionError("nu = 2 accepted")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_") and callable(fn):
            fn()
            print(f"ok {name}")
