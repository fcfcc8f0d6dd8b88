"""Smoke test for the pyentcap extension.

Build first:
    cargo build --release -p pyentcap --features extension-module
then run:
    python3 python/smoke_test.py
The script imports an installed `pyentcap` or falls back to the freshly built
shared library under target/release.
"""

import cmath
import importlib.machinery
import importlib.util
import math
import pathlib
import sys

import numpy as np


def load():
    try:
        import pyentcap

        return pyentcap
    except ImportError:
        pass
    root = pathlib.Path(__file__).resolve().parent.parent
    for name in ("libpyentcap.so", "libpyentcap.dylib", "pyentcap.dll"):
        path = root / "target" / "release" / name
        if path.exists():
            loader = importlib.machinery.ExtensionFileLoader("pyentcap", str(path))
            spec = importlib.util.spec_from_file_location("pyentcap", path, loader=loader)
            module = importlib.util.module_from_spec(spec)
            loader.exec_module(module)
            return module
    sys.exit("pyentcap not found; build it with cargo first")


def ud_numpy(a):
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]])
    z = np.diag([1.0 + 0j, -1.0])
    u = np.eye(4, dtype=complex)
    for alpha, p in zip(a, (x, y, z)):
        u = u @ (math.cos(alpha) * np.eye(4) - 1j * math.sin(alpha) * np.kron(p, p))
    return u


def haar(rng, n):
    z = (rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / abs(np.diag(r)))


def main():
    m = load()
    rng = np.random.default_rng(7)

    g = haar(rng, 4)
    d = m.decompose(g.tolist())
    rebuilt = np.array(d.reconstruct())
    assert np.max(abs(rebuilt - g)) < 1e-8, d
    assert np.max(abs(np.array(m.build_ud(d.alpha)) - ud_numpy(d.alpha))) < 1e-12
    print("decompose:", d)

    cnot = np.eye(4, dtype=complex)[[0, 1, 3, 2]]
    cap = m.capability_of_gate(cnot.tolist())
    a, b = (np.array(v) for v in cap.best_input)
    out = cnot @ np.kron(a, b)
    assert abs(2 * abs(out[0] * out[3] - out[1] * out[2]) - 1.0) < 1e-9
    assert abs(cap.c_max - 1.0) < 1e-12 and cap.perfect_entangler
    print("cnot:", cap)

    alpha = (math.pi / 16, math.pi / 32, 0.0)
    c = m.max_concurrence(alpha)
    assert abs(c - math.sin(3 * math.pi / 16)) < 1e-12
    assert abs(m.oracle_max_concurrence(alpha, 24) - c) < 1e-3
    assert abs(m.canonicalize((3 * math.pi / 8, 0.0, 0.0))[0] - math.pi / 8) < 1e-15

    bell = [1 / math.sqrt(2), 0, 0, 1 / math.sqrt(2)]
    assert abs(m.concurrence(bell) - 1.0) < 1e-12
    assert abs(m.measure(bell, 2, 2, "entropy") - 1.0) < 1e-12

    a0 = m.renyi_crossover()
    assert abs(a0 - math.acos(0.2) / 4) < 1e-15
    rows = m.fig1_scan(math.pi / 4, 3)
    assert abs(rows[-1][1] - 0.75) < 1e-12
    value, sa, sb, _, _ = m.optimize_measure((math.pi / 4, 0.0, 0.0), "entropy", 8)
    assert abs(value - 1.0) < 1e-9

    try:
        m.decompose((2 * np.eye(4)).tolist())
    except ValueError as e:
        print("rejects non-unitary:", e)
    else:
        raise AssertionError("non-unitary input accepted")

    print(f"crossover alpha = {a0:.12f} = {a0 / math.pi:.6f} pi")
    print("smoke test passed")


if __name__ == "__main__":
    main()
