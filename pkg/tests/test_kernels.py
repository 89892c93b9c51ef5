"""Backend equivalence: compiled kernel, numpy fallback, scalar loops."""

import numpy as np
import pytest

from sarsim import kernels
from sarsim.rng import StreamKey
from sarsim.sarima import SarimaSpec

import reference


def make_inputs(seed, B=6, n=400, w=30):
    g = StreamKey(seed, (0,)).stream()
    y = np.zeros((B, n))
    y[:, :w] = g.standard_normal((B, w))
    eps = g.standard_normal((B, n))
    spec = SarimaSpec(p=3, q=2, P=1, Q=1, s=12, d_frac=0.0, D=0,
                      ar=[0.4, -0.2, 0.1], ma=[0.5, -0.1], sar=[0.08],
                      sma=[0.05])
    return y, eps, spec, w


def run(backend, y, eps, spec, w, clip=1e12):
    work = y.copy()
    diverged = kernels.recursion(work, eps, spec.ar, spec.ma, spec.sar,
                                 spec.sma, spec.s, w, clip, backend=backend)
    return work, diverged


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="extension not built")
def test_compiled_and_python_backends_bit_identical():
    y, eps, spec, w = make_inputs(101)
    out_c, div_c = run("compiled", y, eps, spec, w)
    out_p, div_p = run("python", y, eps, spec, w)
    assert div_c == div_p == False  # noqa: E712
    assert np.array_equal(out_c, out_p)


def test_python_backend_matches_scalar_loops():
    y, eps, spec, w = make_inputs(102)
    out_p, diverged = run("python", y, eps, spec, w)
    assert not diverged
    oracle = reference.scalar_recursion(y[:, :w], eps, spec)
    assert np.array_equal(out_p, oracle)


@pytest.mark.skipif(not kernels.HAVE_COMPILED, reason="extension not built")
def test_compiled_backend_matches_scalar_loops():
    y, eps, spec, w = make_inputs(103)
    out_c, diverged = run("compiled", y, eps, spec, w)
    assert not diverged
    oracle = reference.scalar_recursion(y[:, :w], eps, spec)
    assert np.array_equal(out_c, oracle)


def test_divergence_flag_parity():
    g = StreamKey(104, (0,)).stream()
    B, n, w = 4, 300, 5
    y = np.zeros((B, n))
    y[:, :w] = g.standard_normal((B, w))
    eps = g.standard_normal((B, n))
    # An explosive root: |pole| = 1.2.
    spec = SarimaSpec(p=1, q=0, P=0, Q=0, s=0, d_frac=0.0, D=0, ar=[1.2])
    flags = []
    for backend in (["compiled"] if kernels.HAVE_COMPILED else []) + ["python"]:
        _, diverged = run(backend, y, eps, spec, w, clip=1e6)
        flags.append(diverged)
    assert all(flags)


def test_clip_threshold_trips():
    y = np.zeros((1, 50))
    y[0, 0] = 5.0
    eps = np.zeros((1, 50))
    spec = SarimaSpec(p=1, q=0, P=0, Q=0, s=0, d_frac=0.0, D=0, ar=[1.0])
    _, diverged = run("python", y, eps, spec, 1, clip=4.0)
    assert diverged


def test_rejects_noncontiguous_target():
    y, eps, spec, w = make_inputs(105)
    with pytest.raises(ValueError):
        kernels.recursion(y[:, ::2], eps, spec.ar, spec.ma, spec.sar,
                          spec.sma, spec.s, w, 1e12)


def test_active_backend_env_override(monkeypatch):
    monkeypatch.setenv("SARSIM_PURE_PYTHON", "1")
    assert kernels.active_backend() == "python"
    monkeypatch.delenv("SARSIM_PURE_PYTHON")
    if kernels.HAVE_COMPILED:
        assert kernels.active_backend() == "compiled"
