"""The compiled kernels and the pure-Python fallback must agree."""
import numpy as np
import pytest

from conftest import random_symmetric
from rotalign import backend, batch
from rotalign import _pykernels as pyk

compiled = pytest.importorskip("rotalign._kernels")


@pytest.mark.parametrize("kind", batch.KINDS)
@pytest.mark.parametrize("svd_only", [False, True])
def test_solve_batch_agrees(kind, svd_only):
    ms = batch.generate(300, 11, kind)
    a = compiled.solve_batch(ms, svd_only=svd_only, cross_check=True)
    b = pyk.solve_batch(ms, svd_only=svd_only, cross_check=True)
    for k in ("iterations", "status", "fell_back", "maximal"):
        assert np.array_equal(a[k], b[k]), k
    assert np.allclose(a["trace"], b["trace"], rtol=1e-12, atol=1e-12)
    assert np.allclose(a["trace_svd"], b["trace_svd"], rtol=1e-12, atol=1e-12)
    if kind != "rank1":
        # rank one maximizers are not unique, so only compare rotations elsewhere
        assert np.abs(a["rotation"] - b["rotation"]).max() < 1e-10


def test_spectral_batch_agrees(rng):
    a_arr = random_symmetric(rng, 1000)
    v1, b1, c1 = compiled.spectral_batch(a_arr, 1e-9)
    v2, b2, c2 = pyk.spectral_batch(a_arr, 1e-9)
    assert np.array_equal(c1, c2)
    assert np.allclose(v1, v2, atol=1e-12)
    res = np.linalg.norm(np.einsum("nij,njk->nik", a_arr, b1) - b1 * v1[:, None, :], axis=1)
    assert res.max() < 1e-12


def test_newton_and_maximal_batches_agree():
    ms = batch.generate(300, 2)
    s1, i1, r1 = compiled.newton_batch(ms)
    s2, i2, r2 = pyk.newton_batch(ms)
    assert np.array_equal(s1, s2) and np.array_equal(i1, i2)
    assert np.allclose(r1, r2, atol=1e-10)
    sym = batch.generate(300, 2, "symmetric")
    assert np.array_equal(compiled.is_maximal_batch(sym, 1e-9), pyk.is_maximal_batch(sym, 1e-9))


def test_selection(monkeypatch):
    assert backend.get("python") is pyk
    assert backend.get("compiled") is compiled
    assert backend.get("auto") is backend.kernels
    with pytest.raises(ValueError):
        backend.get("fortran")


def test_timing_recorded():
    out = compiled.solve_batch(batch.generate(10, 0))
    assert np.all(out["wall_time_ns"] >= 0)
