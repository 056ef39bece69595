import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import M6, UM6, best_trace_svd, random_rotations, sampled_best_trace
from rotalign.characterization import is_maximal_3d
from rotalign.linalg import is_rotation
from rotalign.svd import kabsch_umeyama, svd3


def check_svd(m, f, tol=1e-8):
    s = 1 + np.abs(m).max()
    assert np.abs(f.v @ np.diag(f.s) @ f.r.T - m).max() <= tol * s
    assert np.abs(f.v.T @ f.v - np.eye(3)).max() <= 1e-10
    assert np.abs(f.r.T @ f.r - np.eye(3)).max() <= 1e-10
    assert np.all(f.s >= 0) and f.s[0] >= f.s[1] >= f.s[2]


def test_identity():
    f = svd3(np.eye(3))
    assert np.allclose(f.s, 1)
    assert np.allclose(f.v @ f.r.T, np.eye(3))


def test_diagonal():
    m = np.diag([3.0, -2.0, 1.0])
    f = svd3(m)
    assert np.allclose(f.s, [3, 2, 1], atol=1e-14)
    check_svd(m, f)


def test_rank_one_completion():
    m = np.outer([1.0, 0, 0], [0, 1.0, 0])
    f = svd3(m)
    assert np.allclose(f.s, [1, 0, 0], atol=1e-15)
    check_svd(m, f)


def test_random_reconstruction(rng):
    for m in rng.uniform(-1, 1, (3000, 3, 3)):
        f = svd3(m)
        check_svd(m, f)
        assert np.allclose(f.s, np.linalg.svd(m, compute_uv=False), atol=1e-8)


def test_rank_deficient_singular_values(rng):
    for _ in range(500):
        a, b = rng.uniform(-1, 1, (2, 3))
        f = svd3(np.outer(a, b))
        assert f.s[1] / f.s[0] <= 1e-12
        check_svd(np.outer(a, b), f)


@settings(max_examples=300, deadline=None)
@given(arrays(float, (3, 3), elements=st.floats(-1e3, 1e3, allow_nan=False, allow_subnormal=False)))
def test_kabsch_property(m):
    u = kabsch_umeyama(m)
    assert is_rotation(u)
    um = u @ m
    s = 1 + np.abs(m).max()
    assert np.trace(um) == pytest.approx(best_trace_svd(m), abs=1e-9 * s)
    assert np.abs(um - um.T).max() <= 1e-8 * s


def test_kabsch_examples(rng):
    assert np.trace(kabsch_umeyama(UM6) @ UM6) == pytest.approx(6)
    u = kabsch_umeyama(M6)
    assert np.trace(u @ M6) == pytest.approx(6)
    assert is_maximal_3d(u @ M6).is_maximal
    refl = np.diag([1.0, 1.0, -1.0])
    assert np.trace(kabsch_umeyama(refl) @ refl) == pytest.approx(1)
    assert sampled_best_trace(refl, rng) <= 1 + 1e-12


def test_sign_branch_bound(rng):
    for m in rng.uniform(-1, 1, (1000, 3, 3)):
        f = svd3(m)
        t = np.trace(kabsch_umeyama(m) @ m)
        if np.linalg.det(f.v @ f.r.T) > 0:
            assert t == pytest.approx(f.s.sum(), abs=1e-12)
        else:
            assert t == pytest.approx(f.s[0] + f.s[1] - f.s[2], abs=1e-12)


def test_kabsch_beats_sampled_rotations(rng):
    us = random_rotations(rng, 10_000)
    for m in rng.uniform(-1, 1, (100, 3, 3)):
        t = np.trace(kabsch_umeyama(m) @ m)
        assert np.einsum("nij,ji->n", us, m).max() <= t + 1e-12
