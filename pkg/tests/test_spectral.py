import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from conftest import UM6, random_symmetric
from rotalign.spectral import (RootCase, char_poly, eigenspace_basis, eigenvalues3,
                               spectral_decomposition, top_eigenpair)


def charpoly_residual(a, alpha):
    # independent of rotalign: numpy determinant
    return abs(np.linalg.det(alpha * np.eye(3) - a))


def test_identity_triple_root():
    inter, al = eigenvalues3(np.eye(3))
    assert inter.p == 0
    assert np.array_equal(al, [1, 1, 1])
    dec = spectral_decomposition(np.eye(3))
    assert dec.case is RootCase.TRIPLE_ROOT
    assert np.array_equal(dec.basis, np.eye(3))


def test_worked_example_intermediates():
    inter, al = eigenvalues3(UM6)
    assert inter.q == pytest.approx(2)
    assert inter.p == pytest.approx(np.sqrt(2 / 3))
    assert inter.det_b == pytest.approx(0, abs=1e-14)
    assert inter.theta[2] == pytest.approx(np.pi / 6)
    assert np.allclose(al, [2 - np.sqrt(2), 2, 2 + np.sqrt(2)], atol=1e-14)
    for x in al:
        assert charpoly_residual(UM6, x) < 1e-13
        assert abs(char_poly(UM6, x)) < 1e-13


def test_diagonal_read_off():
    _, al = eigenvalues3(np.diag([3.0, 1.0, 2.0]))
    assert np.allclose(al, [1, 2, 3], atol=1e-14)


def test_nonsymmetric_rejected():
    with pytest.raises(ValueError):
        eigenvalues3(np.array([[1.0, 2, 0], [0, 1, 0], [0, 0, 1]]))
    with pytest.raises(ValueError):
        spectral_decomposition(np.triu(np.ones((3, 3))))


class TestEigenspace:
    def test_zero_c_gives_standard_basis(self):
        vs = eigenspace_basis(np.eye(3), 1.0)
        assert len(vs) == 3
        assert np.allclose(np.column_stack(vs), np.eye(3))

    def test_simple_eigenvalue(self):
        a = np.diag([1.0, 1.0, 2.0])
        (v,) = eigenspace_basis(a, 2.0)
        assert np.allclose(np.abs(v), [0, 0, 1])
        assert np.allclose(a @ v, 2 * v)

    def test_double_eigenvalue(self):
        a = np.diag([1.0, 1.0, 2.0])
        vs = eigenspace_basis(a, 1.0)
        assert len(vs) == 2
        v1, v2 = vs
        assert abs(v1 @ v2) < 1e-15
        for v in vs:
            assert np.allclose(a @ v, v)
            assert abs(v[2]) < 1e-15

    def test_not_an_eigenvalue(self):
        with pytest.raises(ValueError):
            eigenspace_basis(np.diag([1.0, 2.0, 3.0]), 1.5)


def test_worked_example_residual():
    dec = spectral_decomposition(UM6)
    assert dec.case is RootCase.DISTINCT
    for k in range(3):
        assert np.linalg.norm(UM6 @ dec.basis[:, k] - dec.eigenvalues[k] * dec.basis[:, k]) < 1e-10


def test_perturbed_multiple_of_identity():
    rng = np.random.default_rng(0)
    e = rng.uniform(-1, 1, (3, 3)) * 1e-14
    a = 5 * np.eye(3) + 0.5 * (e + e.T)
    dec = spectral_decomposition(a)
    assert dec.case is RootCase.TRIPLE_ROOT
    assert np.allclose(dec.basis, np.eye(3))
    assert np.allclose(dec.eigenvalues, 5, atol=1e-13)


def check_decomposition(a, dec):
    s = 1 + np.abs(a).max()
    v = dec.basis
    assert np.abs(v.T @ v - np.eye(3)).max() <= 1e-10
    assert np.all(np.diff(dec.eigenvalues) >= 0)
    for k in range(3):
        assert np.linalg.norm(a @ v[:, k] - dec.eigenvalues[k] * v[:, k]) <= 1e-9 * s
    assert abs(dec.eigenvalues.sum() - np.trace(a)) <= 1e-8 * s
    assert abs(np.prod(dec.eigenvalues) - np.linalg.det(a)) <= 1e-8 * s ** 3
    assert np.allclose(dec.eigenvalues, np.linalg.eigvalsh(a), atol=1e-7 * s)


def test_random_with_multiple_roots(rng):
    mats = random_symmetric(rng, 3000)
    cases = set()
    for a in mats:
        dec = spectral_decomposition(a)
        cases.add(dec.case)
        check_decomposition(a, dec)
        inter, _ = eigenvalues3(a)
        assert abs(inter.det_b) <= 2 + 1e-12
        assert inter.theta[0] >= inter.theta[1] >= inter.theta[2]
    assert cases == set(RootCase)


@settings(max_examples=300, deadline=None)
@given(arrays(float, (3, 3), elements=st.floats(-1e4, 1e4, allow_nan=False, allow_subnormal=False)))
def test_property_random_scale(m):
    a = 0.5 * (m + m.T)
    check_decomposition(a, spectral_decomposition(a))


def test_rank_one_and_two_structures(rng):
    for _ in range(300):
        u, w = rng.standard_normal(3), rng.standard_normal(3)
        for a in (np.outer(u, u), np.outer(u, u) - np.outer(w, w), np.outer(u, u) + 3 * np.eye(3)):
            check_decomposition(a, spectral_decomposition(a))


def test_top_eigenpair(rng):
    for a in random_symmetric(rng, 500):
        val, v = top_eigenpair(a)
        assert val == pytest.approx(np.linalg.eigvalsh(a)[-1], abs=1e-7 * (1 + np.abs(a).max()))
        assert np.linalg.norm(a @ v - val * v) <= 1e-8 * (1 + np.abs(a).max())
