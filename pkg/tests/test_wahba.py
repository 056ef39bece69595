import numpy as np
import pytest

from conftest import M6, random_rotations
from rotalign.characterization import is_maximal
from rotalign.linalg import rotation_2d
from rotalign.planar import solve_planar_wahba
from rotalign.report import Strategy
from rotalign.wahba import WahbaProblem, profile_matrix, residual, residual_by_trace, solve


def test_profile_examples(rng):
    q = rng.standard_normal((5, 3))
    m = profile_matrix(WahbaProblem(q, q))
    assert np.allclose(m, q.T @ q)
    assert np.all(np.linalg.eigvalsh(m) >= -1e-12)
    m = profile_matrix(WahbaProblem([[1.0, 0, 0]], [[0.0, 1, 0]], [1.0]))
    assert np.array_equal(m, np.outer([0, 1, 0], [1, 0, 0]))
    assert np.array_equal(profile_matrix(WahbaProblem(q, q, np.zeros(5))), np.zeros((3, 3)))


def test_profile_matches_explicit_sum(rng):
    p, q, w = rng.standard_normal((7, 3)), rng.standard_normal((7, 3)), rng.uniform(0, 1, 7)
    ref = sum(wi * np.outer(qi, pi) for pi, qi, wi in zip(p, q, w))
    assert np.allclose(profile_matrix(WahbaProblem(p, q, w)), ref)


def test_validation():
    with pytest.raises(ValueError):
        WahbaProblem(np.ones((3, 3)), np.ones((2, 3)))
    with pytest.raises(ValueError):
        WahbaProblem(np.ones((3, 4)), np.ones((3, 4)))
    with pytest.raises(ValueError):
        WahbaProblem(np.ones((3, 3)), np.ones((3, 3)), [1, -1, 1])
    with pytest.raises(ValueError):
        WahbaProblem(np.ones((3, 3)), np.ones((3, 3)), [1, 1])
    with pytest.raises(ValueError):
        WahbaProblem(np.ones((0, 3)), np.ones((0, 3)))


def test_residual_examples(rng):
    q = rng.standard_normal((4, 3))
    prob = WahbaProblem(q, q, rng.uniform(0, 1, 4))
    assert residual(prob, np.eye(3)) == 0
    u = random_rotations(rng, 1)[0]
    assert residual(WahbaProblem(q @ u.T, q), u) == pytest.approx(0, abs=1e-12)
    assert residual(WahbaProblem(q, q[::-1], np.zeros(4)), u) == 0
    with pytest.raises(ValueError):
        residual(prob, np.diag([1.0, 1, -1]))


def test_trace_identity(rng):
    for d in (2, 3):
        for _ in range(100):
            n = rng.integers(1, 8)
            prob = WahbaProblem(rng.standard_normal((n, d)), rng.standard_normal((n, d)), rng.uniform(0, 2, n))
            m = profile_matrix(prob)
            consts = []
            for u in random_rotations(rng, 5, d):
                r = residual(prob, u)
                assert r == pytest.approx(residual_by_trace(prob, u), rel=1e-10, abs=1e-10)
                consts.append(r + 2 * np.trace(u @ m))
            assert np.ptp(consts) <= 1e-9 * (1 + abs(consts[0]))


def test_worked_example_problem():
    # points q_i = columns of M, p_i = e_i give profile matrix M
    prob = WahbaProblem(np.eye(3), M6.T)
    assert np.allclose(profile_matrix(prob), M6)
    rep = solve(prob)
    assert rep.achieved_trace == pytest.approx(6)
    assert is_maximal(rep.rotation @ M6).is_maximal


def test_identical_point_sets(rng):
    q = rng.standard_normal((6, 3))
    rep = solve(WahbaProblem(q, q))
    assert rep.residual == pytest.approx(0, abs=1e-10)
    assert np.allclose(rep.rotation, np.eye(3), atol=1e-8)


def test_planar_dispatch(rng):
    p, q = rng.standard_normal((2, 2)), rng.standard_normal((2, 2))
    rep = solve(WahbaProblem(p, q))
    assert rep.strategy is Strategy.PLANAR_CLOSED_FORM
    assert np.allclose(rep.rotation, solve_planar_wahba(p, q))
    th = np.linspace(0, 2 * np.pi, 20000)
    sweep = min(residual(WahbaProblem(p, q), rotation_2d(t)) for t in th)
    assert rep.residual <= sweep + 1e-12


@pytest.mark.parametrize("d", [2, 3])
def test_residual_beats_sampling(rng, d):
    for _ in range(100):
        n = rng.integers(1, 10)
        prob = WahbaProblem(rng.standard_normal((n, d)), rng.standard_normal((n, d)), rng.uniform(0, 1, n))
        rep = solve(prob)
        assert rep.residual >= 0
        assert is_maximal(rep.rotation @ profile_matrix(prob)).is_maximal
        assert rep.achieved_trace >= np.trace(profile_matrix(prob)) - 1e-9
        samples = [residual(prob, u) for u in random_rotations(rng, 1000, d)]
        assert rep.residual <= min(samples) + 1e-9


def test_weight_scaling(rng):
    p, q, w = rng.standard_normal((6, 3)), rng.standard_normal((6, 3)), rng.uniform(0.1, 1, 6)
    a = solve(WahbaProblem(p, q, w))
    b = solve(WahbaProblem(p, q, 3.5 * w))
    assert b.achieved_trace == pytest.approx(3.5 * a.achieved_trace, rel=1e-10)
    assert np.allclose(a.rotation, b.rotation, atol=1e-8)
