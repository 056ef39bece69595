import numpy as np
import pytest

from conftest import M6, random_rotations
from rotalign.cayley import (CayleyPoint, NewtonConfig, NewtonStatus, cayley, g, jacobian,
                             newton_symmetrize, partials, rotation_from, scaled_cayley, skew_from,
                             solve_spatial)
from rotalign.characterization import is_maximal_3d
from rotalign.linalg import is_rotation
from rotalign.report import Strategy


def fd_jacobian(x, m, h=1e-6):
    cols = []
    for k in range(3):
        e = np.zeros(3)
        e[k] = h
        cols.append((g(x + e, m) - g(x - e, m)) / (2 * h))
    return np.column_stack(cols)


def test_point_delta():
    assert CayleyPoint(1.0, 2.0, 3.0).delta == 15.0


def test_skew_examples(rng):
    assert np.array_equal(skew_from((0, 0, 0)), np.zeros((3, 3)))
    assert np.array_equal(skew_from((1, 0, 0)), [[0, 1, 0], [-1, 0, 0], [0, 0, 0]])
    for x in rng.standard_normal((50, 3)):
        a = skew_from(x)
        assert np.array_equal(a.T, -a)


def test_scaled_cayley(rng):
    assert np.array_equal(scaled_cayley((0, 0, 0)), 0.5 * np.eye(3))
    assert is_rotation(rotation_from((1.0, 0.0, 0.0)))
    for x in rng.standard_normal((2000, 3)) * rng.uniform(0.01, 10, (2000, 1)):
        d = 1 + x @ x
        f = scaled_cayley(x)
        a = skew_from(x)
        assert np.allclose(f, 0.5 * d * np.eye(3) - a + a @ a, atol=1e-12 * d)
        assert np.allclose(f, 0.5 * d * cayley(a), atol=1e-10 * d)
        assert is_rotation(rotation_from(x))


def test_cayley_involution(rng):
    for x in rng.standard_normal((500, 3)):
        a = skew_from(x)
        assert np.allclose(cayley(cayley(a)), a, atol=1e-10 * (1 + np.abs(a).max()) ** 2)


def test_g_examples():
    assert np.array_equal(g((0, 0, 0), np.diag([1.0, 2.0, 3.0]) + 1), np.zeros(3))
    assert np.allclose(g((0, 0, 0), M6), [0, 0, -1])


def test_g_matches_skew_part(rng):
    for _ in range(200):
        x, m = rng.standard_normal(3), rng.standard_normal((3, 3))
        f = scaled_cayley(x)
        gm = f @ m - m.T @ f.T
        assert np.allclose(gm, -gm.T)
        u, v, w = g(x, m)
        assert np.allclose(gm, [[0, u, -v], [-u, 0, w], [v, -w, 0]])


def test_partials_match_finite_differences(rng):
    for x in rng.standard_normal((200, 3)):
        h = 1e-6
        for k, fp in enumerate(partials(x)):
            e = np.zeros(3)
            e[k] = h
            fd = (scaled_cayley(x + e) - scaled_cayley(x - e)) / (2 * h)
            assert np.allclose(fp, fd, atol=1e-7 * (1 + np.abs(x).max()))


def test_jacobian_vs_finite_differences(rng):
    for _ in range(300):
        x, m = rng.uniform(-2, 2, 3), rng.uniform(-1, 1, (3, 3))
        j, fd = jacobian(x, m), fd_jacobian(x, m)
        assert np.abs(j - fd).max() <= 1e-5 * (1 + np.abs(j).max())
    j0 = jacobian(np.zeros(3), np.eye(3))
    assert np.allclose(j0, fd_jacobian(np.zeros(3), np.eye(3)), atol=1e-8)


def test_jacobian_linear_in_m(rng):
    x, m = rng.standard_normal(3), rng.standard_normal((3, 3))
    assert np.allclose(jacobian(x, 2 * m), 2 * jacobian(x, m))


class TestNewton:
    def test_symmetric_converges_immediately(self):
        out = newton_symmetrize(np.array([[2.0, 1, 0], [1, 3, 0], [0, 0, 1]]))
        assert out.status is NewtonStatus.CONVERGED and out.iterations == 0
        assert np.allclose(out.rotation, np.eye(3))

    def test_worked_example(self):
        # the maximizer is a half turn, outside the Cayley chart; Newton lands on another symmetrization
        out = newton_symmetrize(M6)
        if out.status is NewtonStatus.CONVERGED:
            um = out.rotation @ M6
            assert np.abs(um - um.T).max() <= 1e-8
            assert np.trace(um) < 6

    def test_random_converge(self, rng):
        its = []
        for m in rng.uniform(-1, 1, (300, 3, 3)):
            out = newton_symmetrize(m)
            assert out.status is NewtonStatus.CONVERGED
            assert is_rotation(out.rotation)
            um = out.rotation @ m
            assert np.abs(um - um.T).max() <= 1e-8 * (1 + np.abs(m).max())
            assert np.abs(g(out.x, m)).max() <= 1e-12 * (1 + np.abs(m).max()) ** 2
            its.append(out.iterations)
        assert 5 <= np.mean(its) <= 12

    def test_rank_one_fails(self, rng):
        a, b = rng.uniform(-1, 1, (2, 3))
        out = newton_symmetrize(np.outer(a, b))
        assert out.status is not NewtonStatus.CONVERGED
        assert out.rotation is None

    def test_iteration_limit(self, rng):
        out = newton_symmetrize(rng.uniform(-1, 1, (3, 3)), NewtonConfig(max_iters=1))
        assert out.status is NewtonStatus.ITERATION_LIMIT

    def test_config_validation(self):
        with pytest.raises(ValueError):
            NewtonConfig(max_iters=0)


class TestSolveSpatial:
    @pytest.mark.parametrize("svd_only", [False, True])
    def test_worked_example(self, svd_only):
        rep = solve_spatial(M6, svd_only=svd_only)
        um = rep.rotation @ M6
        assert abs(rep.achieved_trace - 6) <= 1e-9
        assert np.abs(um - um.T).max() <= 1e-9
        assert is_maximal_3d(um).is_maximal
        assert rep.residual is None

    def test_maximal_input_kept(self):
        a = np.array([[2.0, 1, 0], [1, 2, 1], [0, 1, 2]])
        rep = solve_spatial(a)
        assert np.allclose(rep.rotation, np.eye(3))
        assert rep.achieved_trace == pytest.approx(6)
        assert rep.strategy is Strategy.NEWTON_THEN_SPECTRAL

    def test_fallback_reported(self, rng):
        a, b = rng.uniform(-1, 1, (2, 3))
        rep = solve_spatial(np.outer(a, b))
        assert rep.fell_back and rep.strategy is Strategy.SVD_KABSCH_UMEYAMA
        assert is_maximal_3d(rep.rotation @ np.outer(a, b)).is_maximal

    def test_paths_agree_and_beat_sampling(self, rng):
        us = random_rotations(rng, 1000)
        for m in rng.uniform(-1, 1, (200, 3, 3)):
            a, b = solve_spatial(m), solve_spatial(m, svd_only=True)
            assert is_rotation(a.rotation)
            assert a.achieved_trace == pytest.approx(b.achieved_trace, rel=1e-9)
            assert np.einsum("nij,ji->n", us, m).max() <= a.achieved_trace + 1e-12
