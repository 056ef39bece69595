"""Independent oracles shared by the tests.

Nothing here calls into rotalign: rotations are sampled with numpy's QR,
spectra come from LAPACK, and optimality is checked by brute force.
"""
import numpy as np
import pytest

M6 = np.array([[-2.0, -1.0, 0.0], [-1.0, -2.0, -1.0], [0.0, 1.0, 2.0]])
UM6 = np.array([[2.0, 1.0, 0.0], [1.0, 2.0, 1.0], [0.0, 1.0, 2.0]])
U6 = np.diag([-1.0, -1.0, 1.0])


def random_rotations(rng, n, d=3):
    """Haar-distributed rotations via QR of Gaussian matrices."""
    z = rng.standard_normal((n, d, d))
    q, r = np.linalg.qr(z)
    q = q * np.sign(np.diagonal(r, axis1=1, axis2=2))[:, None, :]
    neg = np.linalg.det(q) < 0
    q[neg, :, 0] *= -1.0
    return q


def random_orthogonal(rng, n, d=3):
    q = random_rotations(rng, n, d)
    q[: n // 2, :, 0] *= -1.0
    return q


def sampled_best_trace(m, rng, n=100_000, orthogonal=False):
    d = m.shape[0]
    ws = random_orthogonal(rng, n, d) if orthogonal else random_rotations(rng, n, d)
    return float(np.einsum("nij,ji->n", ws, m).max())


def angle_grid_best_trace(m, n=1_000_000):
    th = np.linspace(0.0, 2.0 * np.pi, n, endpoint=False)
    c, s = np.cos(th), np.sin(th)
    # tr(R(th) m) with R = [[c, -s], [s, c]]
    return float(np.max(c * (m[0, 0] + m[1, 1]) + s * (m[0, 1] - m[1, 0])))


def best_trace_svd(m):
    """max tr(U m) over rotations, via LAPACK singular values."""
    s = np.linalg.svd(m, compute_uv=False)
    return float(s.sum() if np.linalg.det(m) >= 0 else s[:-1].sum() - s[-1])


def random_symmetric(rng, n, special=True):
    """Random symmetric 3x3 matrices; with ``special`` a third have double roots and some triple."""
    a = rng.uniform(-1, 1, (n, 3, 3))
    a = 0.5 * (a + a.transpose(0, 2, 1))
    if special:
        k = n // 3
        q = random_rotations(rng, k)
        ev = rng.uniform(-2, 2, (k, 3))
        ev[:, 1] = ev[:, 0]
        ev[: k // 10, 2] = ev[: k // 10, 0]
        a[:k] = np.einsum("nij,nj,nkj->nik", q, ev, q)
    return a


def is_rotation_oracle(u, tol=1e-9):
    return np.abs(u.T @ u - np.eye(len(u))).max() <= tol and abs(np.linalg.det(u) - 1) <= tol


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
