"""SVD-free maximizers for symmetric 3x3 matrices."""
import math

import numpy as np

from .characterization import is_maximal_3d
from .linalg import DEFAULT_TOL, as_matrix, is_symmetric, norm
from .spectral import spectral_decomposition, top_eigenpair


def axis_angle_rotation(axis, theta):
    """Rotation by ``theta`` (counterclockwise, right-hand rule) about ``axis``."""
    w = np.asarray(axis, dtype=float)
    w = w / norm(w)
    c, s = math.cos(theta), math.sin(theta)
    k = np.array([[0.0, -w[2], w[1]], [w[2], 0.0, -w[0]], [-w[1], w[0], 0.0]])
    return c * np.eye(3) + s * k + (1.0 - c) * np.outer(w, w)


def half_turn(axis):
    """The rotation by pi about ``axis``, ``2 w w^T - I``."""
    w = np.asarray(axis, dtype=float)
    w = w / norm(w)
    return 2.0 * np.outer(w, w) - np.eye(3)


def _symmetric3(a, tol):
    a = as_matrix(a, dims=(3,))
    if not is_symmetric(a, tol):
        raise ValueError("matrix is not symmetric")
    return a


def maximize_symmetric(a, tol=DEFAULT_TOL):
    """Return ``(R, R @ a)`` with ``R @ a`` of maximal trace over rotations.

    ``R`` is the half turn about a top eigenvector of ``a``; the identity when
    ``a`` is already maximal.
    """
    a = _symmetric3(a, tol)
    if is_maximal_3d(a, tol).is_maximal:
        return np.eye(3), a.copy()
    _, r_hat = top_eigenpair(a, tol)
    r = half_turn(r_hat)
    return r, r @ a


def maximize_by_diagonalization(a, tol=DEFAULT_TOL):
    """Return ``(W, W @ a)`` by flipping eigenvalue signs in the eigenbasis.

    Negative eigenvalues are flipped in pairs; when their count is odd the
    eigenvalue of smallest magnitude (lowest index on ties) is toggled too.
    """
    a = _symmetric3(a, tol)
    dec = spectral_decomposition(0.5 * (a + a.T), tol)
    al = dec.eigenvalues
    flip = {i for i in range(3) if al[i] < 0.0}
    if len(flip) % 2 == 1:
        k = int(np.argmin(np.abs(al)))
        flip ^= {k}
    g = np.diag([-1.0 if i in flip else 1.0 for i in range(3)])
    e = dec.basis
    w = e @ g @ e.T
    return w, w @ a
