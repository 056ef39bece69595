"""Fixed-size 2x2 / 3x3 matrix helpers and the predicates the solvers rely on.

Matrices are plain ``numpy`` float arrays.  Rotation and symmetry are runtime
predicates, not separate types, since several solvers build matrices whose
properties are exactly what is being checked.
"""
import math

import numpy as np

DEFAULT_TOL = 1e-9


def as_matrix(m, dims=(2, 3)):
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] not in dims:
        raise ValueError(f"expected a square matrix of size {dims}, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def max_abs(m):
    return float(np.max(np.abs(m))) if np.size(m) else 0.0


def trace(m):
    return float(np.trace(m))


def transpose(m):
    return np.asarray(m, dtype=float).T.copy()


def matmul(a, b):
    return np.asarray(a, dtype=float) @ np.asarray(b, dtype=float)


def matadd(a, b):
    return np.asarray(a, dtype=float) + np.asarray(b, dtype=float)


def scale(m, k):
    return k * np.asarray(m, dtype=float)


def det(m):
    """Determinant by cofactor expansion (2x2 and 3x3 only)."""
    m = np.asarray(m, dtype=float)
    if m.shape == (2, 2):
        return float(m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0])
    if m.shape == (3, 3):
        return float(
            m[0, 0] * (m[1, 1] * m[2, 2] - m[1, 2] * m[2, 1])
            - m[0, 1] * (m[1, 0] * m[2, 2] - m[1, 2] * m[2, 0])
            + m[0, 2] * (m[1, 0] * m[2, 1] - m[1, 1] * m[2, 0])
        )
    raise ValueError(f"det: unsupported shape {m.shape}")


def cross(a, b):
    # np.cross is slow for single 3-vectors
    return np.array([
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ], dtype=float)


def dot(a, b):
    return float(np.dot(a, b))


def norm(v):
    return math.sqrt(float(np.dot(v, v)))


def symmetric_part(m):
    m = np.asarray(m, dtype=float)
    return 0.5 * (m + m.T)


def symmetry_defect(m):
    m = np.asarray(m, dtype=float)
    return max_abs(m - m.T)


def is_symmetric(m, tol=DEFAULT_TOL):
    """``max |m_ij - m_ji| <= tol * max|m_ij|``."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(m, dtype=float)
    return symmetry_defect(m) <= tol * max_abs(m)


def is_rotation(m, tol=DEFAULT_TOL):
    """True iff ``m`` is orthogonal with determinant +1, within ``tol``.

    Rotation entries are bounded by one, so the tolerance is applied
    absolutely against the identity.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    m = np.asarray(m, dtype=float)
    n = m.shape[0]
    if m.shape not in ((2, 2), (3, 3)):
        return False
    if max_abs(m.T @ m - np.eye(n)) > tol:
        return False
    return abs(det(m) - 1.0) <= tol


def rotation_2d(theta):
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s], [s, c]])
