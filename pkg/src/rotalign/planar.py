"""Closed-form optimal rotation in the plane."""
import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, max_abs

DEGENERATE_RTOL = 1e-12


@dataclass(frozen=True)
class PlanarCoefficients:
    a: float
    b: float
    c: float


def planar_coefficients(m):
    """``a = m11 + m22``, ``b = m21 - m12``, ``c = hypot(a, b)``.

    For any rotation by ``theta``, ``tr(R(theta) m) = a cos(theta) - b sin(theta)``.
    """
    m = as_matrix(m, dims=(2,))
    a = m[0, 0] + m[1, 1]
    b = m[1, 0] - m[0, 1]
    return PlanarCoefficients(float(a), float(b), math.hypot(a, b))


def solve_planar(m):
    """Rotation ``U`` maximizing ``tr(U m)`` for a 2x2 matrix.

    The maximum equals ``c`` and ``U m`` comes out symmetric.  When
    ``a = b = 0`` every rotation gives trace zero and the identity is returned.
    """
    m = as_matrix(m, dims=(2,))
    co = planar_coefficients(m)
    eps = DEGENERATE_RTOL * (1.0 + max_abs(m))
    if abs(co.a) <= eps and abs(co.b) <= eps:
        return np.eye(2)
    ca, sb = co.a / co.c, co.b / co.c
    return np.array([[ca, sb], [-sb, ca]])


def _points(x, name):
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n, 2), got {x.shape}")
    return x


def solve_planar_wahba(p, q, w=None):
    """Rotation minimizing ``sum_i w_i |U q_i - p_i|^2`` for planar point sets."""
    p, q = _points(p, "p"), _points(q, "q")
    if len(p) != len(q):
        raise ValueError(f"p and q differ in length ({len(p)} != {len(q)})")
    w = np.ones(len(p)) if w is None else np.asarray(w, dtype=float)
    if w.shape != (len(p),):
        raise ValueError(f"expected {len(p)} weights, got shape {w.shape}")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    # entries of M = Q W P^T
    m = np.array([
        [np.sum(w * q[:, 0] * p[:, 0]), np.sum(w * q[:, 0] * p[:, 1])],
        [np.sum(w * q[:, 1] * p[:, 0]), np.sum(w * q[:, 1] * p[:, 1])],
    ])
    return solve_planar(m)
