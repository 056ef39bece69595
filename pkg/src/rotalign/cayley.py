"""Symmetrizing rotation via the Cayley transform and Newton's method.

A rotation without -1 as an eigenvalue is ``C(A) = (I - A)(I + A)^-1`` for a
skew matrix ``A(x)``, ``x = (r, s, t)``.  Scaling by ``delta / 2`` with
``delta = 1 + |x|^2`` makes it polynomial::

    F(x) = (delta / 2) I - A + A @ A

Newton's method drives the three independent entries of the skew matrix
``F(x) M - M^T F(x)^T`` to zero starting from ``x = 0``.  At a root,
``(2 / delta) F(x)`` is a rotation that makes ``U M`` symmetric; a half turn
from :func:`rotalign.spatial.maximize_symmetric` then finishes the job.

Rotations by exactly pi are outside the Cayley chart, so Newton can fail; the
caller falls back to the SVD route.
"""
import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .characterization import is_maximal_3d
from .linalg import DEFAULT_TOL, as_matrix, det, max_abs, trace
from .report import SolveReport, Strategy
from .spatial import maximize_symmetric
from .svd import kabsch_umeyama

_E_R = np.array([[0.0, 1.0, 0.0], [-1.0, 0.0, 0.0], [0.0, 0.0, 0.0]])
_E_S = np.array([[0.0, 0.0, -1.0], [0.0, 0.0, 0.0], [1.0, 0.0, 0.0]])
_E_T = np.array([[0.0, 0.0, 0.0], [0.0, 0.0, 1.0], [0.0, -1.0, 0.0]])


class CayleyPoint(NamedTuple):
    r: float
    s: float
    t: float

    @property
    def delta(self):
        return 1.0 + self.r * self.r + self.s * self.s + self.t * self.t


@dataclass(frozen=True)
class NewtonConfig:
    max_iters: int = 50
    # convergence: |g|_max <= g_tolerance * (1 + max|M|)**2
    g_tolerance: float = 1e-12
    # singular step: |det J| < jacobian_guard * (1 + max|M|)**3
    jacobian_guard: float = 1e-14
    divergence_bound: float = 1e8

    def __post_init__(self):
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


class NewtonStatus(enum.Enum):
    CONVERGED = "converged"
    JACOBIAN_SINGULAR = "jacobian_singular"
    ITERATION_LIMIT = "iteration_limit"
    DIVERGED = "diverged"


@dataclass(frozen=True)
class NewtonOutcome:
    status: NewtonStatus
    iterations: int
    rotation: Optional[np.ndarray] = None
    x: Optional[np.ndarray] = None


def skew_from(x):
    r, s, t = x
    return np.array([[0.0, r, -s], [-r, 0.0, t], [s, -t, 0.0]])


def cayley(b):
    """``(I - B)(I + B)^-1``; reference form, inverts a matrix."""
    b = np.asarray(b, dtype=float)
    i = np.eye(b.shape[0])
    return (i - b) @ np.linalg.inv(i + b)


def scaled_cayley(x):
    """``F(x) = (delta/2) I - A + A^2``, equal to ``(delta/2) C(A(x))``."""
    r, s, t = x
    half = 0.5 * (1.0 + r * r + s * s + t * t)
    return np.array([
        [half - r * r - s * s, -r + s * t, s + r * t],
        [r + s * t, half - r * r - t * t, -t + r * s],
        [-s + r * t, t + r * s, half - s * s - t * t],
    ])


def rotation_from(x):
    """The rotation ``(2 / delta) F(x)``."""
    r, s, t = x
    return (2.0 / (1.0 + r * r + s * s + t * t)) * scaled_cayley(x)


def _skew_entries(gm):
    return np.array([gm[0, 1], gm[2, 0], gm[1, 2]])


def g(x, m):
    """``(u, v, w)`` read off ``F(x) M - M^T F(x)^T = [[0,u,-v],[-u,0,w],[v,-w,0]]``."""
    m = np.asarray(m, dtype=float)
    f = scaled_cayley(x)
    return _skew_entries(f @ m - m.T @ f.T)


def partials(x):
    """``(F_r, F_s, F_t)`` at ``x``."""
    r, s, t = x
    fr = r * np.eye(3) - _E_R + np.array([[-2 * r, 0.0, t], [0.0, -2 * r, s], [t, s, 0.0]])
    fs = s * np.eye(3) - _E_S + np.array([[-2 * s, t, 0.0], [t, 0.0, r], [0.0, r, -2 * s]])
    ft = t * np.eye(3) - _E_T + np.array([[0.0, s, r], [s, -2 * t, 0.0], [r, 0.0, -2 * t]])
    return fr, fs, ft


def jacobian(x, m):
    m = np.asarray(m, dtype=float)
    cols = [_skew_entries(fp @ m - m.T @ fp.T) for fp in partials(x)]
    return np.column_stack(cols)


def _solve3(j, rhs, dj):
    # Cramer's rule; dj = det(j) already known to be safely nonzero
    out = np.empty(3)
    for k in range(3):
        jk = j.copy()
        jk[:, k] = rhs
        out[k] = det(jk) / dj
    return out


def newton_symmetrize(m, cfg=None):
    """Newton iteration from ``x = 0`` for a rotation ``U`` with ``U m`` symmetric.

    Failure is reported through ``status``, never raised.
    """
    cfg = cfg or NewtonConfig()
    m = as_matrix(m, dims=(3,))
    sc = 1.0 + max_abs(m)
    g_tol = cfg.g_tolerance * sc * sc
    j_tol = cfg.jacobian_guard * sc ** 3
    x = np.zeros(3)
    for k in range(cfg.max_iters + 1):
        gx = g(x, m)
        if max_abs(gx) <= g_tol:
            return NewtonOutcome(NewtonStatus.CONVERGED, k, rotation_from(x), x)
        if k == cfg.max_iters:
            break
        j = jacobian(x, m)
        dj = det(j)
        if not abs(dj) >= j_tol:
            return NewtonOutcome(NewtonStatus.JACOBIAN_SINGULAR, k, x=x)
        x = x - _solve3(j, gx, dj)
        if not np.dot(x, x) <= cfg.divergence_bound ** 2:
            return NewtonOutcome(NewtonStatus.DIVERGED, k + 1, x=x)
    return NewtonOutcome(NewtonStatus.ITERATION_LIMIT, cfg.max_iters, x=x)


def _svd_report(m, iterations, fell_back):
    u = kabsch_umeyama(m)
    return SolveReport(u, trace(u @ m), Strategy.SVD_KABSCH_UMEYAMA, iterations, fell_back)


def solve_spatial(m, cfg=None, svd_only=False, tol=DEFAULT_TOL):
    """Rotation maximizing ``tr(U m)`` for a 3x3 matrix.

    Newton symmetrization followed by a spectral half turn, or Kabsch-Umeyama
    when ``svd_only`` is set or Newton fails.
    """
    m = as_matrix(m, dims=(3,))
    if svd_only:
        return _svd_report(m, 0, False)
    out = newton_symmetrize(m, cfg)
    if out.status is not NewtonStatus.CONVERGED:
        return _svd_report(m, out.iterations, True)
    um = out.rotation @ m
    r, _ = maximize_symmetric(0.5 * (um + um.T), tol)
    u = r @ out.rotation
    final = u @ m
    if not is_maximal_3d(final, tol).is_maximal:
        return _svd_report(m, out.iterations, True)
    return SolveReport(u, trace(final), Strategy.NEWTON_THEN_SPECTRAL, out.iterations, False)
