"""Weighted point-set alignment (Wahba's problem) in 2D and 3D.

Minimizing ``sum_i w_i |U q_i - p_i|^2`` over rotations is the same as
maximizing ``tr(U M)`` with the profile matrix ``M = Q W P^T``.
"""
from dataclasses import dataclass, field

import numpy as np

from .cayley import NewtonConfig, solve_spatial
from .linalg import DEFAULT_TOL, is_rotation, trace
from .planar import solve_planar
from .report import SolveReport, Strategy


@dataclass(frozen=True)
class WahbaProblem:
    p: np.ndarray  # (n, d) target points
    q: np.ndarray  # (n, d) points to rotate
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        q = np.asarray(self.q, dtype=float)
        if p.ndim != 2 or p.shape[1] not in (2, 3):
            raise ValueError(f"points must have shape (n, 2) or (n, 3), got {p.shape}")
        if q.shape != p.shape:
            raise ValueError(f"p and q shapes differ: {p.shape} vs {q.shape}")
        if len(p) < 1:
            raise ValueError("need at least one point pair")
        w = np.ones(len(p)) if self.weights is None else np.asarray(self.weights, dtype=float)
        if w.shape != (len(p),):
            raise ValueError(f"expected {len(p)} weights, got shape {w.shape}")
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        if not (np.all(np.isfinite(p)) and np.all(np.isfinite(q))):
            raise ValueError("points must be finite")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self):
        return self.p.shape[1]


def profile_matrix(prob):
    """``M = Q W P^T`` with the points as columns of ``P`` and ``Q``."""
    return (prob.q.T * prob.weights) @ prob.p


def residual(prob, u, tol=DEFAULT_TOL):
    u = np.asarray(u, dtype=float)
    if u.shape != (prob.dimension,) * 2 or not is_rotation(u, tol):
        raise ValueError("u is not a rotation of the problem's dimension")
    diff = prob.q @ u.T - prob.p
    return float(np.sum(prob.weights * np.sum(diff * diff, axis=1)))


def residual_by_trace(prob, u):
    """The same residual via ``tr(W Q^T Q) + tr(W P^T P) - 2 tr(U M)``."""
    w = prob.weights
    const = np.sum(w * np.sum(prob.q ** 2, axis=1)) + np.sum(w * np.sum(prob.p ** 2, axis=1))
    return float(const - 2.0 * trace(np.asarray(u) @ profile_matrix(prob)))


def solve(prob, cfg=None, svd_only=False, tol=DEFAULT_TOL):
    m = profile_matrix(prob)
    if prob.dimension == 2:
        u = solve_planar(m)
        rep = SolveReport(u, trace(u @ m), Strategy.PLANAR_CLOSED_FORM)
    else:
        rep = solve_spatial(m, cfg or NewtonConfig(), svd_only, tol)
    return SolveReport(
        rep.rotation, rep.achieved_trace, rep.strategy,
        rep.newton_iterations, rep.fell_back, residual(prob, rep.rotation),
    )
