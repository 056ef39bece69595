"""Tests for whether a matrix is of maximal trace over rotations.

A matrix ``A`` is of maximal trace over rotations when ``tr(UA) <= tr(A)`` for
every rotation ``U``.  That holds exactly when ``A`` is symmetric and has at
most one negative eigenvalue, no larger in magnitude than the others.  The
checks here decide that without eigenvalues where possible (principal minors
in 3D, the trace sign in 2D) and hand back an improving rotation when the
answer is no.
"""
import enum
import itertools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .linalg import DEFAULT_TOL, as_matrix, det, is_symmetric, max_abs, trace
from .spectral import spectral_decomposition


class Reason(enum.Enum):
    MAXIMAL = "maximal"
    NONSYMMETRIC = "nonsymmetric"
    TRACE_NEGATIVE_2D = "trace_negative_2d"
    PSD_TEST_FAILED_3D = "psd_test_failed_3d"
    EIGEN_CONDITION_FAILED = "eigen_condition_failed"


@dataclass(frozen=True)
class MaximalityVerdict:
    is_maximal: bool
    reason: Reason
    witness: Optional[np.ndarray] = None

    def describe(self):
        if self.is_maximal:
            return "maximal"
        text = {
            Reason.NONSYMMETRIC: "nonsymmetric",
            Reason.TRACE_NEGATIVE_2D: "trace negative",
            Reason.PSD_TEST_FAILED_3D: "psd test failed",
            Reason.EIGEN_CONDITION_FAILED: "eigenvalue condition failed",
        }[self.reason]
        return f"not maximal: {text}"


_MAXIMAL = MaximalityVerdict(True, Reason.MAXIMAL)


def givens_improvement(a, k, l):
    """Givens rotation in the (l, k) plane that raises the trace of ``G @ a``.

    Indices are zero-based with ``k > l``.  With ``s = a_ll + a_kk`` and
    ``b = a_lk - a_kl`` the gain is ``hypot(s, b) - s``, strictly positive
    whenever ``b != 0``.
    """
    a = np.asarray(a, dtype=float)
    d = a.shape[0]
    if not (0 <= l < k < d):
        raise ValueError(f"need 0 <= l < k < {d}, got k={k}, l={l}")
    b = a[l, k] - a[k, l]
    if b == 0.0:
        raise ValueError("a_lk == a_kl: no improving direction in this plane")
    s = a[l, l] + a[k, k]
    c = math.hypot(s, b)
    g = np.eye(d)
    g[l, l] = g[k, k] = s / c
    g[l, k] = -b / c
    g[k, l] = b / c
    return g


def _best_givens(a):
    """Givens witness over the plane with the largest trace gain."""
    d = a.shape[0]
    best, gain = None, -1.0
    for l, k in itertools.combinations(range(d), 2):
        b = a[l, k] - a[k, l]
        if b == 0.0:
            continue
        s = a[l, l] + a[k, k]
        g_k = math.hypot(s, b) - s
        if g_k > gain:
            best, gain = (k, l), g_k
    if best is None:
        return None
    return givens_improvement(a, *best)


def is_maximal_2d(a, tol=DEFAULT_TOL):
    a = as_matrix(a, dims=(2,))
    if not is_symmetric(a, tol):
        return MaximalityVerdict(False, Reason.NONSYMMETRIC, _best_givens(a))
    if trace(a) < -tol * max_abs(a):
        return MaximalityVerdict(False, Reason.TRACE_NEGATIVE_2D, -np.eye(2))
    return _MAXIMAL


def _minor_floor(m, size, tol):
    return -tol * max_abs(m) ** size


def _leading_minors(m):
    return (m[0, 0], m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0], det(m))


def is_positive_definite(m):
    """Strictly positive leading principal minors (3x3)."""
    return all(x > 0.0 for x in _leading_minors(m))


def is_positive_semidefinite(m, tol=DEFAULT_TOL):
    """All principal minors nonnegative, each within a size-scaled tolerance."""
    m = np.asarray(m, dtype=float)
    d = m.shape[0]
    for size in range(1, d + 1):
        floor = _minor_floor(m, size, tol)
        for idx in itertools.combinations(range(d), size):
            sub = m[np.ix_(idx, idx)]
            val = sub[0, 0] if size == 1 else det(sub)
            if val < floor:
                return False
    return True


def trace_complement(a):
    """``S = tr(A) I - A``."""
    a = np.asarray(a, dtype=float)
    return trace(a) * np.eye(a.shape[0]) - a


def householder_witness(a, tol=DEFAULT_TOL):
    """Axis ``v`` and pi-rotation ``2vv^T - I`` improving the trace, if any.

    Returns ``None`` when ``S = tr(A) I - A`` is positive semidefinite.
    """
    a = as_matrix(a, dims=(3,))
    if not is_symmetric(a, tol):
        raise ValueError("householder_witness requires a symmetric matrix")
    s = trace_complement(0.5 * (a + a.T))
    dec = spectral_decomposition(s)
    if dec.eigenvalues[0] >= -tol * max_abs(a):
        return None
    v = dec.basis[:, 0]
    return v, 2.0 * np.outer(v, v) - np.eye(3)


def is_maximal_3d(a, tol=DEFAULT_TOL):
    a = as_matrix(a, dims=(3,))
    if not is_symmetric(a, tol):
        return MaximalityVerdict(False, Reason.NONSYMMETRIC, _best_givens(a))
    s = trace_complement(0.5 * (a + a.T))
    # positive definiteness needs only the three leading minors
    if is_positive_definite(s) or is_positive_semidefinite(s, tol):
        return _MAXIMAL
    found = householder_witness(a, tol)
    return MaximalityVerdict(False, Reason.PSD_TEST_FAILED_3D, None if found is None else found[1])


def is_maximal(a, tol=DEFAULT_TOL):
    a = as_matrix(a)
    return is_maximal_2d(a, tol) if a.shape[0] == 2 else is_maximal_3d(a, tol)


def is_maximal_orthogonal(a, tol=DEFAULT_TOL):
    """Maximal trace over all orthogonal matrices: symmetric and PSD."""
    a = as_matrix(a)
    if not is_symmetric(a, tol):
        return False
    return is_positive_semidefinite(0.5 * (a + a.T), tol)


def symmetric_eigenvalues(a):
    """Ascending eigenvalues of a symmetric 2x2 or 3x3 matrix, in closed form."""
    a = np.asarray(a, dtype=float)
    if a.shape == (2, 2):
        half_tr = 0.5 * (a[0, 0] + a[1, 1])
        rad = math.hypot(0.5 * (a[0, 0] - a[1, 1]), 0.5 * (a[0, 1] + a[1, 0]))
        return np.array([half_tr - rad, half_tr + rad])
    return spectral_decomposition(a).eigenvalues


def eigen_condition(eigenvalues, tol_abs=0.0):
    """At most one negative eigenvalue, no larger in magnitude than the rest."""
    ev = list(eigenvalues)
    neg = [x for x in ev if x < -tol_abs]
    if len(neg) > 1:
        return False
    if not neg:
        return True
    others = list(ev)
    others.remove(neg[0])
    return all(-neg[0] <= x + tol_abs for x in others)


def is_maximal_by_eigenvalues(a, tol=DEFAULT_TOL):
    """Verdict from the eigenvalue characterization directly."""
    a = as_matrix(a)
    if not is_symmetric(a, tol):
        return MaximalityVerdict(False, Reason.NONSYMMETRIC, _best_givens(a))
    ev = symmetric_eigenvalues(0.5 * (a + a.T))
    if eigen_condition(ev, tol * max_abs(a)):
        return _MAXIMAL
    return MaximalityVerdict(False, Reason.EIGEN_CONDITION_FAILED)
