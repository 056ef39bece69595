"""Closed-form eigenvalues and eigenvectors of real symmetric 3x3 matrices.

Eigenvalues come from the trigonometric solution of the depressed cubic of
``B = (A - qI)/p``; eigenvectors from cross products of the columns of
``A - alpha I``.  No iterative eigensolver is involved.
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, cross, det, is_symmetric, max_abs, norm

# |alpha_i - alpha_j| <= CLUSTER_RTOL * max|a| is treated as a repeated root.
CLUSTER_RTOL = 1e-7
# a cross product of columns of C / max|C| counts as nonzero above this
CROSS_RTOL = 1e-12
ZERO_RTOL = 1e-12
# off-diagonal size, relative to max|a|, below which a Jacobi rotation is skipped
JACOBI_RTOL = 1e-17
JACOBI_SWEEPS = 10

_TWO_PI_3 = 2.0 * math.pi / 3.0


class RootCase(enum.Enum):
    DISTINCT = "distinct"
    DOUBLE_ROOT = "double_root"
    TRIPLE_ROOT = "triple_root"


@dataclass(frozen=True)
class TrigEigenIntermediates:
    q: float
    p: float
    det_b: float  # before clamping det(B)/2 into [-1, 1]
    theta: tuple  # (theta1, theta2, theta3), theta1 >= theta2 >= theta3


@dataclass(frozen=True)
class SpectralDecomposition3:
    eigenvalues: np.ndarray  # ascending
    basis: np.ndarray  # columns are unit eigenvectors, same order
    case: RootCase


def _require_symmetric(a, tol):
    a = np.asarray(a, dtype=float)
    if a.shape != (3, 3):
        raise ValueError(f"expected a 3x3 matrix, got shape {a.shape}")
    if not is_symmetric(a, tol):
        raise ValueError("matrix is not symmetric")
    return 0.5 * (a + a.T)


def eigenvalues3(a, tol=DEFAULT_TOL):
    """Eigenvalues of a symmetric 3x3 matrix, ascending.

    Returns ``(intermediates, alphas)``.  When ``p`` vanishes (to ``tol``
    relative to the largest entry) the matrix is ``qI`` and all three
    eigenvalues equal ``q``.
    """
    a = _require_symmetric(a, tol)
    sc = max_abs(a)
    if sc == 0.0:
        return TrigEigenIntermediates(0.0, 0.0, 0.0, (math.pi / 2,) * 3), np.zeros(3)
    # work at unit scale so squares neither overflow nor underflow
    a = a / sc
    q = (a[0, 0] + a[1, 1] + a[2, 2]) / 3.0
    p2 = ((a[0, 0] - q) ** 2 + (a[1, 1] - q) ** 2 + (a[2, 2] - q) ** 2
          + 2.0 * (a[0, 1] ** 2 + a[0, 2] ** 2 + a[1, 2] ** 2))
    p = math.sqrt(p2 / 6.0)
    if p <= tol:
        inter = TrigEigenIntermediates(q * sc, p * sc, 0.0, (math.pi / 2, math.pi / 2, math.pi / 2))
        return inter, np.full(3, q * sc)
    b = (a - q * np.eye(3)) / p
    det_b = det(b)
    half = min(1.0, max(-1.0, det_b / 2.0))
    theta3 = math.acos(half) / 3.0
    theta2 = _TWO_PI_3 - theta3
    theta1 = _TWO_PI_3 + theta3
    alphas = np.array([sc * (2.0 * p * math.cos(t) + q) for t in (theta1, theta2, theta3)])
    return TrigEigenIntermediates(q * sc, p * sc, det_b, (theta1, theta2, theta3)), alphas


def char_poly(a, alpha):
    """``det(alpha I - a)``."""
    return det(alpha * np.eye(3) - np.asarray(a, dtype=float))


def eigenspace_basis(a, alpha, tol=DEFAULT_TOL):
    """Orthonormal basis of the eigenspace of ``a`` for eigenvalue ``alpha``.

    Works from ``C = a - alpha I`` alone: one vector when ``C`` has rank two,
    two when it has rank one, the standard basis when ``C`` vanishes.  The
    number of vectors returned is therefore the multiplicity.
    """
    a = _require_symmetric(a, tol)
    s = max(max_abs(a), abs(alpha))
    if abs(char_poly(a, alpha)) > tol * s ** 3:
        raise ValueError(f"{alpha!r} is not an eigenvalue of the matrix")
    c = a - alpha * np.eye(3)
    cmax = max_abs(c)
    if cmax <= ZERO_RTOL * max(max_abs(a), abs(alpha)):
        return [np.eye(3)[:, k].copy() for k in range(3)]

    c = c / cmax
    cols = [c[:, 0], c[:, 1], c[:, 2]]
    candidates = [cross(cols[0], cols[1]), cross(cols[1], cols[2]), cross(cols[2], cols[0])]
    norms = [norm(v) for v in candidates]
    best = int(np.argmax(norms))
    if norms[best] > CROSS_RTOL:
        return [candidates[best] / norms[best]]

    # rank one: every column is a multiple of u
    u = cols[int(np.argmax([norm(col) for col in cols]))]
    w = np.ones(3)
    w[int(np.argmax(np.abs(u)))] = 0.0
    v1 = cross(u, w)
    v2 = cross(v1, u)
    return [v1 / norm(v1), v2 / norm(v2)]


def _orthogonalize(v, against):
    v = v - np.dot(v, against) * against
    return v / norm(v)


def _complete(e1, e2_hint):
    """Unit vector orthogonal to e1, oriented like ``e2_hint`` when possible."""
    v = e2_hint - np.dot(e2_hint, e1) * e1
    n = norm(v)
    if n > 1e-6:
        return v / n
    k = int(np.argmin(np.abs(e1)))
    v = np.eye(3)[:, k] - e1[k] * e1
    return v / norm(v)


def _third(e1, e2, hint):
    v = cross(e1, e2)
    return -v if np.dot(v, hint) < 0 else v


def jacobi_polish(a, basis):
    """Finish an approximate eigenbasis with cyclic Jacobi rotations.

    ``basis.T @ a @ basis`` is already nearly diagonal, so a sweep or two
    brings the residual down to working precision.  Returns ascending
    eigenvalues and the matching basis.
    """
    sc = max_abs(a)
    e = basis.copy()
    d = e.T @ (a / sc) @ e
    d = 0.5 * (d + d.T)
    for _ in range(JACOBI_SWEEPS):
        rotated = False
        for i, j in ((0, 1), (0, 2), (1, 2)):
            if abs(d[i, j]) <= JACOBI_RTOL:
                continue
            theta = (d[j, j] - d[i, i]) / (2.0 * d[i, j])
            tn = math.copysign(1.0, theta) / (abs(theta) + math.hypot(1.0, theta))
            c = 1.0 / math.hypot(1.0, tn)
            s = c * tn
            rot = np.eye(3)
            rot[i, i] = rot[j, j] = c
            rot[i, j], rot[j, i] = s, -s
            d = rot.T @ d @ rot
            e = e @ rot
            rotated = True
        if not rotated:
            break
    vals = np.diag(d) * sc
    order = np.argsort(vals, kind="stable")
    return vals[order], e[:, order]


def spectral_decomposition(a, tol=DEFAULT_TOL):
    """Full orthonormal eigenbasis of a symmetric 3x3 matrix.

    Eigenvalues that cluster share one eigenspace computation.  The resulting
    basis is then refined by :func:`jacobi_polish`, except when ``a`` is a
    multiple of the identity to within ``tol``, where the standard basis is
    returned as is.
    """
    a = _require_symmetric(a, tol)
    inter, al = eigenvalues3(a, tol)
    if inter.p <= tol * max_abs(a):
        return SpectralDecomposition3(np.full(3, inter.q), np.eye(3), RootCase.TRIPLE_ROOT)

    cl = CLUSTER_RTOL * max_abs(a)
    low_double = al[1] - al[0] <= cl
    high_double = al[2] - al[1] <= cl
    if al[2] - al[0] <= cl:
        case, basis = RootCase.TRIPLE_ROOT, np.eye(3)
    elif low_double or high_double:
        if low_double:
            mean, iso_idx, block = 0.5 * (al[0] + al[1]), 2, (0, 1)
        else:
            mean, iso_idx, block = 0.5 * (al[1] + al[2]), 0, (1, 2)
        u = eigenspace_basis(a, al[iso_idx], tol)[0]
        vecs = eigenspace_basis(a, mean, tol)
        e1 = _complete(u, vecs[0])
        e2 = _third(u, e1, vecs[1] if len(vecs) > 1 else cross(u, e1))
        basis = np.empty((3, 3))
        basis[:, iso_idx] = u
        basis[:, block[0]] = e1
        basis[:, block[1]] = e2
        case = RootCase.DOUBLE_ROOT
    else:
        raw = [eigenspace_basis(a, al[k], tol)[0] for k in range(3)]
        # anchor on the better separated end of the spectrum
        if al[1] - al[0] >= al[2] - al[1]:
            i, k = 0, 2
        else:
            i, k = 2, 0
        basis = np.empty((3, 3))
        basis[:, i] = raw[i]
        basis[:, k] = _orthogonalize(raw[k], raw[i])
        basis[:, 1] = _third(basis[:, i], basis[:, k], raw[1])
        case = RootCase.DISTINCT
    vals, basis = jacobi_polish(a, basis)
    return SpectralDecomposition3(vals, basis, case)


def top_eigenpair(a, tol=DEFAULT_TOL):
    """Largest eigenvalue and one unit eigenvector for it."""
    dec = spectral_decomposition(a, tol)
    return float(dec.eigenvalues[2]), dec.basis[:, 2].copy()
