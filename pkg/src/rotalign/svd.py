"""Kabsch-Umeyama rotation from an SVD assembled out of the closed-form eigensolver.

``svd3`` takes the right singular vectors from an eigendecomposition of
``M^T M`` (via :mod:`rotalign.spectral`), then polishes them with one-sided
Jacobi rotations on the columns of ``M R`` and reads each singular value off
as a column norm.  Squaring ``M`` costs half the digits of small singular
values and merges nearly equal ones; the polish gets both back.
"""
import math
from dataclasses import dataclass

import numpy as np

from .linalg import as_matrix, cross, det, max_abs, norm
from .spectral import spectral_decomposition

# below this multiple of sigma_1 a singular direction is completed arbitrarily;
# it bounds the trace loss at 2 * ZERO_SIGMA_RTOL * sigma_1
ZERO_SIGMA_RTOL = 1e-13
# a column pair counts as orthogonal once |b_j . b_k| <= this * |b_j| |b_k|
JACOBI_RTOL = 1e-15
JACOBI_SWEEPS = 10


@dataclass(frozen=True)
class Svd3:
    v: np.ndarray
    s: np.ndarray  # descending, nonnegative
    r: np.ndarray  # m == v @ diag(s) @ r.T


def _unit_orthogonal_to(e1):
    k = int(np.argmin(np.abs(e1)))
    v = np.eye(3)[:, k] - e1[k] * e1
    return v / norm(v)


def jacobi_polish(b, r):
    """Rotate column pairs of ``b`` (and ``r`` alike) until ``b``'s columns are orthogonal."""
    for _ in range(JACOBI_SWEEPS):
        rotated = False
        for j, k in ((0, 1), (0, 2), (1, 2)):
            al, be, ga = b[:, j] @ b[:, j], b[:, k] @ b[:, k], b[:, j] @ b[:, k]
            # a column whose squared norm underflows is zero for our purposes
            if al == 0.0 or be == 0.0 or abs(ga) <= JACOBI_RTOL * math.sqrt(al) * math.sqrt(be):
                continue
            zeta = (be - al) / (2.0 * ga)
            tn = math.copysign(1.0, zeta) / (abs(zeta) + math.hypot(1.0, zeta))
            c = 1.0 / math.hypot(1.0, tn)
            s = c * tn
            for x in (b, r):
                xj = x[:, j].copy()
                x[:, j] = c * xj - s * x[:, k]
                x[:, k] = s * xj + c * x[:, k]
            rotated = True
        if not rotated:
            break
    return b, r


def svd3(m):
    m = as_matrix(m, dims=(3,))
    sc = max_abs(m)
    if sc == 0.0:
        return Svd3(np.eye(3), np.zeros(3), np.eye(3))
    ms = m / sc
    ata = ms.T @ ms
    dec = spectral_decomposition(0.5 * (ata + ata.T))
    r = dec.basis[:, ::-1].copy()
    b, r = jacobi_polish(ms @ r, r)
    s = np.array([norm(b[:, k]) for k in range(3)])
    order = np.argsort(-s, kind="stable")
    s, r, b = s[order], r[:, order], b[:, order]

    thresh = ZERO_SIGMA_RTOL * s[0]
    v = np.empty((3, 3))
    v[:, 0] = b[:, 0] / s[0]
    if s[1] > thresh:
        col = b[:, 1] - np.dot(b[:, 1], v[:, 0]) * v[:, 0]
        v[:, 1] = col / norm(col)
    else:
        v[:, 1] = _unit_orthogonal_to(v[:, 0])
    third = cross(v[:, 0], v[:, 1])
    if s[2] > thresh and np.dot(b[:, 2], third) < 0.0:
        third = -third
    v[:, 2] = third
    return Svd3(v, s * sc, r)


def kabsch_umeyama(m):
    """Rotation ``U`` maximizing ``tr(U m)``: ``U = R diag(1, 1, sign det(VR)) V^T``."""
    f = svd3(m)
    d = 1.0 if det(f.v) * det(f.r) > 0.0 else -1.0
    return f.r @ np.diag([1.0, 1.0, d]) @ f.v.T


def svd2(m):
    """Closed-form SVD of a 2x2 matrix, ``m == v @ diag(s) @ r.T``."""
    m = as_matrix(m, dims=(2,))
    e = 0.5 * (m[0, 0] + m[1, 1])
    f = 0.5 * (m[0, 0] - m[1, 1])
    g = 0.5 * (m[1, 0] + m[0, 1])
    h = 0.5 * (m[1, 0] - m[0, 1])
    qq, rr = math.hypot(e, h), math.hypot(f, g)
    a1, a2 = math.atan2(g, f), math.atan2(h, e)
    theta, phi = 0.5 * (a2 - a1), 0.5 * (a2 + a1)
    # m = rot(phi) @ diag(qq + rr, qq - rr) @ rot(theta)
    v = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    rt = np.array([[math.cos(theta), -math.sin(theta)], [math.sin(theta), math.cos(theta)]])
    s = np.array([qq + rr, qq - rr])
    if s[1] < 0.0:
        s[1] = -s[1]
        rt[1, :] = -rt[1, :]
    return v, s, rt.T


def kabsch_umeyama_2d(m):
    v, _, r = svd2(m)
    d = 1.0 if det(v) * det(r) > 0.0 else -1.0
    return r @ np.diag([1.0, d]) @ v.T
