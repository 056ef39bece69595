"""Pure-Python batch kernels; same interface as the compiled ``_kernels``."""
import time

import numpy as np

from .cayley import NewtonConfig, NewtonStatus, newton_symmetrize, solve_spatial
from .characterization import is_maximal_3d
from .linalg import symmetry_defect, trace
from .spectral import RootCase, spectral_decomposition
from .svd import kabsch_umeyama

STATUS_CODES = {
    NewtonStatus.CONVERGED: 0,
    NewtonStatus.JACOBIAN_SINGULAR: 1,
    NewtonStatus.ITERATION_LIMIT: 2,
    NewtonStatus.DIVERGED: 3,
}
CASE_CODES = {RootCase.DISTINCT: 0, RootCase.DOUBLE_ROOT: 1, RootCase.TRIPLE_ROOT: 2}


def _stack(ms):
    return np.ascontiguousarray(ms, dtype=np.float64).reshape(-1, 3, 3)


def solve_batch(ms, svd_only=False, max_iters=50, g_tolerance=1e-12,
                jacobian_guard=1e-14, divergence_bound=1e8, tol=1e-9, cross_check=False):
    ms = _stack(ms)
    n = len(ms)
    cfg = NewtonConfig(max_iters, g_tolerance, jacobian_guard, divergence_bound)
    out = {
        "rotation": np.empty((n, 3, 3)), "trace": np.empty(n), "trace_svd": np.full(n, np.nan),
        "symmetry_defect": np.empty(n), "iterations": np.empty(n, dtype=np.int32),
        "status": np.empty(n, dtype=np.int8), "fell_back": np.empty(n, dtype=bool),
        "maximal": np.empty(n, dtype=bool), "wall_time_ns": np.empty(n, dtype=np.int64),
    }
    for i, m in enumerate(ms):
        t0 = time.perf_counter_ns()
        if svd_only:
            rep, status = solve_spatial(m, cfg, True, tol), -1
        else:
            # run Newton once for its status, then reuse solve_spatial for the rest
            status = STATUS_CODES[newton_symmetrize(m, cfg).status]
            rep = solve_spatial(m, cfg, False, tol)
        final = rep.rotation @ m
        out["wall_time_ns"][i] = time.perf_counter_ns() - t0
        out["rotation"][i] = rep.rotation
        out["trace"][i] = trace(final)
        out["symmetry_defect"][i] = symmetry_defect(final)
        out["maximal"][i] = is_maximal_3d(final, tol).is_maximal
        out["iterations"][i] = rep.newton_iterations
        out["status"][i] = status
        out["fell_back"][i] = rep.fell_back
        if cross_check:
            out["trace_svd"][i] = trace(kabsch_umeyama(m) @ m)
    return out


def spectral_batch(a_arr, tol=1e-9):
    a_arr = _stack(a_arr)
    n = len(a_arr)
    vals, basis, cases = np.empty((n, 3)), np.empty((n, 3, 3)), np.empty(n, dtype=np.int8)
    for i, a in enumerate(a_arr):
        dec = spectral_decomposition(0.5 * (a + a.T), tol)
        vals[i], basis[i], cases[i] = dec.eigenvalues, dec.basis, CASE_CODES[dec.case]
    return vals, basis, cases


def newton_batch(ms, max_iters=50, g_tolerance=1e-12, jacobian_guard=1e-14, divergence_bound=1e8):
    ms = _stack(ms)
    n = len(ms)
    cfg = NewtonConfig(max_iters, g_tolerance, jacobian_guard, divergence_bound)
    st, its, rot = np.empty(n, dtype=np.int8), np.empty(n, dtype=np.int32), np.full((n, 3, 3), np.nan)
    for i, m in enumerate(ms):
        out = newton_symmetrize(m, cfg)
        st[i], its[i] = STATUS_CODES[out.status], out.iterations
        if out.rotation is not None:
            rot[i] = out.rotation
    return st, its, rot


def is_maximal_batch(a_arr, tol=1e-9):
    return np.array([is_maximal_3d(a, tol).is_maximal for a in _stack(a_arr)], dtype=bool)
