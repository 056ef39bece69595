"""Random matrix generation, the flat matrix file format, and batch solving.

Matrix files are plain text: one matrix per line, 4 or 9 whitespace
separated numbers in row-major order.  Blank lines and lines starting with
``#`` are ignored.  Numbers are written with 17 significant digits so a
write/read round trip is exact.
"""
import csv
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend
from .cayley import NewtonConfig
from .report import Strategy

KINDS = ("dense_uniform", "rank1", "rank2", "symmetric")
DISTRIBUTION_NOTE = "entries i.i.d. uniform on [-1, 1] (rank-k kinds: sums of outer products of such vectors)"


class MatrixFileError(ValueError):
    def __init__(self, msg, lineno=None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {msg}" if lineno is not None else msg)


def generate(count, seed=0, kind="dense_uniform"):
    """``count`` random 3x3 matrices, deterministic in ``seed``."""
    if count < 1:
        raise ValueError("count must be >= 1")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    rng = np.random.default_rng(seed)
    if kind == "dense_uniform":
        return rng.uniform(-1.0, 1.0, size=(count, 3, 3))
    if kind == "symmetric":
        d = rng.uniform(-1.0, 1.0, size=(count, 3, 3))
        return 0.5 * (d + d.transpose(0, 2, 1))
    rank = 1 if kind == "rank1" else 2
    a = rng.uniform(-1.0, 1.0, size=(count, rank, 3))
    b = rng.uniform(-1.0, 1.0, size=(count, rank, 3))
    return np.einsum("nki,nkj->nij", a, b)


def format_matrix(m):
    return " ".join(f"{x:.17g}" for x in np.asarray(m, dtype=float).ravel())


def write_matrices(fh, matrices, header=None):
    if header:
        for line in header.splitlines():
            fh.write(f"# {line}\n")
    for m in matrices:
        fh.write(format_matrix(m) + "\n")


def read_matrices(fh):
    """Parse a matrix file; returns a list of ``(lineno, matrix)`` pairs."""
    out = []
    for lineno, line in enumerate(fh, start=1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        parts = text.split()
        if len(parts) not in (4, 9):
            raise MatrixFileError(f"expected 4 or 9 numbers, got {len(parts)}", lineno)
        try:
            vals = [float(x) for x in parts]
        except ValueError as exc:
            raise MatrixFileError(str(exc), lineno) from None
        if not all(math.isfinite(v) for v in vals):
            raise MatrixFileError("non-finite entry", lineno)
        d = 2 if len(vals) == 4 else 3
        out.append((lineno, np.array(vals).reshape(d, d)))
    return out


@dataclass(frozen=True)
class BatchRecord:
    index: int
    matrix: np.ndarray
    strategy: Strategy
    iterations: int
    fell_back: bool
    achieved_trace: float
    trace_svd_reference: Optional[float]
    max_symmetry_defect: float
    maximality_passed: bool
    wall_time_ns: int


@dataclass(frozen=True)
class BatchSummary:
    total: int
    svd_only: bool
    newton_converged: int
    fell_back: int
    mean_iterations: float  # over Newton-converged records
    max_iterations: int
    maximality_failures: int
    mean_trace_gap: Optional[float]  # |trace - svd trace| / (1 + |svd trace|)
    max_trace_gap: Optional[float]
    wall_time_s: float
    backend: str
    workers: int

    @property
    def ok(self):
        return self.maximality_failures == 0

    def format(self):
        lines = [
            f"backend            {self.backend} (workers={self.workers})",
            f"strategy           {'svd only' if self.svd_only else 'newton + spectral, svd fallback'}",
            f"matrices           {self.total}",
        ]
        if not self.svd_only:
            rate = self.fell_back / self.total
            lines += [
                f"newton converged   {self.newton_converged}",
                f"fell back to svd   {self.fell_back} ({100 * rate:.3f}%)",
                f"newton iterations  mean {self.mean_iterations:.3f}, max {self.max_iterations}",
            ]
        if self.mean_trace_gap is not None:
            lines.append(f"trace gap vs svd   mean {self.mean_trace_gap:.3e}, max {self.max_trace_gap:.3e}")
        lines += [
            f"maximality fails   {self.maximality_failures}",
            f"wall time          {self.wall_time_s:.3f} s",
        ]
        return "\n".join(lines)


@dataclass
class BatchResult:
    matrices: np.ndarray
    columns: dict
    summary: BatchSummary

    def __len__(self):
        return len(self.matrices)

    def records(self):
        c = self.columns
        svd_only = self.summary.svd_only
        for i in range(len(self.matrices)):
            if svd_only or c["fell_back"][i]:
                strat = Strategy.SVD_KABSCH_UMEYAMA
            else:
                strat = Strategy.NEWTON_THEN_SPECTRAL
            ref = c["trace_svd"][i]
            yield BatchRecord(
                i, self.matrices[i], strat, int(c["iterations"][i]), bool(c["fell_back"][i]),
                float(c["trace"][i]), None if np.isnan(ref) else float(ref),
                float(c["symmetry_defect"][i]), bool(c["maximal"][i]), int(c["wall_time_ns"][i]),
            )

    def write_csv(self, fh):
        w = csv.writer(fh)
        w.writerow(["index"] + [f"m{i}{j}" for i in (1, 2, 3) for j in (1, 2, 3)] + [
            "strategy", "iterations", "fell_back", "achieved_trace", "trace_svd_reference",
            "max_symmetry_defect", "maximality_passed", "wall_time_ns"])
        for r in self.records():
            w.writerow([r.index] + [f"{x:.17g}" for x in r.matrix.ravel()] + [
                r.strategy.value, r.iterations, int(r.fell_back), f"{r.achieved_trace:.17g}",
                "" if r.trace_svd_reference is None else f"{r.trace_svd_reference:.17g}",
                f"{r.max_symmetry_defect:.3e}", int(r.maximality_passed), r.wall_time_ns])


def _run_chunk(args):
    name, chunk, kw = args
    return backend.get(name).solve_batch(chunk, **kw)


def run_batch(matrices, cfg=None, svd_only=False, workers=1, cross_check=False,
              tol=1e-9, backend_name="auto"):
    """Solve every matrix; results come back in input order whatever ``workers`` is."""
    cfg = cfg or NewtonConfig()
    ms = np.ascontiguousarray(matrices, dtype=np.float64).reshape(-1, 3, 3)
    if workers < 1:
        raise ValueError("workers must be >= 1")
    kw = dict(svd_only=svd_only, max_iters=cfg.max_iters, g_tolerance=cfg.g_tolerance,
              jacobian_guard=cfg.jacobian_guard, divergence_bound=cfg.divergence_bound,
              tol=tol, cross_check=cross_check)
    kern = backend.get(backend_name)
    t0 = time.perf_counter()
    if workers == 1 or len(ms) < 2:
        cols = kern.solve_batch(ms, **kw)
    else:
        chunks = np.array_split(ms, min(workers, len(ms)))
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_run_chunk, [(backend_name, c, kw) for c in chunks]))
        cols = {k: np.concatenate([p[k] for p in parts]) for k in parts[0]}
    wall = time.perf_counter() - t0
    return BatchResult(ms, cols, summarize(cols, svd_only, wall, kern, workers))


def summarize(cols, svd_only, wall, kern, workers):
    n = len(cols["trace"])
    conv = cols["status"] == 0
    its = cols["iterations"][conv]
    gap_mean = gap_max = None
    if not np.all(np.isnan(cols["trace_svd"])):
        gap = np.abs(cols["trace"] - cols["trace_svd"]) / (1.0 + np.abs(cols["trace_svd"]))
        gap_mean, gap_max = float(np.mean(gap)), float(np.max(gap))
    name = "compiled" if kern is backend.compiled_kernels else "python"
    return BatchSummary(
        total=n, svd_only=svd_only, newton_converged=int(conv.sum()),
        fell_back=int(cols["fell_back"].sum()),
        mean_iterations=float(its.mean()) if len(its) else float("nan"),
        max_iterations=int(its.max()) if len(its) else 0,
        maximality_failures=int((~cols["maximal"]).sum()),
        mean_trace_gap=gap_mean, max_trace_gap=gap_max, wall_time_s=wall,
        backend=name, workers=workers,
    )
