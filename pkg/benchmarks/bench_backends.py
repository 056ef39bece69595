"""Time the compiled kernels against the pure-Python fallback.

    python benchmarks/bench_backends.py [--count N] [--seed S]

The Python backend is timed on a smaller slice (``--python-count``) and
reported per matrix, since it is orders of magnitude slower.
"""
import argparse
import time

import numpy as np

from rotalign import backend, batch


def _time(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return time.perf_counter() - t0, out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=100_000)
    ap.add_argument("--python-count", type=int, default=2_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if backend.compiled_kernels is None:
        raise SystemExit("compiled kernels not built; run `pip install -e . --no-build-isolation`")
    ms = batch.generate(args.count, args.seed)
    sym = batch.generate(args.count, args.seed, "symmetric")
    py_n = min(args.python_count, args.count)

    jobs = [
        ("newton + spectral", lambda k, x: k.solve_batch(x), ms),
        ("svd only", lambda k, x: k.solve_batch(x, svd_only=True), ms),
        ("spectral3", lambda k, x: k.spectral_batch(x), sym),
        ("maximality test", lambda k, x: k.is_maximal_batch(x), sym),
    ]
    print(f"# {args.count} compiled / {py_n} python matrices, seed {args.seed}; {batch.DISTRIBUTION_NOTE}")
    print(f"{'kernel':<20}{'compiled us':>14}{'python us':>14}{'speedup':>10}")
    for name, fn, data in jobs:
        tc, _ = _time(fn, backend.compiled_kernels, data)
        tp, _ = _time(fn, backend.python_kernels, data[:py_n])
        c_us, p_us = 1e6 * tc / len(data), 1e6 * tp / py_n
        print(f"{name:<20}{c_us:>14.3f}{p_us:>14.1f}{p_us / c_us:>9.0f}x")

    # same answers on the shared slice
    a = backend.compiled_kernels.solve_batch(ms[:py_n], cross_check=True)
    b = backend.python_kernels.solve_batch(ms[:py_n], cross_check=True)
    gap = np.abs(a["trace"] - b["trace"]).max()
    print(f"# max trace difference between backends on {py_n} matrices: {gap:.1e}")


if __name__ == "__main__":
    main()
