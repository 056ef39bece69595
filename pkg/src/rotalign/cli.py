"""Command line driver: ``rotalign {solve,bench,gen,check}``.

Exit status is 0 on success, 1 when a solved matrix fails the maximality
postcondition, and 2 on I/O or parse errors.
"""
import argparse
import json
import sys
from contextlib import contextmanager

import numpy as np

from . import batch
from .cayley import NewtonConfig, solve_spatial
from .characterization import is_maximal
from .linalg import DEFAULT_TOL, trace
from .planar import solve_planar
from .report import SolveReport, Strategy
from .wahba import WahbaProblem, profile_matrix, solve as solve_wahba

EXIT_OK, EXIT_POSTCONDITION, EXIT_IO = 0, 1, 2


class InputError(Exception):
    pass


@contextmanager
def _open(path, mode):
    if path is None or path == "-":
        yield sys.stdin if "r" in mode else sys.stdout
        return
    try:
        fh = open(path, mode, newline="" if "w" in mode else None)
    except OSError as exc:
        raise InputError(f"cannot open {path}: {exc.strerror}") from None
    with fh:
        yield fh


def _config(args):
    return NewtonConfig(max_iters=args.max_iters)


def _read_matrix_file(path):
    with _open(path, "r") as fh:
        try:
            return batch.read_matrices(fh)
        except batch.MatrixFileError as exc:
            raise InputError(f"{path or '<stdin>'}: {exc}") from None


def _report_json(rep, label, m):
    u = rep.rotation
    out = {
        "input": label,
        "strategy": rep.strategy.value,
        "rotation": u.tolist(),
        "achieved_trace": rep.achieved_trace,
        "newton_iterations": rep.newton_iterations,
        "fell_back": rep.fell_back,
        "maximal": is_maximal(u @ m).is_maximal,
    }
    if rep.residual is not None:
        out["residual"] = rep.residual
    return out


def _solve_matrix(m, args):
    if m.shape == (2, 2):
        u = solve_planar(m)
        return SolveReport(u, trace(u @ m), Strategy.PLANAR_CLOSED_FORM)
    return solve_spatial(m, _config(args), args.svd_only, args.tol)


def _load_wahba(path):
    with _open(path, "r") as fh:
        try:
            data = json.load(fh)
            return WahbaProblem(np.array(data["p"], dtype=float), np.array(data["q"], dtype=float),
                                data.get("weights"))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: bad problem file: {exc}") from None


def cmd_solve(args):
    results = []
    if args.problem:
        prob = _load_wahba(args.problem)
        rep = solve_wahba(prob, _config(args), args.svd_only, args.tol)
        results.append(_report_json(rep, args.problem, profile_matrix(prob)))
    else:
        for lineno, m in _read_matrix_file(args.input):
            results.append(_report_json(_solve_matrix(m, args), f"line {lineno}", m))
    with _open(args.output, "w") as fh:
        for r in results:
            fh.write(json.dumps(r) + "\n")
    return EXIT_OK if all(r["maximal"] for r in results) else EXIT_POSTCONDITION


def _batch_input(args):
    if args.input:
        pairs = _read_matrix_file(args.input)
        if any(m.shape != (3, 3) for _, m in pairs):
            raise InputError("bench takes 3x3 matrices only")
        if not pairs:
            raise InputError(f"{args.input}: no matrices")
        return np.array([m for _, m in pairs]), f"input file {args.input}"
    ms = batch.generate(args.count, args.seed, args.kind)
    return ms, f"generated {args.kind}, count={args.count}, seed={args.seed}; {batch.DISTRIBUTION_NOTE}"


def cmd_bench(args):
    ms, source = _batch_input(args)
    res = batch.run_batch(ms, _config(args), args.svd_only, args.workers, args.cross_check,
                          args.tol, args.backend)
    print(f"# {source}")
    print(res.summary.format())
    if args.output:
        with _open(args.output, "w") as fh:
            res.write_csv(fh)
    return EXIT_OK if res.summary.ok else EXIT_POSTCONDITION


def cmd_gen(args):
    ms = batch.generate(args.count, args.seed, args.kind)
    header = f"kind={args.kind} count={args.count} seed={args.seed}\n{batch.DISTRIBUTION_NOTE}"
    with _open(args.output, "w") as fh:
        batch.write_matrices(fh, ms, header)
    return EXIT_OK


def cmd_check(args):
    for lineno, m in _read_matrix_file(args.input):
        print(f"line {lineno}: {is_maximal(m, args.tol).describe()}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="rotalign", description="Rotations maximizing tr(UM) in 2D and 3D.")
    sub = ap.add_subparsers(dest="command", required=True)

    def solver_flags(p):
        p.add_argument("--svd-only", action="store_true", help="skip Newton, use Kabsch-Umeyama directly")
        p.add_argument("--max-iters", type=int, default=NewtonConfig.max_iters, help="Newton iteration cap")
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance for checks")

    p = sub.add_parser("solve", help="solve each matrix in a file, or a point-set problem")
    solver_flags(p)
    p.add_argument("--input", help="matrix file (default stdin)")
    p.add_argument("--problem", help="JSON file with p, q and optional weights")
    p.add_argument("--output", help="write JSON lines here instead of stdout")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="solve a batch and print a summary")
    solver_flags(p)
    p.add_argument("--input", help="matrix file; otherwise matrices are generated")
    p.add_argument("--count", type=int, default=100000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=batch.KINDS, default="dense_uniform")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--cross-check", action="store_true", help="also run the SVD path and compare traces")
    p.add_argument("--backend", choices=("auto", "compiled", "python"), default="auto")
    p.add_argument("--output", help="CSV file with one row per matrix")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("gen", help="write random matrices to a file")
    p.add_argument("--count", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--kind", choices=batch.KINDS, default="dense_uniform")
    p.add_argument("--output", help="default stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("check", help="print a maximality verdict for each matrix")
    p.add_argument("--input", help="matrix file (default stdin)")
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=cmd_check)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    for name in ("count", "workers", "max_iters"):
        if getattr(args, name, 1) < 1:
            ap.error(f"--{name.replace('_', '-')} must be >= 1")
    try:
        return args.func(args)
    except InputError as exc:
        print(f"rotalign: {exc}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"rotalign: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
