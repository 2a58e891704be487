"""Command-line front end: ``pjacobi <subcommand> ...``."""

import argparse
import csv
import json
import os
import sys
import time

import numpy as np

from . import fileio
from .engine import ALGORITHMS, NonConvergenceError, WorkerError, normalize_algorithm
from .factorizations import (
    NotPositiveDefiniteError,
    RankDeficiencyError,
    bunch_parlett_complete,
    cholesky_diag_pivoted,
    cholesky_unpivoted,
)
from .generate import graded, random_symmetric
from .matrix import ConfigurationError, is_symmetric
from .records import RunRecord
from .solver import compute_metrics, preprocess, solve_preprocessed
from .strategy import schedule_rows
from .verify import all_passed, verify

EXIT_OK, EXIT_NONCONV, EXIT_INPUT, EXIT_IO = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, code, kind, message):
        super().__init__(message)
        self.code = code
        self.kind = kind


def _read(path):
    try:
        return fileio.read_matrix(path)
    except OSError as exc:
        raise CliError(EXIT_IO, "io", str(exc)) from exc
    except ValueError as exc:
        raise CliError(EXIT_INPUT, "invalid-input", f"{path}: {exc}") from exc


def _write(fn, *args, **kw):
    try:
        fn(*args, **kw)
    except OSError as exc:
        raise CliError(EXIT_IO, "io", str(exc)) from exc


def _sibling(json_path, suffix):
    base = os.path.splitext(json_path)[0] if json_path else "pjacobi"
    return base + suffix


def cmd_generate(args):
    if args.n < 2:
        raise CliError(EXIT_INPUT, "invalid-input", "n must be at least 2")
    if args.dist == "graded":
        h, _, _ = graded(args.n, seed=args.seed, decades=args.decades)
    else:
        h = random_symmetric(args.n, seed=args.seed)
    _write(fileio.write_matrix, args.output, h, exact=args.exact_io)
    return EXIT_OK


def cmd_factorize(args):
    a = _read(args.matrix)
    if not is_symmetric(a, rtol=1e-14):
        raise CliError(EXIT_INPUT, "invalid-input", "matrix is not symmetric")
    prefix = args.output or os.path.splitext(args.matrix)[0]
    if args.kind == "bunch-parlett":
        f = bunch_parlett_complete(a)
        r, perm, j = f.R, f.perm, f.J
        recon = f.reconstruct()
    else:
        fn = cholesky_unpivoted if args.kind == "cholesky" else cholesky_diag_pivoted
        try:
            f = fn(a)
        except NotPositiveDefiniteError as exc:
            raise CliError(EXIT_INPUT, "not-positive-definite", str(exc)) from exc
        r, perm, j = f.R, f.perm, np.ones(a.shape[0], dtype=np.int64)
        recon = f.reconstruct()
    _write(fileio.write_matrix, prefix + ".R.txt", r, exact=args.exact_io)
    _write(fileio.write_signs, prefix + ".J.txt", j)
    with open(prefix + ".perm.txt", "w") as fh:
        fh.write(f"{len(perm)}\n" + " ".join(str(int(x)) for x in perm) + "\n")
    summary = {
        "kind": args.kind,
        "n": int(a.shape[0]),
        "rank": int(r.shape[0]),
        "n_pos": int(np.count_nonzero(j > 0)),
        "n_neg": int(np.count_nonzero(j < 0)),
        "residual_rel": float(np.linalg.norm(recon - a) / max(np.linalg.norm(a), 1e-300)),
        "R_path": prefix + ".R.txt",
    }
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def _solve_record(a, variant, p, tol, max_sweeps, json_path, exact):
    try:
        pre = preprocess(a)
    except RankDeficiencyError as exc:
        raise CliError(EXIT_INPUT, "rank-deficient", str(exc)) from exc
    t0 = time.perf_counter()
    rep = solve_preprocessed(pre, variant, p, conv_tol=tol, max_sweeps=max_sweeps)
    elapsed = (time.perf_counter() - t0) * 1e3
    rep.metrics = compute_metrics(a, rep.eigenvalues, rep.eigenvectors, rep.stages, p, rep.variant)
    return rep, elapsed


def cmd_solve(args):
    a = _read(args.matrix)
    if not is_symmetric(a, rtol=1e-14):
        raise CliError(EXIT_INPUT, "invalid-input", "matrix is not symmetric")
    variant = normalize_algorithm(args.algorithm)
    rep, elapsed = _solve_record(a, variant, args.processes, args.tol, args.max_sweeps,
                                 args.json, args.exact_io)
    eig_path = args.eigenvalues or _sibling(args.json, ".eigenvalues.txt")
    vec_path = args.eigenvectors or _sibling(args.json, ".eigenvectors.txt")
    _write(fileio.write_vector, eig_path, rep.eigenvalues, exact=args.exact_io)
    _write(fileio.write_matrix, vec_path, rep.eigenvectors, exact=args.exact_io)
    rec = RunRecord(
        variant=rep.variant, n=rep.n, p=rep.p, sweeps=rep.sweeps, stages=rep.stages,
        rotations=rep.rotations, time_ms=elapsed, metrics=rep.metrics.as_dict(),
        eigenvalues_path=eig_path, eigenvectors_path=vec_path,
    )
    text = rec.to_json()
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return EXIT_OK


def cmd_verify(args):
    a = _read(args.matrix)
    try:
        with open(args.report) as fh:
            rec = RunRecord.from_json(fh.read())
        lam = fileio.read_vector(rec.eigenvalues_path)
        u = fileio.read_matrix(rec.eigenvectors_path) if rec.eigenvectors_path else None
    except OSError as exc:
        raise CliError(EXIT_IO, "io", str(exc)) from exc
    checks = verify(a, lam, u, variant=rec.variant, p=rec.p, stages=rec.stages,
                    naive=args.naive)
    for c in checks:
        print(c.line())
    ok = all_passed(checks)
    print("VERIFY " + ("PASS" if ok else "FAIL"))
    return EXIT_OK if ok else 1


BENCH_FIELDS = ["variant", "n", "p", "seed", "sweeps", "stages", "time_ms", "orth_fro",
                "residual_rel", "eig_min_abs", "eig_max_abs", "error"]


def bench_rows(sizes, variants, procs, seeds):
    rows = []
    for n in sizes:
        for seed in seeds:
            a = random_symmetric(n, seed=seed)
            pre = preprocess(a)
            for p in procs:
                for v in variants:
                    row = {"variant": v, "n": n, "p": p, "seed": seed}
                    try:
                        t0 = time.perf_counter()
                        rep = solve_preprocessed(pre, v, p)
                        row["time_ms"] = (time.perf_counter() - t0) * 1e3
                        m = compute_metrics(a, rep.eigenvalues, rep.eigenvectors, rep.stages, p, v)
                        absl = np.abs(rep.eigenvalues)
                        row.update(sweeps=rep.sweeps, stages=rep.stages, orth_fro=m.orth_fro,
                                   residual_rel=m.residual_rel, eig_min_abs=float(absl.min()),
                                   eig_max_abs=float(absl.max()), error="")
                    except Exception as exc:  # noqa: BLE001 - recorded per cell
                        row["error"] = f"{type(exc).__name__}: {exc}"
                    rows.append(row)
    return rows


def sweep_comparison(rows, a="HF", b="HFSC"):
    """Per (n, p): mean sweeps of ``a`` and ``b`` and how often ``b`` needs no more."""
    out = []
    keys = sorted({(r["n"], r["p"]) for r in rows})
    for n, p in keys:
        sa = {r["seed"]: r.get("sweeps") for r in rows if (r["n"], r["p"], r["variant"]) == (n, p, a)}
        sb = {r["seed"]: r.get("sweeps") for r in rows if (r["n"], r["p"], r["variant"]) == (n, p, b)}
        common = [s for s in sa if s in sb and sa[s] and sb[s]]
        if not common:
            continue
        out.append({
            "n": n, "p": p, "cases": len(common),
            f"mean_{a}": float(np.mean([sa[s] for s in common])),
            f"mean_{b}": float(np.mean([sb[s] for s in common])),
            f"frac_{b}_le_{a}": float(np.mean([sb[s] <= sa[s] for s in common])),
        })
    return out


def _ints(text):
    return [int(x) for x in text.split(",") if x]


def cmd_bench(args):
    variants = [normalize_algorithm(v) for v in args.algorithms.split(",") if v]
    seeds = list(range(args.seed, args.seed + args.count))
    rows = bench_rows(_ints(args.sizes), variants, _ints(args.processes), seeds)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=BENCH_FIELDS, extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow(r)
    finally:
        if args.output:
            out.close()
    if {"HF", "HFSC"} <= set(variants):
        for c in sweep_comparison(rows):
            print("# sweeps " + " ".join(f"{k}={v}" for k, v in c.items()), file=sys.stderr)
    return EXIT_OK


def cmd_pivot_trace(args):
    rows = schedule_rows(args.processes, args.sweeps)
    out = open(args.output, "w", newline="") if args.output else sys.stdout
    try:
        w = csv.DictWriter(out, fieldnames=list(rows[0].keys()))
        w.writeheader()
        w.writerows(rows)
    finally:
        if args.output:
            out.close()
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(prog="pjacobi", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random symmetric test matrix")
    g.add_argument("n", type=int)
    g.add_argument("-o", "--output", required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--dist", choices=["uniform", "graded"], default="uniform")
    g.add_argument("--decades", type=float, default=14.0)
    g.add_argument("--exact-io", action="store_true")
    g.set_defaults(func=cmd_generate)

    f = sub.add_parser("factorize", help="factor a symmetric matrix")
    f.add_argument("matrix")
    f.add_argument("-o", "--output", help="output prefix")
    f.add_argument("--kind", choices=["bunch-parlett", "cholesky", "cholesky-diag"],
                   default="bunch-parlett")
    f.add_argument("--exact-io", action="store_true")
    f.set_defaults(func=cmd_factorize)

    algos = [a.lower() for a in ALGORITHMS]
    s = sub.add_parser("solve", help="eigendecomposition by a parallel Jacobi variant")
    s.add_argument("matrix")
    s.add_argument("--algorithm", choices=algos + list(ALGORITHMS), default="hfsc")
    s.add_argument("--processes", type=int, default=2)
    s.add_argument("--tol", type=float, default=None)
    s.add_argument("--max-sweeps", type=int, default=50)
    s.add_argument("--json")
    s.add_argument("--eigenvalues")
    s.add_argument("--eigenvectors")
    s.add_argument("--exact-io", action="store_true")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("verify", help="check a solve against the reference solvers")
    v.add_argument("matrix")
    v.add_argument("report", help="JSON written by 'solve --json'")
    v.add_argument("--naive", action="store_true",
                   help="also show how a standard dense solver fares (demo)")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="grid of runs, CSV out")
    b.add_argument("--sizes", default="64")
    b.add_argument("--algorithms", default="HF,HFSC")
    b.add_argument("--processes", default="2")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--count", type=int, default=1)
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_bench)

    t = sub.add_parser("pivot-trace", help="dump the modulus pivot schedule as CSV")
    t.add_argument("--processes", type=int, required=True)
    t.add_argument("--sweeps", type=int, default=1)
    t.add_argument("-o", "--output")
    t.set_defaults(func=cmd_pivot_trace)
    return ap


def _fail(code, kind, message, json_path=None):
    payload = json.dumps({"error": kind, "message": message, "exit_code": code})
    print(payload, file=sys.stderr)
    if json_path:
        try:
            with open(json_path, "w") as fh:
                fh.write(payload + "\n")
        except OSError:
            pass
    return code


def main(argv=None):
    args = build_parser().parse_args(argv)
    json_path = getattr(args, "json", None)
    try:
        return args.func(args)
    except CliError as exc:
        return _fail(exc.code, exc.kind, str(exc), json_path)
    except NonConvergenceError as exc:
        return _fail(EXIT_NONCONV, "non-convergence", str(exc), json_path)
    except WorkerError as exc:
        code = EXIT_NONCONV if "converge" in str(exc.cause) else EXIT_INPUT
        return _fail(code, "worker-error", str(exc), json_path)
    except (ConfigurationError, ValueError, np.linalg.LinAlgError) as exc:
        return _fail(EXIT_INPUT, "invalid-input", str(exc), json_path)
    except OSError as exc:
        return _fail(EXIT_IO, "io", str(exc), json_path)


if __name__ == "__main__":
    sys.exit(main())
