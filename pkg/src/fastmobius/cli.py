"""Command-line front end.

Subcommands: ``gen``, ``precompute``, ``transform``, ``verify``, ``bench``.
Exit codes: 0 ok, 1 usage, 2 validation failure, 3 I/O error.
Vertex indices are printed 1-based.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from . import io
from .chains import decompose_explicit
from .dag import generate_erdos_renyi
from .errors import CacheError, FastMobiusError
from .parallel import THREADS_ENV, moebius_parallel, resolve_threads, zeta_parallel
from .transforms import moebius_fast, operation_count, zeta_fast
from .verify import check_instance, random_trials

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


class ValidationFailure(Exception):
    pass


def _out(msg: str) -> None:
    print(msg, flush=True)


# --------------------------------------------------------------------------


def cmd_gen(args) -> int:
    d = generate_erdos_renyi(args.n, args.delta, seed=args.seed)
    io.write_edge_list(d, args.out)
    _out(f"wrote n={d.n} edges={d.num_edges} to {args.out}")
    return EXIT_OK


def cmd_precompute(args) -> int:
    d = io.read_edge_list(args.input)
    key = io.edge_list_key(d)
    cache = Path(args.cache)
    pre = None
    if cache.exists() and not args.force and args.chains is None:
        try:
            pre = io.load_cache(cache, expected_key=key)
            _out(f"cache {cache} is up to date")
        except CacheError as exc:
            logging.getLogger(__name__).info("recomputing: %s", exc)
    if pre is None:
        chains = None
        if args.chains is not None:
            chains = io.read_chains(args.chains, d).chains
        t0 = time.perf_counter()
        pre = io.precompute(d, chains, minimal=not args.path_cover)
        dt = time.perf_counter() - t0
        io.save_cache(cache, pre)
        if args.verbose:
            _out(f"precompute took {dt:.3f}s")
    cd, nm, ap = pre.chains, pre.niv, pre.levels
    _out(f"n={d.n} edges={d.num_edges} k={cd.k} ell={ap.ell} q={cd.q} nnz={nm.nnz}")
    return EXIT_OK


def cmd_transform(args) -> int:
    pre = io.load_cache(args.cache)
    x = io.read_vector(args.vector, args.format)
    threads = resolve_threads(args.threads)
    times: list | None = [] if args.verbose else None
    t0 = time.perf_counter()
    if threads == 1:
        fn = zeta_fast if args.kind == "zeta" else moebius_fast
        y = fn(pre.niv, pre.chains, x)
    else:
        fn = zeta_parallel if args.kind == "zeta" else moebius_parallel
        y = fn(pre.niv, pre.chains, pre.levels, x, threads, level_times=times)
    dt = time.perf_counter() - t0
    io.write_vector(y, args.out, args.format)
    if args.verbose:
        _out(f"{args.kind} n={len(x)} threads={threads} time={dt:.6f}s")
        for i, t in enumerate(times or ()):
            _out(f"  level {i + 1}: {t:.6f}s")
    if args.print_mapping:
        for i, lab in enumerate(pre.dag.labels):
            _out(f"{i + 1}\t{lab}")
    return EXIT_OK


def cmd_verify(args) -> int:
    failed = False

    def show(rep, context):
        nonlocal failed
        for r in rep.results:
            _out(f"{'PASS' if r.ok else 'FAIL'} [{context}] {r.name}" + (f" ({r.detail})" if r.detail else ""))
        if not rep.ok:
            failed = True

    if args.example:
        from .worked_example import twelve, twelve_chain_indices

        d = twelve()
        cd = decompose_explicit(d, twelve_chain_indices())
        show(check_instance(d, cd), "worked example, injected chains")
        show(check_instance(d), "worked example, computed chains")
    if args.input is not None:
        d = io.read_edge_list(args.input)
        cd = io.read_chains(args.chains, d) if args.chains else None
        show(check_instance(d, cd, seed=args.seed), str(args.input))
        if args.cache is not None:
            pre = io.load_cache(args.cache, expected_key=io.edge_list_key(d))
            fresh = check_instance(pre.dag, pre.chains, seed=args.seed)
            show(fresh, f"cache {args.cache}")
    if args.trials:
        count = 0
        for trial_seed, n, delta, rep in random_trials(args.trials, args.max_n, args.seed):
            count += 1
            if not rep.ok:
                r = rep.first_failure()
                _out(f"FAIL [random seed={trial_seed} n={n} delta={delta}] {r.name} {r.detail}")
                failed = True
                break
        if not failed:
            _out(f"PASS [random] {count} DAGs with n <= {args.max_n}")
    if failed:
        raise ValidationFailure("verification failed")
    return EXIT_OK


def cmd_bench(args) -> int:
    log = _out if args.verbose else None
    recs = bench_mod.run_bench(args.n, args.delta, args.seeds, args.threads,
                               minimal=not args.path_cover, log=log)
    count = bench_mod.write_csv(recs, args.csv)
    _out(f"wrote {count} rows to {args.csv}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fastmobius", description="Fast zeta/Moebius transforms on posets.")
    p.add_argument("--verbose", "-v", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--verbose", "-v", action="store_true", default=argparse.SUPPRESS)

    g = sub.add_parser("gen", parents=[common], help="generate an Erdos-Renyi DAG edge list")
    g.add_argument("n", type=int)
    g.add_argument("--delta", type=float, default=4.0, help="expected average total degree")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(func=cmd_gen)

    pc = sub.add_parser("precompute", parents=[common], help="chain decomposition + niv map + levels, cached")
    pc.add_argument("input", help="edge-list file")
    pc.add_argument("-o", "--cache", required=True)
    pc.add_argument("--chains", help="explicit chain decomposition file (labels per line)")
    pc.add_argument("--path-cover", action="store_true",
                    help="match on the input edges only (faster, possibly non-minimal)")
    pc.add_argument("--force", action="store_true", help="ignore an existing valid cache")
    pc.set_defaults(func=cmd_precompute)

    t = sub.add_parser("transform", parents=[common], help="apply a zeta or Moebius transform")
    t.add_argument("kind", choices=["zeta", "moebius"])
    t.add_argument("cache")
    t.add_argument("vector")
    t.add_argument("-o", "--out", required=True)
    t.add_argument("--threads", type=int, default=None,
                   help=f"worker threads (default: ${THREADS_ENV} or 1)")
    t.add_argument("--format", choices=["text", "binary"], default="text")
    t.add_argument("--print-mapping", action="store_true", help="print index -> label table")
    t.set_defaults(func=cmd_transform)

    v = sub.add_parser("verify", parents=[common], help="run oracle-equivalence and invariant checks")
    v.add_argument("input", nargs="?", help="edge-list file to check")
    v.add_argument("--chains")
    v.add_argument("--cache", help="also validate this cache against the input")
    v.add_argument("--example", action="store_true", help="check the built-in 12-element poset")
    v.add_argument("--trials", type=int, default=0)
    v.add_argument("--max-n", type=int, default=200)
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", parents=[common], help="benchmark the pipeline on random DAGs, write CSV")
    b.add_argument("--n", type=int, nargs="+", required=True)
    b.add_argument("--delta", type=float, nargs="+", default=[4.0])
    b.add_argument("--seeds", type=int, nargs="+", default=[0])
    b.add_argument("--threads", type=int, nargs="+", default=[1])
    b.add_argument("--path-cover", action="store_true")
    b.add_argument("--csv", required=True)
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    # allow --verbose after the subcommand too
    args.verbose = getattr(args, "verbose", False)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except ValidationFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (FastMobiusError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
