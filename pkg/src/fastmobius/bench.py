"""Benchmark harness: random DAGs, timed pipeline phases, CSV output."""

from __future__ import annotations

import csv
import time
from dataclasses import asdict, dataclass, fields
from typing import Iterable, Iterator

import numpy as np

from .chains import decompose
from .dag import generate_erdos_renyi, quiet_connectivity_warnings, transitive_closure
from .niv import compute_niv
from .parallel import antichain_partition, moebius_parallel, zeta_parallel
from .transforms import moebius_fast, zeta_fast

SCHEMA = "v1"
PHASES = ("decompose", "niv", "levels", "zeta", "moebius")


@dataclass
class BenchRecord:
    schema: str
    n: int
    delta: float
    seed: int
    k: int
    ell: int
    nnz: int
    edges: int
    phase: str
    threads: int
    wall_time_seconds: float
    ops: int
    speedup: float


COLUMNS = [f.name for f in fields(BenchRecord)]


def _timed(fn, *args, **kw):
    t0 = time.perf_counter()
    out = fn(*args, **kw)
    return out, time.perf_counter() - t0


def warm_up() -> None:
    """Compile every kernel on a tiny input so timings exclude JIT cost."""
    with quiet_connectivity_warnings():
        d = generate_erdos_renyi(16, 2, seed=0)
    cd = decompose(d)
    nm = compute_niv(d, cd)
    ap = antichain_partition(d)
    x = np.ones(d.n)
    for f in (zeta_fast, moebius_fast):
        f(nm, cd, x)
    for f in (zeta_parallel, moebius_parallel):
        f(nm, cd, ap, x, 2, threshold=1)


def run_config(n: int, delta: float, seed: int, threads_list: Iterable[int] = (1,),
               minimal: bool = True) -> list[BenchRecord]:
    """One DAG, every phase; transform rows for each thread count."""
    try:
        with quiet_connectivity_warnings():
            d = generate_erdos_renyi(n, delta, seed=seed)
        (cm, t_closure) = _timed(transitive_closure, d) if minimal else (None, 0.0)
        cd, t_dec = _timed(decompose, d, minimal=minimal, closure=cm)
        nm, t_niv = _timed(compute_niv, d, cd)
        ap, t_lev = _timed(antichain_partition, d)
        x = np.random.default_rng(seed).standard_normal(n)

        base = {}
        for name, fn in (("zeta", zeta_fast), ("moebius", moebius_fast)):
            _, base[name] = _timed(fn, nm, cd, x)
        trans = []
        for t in threads_list:
            for name, fn in (("zeta", zeta_parallel), ("moebius", moebius_parallel)):
                if t == 1:
                    trans.append((name, t, base[name]))
                else:
                    _, dt = _timed(fn, nm, cd, ap, x, t)
                    trans.append((name, t, dt))
    except MemoryError as exc:
        raise MemoryError(f"out of memory at n={n} delta={delta} seed={seed}") from exc

    common = dict(schema=SCHEMA, n=n, delta=delta, seed=seed, k=cd.k, ell=ap.ell,
                  nnz=nm.nnz, edges=d.num_edges)
    rows = [
        BenchRecord(**common, phase="decompose", threads=1,
                    wall_time_seconds=t_closure + t_dec, ops=0, speedup=1.0),
        BenchRecord(**common, phase="niv", threads=1, wall_time_seconds=t_niv, ops=0, speedup=1.0),
        BenchRecord(**common, phase="levels", threads=1, wall_time_seconds=t_lev, ops=0, speedup=1.0),
    ]
    for name, t, dt in trans:
        rows.append(BenchRecord(**common, phase=name, threads=t, wall_time_seconds=dt,
                                ops=nm.nnz - cd.k, speedup=base[name] / dt))
    return rows


def run_bench(n_list, delta_list, seeds, threads_list=(1,), minimal: bool = True,
              log=None) -> Iterator[BenchRecord]:
    warm_up()
    for n in n_list:
        for delta in delta_list:
            for seed in seeds:
                rows = run_config(n, delta, seed, threads_list, minimal)
                if log is not None:
                    log(f"n={n} delta={delta} seed={seed} k={rows[0].k} ell={rows[0].ell} "
                        f"nnz={rows[0].nnz} "
                        + " ".join(f"{r.phase}@{r.threads}={r.wall_time_seconds:.4f}s" for r in rows))
                yield from rows


def write_csv(records: Iterable[BenchRecord], path) -> int:
    count = 0
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        for r in records:
            w.writerow(asdict(r))
            count += 1
    return count
