"""Level-synchronous transforms: antichain levels, thread counts, work and depth."""

import os

import numpy as np

import fastmobius as fm
from fastmobius.dag import quiet_connectivity_warnings

with quiet_connectivity_warnings():
    d = fm.generate_erdos_renyi(200_000, 4, seed=5)
cd = fm.decompose(d)
nm = fm.compute_niv(d, cd)
ap = fm.antichain_partition(d)

sizes = np.diff(ap.offsets)
print(f"{ap.ell} levels, largest {sizes.max()}, smallest {sizes.min()}")

x = np.random.default_rng(1).integers(-1000, 1000, size=d.n)
ref = fm.zeta_fast(nm, cd, x)
for t in (1, 2, 4, 8):
    times = []
    y = fm.zeta_parallel(nm, cd, ap, x, t, level_times=times)
    same = y.tobytes() == ref.tobytes()
    print(f"threads={t} identical={same} total={sum(times):.4f}s")

rep = fm.parallelism_report(nm, cd, ap)
print(rep)
print("cores available:", len(os.sched_getaffinity(0)))
