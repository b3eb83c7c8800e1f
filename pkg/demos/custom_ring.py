"""Transforms over other rings: exact rationals, big integers and plain floats."""

from fractions import Fraction

import numpy as np

import fastmobius as fm
from fastmobius.dag import quiet_connectivity_warnings

with quiet_connectivity_warnings():
    d = fm.generate_erdos_renyi(30, 3, seed=11)
cd = fm.decompose(d)
nm = fm.compute_niv(d, cd)

# object arrays run the same kernels in pure Python, so any ring works
x = np.array([Fraction(1, i + 1) for i in range(d.n)], dtype=object)
y = fm.zeta_fast(nm, cd, x)
print(y[:5])
assert list(fm.moebius_fast(nm, cd, y)) == list(x)

big = np.array([3**80 - i for i in range(d.n)], dtype=object)
assert list(fm.moebius_fast(nm, cd, fm.zeta_fast(nm, cd, big))) == list(big)

xf = np.random.default_rng(0).standard_normal(d.n)
err = np.abs(fm.moebius_fast(nm, cd, fm.zeta_fast(nm, cd, xf)) - xf).max()
print("float round-trip error", err)
