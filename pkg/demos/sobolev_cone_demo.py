"""Two-step algorithm on the cone |f'|_2 <= t |f|_2.

A pilot interpolant estimates |f|_2; the second stage then picks as many
nodes as the certified bound 1/(pi n) needs for error eps. The cost grows
like 1/eps and in proportion to |f|_2.
"""
import numpy as np

from ibc.core import NormSpec
from ibc.experiments import sobolev_cone_member
from ibc.instances_1d import sobolev_cone_solver

L2 = NormSpec("L2")
rng = np.random.default_rng(2)
t = 4.0
f = sobolev_cone_member(rng, t)
print(f"|f'|_2 / |f|_2 = {f.deriv_l2() / f.norm_l2():.3f} <= t = {t}")

print("   eps     scale   m     k   cost   residual")
for eps in (1e-1, 1e-2, 1e-3):
    alg = sobolev_cone_solver(eps, t)
    for scale in (1.0, 10.0):
        rep = alg.report(f * scale, lambda g: g, L2)
        print(f"{eps:7.0e}  {scale:5.1f}  {rep['m']:3d}  {rep['k']:5d}  {rep['cost']:5d}  {rep['residual_norm']:.2e}")
