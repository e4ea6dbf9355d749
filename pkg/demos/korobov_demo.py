"""Korobov-space approximation with a lattice two-step solver.

The pilot lattice recovers the coefficients on A(M) with error at most
1/(2t) in the Korobov norm; the second stage enlarges the index set until
the certified L2 error is small enough for the pilot's norm estimate.
"""
import numpy as np

from ibc.korobov import KorobovParams, index_set, korobov_cone_solver, random_cone_member

params = KorobovParams(2.0, (1.0, 0.25))
M, t = 20, 2.0
print(f"|A(M)| = {len(index_set(M, params))} frequencies")

rng = np.random.default_rng(3)
for eps in (1e-1, 1e-2):
    alg = korobov_cone_solver(eps, t, M, params)
    print(f"eps={eps:g}: pilot lattice {alg.pilot_meta['lattice']}, pilot error {alg.pilot_error:.3f}")
    for _ in range(3):
        f = random_cone_member(rng, params, M, t)
        rep = alg.report(f, lambda g: g, lambda g: g.norm_l2())
        print(f"   cost {rep['cost']:6d} (m={rep['m']}, k={rep['k']}), residual {rep['residual_norm']:.2e}")
