"""Linear versus non-linear recovery on the l1 ball.

The best linear algorithm with n of m Hadamard measurements errs by
sqrt((m - n)/m) in l2. Basis pursuit on the same number of Gaussian
measurements does much better on sampled points of the ball.
"""
import math

import numpy as np

from ibc.core import lp_ball_sampler
from ibc.recovery import basis_pursuit, kashin_linear_algorithm

m = 64
n = m // 2
alg, err = kashin_linear_algorithm(m, n)
print(f"linear, m={m}, n={n}: worst error {err:.6f} (sqrt((m-n)/m) = {math.sqrt((m - n) / m):.6f})")

rng = np.random.default_rng(0)
N = rng.standard_normal((n, m)) / math.sqrt(n)
F = lp_ball_sampler(m, 1.0)(rng, 200)
X = basis_pursuit(N, N @ F.T)
errs = np.linalg.norm(X.T - F, axis=1)
print(f"basis pursuit on 200 ball points: worst {errs.max():.4f}, mean {errs.mean():.4f}")

# sparse vertices are recovered exactly
e = np.zeros(m)
e[5] = 1.0
print("vertex e_5 recovered:", np.allclose(basis_pursuit(N, N @ e), e, atol=1e-6))
