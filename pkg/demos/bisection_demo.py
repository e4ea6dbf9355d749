"""Adaptive bisection against fixed nodes.

A_n reads f(0), f(1/2), n - 1 bisection midpoints and one final value;
its error is at most 2^-n. Any fixed set of n nodes leaves two functions
it cannot tell apart whose solutions differ by 1/(4n) whenever the nodes
leave a free interval of width 1/(2n) in [0, 1/2].
"""
from fractions import Fraction

import numpy as np

from ibc.instances_1d import (
    bisection_adversarial_pair,
    bisection_algorithm,
    bisection_solution_enclosure,
    random_lip_function,
)

rng = np.random.default_rng(1)
f = random_lip_function(rng)
lo, hi = bisection_solution_enclosure(f)
S = float((lo + hi) / 2)

print(" n   adaptive error    2^-n       1/(8n)")
for n in (2, 4, 8, 16, 32):
    out, rec = bisection_algorithm(n).run(f)
    print(f"{n:2d}   {abs(float(out) - S):.3e}      {2.0**-n:.3e}  {1 / (8 * n):.3e}")

n = 10
nodes = [Fraction(j, n) for j in range(n)]
g, h = bisection_adversarial_pair(nodes, n)
Sg = sum(map(float, bisection_solution_enclosure(g))) / 2
Sh = sum(map(float, bisection_solution_enclosure(h))) / 2
print(f"\nnodes j/{n}: pair agrees on nodes: {all(g(x) == h(x) for x in nodes)}, "
      f"solution gap {abs(Sg - Sh):.6f} = 1/(4n) = {1 / (4 * n):.6f}")

# nodes j/(2(n+1)) leave only gaps of 1/(2(n+1))
nodes = [j / (2 * (n + 1)) for j in range(1, n + 1)]
g, h, info = bisection_adversarial_pair(nodes, n, return_info=True)
print(f"nodes j/(2(n+1)): fallback={info['fallback']}, gap {info['gap']:.6f} = 1/(4(n+1)) = {1 / (4 * (n + 1)):.6f}")
