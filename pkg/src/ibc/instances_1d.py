"""Univariate instances on piecewise-linear inputs.

* Sobolev approximation on the cone ``|f'|_2 <= t |f|_2`` by the two-step
  algorithm with piecewise-linear interpolation.
* Bisection: an adaptive algorithm with exponentially small error for a
  problem where non-adaptive ones only reach ``1/(8n)``.
* A product space where block norms drive an adaptive sample allocation.
* Bounded kurtosis: integration on ``|f|_4 <= t |f|_2`` cannot be solved,
  shown by explicit adversaries vanishing at the sampling points.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .cone import ConeSpec, SolverFamily, TwoStepAlgorithm, two_step_algorithm
from .core import (
    AdaptiveAlgorithm,
    BlockNorm,
    InformationMap,
    NormSpec,
    PointEvaluation,
)
from .elements import BlockFunction, PWLinear, StepFunction

L2 = NormSpec("L2")
L4 = NormSpec("L4")
W12 = NormSpec("W12")
LIP = NormSpec("Lip")


class InfeasibleError(ValueError):
    """Requested construction cannot be realized."""


# --------------------------------------------------------------------------
# Sobolev instance


def _grid(n: int) -> np.ndarray:
    return np.arange(n + 1) / n


def sobolev_interp(f, n: int | None = None) -> PWLinear:
    """Piecewise-linear interpolant at the nodes ``j/n``.

    Parameters
    ----------
    f : PWLinear or array_like
        A function to sample, or its ``n + 1`` values at the nodes.
    n : int, optional
        Number of intervals; inferred from the sample length if omitted.
    """
    if isinstance(f, PWLinear):
        if n is None or n < 1:
            raise ValueError("n >= 1 required")
        return PWLinear(_grid(n), f(_grid(n)))
    v = np.asarray(f, dtype=float)
    n = v.size - 1 if n is None else n
    if n < 1 or v.size != n + 1:
        raise ValueError("need n + 1 >= 2 node values")
    return PWLinear(_grid(n), v)


def sobolev_error_bound(n: int) -> float:
    """Certified L2 error ``1/(pi n)`` of :func:`sobolev_interp` on the W12 unit ball.

    On each cell of width ``h`` the interpolation error vanishes at both
    ends, so the sharp Poincare inequality gives
    ``|f - If|_2 <= (h/pi) |f'|_2 <= (h/pi) |f|_W12``.
    """
    if n < 1:
        raise ValueError("n >= 1 required")
    return 1.0 / (math.pi * n)


def sobolev_algorithm(n: int) -> AdaptiveAlgorithm:
    """Interpolation at ``n + 1`` equispaced nodes as an algorithm."""
    x = _grid(n)
    info = InformationMap.fixed([PointEvaluation(float(xi)) for xi in x])
    return AdaptiveAlgorithm(info, lambda data: PWLinear(x, np.asarray(data, dtype=float)))


def _zero_algorithm(zero) -> AdaptiveAlgorithm:
    return AdaptiveAlgorithm(InformationMap.fixed([]), lambda data: zero)


def sobolev_family() -> SolverFamily:
    """Cardinality ``k`` means ``k`` nodes, i.e. ``k - 1`` intervals.

    ``e(k) = 1/(pi (k - 1))`` for ``k >= 2``; below that the zero algorithm
    with ``e = 1`` (since ``|f|_2 <= |f|_W12``).
    """

    def error(k):
        return 1.0 if k < 2 else sobolev_error_bound(k - 1)

    def builder(k):
        return _zero_algorithm(PWLinear.zero()) if k < 2 else sobolev_algorithm(k - 1)

    return SolverFamily(builder, error, k_min=1)


def sobolev_cone(t: float) -> ConeSpec:
    """``{f : |f'|_2 <= t |f|_2}``."""
    return ConeSpec(lambda f: f, lambda f: f.deriv_l2(), L2, t)


def sobolev_cone_inflated(t: float) -> ConeSpec:
    """``{f : |f|_W12 <= sqrt(1 + t^2) |f|_2}``, which contains :func:`sobolev_cone`."""
    return ConeSpec(lambda f: f, W12, L2, math.sqrt(1.0 + t * t))


def sobolev_pilot_size(t: float) -> int:
    """Smallest ``n`` with ``1/(pi n) <= 1/(2 t')``, ``t' = sqrt(1 + t^2)``."""
    tp = math.sqrt(1.0 + t * t)
    n = max(1, math.ceil(2.0 * tp / math.pi))
    while sobolev_error_bound(n) > 1.0 / (2.0 * tp):
        n += 1
    return n


def sobolev_cone_solver(eps: float, t: float) -> TwoStepAlgorithm:
    """Two-step algorithm with L2 error at most ``eps`` on ``{|f'|_2 <= t |f|_2}``.

    The pilot interpolates at ``sobolev_pilot_size(t) + 1`` nodes; the
    second stage is :func:`sobolev_family`. The returned algorithm has an
    ``integrate(f)`` method returning ``(integral of A(f), cost)``.
    """
    if not (eps > 0 and t > 0):
        raise ValueError("eps and t must be positive")
    cone = sobolev_cone_inflated(t)
    n = sobolev_pilot_size(t)
    alg = two_step_algorithm(sobolev_algorithm(n), sobolev_error_bound(n), sobolev_family(), cone, eps,
                             zero=PWLinear.zero())

    def integrate(f):
        out, rec = alg.run(f)
        return out.integral(), rec.n

    alg.integrate = integrate
    return alg


def sawtooth(n_teeth: int, height: float = 1.0) -> PWLinear:
    """Zero at ``j/n_teeth``, peaks ``height`` at the cell midpoints."""
    x = np.arange(2 * n_teeth + 1) / (2 * n_teeth)
    v = np.where(np.arange(2 * n_teeth + 1) % 2 == 1, height, 0.0)
    return PWLinear(x, v)


# --------------------------------------------------------------------------
# bisection


_HALF = Fraction(1, 2)


def _bisect(f, steps: int):
    """Yield the nested intervals I_0, I_1, ..., I_steps (exact arithmetic)."""
    a, b = Fraction(0), _HALF
    c = (f(a) + f(b)) / 2
    ga = f(a) - c
    yield a, b, 2
    for _ in range(steps):
        mid = (a + b) / 2
        gm = f(mid) - c
        if ga * gm <= 0:
            b = mid
        else:
            a, ga = mid, gm
        yield a, b, 1


def bisection_z(f: PWLinear, n: int):
    """Approximate ``z`` with ``f(z) = (f(0) + f(1/2))/2`` by bisection.

    ``I_0 = [0, 1/2]`` is halved ``n - 1`` times, keeping a sign change of
    ``f - c``; if the midpoint hits the target exactly the left half is
    kept. ``z_n`` is the midpoint of ``I_{n-1}``, so
    ``|z(f) - z_n| <= 2**-(n+1)``.

    Returns
    -------
    z_n : Fraction
    cost : int
        ``n + 1`` function values (``f(0)``, ``f(1/2)`` and ``n - 1``
        midpoints); ``z_0 = 1/4`` costs nothing.
    """
    if n < 0:
        raise ValueError("n >= 0 required")
    if n == 0:
        return Fraction(1, 4), 0
    cost = 0
    for a, b, c in _bisect(f, n - 1):
        cost += c
    return (a + b) / 2, cost


def bisection_limit(f: PWLinear, steps: int = 200):
    """Interval ``I_steps`` of the bisection path; it contains the limit ``z(f)``."""
    for a, b, _ in _bisect(f, steps):
        pass
    return a, b


def bisection_solution_enclosure(f: PWLinear, steps: int = 200):
    """Exact rational bounds ``lo <= S(f) = f(z(f) + 1/2) <= hi``."""
    a, b = bisection_limit(f, steps)
    lo_x, hi_x = a + _HALF, b + _HALF
    pts = [lo_x, hi_x] + [Fraction(x) for x in f.x if lo_x < Fraction(x) < hi_x]
    vals = [f(p) for p in pts]
    return min(vals), max(vals)


def bisection_algorithm(n: int) -> AdaptiveAlgorithm:
    """``A_n(f) = f(z_n(f) + 1/2)``; uses ``n + 2`` function values for n >= 1."""
    if n < 1:
        raise ValueError("n >= 1 required")

    def state(data):
        a, b = Fraction(0), _HALF
        c = (data[0] + data[1]) / 2
        ga = data[0] - c
        for y in data[2:n + 1]:
            mid = (a + b) / 2
            gm = y - c
            if ga * gm <= 0:
                b = mid
            else:
                a, ga = mid, gm
        return a, b

    def selector(j, data):
        if j == 0:
            return PointEvaluation(Fraction(0))
        if j == 1:
            return PointEvaluation(_HALF)
        a, b = state(data)
        if j <= n:
            return PointEvaluation((a + b) / 2)
        return PointEvaluation((a + b) / 2 + _HALF)

    return AdaptiveAlgorithm(InformationMap(selector, lambda data: len(data) >= n + 2, n + 2),
                             lambda data: data[-1])


def _free_interval(nodes, width):
    """Open interval ``(a, b)`` in [0, 1/2] of length ``width`` avoiding ``nodes``.

    Falls back to the widest free gap when no interval of ``width`` fits;
    then ``b`` is the next node itself.
    """
    inside = sorted({float(x) for x in nodes if 0.0 < float(x) < 0.5})
    edges = [0.0] + inside + [0.5]
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo >= width:
            return lo, lo + width, False
    i = max(range(len(edges) - 1), key=lambda i: (edges[i + 1] - edges[i], -i))
    return edges[i], edges[i + 1], True


def bisection_adversarial_pair(nodes, n: int, return_info: bool = False):
    """Two unit-ball functions equal at ``nodes`` whose solutions differ by ``1/(4n)``.

    An interval ``(a, a + 1/(2n))`` in [0, 1/2] free of nodes is located;
    ``f`` rises with slope one on its left half, ``g`` on its right half,
    both are constant elsewhere on [0, 1/2] and rise with slope one on
    [1/2, 1]. Then ``S(f) - S(g) = -1/(4n)``.

    Such an interval need not exist: ``n`` nodes inside (0, 1/2) only
    guarantee a free gap of ``1/(2(n+1))`` (nodes ``j/(2(n+1))`` attain
    this). The widest free gap ``w`` is then used and the solutions differ
    by ``w/2 >= 1/(4(n+1))``; ``return_info`` reports this.
    """
    if n < 1 or len(nodes) != n:
        raise ValueError("need exactly n >= 1 nodes")
    a, b2, fallback = _free_interval(nodes, 1.0 / (2 * n))
    b1 = a + (b2 - a) / 2
    top = b1 - a

    def build(x0, x1):
        pts = [(0.0, 0.0), (x0, 0.0), (x1, top), (0.5, top), (1.0, top + 0.5)]
        xs, vs = [], []
        for x, v in pts:
            if xs and x == xs[-1]:
                continue
            xs.append(x)
            vs.append(v)
        return PWLinear(xs, vs)

    f, g = build(a, b1), build(b1, b2)
    if return_info:
        return f, g, {"a": a, "width": b2 - a, "fallback": fallback, "gap": top}
    return f, g


# --------------------------------------------------------------------------
# product space


def product_allocation(norms, n: int, M: int):
    """``m_i = 0`` if ``|f_i| < 2/(n-M)``, else ``ceil(|f_i| (n-M)/2)``."""
    if n <= M:
        raise ValueError("need n > M")
    thr = 2.0 / (n - M)
    return [0 if v < thr else math.ceil(v * (n - M) / 2) for v in norms]


def _midpoints(k: int) -> np.ndarray:
    return (2 * np.arange(k) + 1) / (2 * k)


def product_algorithm(n: int, M: int) -> AdaptiveAlgorithm:
    """Block norms first, then equispaced (cell-midpoint) samples per block.

    Each block with ``m_i > 0`` is approximated by the piecewise-constant
    function taking the sampled value on its cell of width ``1/m_i``.
    """
    if n <= M or M < 1:
        raise ValueError("need n > M >= 1")

    def schedule(data):
        alloc = product_allocation(data[:M], n, M)
        return [(i, x) for i, k in enumerate(alloc) for x in _midpoints(k)], alloc

    def selector(j, data):
        if j < M:
            return BlockNorm(j, LIP)
        i, x = schedule(data)[0][j - M]
        return PointEvaluation(float(x), block=i)

    def stop(data):
        return len(data) >= M and len(data) >= M + len(schedule(data)[0])

    def recovery(data):
        sched, alloc = schedule(data)
        vals = list(data[M:])
        blocks, pos = [], 0
        for k in alloc:
            if k == 0:
                blocks.append(StepFunction.zero())
            else:
                blocks.append(StepFunction(np.arange(k + 1) / k, vals[pos:pos + k]))
                pos += k
        return BlockFunction(blocks)

    return AdaptiveAlgorithm(InformationMap(selector, stop, n), recovery)


def product_adaptive(f: BlockFunction, n: int, M: int):
    """Run :func:`product_algorithm` on ``f``.

    Returns
    -------
    approx : BlockFunction of StepFunction
    cost : int
    """
    if f.M != M:
        raise ValueError("block count does not match M")
    out, rec = product_algorithm(n, M).run(f)
    return out, rec.n


def product_error(f: BlockFunction, approx: BlockFunction) -> float:
    """Exact ``max_i sup |f_i - A_i|``."""
    return max(a.sup_distance(b) for b, a in zip(f.blocks, approx.blocks))


def tent_vanishing_at(nodes) -> PWLinear:
    """Largest slope-one function vanishing at ``nodes``; equals 1 - x if there are none."""
    xs = sorted({float(x) for x in nodes if 0.0 <= float(x) <= 1.0})
    if not xs:
        return PWLinear([0.0, 1.0], [1.0, 0.0])
    bx, bv = [], []
    if xs[0] > 0:
        bx.append(0.0)
        bv.append(xs[0])
    for i, x in enumerate(xs):
        bx.append(x)
        bv.append(0.0)
        if i + 1 < len(xs):
            mid = 0.5 * (x + xs[i + 1])
            bx.append(mid)
            bv.append(mid - x)
    if xs[-1] < 1:
        bx.append(1.0)
        bv.append(1.0 - xs[-1])
    return PWLinear(bx, bv)


def product_adversarial(allocation, M: int, n: int) -> BlockFunction:
    """A unit-ball input that vanishes at all samples of its only nonzero block.

    Parameters
    ----------
    allocation : sequence
        Per block either a sample count (cell midpoints assumed) or the
        array of sample points of a non-adaptive algorithm.
    M, n : int
        Number of blocks and total budget.

    Notes
    -----
    The block with the fewest samples, ``c <= n/M``, gets the tent
    function; its sup norm is at least ``1/(2c) >= M/(2n)``.
    """
    if len(allocation) != M:
        raise ValueError("allocation needs one entry per block")
    pts = [_midpoints(int(a)) if np.isscalar(a) else np.asarray(a, dtype=float) for a in allocation]
    i = int(np.argmin([p.size for p in pts]))
    blocks = [PWLinear.zero() for _ in range(M)]
    blocks[i] = tent_vanishing_at(pts[i])
    return BlockFunction(blocks)


def random_lip_function(rng, pieces: int = 8) -> PWLinear:
    """Random piecewise-linear function with ``max(sup, Lip) <= 1``."""
    rng = np.random.default_rng(rng)
    x = np.concatenate([[0.0], np.sort(rng.random(pieces - 1)), [1.0]])
    x = np.unique(x)
    slopes = rng.uniform(-1.0, 1.0, x.size - 1)
    v = np.concatenate([[0.0], np.cumsum(slopes * np.diff(x))])
    v = v - 0.5 * (v.max() + v.min()) + rng.uniform(-0.5, 0.5)
    f = PWLinear(x, v)
    return f * (1.0 / max(1.0, f.lip_norm()))


# --------------------------------------------------------------------------
# bounded kurtosis


def kurtosis_cone(t: float) -> ConeSpec:
    """``{f : |f|_4 <= t |f|_2}``."""
    return ConeSpec(lambda f: f, L4, L2, t)


def kurtosis_adversarial(points, eps: float, delta: float) -> PWLinear:
    """``f = 4 eps min(1, dist(x, P)/w)`` with ``P = points + {0, 1}``.

    With ``w = delta / (2 (len(points) + 2))`` the valleys have total width
    at most ``delta``, so ``f = 4 eps`` on a set of measure ``>= 1 - delta``
    and ``f`` vanishes at every point.

    Raises
    ------
    InfeasibleError
        If the valley width falls below float resolution.
    """
    if not 0 < delta < 1 or not eps > 0:
        raise ValueError("need eps > 0 and 0 < delta < 1")
    P = np.unique(np.concatenate([np.asarray(points, dtype=float).ravel(), [0.0, 1.0]]))
    if P.min() < 0 or P.max() > 1:
        raise ValueError("points must lie in [0, 1]")
    w = delta / (2 * (len(points) + 2))
    if w < 1e-12:
        raise InfeasibleError(f"valley half-width {w:.3g} too small for {len(points)} points")
    cand = np.concatenate([P, P - w, P + w, 0.5 * (P[1:] + P[:-1])])
    x = np.unique(np.clip(cand, 0.0, 1.0))
    dist = np.min(np.abs(x[:, None] - P[None, :]), axis=1)
    v = (4.0 * eps) * np.minimum(1.0, dist / w)
    # valley edges P +- w may land a rounding error short of w
    v[dist >= w * (1.0 - 1e-9)] = 4.0 * eps
    return PWLinear(x, v)
