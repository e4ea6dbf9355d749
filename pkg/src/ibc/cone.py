"""Adaptive algorithms on cones.

A cone is ``C_t = {f : |f|_F <= t |Tf|_H}``. The two-step algorithm first
approximates ``Tf`` by a pilot ``Q_m f`` with ball error at most
``1/(2t)``. It then picks the smallest cardinality ``k`` whose certified
ball error ``e(k)`` is at most ``eps / (2 t |Q_m f|_H)`` and returns the
output of the ``k``-th member of a family of homogeneous algorithms.
On ``C_t`` this gives ``|Q_m f|_H >= |f|_F / (2t)``, hence error at most ``eps``.
"""

from __future__ import annotations

from collections.abc import Sequence
from functools import lru_cache
from typing import Callable

import numpy as np

from .core import (
    N_MAX_DEFAULT,
    AdaptiveAlgorithm,
    InformationMap,
    InputSetSpec,
    LinearFunctional,
    lp,
)


class UnsolvableAtCapError(RuntimeError):
    """The certified error never reaches the threshold below the cap."""


class ConeSpec:
    """The cone ``{f : norm_F(f) <= t * norm_H(T(f))}``.

    Parameters
    ----------
    T : callable
        Linear operator applied to an input.
    norm_F, norm_H : callable
        Norms on inputs and on the range of ``T``; :class:`NormSpec`
        instances qualify.
    t : float
        Inflation factor, positive.
    """

    def __init__(self, T: Callable, norm_F: Callable, norm_H: Callable, t: float):
        if not t > 0:
            raise ValueError("inflation factor t must be positive")
        self.T = T
        self.norm_F = norm_F
        self.norm_H = norm_H
        self.t = float(t)

    def ratio(self, f) -> float:
        """``norm_F(f) / norm_H(Tf)``; ``inf`` if ``Tf = 0 != f``, 0 for f = 0."""
        a, b = self.norm_F(f), self.norm_H(self.T(f))
        if b == 0:
            return 0.0 if a == 0 else np.inf
        return a / b

    def contains(self, f, rtol: float = 0.0) -> bool:
        return self.norm_F(f) <= self.t * self.norm_H(self.T(f)) * (1.0 + rtol)


def cone_contains(f, cone: ConeSpec) -> bool:
    """Exact membership test with closed-form norms."""
    return cone.contains(f)


class SolverFamily:
    """Homogeneous algorithms ``A_k`` with certified ball errors ``e(k)``.

    Parameters
    ----------
    builder : callable
        ``k -> AdaptiveAlgorithm`` using at most ``k`` measurements.
    error : callable
        Nonincreasing certified worst-case error on the unit ball.
    k_min : int
        Smallest admissible cardinality.
    n_max : int
        Largest cardinality considered.
    """

    def __init__(self, builder: Callable[[int], AdaptiveAlgorithm], error: Callable[[int], float],
                 k_min: int = 1, n_max: int = N_MAX_DEFAULT):
        self.builder = builder
        self.error = error
        self.k_min = int(k_min)
        self.n_max = int(n_max)
        self.algorithm = lru_cache(maxsize=64)(builder)


def required_cardinality(eps: float, t: float, pilot_norm: float, error: Callable[[int], float],
                         k_min: int = 1, n_max: int = N_MAX_DEFAULT) -> int:
    """Smallest ``k >= k_min`` with ``error(k) <= eps / (2 t pilot_norm)``.

    Doubling locates a bracket, bisection finds the minimum.

    Examples
    --------
    >>> required_cardinality(0.1, 2.0, 1.0, lambda k: 1 / (np.pi * k))
    13
    """
    if not (eps > 0 and t > 0 and pilot_norm > 0):
        raise ValueError("eps, t and pilot_norm must be positive")
    thr = eps / (2.0 * t * pilot_norm)
    if error(k_min) <= thr:
        return k_min
    lo, hi = k_min, k_min
    while error(hi) > thr:
        if hi >= n_max:
            raise UnsolvableAtCapError(f"error stays above {thr:.3g} up to n_max={n_max}")
        lo, hi = hi, min(2 * hi, n_max)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if error(mid) <= thr:
            hi = mid
        else:
            lo = mid
    return hi


class _Tail(Sequence):
    """Read-only view of ``data[offset:]``."""

    __slots__ = ("data", "offset")

    def __init__(self, data, offset):
        self.data = data
        self.offset = offset

    def __len__(self):
        return len(self.data) - self.offset

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self[j] for j in range(*i.indices(len(self)))]
        if i < 0:
            i += len(self)
        if not 0 <= i < len(self):
            raise IndexError(i)
        return self.data[self.offset + i]


class TwoStepAlgorithm(AdaptiveAlgorithm):
    """Pilot plus adaptively sized second stage; see :func:`two_step_algorithm`."""

    def __init__(self, pilot: AdaptiveAlgorithm, family: SolverFamily, cone: ConeSpec, eps: float, zero=None):
        ms = pilot.info.measurements
        if ms is None:
            raise ValueError("pilot must use fixed (non-adaptive) information")
        self.pilot = pilot
        self.family = family
        self.cone = cone
        self.eps = float(eps)
        self.m = len(ms)
        self.zero = zero
        self._last = None
        m = self.m

        def selector(j, data):
            if j < m:
                return ms[j]
            return self.plan(data)[2].info.selector(j - m, _Tail(data, m))

        def stop(data):
            if len(data) < m:
                return False
            k, _, alg = self.plan(data)
            return k == 0 or alg.info.stop(_Tail(data, m))

        def recovery(data):
            k, q, alg = self.plan(data)
            if k == 0:
                return self.zero if self.zero is not None else q * 0.0
            return alg.recovery(tuple(data[m:]))

        super().__init__(InformationMap(selector, stop, family.n_max + m), recovery)

    def plan(self, data):
        """``(k, Q_m f, A_k)`` determined by the pilot data; k = 0 for a zero pilot."""
        key = tuple(data[: self.m])
        if self._last is not None and self._last[0] == key:
            return self._last[1]
        q = self.pilot.recovery(key)
        pn = self.cone.norm_H(q)
        if pn == 0:
            plan = (0, q, None)
        else:
            k = required_cardinality(self.eps, self.cone.t, pn, self.family.error, self.family.k_min,
                                     self.family.n_max)
            plan = (k, q, self.family.algorithm(k))
        self._last = (key, plan)
        return plan

    def report(self, f, S: Callable, norm_G: Callable) -> dict:
        """Run on ``f`` and summarize.

        ``bound_rhs`` is ``m + min{k : e(k) <= eps / (3 t |Tf|_H)}``, which
        bounds the cost because ``|Q_m f|_H <= (3/2) |Tf|_H`` on the cone.
        """
        out, rec = self.run(f)
        k, q, _ = self.plan(rec.data)
        pn = float(self.cone.norm_H(q))
        tf = float(self.cone.norm_H(self.cone.T(f)))
        if tf > 0:
            rhs = self.m + required_cardinality(self.eps, self.cone.t, 1.5 * tf, self.family.error,
                                                self.family.k_min, self.family.n_max)
        else:
            rhs = self.m
        return {
            "epsilon": self.eps,
            "t": self.cone.t,
            "m": self.m,
            "k": int(k),
            "cost": rec.n,
            "pilot_norm": pn,
            "residual_norm": float(norm_G(S(f) - out)),
            "bound_rhs": int(rhs),
        }


def two_step_algorithm(pilot: AdaptiveAlgorithm, pilot_error: float, family: SolverFamily, cone: ConeSpec,
                       eps: float, zero=None) -> TwoStepAlgorithm:
    """Algorithm with error at most ``eps`` on every member of ``cone``.

    Parameters
    ----------
    pilot : AdaptiveAlgorithm
        Homogeneous approximation of ``T`` with fixed information.
    pilot_error : float
        Certified ball error of the pilot; must be at most ``1/(2t)``.
    family : SolverFamily
    cone : ConeSpec
    eps : float
    zero : element, optional
        Output for a vanishing pilot; defaults to ``0 * Q_m f``.
    """
    if not eps > 0:
        raise ValueError("eps must be positive")
    if not pilot_error <= 1.0 / (2.0 * cone.t):
        raise ValueError(f"pilot error {pilot_error:.4g} exceeds 1/(2t) = {1 / (2 * cone.t):.4g}")
    return TwoStepAlgorithm(pilot, family, cone, eps, zero)


# --------------------------------------------------------------------------
# rescaled information


class _Scaled(Sequence):
    __slots__ = ("data", "r")

    def __init__(self, data, r):
        self.data = data
        self.r = r

    def __len__(self):
        return len(self.data)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self.r * v for v in self.data[i]]
        return self.r * self.data[i]


def rescale_information(info: InformationMap, r: float) -> InformationMap:
    """Information that acts on ``f`` as ``info`` acts on ``r f``.

    Selector and stop rule see the data multiplied by ``r``; measurements
    are positively homogeneous, so this is the information of ``r f``
    read back at scale ``f``. Rescaling twice multiplies the factors.
    """
    if not r > 0:
        raise ValueError("r must be positive")
    base = getattr(info, "_rescale_base", info)
    r = float(r) * getattr(info, "scale", 1.0)
    if r == 1.0:
        new = InformationMap(base.selector, base.stop, base.n_max, base.nonadaptive)
    else:
        new = InformationMap(lambda j, data: base.selector(j, _Scaled(data, r)),
                             lambda data: base.stop(_Scaled(data, r)), base.n_max, base.nonadaptive)
    new.measurements = base.measurements
    new.scale = r
    new._rescale_base = base
    return new


def sampled_diameter_proxy(info: InformationMap, S: Callable, pairs, norm: Callable = lp(2)) -> float:
    """Largest ``|Sf - Sg|`` over the given pairs with identical information."""
    best = 0.0
    for f, g in pairs:
        rf, rg = info.measure(f), info.measure(g)
        if rf.n == rg.n and all(np.array_equal(a, b) for a, b in zip(rf.data, rg.data)):
            best = max(best, float(norm(S(f) - S(g))))
    return best


class CoordinateConeInstance:
    """A finite-dimensional cone with adaptive information.

    Inputs live in R^m with the sup norm, ``T f = f_1`` and the cone is
    ``|f|_inf <= t |f_1|``. The information reads ``f_1`` and stops if
    ``|f_1| <= 1``; otherwise it reads all remaining coordinates. The
    solution operator is the identity, so the diameter of the information
    is ``2t``, attained by pairs sharing ``f_1 = +-1``.
    """

    def __init__(self, m: int = 4, t: float = 2.0):
        if m < 2 or t < 1:
            raise ValueError("need m >= 2 and t >= 1")
        self.m, self.t = int(m), float(t)
        E = np.eye(self.m)
        self.cone = ConeSpec(lambda f: f[:1], lp(np.inf), lp(np.inf), self.t)
        self.info = InformationMap(
            lambda j, data: LinearFunctional(E[j]),
            lambda data: len(data) >= self.m or (len(data) >= 1 and abs(data[0]) <= 1.0),
            n_max=self.m,
        )
        self.S = lambda f: f
        self.norm = lp(np.inf)

    def matched_pairs(self, rng, count: int, a_max: float):
        """Pairs in the cone sharing ``f_1 = g_1 = a`` with ``|a| <= a_max``."""
        rng = np.random.default_rng(rng)
        pairs = []
        for i in range(count):
            a = a_max * (1.0 if i % 4 == 0 else -1.0 if i % 4 == 1 else rng.uniform(-1, 1))
            w = self.t * abs(a)
            if i % 2 == 0:
                f = np.concatenate([[a], rng.choice([-w, w], self.m - 1)])
                g = np.concatenate([[a], -f[1:]])
            else:
                f = np.concatenate([[a], rng.uniform(-w, w, self.m - 1)])
                g = np.concatenate([[a], rng.uniform(-w, w, self.m - 1)])
            pairs.append((f, g))
        return pairs


def fixed_cardinality_unsolvability_demo(cone, info: InformationMap, S: Callable, seeds, eps_list,
                                         norm_G: Callable) -> dict:
    """Scale a seed pair to show fixed information cannot reach any ``eps``.

    A seed pair ``(f, g)`` lies in ``cone``, has identical information and
    ``S f != S g``. Scaling both by ``lam = 2 eps / |Sf - Sg|`` keeps them
    in the cone with identical information and gap ``2 eps``, so every
    algorithm based on ``info`` errs by at least ``eps`` on one of them.

    Returns
    -------
    dict
        ``inconclusive`` is True when no seed qualifies.
    """
    if isinstance(cone, InputSetSpec):
        if cone.kind != "cone":
            raise ValueError("a ball is not a cone; the demonstration needs a cone")
        cone = cone.cone_spec
    if not isinstance(cone, ConeSpec):
        raise TypeError("cone must be a ConeSpec")
    if info.measurements is None:
        raise ValueError("information must have fixed cardinality")

    def same_info(f, g):
        a, b = info(f), info(g)
        return all(np.array_equal(x, y) for x, y in zip(a, b))

    rejected = 0
    for idx, (f, g) in enumerate(seeds):
        gap = float(norm_G(S(f) - S(g)))
        if not (cone.contains(f) and cone.contains(g) and same_info(f, g) and gap > 0):
            rejected += 1
            continue
        levels = []
        for eps in eps_list:
            lam = 2.0 * eps / gap * (1.0 + 1e-12)
            F, G = f * lam, g * lam
            levels.append({
                "eps": float(eps),
                "lambda": lam,
                "gap": float(norm_G(S(F) - S(G))),
                "in_cone": bool(cone.contains(F) and cone.contains(G)),
                "info_equal": bool(same_info(F, G)),
            })
        return {"inconclusive": False, "seed_index": idx, "seed_gap": gap, "rejected_seeds": rejected,
                "levels": levels}
    return {"inconclusive": True, "rejected_seeds": rejected, "levels": []}
