"""Problem and algorithm model.

Norms, measurements, information maps with a stop rule, adaptive
algorithms with cost accounting, input sets, ball samplers and a sampled
worst-case error estimator.

A run of an :class:`InformationMap` on an input ``f`` proceeds as::

    data = ()
    while not stop(data):
        L = selector(len(data), data)
        data = data + (L(f),)

so ``selector`` receives the zero-based step index together with all data
gathered so far. The number of measurements is the cost of the run.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Callable, Sequence

import numpy as np

from .elements import (
    BlockFunction,
    IncompatibleElementError,
    PWLinear,
    StepFunction,
    TrigPoly,
)

N_MAX_DEFAULT = 10**6


class TerminationError(RuntimeError):
    """The stop rule did not fire within the measurement cap."""


class MeasurementError(IncompatibleElementError):
    """A measurement cannot be applied to the given element."""


# --------------------------------------------------------------------------
# norms


_NORM_KINDS = ("lp", "L2", "L4", "W12", "Linf", "Lip", "Korobov", "sup-of-blocks", "sum-of-blocks")


@dataclass(frozen=True)
class NormSpec:
    """Description of a norm.

    Parameters
    ----------
    kind : str
        One of ``lp``, ``L2``, ``L4``, ``W12``, ``Linf``, ``Lip``,
        ``Korobov``, ``sup-of-blocks``, ``sum-of-blocks``.
    p : float
        Exponent for ``lp`` (``np.inf`` allowed).
    params : KorobovParams, optional
        Required for ``Korobov``.
    inner : NormSpec, optional
        Per-block norm for the two block kinds.

    Notes
    -----
    ``Lip`` is max(sup norm, Lipschitz constant) on piecewise-linear
    functions, and ``Linf`` is the sup norm on functions.
    """

    kind: str
    p: float = 2.0
    params: object = None
    inner: "NormSpec | None" = None

    def __post_init__(self):
        if self.kind not in _NORM_KINDS:
            raise ValueError(f"unknown norm kind {self.kind!r}")
        if self.kind == "lp" and not self.p >= 1:
            raise ValueError("p must be >= 1")
        if self.kind == "Korobov" and self.params is None:
            raise ValueError("Korobov norm needs params")
        if self.kind in ("sup-of-blocks", "sum-of-blocks") and self.inner is None:
            raise ValueError("block norms need an inner norm")

    def __call__(self, f) -> float:
        return minkowski_functional(self, f)


def lp(p: float) -> NormSpec:
    return NormSpec("lp", p=float(p))


def minkowski_functional(norm: NormSpec, f, radius: float = 1.0) -> float:
    """Minkowski functional of the ball of ``radius`` in ``norm``.

    Examples
    --------
    >>> minkowski_functional(lp(2), np.array([3.0, 4.0]))
    5.0
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    return _norm(norm, f) / radius


def _norm(norm: NormSpec, f) -> float:
    k = norm.kind
    if k == "lp":
        if not isinstance(f, np.ndarray):
            raise IncompatibleElementError(f"lp norm needs a vector, got {type(f).__name__}")
        return float(np.linalg.norm(f.ravel(), ord=norm.p)) if f.size else 0.0
    if k in ("sup-of-blocks", "sum-of-blocks"):
        if not isinstance(f, BlockFunction):
            raise IncompatibleElementError("block norm needs a BlockFunction")
        vals = [_norm(norm.inner, b) for b in f.blocks]
        return float(max(vals) if k == "sup-of-blocks" else sum(vals))
    if k == "Korobov":
        if not isinstance(f, TrigPoly):
            raise IncompatibleElementError("Korobov norm needs a TrigPoly")
        from .korobov import korobov_weights

        w = korobov_weights(f.freqs, norm.params)
        return float(np.sqrt(np.sum(w * np.abs(f.coeffs) ** 2)))
    if k == "L2" and isinstance(f, TrigPoly):
        return f.norm_l2()
    if k == "Linf" and isinstance(f, StepFunction):
        return f.sup_norm()
    if not isinstance(f, PWLinear):
        raise IncompatibleElementError(f"{k} norm not available for {type(f).__name__}")
    return {
        "L2": f.norm_l2,
        "L4": f.norm_l4,
        "W12": f.norm_w12,
        "Linf": f.sup_norm,
        "Lip": f.lip_norm,
    }[k]()


# --------------------------------------------------------------------------
# measurements


class Measurement:
    """Positively homogeneous functional applied to an element."""

    kind: str = "abstract"
    linear: bool = False

    def __call__(self, f):  # pragma: no cover - interface
        raise NotImplementedError

    def _key(self):  # pragma: no cover - interface
        raise NotImplementedError

    def __eq__(self, other):
        return type(self) is type(other) and self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def to_dict(self) -> dict:  # pragma: no cover - interface
        raise NotImplementedError


class PointEvaluation(Measurement):
    """Function value at ``x`` (a float, a Fraction or a point in [0,1]^d).

    For a :class:`BlockFunction` the evaluation applies to block ``block``.
    """

    kind = "point"
    linear = True
    __slots__ = ("x", "block")

    def __init__(self, x, block: int | None = None):
        if isinstance(x, (tuple, list, np.ndarray)):
            x = tuple(float(v) for v in x)
        self.x = x
        self.block = block

    def __call__(self, f):
        if isinstance(f, BlockFunction):
            if self.block is None:
                raise MeasurementError("block function needs a block index")
            f = f.blocks[self.block]
        elif self.block is not None:
            raise MeasurementError("block index given for a non-block element")
        if isinstance(f, PWLinear):
            if isinstance(self.x, tuple):
                raise MeasurementError("multivariate point for a univariate function")
            return f(self.x) if isinstance(self.x, Fraction) else float(f(self.x))
        if isinstance(f, TrigPoly):
            x = self.x if isinstance(self.x, tuple) else (float(self.x),)
            return f(np.array(x))
        raise MeasurementError(f"point evaluation not defined for {type(f).__name__}")

    def _key(self):
        return (self.x, self.block)

    def __repr__(self):
        b = "" if self.block is None else f", block={self.block}"
        return f"PointEvaluation({self.x}{b})"

    def to_dict(self):
        x = self.x
        if isinstance(x, Fraction):
            x = float(x)
        return {"kind": "point", "x": list(x) if isinstance(x, tuple) else x, "block": self.block}


class LinearFunctional(Measurement):
    """``f -> sum_j a_j f_j`` on vectors (no conjugation)."""

    kind = "linear"
    linear = True
    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        a = np.array(coeffs)
        if a.ndim != 1 or not np.all(np.isfinite(a)):
            raise ValueError("coefficients must be a finite 1-d array")
        a.flags.writeable = False
        self.coeffs = a

    def __call__(self, f):
        if not isinstance(f, np.ndarray) or f.shape != self.coeffs.shape:
            raise MeasurementError("linear functional needs a vector of matching length")
        return self.coeffs @ f

    def _key(self):
        return tuple(self.coeffs.tolist())

    def __repr__(self):
        return f"LinearFunctional({np.array2string(self.coeffs, precision=4)})"

    def to_dict(self):
        return {"kind": "linear", **_array_payload(self.coeffs)}


class BlockNorm(Measurement):
    """Norm of one block of a :class:`BlockFunction`; homogeneous, not linear."""

    kind = "block-norm"
    __slots__ = ("block", "norm")

    def __init__(self, block: int, norm: NormSpec):
        self.block = int(block)
        self.norm = norm

    def __call__(self, f):
        if not isinstance(f, BlockFunction):
            raise MeasurementError("block norm needs a BlockFunction")
        return self.norm(f.blocks[self.block])

    def _key(self):
        return (self.block, self.norm)

    def __repr__(self):
        return f"BlockNorm({self.block}, {self.norm.kind})"

    def to_dict(self):
        return {"kind": "block-norm", "block": self.block, "norm": self.norm.kind}


# --------------------------------------------------------------------------
# information maps and algorithms


@dataclass(frozen=True)
class CostRecord:
    """Ordered measurement log of one run; ``n`` is the cost."""

    log: tuple

    @property
    def n(self) -> int:
        return len(self.log)

    @property
    def data(self) -> tuple:
        return tuple(v for _, v in self.log)

    @property
    def measurements(self) -> tuple:
        return tuple(m for m, _ in self.log)

    def to_dict(self) -> dict:
        return {
            "cost": self.n,
            "log": [{"measurement": m.to_dict(), "value": _scalar_payload(v)} for m, v in self.log],
        }


class InformationMap:
    """Adaptive information with a stop rule and a hard cap.

    Parameters
    ----------
    selector : callable
        ``selector(j, data) -> Measurement`` for the zero-based step ``j``.
    stop : callable
        ``stop(data) -> bool``; ``True`` ends the run.
    n_max : int
        Cap on the number of measurements; exceeding it raises
        :class:`TerminationError`.
    nonadaptive : bool
        Declares that ``selector`` ignores the data and ``stop`` fires at a
        fixed length.
    """

    def __init__(self, selector, stop, n_max: int = N_MAX_DEFAULT, nonadaptive: bool = False):
        if int(n_max) < 1:
            raise ValueError("n_max must be positive")
        self.selector = selector
        self.stop = stop
        self.n_max = int(n_max)
        self.nonadaptive = bool(nonadaptive)
        self.measurements: tuple | None = None

    @classmethod
    def fixed(cls, measurements: Sequence[Measurement]) -> "InformationMap":
        """Non-adaptive information with a fixed measurement list."""
        ms = tuple(measurements)
        n = len(ms)
        info = cls(lambda j, data: ms[j], lambda data: len(data) >= n, max(n, 1), nonadaptive=True)
        info.measurements = ms
        return info

    @property
    def length(self) -> int | None:
        return None if self.measurements is None else len(self.measurements)

    def measure(self, f) -> CostRecord:
        if self.measurements is not None:
            return CostRecord(tuple((L, L(f)) for L in self.measurements))
        data: list = []
        log: list = []
        while not self.stop(data):
            if len(data) >= self.n_max:
                raise TerminationError(f"stop rule did not fire within n_max={self.n_max}")
            L = self.selector(len(data), data)
            y = L(f)
            data.append(y)
            log.append((L, y))
        return CostRecord(tuple(log))

    def __call__(self, f) -> tuple:
        return self.measure(f).data


class AdaptiveAlgorithm:
    """An information map paired with a recovery map on the data."""

    def __init__(self, info: InformationMap, recovery: Callable):
        self.info = info
        self.recovery = recovery

    def run(self, f):
        record = self.info.measure(f)
        return self.recovery(record.data), record

    def __call__(self, f):
        return self.run(f)[0]


def run_algorithm(alg: AdaptiveAlgorithm, f):
    """Run ``alg`` on ``f``.

    Returns
    -------
    output : element
    record : CostRecord
    """
    return alg.run(f)


def linear_information(N) -> InformationMap:
    """Non-adaptive information given by the rows of a matrix."""
    N = np.atleast_2d(np.asarray(N))
    return InformationMap.fixed([LinearFunctional(row) for row in N])


def measurement_matrix(info: InformationMap) -> np.ndarray:
    """Stack the coefficient rows of a fixed linear information map."""
    if info.measurements is None:
        raise ValueError("information map is not a fixed list")
    rows = []
    for L in info.measurements:
        if not isinstance(L, LinearFunctional):
            raise MeasurementError("non-linear measurement in information map")
        rows.append(L.coeffs)
    return np.array(rows)


# --------------------------------------------------------------------------
# input sets and sampling


@dataclass(frozen=True)
class InputSetSpec:
    """A norm ball or a cone.

    Use :meth:`ball` or :meth:`cone` to construct.
    """

    kind: str
    radius: float = 1.0
    norm: NormSpec | None = None
    cone_spec: object = None

    def __post_init__(self):
        if self.kind == "ball":
            if not self.radius > 0 or self.norm is None:
                raise ValueError("ball needs a positive radius and a norm")
        elif self.kind == "cone":
            if self.cone_spec is None:
                raise ValueError("cone kind needs a ConeSpec")
        else:
            raise ValueError(f"unknown input set kind {self.kind!r}")

    @classmethod
    def ball(cls, norm: NormSpec, radius: float = 1.0) -> "InputSetSpec":
        return cls("ball", radius=float(radius), norm=norm)

    @classmethod
    def cone(cls, cone_spec) -> "InputSetSpec":
        return cls("cone", cone_spec=cone_spec)

    def contains(self, f, rtol: float = 1e-12) -> bool:
        if self.kind == "ball":
            return minkowski_functional(self.norm, f, self.radius) <= 1.0 + rtol
        return self.cone_spec.contains(f, rtol=rtol)


def lp_ball_sampler(m: int, p: float, complex_: bool = False, vertex_share: float = 0.25,
                    interior_share: float = 0.1):
    """Sampler for the unit lp ball in R^m or C^m.

    Draws a mix of boundary points (normalized Gaussian directions),
    vertices where the ball is a polytope, and interior points.

    Returns
    -------
    callable
        ``sampler(rng, count) -> ndarray`` of shape ``(count, m)``.
    """
    p = float(p)

    def sampler(rng, count):
        X = rng.standard_normal((count, m))
        if complex_:
            X = X + 1j * rng.standard_normal((count, m))
        if p == 1:
            # heavy-tailed directions reach the sparse parts of the boundary
            X = X * rng.exponential(size=(count, m)) ** 3
        X = X / np.linalg.norm(X, ord=p, axis=1, keepdims=True)
        nv = int(vertex_share * count) if not complex_ and p in (1.0, np.inf) else 0
        if nv:
            if p == 1:
                idx = rng.integers(0, m, nv)
                V = np.zeros((nv, m))
                V[np.arange(nv), idx] = rng.choice([-1.0, 1.0], nv)
            else:
                V = rng.choice([-1.0, 1.0], (nv, m))
            X[:nv] = V
        ni = int(interior_share * count)
        if ni:
            X[count - ni:] *= rng.random((ni, 1))
        return X

    return sampler


def worst_case_error_sampled(alg, S, input_set: InputSetSpec, sampler, trials: int, rng=None,
                             norm: NormSpec | None = None, return_rejected: bool = False):
    """Sampled lower bound for the worst-case error of ``alg``.

    Parameters
    ----------
    alg, S : callable
        Algorithm and solution operator, both mapping an input to an output.
    input_set : InputSetSpec
        Drawn elements outside the set are rejected and counted.
    sampler : callable or sequence
        ``sampler(rng, trials)`` producing inputs, or an explicit sequence.
    trials : int
    norm : NormSpec, optional
        Output norm; defaults to the Euclidean norm for vectors.

    Returns
    -------
    float, or (float, int) with the rejection count when requested.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng)
    pool = sampler(rng, trials) if callable(sampler) else list(sampler)[:trials]
    worst, rejected = 0.0, 0
    for f in pool:
        if not input_set.contains(f):
            rejected += 1
            continue
        diff = S(f) - alg(f)
        e = np.linalg.norm(np.ravel(diff)) if norm is None else norm(diff)
        worst = max(worst, float(e))
    return (worst, rejected) if return_rejected else worst


# --------------------------------------------------------------------------
# JSON payloads


def _array_payload(a) -> dict:
    a = np.asarray(a)
    if np.iscomplexobj(a):
        return {"field": "complex", "re": a.real.tolist(), "im": a.imag.tolist()}
    return {"field": "real", "re": a.astype(float).tolist()}


def _array_from_payload(d) -> np.ndarray:
    re = np.array(d["re"], dtype=float)
    return re + 1j * np.array(d["im"], dtype=float) if d.get("field") == "complex" else re


def _scalar_payload(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, (complex, np.complexfloating)):
        return [float(v.real), float(v.imag)]
    if isinstance(v, Number):
        return float(v)
    return element_to_dict(v)


def element_to_dict(e) -> dict:
    """JSON-ready dict with a ``kind`` tag and payload arrays."""
    if isinstance(e, np.ndarray):
        return {"kind": "vector", **_array_payload(e)}
    if isinstance(e, PWLinear):
        return {"kind": "pwlinear", "x": e.x.tolist(), "v": e.v.tolist()}
    if isinstance(e, StepFunction):
        return {"kind": "step", "edges": e.edges.tolist(), "values": e.values.tolist()}
    if isinstance(e, TrigPoly):
        return {"kind": "trigpoly", "freqs": e.freqs.tolist(), **_array_payload(e.coeffs)}
    if isinstance(e, BlockFunction):
        return {"kind": "blocks", "blocks": [element_to_dict(b) for b in e.blocks]}
    raise IncompatibleElementError(f"cannot serialize {type(e).__name__}")


def element_from_dict(d: dict):
    kind = d["kind"]
    if kind == "vector":
        return _array_from_payload(d)
    if kind == "pwlinear":
        return PWLinear(d["x"], d["v"])
    if kind == "step":
        return StepFunction(d["edges"], d["values"])
    if kind == "trigpoly":
        F = np.array(d["freqs"], dtype=np.int64)
        return TrigPoly(F, _array_from_payload(d))
    if kind == "blocks":
        return BlockFunction(element_from_dict(b) for b in d["blocks"])
    raise ValueError(f"unknown element kind {kind!r}")
