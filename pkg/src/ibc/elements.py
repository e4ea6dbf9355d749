"""Input and output elements with closed-form norms.

Three element kinds are supported besides plain numpy vectors:

* :class:`PWLinear` -- continuous piecewise-linear functions on [0, 1],
* :class:`StepFunction` -- piecewise-constant functions on [0, 1],
* :class:`TrigPoly` -- finite trigonometric polynomials on the torus,

plus :class:`BlockFunction`, a finite tuple of functions. Every norm used
by the library is evaluated from segment-wise polynomial integrals or from
Parseval's identity, so no quadrature enters the error bookkeeping.
"""

from __future__ import annotations

import csv
import io
from fractions import Fraction
from numbers import Real

import numpy as np


class IncompatibleElementError(TypeError):
    """Raised when an operation is applied to an element of the wrong kind."""


class PWLinear:
    """Continuous piecewise-linear function on [0, 1].

    Parameters
    ----------
    x : array_like
        Breakpoints, strictly increasing, ``x[0] == 0`` and ``x[-1] == 1``.
    v : array_like
        Values at the breakpoints.

    Notes
    -----
    Calling the function on a :class:`fractions.Fraction` evaluates it in
    exact rational arithmetic on the stored (binary) breakpoints.
    """

    __slots__ = ("x", "v")

    def __init__(self, x, v):
        x = np.array(x, dtype=float)
        v = np.array(v, dtype=float)
        if x.ndim != 1 or v.shape != x.shape or x.size < 2:
            raise ValueError("breakpoints and values must be 1-d of equal length >= 2")
        if x[0] != 0.0 or x[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if not np.all(np.diff(x) > 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not (np.all(np.isfinite(x)) and np.all(np.isfinite(v))):
            raise ValueError("non-finite breakpoint or value")
        x.flags.writeable = False
        v.flags.writeable = False
        self.x = x
        self.v = v

    # construction helpers
    @classmethod
    def constant(cls, c: float) -> "PWLinear":
        return cls([0.0, 1.0], [c, c])

    @classmethod
    def zero(cls) -> "PWLinear":
        return cls.constant(0.0)

    @classmethod
    def from_function(cls, fn, x) -> "PWLinear":
        x = np.asarray(x, dtype=float)
        return cls(x, [fn(xi) for xi in x])

    # evaluation
    def __call__(self, t):
        if isinstance(t, Fraction):
            return self._eval_exact(t)
        return np.interp(t, self.x, self.v)

    def _eval_exact(self, t: Fraction) -> Fraction:
        if t < 0 or t > 1:
            raise ValueError("evaluation point outside [0, 1]")
        i = int(np.searchsorted(self.x, float(t), side="right")) - 1
        i = min(max(i, 0), self.x.size - 2)
        # float(t) may round across a breakpoint; fix up exactly
        while i > 0 and Fraction(self.x[i]) > t:
            i -= 1
        while i < self.x.size - 2 and Fraction(self.x[i + 1]) < t:
            i += 1
        x0, x1 = Fraction(self.x[i]), Fraction(self.x[i + 1])
        v0, v1 = Fraction(self.v[i]), Fraction(self.v[i + 1])
        return v0 + (v1 - v0) * (t - x0) / (x1 - x0)

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.v) / np.diff(self.x)

    # closed-form functionals
    def integral(self) -> float:
        h = np.diff(self.x)
        return float(np.sum(h * (self.v[:-1] + self.v[1:]) / 2))

    def _power_integral(self, p: int) -> float:
        # int_0^h (a + (b-a)s/h)^p ds = h * sum_{i=0}^p a^i b^(p-i) / (p+1)
        a, b = self.v[:-1], self.v[1:]
        h = np.diff(self.x)
        s = sum(a**i * b ** (p - i) for i in range(p + 1))
        return float(np.sum(h * s) / (p + 1))

    def norm_l2(self) -> float:
        return float(np.sqrt(max(self._power_integral(2), 0.0)))

    def norm_l4(self) -> float:
        return float(max(self._power_integral(4), 0.0) ** 0.25)

    def deriv_l2(self) -> float:
        dv = np.diff(self.v)
        return float(np.sqrt(np.sum(dv * dv / np.diff(self.x))))

    def norm_w12(self) -> float:
        return float(np.hypot(self.norm_l2(), self.deriv_l2()))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.v)))

    def lip(self) -> float:
        return float(np.max(np.abs(self.slopes)))

    def lip_norm(self) -> float:
        """max(sup norm, Lipschitz constant)."""
        return max(self.sup_norm(), self.lip())

    def exact_power_integral(self, p: int) -> Fraction:
        """Exact rational value of the integral of f**p over [0, 1]."""
        total = Fraction(0)
        xs = [Fraction(xi) for xi in self.x]
        vs = [Fraction(vi) for vi in self.v]
        for i in range(len(xs) - 1):
            a, b, h = vs[i], vs[i + 1], xs[i + 1] - xs[i]
            total += h * sum(a**j * b ** (p - j) for j in range(p + 1)) / (p + 1)
        return total

    def exact_deriv_sq(self) -> Fraction:
        """Exact rational value of the integral of (f')**2."""
        total = Fraction(0)
        for i in range(self.x.size - 1):
            dv = Fraction(self.v[i + 1]) - Fraction(self.v[i])
            total += dv * dv / (Fraction(self.x[i + 1]) - Fraction(self.x[i]))
        return total

    # arithmetic
    def _merged(self, other: "PWLinear"):
        x = np.union1d(self.x, other.x)
        return x, np.interp(x, self.x, self.v), np.interp(x, other.x, other.v)

    def __add__(self, other):
        if not isinstance(other, PWLinear):
            return NotImplemented
        x, a, b = self._merged(other)
        return PWLinear(x, a + b)

    def __sub__(self, other):
        if not isinstance(other, PWLinear):
            return NotImplemented
        x, a, b = self._merged(other)
        return PWLinear(x, a - b)

    def __mul__(self, c):
        if not isinstance(c, Real):
            return NotImplemented
        return PWLinear(self.x, float(c) * self.v)

    __rmul__ = __mul__

    def __neg__(self):
        return PWLinear(self.x, -self.v)

    def __eq__(self, other):
        return (
            isinstance(other, PWLinear)
            and np.array_equal(self.x, other.x)
            and np.array_equal(self.v, other.v)
        )

    __hash__ = None

    def __repr__(self):
        return f"PWLinear(breakpoints={self.x.size})"

    # serialization
    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "v"])
        for xi, vi in zip(self.x, self.v):
            w.writerow([repr(float(xi)), repr(float(vi))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "PWLinear":
        rows = list(csv.reader(io.StringIO(text)))
        body = [r for r in rows[1:] if r]
        return cls([float(r[0]) for r in body], [float(r[1]) for r in body])


class StepFunction:
    """Piecewise-constant function on [0, 1].

    Takes value ``c[i]`` on ``[e[i], e[i+1])`` and ``c[-1]`` at 1.
    """

    __slots__ = ("edges", "values")

    def __init__(self, edges, values):
        e = np.array(edges, dtype=float)
        c = np.array(values, dtype=float)
        if e.ndim != 1 or e.size != c.size + 1 or c.size < 1:
            raise ValueError("need len(edges) == len(values) + 1")
        if e[0] != 0.0 or e[-1] != 1.0 or not np.all(np.diff(e) > 0):
            raise ValueError("edges must increase strictly from 0 to 1")
        self.edges = e
        self.values = c

    @classmethod
    def zero(cls) -> "StepFunction":
        return cls([0.0, 1.0], [0.0])

    def __call__(self, t):
        i = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, self.values.size - 1)
        return self.values[i]

    def sup_distance(self, f: PWLinear) -> float:
        """Exact sup |f - self| over [0, 1]."""
        x = np.union1d(f.x, self.edges)
        best = 0.0
        for i in range(x.size - 1):
            a, b = x[i], x[i + 1]
            c = self(0.5 * (a + b))
            # f is affine on [a, b]; |f - c| peaks at an endpoint
            best = max(best, abs(f(a) - c), abs(f(b) - c))
        return float(best)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def __mul__(self, c):
        if not isinstance(c, Real):
            return NotImplemented
        return StepFunction(self.edges, float(c) * self.values)

    __rmul__ = __mul__

    def __repr__(self):
        return f"StepFunction(cells={self.values.size})"


class BlockFunction:
    """Finite tuple of univariate functions, one per block."""

    __slots__ = ("blocks",)

    def __init__(self, blocks):
        blocks = tuple(blocks)
        if not blocks:
            raise ValueError("at least one block required")
        self.blocks = blocks

    @property
    def M(self) -> int:
        return len(self.blocks)

    def __getitem__(self, i):
        return self.blocks[i]

    def __len__(self):
        return len(self.blocks)

    def __mul__(self, c):
        if not isinstance(c, Real):
            return NotImplemented
        return BlockFunction(b * c for b in self.blocks)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __add__(self, other):
        if not isinstance(other, BlockFunction) or other.M != self.M:
            return NotImplemented
        return BlockFunction(a + b for a, b in zip(self.blocks, other.blocks))

    def __sub__(self, other):
        return self + (-other)

    def __repr__(self):
        return f"BlockFunction(M={self.M})"


class TrigPoly:
    """Finite trigonometric polynomial sum_k c_k exp(2 pi i k.x) on [0,1)^d.

    Parameters
    ----------
    freqs : array_like of int, shape (K, d)
        Frequency vectors. Duplicates are merged by summing coefficients.
    coeffs : array_like of complex, shape (K,)
    """

    __slots__ = ("freqs", "coeffs")

    def __init__(self, freqs, coeffs):
        F = np.asarray(freqs, dtype=np.int64)
        c = np.asarray(coeffs, dtype=complex).reshape(-1)
        if F.ndim == 1:
            F = F.reshape(c.size, -1) if c.size else F.reshape(0, 1)
        if F.ndim != 2 or F.shape[0] != c.size or F.shape[1] < 1:
            raise ValueError("freqs must have shape (K, d) matching coeffs (K,)")
        if not np.all(np.isfinite(c)):
            raise ValueError("non-finite coefficient")
        if F.shape[0] > 1:
            U, inv = np.unique(F, axis=0, return_inverse=True)
            if U.shape[0] < F.shape[0]:
                c = np.bincount(inv.ravel(), weights=c.real, minlength=U.shape[0]) + 1j * np.bincount(
                    inv.ravel(), weights=c.imag, minlength=U.shape[0]
                )
                F = U
        F.flags.writeable = False
        c.flags.writeable = False
        self.freqs = F
        self.coeffs = c

    @classmethod
    def zero(cls, d: int) -> "TrigPoly":
        return cls(np.zeros((1, d), dtype=np.int64), [0.0])

    @property
    def d(self) -> int:
        return self.freqs.shape[1]

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        X = np.atleast_2d(x)
        if X.shape[1] != self.d:
            raise IncompatibleElementError("point dimension does not match polynomial")
        val = np.exp(2j * np.pi * (X @ self.freqs.T)) @ self.coeffs
        return complex(val[0]) if single else val

    def coefficient(self, k) -> complex:
        hit = np.all(self.freqs == np.asarray(k, dtype=np.int64), axis=1)
        return complex(self.coeffs[hit].sum())

    def as_dict(self) -> dict:
        return {tuple(int(v) for v in k): complex(c) for k, c in zip(self.freqs, self.coeffs)}

    def norm_l2(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def sup_bound(self) -> float:
        """Upper bound sum |c_k| for the sup norm."""
        return float(np.sum(np.abs(self.coeffs)))

    def restrict(self, freqs) -> "TrigPoly":
        """Keep only the frequencies contained in ``freqs``."""
        keep = _row_membership(self.freqs, np.asarray(freqs, dtype=np.int64))
        if not keep.any():
            return TrigPoly.zero(self.d)
        return TrigPoly(self.freqs[keep], self.coeffs[keep])

    def _combine(self, other, sign):
        if not isinstance(other, TrigPoly):
            return NotImplemented
        if other.d != self.d:
            raise IncompatibleElementError("dimension mismatch")
        return TrigPoly(
            np.vstack([self.freqs, other.freqs]),
            np.concatenate([self.coeffs, sign * other.coeffs]),
        )

    def __add__(self, other):
        return self._combine(other, 1.0)

    def __sub__(self, other):
        return self._combine(other, -1.0)

    def __mul__(self, c):
        if not isinstance(c, (Real, complex, np.number)):
            return NotImplemented
        return TrigPoly(self.freqs, complex(c) * self.coeffs)

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __repr__(self):
        return f"TrigPoly(d={self.d}, terms={self.coeffs.size})"

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow([f"k{j + 1}" for j in range(self.d)] + ["re", "im"])
        for k, c in zip(self.freqs, self.coeffs):
            w.writerow([int(v) for v in k] + [repr(float(c.real)), repr(float(c.imag))])
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "TrigPoly":
        rows = [r for r in csv.reader(io.StringIO(text)) if r]
        d = len(rows[0]) - 2
        body = rows[1:]
        F = [[int(v) for v in r[:d]] for r in body]
        c = [float(r[d]) + 1j * float(r[d + 1]) for r in body]
        return cls(np.array(F, dtype=np.int64).reshape(-1, d), c)


def _row_membership(rows: np.ndarray, table: np.ndarray) -> np.ndarray:
    """Boolean mask: which rows of ``rows`` occur in ``table``."""
    if table.size == 0:
        return np.zeros(rows.shape[0], dtype=bool)
    keys = {tuple(r) for r in table.tolist()}
    return np.array([tuple(r) in keys for r in rows.tolist()], dtype=bool)
