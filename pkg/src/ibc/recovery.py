"""Optimal recovery for finite-dimensional linear problems.

The input set is the unit lp ball of R^m or C^m (p in {1, 2, inf}), the
solution operator a matrix ``S`` and the information a matrix ``N``.

For p in {1, inf} the sets involved are polytopes, and the maximum of a
convex function over a fiber ``{f : Nf = y, |f|_p <= 1}`` is attained at a
vertex. :class:`SectionPolytope` enumerates these vertices by solving one
small linear system per candidate face. :func:`min_norm_preimage` uses
the same idea to compute exact minimum-norm preimages for small ``m``.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
from scipy.linalg import hadamard

from .core import (
    AdaptiveAlgorithm,
    InformationMap,
    MeasurementError,
    NormSpec,
    linear_information,
    lp,
    lp_ball_sampler,
)
from .simplex import l1_min, linf_min

ENUM_LIMIT = 8
RANK_TOL = 1e-10


class RangeError(ValueError):
    """Data vector is not in the range of the information matrix."""


class ConvergenceError(RuntimeError):
    """Iterative solver hit its iteration cap."""


def _check_p(p) -> float:
    p = float(p)
    if p not in (1.0, 2.0, np.inf):
        raise ValueError("p must be 1, 2 or inf")
    return p


@dataclass(frozen=True, eq=False)
class FiniteLinearProblem:
    """Solution matrix ``S`` (k x m), information ``N`` (n x m), lp input ball.

    Parameters
    ----------
    S, N : array_like
        ``N`` may have zero rows; pass ``np.zeros((0, m))``.
    p : float
        Input ball exponent, 1, 2 or ``np.inf``.
    out_norm : NormSpec
        Output norm, Euclidean by default.
    """

    S: np.ndarray
    N: np.ndarray
    p: float = 2.0
    out_norm: NormSpec = lp(2)

    def __post_init__(self):
        S = np.atleast_2d(np.asarray(self.S))
        N = np.asarray(self.N)
        if N.ndim == 1:
            N = N.reshape(-1, S.shape[1]) if N.size else np.zeros((0, S.shape[1]))
        if N.shape[1] != S.shape[1]:
            raise ValueError("S and N must have the same number of columns")
        if N.shape[0] > N.shape[1]:
            raise ValueError("need n <= m")
        if not (np.all(np.isfinite(S)) and np.all(np.isfinite(N))):
            raise ValueError("non-finite matrix entry")
        object.__setattr__(self, "S", S)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "p", _check_p(self.p))

    @property
    def m(self) -> int:
        return self.S.shape[1]

    @property
    def n(self) -> int:
        return self.N.shape[0]

    @property
    def is_complex(self) -> bool:
        return bool(np.iscomplexobj(self.S) or np.iscomplexobj(self.N))

    def solution(self, f):
        return self.S @ f

    def information(self, f):
        return self.N @ f

    def input_norm(self, f) -> float:
        return float(np.linalg.norm(f, ord=self.p))

    def sampler(self, **kw):
        return lp_ball_sampler(self.m, self.p, complex_=self.is_complex, **kw)

    def with_information(self, N) -> "FiniteLinearProblem":
        return FiniteLinearProblem(self.S, N, self.p, self.out_norm)


def kernel_basis(N, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis (columns) of ker N; singular values <= tol count as zero."""
    N = np.asarray(N)
    m = N.shape[1]
    if N.shape[0] == 0:
        return np.eye(m, dtype=N.dtype if np.iscomplexobj(N) else float)
    _, s, Vh = np.linalg.svd(N)
    r = int(np.sum(s > tol))
    return Vh[r:].conj().T


def numerical_rank(N, tol: float = RANK_TOL) -> int:
    N = np.asarray(N)
    if N.size == 0:
        return 0
    return int(np.sum(np.linalg.svd(N, compute_uv=False) > tol))


# --------------------------------------------------------------------------
# vertex enumeration


def _sign_patterns(q: int) -> np.ndarray:
    if q == 0:
        return np.ones((1, 0))
    return np.array(list(product((1.0, -1.0), repeat=q)))


def _pinv_full_rank(A):
    """pinv of a stack of matrices with a full-column-rank mask."""
    U, s, Vh = np.linalg.svd(A, full_matrices=False)
    smax = np.maximum(s[..., :1], 1.0)
    ok = np.all(s > 1e-9 * smax, axis=-1)
    sinv = np.where(s > 1e-9 * smax, 1.0 / np.where(s == 0, 1.0, s), 0.0)
    P = np.einsum("...ji,...j,...kj->...ik", Vh.conj(), sinv, U.conj())
    return P, ok


class SectionPolytope:
    """Vertices of ``{f in R^m : Nf = y, |f|_p <= 1}`` for p in {1, inf}.

    All candidate faces are prepared once; :meth:`vertices` then costs a
    few batched matrix products per data vector ``y``.
    """

    def __init__(self, N, p):
        N = np.asarray(N, dtype=float)
        self.N = N
        self.p = _check_p(p)
        if self.p == 2:
            raise ValueError("the l2 ball is not a polytope")
        n, m = N.shape
        if m > ENUM_LIMIT:
            raise ValueError(f"vertex enumeration limited to m <= {ENUM_LIMIT}")
        self.m, self.n = m, n
        self.rank = numerical_rank(N)
        self.groups = self._build_l1() if self.p == 1 else self._build_linf()
        self._injective = self.rank == m
        self._pinv = np.linalg.pinv(N) if n else np.zeros((m, 0))

    def _build_l1(self):
        N, m = self.N, self.m
        groups = []
        for q in range(1, min(self.rank + 1, m) + 1):
            Js = np.array(list(combinations(range(m), q)))
            sig = _sign_patterns(q)
            J = np.repeat(Js, len(sig), axis=0)
            S = np.tile(sig, (len(Js), 1))
            # [N_J diag(s); 1^T] w = [y; 1]
            A = np.concatenate([N[:, J].transpose(1, 0, 2) * S[:, None, :], np.ones((len(J), 1, q))], axis=1)
            P, ok = _pinv_full_rank(A)
            groups.append({"J": J[ok], "S": S[ok], "A": A[ok], "P": P[ok]})
        return groups

    def _build_linf(self):
        N, m = self.N, self.m
        groups = []
        for q in range(0, self.rank + 1):
            Js = list(combinations(range(m), q))
            Jl, Sl, Al, Pl, Cl = [], [], [], [], []
            for J in Js:
                Jc = [i for i in range(m) if i not in J]
                NJ = N[:, list(J)]
                if q:
                    P, ok = _pinv_full_rank(NJ[None])
                    if not ok[0]:
                        continue
                    P = P[0]
                else:
                    P = np.zeros((0, self.n))
                sig = _sign_patterns(m - q)
                C = sig @ N[:, Jc].T  # (patterns, n)
                for s, c in zip(sig, C):
                    Jl.append(J)
                    Sl.append(s)
                    Al.append(NJ)
                    Pl.append(P)
                    Cl.append(c)
            if Jl:
                groups.append({
                    "J": np.array(Jl, dtype=int).reshape(len(Jl), q),
                    "S": np.array(Sl).reshape(len(Jl), m - q),
                    "A": np.array(Al).reshape(len(Jl), self.n, q),
                    "P": np.array(Pl).reshape(len(Jl), q, self.n),
                    "C": np.array(Cl).reshape(len(Jl), self.n),
                })
        return groups

    def vertices(self, y, tol: float = 1e-9) -> np.ndarray:
        """Array of shape (V, m); empty if the fiber is empty."""
        y = np.asarray(y, dtype=float).reshape(self.n)
        out = []
        scale = 1.0 + np.linalg.norm(y)
        if self._injective:
            f = self._pinv @ y
            if np.linalg.norm(self.N @ f - y) <= tol * scale and np.linalg.norm(f, ord=self.p) <= 1 + tol:
                out.append(f)
        for g in self.groups:
            if self.p == 1:
                rhs = np.append(y, 1.0)
                w = g["P"] @ rhs
                res = np.linalg.norm(np.einsum("bij,bj->bi", g["A"], w) - rhs, axis=1)
                keep = (res <= tol * scale) & np.all(w >= -tol, axis=1)
                if not keep.any():
                    continue
                V = np.zeros((int(keep.sum()), self.m))
                rows = np.arange(V.shape[0])[:, None]
                V[rows, g["J"][keep]] = g["S"][keep] * np.clip(w[keep], 0.0, None)
            else:
                rhs = y[None, :] - g["C"]
                u = np.einsum("bij,bj->bi", g["P"], rhs)
                res = np.linalg.norm(np.einsum("bij,bj->bi", g["A"], u) - rhs, axis=1)
                keep = (res <= tol * scale) & np.all(np.abs(u) <= 1 + tol, axis=1)
                if not keep.any():
                    continue
                k = int(keep.sum())
                V = np.zeros((k, self.m))
                J, S = g["J"][keep], g["S"][keep]
                mask = np.ones((k, self.m), dtype=bool)
                rows = np.arange(k)[:, None]
                if J.shape[1]:
                    V[rows, J] = np.clip(u[keep], -1.0, 1.0)
                    mask[rows, J] = False
                V[mask] = S.ravel()
            out.extend(V)
        if not out:
            return np.zeros((0, self.m))
        return np.unique(np.round(np.array(out), 12), axis=0)


def diam_oracle(problem: FiniteLinearProblem, return_witness: bool = False):
    """Diameter of information ``2 max{|Sh| : h in ker N, |h|_p <= 1}``.

    p = 2 uses the largest singular value of ``S Z`` with ``Z`` an
    orthonormal kernel basis (Euclidean output norm only). p in {1, inf}
    maximizes the output norm over the vertices of the kernel section.

    Returns
    -------
    float, or (float, ndarray) with a maximizing ``h`` when requested.
    """
    S, N, p = problem.S, problem.N, problem.p
    if p == 2:
        if problem.out_norm != lp(2):
            raise ValueError("p = 2 oracle needs the Euclidean output norm")
        Z = kernel_basis(N)
        if Z.shape[1] == 0:
            h = np.zeros(problem.m, dtype=Z.dtype)
            return (0.0, h) if return_witness else 0.0
        U, s, Vh = np.linalg.svd(S @ Z)
        h = Z @ Vh[0].conj()
        val = 2.0 * float(s[0]) if s.size else 0.0
        return (val, h) if return_witness else val
    if problem.is_complex:
        raise ValueError("complex l1/linf balls are not polytopes; use p = 2")
    V = SectionPolytope(N, p).vertices(np.zeros(problem.n))
    norms = np.array([problem.out_norm(S @ v) for v in V]) if len(V) else np.zeros(1)
    i = int(np.argmax(norms))
    h = V[i] if len(V) else np.zeros(problem.m)
    val = 2.0 * float(norms[i])
    return (val, h) if return_witness else val


def fiber_error(problem: FiniteLinearProblem, y, output, section: SectionPolytope | None = None) -> float:
    """Exact ``max{|Sf - output| : Nf = y, |f|_p <= 1}`` for p in {1, inf}."""
    section = section or SectionPolytope(problem.N, problem.p)
    V = section.vertices(y)
    if not len(V):
        return 0.0
    D = V @ problem.S.T - np.asarray(output)[None, :]
    return float(max(problem.out_norm(d) for d in D))


# --------------------------------------------------------------------------
# minimum-norm preimages


class _VertexMinNorm:
    """Exact min |f|_p subject to Nf = y, p in {1, inf}, by basis enumeration."""

    def __init__(self, N, p):
        N = np.asarray(N, dtype=float)
        self.N, self.p = N, _check_p(p)
        n, m = N.shape
        if m > ENUM_LIMIT:
            raise ValueError(f"exact solver limited to m <= {ENUM_LIMIT}")
        self.m, self.n = m, n
        r = numerical_rank(N)
        self.groups = []
        if self.p == 1:
            for q in range(1, r + 1):
                J = np.array(list(combinations(range(m), q)))
                A = N[:, J].transpose(1, 0, 2)
                P, ok = _pinv_full_rank(A)
                self.groups.append((J[ok], None, A[ok], P[ok]))
        else:
            for q in range(0, r):
                Jl, Sl, Al = [], [], []
                for J in combinations(range(m), q):
                    Jc = [i for i in range(m) if i not in J]
                    for s in _sign_patterns(m - q):
                        Jl.append(J)
                        Sl.append(s)
                        Al.append(np.column_stack([N[:, list(J)], N[:, Jc] @ s]))
                A = np.array(Al)
                P, ok = _pinv_full_rank(A)
                J = np.array(Jl, dtype=int).reshape(len(Jl), q)
                S = np.array(Sl).reshape(len(Jl), m - q)
                self.groups.append((J[ok], S[ok], A[ok], P[ok]))

    def __call__(self, y, tol: float = 1e-9):
        y = np.asarray(y, dtype=float).reshape(self.n)
        if not np.any(y):
            return np.zeros(self.m)
        scale = 1.0 + np.linalg.norm(y)
        cands, objs = [], []
        for J, S, A, P in self.groups:
            u = P @ y
            res = np.linalg.norm(np.einsum("bij,bj->bi", A, u) - y, axis=1)
            keep = res <= tol * scale
            if self.p == 1:
                obj = np.abs(u).sum(axis=1)
            else:
                t = u[:, -1]
                keep &= (t >= -tol) & np.all(np.abs(u[:, :-1]) <= t[:, None] * (1 + tol) + tol, axis=1)
                obj = np.abs(t)
            for b in np.flatnonzero(keep):
                f = np.zeros(self.m)
                if self.p == 1:
                    f[J[b]] = u[b]
                else:
                    t = abs(u[b, -1])
                    mask = np.ones(self.m, dtype=bool)
                    mask[J[b]] = False
                    f[J[b]] = np.clip(u[b, :-1], -t, t)
                    f[mask] = S[b] * t
                cands.append(f)
                objs.append(obj[b])
        if not cands:
            raise RangeError("no feasible basis found; y outside range(N)?")
        objs = np.array(objs)
        best = objs.min()
        i = int(np.flatnonzero(objs <= best * (1 + 1e-9) + 1e-15)[0])
        return cands[i]


def min_norm_preimage(N, y, p, delta: float = 0.0, method: str = "auto", _solver=None):
    """A preimage ``s`` of ``y`` with ``|s|_p <= (1 + delta) K(y)``.

    Parameters
    ----------
    N : array_like, shape (n, m)
    y : array_like, shape (n,)
    p : {1, 2, inf}
    delta : float
        Allowed relative excess over the minimum norm ``K(y)``; only the
        iterative l1 route uses it.
    method : {"auto", "vertex", "iterative", "simplex"}
        ``auto`` picks the exact vertex solver for m <= 8, basis pursuit
        (p = 1) or the in-repo simplex solver (p = inf) above that.

    Raises
    ------
    RangeError
        If ``y`` is not in the range of ``N``.
    """
    N = np.asarray(N)
    y = np.asarray(y).reshape(N.shape[0])
    p = _check_p(p)
    m = N.shape[1]
    if not np.any(y):
        return np.zeros(m, dtype=np.result_type(N, y, float))
    if N.shape[0] == 0:
        return np.zeros(m)
    if p == 2:
        f, *_ = np.linalg.lstsq(N, y, rcond=None)
    else:
        if np.iscomplexobj(N) or np.iscomplexobj(y):
            raise ValueError("complex data supported for p = 2 only")
        if method == "auto":
            method = "vertex" if m <= ENUM_LIMIT else ("iterative" if p == 1 else "simplex")
        if method == "vertex":
            f = (_solver or _VertexMinNorm(N, p))(y)
        elif method == "iterative":
            if p != 1:
                raise ValueError("iterative route available for p = 1 only")
            f = basis_pursuit(N, y, tol=max(delta, 1e-8))
        elif method == "simplex":
            f = l1_min(N, y) if p == 1 else linf_min(N, y)
        else:
            raise ValueError(f"unknown method {method!r}")
    if np.linalg.norm(N @ f - y) > 1e-9 * max(np.linalg.norm(y), 1e-300) * max(1.0, np.linalg.norm(N, 2)):
        raise RangeError("y is not in the range of N")
    return f


# --------------------------------------------------------------------------
# homogeneous recovery


def homogenize(phi):
    """Extend a positively homogeneous ``phi`` to a fully homogeneous map.

    Write ``y = lam * y_plus`` with ``|lam| = 1`` and the first nonzero
    entry of ``y_plus`` real and positive; return ``lam * phi(y_plus)``.
    """

    def phi_star(y):
        y = np.asarray(y)
        nz = np.flatnonzero(y)
        if nz.size == 0:
            return phi(y)
        lead = y[nz[0]]
        lam = lead / abs(lead)
        if np.iscomplexobj(y):
            return lam * phi(y * np.conj(lam))
        return lam * phi(y * lam)

    phi_star.base = phi
    return phi_star


class RecoveryMap:
    """Fully homogeneous recovery ``y -> S s(y)`` built on an approximate spline.

    Attributes
    ----------
    problem : FiniteLinearProblem
    delta : float
    matrix : ndarray or None
        For p = 2 the map is linear and equals ``S pinv(N)``.
    """

    def __init__(self, problem: FiniteLinearProblem, delta: float = 0.01):
        if not delta > 0:
            raise ValueError("delta must be positive")
        self.problem = problem
        self.delta = float(delta)
        N, p = problem.N, problem.p
        self._solver = None
        if p != 2 and not problem.is_complex and problem.m <= ENUM_LIMIT and problem.n:
            self._solver = _VertexMinNorm(N, p)
        self.matrix = problem.S @ np.linalg.pinv(N) if p == 2 and problem.n else None
        self._phi_star = homogenize(self._phi_plus)

    def spline(self, y):
        """Approximate spline ``s(y)``, positively homogeneous by rescaling."""
        y = np.asarray(y)
        c = float(np.linalg.norm(y))
        if c == 0.0:
            return np.zeros(self.problem.m, dtype=np.result_type(self.problem.N, float))
        return c * min_norm_preimage(self.problem.N, y / c, self.problem.p, self.delta, _solver=self._solver)

    def _phi_plus(self, y):
        return self.problem.S @ self.spline(y)

    def __call__(self, y):
        y = np.asarray(y)
        if self.problem.n == 0:
            return np.zeros(self.problem.S.shape[0], dtype=self.problem.S.dtype)
        return self._phi_star(y)

    def batch(self, Y) -> np.ndarray:
        """Apply to each row of ``Y``."""
        Y = np.atleast_2d(Y)
        if self.matrix is not None:
            return Y @ self.matrix.T
        return np.array([self(y) for y in Y])

    def algorithm(self) -> AdaptiveAlgorithm:
        return AdaptiveAlgorithm(linear_information(self.problem.N), lambda data: self(np.asarray(data)))


def homogeneous_recovery(problem: FiniteLinearProblem, delta: float = 0.01) -> RecoveryMap:
    """Homogeneous recovery map with error at most ``(1 + delta) diam``."""
    return RecoveryMap(problem, delta)


def nonadaptive_projection(alg: AdaptiveAlgorithm, zero) -> InformationMap:
    """The measurements ``alg`` selects for the zero input, as fixed information.

    Parameters
    ----------
    alg : AdaptiveAlgorithm
        Must only select linear measurements.
    zero : element
        Zero element of the input space.
    """
    record = alg.info.measure(zero)
    for L in record.measurements:
        if not getattr(L, "linear", False):
            raise MeasurementError(f"non-linear measurement {L!r}")
    return InformationMap.fixed(record.measurements)


# --------------------------------------------------------------------------
# basis pursuit


def basis_pursuit(N, y, tol: float = 1e-6, max_iter: int = 3000, rho: float = 10.0,
                  relax: float = 1.6, finish: bool = True):
    """Minimize ``|h|_1`` subject to ``Nh = y`` by ADMM.

    The x-step projects onto the affine set ``{Nh = y}``, the z-step
    soft-thresholds; over-relaxation and residual balancing of the penalty
    ``rho`` speed things up. Iteration stops once the relative gap between
    ``|x|_1`` and a dual lower bound ``|<y, nu>|`` with ``|N^T nu|_inf <= 1``
    is at most ``tol``. Every 50 iterations an exact solve on the current
    support is attempted and kept if it comes with such a certificate.
    The returned ``x`` is feasible up to round-off and satisfies
    ``|x|_1 <= (1 + tol) * optimum``. Columns still open after
    ``max_iter`` iterations are finished by the exact simplex solver when
    ``finish`` is set.

    ``y`` may be a matrix of shape (n, B) to solve B problems at once.
    Each column is normalized first, which makes the map homogeneous.

    Raises
    ------
    ConvergenceError
        If the gap is not closed within ``max_iter`` iterations and
        ``finish`` is off.
    """
    N = np.asarray(N, dtype=float)
    Y = np.asarray(y, dtype=float)
    single = Y.ndim == 1
    Y = Y.reshape(N.shape[0], -1)
    n, m = N.shape
    scale = np.linalg.norm(Y, axis=0)
    out = np.zeros((m, Y.shape[1]))
    live = scale > 0
    if not live.any():
        return out[:, 0] if single else out
    B = Y[:, live] / scale[live]
    Np = np.linalg.pinv(N)
    NtP = np.linalg.pinv(N.T)
    z = Np @ B
    u = np.zeros_like(z)
    r = np.full(B.shape[1], float(rho))
    done = np.zeros(B.shape[1], dtype=bool)
    res = np.zeros_like(z)
    for it in range(1, max_iter + 1):
        v = z - u
        x = v - Np @ (N @ v - B)
        w = relax * x + (1.0 - relax) * z + u
        z_old = z
        z = np.sign(w) * np.maximum(np.abs(w) - 1.0 / r, 0.0)
        u = w - z
        if it % 10:
            continue
        primal = np.linalg.norm(x - z, axis=0)
        dual = r * np.linalg.norm(z - z_old, axis=0)
        up, down = primal > 10 * dual, dual > 10 * primal
        r = np.where(up, 2 * r, np.where(down, r / 2, r))
        u = np.where(up, u / 2, np.where(down, 2 * u, u))
        nu = NtP @ (r * u)
        nu /= np.maximum(1.0, np.abs(N.T @ nu).max(axis=0))
        lower = np.abs(np.sum(B * nu, axis=0))
        obj = np.abs(x).sum(axis=0)
        ok = (obj - lower <= tol * lower) & ~done
        res[:, ok] = x[:, ok]
        done |= ok
        if it % 50 == 0:
            for j in np.flatnonzero(~done):
                polished = _polish(N, B[:, j], z[:, j], nu[:, j], tol)
                if polished is not None:
                    res[:, j] = polished
                    done[j] = True
        if done.all():
            break
    else:
        if not finish:
            raise ConvergenceError(f"basis pursuit: gap not closed in {max_iter} iterations")
        for j in np.flatnonzero(~done):
            res[:, j] = l1_min(N, B[:, j])
    out[:, live] = res * scale[live]
    return out[:, 0] if single else out


def _polish(N, b, z, nu0, tol):
    """Exact solve on the support of ``z``, accepted only with a dual certificate.

    The certificate is the point closest to the running dual estimate
    ``nu0`` among those satisfying the optimality equations on the support.
    """
    zmax = np.abs(z).max()
    if zmax == 0:
        return None
    J = np.flatnonzero(np.abs(z) > 1e-9 * zmax)
    if J.size > N.shape[0]:
        return None
    NJ = N[:, J]
    xJ, *_ = np.linalg.lstsq(NJ, b, rcond=None)
    if np.linalg.norm(NJ @ xJ - b) > 1e-12 * (1 + np.linalg.norm(b)):
        return None
    corr, *_ = np.linalg.lstsq(NJ.T, np.sign(xJ) - NJ.T @ nu0, rcond=None)
    nu = nu0 + corr
    nu /= max(1.0, np.abs(N.T @ nu).max())
    lower = abs(float(b @ nu))
    obj = np.abs(xJ).sum()
    if obj - lower > tol * lower:
        return None
    x = np.zeros(N.shape[1])
    x[J] = xJ
    return x


# --------------------------------------------------------------------------
# Kashin demonstration and relative error


def kashin_linear_algorithm(m: int, n: int):
    """Linear algorithm ``f -> N^T N f`` from ``n`` normalized Hadamard rows.

    Returns
    -------
    alg : AdaptiveAlgorithm
    error : float
        Exact worst-case l2 error on the l1 ball,
        ``max_j |(I - N^T N) e_j|_2``.
    """
    if m < 1 or m & (m - 1):
        raise ValueError("m must be a power of 2")
    if not 0 < n <= m:
        raise ValueError("need 0 < n <= m")
    N = hadamard(m)[:n] / np.sqrt(m)
    R = np.eye(m) - N.T @ N
    error = float(np.max(np.linalg.norm(R, axis=0)))
    alg = AdaptiveAlgorithm(linear_information(N), lambda data: N.T @ np.asarray(data))
    alg.N = N
    return alg, error


def relative_error_sampled(alg, problem: FiniteLinearProblem, trials: int, rng=None,
                           scales=(1e-3, 1.0, 1e3), return_absolute: bool = False):
    """Sampled relative error ``max |Sf - alg(f)| / |f|_p``.

    Directions are drawn on the unit sphere of the input norm and placed at
    each of ``scales``. With ``return_absolute`` the sampled absolute error
    on the same unit directions is returned as well.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(rng)
    D = problem.sampler(interior_share=0.0)(rng, trials)
    rel, absolute = 0.0, 0.0
    for d in D:
        nd = problem.input_norm(d)
        if nd == 0:
            continue
        d = d / nd
        absolute = max(absolute, problem.out_norm(problem.S @ d - alg(d)))
        for s in scales:
            f = s * d
            rel = max(rel, problem.out_norm(problem.S @ f - alg(f)) / problem.input_norm(f))
    return (rel, absolute) if return_absolute else rel
