"""L2 approximation in weighted Korobov spaces from function values.

The space holds periodic functions on [0,1)^d with norm
``|f|_F^2 = sum_k r(k) |f_k|^2``, where
``r(k) = prod_j (1 if k_j == 0 else |k_j|^(2 alpha) / gamma_j)``.
Frequencies with ``r(k) <= M`` form the index set ``A(M)``.

Two homogeneous estimators of the coefficients on an index set are
provided: a rank-1 lattice rule (with a component-by-component generating
vector that avoids aliasing inside the index set) and least squares on
random points. For both, a certified worst-case L2 error on the unit ball
follows from the reproducing kernel

    K(x) = sum_k exp(2 pi i k.x) / r(k)
         = prod_j (1 + gamma_j * 2 sum_{h>=1} cos(2 pi h x_j) / h^(2 alpha)),

which has a Bernoulli-polynomial closed form for integer ``alpha``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .cone import ConeSpec, SolverFamily, TwoStepAlgorithm, two_step_algorithm
from .core import AdaptiveAlgorithm, InformationMap, NormSpec, PointEvaluation
from .elements import TrigPoly


class IllPosedError(ValueError):
    """Least-squares design matrix is (numerically) rank deficient."""


@dataclass(frozen=True)
class KorobovParams:
    """Smoothness ``alpha > 1/2`` and weights ``1 >= gamma_1 >= ... > 0``."""

    alpha: float
    gamma: tuple

    def __post_init__(self):
        g = tuple(float(v) for v in self.gamma)
        object.__setattr__(self, "gamma", g)
        if not self.alpha > 0.5:
            raise ValueError("alpha must exceed 1/2")
        if not g:
            raise ValueError("at least one weight required")
        if any(not 0 < v <= 1 for v in g) or any(g[j + 1] > g[j] for j in range(len(g) - 1)):
            raise ValueError("weights must be nonincreasing in (0, 1]")

    @property
    def d(self) -> int:
        return len(self.gamma)

    def norm(self) -> NormSpec:
        return NormSpec("Korobov", params=self)


def korobov_weights(K, params: KorobovParams) -> np.ndarray:
    """Weights ``r(k)`` for each row of ``K``."""
    K = np.atleast_2d(np.asarray(K, dtype=np.int64))
    if K.shape[1] != params.d:
        raise ValueError("frequency dimension does not match params")
    out = np.ones(K.shape[0])
    for j, g in enumerate(params.gamma):
        a = np.abs(K[:, j]).astype(float)
        out *= np.where(a == 0, 1.0, a ** (2 * params.alpha) / g)
    return out


def korobov_weight(k, params: KorobovParams) -> float:
    """Weight of a single frequency.

    Examples
    --------
    >>> korobov_weight((2, 1), KorobovParams(1.0, (1.0, 0.5)))
    8.0
    """
    return float(korobov_weights(np.asarray(k).reshape(1, -1), params)[0])


def index_set(M: float, params: KorobovParams) -> np.ndarray:
    """All ``k`` with ``r(k) <= M``, as rows in lexicographic order."""
    if not M >= 1:
        raise ValueError("M must be >= 1 (the zero frequency has weight 1)")
    a2, gam, d = 2 * params.alpha, params.gamma, params.d
    rows = []

    def descend(j, prefix, budget):
        if j == d:
            rows.append(prefix)
            return
        # |k_j| <= (gamma_j * budget)^(1/(2 alpha)); the extra 1 absorbs rounding
        top = int(math.floor((gam[j] * budget) ** (1.0 / a2))) + 1
        for kj in range(-top, top + 1):
            w = 1.0 if kj == 0 else abs(kj) ** a2 / gam[j]
            if w <= budget * (1 + 1e-12):
                descend(j + 1, prefix + (kj,), budget / w)

    descend(0, (), float(M))
    A = np.array(rows, dtype=np.int64).reshape(-1, d)
    # exact filter against the product formula
    return A[korobov_weights(A, params) <= M * (1 + 1e-12)]


def min_weight_outside(A, params: KorobovParams) -> float:
    """``min{r(h) : h not in A}`` for a downward closed index set ``A``.

    A minimizer can be taken with all its one-step reductions inside
    ``A``, so it is a unit-step neighbour of some element of ``A``.
    """
    A = np.asarray(A, dtype=np.int64)
    keys = {tuple(r) for r in A.tolist()}
    best = np.inf
    for k in A.tolist():
        for j in range(params.d):
            for step in (1, -1):
                h = list(k)
                if h[j] == 0:
                    h[j] = step
                elif step == 1:
                    h[j] += 1 if h[j] > 0 else -1
                else:
                    continue
                if tuple(h) not in keys:
                    best = min(best, korobov_weight(h, params))
    return float(best)


def truncation_error(A, params: KorobovParams) -> float:
    """Worst-case L2 error of projecting the Korobov unit ball onto span(A)."""
    return min_weight_outside(A, params) ** -0.5


# --------------------------------------------------------------------------
# reproducing kernel


@lru_cache(maxsize=None)
def _bernoulli_coeffs(n: int):
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(math.comb(m + 1, k) * B[k] for k in range(m)) / Fraction(m + 1))
    return tuple(float(math.comb(n, k) * B[k]) for k in range(n + 1))


def _cos_series(x, alpha: float) -> np.ndarray:
    """``2 sum_{h>=1} cos(2 pi h x) / h^(2 alpha)`` for x in R."""
    x = np.mod(np.asarray(x, dtype=float), 1.0)
    if float(alpha).is_integer():
        n = int(2 * alpha)
        B = np.polyval(_bernoulli_coeffs(n), x)
        return (-1) ** (n // 2 + 1) * (2 * math.pi) ** n / math.factorial(n) * B
    try:
        import mpmath
    except ImportError:  # pragma: no cover - optional dependency
        raise ImportError("non-integer alpha needs mpmath (pip install 'artifact[fractional]')") from None

    flat = [2 * float(mpmath.re(mpmath.polylog(2 * alpha, mpmath.expjpi(2 * v)))) for v in x.ravel()]
    return np.array(flat).reshape(x.shape)


def korobov_kernel(X, params: KorobovParams) -> np.ndarray:
    """``K(x)`` for points given along the last axis of ``X``."""
    X = np.asarray(X, dtype=float)
    out = np.ones(X.shape[:-1])
    for j, g in enumerate(params.gamma):
        out = out * (1.0 + g * _cos_series(X[..., j], params.alpha))
    return out


# --------------------------------------------------------------------------
# lattices


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def next_prime(n: int) -> int:
    n = max(2, int(n))
    while not is_prime(n):
        n += 1
    return n


@dataclass(frozen=True)
class Lattice:
    """Rank-1 lattice ``x_l = {l g / N}``, ``l = 0..N-1``."""

    N: int
    g: tuple

    def __post_init__(self):
        object.__setattr__(self, "g", tuple(int(v) % int(self.N) for v in self.g))
        if self.N < 1:
            raise ValueError("N must be positive")

    @property
    def d(self) -> int:
        return len(self.g)

    def nodes(self) -> np.ndarray:
        ell = np.arange(self.N, dtype=np.int64)[:, None]
        return ((ell * np.array(self.g, dtype=np.int64)[None, :]) % self.N) / self.N

    def to_json(self) -> dict:
        return {"N": int(self.N), "g": list(self.g)}

    @classmethod
    def from_json(cls, d) -> "Lattice":
        return cls(int(d["N"]), tuple(d["g"]))


def _dual_residues(freqs, lattice: Lattice) -> np.ndarray:
    F = np.asarray(freqs, dtype=np.int64).reshape(-1, lattice.d)
    return (F @ np.array(lattice.g, dtype=np.int64)) % lattice.N


def lattice_coefficients(samples, lattice: Lattice, freqs) -> np.ndarray:
    """``(1/N) sum_l f(x_l) exp(-2 pi i l k.g / N)`` for every row ``k`` of ``freqs``.

    The phase ``l k.g`` is reduced modulo ``N`` in integer arithmetic.
    """
    s = np.asarray(samples).reshape(lattice.N)
    h = _dual_residues(freqs, lattice)
    ell = np.arange(lattice.N, dtype=np.int64)
    phase = (np.outer(h, ell) % lattice.N) / lattice.N
    return np.exp(-2j * np.pi * phase) @ s / lattice.N


def lattice_coeff_estimate(samples, lattice: Lattice, k) -> complex:
    """Lattice-rule estimate of the Fourier coefficient at ``k``."""
    return complex(lattice_coefficients(samples, lattice, np.asarray(k).reshape(1, -1))[0])


def alias_collisions(freqs, g, N: int) -> int:
    """Number of pairs ``k != k'`` in ``freqs`` with ``k.g = k'.g (mod N)``."""
    F = np.unique(np.asarray(freqs, dtype=np.int64), axis=0)
    res = (F @ np.asarray(g, dtype=np.int64)) % N
    _, counts = np.unique(res, return_counts=True)
    return int(np.sum(counts * (counts - 1) // 2))


def cbc_generating_vector(N: int, params: KorobovParams, M: float, return_collisions: bool = False):
    """Component-by-component generating vector for the index set ``A(M)``.

    Coordinate ``j`` is the candidate in ``1..N-1`` minimizing the number
    of aliasing collisions among the distinct projections of ``A(M)`` onto
    the first ``j`` coordinates; ties go to the smallest candidate.
    """
    if not is_prime(N):
        raise ValueError("N must be prime")
    return _cbc(N, index_set(M, params), return_collisions)


def _cbc(N: int, A: np.ndarray, return_collisions: bool = False):
    d = A.shape[1]
    g: list[int] = []
    cands = np.arange(1, max(N, 2), dtype=np.int64)
    for j in range(d):
        P = np.unique(A[:, : j + 1], axis=0)
        base = (P[:, :j] @ np.array(g, dtype=np.int64)) % N if j else np.zeros(len(P), dtype=np.int64)
        R = np.sort((base[None, :] + cands[:, None] * P[None, :, j]) % N, axis=1)
        counts = _pair_counts_sorted(R)
        g.append(int(cands[int(np.argmin(counts))]))
    g_arr = np.array(g, dtype=np.int64)
    if return_collisions:
        return g_arr, alias_collisions(A, g_arr, N)
    return g_arr


def _pair_counts_sorted(R: np.ndarray) -> np.ndarray:
    """Row-wise count of equal pairs in row-sorted integer matrix ``R``."""
    eq = R[:, 1:] == R[:, :-1]
    # run of r equal neighbours contributes r(r+1)/2 pairs
    total = np.zeros(R.shape[0], dtype=np.int64)
    run = np.zeros(R.shape[0], dtype=np.int64)
    for c in range(eq.shape[1]):
        run = np.where(eq[:, c], run + 1, 0)
        total += run
    return total


def lattice_error_bounds(lattice: Lattice, A, params: KorobovParams, tail: float | None = None):
    """Certified ball errors of the lattice estimator on ``A``.

    Requires that no two elements of ``A`` alias. With
    ``alias(k) = sum_{h != k, h.g = k.g} 1/r(h)`` (evaluated through the
    kernel on the lattice), returns

    * ``e_S = sqrt(max_k alias(k) + max_{h not in A} 1/r(h))``, the L2 error
      of the reconstruction of ``f``;
    * ``e_T = sqrt(max_k r(k) alias(k))``, the Korobov-norm error of the
      coefficients on ``A``.
    """
    A = np.asarray(A, dtype=np.int64)
    if alias_collisions(A, lattice.g, lattice.N):
        raise ValueError("index set aliases on this lattice")
    K = korobov_kernel(lattice.nodes(), params)
    cls = lattice_coefficients(K, lattice, A).real
    r = korobov_weights(A, params)
    alias = np.maximum(cls - 1.0 / r, 0.0) + 1e-13 * K[0]
    if tail is None:
        tail = 1.0 / min_weight_outside(A, params)
    e_S = math.sqrt(alias.max() + tail)
    e_T = math.sqrt(float(np.max(r * alias)))
    return e_S, e_T


# --------------------------------------------------------------------------
# least squares


def design_matrix(points, freqs) -> np.ndarray:
    X = np.atleast_2d(np.asarray(points, dtype=float))
    return np.exp(2j * np.pi * (X @ np.asarray(freqs, dtype=np.int64).T))


def _qr_solver(Phi):
    Q, R = np.linalg.qr(Phi)
    s = np.linalg.svd(R, compute_uv=False)
    if s.size == 0 or s.min() < 1e-8:
        cond = np.inf if s.size == 0 or s.min() == 0 else s.max() / s.min()
        raise IllPosedError(f"design matrix rank deficient (condition {cond:.3g})")
    return Q, R


def least_squares_fit(points, samples, freqs) -> TrigPoly:
    """Least-squares trigonometric fit on ``freqs`` via a QR factorization.

    Raises
    ------
    IllPosedError
        If fewer points than frequencies or the smallest singular value of
        the design matrix is below 1e-8.
    """
    F = np.asarray(freqs, dtype=np.int64)
    X = np.atleast_2d(np.asarray(points, dtype=float))
    if X.shape[0] < F.shape[0]:
        raise IllPosedError("fewer points than frequencies")
    Q, R = _qr_solver(design_matrix(X, F))
    c = np.linalg.solve(R, Q.conj().T @ np.asarray(samples, dtype=complex))
    return TrigPoly(F, c)


def least_squares_error_bounds(points, A, params: KorobovParams, tail: float | None = None):
    """Certified ball errors of least squares on ``A`` at ``points``.

    With ``E`` the least-squares solution operator and ``G`` the kernel
    matrix of the frequencies outside ``A``,

    * ``e_S^2 = max_{h not in A} 1/r(h) + lambda_max(E G E^H)``;
    * ``e_T^2 = lambda_max(W E G E^H W)``, ``W = diag(sqrt(r))``.

    ``E G E^H = E K E^H - diag(1/r)`` because ``E`` inverts the design on ``A``.
    """
    A = np.asarray(A, dtype=np.int64)
    X = np.atleast_2d(np.asarray(points, dtype=float))
    Q, R = _qr_solver(design_matrix(X, A))
    E = np.linalg.solve(R, Q.conj().T)
    D = X[:, None, :] - X[None, :, :]
    Kmat = korobov_kernel(D, params)
    r = korobov_weights(A, params)
    H = E @ Kmat @ E.conj().T - np.diag(1.0 / r)
    H = 0.5 * (H + H.conj().T)
    slack = 1e-12 * Kmat[0, 0] * max(1.0, np.abs(E).sum(axis=1).max() ** 2)
    lam = max(float(np.linalg.eigvalsh(H)[-1]), 0.0) + slack
    W = np.sqrt(r)
    lamT = max(float(np.linalg.eigvalsh(W[:, None] * H * W[None, :])[-1]), 0.0) + slack * r.max()
    if tail is None:
        tail = 1.0 / min_weight_outside(A, params)
    return math.sqrt(tail + lam), math.sqrt(lamT)


# --------------------------------------------------------------------------
# algorithms and families


def lattice_algorithm(lattice: Lattice, A) -> AdaptiveAlgorithm:
    A = np.asarray(A, dtype=np.int64)
    info = InformationMap.fixed([PointEvaluation(tuple(x)) for x in lattice.nodes()])
    return AdaptiveAlgorithm(info, lambda data: TrigPoly(A, lattice_coefficients(np.asarray(data), lattice, A)))


def least_squares_algorithm(points, A) -> AdaptiveAlgorithm:
    A = np.asarray(A, dtype=np.int64)
    X = np.atleast_2d(np.asarray(points, dtype=float))
    Q, R = _qr_solver(design_matrix(X, A))
    E = np.linalg.solve(R, Q.conj().T)
    info = InformationMap.fixed([PointEvaluation(tuple(x)) for x in X])
    return AdaptiveAlgorithm(info, lambda data: TrigPoly(A, E @ np.asarray(data, dtype=complex)))


@dataclass
class LadderEntry:
    M: float
    A: np.ndarray
    cost: int
    error: float
    build: object
    detail: dict


class _Ladder:
    """Entries of nondecreasing cost, generated on demand."""

    def __init__(self, make_entry, d: int, max_levels: int = 40):
        self.make_entry = make_entry
        self.entries: list[LadderEntry] = []
        self.max_levels = max_levels
        self.zero = TrigPoly.zero(d)

    def _ensure(self, k: int):
        while len(self.entries) < self.max_levels and (not self.entries or self.entries[-1].cost <= k):
            self.entries.append(self.make_entry(len(self.entries), self.entries[-1] if self.entries else None))

    def best(self, k: int):
        self._ensure(k)
        cands = [e for e in self.entries if e.cost <= k]
        return min(cands, key=lambda e: (e.error, e.cost)) if cands else None

    def error(self, k: int) -> float:
        e = self.best(k)
        # zero algorithm: |f|_L2 <= |f|_F
        return 1.0 if e is None else min(1.0, e.error)

    def builder(self, k: int) -> AdaptiveAlgorithm:
        e = self.best(k)
        if e is None or e.error >= 1.0:
            return AdaptiveAlgorithm(InformationMap.fixed([]), lambda data: self.zero)
        return e.build()


def _collision_free_lattice(B, N_start):
    """Smallest prime ``N >= N_start`` whose CBC vector is alias-free on ``B``."""
    N = next_prime(max(N_start, B.shape[0], 2))
    while True:
        g = _cbc(N, B)
        if alias_collisions(B, g, N) == 0:
            return Lattice(N, tuple(g))
        N = next_prime(N + 1)


def _lattice_for(A, M, params, N_start, accept, max_doublings: int = 30):
    """Lattice for ``A = A(M)`` whose bounds pass ``accept``.

    The CBC vector is built for the larger set ``A(M L)``, ``L = 1, 2, 4, ...``;
    any frequency aliasing with ``A`` then has weight above ``M L``. Costs
    are nondecreasing in ``L``, and the first accepted lattice is returned.
    """
    N = N_start
    for i in range(max_doublings + 1):
        B = index_set(M * 2**i, params)
        lat = _collision_free_lattice(B, N)
        bounds = lattice_error_bounds(lat, A, params)
        if accept(bounds):
            return lat, bounds, 2**i
        N = lat.N
    raise RuntimeError("no acceptable lattice found")


def lattice_family(params: KorobovParams, M: float, n_max: int = 20000, growth: float = 2.0) -> SolverFamily:
    """Lattice estimators on ``A(M growth^i)``, ``i = 0, 1, ...``.

    Level ``i`` takes the first lattice from :func:`_lattice_for` (cost not
    below the previous level's) whose aliasing part of the error does not
    exceed the truncation part.
    """

    def make(i, prev):
        Mi = M * growth**i
        A = index_set(Mi, params)
        tail = 1.0 / min_weight_outside(A, params)
        lat, (eS, eT), L = _lattice_for(A, Mi, params, prev.cost if prev else 1,
                                        lambda b: b[0] ** 2 <= 2 * tail + 1e-15)
        return LadderEntry(Mi, A, lat.N, eS, lambda: lattice_algorithm(lat, A),
                           {"lattice": lat.to_json(), "index_size": int(A.shape[0]), "tail": tail ** 0.5,
                            "cbc_factor": L})

    ladder = _Ladder(make, params.d)
    fam = SolverFamily(ladder.builder, ladder.error, k_min=1, n_max=n_max)
    fam.ladder = ladder
    return fam


def least_squares_family(params: KorobovParams, M: float, oversampling: float = 2.0, seed: int = 0,
                         n_max: int = 20000, growth: float = 2.0, retries: int = 5) -> SolverFamily:
    """Least-squares estimators on ``A(M growth^i)`` with seeded uniform points."""

    def make(i, prev):
        Mi = M * growth**i
        A = index_set(Mi, params)
        n = max(math.ceil(oversampling * A.shape[0]), prev.cost if prev else 0)
        X, (eS, eT) = _ls_points(A, params, n, seed, i, retries)
        return LadderEntry(Mi, A, n, eS, lambda: least_squares_algorithm(X, A),
                           {"points": n, "index_size": int(A.shape[0])})

    ladder = _Ladder(make, params.d)
    fam = SolverFamily(ladder.builder, ladder.error, k_min=1, n_max=n_max)
    fam.ladder = ladder
    return fam


def _ls_points(A, params, n, seed, level, retries):
    last = None
    for attempt in range(retries + 1):
        rng = np.random.default_rng([seed, level, attempt])
        X = rng.random((n, params.d))
        try:
            return X, least_squares_error_bounds(X, A, params)
        except IllPosedError as exc:
            last = exc
    raise last


def korobov_cone(params: KorobovParams, M: float, t: float) -> ConeSpec:
    """``{f : |f|_F <= t |P_A f|_F}`` with ``P_A`` the projection onto span ``A(M)``."""
    A = index_set(M, params)
    norm = params.norm()
    return ConeSpec(lambda f: f.restrict(A), norm, norm, t)


def lattice_pilot(params: KorobovParams, M: float, t: float):
    """Alias-free lattice whose coefficient error on ``A(M)`` is at most ``1/(2t)``."""
    A = index_set(M, params)
    lat, (eS, eT), L = _lattice_for(A, M, params, A.shape[0], lambda b: b[1] <= 1.0 / (2 * t))
    return lattice_algorithm(lat, A), eT, {"lattice": lat.to_json(), "cbc_factor": L}


def least_squares_pilot(params: KorobovParams, M: float, t: float, oversampling: float = 2.0, seed: int = 0,
                        max_doublings: int = 12):
    """Least squares on ``A(M)`` with point count doubled until ``e_T <= 1/(2t)``."""
    A = index_set(M, params)
    n = math.ceil(oversampling * A.shape[0])
    for i in range(max_doublings + 1):
        X, (eS, eT) = _ls_points(A, params, n, seed, 1000 + i, 5)
        if eT <= 1.0 / (2 * t):
            return least_squares_algorithm(X, A), eT, {"points": n}
        n *= 2
    raise IllPosedError("least-squares pilot did not reach the required accuracy")


def corollary_constants(params: KorobovParams, M: float, t: float) -> dict:
    """``|S_0^{-1}| = max_{k in A(M)} sqrt(r(k))`` and ``eps_0 = 1/(5 t |S_0^{-1}| |Q|)``, ``|Q| = 1``."""
    A = index_set(M, params)
    s0inv = float(np.sqrt(korobov_weights(A, params).max()))
    return {"S0_inv_norm": s0inv, "eps0": 1.0 / (5.0 * t * s0inv), "index_size": int(A.shape[0])}


def korobov_cone_solver(eps: float, t: float, M: float, params: KorobovParams, estimator: str = "lattice",
                        oversampling: float = 2.0, seed: int = 0) -> TwoStepAlgorithm:
    """Two-step algorithm with L2 error at most ``eps`` on :func:`korobov_cone`.

    Parameters
    ----------
    estimator : {"lattice", "least-squares"}
        Estimator for both the pilot (coefficients on ``A(M)``) and the
        second stage (expanding index sets ``A(M')``).
    """
    if estimator == "lattice":
        pilot, e_pilot, meta = lattice_pilot(params, M, t)
        family = lattice_family(params, M)
    elif estimator == "least-squares":
        pilot, e_pilot, meta = least_squares_pilot(params, M, t, oversampling, seed)
        family = least_squares_family(params, M, oversampling, seed)
    else:
        raise ValueError(f"unknown estimator {estimator!r}")
    alg = two_step_algorithm(pilot, e_pilot, family, korobov_cone(params, M, t), eps,
                             zero=TrigPoly.zero(params.d))
    alg.pilot_error = e_pilot
    alg.pilot_meta = meta
    return alg


def random_cone_member(rng, params: KorobovParams, M: float, t: float, tail_factor: float = 65536.0,
                       decay: float = 0.75) -> TrigPoly:
    """Random ``f`` with ``|f|_F = 1`` in :func:`korobov_cone`.

    Coefficients live on ``A(tail_factor M)`` with magnitudes of order
    ``r(k)^-decay``; the part outside ``A(M)`` is scaled to a random
    fraction of the largest mass the cone allows.
    """
    rng = np.random.default_rng(rng)
    A = index_set(M, params)
    B = index_set(tail_factor * M, params)
    r = korobov_weights(B, params)
    c = (rng.standard_normal(len(B)) + 1j * rng.standard_normal(len(B))) * r**-decay
    inside = np.zeros(len(B), dtype=bool)
    keys = {tuple(k) for k in A.tolist()}
    inside[[tuple(k) in keys for k in B.tolist()]] = True
    head = math.sqrt(np.sum(r[inside] * np.abs(c[inside]) ** 2))
    tail = math.sqrt(np.sum(r[~inside] * np.abs(c[~inside]) ** 2))
    rho = rng.uniform(0.05, 0.99)
    if tail > 0:
        c[~inside] *= rho * math.sqrt(t * t - 1) * head / tail
    f = TrigPoly(B, c)
    return f * (1.0 / params.norm()(f))
