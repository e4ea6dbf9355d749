"""Dense two-phase simplex method for small standard-form linear programs.

Solves ``min c^T x`` subject to ``A x = b``, ``x >= 0``. Bland's rule
guarantees termination on degenerate problems. Intended for the few
dozen rows and a few hundred columns that occur in the demonstrations.
"""

from __future__ import annotations

import numpy as np


class LPError(RuntimeError):
    """Infeasible or unbounded linear program."""


def _pivot(T, basis, r, k):
    T[r] /= T[r, k]
    col = T[:, k].copy()
    col[r] = 0.0
    T -= np.outer(col, T[r])
    basis[r] = k


def _run(T, basis, ncols, tol, max_pivots):
    """Minimize the objective stored in the last row of ``T`` (reduced costs)."""
    for _ in range(max_pivots):
        red = T[-1, :ncols]
        cand = np.flatnonzero(red < -tol)
        if cand.size == 0:
            return
        k = int(cand[0])
        col = T[:-1, k]
        pos = col > tol
        if not pos.any():
            raise LPError("unbounded linear program")
        ratios = np.full(col.shape, np.inf)
        ratios[pos] = T[:-1, -1][pos] / col[pos]
        best = ratios.min()
        ties = np.flatnonzero(ratios <= best + tol * max(1.0, abs(best)))
        r = int(ties[np.argmin(np.asarray(basis)[ties])])
        _pivot(T, basis, r, k)
    raise LPError("pivot limit reached")


def simplex(c, A, b, tol: float = 1e-10, max_pivots: int = 100000):
    """Solve ``min c^T x, A x = b, x >= 0``.

    Returns
    -------
    x : ndarray
        An optimal basic solution.

    Raises
    ------
    LPError
        If the program is infeasible or unbounded.
    """
    c = np.asarray(c, dtype=float)
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float)
    m, n = A.shape
    neg = b < 0
    A[neg] *= -1
    b[neg] *= -1
    scale = max(1.0, np.abs(A).max(initial=0.0), np.abs(b).max(initial=0.0))
    # phase 1 tableau: [A I b; reduced costs]
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[-1, :n] = -A.sum(axis=0)
    T[-1, -1] = -b.sum()
    basis = list(range(n, n + m))
    _run(T, basis, n + m, tol * scale, max_pivots)
    if -T[-1, -1] > 1e-8 * scale * max(1.0, b.sum()):
        raise LPError("infeasible linear program")
    # drive remaining artificials out of the basis
    for r in range(m):
        if basis[r] >= n:
            nz = np.flatnonzero(np.abs(T[r, :n]) > 1e-9 * scale)
            if nz.size:
                _pivot(T, basis, r, int(nz[0]))
    keep = [r for r in range(m) if basis[r] < n]
    T = np.vstack([T[keep][:, list(range(n)) + [n + m]], np.zeros((1, n + 1))])
    basis = [basis[r] for r in keep]
    # phase 2 reduced costs
    T[-1, :n] = c
    for r, j in enumerate(basis):
        T[-1] -= c[j] * T[r]
    _run(T, basis, n, tol * max(1.0, np.abs(c).max(initial=0.0)), max_pivots)
    x = np.zeros(n)
    x[basis] = np.maximum(T[:-1, -1], 0.0)
    return x


def l1_min(N, y, **kw):
    """``argmin |f|_1`` subject to ``N f = y``."""
    N = np.asarray(N, dtype=float)
    m = N.shape[1]
    x = simplex(np.ones(2 * m), np.hstack([N, -N]), y, **kw)
    return x[:m] - x[m:]


def linf_min(N, y, **kw):
    """``argmin |f|_inf`` subject to ``N f = y``."""
    N = np.asarray(N, dtype=float)
    n, m = N.shape
    I = np.eye(m)
    one = np.ones((m, 1))
    Z = np.zeros((m, m))
    # variables f+, f-, t, s1, s2 >= 0
    A = np.block([
        [N, -N, np.zeros((n, 1)), np.zeros((n, m)), np.zeros((n, m))],
        [I, -I, -one, I, Z],
        [-I, I, -one, Z, I],
    ])
    b = np.concatenate([np.asarray(y, dtype=float), np.zeros(2 * m)])
    c = np.zeros(A.shape[1])
    c[2 * m] = 1.0
    x = simplex(c, A, b, **kw)
    return x[:m] - x[m:2 * m]
