"""Dense two-phase primal simplex for equality-form linear programs.

Solves ``min c.x`` subject to ``A x = b``, ``x >= 0`` on a dense tableau.
Built for bit-reproducible results on desk-scale transport problems:
deterministic pivot selection, explicit anti-cycling, and row
equilibration as the only numerical-stability device.

Pivot rules
-----------
``bland``
    Lowest-index entering column, lowest-basis-index leaving row on
    ratio ties.  Never cycles.
``dantzig``
    Most-negative reduced cost (first index on ties), Bland tie-break on
    the leaving row.  Fast in practice, not cycle-proof.
``hybrid``
    Dantzig steps, falling back to Bland whenever the objective has
    stalled for a stretch of degenerate pivots.  Deterministic and
    cycle-free, with Dantzig speed on non-degenerate instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import LPError

DEFAULT_PIVOT_RULE = "hybrid"
_STALL_LIMIT = 60  # degenerate pivots tolerated before hybrid switches to Bland


@dataclass(frozen=True)
class LPSolution:
    x: np.ndarray
    objective: float
    iterations: int


def _pivot(T: np.ndarray, row: int, col: int) -> None:
    T[row] /= T[row, col]
    colv = T[:, col].copy()
    colv[row] = 0.0
    T -= np.outer(colv, T[row])
    T[:, col] = 0.0
    T[row, col] = 1.0


def _iterate(
    T: np.ndarray,
    basis: list[int],
    n_enterable: int,
    tol: float,
    rule: str,
    max_iter: int,
) -> int:
    """Run pivots until optimality; returns the pivot count."""
    m = T.shape[0] - 1
    iters = 0
    bland_mode = rule == "bland"
    stall = 0
    last_obj = -T[m, -1]
    while True:
        rc = T[m, :n_enterable]
        if bland_mode:
            neg = np.flatnonzero(rc < -tol)
            if neg.size == 0:
                return iters
            col = int(neg[0])
        else:
            col = int(np.argmin(rc))
            if rc[col] >= -tol:
                return iters
        colvals = T[:m, col]
        pos = np.flatnonzero(colvals > tol)
        if pos.size == 0:
            raise LPError("linear program is unbounded")
        ratios = T[pos, -1] / colvals[pos]
        best = ratios.min()
        cand = pos[ratios <= best + 1e-12]
        if cand.size > 1:
            row = int(cand[np.argmin([basis[r] for r in cand])])
        else:
            row = int(cand[0])
        _pivot(T, row, col)
        basis[row] = col
        iters += 1
        if iters >= max_iter:
            raise LPError(f"pivot limit of {max_iter} reached")
        if rule == "hybrid":
            obj = -T[m, -1]
            if obj < last_obj - tol:
                stall = 0
                bland_mode = False
                last_obj = obj
            else:
                stall += 1
                if stall >= _STALL_LIMIT:
                    bland_mode = True


def solve_lp(
    cost,
    A,
    b,
    *,
    tol: float = 1e-9,
    pivot_rule: str = DEFAULT_PIVOT_RULE,
    max_iter: int | None = None,
) -> LPSolution:
    """Minimize ``cost . x`` over ``A x = b``, ``x >= 0``.

    Raises ``LPError`` when the program is infeasible, unbounded, or the
    pivot limit is exceeded.  Redundant equality rows are tolerated.
    """
    if pivot_rule not in ("bland", "dantzig", "hybrid"):
        raise ValueError(f"unknown pivot rule {pivot_rule!r}")
    c = np.asarray(cost, dtype=float)
    A = np.array(A, dtype=float)
    rhs = np.array(b, dtype=float)
    if A.ndim != 2:
        raise ValueError("A must be a matrix")
    m, n = A.shape
    if rhs.shape != (m,) or c.shape != (n,):
        raise ValueError("inconsistent LP dimensions")
    if max_iter is None:
        max_iter = 5000 + 200 * (m + n)

    scale = np.maximum(np.abs(A).max(axis=1, initial=0.0), np.abs(rhs))
    scale[scale == 0.0] = 1.0
    A /= scale[:, None]
    rhs /= scale
    neg = rhs < 0
    A[neg] *= -1.0
    rhs[neg] *= -1.0

    # phase 1: artificial basis, minimize total artificial mass
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n : n + m] = np.eye(m)
    T[:m, -1] = rhs
    T[m, :n] = -A.sum(axis=0)
    T[m, -1] = -rhs.sum()
    basis = list(range(n, n + m))
    it1 = _iterate(T, basis, n, tol, pivot_rule, max_iter)
    if -T[m, -1] > 1e-7:
        raise LPError(f"infeasible: phase-1 residual {-T[m, -1]:.3e}")

    # pivot surviving artificials out; rows that cannot pivot are redundant
    for r in range(m):
        if basis[r] >= n:
            piv = np.flatnonzero(np.abs(T[r, :n]) > tol)
            if piv.size:
                _pivot(T, r, int(piv[0]))
                basis[r] = int(piv[0])
    rows = [r for r in range(m) if basis[r] < n]

    # phase 2: rebuild the reduced-cost row for the true objective
    T2 = np.zeros((len(rows) + 1, n + 1))
    T2[:-1, :n] = T[rows, :n]
    T2[:-1, -1] = T[rows, -1]
    basis2 = [basis[r] for r in rows]
    T2[-1, :n] = c
    for r, jb in enumerate(basis2):
        T2[-1, :] -= c[jb] * T2[r, :]
    it2 = _iterate(T2, basis2, n, tol, pivot_rule, max_iter)

    x = np.zeros(n)
    for r, jb in enumerate(basis2):
        x[jb] = T2[r, -1]
    np.clip(x, 0.0, None, out=x)
    return LPSolution(x=x, objective=float(-T2[-1, -1]), iterations=it1 + it2)
