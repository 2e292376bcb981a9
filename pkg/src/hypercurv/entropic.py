"""Entropy-regularized transport: scaling iterations and shared-marginal projections.

Adding ``-eps * H(plan)`` to the transport objective turns the program
into a divergence projection of the Boltzmann kernel
``exp(-d(x, y) / eps)`` onto the coupling constraints, solvable by
alternating marginal scaling.  The regularized optimum approaches the
exact optimum as ``eps`` shrinks; the transport part of the optimal plan
decreases monotonically toward it.

Log-domain updates are the default: very small ``eps`` drives kernel
entries below the double-precision floor, which is fatal for the plain
scaling form but harmless for potentials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ConvergenceError, EpsilonFloorError
from .exact import TransportPlan, _as_sparse, _require_one_component, MASS_TOL
from .errors import MarginalError
from .metric import DistanceMatrix


@dataclass(frozen=True)
class EntropicConfig:
    """Solver settings; ``epsilon`` is in the same units as distances.

    ``tol`` bounds the largest L1 marginal violation of the returned
    plans.  Small ``epsilon`` values drive the marginal residual down
    only sublinearly on degenerate instances, so the default is loose
    enough for ``epsilon=0.01`` on integer-distance graphs; the
    objective settles orders of magnitude tighter than the marginals.
    """

    epsilon: float
    max_iter: int = 20000
    tol: float = 1e-4
    log_domain: bool = True

    def __post_init__(self):
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")


@dataclass(frozen=True)
class SinkhornResult:
    value: float  # transport part: sum of plan * distance
    plan: TransportPlan
    regularized_objective: float
    iterations: int
    residual: float


@dataclass(frozen=True)
class EntropicBarycenterResult:
    value: float  # sum of transport parts across the couplings
    nu: dict[int, float]
    plans: tuple[TransportPlan, ...]
    regularized_objective: float
    iterations: int
    residual: float


_PAD = -1e30  # finite stand-in for log(0); avoids inf-inf in shifted exponentials


def _lse(a: np.ndarray, axis: int) -> np.ndarray:
    """Log-sum-exp with a max shift; tolerates the padding sentinel."""
    m = np.max(a, axis=axis, keepdims=True)
    out = m.squeeze(axis=axis) + np.log(np.exp(a - m).sum(axis=axis))
    return out


def _entropy(plan: np.ndarray) -> float:
    pos = plan[plan > 0.0]
    return float(-(pos * np.log(pos)).sum())


def _plan_from_matrix(
    plan: np.ndarray, rows: Sequence[int], cols: Sequence[int], cost: np.ndarray
) -> TransportPlan:
    rr, ss = np.nonzero(plan > 1e-15)
    return TransportPlan(
        arity=2,
        support=tuple((rows[r], cols[s]) for r, s in zip(rr, ss)),
        mass=tuple(float(plan[r, s]) for r, s in zip(rr, ss)),
        objective=float((plan * cost).sum()),
    )


def sinkhorn_w1(
    dm: DistanceMatrix, mu, nu, cfg: EntropicConfig
) -> SinkhornResult:
    """Entropy-regularized Wasserstein distance by alternating scaling.

    Iterates until the largest L1 marginal violation falls below
    ``cfg.tol``; raises ``ConvergenceError`` (carrying the residual)
    otherwise.  With ``log_domain=False`` a kernel whose rows or columns
    underflow to zero raises ``EpsilonFloorError``.
    """
    smu, wmu = _as_sparse(mu, dm.n)
    snu, wnu = _as_sparse(nu, dm.n)
    if abs(wmu.sum() - wnu.sum()) > MASS_TOL:
        raise MarginalError("total masses differ")
    _require_one_component(dm, list(smu) + list(snu))
    D = dm.as_float()[np.ix_(smu, snu)]
    eps = cfg.epsilon
    if cfg.log_domain:
        M = -D / eps
        logmu = np.log(wmu)
        lognu = np.log(wnu)
        alpha = np.zeros(len(smu))
        beta = np.zeros(len(snu))
        residual = np.inf
        for it in range(1, cfg.max_iter + 1):
            alpha = logmu - _lse(M + beta[None, :], axis=1)
            beta = lognu - _lse(M + alpha[:, None], axis=0)
            logplan = alpha[:, None] + M + beta[None, :]
            plan = np.exp(logplan)
            residual = float(np.abs(plan.sum(axis=1) - wmu).sum())
            if residual < cfg.tol:
                break
        else:
            raise ConvergenceError(
                f"no convergence after {cfg.max_iter} iterations "
                f"(residual {residual:.3e})",
                residual=residual,
            )
    else:
        K = np.exp(-D / eps)
        if (K.sum(axis=1) == 0.0).any() or (K.sum(axis=0) == 0.0).any():
            raise EpsilonFloorError(
                f"kernel underflows at epsilon={eps}; use log_domain or larger epsilon"
            )
        u = np.ones(len(smu))
        v = np.ones(len(snu))
        residual = np.inf
        for it in range(1, cfg.max_iter + 1):
            Kv = K @ v
            if (Kv == 0.0).any():
                raise EpsilonFloorError(
                    f"scaling underflows at epsilon={eps}; use log_domain"
                )
            u = wmu / Kv
            Ku = K.T @ u
            if (Ku == 0.0).any():
                raise EpsilonFloorError(
                    f"scaling underflows at epsilon={eps}; use log_domain"
                )
            v = wnu / Ku
            plan = u[:, None] * K * v[None, :]
            residual = float(np.abs(plan.sum(axis=1) - wmu).sum())
            if residual < cfg.tol:
                break
        else:
            raise ConvergenceError(
                f"no convergence after {cfg.max_iter} iterations "
                f"(residual {residual:.3e})",
                residual=residual,
            )
    transport = float((plan * D).sum())
    reg = transport - eps * _entropy(plan)
    return SinkhornResult(
        value=transport,
        plan=_plan_from_matrix(plan, smu, snu, D),
        regularized_objective=reg,
        iterations=it,
        residual=residual,
    )


def _barycenter_log(Ms, ws, cfg):
    """Shared-marginal projections on potentials, padded into one stack."""
    n = len(Ms)
    cdim = Ms[0].shape[1]
    # padded rows carry sentinel log-masses and never receive plan mass
    smax = max(M.shape[0] for M in Ms)
    M3 = np.full((n, smax, cdim), _PAD)
    LW = np.full((n, smax), _PAD)
    for i in range(n):
        M3[i, : Ms[i].shape[0], :] = Ms[i]
        LW[i, : Ms[i].shape[0]] = np.log(ws[i])
    B = np.zeros((n, cdim))
    residual = np.inf
    for it in range(1, cfg.max_iter + 1):
        A = LW - _lse(M3 + B[:, None, :], axis=2)
        cols = _lse(M3 + A[:, :, None], axis=1)
        logeta = (B + cols).mean(axis=0)
        B = logeta[None, :] - cols
        rows = np.exp(_lse(A[:, :, None] + M3 + B[:, None, :], axis=2))
        residual = 0.0
        for i in range(n):
            residual = max(
                residual, float(np.abs(rows[i, : Ms[i].shape[0]] - ws[i]).sum())
            )
        if residual < cfg.tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence after {cfg.max_iter} iterations "
            f"(residual {residual:.3e})",
            residual=residual,
        )
    plans = [
        np.exp(A[i, : Ms[i].shape[0], None] + M3[i, : Ms[i].shape[0], :] + B[i, None, :])
        for i in range(n)
    ]
    return plans, np.exp(logeta), it, residual


def _barycenter_plain(Ms, ws, cfg):
    """Direct scaling-vector form; fails once kernel entries underflow."""
    n = len(Ms)
    Ks = [np.exp(M) for M in Ms]
    for K in Ks:
        if (K.sum(axis=1) == 0.0).any() or (K.sum(axis=0) == 0.0).any():
            raise EpsilonFloorError(
                f"kernel underflows at epsilon={cfg.epsilon}; use log_domain"
            )
    us = [np.ones(K.shape[0]) for K in Ks]
    vs = [np.ones(K.shape[1]) for K in Ks]
    residual = np.inf
    for it in range(1, cfg.max_iter + 1):
        cols = []
        for i in range(n):
            kv = Ks[i] @ vs[i]
            if (kv == 0.0).any():
                raise EpsilonFloorError(
                    f"scaling underflows at epsilon={cfg.epsilon}; use log_domain"
                )
            us[i] = ws[i] / kv
            col = Ks[i].T @ us[i]
            if (col == 0.0).any():
                raise EpsilonFloorError(
                    f"scaling underflows at epsilon={cfg.epsilon}; use log_domain"
                )
            cols.append(col)
        logeta = np.mean([np.log(vs[i] * cols[i]) for i in range(n)], axis=0)
        eta = np.exp(logeta)
        for i in range(n):
            vs[i] = eta / cols[i]
        residual = 0.0
        for i in range(n):
            rows = us[i] * (Ks[i] @ vs[i])
            residual = max(residual, float(np.abs(rows - ws[i]).sum()))
        if residual < cfg.tol:
            break
    else:
        raise ConvergenceError(
            f"no convergence after {cfg.max_iter} iterations "
            f"(residual {residual:.3e})",
            residual=residual,
        )
    plans = [us[i][:, None] * Ks[i] * vs[i][None, :] for i in range(n)]
    return plans, eta, it, residual


def entropic_barycenter(
    dm: DistanceMatrix, walks: Sequence, cfg: EntropicConfig
) -> EntropicBarycenterResult:
    """Shared-marginal projection of the product Boltzmann kernel.

    Alternates exact row-marginal scalings with a geometric-mean update
    of the shared column marginal across all couplings; at the fixed
    point every coupling has its prescribed first marginal and one
    common second marginal minimizing the summed regularized distances.
    Runs in the log domain throughout.
    """
    n = len(walks)
    if n < 2:
        raise ValueError("entropic barycenter needs at least 2 marginals")
    parsed = [_as_sparse(w, dm.n) for w in walks]
    sups = [s for s, _ in parsed]
    ws = [w for _, w in parsed]
    _require_one_component(dm, [v for s in sups for v in s])
    comp = dm.component_of(sups[0][0])
    Df = dm.as_float()
    eps = cfg.epsilon
    Ms = [-Df[np.ix_(s, comp)] / eps for s in sups]
    if cfg.log_domain:
        plan_mats, eta, it, residual = _barycenter_log(Ms, ws, cfg)
    else:
        plan_mats, eta, it, residual = _barycenter_plain(Ms, ws, cfg)
    plans = []
    transport = 0.0
    reg = 0.0
    for i in range(n):
        plan = plan_mats[i]
        cost = Df[np.ix_(sups[i], comp)]
        transport += float((plan * cost).sum())
        reg += float((plan * cost).sum()) - eps * _entropy(plan)
        plans.append(_plan_from_matrix(plan, sups[i], [int(c) for c in comp], cost))
    nu = {
        int(comp[s]): float(eta[s]) for s in range(len(comp)) if eta[s] > 1e-15
    }
    return EntropicBarycenterResult(
        value=transport,
        nu=nu,
        plans=tuple(plans),
        regularized_objective=reg,
        iterations=it,
        residual=residual,
    )
