"""Exact optimal transport on the hypergraph metric.

Pairwise Wasserstein distance, the multi-marginal transport value of a
hyperedge, the equivalent barycenter linear program, and feasible-dual
lower bounds.  Every solve goes through the in-repo simplex, so values
are exact up to LP arithmetic and bit-reproducible.

The multi-marginal program couples the walk laws ``m_1 .. m_n`` and
charges each support tuple its median cost (the cheapest meeting vertex).
Its optimum equals the optimum of the barycenter program, which searches
for one distribution minimizing the summed pairwise Wasserstein
distances to the walks; both forms are exposed so each can check the
other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .errors import DisconnectedError, MarginalError, SupportCapExceeded
from .metric import DistanceMatrix
from .simplex import DEFAULT_PIVOT_RULE, solve_lp
from .walks import WalkDistribution

MASS_TOL = 1e-9
_PLAN_FLOOR = 1e-12
DEFAULT_SUPPORT_CAP = 2_000_000


@dataclass(frozen=True)
class TransportPlan:
    """Coupling with positive mass on finitely many vertex tuples."""

    arity: int
    support: tuple[tuple[int, ...], ...]
    mass: tuple[float, ...]
    objective: float
    iterations: int = 0

    @property
    def total_mass(self) -> float:
        return float(sum(self.mass))

    def marginal(self, k: int) -> dict[int, float]:
        acc: dict[int, float] = {}
        for tup, p in zip(self.support, self.mass):
            acc[tup[k]] = acc.get(tup[k], 0.0) + p
        return dict(sorted(acc.items()))

    def max_marginal_violation(self, marginals: Sequence[Mapping[int, float]]) -> float:
        """Largest per-vertex deviation of any pushforward from its target."""
        worst = 0.0
        for k, target in enumerate(marginals):
            got = self.marginal(k)
            for v in set(got) | set(target):
                worst = max(worst, abs(got.get(v, 0.0) - target.get(v, 0.0)))
        return worst


@dataclass(frozen=True)
class DualPotentials:
    """One potential per marginal; feasible sets certify lower bounds."""

    potentials: tuple[np.ndarray, ...]
    feasible: bool

    def value(self, walks: Sequence[WalkDistribution]) -> float:
        total = 0.0
        for pot, walk in zip(self.potentials, walks):
            total += sum(pot[r] * p for r, p in walk.mass.items())
        return total


@dataclass(frozen=True)
class BarycenterSolution:
    """Optimal shared distribution and its pairwise couplings."""

    nu: dict[int, float]
    plans: tuple[TransportPlan, ...]
    objective: float
    iterations: int


def _as_sparse(dist, n: int) -> tuple[list[int], np.ndarray]:
    """Positive-mass support and weights of a distribution over vertices."""
    if isinstance(dist, WalkDistribution):
        pairs = sorted(dist.mass.items())
    elif isinstance(dist, Mapping):
        pairs = sorted((int(j), float(p)) for j, p in dist.items())
    else:
        arr = np.asarray(dist, dtype=float)
        pairs = [(int(j), float(arr[j])) for j in np.flatnonzero(arr != 0.0)]
    if any(p < 0.0 for _, p in pairs):
        raise MarginalError("marginals cannot carry negative mass")
    items = [(j, p) for j, p in pairs if p > 0.0]
    if not items:
        raise MarginalError("a marginal with zero total mass cannot be coupled")
    support = [j for j, _ in items]
    for j in support:
        if not 0 <= j < n:
            raise IndexError(f"vertex id {j} out of range")
    return support, np.array([p for _, p in items])


def _require_one_component(dm: DistanceMatrix, ids: Sequence[int]) -> None:
    if not dm.same_component(ids):
        raise DisconnectedError("supports span multiple connected components")


def w1_pair(
    dm: DistanceMatrix,
    mu,
    nu,
    *,
    pivot_rule: str = DEFAULT_PIVOT_RULE,
) -> tuple[float, TransportPlan]:
    """Exact Wasserstein distance between two distributions on vertices.

    Solves the ``|supp(mu)| x |supp(nu)|`` transportation program with
    chain distances as costs.  Returns the optimum and an optimal plan.
    """
    smu, wmu = _as_sparse(mu, dm.n)
    snu, wnu = _as_sparse(nu, dm.n)
    if abs(wmu.sum() - wnu.sum()) > MASS_TOL:
        raise MarginalError(
            f"total masses differ: {wmu.sum():.12f} vs {wnu.sum():.12f}"
        )
    _require_one_component(dm, list(smu) + list(snu))
    a, b = len(smu), len(snu)
    D = dm.as_float()[np.ix_(smu, snu)]
    A = np.zeros((a + b, a * b))
    for r in range(a):
        A[r, r * b : (r + 1) * b] = 1.0
    for s in range(b):
        A[a + s, s::b] = 1.0
    rhs = np.concatenate([wmu, wnu])
    sol = solve_lp(D.ravel(), A, rhs, pivot_rule=pivot_rule)
    keep = np.flatnonzero(sol.x > _PLAN_FLOOR)
    plan = TransportPlan(
        arity=2,
        support=tuple((smu[k // b], snu[k % b]) for k in keep),
        mass=tuple(float(sol.x[k]) for k in keep),
        objective=sol.objective,
        iterations=sol.iterations,
    )
    return sol.objective, plan


def _tuple_costs(dm: DistanceMatrix, sups: Sequence[Sequence[int]], idx: np.ndarray) -> np.ndarray:
    """Median cost of every support tuple, vectorized in chunks."""
    D = dm.as_float()
    count, n = idx.shape
    out = np.empty(count)
    arrays = [np.asarray(s) for s in sups]
    chunk = max(1, 2_000_000 // max(dm.n, 1))
    for lo in range(0, count, chunk):
        hi = min(count, lo + chunk)
        acc = np.zeros((hi - lo, dm.n))
        for i in range(n):
            acc += D[arrays[i][idx[lo:hi, i]], :]
        out[lo:hi] = acc.min(axis=1)
    return out


def mmot(
    dm: DistanceMatrix,
    walks: Sequence,
    *,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    pivot_rule: str = DEFAULT_PIVOT_RULE,
) -> tuple[float, TransportPlan]:
    """Exact multi-marginal transport value over the joint walk support.

    Enumerates the product of the marginal supports (couplings place no
    mass elsewhere), charges each tuple its median cost, and solves the
    resulting program exactly.
    """
    n = len(walks)
    if n < 2:
        raise ValueError("multi-marginal transport needs at least 2 marginals")
    parsed = [_as_sparse(w, dm.n) for w in walks]
    sups = [s for s, _ in parsed]
    ws = [w for _, w in parsed]
    total = ws[0].sum()
    for w in ws[1:]:
        if abs(w.sum() - total) > MASS_TOL:
            raise MarginalError("marginals have different total masses")
    _require_one_component(dm, [v for s in sups for v in s])
    sizes = [len(s) for s in sups]
    count = 1
    for s in sizes:
        count *= s
        if count > support_cap:
            raise SupportCapExceeded(
                f"joint support exceeds cap of {support_cap} tuples"
            )
    idx = np.stack(
        np.meshgrid(*[np.arange(s) for s in sizes], indexing="ij"), axis=-1
    ).reshape(count, n)
    costs = _tuple_costs(dm, sups, idx)
    offsets = np.concatenate([[0], np.cumsum(sizes)])[:-1]
    A = np.zeros((sum(sizes), count))
    cols = np.arange(count)
    for i in range(n):
        A[offsets[i] + idx[:, i], cols] = 1.0
    rhs = np.concatenate(ws)
    sol = solve_lp(costs, A, rhs, pivot_rule=pivot_rule)
    keep = np.flatnonzero(sol.x > _PLAN_FLOOR)
    plan = TransportPlan(
        arity=n,
        support=tuple(
            tuple(sups[i][idx[k, i]] for i in range(n)) for k in keep
        ),
        mass=tuple(float(sol.x[k]) for k in keep),
        objective=sol.objective,
        iterations=sol.iterations,
    )
    return sol.objective, plan


def barycenter(
    dm: DistanceMatrix,
    walks: Sequence,
    *,
    pivot_rule: str = DEFAULT_PIVOT_RULE,
) -> BarycenterSolution:
    """Joint program over a shared distribution and one coupling per walk.

    The optimum equals the multi-marginal value; this form stays
    polynomial in the vertex count, so it is the default exact method.
    The shared distribution ranges over the connected component of the
    supports.
    """
    n = len(walks)
    if n < 2:
        raise ValueError("barycenter needs at least 2 marginals")
    parsed = [_as_sparse(w, dm.n) for w in walks]
    sups = [s for s, _ in parsed]
    ws = [w for _, w in parsed]
    _require_one_component(dm, [v for s in sups for v in s])
    comp = dm.component_of(sups[0][0])
    cdim = len(comp)
    sizes = [len(s) for s in sups]
    offsets = np.concatenate([[0], np.cumsum([s * cdim for s in sizes])])
    nu_off = int(offsets[-1])
    nvar = nu_off + cdim
    Df = dm.as_float()
    cost = np.zeros(nvar)
    for i in range(n):
        cost[offsets[i] : offsets[i + 1]] = Df[np.ix_(sups[i], comp)].ravel()
    nrows = sum(sizes) + n * cdim
    A = np.zeros((nrows, nvar))
    rhs = np.zeros(nrows)
    row = 0
    for i in range(n):
        for r in range(sizes[i]):
            A[row, offsets[i] + r * cdim : offsets[i] + (r + 1) * cdim] = 1.0
            rhs[row] = ws[i][r]
            row += 1
    for i in range(n):
        for s in range(cdim):
            A[row, offsets[i] + s : offsets[i + 1] : cdim] = 1.0
            A[row, nu_off + s] = -1.0
            row += 1
    sol = solve_lp(cost, A, rhs, pivot_rule=pivot_rule)
    nu = {
        int(comp[s]): float(sol.x[nu_off + s])
        for s in range(cdim)
        if sol.x[nu_off + s] > _PLAN_FLOOR
    }
    plans = []
    for i in range(n):
        block = sol.x[offsets[i] : offsets[i + 1]].reshape(sizes[i], cdim)
        rr, ss = np.nonzero(block > _PLAN_FLOOR)
        plans.append(
            TransportPlan(
                arity=2,
                support=tuple(
                    (sups[i][r], int(comp[s])) for r, s in zip(rr, ss)
                ),
                mass=tuple(float(block[r, s]) for r, s in zip(rr, ss)),
                objective=float((block * Df[np.ix_(sups[i], comp)]).sum()),
                iterations=sol.iterations,
            )
        )
    return BarycenterSolution(
        nu=nu,
        plans=tuple(plans),
        objective=sol.objective,
        iterations=sol.iterations,
    )


def dual_potentials(
    dm: DistanceMatrix, walks: Sequence[WalkDistribution], u: int, v: int
) -> DualPotentials:
    """Feasible potentials built from the common neighborhood of two walks.

    The potential is 2 on the support of walk ``u`` outside the support
    of walk ``v`` and 1 elsewhere; assigning it to marginal ``u``, its
    negation to marginal ``v``, and zero to the rest keeps every tuple
    sum below the tuple's median cost, so the induced value is a
    certified lower bound on the transport optimum.
    """
    n = len(walks)
    if not (0 <= u < n and 0 <= v < n):
        raise IndexError("marginal index out of range")
    if u == v:
        raise IndexError("need two distinct marginal indices")
    sup_u = set(walks[u].mass)
    sup_v = set(walks[v].mass)
    f = np.ones(dm.n)
    f[sorted(sup_u - sup_v)] = 2.0
    pots = [np.zeros(dm.n) for _ in range(n)]
    pots[u] = f
    pots[v] = -f
    return DualPotentials(potentials=tuple(pots), feasible=True)


def dual_lower_bound(
    dm: DistanceMatrix, walks: Sequence[WalkDistribution], u: int, v: int
) -> float:
    """Certified lower bound on the transport value of the walk family.

    Equals one minus the mass walk ``u`` gives to the common support of
    walks ``u`` and ``v``; by weak duality it never exceeds the optimum.
    """
    cert = dual_potentials(dm, walks, u, v)
    return cert.value(walks)
