"""Curvature of hyperedges: values, bounds, closed forms, and reports.

The curvature of a hyperedge with ``n`` vertices is
``1 - W / (n - 1)``, where ``W`` is the multi-marginal transport value
coupling the walk laws of the edge's vertices under the median cost.
On 2-edges this reduces to the classical pairwise (Ollivier) curvature.
Values always lie in ``[-2, 1]``: the median cost of any tuple a
coupling can charge is at most ``3 (n - 1)``.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

from .entropic import EntropicConfig, entropic_barycenter
from .errors import (
    HypercurvError,
    NotAnEdgeError,
    NotAHyperpathError,
    SizeCapExceeded,
)
from .exact import DEFAULT_SUPPORT_CAP, barycenter, mmot, w1_pair
from .hypergraph import Hypergraph, from_edge_labels
from .metric import DistanceMatrix, distance_matrix
from .walks import WalkDistribution, walk_distribution

METHOD_ALIASES = {
    "exact": "exact-barycenter",
    "exact-barycenter": "exact-barycenter",
    "exact-mmot": "exact-mmot",
    "entropic": "entropic",
}

COMPLETE_UNIFORM_MAX_VERTICES = 14


@dataclass(frozen=True)
class CurvatureRecord:
    """Per-edge transport value, curvature, bound, and solver diagnostics."""

    edge_id: int
    vertices: tuple[str, ...]
    n: int
    w: float | None
    kappa: float | None
    upper_bound: float | None
    method: str
    iterations: int | None
    runtime_ms: float | None
    error: str | None = None


def edge_walks(h: Hypergraph, edge_id: int) -> list[WalkDistribution]:
    """Walk laws of the edge's vertices, in edge vertex order."""
    h._check_edge(edge_id)
    return [walk_distribution(h, i) for i in h.edges[edge_id]]


def hyperedge_curvature(
    h: Hypergraph,
    dm: DistanceMatrix,
    edge_id: int,
    method: str = "exact",
    *,
    entropic_cfg: EntropicConfig | None = None,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    walks: Mapping[int, WalkDistribution] | None = None,
) -> CurvatureRecord:
    """Curvature record for one hyperedge under the selected solver.

    ``exact`` (the default) solves the barycenter program; ``exact-mmot``
    enumerates the joint support instead and is subject to
    ``support_cap``; ``entropic`` needs ``entropic_cfg`` and reports the
    transport part of the regularized plan.
    """
    tag = METHOD_ALIASES.get(method)
    if tag is None:
        raise ValueError(f"unknown method {method!r}")
    h._check_edge(edge_id)
    edge = h.edges[edge_id]
    n = len(edge)
    if walks is not None:
        ws = [walks[i] for i in edge]
    else:
        ws = edge_walks(h, edge_id)
    t0 = time.perf_counter()
    if tag == "exact-barycenter":
        sol = barycenter(dm, ws)
        w_val, iters = sol.objective, sol.iterations
    elif tag == "exact-mmot":
        w_val, plan = mmot(dm, ws, support_cap=support_cap)
        iters = plan.iterations
    else:
        if entropic_cfg is None:
            raise ValueError("entropic method needs an EntropicConfig")
        res = entropic_barycenter(dm, ws, entropic_cfg)
        w_val, iters = res.value, res.iterations
    runtime_ms = (time.perf_counter() - t0) * 1000.0
    return CurvatureRecord(
        edge_id=edge_id,
        vertices=h.edge_labels(edge_id),
        n=n,
        w=w_val,
        kappa=1.0 - w_val / (n - 1),
        upper_bound=common_neighbor_upper_bound(h, {w.owner: w for w in ws}, edge_id),
        method=tag,
        iterations=iters,
        runtime_ms=runtime_ms,
    )


def graph_ricci(h: Hypergraph, dm: DistanceMatrix, i: int, j: int) -> float:
    """Pairwise curvature ``1 - W(m_i, m_j) / d(i, j)`` of a 2-edge."""
    h._check_vertex(i)
    h._check_vertex(j)
    pair = (min(i, j), max(i, j))
    if pair not in h.edges:
        raise NotAnEdgeError(f"vertices {pair} do not form a 2-edge")
    w, _ = w1_pair(dm, walk_distribution(h, i), walk_distribution(h, j))
    return 1.0 - w / dm.get(i, j)


def common_neighbor_mass(
    h: Hypergraph,
    walks: Mapping[int, WalkDistribution] | None,
    edge_id: int,
) -> float:
    """Minimum over ordered edge-vertex pairs ``(u, v)`` of the walk mass
    ``u`` places on the common neighborhood of ``u`` and ``v``.

    One minus this value is a certified lower bound on the edge's
    transport value (weak duality with the two-potential certificate).
    """
    h._check_edge(edge_id)
    edge = h.edges[edge_id]
    nbrs = {i: h.neighbors(i) for i in edge}
    best = None
    for u in edge:
        wu = walks[u] if walks is not None else walk_distribution(h, u)
        for v in edge:
            if u == v:
                continue
            common = nbrs[u] & nbrs[v]
            val = sum(wu.mass.get(r, 0.0) for r in common)
            if best is None or val < best:
                best = val
    return best


def common_neighbor_upper_bound(
    h: Hypergraph,
    walks: Mapping[int, WalkDistribution] | None,
    edge_id: int,
) -> float:
    """Upper bound on the edge curvature from shared neighborhoods.

    Derived from the certified transport lower bound: with ``m`` the
    minimal common-neighborhood mass over ordered vertex pairs of the
    edge, the curvature is at most ``(n - 2 + m) / (n - 1)``.  On
    2-edges this is ``m`` itself, which on simple graphs reduces to the
    triangle-count bound; a 2-edge whose endpoints have disjoint
    neighborhoods gets bound 0, forcing non-positive curvature.
    """
    n = h.edge_size(edge_id)
    m = common_neighbor_mass(h, walks, edge_id)
    return (n - 2 + m) / (n - 1)


def complete_uniform(n_vertices: int, edge_size: int) -> tuple[Hypergraph, float]:
    """All ``edge_size``-subsets of a vertex set, plus the predicted curvature.

    Every edge of this family has curvature ``(N - 2) / (N - 1)``,
    independent of the edge size.
    """
    if not 2 <= edge_size <= n_vertices:
        raise ValueError("need 2 <= edge_size <= n_vertices")
    if n_vertices > COMPLETE_UNIFORM_MAX_VERTICES:
        raise SizeCapExceeded(
            f"complete uniform generator capped at {COMPLETE_UNIFORM_MAX_VERTICES} vertices"
        )
    labels = [str(i + 1) for i in range(n_vertices)]
    rows = [
        [labels[i] for i in combo]
        for combo in combinations(range(n_vertices), edge_size)
    ]
    predicted = (n_vertices - 2) / (n_vertices - 1)
    return from_edge_labels(rows), predicted


def validate_hyperpath(h: Hypergraph) -> None:
    """Raise unless every vertex degree is at most 2 and intersecting edges share exactly one vertex."""
    for i in range(h.num_vertices):
        if h.degree(i) > 2:
            raise NotAHyperpathError(
                f"vertex {h.labels[i]!r} has degree {h.degree(i)} > 2"
            )
    for a in range(h.num_edges):
        sa = set(h.edges[a])
        for b in range(a + 1, h.num_edges):
            inter = sa & set(h.edges[b])
            if len(inter) > 1:
                raise NotAHyperpathError(
                    f"edges {a} and {b} share {len(inter)} vertices"
                )


def hyperpath_lower_bound(h: Hypergraph, edge_id: int) -> tuple[int, float]:
    """Count of unshared vertices and the curvature lower bound of a hyperpath edge.

    ``beta`` counts the edge's vertices belonging to no other hyperedge;
    the curvature is at least ``-(n - beta - 2) / (2 (n - 1))``.  Edges
    where only one vertex is shared get a strictly positive bound.
    """
    validate_hyperpath(h)
    h._check_edge(edge_id)
    edge = h.edges[edge_id]
    n = len(edge)
    if n < 3:
        raise ValueError("the hyperpath bound needs edges with at least 3 vertices")
    beta = sum(1 for v in edge if h.degree(v) == 1)
    if beta == n:
        raise NotAHyperpathError("edge shares no vertex with the rest of the hyperpath")
    bound = -(n - beta - 2) / (2.0 * (n - 1))
    return beta, bound


def chain_hyperpath(sizes: Sequence[int], label_prefix: str = "v") -> Hypergraph:
    """Hyperpath whose consecutive edges share exactly one vertex."""
    if len(sizes) < 1 or any(s < 2 for s in sizes):
        raise ValueError("need edge sizes of at least 2")
    rows: list[list[str]] = []
    counter = 0
    last = None
    for s in sizes:
        fresh = [f"{label_prefix}{counter + k}" for k in range(s if last is None else s - 1)]
        counter += len(fresh)
        row = fresh if last is None else [last] + fresh
        rows.append(row)
        last = row[-1]
    return from_edge_labels(rows)


def star_hyperpath(
    center_size: int, arm_sizes: Sequence[int], label_prefix: str = "v"
) -> Hypergraph:
    """Hyperpath with one central edge and one arm edge per attachment vertex."""
    if center_size < 2 or len(arm_sizes) > center_size:
        raise ValueError("need at most one arm per central vertex")
    if any(s < 2 for s in arm_sizes):
        raise ValueError("need arm sizes of at least 2")
    center = [f"{label_prefix}{k}" for k in range(center_size)]
    rows = [center]
    counter = center_size
    for k, s in enumerate(arm_sizes):
        arm = [center[k]] + [f"{label_prefix}{counter + t}" for t in range(s - 1)]
        counter += s - 1
        rows.append(arm)
    return from_edge_labels(rows)


def curvature_report(
    h: Hypergraph,
    method: str = "exact",
    *,
    dm: DistanceMatrix | None = None,
    entropic_cfg: EntropicConfig | None = None,
    support_cap: int = DEFAULT_SUPPORT_CAP,
    jobs: int = 1,
) -> list[CurvatureRecord]:
    """Curvature records for every edge, sorted ascending by curvature.

    Ties break by edge id; rows whose solver failed carry the error code
    and sort last.  With ``jobs > 1`` edges solve concurrently; the
    ordering of the result does not depend on scheduling.
    """
    if dm is None:
        dm = distance_matrix(h)
    tag = METHOD_ALIASES.get(method)
    if tag is None:
        raise ValueError(f"unknown method {method!r}")

    def solve_one(e: int) -> CurvatureRecord:
        try:
            return hyperedge_curvature(
                h, dm, e, method, entropic_cfg=entropic_cfg, support_cap=support_cap
            )
        except HypercurvError as exc:
            return CurvatureRecord(
                edge_id=e,
                vertices=h.edge_labels(e),
                n=h.edge_size(e),
                w=None,
                kappa=None,
                upper_bound=None,
                method=tag,
                iterations=None,
                runtime_ms=None,
                error=exc.code,
            )

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(solve_one, range(h.num_edges)))
    else:
        records = [solve_one(e) for e in range(h.num_edges)]
    records.sort(
        key=lambda r: (r.error is not None, r.kappa if r.kappa is not None else 0.0, r.edge_id)
    )
    return records
