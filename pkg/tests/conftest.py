"""Shared fixtures and independent oracles.

Oracles deliberately avoid the package's own solvers: distances come
from Floyd-Warshall on the co-membership graph, transport optima from
scipy's HiGHS linear programming, and ball moments from quadrature.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest
from scipy.optimize import linprog

from hypercurv import from_edge_labels, parse_hypergraph

TOY_TEXT = """\
# toy hypergraph with four overlapping edges
1 2 3
2 4 5 6 7
6 7 8 9 10 11
7 11 12 13
"""


@pytest.fixture(scope="session")
def toy():
    return parse_hypergraph(TOY_TEXT)


@pytest.fixture(scope="session")
def toy_dm(toy):
    from hypercurv import distance_matrix

    return distance_matrix(toy)


def oracle_distances(h):
    """All-pairs chain distances by Floyd-Warshall on shared-edge adjacency."""
    n = h.num_vertices
    d = [[math.inf] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for edge in h.edges:
        for a in edge:
            for b in edge:
                if a != b:
                    d[a][b] = 1
    for k in range(n):
        for i in range(n):
            dik = d[i][k]
            if dik == math.inf:
                continue
            for j in range(n):
                if dik + d[k][j] < d[i][j]:
                    d[i][j] = dik + d[k][j]
    return d


def oracle_cost(dist, xs):
    """Median cost by exhaustive scan over the oracle distance table."""
    best = math.inf
    for z in range(len(dist)):
        total = sum(dist[x][z] for x in xs)
        best = min(best, total)
    return best


def _sparse(walk):
    support = sorted(walk.mass)
    weights = np.array([walk.mass[j] for j in support])
    return support, weights


def oracle_w1(dist, mu, nu):
    """Pairwise transport optimum via scipy linprog (HiGHS)."""
    smu, wmu = _sparse(mu)
    snu, wnu = _sparse(nu)
    a, b = len(smu), len(snu)
    cost = np.array([[dist[r][s] for s in snu] for r in smu], dtype=float).ravel()
    A = []
    rhs = []
    for r in range(a):
        row = np.zeros(a * b)
        row[r * b : (r + 1) * b] = 1.0
        A.append(row)
        rhs.append(wmu[r])
    for s in range(b):
        row = np.zeros(a * b)
        row[s::b] = 1.0
        A.append(row)
        rhs.append(wnu[s])
    res = linprog(cost, A_eq=np.array(A), b_eq=np.array(rhs), bounds=(0, None),
                  method="highs")
    assert res.status == 0, res.message
    return res.fun


def oracle_mmot(dist, walks):
    """Multi-marginal transport optimum via scipy linprog (HiGHS)."""
    parsed = [_sparse(w) for w in walks]
    sups = [s for s, _ in parsed]
    weights = [w for _, w in parsed]
    sizes = [len(s) for s in sups]
    tuples = list(itertools.product(*[range(s) for s in sizes]))
    cost = np.array(
        [oracle_cost(dist, [sups[i][t[i]] for i in range(len(walks))]) for t in tuples],
        dtype=float,
    )
    A = np.zeros((sum(sizes), len(tuples)))
    rhs = np.concatenate(weights)
    offsets = np.concatenate([[0], np.cumsum(sizes)])[:-1]
    for col, t in enumerate(tuples):
        for i in range(len(walks)):
            A[offsets[i] + t[i], col] = 1.0
    res = linprog(cost, A_eq=A, b_eq=rhs, bounds=(0, None), method="highs")
    assert res.status == 0, res.message
    return res.fun


def random_hypergraph(rng, max_vertices=12, max_edge=4, max_edges=6):
    """Seeded random hypergraph; may be disconnected."""
    n = int(rng.integers(4, max_vertices + 1))
    n_edges = int(rng.integers(2, max_edges + 1))
    rows, seen = [], set()
    for _ in range(n_edges):
        k = int(rng.integers(2, max_edge + 1))
        edge = tuple(sorted(rng.choice(n, size=k, replace=False).tolist()))
        if edge in seen:
            continue
        seen.add(edge)
        rows.append([f"v{i}" for i in edge])
    if not rows:
        rows = [["v0", "v1"]]
    return from_edge_labels(rows)
