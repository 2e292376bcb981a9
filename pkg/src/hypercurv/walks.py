"""Uniform random-walk distributions on a hypergraph.

The walk started at vertex ``i`` first picks one of the ``d_i`` incident
hyperedges uniformly, then one of the other members of that edge
uniformly.  The resulting one-step law places mass
``1 / (d_i * (|E| - 1))`` on each co-member ``j`` of each edge ``E``
containing ``i``; masses accumulate over shared edges.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hypergraph import Hypergraph


@dataclass(frozen=True)
class WalkDistribution:
    """Sparse one-step distribution of the walk started at ``owner``."""

    owner: int
    mass: dict[int, float]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self.mass)

    @property
    def total(self) -> float:
        return float(sum(self.mass.values()))

    def as_array(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        for j, p in self.mass.items():
            out[j] = p
        return out


def walk_distribution(h: Hypergraph, i: int) -> WalkDistribution:
    """One-step law of the uniform hypergraph walk started at ``i``.

    Never places mass on ``i`` itself and is supported exactly on the
    neighbors of ``i``; the total mass is 1 up to float accumulation.
    """
    h._check_vertex(i)
    d_i = h.degree(i)
    acc: dict[int, float] = {}
    for e in h.incidence[i]:
        edge = h.edges[e]
        w = 1.0 / (d_i * (len(edge) - 1))
        for j in edge:
            if j != i:
                acc[j] = acc.get(j, 0.0) + w
    return WalkDistribution(owner=i, mass=dict(sorted(acc.items())))


def all_walks(h: Hypergraph) -> list[WalkDistribution]:
    """Walk distributions for every vertex, indexed by vertex id."""
    return [walk_distribution(h, i) for i in range(h.num_vertices)]
