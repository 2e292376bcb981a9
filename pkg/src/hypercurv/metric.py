"""Dense all-pairs chain distances and the multi-point median cost.

The median cost of a vertex tuple is the minimum over all vertices ``z``
of the summed chain distances to the tuple; it is the transport cost
attached to every multi-marginal coupling tuple.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DisconnectedError
from .hypergraph import Hypergraph, INFINITY, distances_from

_INF16 = np.int16(-1)  # sentinel; all finite chain distances fit in int16


@dataclass(frozen=True, eq=False)
class DistanceMatrix:
    """All-pairs chain distances, 16-bit with a sentinel for infinity."""

    n: int
    _d: np.ndarray  # int16, -1 encodes infinity

    def get(self, i: int, j: int) -> float:
        if not (0 <= i < self.n and 0 <= j < self.n):
            raise IndexError(f"vertex pair ({i}, {j}) out of range")
        v = self._d[i, j]
        return INFINITY if v == _INF16 else int(v)

    def as_float(self) -> np.ndarray:
        """Dense float copy with ``inf`` where vertices are unreachable."""
        out = self._d.astype(float)
        out[self._d == _INF16] = np.inf
        return out

    def same_component(self, ids: Sequence[int]) -> bool:
        ids = list(ids)
        if not ids:
            return True
        anchor = ids[0]
        return bool(np.all(self._d[anchor, ids] != _INF16))

    def component_of(self, i: int) -> np.ndarray:
        """Sorted ids of the connected component containing ``i``."""
        return np.flatnonzero(self._d[i] != _INF16)


def distance_matrix(h: Hypergraph) -> DistanceMatrix:
    """All-pairs chain distances via one breadth-first search per vertex."""
    n = h.num_vertices
    d = np.full((n, n), _INF16, dtype=np.int16)
    for i in range(n):
        row = distances_from(h, i)
        for j, v in enumerate(row):
            if v != INFINITY:
                d[i, j] = v
    return DistanceMatrix(n=n, _d=d)


@lru_cache(maxsize=65536)
def _median_cached(dm: DistanceMatrix, key: tuple[int, ...]) -> tuple[int, int]:
    cols = dm.as_float()[list(key), :].sum(axis=0)
    z = int(np.argmin(cols))  # argmin returns the smallest index on ties
    best = cols[z]
    if not np.isfinite(best):
        raise DisconnectedError(
            "median cost undefined: vertices span multiple components"
        )
    return z, int(best)


def median_vertex(dm: DistanceMatrix, xs: Sequence[int]) -> tuple[int, int]:
    """Best meeting vertex and its summed distance; ties pick the smallest id."""
    if len(xs) == 0:
        raise ValueError("median cost needs at least one vertex")
    for i in xs:
        if not 0 <= i < dm.n:
            raise IndexError(f"vertex id {i} out of range")
    return _median_cached(dm, tuple(sorted(xs)))


def median_cost(dm: DistanceMatrix, xs: Sequence[int]) -> int:
    """Minimum over all vertices ``z`` of the summed chain distance to ``xs``.

    Permutation-invariant in ``xs``; equals ``len(xs) - 1`` when ``xs``
    are the distinct vertices of one hyperedge.
    """
    return median_vertex(dm, xs)[1]
