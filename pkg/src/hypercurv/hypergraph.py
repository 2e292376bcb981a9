"""Hypergraph container, text parsing, and chain distances.

Vertices carry external string labels and are addressed internally by
dense integer ids assigned in first-appearance order.  Hyperedges are
strictly sorted vertex-id tuples of cardinality at least two; no two
edges may be equal as sets.  The distance between two vertices is the
minimal length of a chain of pairwise-intersecting hyperedges joining
them (1 if they share an edge), computed by breadth-first search on the
bipartite vertex/edge incidence structure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Iterable, Sequence

from .errors import ParseError

INFINITY = float("inf")


@dataclass(frozen=True, eq=False)
class Hypergraph:
    """Immutable hypergraph over dense vertex ids ``0..N-1``.

    Attributes
    ----------
    labels : external vertex labels, indexed by id.
    edges : hyperedges as strictly increasing id tuples.
    incidence : per vertex, ids of the edges containing it.
    """

    labels: tuple[str, ...]
    edges: tuple[tuple[int, ...], ...]
    incidence: tuple[tuple[int, ...], ...]

    @property
    def num_vertices(self) -> int:
        return len(self.labels)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def _check_vertex(self, i: int) -> None:
        if not 0 <= i < len(self.labels):
            raise IndexError(f"vertex id {i} out of range 0..{len(self.labels) - 1}")

    def _check_edge(self, e: int) -> None:
        if not 0 <= e < len(self.edges):
            raise IndexError(f"edge id {e} out of range 0..{len(self.edges) - 1}")

    def degree(self, i: int) -> int:
        """Number of hyperedges containing vertex ``i``."""
        self._check_vertex(i)
        return len(self.incidence[i])

    def neighbors(self, i: int) -> set[int]:
        """All vertices sharing at least one hyperedge with ``i``."""
        self._check_vertex(i)
        out: set[int] = set()
        for e in self.incidence[i]:
            out.update(self.edges[e])
        out.discard(i)
        return out

    def edge_size(self, e: int) -> int:
        self._check_edge(e)
        return len(self.edges[e])

    def edge_labels(self, e: int) -> tuple[str, ...]:
        self._check_edge(e)
        return tuple(self.labels[i] for i in self.edges[e])

    def id_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"unknown vertex label {label!r}") from None


def from_edge_labels(
    rows: Iterable[Sequence[str]],
    dedupe: bool = False,
    line_numbers: Sequence[int] | None = None,
) -> Hypergraph:
    """Build a hypergraph from rows of vertex labels, one row per edge.

    Ids are assigned by first appearance.  Duplicate labels within a row
    and rows with fewer than two labels are rejected.  Duplicate edges
    (equal as sets) are rejected unless ``dedupe`` collapses them.
    """
    ids: dict[str, int] = {}
    labels: list[str] = []
    edges: list[tuple[int, ...]] = []
    seen: set[tuple[int, ...]] = set()
    for k, row in enumerate(rows):
        line = line_numbers[k] if line_numbers is not None else None
        if len(row) < 2:
            raise ParseError("a hyperedge needs at least 2 vertices", line)
        if len(set(row)) != len(row):
            raise ParseError("repeated vertex within a hyperedge", line)
        for tok in row:
            if tok not in ids:
                ids[tok] = len(labels)
                labels.append(tok)
        edge = tuple(sorted(ids[tok] for tok in row))
        if edge in seen:
            if dedupe:
                continue
            raise ParseError("duplicate hyperedge", line)
        seen.add(edge)
        edges.append(edge)
    if not edges:
        raise ParseError("input defines no hyperedges")
    incidence: list[list[int]] = [[] for _ in labels]
    for e, edge in enumerate(edges):
        for i in edge:
            incidence[i].append(e)
    return Hypergraph(
        labels=tuple(labels),
        edges=tuple(edges),
        incidence=tuple(tuple(lst) for lst in incidence),
    )


def parse_hypergraph(source: str | bytes | IO, dedupe: bool = False) -> Hypergraph:
    """Parse the hyperedge-list text format.

    One hyperedge per line, whitespace-separated labels; ``#`` starts a
    comment, blank lines are ignored.
    """
    if hasattr(source, "read"):
        source = source.read()
    if isinstance(source, bytes):
        try:
            source = source.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not valid UTF-8: {exc}") from exc
    rows: list[list[str]] = []
    lines: list[int] = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        rows.append(text.split())
        lines.append(lineno)
    return from_edge_labels(rows, dedupe=dedupe, line_numbers=lines)


def serialize(h: Hypergraph) -> str:
    """Canonical text form; parsing it back and re-serializing is the identity.

    Vertices are listed within each edge by id and edges sorted
    lexicographically, under ids renumbered to agree with first
    appearance in that very ordering.  The renumbering loop terminates:
    every pass lexicographically decreases the sorted tuple sequence.
    """
    labels = list(h.labels)
    tuples = [tuple(e) for e in h.edges]
    for _ in range(len(labels) * len(tuples) + 2):
        order = sorted(tuples)
        remap: dict[int, int] = {}
        for edge in order:
            for i in edge:
                if i not in remap:
                    remap[i] = len(remap)
        if all(remap[i] == i for i in remap):
            break
        tuples = [tuple(sorted(remap[i] for i in edge)) for edge in tuples]
        new_labels = [""] * len(labels)
        for old, new in remap.items():
            new_labels[new] = labels[old]
        labels = new_labels
    out = []
    for edge in sorted(tuples):
        out.append(" ".join(labels[i] for i in edge))
    return "\n".join(out) + "\n"


def distances_from(h: Hypergraph, source: int) -> list[float]:
    """Chain distances from ``source`` to every vertex (``inf`` if unreachable)."""
    h._check_vertex(source)
    dist: list[float] = [INFINITY] * h.num_vertices
    dist[source] = 0
    seen_edge = [False] * h.num_edges
    frontier = [source]
    d = 0
    while frontier:
        d += 1
        nxt: list[int] = []
        for v in frontier:
            for e in h.incidence[v]:
                if seen_edge[e]:
                    continue
                seen_edge[e] = True
                for w in h.edges[e]:
                    if dist[w] == INFINITY:
                        dist[w] = d
                        nxt.append(w)
        frontier = nxt
    return dist


def shortest_distance(h: Hypergraph, i: int, j: int) -> float:
    """Minimal number of pairwise-intersecting hyperedges linking ``i`` to ``j``."""
    h._check_vertex(i)
    h._check_vertex(j)
    if i == j:
        return 0
    return distances_from(h, i)[j]
