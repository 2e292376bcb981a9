"""Hypothesis property tests over generated hypergraphs."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercurv import (
    ParseError,
    all_walks,
    distance_matrix,
    from_edge_labels,
    median_cost,
)
from hypercurv.hypergraph import INFINITY, distances_from

edge_lists = st.lists(
    st.lists(st.sampled_from([f"v{i}" for i in range(9)]), min_size=2, max_size=4,
             unique=True),
    min_size=1,
    max_size=7,
)


def build(rows):
    try:
        return from_edge_labels(rows, dedupe=True)
    except ParseError:
        return None


@settings(max_examples=80, deadline=None)
@given(edge_lists)
def test_walks_are_probability_laws_on_neighbors(rows):
    h = build(rows)
    if h is None:
        return
    for w in all_walks(h):
        assert abs(w.total - 1.0) < 1e-12
        assert set(w.mass) == h.neighbors(w.owner)
        assert w.mass.get(w.owner, 0.0) == 0.0


@settings(max_examples=80, deadline=None)
@given(edge_lists, st.randoms(use_true_random=False))
def test_median_cost_invariants(rows, rnd):
    h = build(rows)
    if h is None:
        return
    dm = distance_matrix(h)
    comp = dm.component_of(0)
    size = min(len(comp), 3)
    xs = [int(rnd.choice(list(comp))) for _ in range(size)]
    c = median_cost(dm, xs)
    assert c == median_cost(dm, list(reversed(xs)))
    assert c >= max(dm.get(i, j) for i in xs for j in xs)
    if len(set(xs)) == len(xs):
        assert c >= len(xs) - 1


@settings(max_examples=60, deadline=None)
@given(edge_lists)
def test_distance_symmetry_and_edge_adjacency(rows):
    h = build(rows)
    if h is None:
        return
    rows_d = [distances_from(h, i) for i in range(h.num_vertices)]
    for i in range(h.num_vertices):
        assert rows_d[i][i] == 0
        for j in range(h.num_vertices):
            assert rows_d[i][j] == rows_d[j][i]
    for edge in h.edges:
        for a in edge:
            for b in edge:
                if a != b:
                    assert rows_d[a][b] == 1
    for i in range(h.num_vertices):
        nbrs = {j for j, v in enumerate(rows_d[i]) if v == 1 and v != INFINITY}
        assert nbrs == h.neighbors(i)
