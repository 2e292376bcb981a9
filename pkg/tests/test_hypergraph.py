"""Parsing, structure queries, and chain distances."""

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypercurv import (
    Hypergraph,
    ParseError,
    complete_uniform,
    from_edge_labels,
    parse_hypergraph,
    serialize,
    shortest_distance,
)
from hypercurv.hypergraph import INFINITY, distances_from

from conftest import oracle_distances, random_hypergraph


class TestParse:
    def test_single_line(self):
        h = parse_hypergraph("a b c\n")
        assert h.num_vertices == 3
        assert h.edges == ((0, 1, 2),)

    def test_toy_shape(self, toy):
        assert toy.num_vertices == 13
        assert toy.num_edges == 4

    def test_first_appearance_ids(self):
        h = parse_hypergraph("c a\nb a\n")
        assert h.labels == ("c", "a", "b")

    def test_duplicate_vertex_rejected(self):
        with pytest.raises(ParseError, match="line 1"):
            parse_hypergraph("a a b\n")

    def test_short_line_rejected(self):
        with pytest.raises(ParseError, match="at least 2"):
            parse_hypergraph("a b\nc\n")

    def test_empty_input_rejected(self):
        with pytest.raises(ParseError, match="no hyperedges"):
            parse_hypergraph("# only a comment\n\n")

    def test_duplicate_edge_rejected_and_dedupe(self):
        text = "a b c\nc b a\n"
        with pytest.raises(ParseError, match="duplicate"):
            parse_hypergraph(text)
        h = parse_hypergraph(text, dedupe=True)
        assert h.num_edges == 1

    def test_comments_and_blank_lines(self):
        h = parse_hypergraph("a b # trailing\n\n# full line\nb c\n")
        assert h.num_edges == 2

    def test_bytes_and_bad_utf8(self):
        assert parse_hypergraph(b"a b\n").num_edges == 1
        with pytest.raises(ParseError, match="UTF-8"):
            parse_hypergraph(b"\xff\xfe a b\n")

    def test_file_object(self, tmp_path):
        p = tmp_path / "g.hg"
        p.write_text("x y z\n")
        with open(p) as fh:
            assert parse_hypergraph(fh).num_vertices == 3


class TestQueries:
    def test_toy_degree(self, toy):
        assert toy.degree(toy.id_of("2")) == 2

    def test_complete_uniform_degree(self):
        h, _ = complete_uniform(6, 3)
        expected = math.comb(5, 2)
        assert all(h.degree(i) == expected for i in range(6))

    def test_single_edge_degree(self, toy):
        assert toy.degree(toy.id_of("1")) == 1

    def test_degree_out_of_range(self, toy):
        with pytest.raises(IndexError):
            toy.degree(13)
        with pytest.raises(IndexError):
            toy.degree(-1)

    def test_toy_neighbors(self, toy):
        ids = {toy.id_of(x) for x in "1 3 4 5 6 7".split()}
        assert toy.neighbors(toy.id_of("2")) == ids

    def test_complete_uniform_neighbors(self):
        h, _ = complete_uniform(6, 3)
        for i in range(6):
            assert h.neighbors(i) == set(range(6)) - {i}

    def test_pair_edge_neighbors(self):
        h = parse_hypergraph("a b\n")
        assert h.neighbors(0) == {1}


class TestDistance:
    def test_self_distance(self, toy):
        assert shortest_distance(toy, 0, 0) == 0

    def test_shared_edge_distance(self, toy):
        assert shortest_distance(toy, toy.id_of("1"), toy.id_of("2")) == 1

    def test_toy_long_distance(self, toy):
        assert shortest_distance(toy, toy.id_of("1"), toy.id_of("13")) == 3

    def test_matches_oracle(self, toy):
        oracle = oracle_distances(toy)
        for i in range(toy.num_vertices):
            row = distances_from(toy, i)
            assert row == oracle[i]

    def test_disconnected_infinite(self):
        h = parse_hypergraph("a b\nc d\n")
        assert shortest_distance(h, 0, 2) == INFINITY

    def test_out_of_range(self, toy):
        with pytest.raises(IndexError):
            shortest_distance(toy, 0, 99)


class TestMetricProperties:
    @pytest.mark.parametrize("seed", range(8))
    def test_metric_axioms(self, seed):
        import numpy as np

        h = random_hypergraph(np.random.default_rng(seed))
        d = [distances_from(h, i) for i in range(h.num_vertices)]
        n = h.num_vertices
        for i in range(n):
            assert d[i][i] == 0
            for j in range(n):
                assert d[i][j] == d[j][i]
                assert (d[i][j] == 0) == (i == j)
        for i, j, k in itertools.product(range(n), repeat=3):
            if d[i][k] != INFINITY and d[k][j] != INFINITY:
                assert d[i][j] <= d[i][k] + d[k][j]

    def test_edge_members_at_distance_one(self, toy):
        for edge in toy.edges:
            for i in edge:
                row = distances_from(toy, i)
                for j in edge:
                    if i != j:
                        assert row[j] == 1

    def test_neighbors_are_distance_one(self, toy):
        for i in range(toy.num_vertices):
            row = distances_from(toy, i)
            assert toy.neighbors(i) == {j for j, v in enumerate(row) if v == 1}


class TestSerialize:
    def test_round_trip_fixpoint(self, toy):
        canonical = serialize(toy)
        again = parse_hypergraph(canonical)
        assert serialize(again) == canonical

    def test_structure_preserved(self, toy):
        again = parse_hypergraph(serialize(toy))
        original = {frozenset(toy.edge_labels(e)) for e in range(toy.num_edges)}
        rebuilt = {frozenset(again.edge_labels(e)) for e in range(again.num_edges)}
        assert original == rebuilt

    @settings(max_examples=60, deadline=None)
    @given(
        st.lists(
            st.lists(st.sampled_from("abcdefgh"), min_size=2, max_size=5, unique=True),
            min_size=1,
            max_size=6,
        )
    )
    def test_parse_serialize_fixpoint(self, rows):
        try:
            h = from_edge_labels(rows)
        except ParseError:
            return  # duplicate edges are a legal rejection
        canonical = serialize(h)
        again = parse_hypergraph(canonical)
        assert serialize(again) == canonical
        # invariants
        assert all(len(e) >= 2 for e in again.edges)
        assert len(set(again.edges)) == len(again.edges)
        for i in range(again.num_vertices):
            assert again.degree(i) >= 1
        for e, edge in enumerate(again.edges):
            for i in edge:
                assert e in again.incidence[i]


class TestInvariants:
    def test_incidence_inverse_of_membership(self, toy):
        for i in range(toy.num_vertices):
            for e in toy.incidence[i]:
                assert i in toy.edges[e]
        for e, edge in enumerate(toy.edges):
            for i in edge:
                assert e in toy.incidence[i]

    def test_edges_strictly_sorted(self, toy):
        for edge in toy.edges:
            assert list(edge) == sorted(set(edge))

    def test_direct_construction(self):
        h = from_edge_labels([["a", "b"], ["b", "c"]])
        assert isinstance(h, Hypergraph)
        assert h.num_edges == 2
