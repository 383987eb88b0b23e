"""Tests for the finite directed multigraph model."""

from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from corrdil import (
    DirectedGraph,
    GraphLookupError,
    StructureError,
    edge_bucket,
    finite_receivers,
    range_fiber,
    satisfies_hyperrigidity_criterion,
)
from helpers import cuntz_graph, cycle_graph


def test_structure_validation():
    with pytest.raises(StructureError):
        DirectedGraph(("v", "v"), ())                      # duplicate vertex
    with pytest.raises(StructureError):
        DirectedGraph(("v",), (("e", "v", "v"), ("e", "v", "v")))   # duplicate edge id
    with pytest.raises(StructureError):
        DirectedGraph(("v",), (("e", "v", "w"),))          # missing endpoint
    with pytest.raises(StructureError):
        DirectedGraph(("v",), (), truncated=frozenset({"w"}))      # unknown flag


def test_edge_lookup():
    g = cuntz_graph(2)
    assert g.edge("e0").src == "v"
    with pytest.raises(GraphLookupError):
        g.edge("nope")
    with pytest.raises(GraphLookupError):
        g.require_vertex("nope")


def test_range_fiber_examples():
    loop = DirectedGraph(("v",), (("l", "v", "v"),))
    assert range_fiber(loop, "v") == ("l",)
    assert len(range_fiber(cuntz_graph(3), "v")) == 3
    g = DirectedGraph(("v", "w"), (("e", "v", "w"),))
    assert range_fiber(g, "v") == ()


def test_edge_bucket_examples():
    g = DirectedGraph(("v", "w"), (("a", "w", "v"), ("b", "w", "v")))
    assert edge_bucket(g, "v", "w") == ("a", "b")          # input order
    assert edge_bucket(g, "w", "v") == ()
    loop = DirectedGraph(("v",), (("l", "v", "v"),))
    assert edge_bucket(loop, "v", "v") == ("l",)


def test_finite_receivers_examples():
    assert finite_receivers(cuntz_graph(2)) == ("v",)
    g = DirectedGraph(("v", "w"), (("e", "v", "w"),))
    assert finite_receivers(g) == ("w",)
    assert finite_receivers(DirectedGraph(("v", "w"), ())) == ()


def test_finite_receivers_excludes_truncated():
    g = DirectedGraph(("v", "w"), (("e", "v", "w"),), truncated=frozenset({"w"}))
    assert finite_receivers(g) == ()


def test_hyperrigidity_examples():
    assert satisfies_hyperrigidity_criterion(cycle_graph(3))
    assert satisfies_hyperrigidity_criterion(DirectedGraph(("v", "w"), ()))  # vacuous
    flagged = DirectedGraph(
        ("v", "w"), (("e", "v", "w"),), truncated=frozenset({"w"})
    )
    assert not satisfies_hyperrigidity_criterion(flagged)


def test_truncated_source_only_vertex_keeps_criterion():
    # flag on a vertex nothing points at: criterion remains satisfied
    g = DirectedGraph(("v", "w"), (("e", "w", "v"),), truncated=frozenset({"w"}))
    assert satisfies_hyperrigidity_criterion(g)


@st.composite
def graphs(draw):
    nv = draw(st.integers(1, 4))
    vs = tuple(f"v{i}" for i in range(nv))
    ne = draw(st.integers(0, 6))
    edges = tuple(
        (f"e{i}", vs[draw(st.integers(0, nv - 1))], vs[draw(st.integers(0, nv - 1))])
        for i in range(ne)
    )
    return DirectedGraph(vs, edges)


@given(graphs())
def test_buckets_partition_fibers(g):
    for v in g.vertices:
        fiber = range_fiber(g, v)
        bucketed = [e for w in g.vertices for e in edge_bucket(g, v, w)]
        assert sorted(bucketed) == sorted(fiber)
        for eid in fiber:
            assert g.edge(eid).dst == v


@given(graphs())
def test_finite_receivers_matches_fibers(g):
    fin = set(finite_receivers(g))
    for v in g.vertices:
        assert (v in fin) == (len(range_fiber(g, v)) > 0)


@given(graphs())
def test_untruncated_graphs_satisfy_criterion(g):
    assert satisfies_hyperrigidity_criterion(g)
