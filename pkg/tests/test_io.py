"""Tests for problem-file parsing and canonical serialization."""

from __future__ import annotations

import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from corrdil import (
    DEFAULT_TOL,
    GraphRep,
    ParseError,
    ProblemFile,
    Tolerance,
    parse_problem,
    problem_text,
)
from corrdil.io import canonical_text, matrix_from_json, matrix_to_json
from helpers import cuntz_graph, random_cc_rep, rng_for, z2_loop_swap


def sample_problem() -> ProblemFile:
    rng = rng_for(950)
    a = z2_loop_swap(mixer=True)
    rep = random_cc_rep(rng, a.graph, dim=3)
    rep = GraphRep(rep.graph, rep.dim, rep.proj, rep.edge_op)
    return ProblemFile(a.graph, a, rep, Tolerance())


# ---------------------------------------------------------------- round trips

def test_round_trip_byte_identical():
    pf = sample_problem()
    text = problem_text(pf)
    again = problem_text(parse_problem(text))
    assert again == text


def test_round_trip_preserves_values():
    pf = sample_problem()
    pf2 = parse_problem(problem_text(pf))
    assert pf2.graph == pf.graph
    for e in pf.graph.edges:
        assert np.array_equal(pf2.representation.edge_op[e.eid],
                              pf.representation.edge_op[e.eid])
    for v in pf.graph.vertices:
        assert np.array_equal(pf2.representation.proj[v], pf.representation.proj[v])
    assert pf2.tolerance == pf.tolerance
    U = pf.action.bucket_unitary[(1, "v", "v")]
    assert np.array_equal(pf2.action.bucket_unitary[(1, "v", "v")], U)


def test_graph_only_file():
    text = json.dumps({"graph": {"vertices": ["v"], "edges": [["l", "v", "v"]]}})
    pf = parse_problem(text)
    assert pf.representation is None
    assert pf.action is None
    assert pf.tolerance == DEFAULT_TOL
    assert problem_text(parse_problem(problem_text(pf))) == problem_text(pf)


@given(st.lists(st.floats(allow_nan=False, allow_infinity=False, width=64),
                min_size=1, max_size=4))
def test_float_formatting_round_trips(values):
    M = np.array([values], dtype=complex)
    again = matrix_from_json(json.loads(canonical_text(matrix_to_json(M))), "m")
    assert np.array_equal(again, M)


# ---------------------------------------------------------------- diagnostics

def test_not_json():
    with pytest.raises(ParseError, match="not valid JSON"):
        parse_problem("{nope")


def test_missing_graph_block():
    with pytest.raises(ParseError, match="graph"):
        parse_problem("{}")


def test_bad_edge_shape():
    text = json.dumps({"graph": {"vertices": ["v"], "edges": [["l", "v"]]}})
    with pytest.raises(ParseError, match=r"edges\[0\]"):
        parse_problem(text)


def test_unknown_vertex_in_edge():
    text = json.dumps({"graph": {"vertices": ["v"], "edges": [["l", "v", "w"]]}})
    with pytest.raises(ParseError, match="graph"):
        parse_problem(text)


def test_ragged_matrix():
    text = json.dumps({
        "graph": {"vertices": ["v"], "edges": [["l", "v", "v"]]},
        "representation": {"dim": 2,
                           "proj": {"v": [[[1, 0], [0, 0]], [[0, 0]]]},
                           "edge_op": {"l": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]}},
    })
    with pytest.raises(ParseError, match="ragged"):
        parse_problem(text)


def test_bad_entry_pair():
    with pytest.raises(ParseError, match=r"m\[0\]\[0\]"):
        matrix_from_json([[[1, 2, 3]]], "m")


def test_unknown_tolerance_field():
    text = json.dumps({
        "graph": {"vertices": ["v"], "edges": []},
        "tolerance": {"epsilon": 1e-6},
    })
    with pytest.raises(ParseError, match="epsilon"):
        parse_problem(text)


def test_rep_dimension_mismatch():
    text = json.dumps({
        "graph": {"vertices": ["v"], "edges": [["l", "v", "v"]]},
        "representation": {"dim": 3,
                           "proj": {"v": [[[1, 0]]]},
                           "edge_op": {"l": [[[0, 0]]]}},
    })
    with pytest.raises(ParseError, match="representation"):
        parse_problem(text)


# ---------------------------------------------------------------- canonical form

def test_canonical_text_sorted_and_17g():
    text = canonical_text({"b": 0.1, "a": 2})
    assert text.index('"a"') < text.index('"b"')
    assert "0.10000000000000001" in text


def test_canonical_matrix_layout():
    text = canonical_text([[[1.0, 0.0], [0.5, 0.0]], [[0.0, 0.0], [1.0, 0.0]]])
    # one line per matrix row, entries inline
    assert text.splitlines()[1].strip() == "[[1, 0], [0.5, 0]],"
