"""Tests for finite groups and generalized gauge actions."""

from __future__ import annotations

import numpy as np
import pytest

from corrdil import (
    DirectedGraph,
    FiniteGroup,
    GaugeAction,
    StructureError,
    act_on_coeff,
    act_on_element,
    delta_edge,
    delta_vertex,
    inner_product,
    trivial_action,
    verify_action,
    verify_group,
)
from helpers import (
    cuntz_graph,
    random_corr_element,
    rng_for,
    z2_loop_swap,
    z2_vertex_swap,
    z3_cycle_rotation,
    z3_loop_rotation,
)


# ---------------------------------------------------------------- groups

def test_verify_group_examples():
    assert verify_group(FiniteGroup.cyclic(2)).ok
    assert verify_group(FiniteGroup.trivial()).ok
    broken = FiniteGroup(order=3, table=((0, 1, 2), (1, 2, 0), (2, 1, 0)),
                         identity=0, inverse=(0, 2, 1))
    assert not verify_group(broken).ok


def test_from_table_derives_structure():
    g = FiniteGroup.from_table([[0, 1], [1, 0]])
    assert g.identity == 0
    assert g.inverse == (0, 1)
    with pytest.raises(StructureError):
        FiniteGroup.from_table([[1, 1], [1, 1]])     # no identity


def test_group_ops():
    z3 = FiniteGroup.cyclic(3)
    assert z3.mul(1, 2) == 0
    assert z3.inv(1) == 2
    from corrdil import GraphLookupError
    with pytest.raises(GraphLookupError):
        z3.mul(1, 5)


# ---------------------------------------------------------------- actions

def test_verify_action_examples():
    g = cuntz_graph(1)
    assert verify_action(trivial_action(g)).ok

    assert verify_action(z2_loop_swap()).ok
    assert verify_action(z2_loop_swap(mixer=True)).ok
    _, act = z2_vertex_swap()
    assert verify_action(act).ok
    _, act = z3_cycle_rotation()
    assert verify_action(act).ok
    assert verify_action(z3_loop_rotation()).ok


def test_verify_action_rejects_non_unitary_bucket():
    g = cuntz_graph(2)
    group = FiniteGroup.cyclic(2)
    bad = GaugeAction(group, g, ({"v": "v"}, {"v": "v"}),
                      {(1, "v", "v"): np.array([[0.0, 2.0], [2.0, 0.0]])})
    res = verify_action(bad)
    assert not res.ok
    assert "unitary" in res.reason


def test_verify_action_rejects_non_homomorphic_perm():
    g = DirectedGraph(("v", "w"), ())
    group = FiniteGroup.cyclic(3)
    # order-2 swap labelled as a Z_3 action: g*g should swap back but does not
    perms = ({"v": "v", "w": "w"}, {"v": "w", "w": "v"}, {"v": "v", "w": "w"})
    bad = GaugeAction(group, g, perms, {})
    assert not verify_action(bad).ok


def test_missing_bucket_matrix_rejected():
    g = cuntz_graph(2)
    group = FiniteGroup.cyclic(2)
    with pytest.raises(StructureError):
        GaugeAction(group, g, ({"v": "v"}, {"v": "v"}), {})


# ---------------------------------------------------------------- applying

def test_act_on_element_identity_and_flip():
    a = z2_loop_swap()
    g = a.graph
    x = delta_edge(g, "e0")
    assert act_on_element(a, 0, x)("e0") == pytest.approx(1.0)
    flipped = act_on_element(a, 1, x)
    assert flipped("e1") == pytest.approx(1.0)
    assert flipped("e0") == 0


def test_act_on_coeff_swap():
    graph, a = z2_vertex_swap()
    c = delta_vertex(graph, "v0")
    assert act_on_coeff(a, 1, c)("v1") == pytest.approx(1.0)
    assert act_on_coeff(a, 0, c)("v0") == pytest.approx(1.0)


def test_inner_product_equivariance():
    # <alpha_g x, alpha_g y> = alpha_g <x, y>
    rng = rng_for(920)
    setups = [z2_loop_swap(), z2_loop_swap(mixer=True),
              z2_vertex_swap()[1], z3_cycle_rotation()[1], z3_loop_rotation()]
    for a in setups:
        for gi in range(a.group.order):
            for _ in range(5):
                x = random_corr_element(rng, a.graph)
                y = random_corr_element(rng, a.graph)
                lhs = inner_product(act_on_element(a, gi, x), act_on_element(a, gi, y))
                rhs = act_on_coeff(a, gi, inner_product(x, y))
                assert all(abs(lhs(v) - rhs(v)) <= 1e-10 for v in a.graph.vertices)


def test_action_homomorphism_on_elements():
    rng = rng_for(921)
    for a in (z2_loop_swap(mixer=True), z3_loop_rotation(), z3_cycle_rotation()[1]):
        for g1 in range(a.group.order):
            for g2 in range(a.group.order):
                x = random_corr_element(rng, a.graph)
                lhs = act_on_element(a, g1, act_on_element(a, g2, x))
                rhs = act_on_element(a, a.group.mul(g1, g2), x)
                assert all(abs(lhs(e.eid) - rhs(e.eid)) <= 1e-10 for e in a.graph.edges)


def test_act_on_coeff_multiplicative():
    graph, a = z2_vertex_swap()
    c = delta_vertex(graph, "v0")
    lhs = act_on_coeff(a, 1, c * c)
    rhs = act_on_coeff(a, 1, c) * act_on_coeff(a, 1, c)
    assert all(abs(lhs(v) - rhs(v)) <= 1e-12 for v in graph.vertices)
