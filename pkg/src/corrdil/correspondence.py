"""The graph correspondence (X, C, phi_X): finitely supported elements over
edges (X) and vertices (C = functions on V), the C-valued inner product, the
two module actions, and symbolic finite-rank operators theta_{x,y}.

Finitely supported maps are the whole module for a finite graph, so no
completion is ever taken; coefficients are exact dict entries.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exceptions import StructureError
from .graph import DirectedGraph, finite_receivers

__all__ = [
    "CoeffElement",
    "CorrElement",
    "FiniteRankOp",
    "delta_vertex",
    "delta_edge",
    "inner_product",
    "right_action",
    "left_action",
    "theta",
    "katsura_ideal_support",
]


def _clean(coeffs: dict) -> dict:
    return {k: complex(v) for k, v in coeffs.items() if complex(v) != 0}


@dataclass(frozen=True)
class CoeffElement:
    """Finitely supported map vertex id -> complex scalar (an element of C)."""

    graph: DirectedGraph
    coeffs: dict

    def __post_init__(self):
        coeffs = _clean(self.coeffs)
        for v in coeffs:
            self.graph.require_vertex(v)
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, v: str) -> complex:
        return self.coeffs.get(v, 0j)

    def __add__(self, other: "CoeffElement") -> "CoeffElement":
        _same_graph(self, other)
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, 0j) + c
        return CoeffElement(self.graph, out)

    def __sub__(self, other: "CoeffElement") -> "CoeffElement":
        return self + (-1) * other

    def __mul__(self, other):
        # scalar multiple, or the pointwise product of C = functions on V
        if isinstance(other, CoeffElement):
            _same_graph(self, other)
            return CoeffElement(
                self.graph,
                {v: c * other.coeffs[v] for v, c in self.coeffs.items() if v in other.coeffs},
            )
        return CoeffElement(self.graph, {v: c * other for v, c in self.coeffs.items()})

    __rmul__ = __mul__

    def star(self) -> "CoeffElement":
        return CoeffElement(self.graph, {v: c.conjugate() for v, c in self.coeffs.items()})


@dataclass(frozen=True)
class CorrElement:
    """Finitely supported map edge id -> complex scalar (an element of X)."""

    graph: DirectedGraph
    coeffs: dict

    def __post_init__(self):
        coeffs = _clean(self.coeffs)
        for e in coeffs:
            self.graph.edge(e)
        object.__setattr__(self, "coeffs", coeffs)

    def __call__(self, e: str) -> complex:
        return self.coeffs.get(e, 0j)

    def __add__(self, other: "CorrElement") -> "CorrElement":
        _same_graph(self, other)
        out = dict(self.coeffs)
        for e, c in other.coeffs.items():
            out[e] = out.get(e, 0j) + c
        return CorrElement(self.graph, out)

    def __sub__(self, other: "CorrElement") -> "CorrElement":
        return self + (-1) * other

    def __mul__(self, scalar) -> "CorrElement":
        return CorrElement(self.graph, {e: c * scalar for e, c in self.coeffs.items()})

    __rmul__ = __mul__


@dataclass(frozen=True)
class FiniteRankOp:
    """Symbolic sum of theta_{x,y} terms; only evaluated through psi_t."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((x, y) for x, y in self.terms)
        graphs = {id(x.graph) for x, y in terms} | {id(y.graph) for x, y in terms}
        if len(graphs) > 1:
            raise StructureError("finite-rank terms span different graphs")
        object.__setattr__(self, "terms", terms)


def delta_vertex(g: DirectedGraph, v: str, scale: complex = 1.0) -> CoeffElement:
    return CoeffElement(g, {v: scale})


def delta_edge(g: DirectedGraph, e: str, scale: complex = 1.0) -> CorrElement:
    return CorrElement(g, {e: scale})


def theta(x: CorrElement, y: CorrElement) -> FiniteRankOp:
    """The rank-one operator theta_{x,y}(z) = x <y, z>."""
    return FiniteRankOp(((x, y),))


def _same_graph(a, b) -> None:
    if a.graph != b.graph:
        raise StructureError("elements live over different graphs")


def inner_product(x: CorrElement, y: CorrElement) -> CoeffElement:
    """<x, y>(v) = sum over edges e with s(e) = v of conj(x(e)) y(e)."""
    _same_graph(x, y)
    out: dict[str, complex] = {}
    for e, c in x.coeffs.items():
        if e in y.coeffs:
            v = x.graph.edge(e).src
            out[v] = out.get(v, 0j) + c.conjugate() * y.coeffs[e]
    return CoeffElement(x.graph, out)


def right_action(x: CorrElement, c: CoeffElement) -> CorrElement:
    """(x . c)(e) = x(e) c(s(e))."""
    _same_graph(x, c)
    return CorrElement(
        x.graph,
        {e: xc * c(x.graph.edge(e).src) for e, xc in x.coeffs.items()},
    )


def left_action(c: CoeffElement, x: CorrElement) -> CorrElement:
    """(phi_X(c) x)(e) = c(r(e)) x(e)."""
    _same_graph(c, x)
    return CorrElement(
        x.graph,
        {e: c(x.graph.edge(e).dst) * xc for e, xc in x.coeffs.items()},
    )


def katsura_ideal_support(g: DirectedGraph) -> tuple[str, ...]:
    """Vertices whose delta_v span the covariance ideal: the finite receivers.

    delta_v lies in the kernel of phi_X exactly when r^{-1}(v) is empty, so
    source-only vertices are excluded.
    """
    return finite_receivers(g)
