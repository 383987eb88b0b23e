"""Finite groups (explicit multiplication tables) and generalized gauge
actions on graph correspondences: a vertex permutation per group element plus
a unitary mixing matrix per parallel-edge bucket.

Group elements are referred to by their table index throughout the library.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .correspondence import CoeffElement, CorrElement
from .exceptions import GraphLookupError, StructureError
from .graph import DirectedGraph, edge_bucket
from .linalg import DEFAULT_TOL, Tolerance, as_cmatrix, op_norm

__all__ = [
    "CheckResult",
    "FiniteGroup",
    "GaugeAction",
    "verify_group",
    "verify_action",
    "act_on_element",
    "act_on_coeff",
    "trivial_action",
]


@dataclass(frozen=True)
class CheckResult:
    """Boolean verdict carrying a diagnostic for the failing check."""

    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class FiniteGroup:
    """A finite group as an order x order multiplication table of indices."""

    order: int
    table: tuple
    identity: int
    inverse: tuple

    def __post_init__(self):
        table = tuple(tuple(int(x) for x in row) for row in self.table)
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "inverse", tuple(int(x) for x in self.inverse))

    @staticmethod
    def from_table(table) -> "FiniteGroup":
        """Derive identity and inverses from the table alone."""
        rows = tuple(tuple(int(x) for x in row) for row in table)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise StructureError("multiplication table is not square")
        if any(not (0 <= x < n) for r in rows for x in r):
            raise StructureError("table entry out of range")
        identity = None
        for e in range(n):
            if all(rows[e][g] == g and rows[g][e] == g for g in range(n)):
                identity = e
                break
        if identity is None:
            raise StructureError("table has no identity element")
        inverse = []
        for g in range(n):
            inv = [h for h in range(n) if rows[g][h] == identity and rows[h][g] == identity]
            if not inv:
                raise StructureError(f"element {g} has no inverse")
            inverse.append(inv[0])
        return FiniteGroup(n, rows, identity, tuple(inverse))

    @staticmethod
    def trivial() -> "FiniteGroup":
        return FiniteGroup(1, ((0,),), 0, (0,))

    @staticmethod
    def cyclic(n: int) -> "FiniteGroup":
        table = tuple(tuple((i + j) % n for j in range(n)) for i in range(n))
        return FiniteGroup(n, table, 0, tuple((-i) % n for i in range(n)))

    def mul(self, g: int, h: int) -> int:
        self.check_element(g)
        self.check_element(h)
        return self.table[g][h]

    def inv(self, g: int) -> int:
        self.check_element(g)
        return self.inverse[g]

    def check_element(self, g: int) -> None:
        if not (0 <= g < self.order):
            raise GraphLookupError(f"unknown group element index {g}")


def verify_group(g: FiniteGroup) -> CheckResult:
    """Check the table against all group axioms and the inverse map."""
    n = g.order
    if n < 1:
        return CheckResult(False, "group order must be at least 1")
    T = np.array(g.table, dtype=int)
    if T.shape != (n, n):
        return CheckResult(False, f"table shape {T.shape} does not match order {n}")
    if T.min() < 0 or T.max() >= n:
        return CheckResult(False, "table entry out of range")
    if not (0 <= g.identity < n):
        return CheckResult(False, "identity index out of range")
    e = g.identity
    if not (np.all(T[e, :] == np.arange(n)) and np.all(T[:, e] == np.arange(n))):
        return CheckResult(False, "identity law fails")
    inv = np.array(g.inverse, dtype=int)
    if inv.shape != (n,) or inv.min() < 0 or inv.max() >= n:
        return CheckResult(False, "inverse map malformed")
    if not (np.all(T[np.arange(n), inv] == e) and np.all(T[inv, np.arange(n)] == e)):
        return CheckResult(False, "inverse law fails")
    # associativity: T[T[a,b],c] == T[a,T[b,c]] for all triples
    left = T[T, :]            # left[a,b,c] = T[T[a,b], c]
    right = T[:, T]           # right[a,b,c] = T[a, T[b,c]]
    if not np.array_equal(left, right):
        return CheckResult(False, "associativity fails")
    return CheckResult(True)


@dataclass(frozen=True)
class GaugeAction:
    """Vertex permutations plus per-bucket unitaries, one set per element.

    bucket_unitary maps (element index, range vertex v, source vertex w) to
    the matrix carrying coefficients on E(v, w) (input edge order) to
    coefficients on E(alpha_g v, alpha_g w); buckets related by a group
    element have equal size, so the matrices are square.
    """

    group: FiniteGroup
    graph: DirectedGraph
    vertex_perm: tuple        # per element: dict vertex -> vertex
    bucket_unitary: dict = field(compare=False)  # (g, v, w) -> ndarray

    def __post_init__(self):
        perms = tuple(dict(p) for p in self.vertex_perm)
        if len(perms) != self.group.order:
            raise StructureError("one vertex permutation per group element required")
        units = {}
        for (gi, v, w), U in self.bucket_unitary.items():
            units[(int(gi), v, w)] = as_cmatrix(U)
        # every nonempty bucket needs a matrix for every group element,
        # defaulting to the identity for the group identity
        for gi in range(self.group.order):
            for (v, w), bucket in self.graph._bucket.items():
                if (gi, v, w) not in units:
                    if gi == self.group.identity:
                        units[(gi, v, w)] = np.eye(len(bucket), dtype=complex)
                    else:
                        raise StructureError(
                            f"missing bucket unitary for element {gi}, bucket ({v!r}, {w!r})"
                        )
        object.__setattr__(self, "vertex_perm", perms)
        object.__setattr__(self, "bucket_unitary", units)

    def perm_vertex(self, g: int, v: str) -> str:
        self.group.check_element(g)
        self.graph.require_vertex(v)
        return self.vertex_perm[g][v]

    def bucket_matrix(self, g: int, v: str, w: str) -> np.ndarray:
        self.group.check_element(g)
        return self.bucket_unitary[(g, v, w)]

    @staticmethod
    def from_edge_permutations(group: FiniteGroup, graph: DirectedGraph,
                               vertex_perms, edge_perms) -> "GaugeAction":
        """Build an action whose bucket unitaries permute edges (no mixing)."""
        units = {}
        for gi in range(group.order):
            vp = vertex_perms[gi]
            ep = edge_perms[gi]
            for (v, w), bucket in graph._bucket.items():
                target = edge_bucket(graph, vp[v], vp[w])
                U = np.zeros((len(target), len(bucket)), dtype=complex)
                for j, e in enumerate(bucket):
                    U[target.index(ep[e]), j] = 1.0
                units[(gi, v, w)] = U
        return GaugeAction(group, graph, tuple(vertex_perms), units)


def trivial_action(graph: DirectedGraph) -> GaugeAction:
    group = FiniteGroup.trivial()
    return GaugeAction(group, graph, ({v: v for v in graph.vertices},), {})


def verify_action(a: GaugeAction, tol: Tolerance = DEFAULT_TOL) -> CheckResult:
    """Check unitarity, the homomorphism identities, and the identity element."""
    group_ok = verify_group(a.group)
    if not group_ok:
        return CheckResult(False, f"group: {group_ok.reason}")
    g_ids = range(a.group.order)
    vset = set(a.graph.vertices)
    for gi in g_ids:
        perm = a.vertex_perm[gi]
        if set(perm.keys()) != vset or set(perm.values()) != vset:
            return CheckResult(False, f"element {gi}: vertex map is not a permutation")
    e = a.group.identity
    if any(a.vertex_perm[e][v] != v for v in a.graph.vertices):
        return CheckResult(False, "identity element moves a vertex")
    for (v, w), bucket in a.graph._bucket.items():
        n = len(bucket)
        for gi in g_ids:
            target = edge_bucket(a.graph, a.vertex_perm[gi][v], a.vertex_perm[gi][w])
            if len(target) != n:
                return CheckResult(
                    False, f"element {gi} maps bucket ({v!r}, {w!r}) to one of different size"
                )
            U = a.bucket_unitary[(gi, v, w)]
            if U.shape != (n, n):
                return CheckResult(False, f"bucket matrix ({gi}, {v!r}, {w!r}) has wrong shape")
            if op_norm(U.conj().T @ U - np.eye(n)) > tol.eps:
                return CheckResult(False, f"bucket matrix ({gi}, {v!r}, {w!r}) is not unitary")
        if op_norm(a.bucket_unitary[(e, v, w)] - np.eye(n)) > tol.eps:
            return CheckResult(False, f"identity bucket matrix on ({v!r}, {w!r}) is not I")
    for gi in g_ids:
        for hi in g_ids:
            gh = a.group.mul(gi, hi)
            for v in a.graph.vertices:
                if a.vertex_perm[gh][v] != a.vertex_perm[gi][a.vertex_perm[hi][v]]:
                    return CheckResult(
                        False, f"vertex permutations fail homomorphism at ({gi}, {hi})"
                    )
            for (v, w) in a.graph._bucket:
                vh, wh = a.vertex_perm[hi][v], a.vertex_perm[hi][w]
                lhs = a.bucket_unitary[(gh, v, w)]
                rhs = a.bucket_unitary[(gi, vh, wh)] @ a.bucket_unitary[(hi, v, w)]
                if op_norm(lhs - rhs) > tol.eps:
                    return CheckResult(
                        False,
                        f"bucket matrices fail homomorphism at ({gi}, {hi}), bucket ({v!r}, {w!r})",
                    )
    return CheckResult(True)


def act_on_element(a: GaugeAction, g: int, x: CorrElement) -> CorrElement:
    """alpha_g(x), computed bucket by bucket."""
    a.group.check_element(g)
    if x.graph != a.graph:
        raise StructureError("element lives over a different graph")
    out: dict[str, complex] = {}
    touched = {(x.graph.edge(e).dst, x.graph.edge(e).src) for e in x.coeffs}
    for (v, w) in touched:
        bucket = edge_bucket(a.graph, v, w)
        vec = np.array([x(e) for e in bucket], dtype=complex)
        target = edge_bucket(a.graph, a.vertex_perm[g][v], a.vertex_perm[g][w])
        new = a.bucket_unitary[(g, v, w)] @ vec
        for e, c in zip(target, new):
            if c != 0:
                out[e] = out.get(e, 0j) + c
    return CorrElement(a.graph, out)


def act_on_coeff(a: GaugeAction, g: int, c: CoeffElement) -> CoeffElement:
    """alpha_g(c), the pushforward along the vertex permutation."""
    a.group.check_element(g)
    if c.graph != a.graph:
        raise StructureError("element lives over a different graph")
    return CoeffElement(a.graph, {a.vertex_perm[g][v]: val for v, val in c.coeffs.items()})
