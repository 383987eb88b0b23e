"""Problem-file format: parsing and canonical serialization.

A problem file is UTF-8 JSON with up to four top-level blocks::

    {
      "graph": {
        "vertices": ["v", ...],
        "edges": [["eid", "src", "dst"], ...],
        "truncated": ["v", ...]                      # optional
      },
      "action": {                                    # optional
        "group": {"table": [[...], ...]},
        "vertex_perm": [{"v": "w", ...}, ...],       # one map per element
        "bucket_unitaries": [
          {"element": g, "range": "v", "source": "w", "matrix": M}, ...
        ]                                            # identity entries optional
      },
      "representation": {                            # optional
        "dim": d,
        "proj": {"v": M, ...},
        "edge_op": {"e": M, ...},
        "unitaries": [M, ...]                        # optional, element order
      },
      "tolerance": {"eps": ..., "eig_clip": ..., "max_dim": ...}   # optional
    }

where a matrix M is a nested array of [re, im] pairs, row-major.  Canonical
serialization sorts keys, prints floats with 17 significant digits, and is
byte-stable under parse/write round trips.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .exceptions import CorrdilError, ParseError
from .gauge import FiniteGroup, GaugeAction
from .graph import DirectedGraph
from .linalg import Tolerance
from .representation import GraphRep

__all__ = [
    "ProblemFile",
    "parse_problem",
    "load_problem",
    "problem_text",
    "save_problem",
    "matrix_to_json",
    "matrix_from_json",
    "canonical_text",
]


@dataclass(frozen=True)
class ProblemFile:
    graph: DirectedGraph
    action: GaugeAction | None
    representation: GraphRep | None
    tolerance: Tolerance


# ---------------------------------------------------------------- canonical emitter

def _fmt_scalar(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        return format(x, ".17g")
    if isinstance(x, str):
        return json.dumps(x, ensure_ascii=False)
    if x is None:
        return "null"
    raise TypeError(f"cannot serialize {type(x).__name__}")


def _depth(obj) -> int:
    if isinstance(obj, list):
        return 1 + max((_depth(x) for x in obj), default=0)
    if isinstance(obj, dict):
        return 3  # force dicts onto their own lines
    return 0


def _emit(obj, indent: int) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        lines = [
            f"{pad}  {json.dumps(str(k), ensure_ascii=False)}: {_emit(obj[k], indent + 1).lstrip()}"
            for k in sorted(obj, key=str)
        ]
        return "{\n" + ",\n".join(lines) + "\n" + pad + "}"
    if isinstance(obj, list):
        if _depth(obj) <= 2:
            return "[" + ", ".join(_emit(x, 0) for x in obj) + "]"
        lines = [f"{pad}  {_emit(x, indent + 1).lstrip()}" for x in obj]
        return "[\n" + ",\n".join(lines) + "\n" + pad + "]"
    return _fmt_scalar(obj)


def canonical_text(obj) -> str:
    """Render a JSON-like object in the canonical format (trailing newline)."""
    return _emit(obj, 0) + "\n"


# ---------------------------------------------------------------- json <-> values

def matrix_to_json(M) -> list:
    A = np.asarray(M, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in A]


def matrix_from_json(obj, path: str) -> np.ndarray:
    if not isinstance(obj, list) or not obj:
        raise ParseError(f"{path}: expected a nonempty array of rows")
    rows = []
    width = None
    for i, row in enumerate(obj):
        if not isinstance(row, list):
            raise ParseError(f"{path}[{i}]: expected an array")
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"{path}[{i}]: ragged rows")
        entries = []
        for j, z in enumerate(row):
            if not (isinstance(z, list) and len(z) == 2
                    and all(isinstance(p, (int, float)) and not isinstance(p, bool) for p in z)):
                raise ParseError(f"{path}[{i}][{j}]: expected an [re, im] pair")
            entries.append(complex(z[0], z[1]))
        rows.append(entries)
    return np.array(rows, dtype=complex)


def _need(obj: dict, key: str, kind, path: str):
    if key not in obj:
        raise ParseError(f"{path}: missing required field {key!r}")
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise ParseError(f"{path}.{key}: expected {kind.__name__}")
    return val


def _graph_from_json(obj, path: str) -> DirectedGraph:
    vertices = _need(obj, "vertices", list, path)
    raw_edges = _need(obj, "edges", list, path)
    edges = []
    for i, e in enumerate(raw_edges):
        if not (isinstance(e, list) and len(e) == 3 and all(isinstance(x, str) for x in e)):
            raise ParseError(f"{path}.edges[{i}]: expected [eid, src, dst] strings")
        edges.append(tuple(e))
    truncated = obj.get("truncated", [])
    if not isinstance(truncated, list):
        raise ParseError(f"{path}.truncated: expected an array")
    try:
        return DirectedGraph(tuple(vertices), tuple(edges), frozenset(truncated))
    except CorrdilError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _action_from_json(obj, graph: DirectedGraph, path: str) -> GaugeAction:
    group_obj = _need(obj, "group", dict, path)
    table = _need(group_obj, "table", list, f"{path}.group")
    try:
        group = FiniteGroup.from_table(table)
    except CorrdilError as exc:
        raise ParseError(f"{path}.group: {exc}") from exc
    perms = _need(obj, "vertex_perm", list, path)
    if len(perms) != group.order:
        raise ParseError(f"{path}.vertex_perm: expected {group.order} entries")
    for i, p in enumerate(perms):
        if not isinstance(p, dict):
            raise ParseError(f"{path}.vertex_perm[{i}]: expected an object")
    units = {}
    for i, entry in enumerate(obj.get("bucket_unitaries", [])):
        where = f"{path}.bucket_unitaries[{i}]"
        if not isinstance(entry, dict):
            raise ParseError(f"{where}: expected an object")
        g = _need(entry, "element", int, where)
        v = _need(entry, "range", str, where)
        w = _need(entry, "source", str, where)
        units[(g, v, w)] = matrix_from_json(_need(entry, "matrix", list, where), f"{where}.matrix")
    try:
        return GaugeAction(group, graph, tuple(perms), units)
    except CorrdilError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _rep_from_json(obj, graph: DirectedGraph, action, path: str) -> GraphRep:
    dim = _need(obj, "dim", int, path)
    proj_obj = _need(obj, "proj", dict, path)
    edge_obj = _need(obj, "edge_op", dict, path)
    proj = {v: matrix_from_json(M, f"{path}.proj[{v!r}]") for v, M in proj_obj.items()}
    edge_op = {e: matrix_from_json(M, f"{path}.edge_op[{e!r}]") for e, M in edge_obj.items()}
    unitaries = None
    if "unitaries" in obj:
        raw = obj["unitaries"]
        if not isinstance(raw, list):
            raise ParseError(f"{path}.unitaries: expected an array")
        unitaries = {
            g: matrix_from_json(M, f"{path}.unitaries[{g}]") for g, M in enumerate(raw)
        }
    try:
        return GraphRep(graph, dim, proj, edge_op, action=action, unitaries=unitaries)
    except CorrdilError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def _tolerance_from_json(obj, path: str) -> Tolerance:
    if not isinstance(obj, dict):
        raise ParseError(f"{path}: expected an object")
    known = {"eps", "eig_clip", "max_dim"}
    for key in obj:
        if key not in known:
            raise ParseError(f"{path}.{key}: unknown tolerance field")
    try:
        return Tolerance(
            eps=float(obj.get("eps", Tolerance.eps)),
            eig_clip=float(obj.get("eig_clip", Tolerance.eig_clip)),
            max_dim=int(obj.get("max_dim", Tolerance.max_dim)),
        )
    except ValueError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def parse_problem(text: str) -> ProblemFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}: not valid JSON ({exc.msg})") from exc
    if not isinstance(obj, dict):
        raise ParseError("top level: expected an object")
    graph = _graph_from_json(_need(obj, "graph", dict, "top level"), "graph")
    action = None
    if "action" in obj:
        action = _action_from_json(_need(obj, "action", dict, "top level"), graph, "action")
    rep = None
    if "representation" in obj:
        rep = _rep_from_json(
            _need(obj, "representation", dict, "top level"), graph, action, "representation"
        )
    tolerance = _tolerance_from_json(obj.get("tolerance", {}), "tolerance")
    return ProblemFile(graph, action, rep, tolerance)


def load_problem(path) -> ProblemFile:
    return parse_problem(Path(path).read_text(encoding="utf-8"))


# ---------------------------------------------------------------- writing

def _graph_to_json(g: DirectedGraph) -> dict:
    out = {
        "vertices": list(g.vertices),
        "edges": [[e.eid, e.src, e.dst] for e in g.edges],
    }
    if g.truncated:
        out["truncated"] = sorted(g.truncated)
    return out


def _action_to_json(a: GaugeAction) -> dict:
    buckets = []
    for (gi, v, w) in sorted(a.bucket_unitary):
        if gi == a.group.identity:
            continue
        buckets.append({
            "element": gi,
            "range": v,
            "source": w,
            "matrix": matrix_to_json(a.bucket_unitary[(gi, v, w)]),
        })
    return {
        "group": {"table": [list(row) for row in a.group.table]},
        "vertex_perm": [dict(sorted(p.items())) for p in a.vertex_perm],
        "bucket_unitaries": buckets,
    }


def _rep_to_json(rep: GraphRep) -> dict:
    out = {
        "dim": rep.dim,
        "proj": {v: matrix_to_json(P) for v, P in rep.proj.items()},
        "edge_op": {e: matrix_to_json(T) for e, T in rep.edge_op.items()},
    }
    if rep.unitaries is not None:
        out["unitaries"] = [
            matrix_to_json(rep.unitaries[g]) for g in range(rep.action.group.order)
        ]
    return out


def problem_text(pf: ProblemFile) -> str:
    obj = {"graph": _graph_to_json(pf.graph)}
    if pf.action is not None:
        obj["action"] = _action_to_json(pf.action)
    if pf.representation is not None:
        obj["representation"] = _rep_to_json(pf.representation)
    obj["tolerance"] = {
        "eps": pf.tolerance.eps,
        "eig_clip": pf.tolerance.eig_clip,
        "max_dim": pf.tolerance.max_dim,
    }
    return canonical_text(obj)


def save_problem(pf: ProblemFile, path) -> None:
    Path(path).write_text(problem_text(pf), encoding="utf-8")
