"""Byte-stable serialisations of a :class:`HierarchyGraph`: JSON, DOT and CSV."""

from __future__ import annotations

import json

import numpy as np

from .errors import BadParamError
from .graphs import HierarchyGraph, Kind

FORMATS = ("json", "dot", "csv")


def graph_to_dict(g: HierarchyGraph) -> dict:
    return {
        "kind": str(g.kind) if g.kind is not None else None,
        "family": g.family,
        "vertices": list(g.labels),
        "edges": [[i, j] for i, j in g.edges()],
    }


def to_json(g: HierarchyGraph) -> str:
    return json.dumps(graph_to_dict(g), separators=(",", ":")) + "\n"


def from_json(text: str) -> HierarchyGraph:
    data = json.loads(text)
    try:
        labels = data["vertices"]
        edges = data["edges"]
        kind = Kind(data["kind"]) if data.get("kind") else None
    except (KeyError, TypeError, ValueError) as exc:
        raise BadParamError(f"malformed graph JSON: {exc}") from None
    n = len(labels)
    adj = np.zeros((n, n), dtype=bool)
    for i, j in edges:
        if not (0 <= i < n and 0 <= j < n) or i == j:
            raise BadParamError(f"bad edge {[i, j]}")
        adj[i, j] = adj[j, i] = True
    return HierarchyGraph(kind, labels, adj, family=data.get("family", ""))


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(g: HierarchyGraph) -> str:
    name = f"{g.kind}:{g.family}" if g.kind is not None else g.family
    lines = [f"graph {_quote(name)} {{"]
    lines += [f"  {_quote(lab)};" for lab in g.labels]
    lines += [f"  {_quote(g.labels[i])} -- {_quote(g.labels[j])};" for i, j in g.edges()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_csv(g: HierarchyGraph) -> str:
    return "".join(f"{i},{j}\n" for i, j in g.edges())


def render(g: HierarchyGraph, fmt: str) -> str:
    if fmt == "json":
        return to_json(g)
    if fmt == "dot":
        return to_dot(g)
    if fmt == "csv":
        return to_csv(g)
    raise BadParamError(f"unknown format {fmt!r}")
