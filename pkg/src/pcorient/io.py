"""Instance documents, orientation files, and DOT export.

An instance document is a JSON object with six fields: ``version`` (always
1), ``vertices`` (count), ``edges`` (list of endpoint pairs in edge-id
order), ``parity`` (map vertex -> 0|1), ``conflicts`` (list of objects
with ``vertex``, ``edges``, and ``kind`` "exact"|"subset"), and ``forced``
(map edge -> head vertex). JSON object keys are strings, so the parity and
forced maps use stringified ids. Serialization is canonical: sorted keys,
two-space indent, member edge lists ascending, one trailing newline.
Parsing back a serialized document and serializing again is byte-identical.

An orientation file is one head vertex per line in edge-id order; blank
lines and ``#`` comments are skipped.
"""

from __future__ import annotations

import json
from collections import defaultdict

from .core import (
    Conflict,
    ConflictKind,
    Instance,
    Multigraph,
    Orientation,
    require_valid,
)
from .errors import InvalidDocumentError, InvalidInstanceError

__all__ = [
    "FORMAT_VERSION",
    "export_dot",
    "parse_instance",
    "parse_orientation",
    "serialize_instance",
    "serialize_orientation",
]

FORMAT_VERSION = 1

_FIELDS = {"version", "vertices", "edges", "parity", "conflicts", "forced"}


def _int_field(doc: dict, name: str) -> int:
    value = doc.get(name)
    if not isinstance(value, int) or isinstance(value, bool):
        raise InvalidDocumentError(f"field {name!r} must be an integer, got {value!r}")
    return value


def _id_map(doc: dict, name: str) -> dict[int, int]:
    value = doc.get(name, {})
    if not isinstance(value, dict):
        raise InvalidDocumentError(f"field {name!r} must be an object")
    out: dict[int, int] = {}
    for key, item in value.items():
        try:
            k = int(key)
        except ValueError:
            raise InvalidDocumentError(f"field {name!r}: key {key!r} is not an integer")
        if not isinstance(item, int) or isinstance(item, bool):
            raise InvalidDocumentError(f"field {name!r}: value for {key!r} must be an integer")
        out[k] = item
    return out


def parse_instance(text: str) -> Instance:
    """Read an instance document; the result is structurally validated.

    Syntax and shape problems raise InvalidDocumentError naming the line
    or field; id-level problems surface as InvalidInstanceError from
    ``validate_instance``.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidDocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}")
    if not isinstance(doc, dict):
        raise InvalidDocumentError("top level must be an object")
    unknown = set(doc) - _FIELDS
    if unknown:
        raise InvalidDocumentError(f"unknown fields: {', '.join(sorted(unknown))}")
    version = doc.get("version")
    if version != FORMAT_VERSION:
        raise InvalidDocumentError(f"unsupported version {version!r}, expected {FORMAT_VERSION}")
    vertices = _int_field(doc, "vertices")
    raw_edges = doc.get("edges")
    if not isinstance(raw_edges, list):
        raise InvalidDocumentError("field 'edges' must be a list")
    edges: list[tuple[int, int]] = []
    for i, pair in enumerate(raw_edges):
        if (
            not isinstance(pair, list)
            or len(pair) != 2
            or not all(isinstance(x, int) and not isinstance(x, bool) for x in pair)
        ):
            raise InvalidDocumentError(f"edges[{i}] must be a pair of vertex ids")
        edges.append((pair[0], pair[1]))
    conflicts: list[Conflict] = []
    raw_conflicts = doc.get("conflicts", [])
    if not isinstance(raw_conflicts, list):
        raise InvalidDocumentError("field 'conflicts' must be a list")
    for i, entry in enumerate(raw_conflicts):
        if not isinstance(entry, dict):
            raise InvalidDocumentError(f"conflicts[{i}] must be an object")
        extra = set(entry) - {"vertex", "edges", "kind"}
        if extra:
            raise InvalidDocumentError(f"conflicts[{i}] has unknown fields: {', '.join(sorted(extra))}")
        vertex = entry.get("vertex")
        if not isinstance(vertex, int) or isinstance(vertex, bool):
            raise InvalidDocumentError(f"conflicts[{i}].vertex must be an integer")
        members = entry.get("edges")
        if not isinstance(members, list) or not all(
            isinstance(e, int) and not isinstance(e, bool) for e in members
        ):
            raise InvalidDocumentError(f"conflicts[{i}].edges must be a list of edge ids")
        kind_name = entry.get("kind")
        try:
            kind = ConflictKind(kind_name)
        except ValueError:
            raise InvalidDocumentError(
                f"conflicts[{i}].kind must be 'exact' or 'subset', got {kind_name!r}"
            )
        conflicts.append(Conflict(vertex, frozenset(members), kind))
    inst = Instance(
        Multigraph(vertices, tuple(edges)),
        _id_map(doc, "parity"),
        tuple(conflicts),
        _id_map(doc, "forced"),
    )
    require_valid(inst)
    return inst


def serialize_instance(inst: Instance) -> str:
    doc = {
        "version": FORMAT_VERSION,
        "vertices": inst.graph.vertex_count,
        "edges": [[u, v] for u, v in inst.graph.edges],
        "parity": {str(v): p for v, p in sorted(inst.parity.items())},
        "conflicts": [
            {"vertex": c.vertex, "edges": sorted(c.edges), "kind": c.kind.value}
            for c in inst.conflicts
        ],
        "forced": {str(e): h for e, h in sorted(inst.forced.items())},
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def parse_orientation(text: str) -> Orientation:
    heads: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            heads.append(int(line))
        except ValueError:
            raise InvalidDocumentError(f"line {lineno}: expected a vertex id, got {line!r}")
    return Orientation(tuple(heads))


def serialize_orientation(o: Orientation) -> str:
    return "".join(f"{h}\n" for h in o.heads)


def export_dot(inst: Instance, o: Orientation | None = None) -> str:
    """Render the instance as DOT, directed when an orientation is given.

    Node labels carry parity constraints, edge labels the edge id and its
    conflict memberships (index, kind, and vertex), so both members of a
    conflict pair show the same tag. Output is deterministic.
    """
    g = inst.graph
    if o is not None:
        if len(o.heads) != g.edge_count:
            raise InvalidInstanceError(
                f"orientation covers {len(o.heads)} edges, instance has {g.edge_count}"
            )
        for e, h in enumerate(o.heads):
            if h not in g.endpoints(e):
                raise InvalidInstanceError(f"head {h} is not an endpoint of edge {e}")
    tags: dict[int, list[str]] = defaultdict(list)
    for ci, c in enumerate(inst.conflicts):
        for e in sorted(c.edges):
            tags[e].append(f"c{ci}:{c.kind.value}@{c.vertex}")
    lines = ["digraph g {" if o is not None else "graph g {"]
    for v in range(g.vertex_count):
        p = inst.parity.get(v)
        if p is None:
            lines.append(f"  {v};")
        else:
            lines.append(f'  {v} [label="{v} p={p}"];')
    link = "->" if o is not None else "--"
    for e, (u, v) in enumerate(g.edges):
        label = " ".join([f"e{e}", *tags[e]])
        if o is not None:
            head = o.heads[e]
            tail = v if head == u else u
            lines.append(f'  {tail} {link} {head} [label="{label}"];')
        else:
            lines.append(f'  {u} {link} {v} [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
