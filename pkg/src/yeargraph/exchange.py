"""Deterministic two-file TSV serialization of the property graph.

``<name>.nodes.tsv`` holds one node per line with header
``id<TAB>kind<TAB>type<TAB>label<TAB>year<TAB>props``; ``<name>.edges.tsv``
holds ``applicant_id<TAB>attribute_id`` pairs. Files are UTF-8 with
LF-terminated lines, nodes sorted by id (bytewise ascending), edges by
(applicant_id, attribute_id), so exporting the same graph twice yields
byte-identical files.

TAB, LF, ``;``, ``=`` and ``%`` are percent-encoded (%09 %0A %3B %3D %25)
inside every free-text field: ids, types, labels, and props keys/values.
Props serialize as ``key=value`` pairs joined by ``;`` with keys sorted
bytewise.
"""

from __future__ import annotations

import os

from yeargraph.errors import FormatError
from yeargraph.graph import APPLICANT, ATTRIBUTE, EdgeRecord, NodeRecord, PropertyGraph

NODES_HEADER = "id\tkind\ttype\tlabel\tyear\tprops"
EDGES_HEADER = "applicant_id\tattribute_id"

# '%' must be encoded first and decoded last
_ENCODE_ORDER = [("%", "%25"), ("\t", "%09"), ("\n", "%0A"), (";", "%3B"), ("=", "%3D")]


def encode_field(value: str) -> str:
    for raw, enc in _ENCODE_ORDER:
        value = value.replace(raw, enc)
    return value


def decode_field(value: str) -> str:
    for raw, enc in reversed(_ENCODE_ORDER):
        value = value.replace(enc, raw)
    return value


def _encode_props(props: dict[str, str]) -> str:
    parts = []
    for key in sorted(props):
        parts.append(f"{encode_field(key)}={encode_field(props[key])}")
    return ";".join(parts)


def _decode_props(text: str, path: str, line: int) -> dict[str, str]:
    if not text:
        return {}
    props: dict[str, str] = {}
    for part in text.split(";"):
        pieces = part.split("=")
        if len(pieces) != 2:
            raise FormatError(path, line, f"malformed props entry {part!r}")
        key, value = decode_field(pieces[0]), decode_field(pieces[1])
        if key in props:
            raise FormatError(path, line, f"duplicate props key {key!r}")
        props[key] = value
    return props


def node_paths(prefix: str) -> tuple[str, str]:
    return f"{prefix}.nodes.tsv", f"{prefix}.edges.tsv"


def export_pg(graph: PropertyGraph, prefix: str) -> tuple[str, str]:
    """Write ``<prefix>.nodes.tsv`` and ``<prefix>.edges.tsv``; returns the paths."""
    nodes_path, edges_path = node_paths(prefix)
    parent = os.path.dirname(nodes_path)
    if parent:
        os.makedirs(parent, exist_ok=True)

    lines = [NODES_HEADER]
    for n in sorted(graph.nodes(), key=lambda n: n.id):
        year = "" if n.year is None else str(n.year)
        lines.append(
            "\t".join(
                (
                    encode_field(n.id),
                    n.kind,
                    encode_field(n.type),
                    encode_field(n.label),
                    year,
                    _encode_props(n.props),
                )
            )
        )
    with open(nodes_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")

    lines = [EDGES_HEADER]
    for e in graph.edges():
        lines.append(f"{encode_field(e.applicant_id)}\t{encode_field(e.attribute_id)}")
    with open(edges_path, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(lines) + "\n")
    return nodes_path, edges_path


def import_pg(prefix: str) -> PropertyGraph:
    """Read both exchange files back into a graph, validating as it goes."""
    nodes_path, edges_path = node_paths(prefix)
    graph = PropertyGraph()

    for lineno, raw in _read_lines(nodes_path, NODES_HEADER):
        fields = raw.split("\t")
        if len(fields) != 6:
            raise FormatError(nodes_path, lineno, f"expected 6 fields, got {len(fields)}")
        node_id, kind, type_, label, year_text, props_text = fields
        if kind not in (APPLICANT, ATTRIBUTE):
            raise FormatError(nodes_path, lineno, f"unknown kind {kind!r}")
        year: int | None = None
        if year_text:
            try:
                year = int(year_text)
            except ValueError:
                raise FormatError(nodes_path, lineno, f"bad year {year_text!r}") from None
        if kind == APPLICANT and year is None:
            raise FormatError(nodes_path, lineno, "applicant node missing year")
        if kind == ATTRIBUTE and year is not None:
            raise FormatError(nodes_path, lineno, "attribute node must not carry a year")
        node = NodeRecord(
            id=decode_field(node_id),
            kind=kind,
            type=decode_field(type_),
            label=decode_field(label),
            year=year,
            props=_decode_props(props_text, nodes_path, lineno),
        )
        if graph.has_node(node.id):
            raise FormatError(nodes_path, lineno, f"duplicate node id {node.id!r}")
        graph.insert_node(node)

    seen: set[tuple[str, str]] = set()
    for lineno, raw in _read_lines(edges_path, EDGES_HEADER):
        fields = raw.split("\t")
        if len(fields) != 2:
            raise FormatError(edges_path, lineno, f"expected 2 fields, got {len(fields)}")
        aid, vid = decode_field(fields[0]), decode_field(fields[1])
        if (aid, vid) in seen:
            raise FormatError(edges_path, lineno, f"duplicate edge ({aid!r}, {vid!r})")
        seen.add((aid, vid))
        if not graph.has_node(aid) or not graph.has_node(vid):
            raise FormatError(edges_path, lineno, "edge references missing node")
        if graph.node(aid).kind != APPLICANT or graph.node(vid).kind != ATTRIBUTE:
            raise FormatError(edges_path, lineno, "edge endpoints have wrong kinds")
        graph.insert_edge(EdgeRecord(aid, vid))
    return graph


def _read_lines(path: str, expected_header: str):
    """Yield (1-based line number, line) pairs after checking the header."""
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            content = fh.read()
    except OSError as exc:
        raise FormatError(path, None, f"cannot read file: {exc}") from None
    if not content.endswith("\n"):
        raise FormatError(path, None, "file must end with a newline")
    lines = content[:-1].split("\n")
    if not lines or lines[0] != expected_header:
        raise FormatError(path, 1, f"bad header, expected {expected_header!r}")
    for i, line in enumerate(lines[1:], start=2):
        yield i, line
