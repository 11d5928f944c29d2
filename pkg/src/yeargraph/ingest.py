"""Parse per-year CSV tables, classify columns, and build the property graph.

Each CSV is one fiscal year of applicant records: first line is the header,
comma delimiter, RFC-4180 quoting. Headers are canonicalized through the
config's rename map before classification, so columns whose names drifted
across years land on the same rule.

Graph construction walks every row: one applicant node per row (carrying the
property-class cells and the fiscal year), one attribute node per distinct
(type, trimmed value) pair shared across all rows and years, and one edge per
non-empty attribute cell.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field

from yeargraph.config import (
    KIND_ATTRIBUTE,
    KIND_MULTI,
    KIND_PROPERTY,
    IngestConfig,
)
from yeargraph.errors import ConfigError, RowError, YeargraphError
from yeargraph.graph import APPLICANT, ATTRIBUTE, EdgeRecord, NodeRecord, PropertyGraph

CLASS_ATTRIBUTE = "attribute"
CLASS_PROPERTY = "property"
CLASS_MULTI = "multi_attribute"
CLASS_IGNORED = "ignored"


@dataclass(frozen=True)
class ColumnClass:
    kind: str  # one of the CLASS_* constants
    name: str  # attribute type or property key; empty for ignored


@dataclass
class TableSnapshot:
    year: int
    header: list[str]
    rows: list[list[str]]
    source: str


@dataclass
class IngestSummary:
    files: int = 0
    rows: int = 0
    applicant_nodes: int = 0
    attribute_nodes: int = 0
    edges: int = 0
    warnings: list[str] = field(default_factory=list)


def parse_table(path: str, year: int, config: IngestConfig) -> TableSnapshot:
    """Read one CSV file into a snapshot, renaming headers and trimming cells."""
    try:
        fh = open(path, "r", encoding="utf-8-sig", newline="")
    except OSError as exc:
        raise YeargraphError(f"cannot read {path!r}: {exc}") from None
    with fh:
        reader = csv.reader(fh)
        try:
            raw_header = next(reader)
        except StopIteration:
            raise YeargraphError(f"{path!r}: empty file, missing header row") from None
        header = [config.renamed(year, h.strip()) for h in raw_header]
        rows: list[list[str]] = []
        for i, raw in enumerate(reader):
            if not raw:  # blank separator line
                continue
            if len(raw) != len(header):
                raise RowError(
                    path, i, f"expected {len(header)} cells, got {len(raw)}"
                )
            if config.trim_whitespace:
                rows.append([c.strip() for c in raw])
            else:
                rows.append(list(raw))
    return TableSnapshot(year=year, header=header, rows=rows, source=path)


def classify_columns(snapshot: TableSnapshot, config: IngestConfig) -> dict[str, ColumnClass]:
    """Map every header column to exactly one class; unmatched columns are ignored."""
    classification: dict[str, ColumnClass] = {}
    for column in snapshot.header:
        matched: list[tuple[str, ColumnClass]] = []
        for rule in config.column_rules:
            if column in rule.match:
                kind = {
                    KIND_ATTRIBUTE: CLASS_ATTRIBUTE,
                    KIND_PROPERTY: CLASS_PROPERTY,
                    KIND_MULTI: CLASS_MULTI,
                }[rule.kind]
                matched.append((rule.canonical_name, ColumnClass(kind, rule.canonical_name)))
        if len(matched) > 1:
            names = " and ".join(repr(name) for name, _ in matched)
            raise ConfigError(f"column {column!r} matched by two rules: {names}")
        classification[column] = matched[0][1] if matched else ColumnClass(CLASS_IGNORED, "")
    return classification


def applicant_id(year: int, key: str) -> str:
    return f"a:{year}:{key}"


def attribute_id(attr_type: str, value: str) -> str:
    return f"v:{attr_type}:{value}"


def normalize_value(cell: str) -> str:
    """Attribute-node keying: trim outer whitespace, preserve case, no merging."""
    return cell.strip()


def build_graph(
    snapshots: list[TableSnapshot], config: IngestConfig
) -> tuple[PropertyGraph, IngestSummary]:
    """Insert one applicant per row and one edge per non-empty attribute cell.

    Snapshots are processed in (year, given order) so warnings read in a
    stable order; node identifiers are content-derived, so the resulting
    graph does not depend on input order at all.
    """
    graph = PropertyGraph()
    summary = IngestSummary(files=len(snapshots))
    seen_ids: set[tuple[int, str]] = set()

    for snapshot in sorted(snapshots, key=lambda s: s.year):
        classification = classify_columns(snapshot, config)
        classes = [classification[col] for col in snapshot.header]
        id_index: int | None = None
        if config.id_column is not None:
            try:
                id_index = snapshot.header.index(config.id_column)
            except ValueError:
                summary.warnings.append(
                    f"{snapshot.source}: id column {config.id_column!r} not present; "
                    "falling back to row-index ids"
                )
        for row_index, row in enumerate(snapshot.rows):
            summary.rows += 1
            key = str(row_index)
            if id_index is not None:
                cell = row[id_index].strip()
                if cell:
                    key = cell
                else:
                    summary.warnings.append(
                        f"{snapshot.source}: data row {row_index}: empty id cell; "
                        "falling back to row-index id"
                    )
            if (snapshot.year, key) in seen_ids:
                raise RowError(
                    snapshot.source,
                    row_index,
                    f"duplicate applicant id {key!r} for year {snapshot.year}",
                )
            seen_ids.add((snapshot.year, key))

            props: dict[str, str] = {}
            for cls, cell in zip(classes, row):
                if cls.kind == CLASS_PROPERTY:
                    value = cell.strip()
                    if value:
                        props[cls.name] = value
            aid = applicant_id(snapshot.year, key)
            graph.insert_node(
                NodeRecord(
                    id=aid, kind=APPLICANT, type="", label=key, year=snapshot.year, props=props
                )
            )

            for cls, cell in zip(classes, row):
                if cls.kind not in (CLASS_ATTRIBUTE, CLASS_MULTI):
                    continue
                value = normalize_value(cell)
                if not value:
                    continue
                vid = attribute_id(cls.name, value)
                graph.insert_node(
                    NodeRecord(id=vid, kind=ATTRIBUTE, type=cls.name, label=value)
                )
                graph.insert_edge(EdgeRecord(aid, vid))

    summary.applicant_nodes = sum(1 for n in graph.nodes() if n.kind == APPLICANT)
    summary.attribute_nodes = sum(1 for n in graph.nodes() if n.kind == ATTRIBUTE)
    summary.edges = graph.edge_count
    return graph, summary


def ingest_files(
    paths: list[str], config: IngestConfig
) -> tuple[PropertyGraph, IngestSummary]:
    """Convenience wrapper: resolve years, parse every file, build the graph."""
    snapshots = [parse_table(p, config.year_for(p), config) for p in paths]
    return build_graph(snapshots, config)
