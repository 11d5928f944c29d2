"""In-memory multi-partite property graph and the subgraph queries the views need.

The graph holds two node kinds: applicants (one per table row, each carrying a
fiscal year) and attribute nodes (one per distinct (type, value) pair, shared
across years). Edges only ever connect an applicant to an attribute node.
After ingestion the graph is treated as immutable; every query is read-only.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from yeargraph.errors import NotFoundError, ValidationError

APPLICANT = "applicant"
ATTRIBUTE = "attribute"


@dataclass(frozen=True)
class NodeRecord:
    id: str
    kind: str  # APPLICANT or ATTRIBUTE
    type: str  # attribute type; empty for applicants
    label: str
    year: int | None = None  # mandatory iff kind == APPLICANT
    props: dict[str, str] = field(default_factory=dict)

    def validate(self) -> None:
        if self.kind not in (APPLICANT, ATTRIBUTE):
            raise ValidationError(f"node {self.id!r}: unknown kind {self.kind!r}")
        if self.kind == APPLICANT:
            if self.year is None:
                raise ValidationError(f"applicant node {self.id!r} missing year")
            if self.type:
                raise ValidationError(f"applicant node {self.id!r} must not carry a type")
        else:
            if self.year is not None:
                raise ValidationError(f"attribute node {self.id!r} must not carry a year")
            if not self.type:
                raise ValidationError(f"attribute node {self.id!r} missing type")


@dataclass(frozen=True)
class EdgeRecord:
    applicant_id: str
    attribute_id: str


@dataclass
class SubgraphView:
    """Materialized bipartite view G(year, x, y).

    ``primary_nodes`` is occurrence-sorted (descending, ties by label) and
    already sliced by limit/offset. ``limit``/``offset`` record the slice the
    view was built with so transitions can check both views agree.
    """

    year: int
    primary_type: str
    secondary_type: str
    primary_nodes: list[tuple[NodeRecord, int]]
    secondary_nodes: list[NodeRecord]
    applicant_nodes: list[NodeRecord]
    edges: list[EdgeRecord]
    limit: int | None = None
    offset: int = 0

    @property
    def node_count(self) -> int:
        return len(self.primary_nodes) + len(self.secondary_nodes) + len(self.applicant_nodes)

    def node_ids(self) -> set[str]:
        ids = {n.id for n, _ in self.primary_nodes}
        ids.update(n.id for n in self.secondary_nodes)
        ids.update(n.id for n in self.applicant_nodes)
        return ids

    def attribute_ids(self) -> set[str]:
        ids = {n.id for n, _ in self.primary_nodes}
        ids.update(n.id for n in self.secondary_nodes)
        return ids


class PropertyGraph:
    """The single multi-partite graph: applicants, attribute nodes, edges."""

    def __init__(self) -> None:
        self._nodes: dict[str, NodeRecord] = {}
        self._edges: set[tuple[str, str]] = set()
        # adjacency: applicant id -> insertion-ordered list of attribute ids
        self._out: dict[str, list[str]] = {}
        self._in: dict[str, list[str]] = {}
        # lazy query indexes, dropped on any mutation
        self._year_index: dict[int, list[str]] | None = None
        self._type_index: dict[str, list[str]] | None = None

    # -- mutation (ingestion phase only) ------------------------------------

    def insert_node(self, node: NodeRecord) -> None:
        node.validate()
        existing = self._nodes.get(node.id)
        if existing is not None:
            if existing != node:
                raise ValidationError(
                    f"node {node.id!r} already exists with different content"
                )
            return
        self._nodes[node.id] = node
        self._year_index = None
        self._type_index = None

    def insert_edge(self, edge: EdgeRecord) -> None:
        a = self._nodes.get(edge.applicant_id)
        v = self._nodes.get(edge.attribute_id)
        if a is None or v is None:
            raise ValidationError(
                f"edge ({edge.applicant_id!r}, {edge.attribute_id!r}) references a missing node"
            )
        if a.kind != APPLICANT:
            raise ValidationError(
                f"edge endpoint {edge.applicant_id!r} is not an applicant node"
            )
        if v.kind != ATTRIBUTE:
            raise ValidationError(
                f"edge endpoint {edge.attribute_id!r} is not an attribute node"
            )
        key = (edge.applicant_id, edge.attribute_id)
        if key in self._edges:
            return
        self._edges.add(key)
        self._out.setdefault(edge.applicant_id, []).append(edge.attribute_id)
        self._in.setdefault(edge.attribute_id, []).append(edge.applicant_id)

    # -- read-only accessors -------------------------------------------------

    @property
    def node_count(self) -> int:
        return len(self._nodes)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def nodes(self) -> list[NodeRecord]:
        return [self._nodes[i] for i in sorted(self._nodes)]

    def edges(self) -> list[EdgeRecord]:
        return [EdgeRecord(a, v) for a, v in sorted(self._edges)]

    def has_node(self, node_id: str) -> bool:
        return node_id in self._nodes

    def node(self, node_id: str) -> NodeRecord:
        try:
            return self._nodes[node_id]
        except KeyError:
            raise NotFoundError(f"unknown node id {node_id!r}") from None

    def attribute_types(self) -> set[str]:
        return {n.type for n in self._nodes.values() if n.kind == ATTRIBUTE}

    def list_attribute_types(self) -> list[tuple[str, int]]:
        """All attribute types with their distinct-value counts, sorted by type."""
        counts: dict[str, int] = {}
        for n in self._nodes.values():
            if n.kind == ATTRIBUTE:
                counts[n.type] = counts.get(n.type, 0) + 1
        return sorted(counts.items())

    def list_years(self) -> list[int]:
        return sorted({n.year for n in self._nodes.values() if n.kind == APPLICANT})

    def get_applicant(self, applicant_id: str) -> tuple[NodeRecord, list[NodeRecord]]:
        """The applicant node plus every incident attribute node, all types.

        Attributes come back sorted by (type, label) so pop-up payloads are
        deterministic.
        """
        node = self.node(applicant_id)
        if node.kind != APPLICANT:
            raise NotFoundError(f"node {applicant_id!r} is not an applicant")
        attrs = [self._nodes[v] for v in self._out.get(applicant_id, [])]
        attrs.sort(key=lambda n: (n.type, n.label))
        return node, attrs

    def applicants_of_year(self, year: int) -> list[str]:
        if self._year_index is None:
            index: dict[int, list[str]] = {}
            for n in self._nodes.values():
                if n.kind == APPLICANT:
                    index.setdefault(n.year, []).append(n.id)
            for ids in index.values():
                ids.sort()
            self._year_index = index
        return self._year_index.get(year, [])

    def attributes_of_type(self, attribute_type: str) -> list[str]:
        if self._type_index is None:
            index: dict[str, list[str]] = {}
            for n in self._nodes.values():
                if n.kind == ATTRIBUTE:
                    index.setdefault(n.type, []).append(n.id)
            for ids in index.values():
                ids.sort()
            self._type_index = index
        return self._type_index.get(attribute_type, [])

    def occurrence(self, attribute_id: str, year: int) -> int:
        """Year-restricted degree: edges from applicants of ``year`` to this node."""
        nbrs = self._in.get(attribute_id, ())
        return sum(1 for a in nbrs if self._nodes[a].year == year)

    # -- the bipartite view query --------------------------------------------

    def query_subgraph(
        self,
        year: int,
        primary_type: str,
        secondary_type: str,
        limit: int | None = None,
        offset: int | None = None,
    ) -> SubgraphView:
        if primary_type == secondary_type:
            raise ValidationError("primary and secondary attribute types must differ")
        types = self.attribute_types()
        if primary_type not in types:
            raise NotFoundError(f"unknown attribute type {primary_type!r}")
        if secondary_type not in types:
            raise NotFoundError(f"unknown attribute type {secondary_type!r}")
        if year not in self.list_years():
            raise NotFoundError(f"unknown year {year}")
        if limit is not None and limit < 0:
            raise ValidationError("limit must be non-negative")
        if offset is not None and offset < 0:
            raise ValidationError("offset must be non-negative")
        off = offset or 0

        # occurrence-ranked primaries of that year, zero-occurrence excluded
        ranked: list[tuple[int, str, NodeRecord]] = []
        for vid in self.attributes_of_type(primary_type):
            occ = self.occurrence(vid, year)
            if occ > 0:
                n = self._nodes[vid]
                ranked.append((occ, n.label, n))
        ranked.sort(key=lambda t: (-t[0], t[1]))
        stop = off + limit if limit is not None else None
        primary_nodes = [(n, occ) for occ, _, n in ranked[off:stop]]
        retained = {n.id for n, _ in primary_nodes}

        # applicants of the year touching a retained primary
        applicant_ids = []
        for aid in self.applicants_of_year(year):
            if any(v in retained for v in self._out.get(aid, ())):
                applicant_ids.append(aid)

        edges: list[EdgeRecord] = []
        secondary_ids: set[str] = set()
        for aid in applicant_ids:
            for vid in self._out.get(aid, ()):
                v = self._nodes[vid]
                if vid in retained:
                    edges.append(EdgeRecord(aid, vid))
                elif v.type == secondary_type:
                    edges.append(EdgeRecord(aid, vid))
                    secondary_ids.add(vid)
        edges.sort(key=lambda e: (e.applicant_id, e.attribute_id))

        return SubgraphView(
            year=year,
            primary_type=primary_type,
            secondary_type=secondary_type,
            primary_nodes=primary_nodes,
            secondary_nodes=[self._nodes[i] for i in sorted(secondary_ids)],
            applicant_nodes=[self._nodes[i] for i in applicant_ids],
            edges=edges,
            limit=limit,
            offset=off,
        )

    # -- equality (used by exchange round-trip tests) -------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PropertyGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self) -> int:  # graphs are mutable; identity hash
        return id(self)
