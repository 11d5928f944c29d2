"""Year-to-year transition diffs and per-year degree time series.

The transition rule keeps the viewer's mental map intact: attribute nodes
present in both years keep their identity (and, downstream, their positions),
and applicants are carried over exactly when an applicant with the same edge
signature exists in both years. A signature is the sorted tuple of attribute
endpoints an applicant touches within the displayed view, so the rule governs
on-screen continuity, not global record identity.
"""

from __future__ import annotations

from dataclasses import dataclass

from yeargraph.errors import NotFoundError, ValidationError
from yeargraph.graph import ATTRIBUTE, EdgeRecord, PropertyGraph, SubgraphView

MATCH_SIGNATURE = "signature"
MATCH_ID = "id"


@dataclass
class TransitionDiff:
    from_year: int
    to_year: int
    kept_applicants: list[tuple[str, str]]  # (old id, new id), both sorted ascending
    removed_applicants: list[str]
    added_applicants: list[str]
    removed_edges: list[EdgeRecord]
    added_edges: list[EdgeRecord]
    retained_attributes: list[str]


@dataclass
class DegreeSeries:
    attribute_id: str
    points: list[tuple[int, int]]  # (fiscal year, degree), every dataset year, 0 when absent


def _signatures(view: SubgraphView) -> dict[str, tuple[str, ...]]:
    by_applicant: dict[str, list[str]] = {n.id: [] for n in view.applicant_nodes}
    for edge in view.edges:
        by_applicant[edge.applicant_id].append(edge.attribute_id)
    return {aid: tuple(sorted(vids)) for aid, vids in by_applicant.items()}


def _applicant_key(applicant_id: str) -> str:
    """Registration key shared across years: the id with its year prefix stripped."""
    parts = applicant_id.split(":", 2)
    return parts[2] if len(parts) == 3 else applicant_id


def transition(
    from_view: SubgraphView, to_view: SubgraphView, mode: str = MATCH_SIGNATURE
) -> TransitionDiff:
    """Diff two views of the same attribute pair taken at different years."""
    if (from_view.primary_type, from_view.secondary_type) != (
        to_view.primary_type,
        to_view.secondary_type,
    ):
        raise ValidationError("transition requires both views to share the attribute pair")
    if (from_view.limit, from_view.offset) != (to_view.limit, to_view.offset):
        raise ValidationError("transition requires both views to share limit and offset")
    if mode not in (MATCH_SIGNATURE, MATCH_ID):
        raise ValidationError(f"unknown matching mode {mode!r}")

    retained = sorted(from_view.attribute_ids() & to_view.attribute_ids())

    from_sig = _signatures(from_view)
    to_sig = _signatures(to_view)

    kept: list[tuple[str, str]] = []
    removed: list[str] = []
    added: list[str] = []

    if mode == MATCH_ID:
        from_by_key = {_applicant_key(aid): aid for aid in sorted(from_sig)}
        to_by_key = {_applicant_key(aid): aid for aid in sorted(to_sig)}
        for key in sorted(from_by_key):
            if key in to_by_key:
                kept.append((from_by_key[key], to_by_key[key]))
            else:
                removed.append(from_by_key[key])
        added.extend(to_by_key[key] for key in sorted(to_by_key) if key not in from_by_key)
    else:
        groups_from: dict[tuple[str, ...], list[str]] = {}
        for aid, sig in from_sig.items():
            groups_from.setdefault(sig, []).append(aid)
        groups_to: dict[tuple[str, ...], list[str]] = {}
        for aid, sig in to_sig.items():
            groups_to.setdefault(sig, []).append(aid)
        for sig in sorted(set(groups_from) | set(groups_to)):
            olds = sorted(groups_from.get(sig, []))
            news = sorted(groups_to.get(sig, []))
            n = min(len(olds), len(news))
            kept.extend(zip(olds[:n], news[:n]))
            removed.extend(olds[n:])
            added.extend(news[n:])
        removed.sort()
        added.sort()

    kept_old = {old for old, _ in kept}
    kept_new = {new for _, new in kept}
    removed_edges = [e for e in from_view.edges if e.applicant_id not in kept_old]
    added_edges = [e for e in to_view.edges if e.applicant_id not in kept_new]
    # under id matching a kept applicant's edges may still differ between years
    for old, new in kept:
        sig_old, sig_new = set(from_sig[old]), set(to_sig[new])
        removed_edges.extend(EdgeRecord(old, v) for v in sig_old - sig_new)
        added_edges.extend(EdgeRecord(new, v) for v in sig_new - sig_old)
    removed_edges.sort(key=lambda e: (e.applicant_id, e.attribute_id))
    added_edges.sort(key=lambda e: (e.applicant_id, e.attribute_id))

    return TransitionDiff(
        from_year=from_view.year,
        to_year=to_view.year,
        kept_applicants=sorted(kept),
        removed_applicants=removed,
        added_applicants=added,
        removed_edges=removed_edges,
        added_edges=added_edges,
        retained_attributes=retained,
    )


def degree_series(attribute_id: str, graph: PropertyGraph) -> DegreeSeries:
    """Per-year degree of one attribute node over every dataset year."""
    node = graph.node(attribute_id)
    if node.kind != ATTRIBUTE:
        raise NotFoundError(f"node {attribute_id!r} is not an attribute node")
    points = [(year, graph.occurrence(attribute_id, year)) for year in graph.list_years()]
    return DegreeSeries(attribute_id=attribute_id, points=points)
