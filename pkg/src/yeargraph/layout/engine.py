"""Layout state, deterministic initial placement, and the simulation driver.

Primary attribute nodes are placed by one of three closed-form layouts (star,
circular, linear) and pinned; secondary and applicant nodes start at
hash-seeded pseudo-random positions and move under the force simulation.
Coordinates use the screen convention: y grows downward, angles are measured
from the positive x axis.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass

import numpy as np

from yeargraph.errors import ValidationError
from yeargraph.graph import SubgraphView
from yeargraph.layout import kernels

LAYOUT_KINDS = ("star", "circular", "linear")


@dataclass
class LayoutParams:
    repulsion: float = 10.0  # pairwise repulsion strength
    gravity: float = 1.0  # pull toward origin, scaled by degree
    speed_factor: float = 1.0
    max_step: float = 10.0  # displacement clamp per iteration
    radius: float = 300.0  # ring radius for circular/star
    linear_spacing: float = 120.0
    seed: int = 0

    def validate(self) -> None:
        for name in ("repulsion", "speed_factor", "max_step", "radius", "linear_spacing"):
            if getattr(self, name) <= 0:
                raise ValidationError(f"layout parameter {name} must be positive")
        if self.gravity < 0:
            raise ValidationError("layout parameter gravity must be non-negative")


@dataclass
class LayoutState:
    ids: list[str]
    index: dict[str, int]
    pos: np.ndarray  # (n, 2) float64
    pinned_mask: np.ndarray  # (n,) uint8
    prev_force: np.ndarray  # (n, 2) float64
    mass: np.ndarray  # (n,) float64, in-view degree + 1
    edge_src: np.ndarray  # (m,) int64
    edge_dst: np.ndarray  # (m,) int64
    tie_angle: np.ndarray  # (n,) float64, coincident-pair regularization
    id_rank: np.ndarray  # (n,) int64, rank of id in bytewise order
    params: LayoutParams
    iteration: int = 0
    last_displacement: float = math.inf

    @property
    def pinned(self) -> set[str]:
        return {self.ids[i] for i in range(len(self.ids)) if self.pinned_mask[i]}

    def is_pinned(self, node_id: str) -> bool:
        return bool(self.pinned_mask[self._idx(node_id)])

    def position_of(self, node_id: str) -> tuple[float, float]:
        i = self._idx(node_id)
        return float(self.pos[i, 0]), float(self.pos[i, 1])

    def positions(self) -> dict[str, tuple[float, float]]:
        return {nid: (float(self.pos[i, 0]), float(self.pos[i, 1])) for i, nid in enumerate(self.ids)}

    def set_position(self, node_id: str, x: float, y: float) -> None:
        i = self._idx(node_id)
        self.pos[i, 0] = x
        self.pos[i, 1] = y

    def _idx(self, node_id: str) -> int:
        try:
            return self.index[node_id]
        except KeyError:
            raise ValidationError(f"node {node_id!r} is not part of this layout") from None


@dataclass
class LayoutRun:
    iterations: int
    converged: bool
    max_displacement: float


def _hash_unit(*parts: object) -> float:
    """Deterministic uniform value in [0, 1) from the given parts."""
    text = "|".join(str(p) for p in parts)
    digest = hashlib.blake2b(text.encode("utf-8"), digest_size=8).digest()
    return int.from_bytes(digest, "big") / 2.0**64


def seeded_position(seed: int, node_id: str, radius: float) -> tuple[float, float]:
    """Pseudo-random point inside the disc of the given radius, from seed and id."""
    r = radius * math.sqrt(_hash_unit(seed, "r", node_id))
    theta = 2.0 * math.pi * _hash_unit(seed, "t", node_id)
    return r * math.cos(theta), r * math.sin(theta)


def _ring_positions(count: int, radius: float) -> list[tuple[float, float]]:
    out = []
    for i in range(count):
        theta = -math.pi / 2.0 + 2.0 * math.pi * i / count
        out.append((radius * math.cos(theta), radius * math.sin(theta)))
    return out


def initial_layout(view: SubgraphView, kind: str, params: LayoutParams) -> LayoutState:
    """Place and pin the primaries per ``kind``; seed everything else."""
    params.validate()
    if kind not in LAYOUT_KINDS:
        raise ValidationError(f"unknown layout kind {kind!r}, expected one of {LAYOUT_KINDS}")
    primaries = [n.id for n, _ in view.primary_nodes]
    if not primaries:
        raise ValidationError("cannot lay out a view with no primary attribute nodes")

    placed: dict[str, tuple[float, float]] = {}
    k = len(primaries)
    if kind == "circular":
        for nid, xy in zip(primaries, _ring_positions(k, params.radius)):
            placed[nid] = xy
    elif kind == "linear":
        for i, nid in enumerate(primaries):
            placed[nid] = (i * params.linear_spacing - (k - 1) * params.linear_spacing / 2.0, 0.0)
    else:  # star: top-occurrence node at the center, rest on the ring
        placed[primaries[0]] = (0.0, 0.0)
        if k > 1:
            for nid, xy in zip(primaries[1:], _ring_positions(k - 1, params.radius)):
                placed[nid] = xy

    ids = list(primaries)
    ids.extend(n.id for n in view.secondary_nodes)
    ids.extend(n.id for n in view.applicant_nodes)
    index = {nid: i for i, nid in enumerate(ids)}

    n = len(ids)
    pos = np.zeros((n, 2))
    for nid, (x, y) in placed.items():
        pos[index[nid]] = (x, y)
    for nid in ids[k:]:
        pos[index[nid]] = seeded_position(params.seed, nid, params.radius / 2.0)

    pinned_mask = np.zeros(n, dtype=np.uint8)
    pinned_mask[:k] = 1

    degree = np.zeros(n)
    edge_src = np.empty(len(view.edges), dtype=np.int64)
    edge_dst = np.empty(len(view.edges), dtype=np.int64)
    for e, edge in enumerate(view.edges):
        s, t = index[edge.applicant_id], index[edge.attribute_id]
        edge_src[e], edge_dst[e] = s, t
        degree[s] += 1
        degree[t] += 1

    tie_angle = np.array([2.0 * math.pi * _hash_unit("tie", nid) for nid in ids])
    order = {nid: r for r, nid in enumerate(sorted(ids))}
    id_rank = np.array([order[nid] for nid in ids], dtype=np.int64)

    return LayoutState(
        ids=ids,
        index=index,
        pos=pos,
        pinned_mask=pinned_mask,
        prev_force=np.zeros((n, 2)),
        mass=degree + 1.0,
        edge_src=edge_src,
        edge_dst=edge_dst,
        tie_angle=tie_angle,
        id_rank=id_rank,
        params=params,
    )


def fa2_step(state: LayoutState, view: SubgraphView | None = None) -> LayoutState:
    """One synchronous force iteration; pinned nodes never move."""
    if view is not None and view.node_count != len(state.ids):
        raise ValidationError("layout state does not match the view it is stepped with")
    p = state.params
    new_pos, force, max_disp = kernels.step(
        state.pos,
        state.mass,
        state.pinned_mask,
        state.edge_src,
        state.edge_dst,
        state.prev_force,
        state.tie_angle,
        state.id_rank,
        p.repulsion,
        p.gravity,
        p.speed_factor,
        p.max_step,
    )
    state.pos = new_pos
    state.prev_force = force
    state.iteration += 1
    state.last_displacement = max_disp
    return state


def run_layout(
    state: LayoutState,
    view: SubgraphView | None = None,
    max_iter: int = 1000,
    epsilon: float = 0.01,
) -> LayoutRun:
    """Step until the largest unpinned displacement drops below epsilon."""
    if max_iter < 0:
        raise ValidationError("max_iter must be >= 0")
    if epsilon < 0:
        raise ValidationError("epsilon must be >= 0")
    iterations = 0
    max_disp = state.last_displacement
    for _ in range(max_iter):
        fa2_step(state, view)
        iterations += 1
        max_disp = state.last_displacement
        if max_disp < epsilon:
            return LayoutRun(iterations=iterations, converged=True, max_displacement=max_disp)
    return LayoutRun(
        iterations=iterations,
        converged=False,
        max_displacement=max_disp if iterations else math.inf,
    )


def move_pinned(state: LayoutState, node_id: str, x: float, y: float) -> LayoutState:
    """Reposition a pinned node; free nodes are simulation-owned."""
    if not state.is_pinned(node_id):
        raise ValidationError(f"node {node_id!r} is not pinned; only pinned nodes can be moved")
    state.set_position(node_id, x, y)
    return state
