"""Force-accumulation step kernels.

One synchronous iteration over all nodes: degree-weighted pairwise repulsion,
linear attraction along edges, gravity toward the origin, then per-node swing
damping and a displacement clamp. Forces are always computed from the
previous iteration's positions, so the result is independent of node order.

Two interchangeable implementations live here: a numba @njit loop kernel and
a pure-numpy vectorized twin. The numba kernel is used when importable;
setting the environment variable ``YEARGRAPH_NO_NUMBA`` to a non-empty value
(other than ``0``) forces the numpy path. ``benchmarks/bench_layout.py``
compares the two.

Both kernels are O(n^2) per step by design: node counts per view stay in the
low hundreds and exact, reproducible sums matter more than asymptotics here.
"""

from __future__ import annotations

import math
import os

import numpy as np

# distance floor below which a node pair counts as coincident
COINCIDENT_EPS = 1e-9


def _step_loops(pos, mass, pinned, edge_src, edge_dst, prev_force, tie_angle, id_rank,
                repulsion, gravity, speed_factor, max_step):
    n = pos.shape[0]
    force = np.zeros((n, 2))

    for i in range(n):
        fx = 0.0
        fy = 0.0
        for j in range(n):
            if i == j:
                continue
            dx = pos[i, 0] - pos[j, 0]
            dy = pos[i, 1] - pos[j, 1]
            d2 = dx * dx + dy * dy
            if d2 < COINCIDENT_EPS * COINCIDENT_EPS:
                # coincident pair: deterministic direction from the id pair
                ang = tie_angle[i] + tie_angle[j]
                sgn = 1.0 if id_rank[i] < id_rank[j] else -1.0
                f = repulsion * mass[i] * mass[j] / COINCIDENT_EPS
                fx += sgn * math.cos(ang) * f
                fy += sgn * math.sin(ang) * f
            else:
                f = repulsion * mass[i] * mass[j] / d2
                fx += f * dx
                fy += f * dy
        force[i, 0] = fx
        force[i, 1] = fy

    for e in range(edge_src.shape[0]):
        s = edge_src[e]
        t = edge_dst[e]
        dx = pos[t, 0] - pos[s, 0]
        dy = pos[t, 1] - pos[s, 1]
        force[s, 0] += dx
        force[s, 1] += dy
        force[t, 0] -= dx
        force[t, 1] -= dy

    if gravity > 0.0:
        for i in range(n):
            norm = math.sqrt(pos[i, 0] * pos[i, 0] + pos[i, 1] * pos[i, 1])
            if norm > COINCIDENT_EPS:
                g = gravity * mass[i] / norm
                force[i, 0] -= g * pos[i, 0]
                force[i, 1] -= g * pos[i, 1]

    new_pos = pos.copy()
    max_disp = 0.0
    for i in range(n):
        if pinned[i]:
            continue
        sx = force[i, 0] - prev_force[i, 0]
        sy = force[i, 1] - prev_force[i, 1]
        swing = math.sqrt(sx * sx + sy * sy)
        factor = speed_factor / (1.0 + math.sqrt(swing))
        dx = force[i, 0] * factor
        dy = force[i, 1] * factor
        dmag = math.sqrt(dx * dx + dy * dy)
        if dmag > max_step:
            scale = max_step / dmag
            dx *= scale
            dy *= scale
            dmag = max_step
        new_pos[i, 0] += dx
        new_pos[i, 1] += dy
        if dmag > max_disp:
            max_disp = dmag

    return new_pos, force, max_disp


def step_numpy(pos, mass, pinned, edge_src, edge_dst, prev_force, tie_angle, id_rank,
               repulsion, gravity, speed_factor, max_step):
    """Vectorized twin of the loop kernel; same math, numpy reductions."""
    n = pos.shape[0]
    diff = pos[:, None, :] - pos[None, :, :]
    d2 = diff[..., 0] ** 2 + diff[..., 1] ** 2
    close = d2 < COINCIDENT_EPS * COINCIDENT_EPS
    np.fill_diagonal(close, False)
    safe_d2 = np.where(d2 > 0.0, d2, 1.0)
    rep = repulsion * (mass[:, None] * mass[None, :]) / safe_d2
    np.fill_diagonal(rep, 0.0)
    rep[close] = 0.0
    force = (rep[..., None] * diff).sum(axis=1)

    if close.any():
        ii, jj = np.nonzero(close)
        ang = tie_angle[ii] + tie_angle[jj]
        sgn = np.where(id_rank[ii] < id_rank[jj], 1.0, -1.0)
        f = repulsion * mass[ii] * mass[jj] / COINCIDENT_EPS
        np.add.at(force[:, 0], ii, sgn * np.cos(ang) * f)
        np.add.at(force[:, 1], ii, sgn * np.sin(ang) * f)

    if edge_src.shape[0]:
        dvec = pos[edge_dst] - pos[edge_src]
        np.add.at(force, edge_src, dvec)
        np.add.at(force, edge_dst, -dvec)

    if gravity > 0.0:
        norm = np.sqrt(pos[:, 0] ** 2 + pos[:, 1] ** 2)
        pulled = norm > COINCIDENT_EPS
        g = gravity * mass[pulled] / norm[pulled]
        force[pulled] -= g[:, None] * pos[pulled]

    swing = np.sqrt(((force - prev_force) ** 2).sum(axis=1))
    disp = force * (speed_factor / (1.0 + np.sqrt(swing)))[:, None]
    dmag = np.sqrt((disp ** 2).sum(axis=1))
    over = dmag > max_step
    if over.any():
        disp[over] *= (max_step / dmag[over])[:, None]
        dmag[over] = max_step
    free = ~pinned.astype(bool)
    new_pos = pos.copy()
    new_pos[free] += disp[free]
    max_disp = float(dmag[free].max()) if free.any() else 0.0
    return new_pos, force, max_disp


def _numba_disabled() -> bool:
    flag = os.environ.get("YEARGRAPH_NO_NUMBA", "")
    return flag not in ("", "0")


step_numba = None
if not _numba_disabled():
    try:
        from numba import njit

        step_numba = njit(cache=True)(_step_loops)
    except ImportError:
        step_numba = None

USING_NUMBA = step_numba is not None
step = step_numba if USING_NUMBA else step_numpy


def kernel_name() -> str:
    return "numba" if USING_NUMBA else "numpy"
