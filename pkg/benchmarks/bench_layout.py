#!/usr/bin/env python3
"""Benchmark the force-step kernels: numba @njit vs the pure-numpy fallback.

Usage:
    python3 benchmarks/bench_layout.py [--sizes 50,100,200,400] [--iters 200]

Builds synthetic bipartite views of each size, runs both kernels for a fixed
number of iterations, and prints per-step timings plus the speedup. The numba
column is skipped if numba is unavailable or disabled via YEARGRAPH_NO_NUMBA.
"""

import argparse
import random
import time

from yeargraph.graph import EdgeRecord, NodeRecord, SubgraphView
from yeargraph.layout import kernels
from yeargraph.layout.engine import LayoutParams, initial_layout


def build_view(n_nodes: int, rng: random.Random) -> SubgraphView:
    n_primary = max(2, n_nodes // 12)
    n_secondary = max(2, n_nodes // 8)
    n_applicants = n_nodes - n_primary - n_secondary
    primary = [
        (NodeRecord(id=f"v:x:p{i}", kind="attribute", type="x", label=f"p{i}"), n_primary - i)
        for i in range(n_primary)
    ]
    secondary = [
        NodeRecord(id=f"v:y:s{i}", kind="attribute", type="y", label=f"s{i}")
        for i in range(n_secondary)
    ]
    applicants, edges = [], []
    for i in range(n_applicants):
        aid = f"a:2019:k{i:05d}"
        applicants.append(
            NodeRecord(id=aid, kind="applicant", type="", label=f"k{i}", year=2019)
        )
        edges.append(EdgeRecord(aid, f"v:x:p{rng.randrange(n_primary)}"))
        edges.append(EdgeRecord(aid, f"v:y:s{rng.randrange(n_secondary)}"))
    return SubgraphView(
        year=2019,
        primary_type="x",
        secondary_type="y",
        primary_nodes=primary,
        secondary_nodes=secondary,
        applicant_nodes=applicants,
        edges=sorted(edges, key=lambda e: (e.applicant_id, e.attribute_id)),
    )


def time_kernel(step, state, iters: int) -> float:
    pos, prev = state.pos.copy(), state.prev_force.copy()
    args = (
        state.mass, state.pinned_mask, state.edge_src, state.edge_dst,
        state.tie_angle, state.id_rank,
    )
    p = state.params
    started = time.perf_counter()
    for _ in range(iters):
        pos, prev, _disp = step(
            pos, args[0], args[1], args[2], args[3], prev, args[4], args[5],
            p.repulsion, p.gravity, p.speed_factor, p.max_step,
        )
    return (time.perf_counter() - started) / iters


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.split("\n", 1)[0])
    parser.add_argument("--sizes", default="50,100,200,400")
    parser.add_argument("--iters", type=int, default=200)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    rng = random.Random(0)
    have_numba = kernels.step_numba is not None
    if have_numba:
        warm = initial_layout(build_view(20, rng), "circular", LayoutParams(seed=0))
        time_kernel(kernels.step_numba, warm, 1)  # trigger JIT outside timing

    print(f"{'nodes':>6} {'numpy ms/step':>14} {'numba ms/step':>14} {'speedup':>8}")
    for size in sizes:
        view = build_view(size, rng)
        state = initial_layout(view, "circular", LayoutParams(seed=1))
        t_np = time_kernel(kernels.step_numpy, state, args.iters)
        if have_numba:
            t_nb = time_kernel(kernels.step_numba, state, args.iters)
            print(f"{size:>6} {t_np * 1e3:>14.3f} {t_nb * 1e3:>14.3f} {t_np / t_nb:>7.1f}x")
        else:
            print(f"{size:>6} {t_np * 1e3:>14.3f} {'-':>14} {'-':>8}")


if __name__ == "__main__":
    main()
