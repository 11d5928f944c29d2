import math

import numpy as np
import pytest

from yeargraph.errors import ValidationError
from yeargraph.graph import EdgeRecord, NodeRecord, SubgraphView
from yeargraph.layout import (
    LayoutParams,
    fa2_step,
    initial_layout,
    move_pinned,
    run_layout,
)
from yeargraph.layout import kernels


def attr(t, v):
    return NodeRecord(id=f"v:{t}:{v}", kind="attribute", type=t, label=v)


def app(year, key):
    return NodeRecord(id=f"a:{year}:{key}", kind="applicant", type="", label=key, year=year)


def make_view(n_primary=4, n_secondary=2, links=None, year=2019):
    """Small hand-built view; links maps applicant key -> list of attribute ids."""
    primary = [(attr("x", f"p{i}"), n_primary - i) for i in range(n_primary)]
    secondary = [attr("y", f"s{i}") for i in range(n_secondary)]
    links = links or {}
    applicants = [app(year, k) for k in sorted(links)]
    edges = [
        EdgeRecord(f"a:{year}:{k}", vid) for k in sorted(links) for vid in sorted(links[k])
    ]
    return SubgraphView(
        year=year,
        primary_type="x",
        secondary_type="y",
        primary_nodes=primary,
        secondary_nodes=secondary,
        applicant_nodes=applicants,
        edges=edges,
    )


def test_circular_positions_match_closed_form():
    view = make_view(n_primary=4)
    st = initial_layout(view, "circular", LayoutParams(seed=1))
    expected = [(0.0, -300.0), (300.0, 0.0), (0.0, 300.0), (-300.0, 0.0)]
    for i, (ex, ey) in enumerate(expected):
        x, y = st.position_of(f"v:x:p{i}")
        assert abs(x - ex) < 1e-9 and abs(y - ey) < 1e-9


def test_linear_positions_match_closed_form():
    view = make_view(n_primary=3)
    st = initial_layout(view, "linear", LayoutParams(seed=1))
    xs = [st.position_of(f"v:x:p{i}") for i in range(3)]
    assert xs[0] == pytest.approx((-120.0, 0.0), abs=1e-9)
    assert xs[1] == pytest.approx((0.0, 0.0), abs=1e-9)
    assert xs[2] == pytest.approx((120.0, 0.0), abs=1e-9)


def test_star_center_is_max_occurrence_node():
    view = make_view(n_primary=3)
    st = initial_layout(view, "star", LayoutParams(seed=1))
    assert st.position_of("v:x:p0") == (0.0, 0.0)
    for i, angle in [(1, -math.pi / 2), (2, -math.pi / 2 + math.pi)]:
        x, y = st.position_of(f"v:x:p{i}")
        assert abs(x - 300 * math.cos(angle)) < 1e-9
        assert abs(y - 300 * math.sin(angle)) < 1e-9


def test_star_single_primary_at_origin():
    view = make_view(n_primary=1)
    st = initial_layout(view, "star", LayoutParams(seed=1))
    assert st.position_of("v:x:p0") == (0.0, 0.0)
    assert st.is_pinned("v:x:p0")


def test_free_nodes_seeded_inside_half_radius():
    view = make_view(n_primary=2, n_secondary=2, links={"a": ["v:x:p0", "v:y:s0"]})
    params = LayoutParams(seed=7)
    st = initial_layout(view, "circular", params)
    for nid in ["v:y:s0", "v:y:s1", "a:2019:a"]:
        x, y = st.position_of(nid)
        assert math.hypot(x, y) <= params.radius / 2 + 1e-12
        assert not st.is_pinned(nid)


def test_identical_seeds_reproduce_positions_bitwise():
    view = make_view(links={"a": ["v:x:p0", "v:y:s0"], "b": ["v:x:p1", "v:y:s1"]})
    s1 = initial_layout(view, "circular", LayoutParams(seed=42))
    s2 = initial_layout(view, "circular", LayoutParams(seed=42))
    assert np.array_equal(s1.pos, s2.pos)
    for _ in range(30):
        fa2_step(s1)
        fa2_step(s2)
    assert np.array_equal(s1.pos, s2.pos)


def test_different_seeds_differ():
    view = make_view(links={"a": ["v:x:p0", "v:y:s0"]})
    s1 = initial_layout(view, "circular", LayoutParams(seed=1))
    s2 = initial_layout(view, "circular", LayoutParams(seed=2))
    assert not np.array_equal(s1.pos, s2.pos)


def test_empty_primary_set_rejected():
    view = make_view(n_primary=4)
    view.primary_nodes = []
    with pytest.raises(ValidationError):
        initial_layout(view, "circular", LayoutParams(seed=1))


def test_unknown_layout_kind_rejected():
    view = make_view()
    with pytest.raises(ValidationError):
        initial_layout(view, "spiral", LayoutParams(seed=1))


def test_pinned_nodes_bitwise_immobile():
    view = make_view(links={"a": ["v:x:p0", "v:y:s0"], "b": ["v:x:p1", "v:y:s0"]})
    st = initial_layout(view, "circular", LayoutParams(seed=3))
    anchors = {nid: st.position_of(nid) for nid in st.pinned}
    for _ in range(200):
        fa2_step(st)
    for nid, xy in anchors.items():
        assert st.position_of(nid) == xy


def test_attraction_pulls_connected_nodes_together():
    """Two free connected nodes 1000 apart, gravity off: distance shrinks."""
    view = SubgraphView(
        year=2019,
        primary_type="x",
        secondary_type="y",
        primary_nodes=[(attr("x", "p0"), 1)],
        secondary_nodes=[attr("y", "s0")],
        applicant_nodes=[app(2019, "a")],
        edges=[EdgeRecord("a:2019:a", "v:y:s0")],
    )
    st = initial_layout(view, "circular", LayoutParams(seed=1, gravity=0.0))
    st.set_position("a:2019:a", -500.0, 0.0)
    st.set_position("v:y:s0", 500.0, 0.0)
    st.set_position("v:x:p0", 0.0, 10000.0)  # park the pinned anchor far away
    fa2_step(st)
    ax, ay = st.position_of("a:2019:a")
    sx, sy = st.position_of("v:y:s0")
    assert math.hypot(sx - ax, sy - ay) < 1000.0


def test_mirror_symmetry_preserved():
    """Mirror-image secondaries with mirrored edges stay mirrored for 200 steps."""
    view = make_view(
        n_primary=2,
        n_secondary=2,
        links={"a": ["v:x:p0", "v:y:s0"], "b": ["v:x:p1", "v:y:s1"]},
    )
    st = initial_layout(view, "circular", LayoutParams(seed=5))
    # primaries at mirrored spots about the y axis, then mirror the free nodes
    st.set_position("v:x:p0", -300.0, 0.0)
    st.set_position("v:x:p1", 300.0, 0.0)
    st.set_position("v:y:s0", -80.0, 40.0)
    st.set_position("v:y:s1", 80.0, 40.0)
    st.set_position("a:2019:a", -50.0, -30.0)
    st.set_position("a:2019:b", 50.0, -30.0)
    for _ in range(200):
        fa2_step(st)
    for left, right in [("v:y:s0", "v:y:s1"), ("a:2019:a", "a:2019:b")]:
        lx, ly = st.position_of(left)
        rx, ry = st.position_of(right)
        assert abs(lx + rx) < 1e-9
        assert abs(ly - ry) < 1e-9


def test_translation_equivariance_without_gravity():
    view = make_view(links={"a": ["v:x:p0", "v:y:s0"], "b": ["v:x:p1", "v:y:s1"]})
    p = LayoutParams(seed=9, gravity=0.0)
    s1 = initial_layout(view, "circular", p)
    s2 = initial_layout(view, "circular", p)
    shift = np.array([17.0, -4.5])
    s2.pos = s2.pos + shift
    for _ in range(20):
        fa2_step(s1)
        fa2_step(s2)
    assert np.allclose(s2.pos, s1.pos + shift, atol=1e-6)


def test_run_layout_zero_iterations_is_identity():
    view = make_view(links={"a": ["v:x:p0", "v:y:s0"]})
    st = initial_layout(view, "circular", LayoutParams(seed=1))
    before = st.pos.copy()
    run = run_layout(st, view, max_iter=0, epsilon=0.01)
    assert run.iterations == 0 and not run.converged
    assert np.array_equal(st.pos, before)


def test_all_pinned_converges_at_iteration_one():
    view = make_view(n_primary=3, n_secondary=0)
    st = initial_layout(view, "circular", LayoutParams(seed=1))
    run = run_layout(st, view, max_iter=100, epsilon=0.01)
    assert run.converged and run.iterations == 1
    assert run.max_displacement == 0.0


def test_move_pinned_then_zero_steps_changes_only_that_node():
    view = make_view(links={"a": ["v:x:p0", "v:y:s0"]})
    st = initial_layout(view, "circular", LayoutParams(seed=1))
    before = st.positions()
    move_pinned(st, "v:x:p0", 12.0, -9.0)
    after = st.positions()
    assert after["v:x:p0"] == (12.0, -9.0)
    changed = {nid for nid in before if before[nid] != after[nid]}
    assert changed == {"v:x:p0"}


def test_move_unpinned_rejected():
    view = make_view(links={"a": ["v:x:p0", "v:y:s0"]})
    st = initial_layout(view, "circular", LayoutParams(seed=1))
    with pytest.raises(ValidationError):
        move_pinned(st, "a:2019:a", 0.0, 0.0)
    with pytest.raises(ValidationError):
        move_pinned(st, "v:y:s0", 0.0, 0.0)


def test_secondary_follows_moved_primary():
    """Move a pinned primary away; its exclusively-linked secondary re-tracks it."""
    links = {f"k{i}": ["v:x:p0", "v:y:s0"] for i in range(4)}
    links.update({f"m{i}": ["v:x:p1", "v:y:s1"] for i in range(4)})
    view = make_view(n_primary=2, n_secondary=2, links=links)
    st = initial_layout(view, "circular", LayoutParams(seed=2, speed_factor=0.1))
    run_layout(st, view, max_iter=500, epsilon=0.01)
    move_pinned(st, "v:x:p0", 2000.0, 2000.0)

    def dist():
        sx, sy = st.position_of("v:y:s0")
        px, py = st.position_of("v:x:p0")
        return math.hypot(sx - px, sy - py)

    before = dist()
    run_layout(st, view, max_iter=500, epsilon=0.01)
    assert dist() < before


def test_coincident_nodes_separate_deterministically():
    view = make_view(n_primary=1, n_secondary=2)
    make = lambda: initial_layout(view, "circular", LayoutParams(seed=4))
    s1, s2 = make(), make()
    for s in (s1, s2):
        s.set_position("v:y:s0", 5.0, 5.0)
        s.set_position("v:y:s1", 5.0, 5.0)
        fa2_step(s)
    a1 = s1.position_of("v:y:s0")
    b1 = s1.position_of("v:y:s1")
    assert a1 != b1  # pair separated
    assert not any(math.isnan(c) for c in (*a1, *b1))
    assert a1 == s2.position_of("v:y:s0") and b1 == s2.position_of("v:y:s1")


def test_numpy_and_numba_kernels_agree():
    if kernels.step_numba is None:
        pytest.skip("numba kernel unavailable in this environment")
    view = make_view(
        links={
            "a": ["v:x:p0", "v:y:s0"],
            "b": ["v:x:p1", "v:y:s1"],
            "c": ["v:x:p2", "v:y:s0"],
        }
    )
    s_np = initial_layout(view, "circular", LayoutParams(seed=11))
    s_nb = initial_layout(view, "circular", LayoutParams(seed=11))
    args = lambda s: (
        s.pos, s.mass, s.pinned_mask, s.edge_src, s.edge_dst,
        s.prev_force, s.tie_angle, s.id_rank, 10.0, 1.0, 1.0, 10.0,
    )
    for _ in range(25):
        s_np.pos, s_np.prev_force, d1 = kernels.step_numpy(*args(s_np))
        s_nb.pos, s_nb.prev_force, d2 = kernels.step_numba(*args(s_nb))
    assert np.allclose(s_np.pos, s_nb.pos, rtol=1e-9, atol=1e-9)


def test_convergence_on_random_50_node_view():
    import random

    rng = random.Random(0)
    links = {}
    for i in range(40):
        links[f"k{i}"] = [f"v:x:p{rng.randrange(4)}", f"v:y:s{rng.randrange(6)}"]
    view = make_view(n_primary=4, n_secondary=6, links=links)
    st = initial_layout(view, "circular", LayoutParams(seed=1, speed_factor=0.1))
    run = run_layout(st, view, max_iter=1000, epsilon=0.01)
    assert run.converged, f"did not converge: residual {run.max_displacement}"
