import pytest
from fastapi.testclient import TestClient

from yeargraph.config import load_config
from yeargraph.ingest import ingest_files
from yeargraph.service import create_app
from yeargraph.synth import AttributeSpec, SyntheticSpec, generate_dataset

from test_synth import base_spec


@pytest.fixture(scope="module")
def graph(tmp_path_factory):
    tmp = tmp_path_factory.mktemp("ds")
    paths, config_path = generate_dataset(base_spec(), str(tmp))
    g, _ = ingest_files(paths, load_config(config_path))
    return g


@pytest.fixture
def client(graph):
    return TestClient(create_app({"demo": graph}))


def make_session(client, **overrides):
    body = {"year": 2019, "x": "region", "y": "english", "layout": "circular", "seed": 5}
    body.update(overrides)
    resp = client.post("/api/datasets/demo/sessions", json=body)
    assert resp.status_code == 200, resp.text
    return resp.json()


def test_empty_server_lists_no_datasets():
    client = TestClient(create_app({}))
    resp = client.get("/api/datasets")
    assert resp.status_code == 200
    assert resp.json() == []


def test_datasets_listing(client):
    data = client.get("/api/datasets").json()
    assert [d["id"] for d in data] == ["demo"]
    assert data[0]["nodes"] > 0 and data[0]["edges"] > 0


def test_seven_yearly_files_give_seven_years(tmp_path):
    spec = base_spec(years=list(range(2014, 2021)), applicants_per_year=10)
    paths, config_path = generate_dataset(spec, str(tmp_path))
    g, _ = ingest_files(paths, load_config(config_path))
    client = TestClient(create_app({"seven": g}))
    assert client.get("/api/datasets/seven/years").json() == list(range(2014, 2021))


def test_unknown_route_is_structured_404(client):
    resp = client.get("/api/nope")
    assert resp.status_code == 404
    body = resp.json()
    assert body["error"]["code"] == "not_found"
    assert "message" in body["error"]


def test_unknown_dataset_404(client):
    resp = client.get("/api/datasets/missing/years")
    assert resp.status_code == 404
    assert resp.json()["error"]["code"] == "not_found"


def test_attributes_listing(client):
    attrs = client.get("/api/datasets/demo/attributes").json()
    types = {a["type"] for a in attrs}
    assert {"region", "english"} <= types
    for a in attrs:
        assert a["value_count"] >= 1


def test_create_session_rejects_same_attribute_pair(client):
    resp = client.post(
        "/api/datasets/demo/sessions", json={"year": 2019, "x": "region", "y": "region"}
    )
    assert resp.status_code == 400
    assert resp.json()["error"]["code"] == "validation"


def test_create_session_payload_matches_view(client, graph):
    payload = make_session(client, limit=2, offset=0)
    view = graph.query_subgraph(2019, "region", "english", 2, 0)
    assert len(payload["nodes"]) == view.node_count
    assert len(payload["edges"]) == len(view.edges)
    primaries = [n for n in payload["nodes"] if n["pinned"]]
    assert [p["occurrence"] for p in primaries] == [occ for _, occ in view.primary_nodes]
    kinds = {n["kind"] for n in payload["nodes"]}
    assert kinds == {"applicant", "attribute"}


def test_same_seed_same_initial_positions(client):
    a = make_session(client, seed=11)
    b = make_session(client, seed=11)
    assert a["session_id"] != b["session_id"]
    assert a["nodes"] == b["nodes"]
    assert a["edges"] == b["edges"]


def test_step_zero_iterations_changes_nothing(client):
    sid = make_session(client)["session_id"]
    resp = client.post(f"/api/sessions/{sid}/step", json={"iterations": 0})
    assert resp.status_code == 200
    body = resp.json()
    assert body["changes"] == []
    assert body["iterations"] == 0


def test_pinned_ids_never_in_change_set(client):
    payload = make_session(client)
    sid = payload["session_id"]
    pinned = {n["id"] for n in payload["nodes"] if n["pinned"]}
    for _ in range(5):
        changes = client.post(f"/api/sessions/{sid}/step", json={"iterations": 20}).json()[
            "changes"
        ]
        assert pinned.isdisjoint({c["id"] for c in changes})


def test_unknown_session_404(client):
    resp = client.post("/api/sessions/snope/step", json={"iterations": 1})
    assert resp.status_code == 404


def test_move_primary_sticks_across_steps(client):
    payload = make_session(client)
    sid = payload["session_id"]
    target = next(n["id"] for n in payload["nodes"] if n["pinned"])
    resp = client.post(
        f"/api/sessions/{sid}/move", json={"node_id": target, "x": 555.5, "y": -44.25}
    )
    assert resp.status_code == 200 and resp.json() == {"ok": True}
    client.post(f"/api/sessions/{sid}/step", json={"iterations": 30})
    # a fresh step reports only free nodes; re-create view state via transition to same year
    state = client.post(f"/api/sessions/{sid}/transition", json={"to_year": 2019}).json()
    assert target in state["retained_attributes"]
    # position survives: steps never moved it, transition carried it over
    post = client.post(f"/api/sessions/{sid}/step", json={"iterations": 0})
    assert post.json()["changes"] == []


def test_move_applicant_rejected(client):
    payload = make_session(client)
    sid = payload["session_id"]
    applicant = next(n["id"] for n in payload["nodes"] if n["kind"] == "applicant")
    resp = client.post(f"/api/sessions/{sid}/move", json={"node_id": applicant, "x": 0, "y": 0})
    assert resp.status_code == 400


def test_transition_identity_empty_diff(client):
    sid = make_session(client)["session_id"]
    body = client.post(f"/api/sessions/{sid}/transition", json={"to_year": 2019}).json()
    assert body["removed_applicants"] == [] and body["added_applicants"] == []
    assert body["added_nodes"] == []
    assert body["from_year"] == 2019 and body["to_year"] == 2019


def test_transition_conservation_and_retained_positions(client, graph):
    payload = make_session(client, year=2018)
    sid = payload["session_id"]
    positions_before = {n["id"]: (n["x"], n["y"]) for n in payload["nodes"]}
    body = client.post(f"/api/sessions/{sid}/transition", json={"to_year": 2020}).json()
    v18 = graph.query_subgraph(2018, "region", "english")
    v20 = graph.query_subgraph(2020, "region", "english")
    assert (
        2 * len(body["kept_applicants"])
        + len(body["removed_applicants"])
        + len(body["added_applicants"])
        == len(v18.applicant_nodes) + len(v20.applicant_nodes)
    )
    # retained attributes keep their exact serialized positions
    zero = client.post(f"/api/sessions/{sid}/step", json={"iterations": 0}).json()
    assert zero["changes"] == []
    follow = client.post(f"/api/sessions/{sid}/transition", json={"to_year": 2020}).json()
    assert follow["removed_applicants"] == [] and follow["added_applicants"] == []


def test_transition_unknown_year_404(client):
    sid = make_session(client)["session_id"]
    resp = client.post(f"/api/sessions/{sid}/transition", json={"to_year": 1999})
    assert resp.status_code == 404


def test_sessions_are_isolated(client):
    a = make_session(client, seed=1)
    b = make_session(client, seed=1)
    target = next(n["id"] for n in a["nodes"] if n["pinned"])
    client.post(f"/api/sessions/{a['session_id']}/move", json={"node_id": target, "x": 9, "y": 9})
    client.post(f"/api/sessions/{a['session_id']}/step", json={"iterations": 10})
    # b was never stepped: a zero-iteration step still reports no changes,
    # and a fresh identical session equals b's original payload
    c = make_session(client, seed=1)
    assert c["nodes"] == b["nodes"]


def test_chart_unknown_type_404(client):
    resp = client.get("/api/datasets/demo/chart", params={"x": "nope"})
    assert resp.status_code == 404


def test_chart_series_totals_match_occurrences(client, graph):
    series = client.get("/api/datasets/demo/chart", params={"x": "region"}).json()
    for s in series:
        for year, degree in s["points"]:
            assert degree == graph.occurrence(s["attribute_id"], year)
        assert [p[0] for p in s["points"]] == graph.list_years()


def test_chart_limit_one_returns_top_total(client, graph):
    full = client.get("/api/datasets/demo/chart", params={"x": "region"}).json()
    top = client.get("/api/datasets/demo/chart", params={"x": "region", "limit": 1}).json()
    assert len(top) == 1
    totals = {s["attribute_id"]: sum(d for _, d in s["points"]) for s in full}
    assert totals[top[0]["attribute_id"]] == max(totals.values())


def test_applicant_detail_matches_store(client, graph):
    aid = graph.applicants_of_year(2019)[0]
    resp = client.get(f"/api/datasets/demo/applicants/{aid}")
    assert resp.status_code == 200
    body = resp.json()
    node, attrs = graph.get_applicant(aid)
    assert body["id"] == aid and body["year"] == 2019
    assert body["attributes"] == [{"type": a.type, "value": a.label} for a in attrs]
    assert body["props"] == dict(sorted(node.props.items()))


def test_applicant_detail_unknown_404(client):
    resp = client.get("/api/datasets/demo/applicants/a:2019:missing")
    assert resp.status_code == 404


def test_applicant_with_no_edges_gives_empty_list(tmp_path):
    spec = SyntheticSpec(
        years=[2019],
        applicants_per_year=3,
        attributes=[AttributeSpec(type="english", values=["A"], missing_prob=1.0),
                    AttributeSpec(type="region", values=["B"], missing_prob=1.0)],
        seed=1,
    )
    paths, config_path = generate_dataset(spec, str(tmp_path))
    g, _ = ingest_files(paths, load_config(config_path))
    client = TestClient(create_app({"bare": g}))
    aid = g.applicants_of_year(2019)[0]
    resp = client.get(f"/api/datasets/bare/applicants/{aid}")
    assert resp.status_code == 200
    assert resp.json()["attributes"] == []


def test_expired_session_gives_410(graph):
    app = create_app({"demo": graph}, session_ttl=100.0)
    fake_now = [0.0]
    app.state.clock = lambda: fake_now[0]
    client = TestClient(app)
    sid = make_session(client)["session_id"]
    fake_now[0] = 50.0
    assert client.post(f"/api/sessions/{sid}/step", json={"iterations": 0}).status_code == 200
    fake_now[0] = 200.0
    resp = client.post(f"/api/sessions/{sid}/step", json={"iterations": 0})
    assert resp.status_code == 410
    assert resp.json()["error"]["code"] == "session_expired"


def test_identical_request_sequences_are_byte_identical(graph):
    def replay():
        client = TestClient(create_app({"demo": graph}))
        chunks = []
        chunks.append(client.get("/api/datasets").content)
        chunks.append(client.get("/api/datasets/demo/attributes").content)
        chunks.append(client.get("/api/datasets/demo/years").content)
        created = client.post(
            "/api/datasets/demo/sessions",
            json={"year": 2018, "x": "region", "y": "english", "layout": "star", "seed": 77},
        )
        chunks.append(created.content)
        sid = created.json()["session_id"]
        chunks.append(client.post(f"/api/sessions/{sid}/step", json={"iterations": 40}).content)
        chunks.append(
            client.post(f"/api/sessions/{sid}/transition", json={"to_year": 2020}).content
        )
        chunks.append(client.post(f"/api/sessions/{sid}/step", json={"iterations": 15}).content)
        chunks.append(client.get("/api/datasets/demo/chart", params={"x": "region"}).content)
        return b"\x00".join(chunks)

    assert replay() == replay()


def test_repeated_steps_settle_on_50_node_view(client):
    """Change-set magnitude falls below the harness bound within 1000 iterations."""
    created = make_session(client, year=2019)
    assert 40 <= len(created["nodes"]) <= 60
    sid = created["session_id"]
    positions = {n["id"]: (n["x"], n["y"]) for n in created["nodes"]}
    last_max = float("inf")
    total = 0
    while total < 1000:
        body = client.post(f"/api/sessions/{sid}/step", json={"iterations": 50}).json()
        total += body["iterations"]
        mags = [0.0]
        for c in body["changes"]:
            ox, oy = positions[c["id"]]
            mags.append(((c["x"] - ox) ** 2 + (c["y"] - oy) ** 2) ** 0.5)
            positions[c["id"]] = (c["x"], c["y"])
        last_max = max(mags)
    assert last_max < 0.5


def test_validation_error_shape_for_bad_body(client):
    sid = make_session(client)["session_id"]
    resp = client.post(f"/api/sessions/{sid}/step", json={"iterations": "many"})
    assert resp.status_code == 400
    assert resp.json()["error"]["code"] == "validation"
    resp = client.post(f"/api/sessions/{sid}/step", json={"iterations": -1})
    assert resp.status_code == 400
