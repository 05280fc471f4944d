"""HTTP API over a real pipeline run directory."""

import pytest
from fastapi.testclient import TestClient

from corpusgen import build_idiom_corpus
from sugarminer.cli import main
from sugarminer.server import create_app


@pytest.fixture(scope="module")
def run_env(tmp_path_factory):
    root = tmp_path_factory.mktemp("serve")
    corpus = root / "corpus"
    build_idiom_corpus(corpus, seed=41, per_idiom=4, fillers=3)
    out = root / "out"
    rc = main(["pipeline", "--corpus", str(corpus), "--out", str(out),
               "--min-support", "0.12"])
    assert rc == 0
    return corpus, out / "generalized"


@pytest.fixture()
def env(run_env, tmp_path):
    corpus, run_dir = run_env
    # copy the run dir so each test gets a fresh label log
    import shutil
    work = tmp_path / "run"
    shutil.copytree(run_dir, work)
    (work / "labels.jsonl").unlink(missing_ok=True)
    app = create_app(work, corpus)
    return TestClient(app), work, corpus


@pytest.fixture()
def client(env):
    return env[0]


def test_patterns_listing_and_filters(client):
    everything = client.get("/api/patterns").json()
    assert everything
    size1 = client.get("/api/patterns", params={"size": 1}).json()
    assert size1
    assert all(p["pattern"]["size"] == 1 for p in size1)
    # every size-1 pattern is investigated
    assert all(p["verdict"]["investigated"] for p in size1)
    investigated = client.get("/api/patterns", params={"investigated": True}).json()
    assert all(p["verdict"]["investigated"] for p in investigated)
    # sorted by size then support descending
    supports = [(p["pattern"]["size"], -p["pattern"]["support_count"])
                for p in everything]
    assert supports == sorted(supports)


def test_rule_filter(client):
    dup = client.get("/api/patterns", params={"rule": "duplication"}).json()
    assert dup
    for p in dup:
        assert p["verdict"]["flags"]["duplication"]
        labels = set(p["nodes"])
        assert len(labels) == 1
    assert client.get("/api/patterns", params={"rule": "bogus"}).status_code == 422


def test_unknown_pattern_404(client):
    assert client.get("/api/patterns/ffffffffffffffff").status_code == 404
    assert client.get("/api/patterns/ffffffffffffffff/examples").status_code == 404


def test_label_round_trip_updates_metrics(client):
    target = client.get("/api/patterns", params={"size": 1}).json()[0]
    pid = target["pattern"]["id"]
    before = client.get("/api/metrics").json()
    sugarable_before = next(r["sugarable_count"] for r in before if r["size"] == 1)
    resp = client.post("/api/labels", json={
        "pattern_id": pid, "sugarable": True, "sugar_name": "unless",
        "labeler": "tester",
    })
    assert resp.status_code == 201
    assert resp.json()["timestamp"]
    after = client.get("/api/metrics").json()
    sugarable_after = next(r["sugarable_count"] for r in after if r["size"] == 1)
    assert sugarable_after == sugarable_before + 1
    # latest label visible on the pattern payload
    got = client.get(f"/api/patterns/{pid}").json()
    assert got["label"]["sugar_name"] == "unless"
    assert got["history_length"] == 1


def test_invalid_label_422(client):
    target = client.get("/api/patterns", params={"size": 1}).json()[0]
    pid = target["pattern"]["id"]
    resp = client.post("/api/labels", json={
        "pattern_id": pid, "sugarable": False, "sugar_name": "nope",
    })
    assert resp.status_code == 422


def test_label_unknown_pattern_404(client):
    resp = client.post("/api/labels", json={
        "pattern_id": "ffffffffffffffff", "sugarable": True,
    })
    assert resp.status_code == 404


def test_continue_precondition_409_then_ok(client):
    resp = client.get("/api/continue", params={"size": 1})
    assert resp.status_code == 409
    unlabeled = resp.json()["unlabeled"]
    assert unlabeled
    for pid in unlabeled:
        ok = client.post("/api/labels", json={
            "pattern_id": pid, "sugarable": True, "sugar_name": "s1",
        })
        assert ok.status_code == 201
    resp = client.get("/api/continue", params={"size": 1})
    assert resp.status_code == 200
    body = resp.json()
    assert body["size"] == 1
    assert body["new_sugars"] == 1
    assert body["continue"] is True


def test_examples_snippets_match_corpus_bytes(client, run_env):
    corpus, _ = run_env
    patterns = client.get("/api/patterns", params={"size": 2}).json()
    pid = patterns[0]["pattern"]["id"]
    examples = client.get(f"/api/patterns/{pid}/examples").json()
    assert examples
    checked = 0
    for ex in examples:
        data = (corpus / ex["method"]["file_path"]).read_bytes()
        for node in ex["nodes"]:
            assert node["span"] is not None
            lo, hi = node["span"]
            assert node["snippet"] == data[lo:hi].decode("utf-8")
            checked += 1
    assert checked > 0


def test_labels_append_log_survives_restart(env):
    client, work, corpus = env
    target = client.get("/api/patterns", params={"size": 1}).json()[0]
    pid = target["pattern"]["id"]
    client.post("/api/labels", json={"pattern_id": pid, "sugarable": True})
    client.post("/api/labels", json={"pattern_id": pid, "sugarable": False})
    # restart: a fresh app over the same run directory replays the log
    reborn = TestClient(create_app(work, corpus))
    got = reborn.get(f"/api/patterns/{pid}").json()
    assert got["history_length"] == 2
    assert got["label"]["sugarable"] is False
