"""Record server responses into JSON fixtures for the frontend tests.

Runs the real pipeline on the planted idiom corpus, then captures the
payloads the UI consumes. Timestamps are pinned afterwards so snapshots
stay stable. Re-run when the API or the corpus generators change:

    python3 frontend/scripts/record_fixtures.py
"""

from __future__ import annotations

import json
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parents[2]
sys.path.insert(0, str(REPO / "tests"))

from fastapi.testclient import TestClient  # noqa: E402

from corpusgen import build_idiom_corpus  # noqa: E402
from sugarminer.cli import main as cli_main  # noqa: E402
from sugarminer.server import create_app  # noqa: E402

FIXED_TS = "2026-08-10T00:00:00+00:00"
OUT = REPO / "frontend" / "test" / "fixtures"


def pin_timestamps(body):
    if isinstance(body, dict):
        return {
            k: (FIXED_TS if k == "timestamp" and isinstance(v, str) and v else pin_timestamps(v))
            for k, v in body.items()
        }
    if isinstance(body, list):
        return [pin_timestamps(x) for x in body]
    return body


def save(name: str, status: int, body) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / f"{name}.json"
    path.write_text(
        json.dumps({"status": status, "body": pin_timestamps(body)},
                   indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    print(f"recorded {path.relative_to(REPO)}")


def main() -> None:
    with tempfile.TemporaryDirectory() as td:
        root = Path(td)
        corpus = root / "corpus"
        build_idiom_corpus(corpus, seed=41, per_idiom=4, fillers=3)
        out = root / "out"
        rc = cli_main(["pipeline", "--corpus", str(corpus), "--out", str(out),
                       "--min-support", "0.12"])
        assert rc == 0, rc
        client = TestClient(create_app(out / "generalized", corpus))

        r = client.get("/api/patterns", params={"size": 1})
        save("patterns_size1", r.status_code, r.json())
        size1 = r.json()

        r = client.get("/api/patterns", params={"size": 2, "rule": "duplication"})
        save("patterns_rule_duplication", r.status_code, r.json())

        r = client.get("/api/metrics")
        save("metrics_initial", r.status_code, r.json())

        r = client.get("/api/continue", params={"size": 1})
        save("continue_incomplete", r.status_code, r.json())

        pid = size1[0]["pattern"]["id"]
        r = client.post("/api/labels", json={
            "pattern_id": pid, "sugarable": True, "sugar_name": "unless",
            "notes": "negated guard", "labeler": "recorder",
        })
        save("label_created", r.status_code, r.json())

        r = client.post("/api/labels", json={
            "pattern_id": pid, "sugarable": False, "sugar_name": "bogus",
            "notes": "", "labeler": "recorder",
        })
        save("label_rejected", r.status_code, r.json())

        for payload in size1[1:]:
            other = payload["pattern"]["id"]
            ok = client.post("/api/labels", json={
                "pattern_id": other, "sugarable": False, "sugar_name": None,
                "notes": "", "labeler": "recorder",
            })
            assert ok.status_code == 201
        r = client.get("/api/continue", params={"size": 1})
        save("continue_advance", r.status_code, r.json())

        # label every investigated size-2 pattern without naming new sugars
        r = client.get("/api/patterns", params={"size": 2, "investigated": True})
        for payload in r.json():
            ok = client.post("/api/labels", json={
                "pattern_id": payload["pattern"]["id"], "sugarable": False,
                "sugar_name": None, "notes": "", "labeler": "recorder",
            })
            assert ok.status_code == 201
        r = client.get("/api/continue", params={"size": 2})
        save("continue_stop", r.status_code, r.json())

        r = client.get("/api/metrics")
        save("metrics_after_labels", r.status_code, r.json())

        # a size-2 pattern with witnesses, for snippet rendering
        r = client.get("/api/patterns", params={"size": 2})
        with_witness = next(p for p in r.json() if p["pattern"]["witnesses"])
        save("pattern_with_witness", 200, with_witness)
        ex = client.get(f"/api/patterns/{with_witness['pattern']['id']}/examples")
        save("examples", ex.status_code, ex.json())


if __name__ == "__main__":
    main()
