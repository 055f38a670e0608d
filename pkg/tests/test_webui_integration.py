"""The built web UI served by the real service, exercised end to end.

Skipped until ``npm run build`` has produced ``frontend/dist``.  The
browser-side behavior (debounce, validation gating, rendering) has its
own vitest suite under ``frontend/tests``; here we pin the contract the
UI depends on: static hosting plus the exact payload the form submits.
"""

from pathlib import Path

import pytest
from fastapi.testclient import TestClient

from optionforge.service import create_app

DIST = Path(__file__).resolve().parents[1] / "frontend" / "dist"

pytestmark = pytest.mark.skipif(
    not (DIST / "index.html").exists(), reason="frontend not built (npm run build)"
)


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(assets_dir=DIST))


def test_index_and_module_served(client):
    index = client.get("/")
    assert index.status_code == 200
    assert 'id="app"' in index.text
    assert "main.js" in index.text
    module = client.get("/main.js")
    assert module.status_code == 200
    assert "Calculator" in module.text


def test_api_reachable_alongside_static(client):
    assert client.get("/api/health").status_code == 200


def test_form_payload_round_trip(client):
    # Exactly the body the calculator form submits (method omitted).
    body = {
        "option_type": "put",
        "spot": 100,
        "strike": 120,
        "rate_pct": 2,
        "vol_pct": 0.5,
        "purchase_date": "2014-02-06",
        "expiry_date": "2014-05-06",
    }
    response = client.post("/api/price", json=body)
    assert response.status_code == 200
    payload = response.json()
    assert payload["method"] == "analytic"
    assert payload["price_display"] == "19.42"
    assert payload["inputs"]["time_days"] == 89
    assert payload["price"] >= 0.0
