#!/usr/bin/env python3
"""Record golden HTTP bodies from a live service for the UI test suite.

Run from the repository root after changing anything that affects response
bytes: python frontend/scripts/make_goldens.py
"""

import json
import pathlib
import urllib.request

from cherrypick.service import BoundService

ADVERSE_EVENTS = [
    ("Anemia", 0.02), ("Myocardial-infarct", 0.03), ("Diarrhea", 0.04),
    ("Nausea-and-vomiting", 0.04), ("Stomatitis", 0.08), ("Skin-rash", 0.10),
    ("Dehydration", 0.12), ("Shortness-of-breath", 0.18),
    ("Renal-failure", 0.20), ("Fever", 0.23), ("Blurred-vision", 0.26),
    ("Nose-bleed", 0.28), ("Anorexia", 0.30), ("Bronchitis", 0.31),
    ("Wheezing", 0.40), ("Headache", 0.50),
]

GASTRO = "Diarrhea,Nausea-and-vomiting,Stomatitis"

OUT = pathlib.Path(__file__).resolve().parent.parent / "tests" / "goldens"


def fetch(base, path, payload=None):
    data = json.dumps(payload).encode() if payload is not None else None
    req = urllib.request.Request(base + path, data=data,
                                 method="POST" if data else "GET")
    if data:
        req.add_header("Content-Type", "application/json")
    with urllib.request.urlopen(req) as resp:
        return resp.read()


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    svc = BoundService(port=0, quiet=True).start()
    try:
        base = svc.base_url
        created = fetch(base, "/sessions", {
            "hypotheses": {
                "names": [n for n, _ in ADVERSE_EVENTS],
                "pvalues": [p for _, p in ADVERSE_EVENTS],
            },
            "test": {"kind": "fisher"},
            "alpha": 0.05,
        })
        sid = json.loads(created)["id"]
        goldens = {
            "bound_gastro.json": f"/sessions/{sid}/bound?set={GASTRO}",
            "bound_top6.json": f"/sessions/{sid}/bound?set=top:6",
            "curve.json": f"/sessions/{sid}/curve",
            "defining.json": f"/sessions/{sid}/defining",
            "estimate_top16.json": f"/sessions/{sid}/estimate?set=top:16",
            "snapshot.json": f"/sessions/{sid}/snapshot",
        }
        for fname, path in goldens.items():
            body = fetch(base, path)
            (OUT / fname).write_bytes(body)
            print(f"wrote {fname} ({len(body)} bytes)")
    finally:
        svc.shutdown()


if __name__ == "__main__":
    main()
