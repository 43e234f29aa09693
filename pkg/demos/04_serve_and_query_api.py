#!/usr/bin/env python3
"""Serve a fixture store over HTTP and query every /v1 route.

Builds a complete store root (corpus + finished run + metric artifacts) in a
temp directory, starts the API with uvicorn on an ephemeral port, and walks
the six routes the dashboard consumes.

Run:  python3 demos/04_serve_and_query_api.py
"""
import socket
import tempfile
import threading
import time

import requests
import uvicorn

from affekt.api import create_app
from affekt.sampledata import build_fixture_store
from affekt.store import open_store

workdir = tempfile.mkdtemp()
print("building fixture store (1,000 records, 4 outlets)...")
fixture = build_fixture_store(workdir, n=1000, seed=7)
store = open_store(fixture["root"])
app = create_app(store)

with socket.socket() as sock:
    sock.bind(("127.0.0.1", 0))
    port = sock.getsockname()[1]
server = uvicorn.Server(uvicorn.Config(app, host="127.0.0.1", port=port, log_level="warning"))
threading.Thread(target=server.run, daemon=True).start()
while not server.started:
    time.sleep(0.05)
base = f"http://127.0.0.1:{port}/v1"
print(f"serving at {base}\n")

summary = requests.get(f"{base}/feed/summary").json()
print("GET /v1/feed/summary")
print(f"  {summary['total_headlines']} headlines, "
      f"avg valence {summary['avg_valence']:+.3f}, "
      f"avg arousal {summary['avg_arousal']:.3f}, "
      f"dominant class {summary['dominant_emotion']}, "
      f"polarization index {summary['api']:.4f}")

page = requests.get(f"{base}/feed/headlines", params={"limit": 3}).json()
print("\nGET /v1/feed/headlines?limit=3")
for item in page["items"]:
    print(f"  [{item['outlet']:12}] {item['headline'][:40]:40} "
          f"{item['dominant']:14} v={item['valence']:+.2f}")

dist = requests.get(f"{base}/outlets/distribution").json()
print("\nGET /v1/outlets/distribution")
for outlet in dist["outlets"]:
    top = max(outlet["shares"], key=outlet["shares"].get)
    print(f"  {outlet['outlet']:14} items={outlet['item_count']:<5} top class: {top}")

trends = requests.get(f"{base}/trends/intensity", params={"window": 7}).json()
print(f"\nGET /v1/trends/intensity?window=7 -> {len(trends['points'])} daily points")

polar = requests.get(f"{base}/polarization").json()
print("\nGET /v1/polarization")
print(f"  outlets: {polar['outlets']}")
print(f"  api={polar['api']:.4f} fine_jsd_mean={polar['fine_jsd_mean']:.4f} "
      f"matched stories={polar['matched_story_count']}")

record_id = page["items"][0]["record_id"]
detail = requests.get(f"{base}/headline/{record_id}").json()
print(f"\nGET /v1/headline/{record_id}")
print(f"  {detail['record']['headline'][:60]}")
for part in detail["breakdown"]:
    print(f"    {part['label']:<16} {part['percent']:5.1f}%")
print(f"  cross-outlet coverage: "
      f"{len(detail['cross_outlet'])} related item(s) from other outlets")

bad = requests.get(f"{base}/feed/headlines", params={"from": "not-a-date"})
print(f"\nmalformed date -> HTTP {bad.status_code}: {bad.json()}")

server.should_exit = True
print("\ndone.")
