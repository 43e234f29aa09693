from __future__ import annotations

import json
from datetime import datetime, timezone

import pytest

from affekt.store import QueryFilter, Store, StoreError, open_store


def test_empty_root(tmp_path):
    store = open_store(tmp_path)
    assert store.runs == {}
    assert store.latest_complete() is None


def test_missing_root_fatal(tmp_path):
    with pytest.raises(StoreError):
        open_store(tmp_path / "absent")


def test_complete_fixture_run_indexed(fixture_store):
    store = open_store(fixture_store["root"])
    assert len(store.complete_runs()) == 1
    manifest = store.latest_complete()
    assert manifest.status == "complete"
    assert manifest.succeeded == 1000
    assert len(store.records) == 1000


def test_truncated_annotations_surface_as_failed(fixture_store, tmp_path):
    import shutil

    root = tmp_path / "store"
    shutil.copytree(fixture_store["root"], root)
    run_dir = next((root / "runs").iterdir())
    ann_path = run_dir / "annotations.jsonl"
    lines = ann_path.read_text(encoding="utf-8").splitlines()
    ann_path.write_text("\n".join(lines[:500]) + "\n", encoding="utf-8")

    store = open_store(root)
    assert store.complete_runs() == []
    run = next(iter(store.runs.values()))
    assert run.status == "failed"


def test_unreadable_manifest_listed_failed(fixture_store, tmp_path):
    import shutil

    root = tmp_path / "store"
    shutil.copytree(fixture_store["root"], root)
    run_dir = next((root / "runs").iterdir())
    (run_dir / "manifest.json").write_text("{broken", encoding="utf-8")
    store = open_store(root)
    assert all(m.status == "failed" for m in store.runs.values())


class TestQueryHeadlines:
    def test_default_page_is_most_recent(self, fixture_store):
        store = open_store(fixture_store["root"])
        page = store.query_headlines(QueryFilter(limit=10))
        assert len(page["items"]) == 10
        stamps = [item["published_at"] for item in page["items"]]
        assert stamps == sorted(stamps, reverse=True)

    def test_stable_order_and_pagination_partition(self, fixture_store):
        store = open_store(fixture_store["root"])
        seen = []
        offset = 0
        while True:
            page = store.query_headlines(QueryFilter(limit=200, offset=offset))
            if not page["items"]:
                break
            seen.extend(item["record_id"] for item in page["items"])
            offset += 200
        assert len(seen) == len(set(seen)) == 1000

        again = open_store(fixture_store["root"]).query_headlines(
            QueryFilter(limit=200)
        )
        assert [i["record_id"] for i in again["items"]] == seen[:200]

    def test_label_filter_matches_fixture_ground_truth(self, fixture_store):
        store = open_store(fixture_store["root"])
        expected = {
            a.record_id for a in fixture_store["annotations"] if a.dominant == "fear"
        }
        page = store.query_headlines(QueryFilter(label="fear", limit=1000))
        assert {i["record_id"] for i in page["items"]} == expected

    def test_coarse_filter(self, fixture_store, taxonomy):
        store = open_store(fixture_store["root"])
        expected = {
            a.record_id
            for a in fixture_store["annotations"]
            if taxonomy.coarse_of(a.dominant) == "sadness"
        }
        page = store.query_headlines(QueryFilter(coarse="sadness", limit=1000))
        assert {i["record_id"] for i in page["items"]} == expected

    def test_outlet_and_date_filters_conjunctive(self, fixture_store):
        store = open_store(fixture_store["root"])
        cutoff = datetime(2026, 6, 15, tzinfo=timezone.utc)
        page = store.query_headlines(
            QueryFilter(outlet="Ittefaq", date_from=cutoff, limit=1000)
        )
        for item in page["items"]:
            assert item["outlet"] == "Ittefaq"
            assert datetime.fromisoformat(item["published_at"]) >= cutoff

    def test_unknown_outlet_gives_empty_page(self, fixture_store):
        store = open_store(fixture_store["root"])
        page = store.query_headlines(QueryFilter(outlet="Nonexistent"))
        assert page["items"] == []
        assert page["total"] == 0

    def test_offset_beyond_end(self, fixture_store):
        store = open_store(fixture_store["root"])
        page = store.query_headlines(QueryFilter(limit=10, offset=5000))
        assert page["items"] == []

    def test_limit_bounds_enforced(self, fixture_store):
        store = open_store(fixture_store["root"])
        for bad in (0, 1001, -5):
            with pytest.raises(ValueError):
                store.query_headlines(QueryFilter(limit=bad))

    def test_fine_label_rejected_as_coarse(self, fixture_store):
        store = open_store(fixture_store["root"])
        with pytest.raises(ValueError):
            store.query_headlines(QueryFilter(coarse="disappointment"))


class TestAggregates:
    def test_all_five_present(self, fixture_store):
        store = open_store(fixture_store["root"])
        run = store.latest_complete()
        agg = store.load_aggregates(run.run_id)
        assert agg.missing == []
        for name in ("distribution", "profiles", "polarization", "trends", "matches"):
            assert agg.get(name) is not None

    def test_missing_artifact_flagged(self, fixture_store, tmp_path):
        import shutil

        root = tmp_path / "store"
        shutil.copytree(fixture_store["root"], root)
        run_dir = next((root / "runs").iterdir())
        (run_dir / "metrics" / "matches.json").unlink()
        store = open_store(root)
        agg = store.load_aggregates(store.latest_complete().run_id)
        assert agg.matches is None
        assert agg.missing == ["matches"]
        assert agg.distribution is not None

    def test_tampered_share_fails_schema(self, fixture_store, tmp_path):
        import shutil

        root = tmp_path / "store"
        shutil.copytree(fixture_store["root"], root)
        run_dir = next((root / "runs").iterdir())
        path = run_dir / "metrics" / "profiles.json"
        doc = json.loads(path.read_text(encoding="utf-8"))
        first_profile = doc["profiles"][0]
        key = next(iter(first_profile["distribution"]["shares"]))
        first_profile["distribution"]["shares"][key] = 1.7
        path.write_text(json.dumps(doc), encoding="utf-8")

        store = open_store(root)
        with pytest.raises(StoreError) as err:
            store.load_aggregates(store.latest_complete().run_id)
        assert "shares" in str(err.value)
