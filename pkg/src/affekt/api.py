"""Read-only HTTP API over a store: the backend for the dashboard views.

All routes live under ``/v1`` and serve JSON. Numbers come straight from
metric artifacts or the joined store rows; the only computation done here is
filtering, pagination, and windowed means. Responses are schema-stable
(contract-tested against the committed route schemas).
"""
from __future__ import annotations

from collections import Counter
from datetime import datetime, timedelta, timezone
from typing import Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .metrics import rolling_mean
from .store import Aggregates, QueryFilter, Store, StoreError
from .taxonomy import COARSE_CLASSES


class _BadParameter(Exception):
    def __init__(self, parameter: str, detail: str):
        self.parameter = parameter
        self.detail = detail


def _no_data(detail: str = "no complete runs available") -> JSONResponse:
    return JSONResponse(status_code=404, content={"error": "no_data", "detail": detail})


def _not_found(detail: str) -> JSONResponse:
    return JSONResponse(status_code=404, content={"error": "not_found", "detail": detail})


def _parse_int(value: str, parameter: str, default: int) -> int:
    if value is None or value == "":
        return default
    try:
        return int(value)
    except ValueError:
        raise _BadParameter(parameter, f"expected an integer, got {value!r}") from None


def _parse_date(value: Optional[str], parameter: str, end_of_day: bool = False) -> Optional[datetime]:
    """ISO date or datetime; bare dates map to day start (or end for 'to')."""
    if value is None or value == "":
        return None
    try:
        dt = datetime.fromisoformat(value.replace("Z", "+00:00"))
    except ValueError:
        raise _BadParameter(parameter, f"expected ISO-8601 date, got {value!r}") from None
    date_only = len(value) == 10
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    if date_only and end_of_day:
        dt = dt + timedelta(days=1) - timedelta(microseconds=1)
    return dt


def create_app(store: Store) -> FastAPI:
    app = FastAPI(title="affekt API", version="1")
    # Read-only GET API; the dashboard is typically served from another
    # origin (static host), so open CORS is safe and necessary.
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["GET"], allow_headers=["*"]
    )

    @app.exception_handler(_BadParameter)
    async def _bad_parameter_handler(request: Request, exc: _BadParameter):
        return JSONResponse(
            status_code=400,
            content={
                "error": "invalid_parameter",
                "parameter": exc.parameter,
                "detail": exc.detail,
            },
        )

    def current_aggregates() -> Optional[tuple[str, Aggregates]]:
        manifest = store.latest_complete()
        if manifest is None:
            return None
        return manifest.run_id, store.load_aggregates(manifest.run_id)

    def filtered_rows(date_from, date_to):
        latest = store.latest_complete()
        if latest is None:
            return None
        rows = store.joined_rows(latest.run_id)
        out = []
        for row in rows:
            if date_from is not None and (
                not row.record.has_timestamp or row.record.published_at < date_from
            ):
                continue
            if date_to is not None and (
                not row.record.has_timestamp or row.record.published_at > date_to
            ):
                continue
            out.append(row)
        return out

    @app.get("/v1/feed/summary")
    def feed_summary(request: Request):
        params = request.query_params
        date_from = _parse_date(params.get("from"), "from")
        date_to = _parse_date(params.get("to"), "to", end_of_day=True)
        rows = filtered_rows(date_from, date_to)
        if rows is None:
            return _no_data()
        current = current_aggregates()
        polarization = current[1].polarization if current else None

        if rows:
            avg_valence = sum(r.affect.valence for r in rows) / len(rows)
            avg_arousal = sum(r.affect.arousal for r in rows) / len(rows)
            coarse_counts = Counter(r.coarse for r in rows)
            dominant = max(
                coarse_counts,
                key=lambda c: (coarse_counts[c], -COARSE_CLASSES.index(c)),
            )
        else:
            avg_valence = avg_arousal = dominant = None
        return {
            "avg_valence": avg_valence,
            "avg_arousal": avg_arousal,
            "dominant_emotion": dominant,
            "api": polarization["api"] if polarization else None,
            "total_headlines": len(rows),
            "window": {
                "from": date_from.isoformat() if date_from else None,
                "to": date_to.isoformat() if date_to else None,
            },
        }

    @app.get("/v1/feed/headlines")
    def feed_headlines(request: Request):
        params = request.query_params
        flt = QueryFilter(
            outlet=params.get("outlet") or None,
            label=params.get("emotion") or None,
            coarse=params.get("coarse") or None,
            date_from=_parse_date(params.get("from"), "from"),
            date_to=_parse_date(params.get("to"), "to", end_of_day=True),
            limit=_parse_int(params.get("limit"), "limit", 50),
            offset=_parse_int(params.get("offset"), "offset", 0),
        )
        try:
            return store.query_headlines(flt)
        except ValueError as exc:
            parameter = "coarse" if "coarse" in str(exc) else (
                "limit" if "limit" in str(exc) else "offset"
            )
            raise _BadParameter(parameter, str(exc)) from None
        except StoreError:
            return _no_data()

    @app.get("/v1/outlets/distribution")
    def outlets_distribution():
        current = current_aggregates()
        if current is None:
            return _no_data()
        profiles = current[1].profiles
        if profiles is None:
            return _no_data("profiles artifact missing for the current run")
        return {
            "outlets": [
                {
                    "outlet": p["outlet"],
                    "item_count": p["item_count"],
                    "counts": p["distribution"]["counts"],
                    "shares": p["distribution"]["shares"],
                }
                for p in profiles["profiles"]
            ]
        }

    @app.get("/v1/trends/intensity")
    def trends_intensity(request: Request):
        window = _parse_int(request.query_params.get("window"), "window", 7)
        if window < 1:
            raise _BadParameter("window", f"window must be >= 1, got {window}")
        current = current_aggregates()
        if current is None:
            return _no_data()
        trends = current[1].trends
        if trends is None:
            return _no_data("trends artifact missing for the current run")
        points = trends["points"]
        rolled_v = rolling_mean([p["mean_valence"] for p in points], window)
        rolled_a = rolling_mean([p["mean_arousal"] for p in points], window)
        return {
            "window": window,
            "bucket": trends["bucket"],
            "points": [
                {**point, "rolling_valence": rv, "rolling_arousal": ra}
                for point, rv, ra in zip(points, rolled_v, rolled_a)
            ],
        }

    @app.get("/v1/polarization")
    def polarization():
        current = current_aggregates()
        if current is None:
            return _no_data()
        artifact = current[1].polarization
        if artifact is None:
            return _no_data("polarization artifact missing for the current run")
        return artifact

    @app.get("/v1/headline/{record_id}")
    def headline_detail(record_id: str, request: Request):
        full = request.query_params.get("full", "").lower() in ("1", "true", "yes")
        try:
            row = store.get_row(record_id)
        except StoreError:
            return _no_data()
        if row is None:
            return _not_found(f"no headline with id {record_id!r}")

        probs = row.annotation.probabilities
        entries = sorted(probs.items(), key=lambda kv: (-kv[1], kv[0]))
        if not full:
            entries = [(label, p) for label, p in entries if p > 0][:3]
        breakdown = [{"label": label, "percent": p * 100.0} for label, p in entries]

        cross = []
        current = current_aggregates()
        matches = current[1].matches if current else None
        if matches is not None:
            for group in matches["groups"]:
                if record_id not in group["record_ids"]:
                    continue
                for other_id in group["record_ids"]:
                    if other_id == record_id:
                        continue
                    other = store.get_row(other_id)
                    if other is None:
                        continue
                    cross.append(
                        {
                            "outlet": other.record.outlet,
                            "record_id": other_id,
                            "dominant": other.annotation.dominant,
                            "valence": other.affect.valence,
                            "arousal": other.affect.arousal,
                        }
                    )
                break
        cross.sort(key=lambda c: (c["outlet"], c["record_id"]))

        return {
            "record": {
                "record_id": row.record.record_id,
                "outlet": row.record.outlet,
                "published_at": row.record.published_at.isoformat()
                if row.record.has_timestamp
                else None,
                "section": row.record.section,
                "headline": row.record.headline,
            },
            "affect": {"valence": row.affect.valence, "arousal": row.affect.arousal},
            "breakdown": breakdown,
            "cross_outlet": cross,
        }

    return app
