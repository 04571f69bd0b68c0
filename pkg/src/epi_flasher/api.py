"""Read-only HTTP backend: event queries as JSON and GeoJSON."""
from __future__ import annotations

from fastapi import FastAPI, HTTPException, Query
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import PlainTextResponse

from .event_extract import OutbreakEvent
from .lexicons import LexiconSet
from .store import EventQuery, EventStore


def _event_json(e: OutbreakEvent, lex: LexiconSet) -> dict:
    disease = next((d for d in lex.diseases if d.disease_id == e.disease_id), None)
    city = next((c for c in lex.cities if c.city_id == e.city_id), None)
    return {
        "event_id": e.event_id,
        "disease_id": e.disease_id,
        "disease_urdu": disease.urdu_canonical if disease else None,
        "disease_english": disease.english_name if disease else None,
        "city_id": e.city_id,
        "city_urdu": city.urdu_canonical if city else None,
        "city_english": city.english_name if city else None,
        "lat": e.lat,
        "lon": e.lon,
        "event_date": e.event_date.isoformat(),
        "links": list(e.links),
        "item_refs": list(e.item_refs),
        "detected_at": e.detected_at.isoformat(),
    }


def to_geojson(events: list[OutbreakEvent], lex: LexiconSet) -> dict:
    """RFC 7946 FeatureCollection; coordinates are [lon, lat]."""
    features = []
    for e in events:
        props = _event_json(e, lex)
        props.pop("lat")
        props.pop("lon")
        features.append({
            "type": "Feature",
            "geometry": {"type": "Point", "coordinates": [e.lon, e.lat]},
            "properties": props,
        })
    return {"type": "FeatureCollection", "features": features}


def create_app(store: EventStore, lex: LexiconSet) -> FastAPI:
    app = FastAPI(title="epi-flasher", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["GET"])

    disease_ids = {d.disease_id for d in lex.diseases}
    city_ids = {c.city_id for c in lex.cities}

    def _query(disease: str | None, city: str | None, days: int) -> list[OutbreakEvent]:
        if days < 1:
            raise HTTPException(400, "days must be >= 1")
        if disease is not None and disease not in disease_ids:
            raise HTTPException(400, "unknown disease_id: %s" % disease)
        if city is not None and city not in city_ids:
            raise HTTPException(400, "unknown city_id: %s" % city)
        return store.query(EventQuery(disease_id=disease, city_id=city, days_back=days))

    @app.get("/healthz", response_class=PlainTextResponse)
    def healthz() -> str:
        return "ok"

    @app.get("/api/events")
    def events(disease: str | None = Query(None), city: str | None = Query(None),
               days: int = Query(90)) -> dict:
        found = _query(disease, city, days)
        return {"events": [_event_json(e, lex) for e in found]}

    @app.get("/api/events.geojson")
    def events_geojson(disease: str | None = Query(None), city: str | None = Query(None),
                       days: int = Query(90)) -> dict:
        return to_geojson(_query(disease, city, days), lex)

    @app.get("/api/diseases")
    def diseases() -> dict:
        # lexicon echo for UI filter dropdowns
        return {"diseases": [
            {"disease_id": d.disease_id, "urdu": d.urdu_canonical, "english": d.english_name}
            for d in lex.diseases]}

    @app.get("/api/events/{event_id}")
    def event_detail(event_id: int) -> dict:
        e = store.get(event_id)
        if e is None:
            raise HTTPException(404, "no such event")
        return _event_json(e, lex)

    return app
