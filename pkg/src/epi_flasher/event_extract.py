"""Turn NEW feed items into outbreak events: disease/city matching with
description fallback, then cross-source deduplication."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from datetime import date, datetime, timezone
from typing import TYPE_CHECKING

from .feed_ingest import FeedItem
from .lexicons import LexiconSet, geo_of, match_city, match_disease
from .tokenize_filter import prepare

if TYPE_CHECKING:
    from .store import EventStore

log = logging.getLogger(__name__)

DEFAULT_DEDUP_WINDOW_DAYS = 2


@dataclass(frozen=True)
class OutbreakEvent:
    disease_id: str
    city_id: str
    lat: float
    lon: float
    event_date: date
    links: tuple[str, ...]
    item_refs: tuple[str, ...]
    detected_at: datetime
    event_id: int | None = None


@dataclass
class ExtractResult:
    drafts: list[OutbreakEvent] = field(default_factory=list)
    disease_without_location: bool = False


def extract_events(item: FeedItem, lex: LexiconSet,
                   now: datetime | None = None) -> ExtractResult:
    """Match diseases in the title; cities in the title, else the description.

    Multiple matches emit the cross product, one draft per (disease, city)
    pair. A disease with no locatable city is logged and dropped so the count
    stays auditable.
    """
    now = now or datetime.now(timezone.utc)
    title_tokens = prepare(item.title, lex, item.access_no)
    diseases = match_disease(title_tokens, lex)
    if not diseases:
        return ExtractResult()

    cities = match_city(title_tokens, lex)
    if not cities and item.description:
        desc_tokens = prepare(item.description, lex, item.access_no)
        cities = match_city(desc_tokens, lex)
    if not cities:
        log.info("disease-without-location: item %s (%s)",
                 item.access_no, ",".join(d.disease_id for d, _ in diseases))
        return ExtractResult(disease_without_location=True)

    drafts = []
    for disease, _ in diseases:
        for city, _ in cities:
            lat, lon = geo_of(city)
            drafts.append(OutbreakEvent(
                disease_id=disease.disease_id,
                city_id=city.city_id,
                lat=lat,
                lon=lon,
                event_date=item.published.date(),
                links=(item.link,) if item.link else (),
                item_refs=(item.access_no,),
                detected_at=now,
            ))
    return ExtractResult(drafts=drafts)


def dedup_events(drafts: list[OutbreakEvent], store: "EventStore",
                 window_days: int = DEFAULT_DEDUP_WINDOW_DAYS) -> tuple[int, int]:
    """Store drafts, merging any whose (disease, city) matches an existing
    event within the date window. Returns (stored, merged)."""
    stored = merged = 0
    for draft in drafts:
        existing = store.find_duplicate(draft.disease_id, draft.city_id,
                                        draft.event_date, window_days)
        if existing is None:
            store.put_event(draft)
            stored += 1
        else:
            store.merge_into(existing, draft)
            merged += 1
    return stored, merged


def merge_drafts(existing: OutbreakEvent, draft: OutbreakEvent) -> OutbreakEvent:
    """Merge a duplicate draft into an existing event: union links/item_refs
    in arrival order, keep the earliest event_date."""
    links = list(existing.links)
    refs = list(existing.item_refs)
    for link, ref in zip(draft.links, draft.item_refs):
        if ref not in refs:
            refs.append(ref)
            links.append(link)
    return replace(existing,
                   links=tuple(links),
                   item_refs=tuple(refs),
                   event_date=min(existing.event_date, draft.event_date))
