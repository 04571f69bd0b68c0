"""SQLite-backed persistence for feed items and outbreak events.

Single-writer, many-reader contract: commands take an advisory lock around
mutation; queries read a consistent snapshot per statement.
"""
from __future__ import annotations

import json
import sqlite3
from dataclasses import dataclass
from datetime import date, datetime, timedelta, timezone
from pathlib import Path

from .event_extract import OutbreakEvent, merge_drafts
from .feed_ingest import FeedItem, Flag

DEFAULT_RETAIN_DAYS = 90


@dataclass(frozen=True)
class EventQuery:
    disease_id: str | None = None
    city_id: str | None = None
    days_back: int = DEFAULT_RETAIN_DAYS
    as_of: datetime | None = None

    def __post_init__(self):
        if self.days_back < 1:
            raise ValueError("days_back must be >= 1")


def _now() -> datetime:
    return datetime.now(timezone.utc)


class ItemStore:
    """Feed items keyed by access_no with the NEW/PROCESSED flag."""

    SCHEMA = """
        CREATE TABLE IF NOT EXISTS items (
            access_no   TEXT PRIMARY KEY,
            source_id   TEXT NOT NULL,
            title       TEXT NOT NULL,
            description TEXT NOT NULL,
            link        TEXT NOT NULL,
            published   TEXT NOT NULL,
            fetched_at  TEXT NOT NULL,
            flag        INTEGER NOT NULL CHECK (flag IN (0, 1))
        )
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(str(self.path), check_same_thread=False)
        with self._conn:
            self._conn.execute(self.SCHEMA)

    def close(self) -> None:
        self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def ingest(self, items: list[FeedItem]) -> int:
        """Store items whose access_no is unseen, flag=NEW. Returns the count
        stored. A re-ingest that adds nothing performs no write at all, so the
        store file stays byte-identical."""
        known = {row[0] for row in self._conn.execute("SELECT access_no FROM items")}
        fresh = []
        seen_batch: set[str] = set()
        for it in items:
            if it.access_no in known or it.access_no in seen_batch:
                continue
            seen_batch.add(it.access_no)
            fresh.append(it)
        if not fresh:
            return 0
        with self._conn:
            self._conn.executemany(
                "INSERT INTO items VALUES (?,?,?,?,?,?,?,?)",
                [(it.access_no, it.source_id, it.title, it.description, it.link,
                  it.published.isoformat(), it.fetched_at.isoformat(), int(Flag.NEW))
                 for it in fresh])
        return len(fresh)

    def new_items(self) -> list[FeedItem]:
        rows = self._conn.execute(
            "SELECT access_no, source_id, title, description, link, published, "
            "fetched_at, flag FROM items WHERE flag = ? ORDER BY rowid", (int(Flag.NEW),))
        return [self._row_to_item(r) for r in rows]

    def mark_processed(self, access_no: str) -> None:
        with self._conn:
            self._conn.execute("UPDATE items SET flag = ? WHERE access_no = ?",
                               (int(Flag.PROCESSED), access_no))

    def count(self) -> int:
        return self._conn.execute("SELECT COUNT(*) FROM items").fetchone()[0]

    @staticmethod
    def _row_to_item(row) -> FeedItem:
        return FeedItem(
            access_no=row[0], source_id=row[1], title=row[2], description=row[3],
            link=row[4], published=datetime.fromisoformat(row[5]),
            fetched_at=datetime.fromisoformat(row[6]), flag=Flag(row[7]))


class EventStore:
    """Outbreak events with monotonically increasing ids and 90-day retention."""

    SCHEMA = """
        CREATE TABLE IF NOT EXISTS events (
            event_id    INTEGER PRIMARY KEY AUTOINCREMENT,
            disease_id  TEXT NOT NULL,
            city_id     TEXT NOT NULL,
            lat         REAL NOT NULL,
            lon         REAL NOT NULL,
            event_date  TEXT NOT NULL,
            links       TEXT NOT NULL,
            item_refs   TEXT NOT NULL,
            detected_at TEXT NOT NULL
        )
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._conn = sqlite3.connect(str(self.path), check_same_thread=False)
        with self._conn:
            self._conn.execute(self.SCHEMA)

    def close(self) -> None:
        self._conn.close()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def put_event(self, e: OutbreakEvent) -> int:
        with self._conn:
            cur = self._conn.execute(
                "INSERT INTO events (disease_id, city_id, lat, lon, event_date, "
                "links, item_refs, detected_at) VALUES (?,?,?,?,?,?,?,?)",
                (e.disease_id, e.city_id, e.lat, e.lon, e.event_date.isoformat(),
                 json.dumps(list(e.links)), json.dumps(list(e.item_refs)),
                 e.detected_at.isoformat()))
        return cur.lastrowid

    def get(self, event_id: int) -> OutbreakEvent | None:
        row = self._conn.execute(
            "SELECT * FROM events WHERE event_id = ?", (event_id,)).fetchone()
        return self._row_to_event(row) if row else None

    def find_duplicate(self, disease_id: str, city_id: str, event_date: date,
                       window_days: int) -> OutbreakEvent | None:
        lo = (event_date - timedelta(days=window_days)).isoformat()
        hi = (event_date + timedelta(days=window_days)).isoformat()
        row = self._conn.execute(
            "SELECT * FROM events WHERE disease_id = ? AND city_id = ? "
            "AND event_date BETWEEN ? AND ? ORDER BY event_id LIMIT 1",
            (disease_id, city_id, lo, hi)).fetchone()
        return self._row_to_event(row) if row else None

    def merge_into(self, existing: OutbreakEvent, draft: OutbreakEvent) -> OutbreakEvent:
        merged = merge_drafts(existing, draft)
        with self._conn:
            self._conn.execute(
                "UPDATE events SET links = ?, item_refs = ?, event_date = ? "
                "WHERE event_id = ?",
                (json.dumps(list(merged.links)), json.dumps(list(merged.item_refs)),
                 merged.event_date.isoformat(), existing.event_id))
        return merged

    def query(self, q: EventQuery) -> list[OutbreakEvent]:
        as_of = q.as_of or _now()
        lo = (as_of.date() - timedelta(days=q.days_back)).isoformat()
        hi = as_of.date().isoformat()
        sql = "SELECT * FROM events WHERE event_date BETWEEN ? AND ?"
        args: list = [lo, hi]
        if q.disease_id:
            sql += " AND disease_id = ?"
            args.append(q.disease_id)
        if q.city_id:
            sql += " AND city_id = ?"
            args.append(q.city_id)
        sql += " ORDER BY event_date DESC, event_id DESC"
        return [self._row_to_event(r) for r in self._conn.execute(sql, args)]

    def purge_expired(self, as_of: datetime | None = None,
                      retain_days: int = DEFAULT_RETAIN_DAYS) -> int:
        as_of = as_of or _now()
        cutoff = (as_of.date() - timedelta(days=retain_days)).isoformat()
        with self._conn:
            cur = self._conn.execute("DELETE FROM events WHERE event_date < ?", (cutoff,))
        return cur.rowcount

    def dump(self, fp) -> int:
        """Write every event as one JSON object per line; returns the count."""
        n = 0
        for row in self._conn.execute("SELECT * FROM events ORDER BY event_id"):
            e = self._row_to_event(row)
            fp.write(json.dumps({
                "event_id": e.event_id,
                "disease_id": e.disease_id,
                "city_id": e.city_id,
                "lat": e.lat,
                "lon": e.lon,
                "event_date": e.event_date.isoformat(),
                "links": list(e.links),
                "item_refs": list(e.item_refs),
                "detected_at": e.detected_at.isoformat(),
            }, ensure_ascii=False) + "\n")
            n += 1
        return n

    @staticmethod
    def _row_to_event(row) -> OutbreakEvent:
        return OutbreakEvent(
            event_id=row[0], disease_id=row[1], city_id=row[2], lat=row[3],
            lon=row[4], event_date=date.fromisoformat(row[5]),
            links=tuple(json.loads(row[6])), item_refs=tuple(json.loads(row[7])),
            detected_at=datetime.fromisoformat(row[8]))
