"""RSS 2.0 fetching and parsing for the configured Urdu news sources."""
from __future__ import annotations

import hashlib
import html
import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime, timezone
from email.utils import parsedate_to_datetime
from enum import IntEnum
from pathlib import Path

import requests

DEFAULT_POLL_INTERVAL_HOURS = 24
DEFAULT_TIMEOUT_S = 10.0

_TAG_RE = re.compile(r"<[^>]+>")
_URL_RE = re.compile(r"^https?://\S+$")


class Flag(IntEnum):
    PROCESSED = 0
    NEW = 1


@dataclass(frozen=True)
class FeedSource:
    source_id: str
    name: str
    url: str
    poll_interval_hours: int = DEFAULT_POLL_INTERVAL_HOURS

    def __post_init__(self):
        if not _URL_RE.match(self.url):
            raise ValueError("invalid feed url: %r" % self.url)


@dataclass(frozen=True)
class FeedItem:
    access_no: str
    source_id: str
    title: str
    description: str
    link: str
    published: datetime
    fetched_at: datetime
    flag: Flag = Flag.NEW


class FeedParseError(ValueError):
    def __init__(self, message: str, byte_offset: int | None = None):
        if byte_offset is not None:
            message = "%s (byte offset %d)" % (message, byte_offset)
        super().__init__(message)
        self.byte_offset = byte_offset


class FetchError(RuntimeError):
    def __init__(self, source_id: str, message: str):
        super().__init__("source %s: %s" % (source_id, message))
        self.source_id = source_id


def _strip_markup(text: str | None) -> str:
    """Drop HTML/XML tags and decode entities; whitespace is normalized."""
    if not text:
        return ""
    text = _TAG_RE.sub(" ", text)
    text = html.unescape(text)
    return re.sub(r"\s+", " ", text).strip()


def _byte_offset(xml_text: str, position: tuple[int, int]) -> int:
    line, col = position
    lines = xml_text.split("\n")
    prefix = "\n".join(lines[: line - 1])
    offset = len(prefix.encode("utf-8"))
    if line > 1:
        offset += 1
    offset += len(lines[line - 1][:col].encode("utf-8")) if line - 1 < len(lines) else 0
    return offset


def access_no_for(guid: str, link: str, title: str, pubdate_raw: str) -> str:
    """Dedup key: RSS guid, else link, else a hash of title+pubDate."""
    if guid:
        return guid
    if link:
        return link
    digest = hashlib.sha256((title + "\n" + pubdate_raw).encode("utf-8")).hexdigest()
    return "sha256:" + digest


def parse_rss(xml_text: str, source_id: str, fetched_at: datetime) -> list[FeedItem]:
    """Parse one RSS 2.0 document into FeedItems, in document order."""
    try:
        root = ET.fromstring(xml_text)
    except ET.ParseError as exc:
        offset = _byte_offset(xml_text, exc.position) if exc.position else None
        raise FeedParseError("malformed XML: %s" % exc.msg, offset)
    channel = root.find("channel")
    if channel is None:
        raise FeedParseError("no <channel> element in feed")

    items: list[FeedItem] = []
    for el in channel.findall("item"):
        title = _strip_markup(el.findtext("title"))
        if not title:
            continue
        description = _strip_markup(el.findtext("description"))
        link = (el.findtext("link") or "").strip()
        guid = (el.findtext("guid") or "").strip()
        pubdate_raw = (el.findtext("pubDate") or "").strip()
        published = fetched_at
        if pubdate_raw:
            try:
                published = parsedate_to_datetime(pubdate_raw)
                if published.tzinfo is None:
                    published = published.replace(tzinfo=timezone.utc)
            except (TypeError, ValueError):
                published = fetched_at
        items.append(FeedItem(
            access_no=access_no_for(guid, link, title, pubdate_raw),
            source_id=source_id,
            title=title,
            description=description,
            link=link,
            published=published,
            fetched_at=fetched_at,
            flag=Flag.NEW,
        ))
    return items


def fetch_source(source: FeedSource, timeout: float = DEFAULT_TIMEOUT_S,
                 now: datetime | None = None) -> list[FeedItem]:
    """HTTP GET one feed and parse it. Failures raise FetchError carrying the
    source_id so a bad source never aborts the others."""
    now = now or datetime.now(timezone.utc)
    try:
        resp = requests.get(source.url, timeout=timeout)
    except requests.RequestException as exc:
        raise FetchError(source.source_id, str(exc))
    if not 200 <= resp.status_code < 300:
        raise FetchError(source.source_id, "HTTP %d" % resp.status_code)
    resp.encoding = resp.encoding or "utf-8"
    try:
        return parse_rss(resp.text, source.source_id, now)
    except FeedParseError as exc:
        raise FetchError(source.source_id, str(exc))


def load_sources(path: str | Path) -> list[FeedSource]:
    """Source config: one `source_id<TAB>name<TAB>url` record per line, `#` comments."""
    sources: list[FeedSource] = []
    seen: set[str] = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError("%s:%d: expected source_id<TAB>name<TAB>url" % (path, lineno))
        source_id, name, url = fields
        if source_id in seen:
            raise ValueError("%s:%d: duplicate source_id %r" % (path, lineno, source_id))
        seen.add(source_id)
        sources.append(FeedSource(source_id, name, url))
    return sources
