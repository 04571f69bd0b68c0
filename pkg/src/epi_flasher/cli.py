"""Command-line entry points: fetch, process, serve, eval, purge, dump."""
from __future__ import annotations

import fcntl
import logging
import sys
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path

import click

from . import event_extract, eval_harness, feed_ingest
from .lexicons import LexiconError, load_lexicons
from .store import DEFAULT_RETAIN_DAYS, EventStore, ItemStore

log = logging.getLogger("epi_flasher")

ITEMS_DB = "items.db"
EVENTS_DB = "events.db"


@dataclass
class Config:
    data_dir: Path = Path("data")
    listen_addr: str = "127.0.0.1:8080"
    dedup_window_days: int = event_extract.DEFAULT_DEDUP_WINDOW_DAYS
    retention_days: int = DEFAULT_RETAIN_DAYS
    sources_file: Path | None = None
    lexicon_dir: Path | None = None
    sources: list = field(default_factory=list)


def load_config(path: str | None, data_dir: str | None) -> Config:
    cfg = Config()
    if path:
        try:
            raw = tomllib.loads(Path(path).read_text(encoding="utf-8"))
        except (OSError, tomllib.TOMLDecodeError) as exc:
            raise click.UsageError("config: %s" % exc)
        base = Path(path).parent
        if "data_dir" in raw:
            cfg.data_dir = base / raw["data_dir"]
        cfg.listen_addr = raw.get("listen_addr", cfg.listen_addr)
        cfg.dedup_window_days = int(raw.get("dedup_window_days", cfg.dedup_window_days))
        cfg.retention_days = int(raw.get("retention_days", cfg.retention_days))
        if "sources_file" in raw:
            cfg.sources_file = base / raw["sources_file"]
        if "lexicon_dir" in raw:
            cfg.lexicon_dir = base / raw["lexicon_dir"]
    if data_dir:
        cfg.data_dir = Path(data_dir)
    if cfg.sources_file:
        try:
            cfg.sources = feed_ingest.load_sources(cfg.sources_file)
        except (OSError, ValueError) as exc:
            raise click.UsageError("sources: %s" % exc)
    return cfg


class StoreLock:
    """Advisory lock so mutating commands are mutually exclusive on a data dir."""

    def __init__(self, data_dir: Path):
        data_dir.mkdir(parents=True, exist_ok=True)
        self._fh = open(data_dir / ".lock", "w")

    def __enter__(self):
        fcntl.flock(self._fh, fcntl.LOCK_EX)
        return self

    def __exit__(self, *exc):
        fcntl.flock(self._fh, fcntl.LOCK_UN)
        self._fh.close()


def _common(fn):
    fn = click.option("--config", "config_path", type=click.Path(), default=None,
                      help="TOML config file")(fn)
    fn = click.option("--data-dir", type=click.Path(), default=None,
                      help="override data directory")(fn)
    return fn


@click.group()
def main() -> None:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@_common
@click.option("--loop", "loop_hours", type=float, default=None,
              help="repeat the fetch every N hours instead of running once")
def fetch(config_path, data_dir, loop_hours) -> None:
    """Fetch all configured feeds and ingest new items."""
    cfg = load_config(config_path, data_dir)
    if not cfg.sources:
        raise click.ClickException("no sources configured")
    while True:
        failures = _fetch_once(cfg)
        if failures == len(cfg.sources):
            sys.exit(1)
        if loop_hours is None:
            return
        time.sleep(loop_hours * 3600)


def _fetch_once(cfg: Config) -> int:
    failures = 0
    with StoreLock(cfg.data_dir), ItemStore(cfg.data_dir / ITEMS_DB) as items:
        for source in cfg.sources:
            try:
                parsed = feed_ingest.fetch_source(source)
            except feed_ingest.FetchError as exc:
                failures += 1
                click.echo("%s: FAILED (%s)" % (source.source_id, exc))
                continue
            stored = items.ingest(parsed)
            click.echo("%s: %d new items" % (source.source_id, stored))
    return failures


@main.command()
@_common
def process(config_path, data_dir) -> None:
    """Extract and store outbreak events from every NEW item."""
    cfg = load_config(config_path, data_dir)
    try:
        lex = load_lexicons(cfg.lexicon_dir)
    except LexiconError as exc:
        raise click.UsageError("lexicons: %s" % exc)
    processed = stored = merged = no_location = 0
    with StoreLock(cfg.data_dir), \
            ItemStore(cfg.data_dir / ITEMS_DB) as items, \
            EventStore(cfg.data_dir / EVENTS_DB) as events:
        for item in items.new_items():
            result = event_extract.extract_events(item, lex)
            s, m = event_extract.dedup_events(result.drafts, events,
                                              cfg.dedup_window_days)
            stored += s
            merged += m
            if result.disease_without_location:
                no_location += 1
            items.mark_processed(item.access_no)
            processed += 1
    click.echo("items processed: %d" % processed)
    click.echo("events stored: %d" % stored)
    click.echo("events merged: %d" % merged)
    click.echo("disease-without-location: %d" % no_location)


@main.command()
@_common
def serve(config_path, data_dir) -> None:
    """Run the JSON/GeoJSON query API."""
    import uvicorn

    from .api import create_app

    cfg = load_config(config_path, data_dir)
    lex = load_lexicons(cfg.lexicon_dir)
    store = EventStore(cfg.data_dir / EVENTS_DB)
    host, _, port = cfg.listen_addr.partition(":")
    try:
        uvicorn.run(create_app(store, lex), host=host, port=int(port or 8080),
                    log_level="warning")
    except OSError as exc:
        raise SystemExit("serve: %s" % exc)


@main.command("eval")
@click.option("--gold", "gold_path", type=click.Path(exists=True), required=True)
@click.option("--items", "items_path", type=click.Path(exists=True), required=True,
              help="RSS XML fixture holding the evaluated items")
@click.option("--stages", default="all", help="'all' or comma-separated stage names")
@click.option("--csv", "csv_path", type=click.Path(), default=None)
@click.option("--figure", "figure_path", type=click.Path(), default=None,
              help="render the per-stage metrics chart to this file")
@click.option("--lexicon-dir", type=click.Path(), default=None)
def eval_cmd(gold_path, items_path, stages, csv_path, figure_path, lexicon_dir) -> None:
    """Score pipeline stages against a gold file; print the report table."""
    from datetime import datetime, timezone

    lex = load_lexicons(lexicon_dir)
    gold = eval_harness.load_gold(gold_path)
    xml_text = Path(items_path).read_text(encoding="utf-8")
    items = feed_ingest.parse_rss(xml_text, "eval", datetime.now(timezone.utc))
    if stages.strip().lower() == "all":
        wanted = None
    else:
        wanted = [eval_harness.Stage(s.strip().lower()) for s in stages.split(",")]
    reports = eval_harness.score_all(items, gold, lex, wanted)
    click.echo(eval_harness.render_text(reports))
    if csv_path:
        eval_harness.write_csv(reports, csv_path)
    if figure_path:
        eval_harness.render_figure(reports, figure_path)


@main.command()
@_common
@click.option("--retain-days", type=int, default=None)
def purge(config_path, data_dir, retain_days) -> None:
    """Remove events older than the retention window."""
    cfg = load_config(config_path, data_dir)
    days = retain_days if retain_days is not None else cfg.retention_days
    with StoreLock(cfg.data_dir), EventStore(cfg.data_dir / EVENTS_DB) as events:
        removed = events.purge_expired(retain_days=days)
    click.echo("%d removed" % removed)


@main.command()
@_common
def dump(config_path, data_dir) -> None:
    """Write every stored event to stdout as one JSON object per line."""
    cfg = load_config(config_path, data_dir)
    with EventStore(cfg.data_dir / EVENTS_DB) as events:
        events.dump(sys.stdout)


if __name__ == "__main__":
    main()
