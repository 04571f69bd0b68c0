import json
import threading
from http.server import BaseHTTPRequestHandler, HTTPServer
from pathlib import Path

import pytest
from click.testing import CliRunner

from epi_flasher.cli import load_config, main
from epi_flasher.lexicons import default_lexicon_dir

from conftest import make_feed, rss_date


@pytest.fixture()
def runner():
    return CliRunner()


class _FeedHandler(BaseHTTPRequestHandler):
    feeds = {}

    def do_GET(self):
        body = self.feeds.get(self.path)
        if body is None:
            self.send_response(404)
            self.end_headers()
            return
        self.send_response(200)
        self.send_header("Content-Type", "application/rss+xml; charset=utf-8")
        self.end_headers()
        self.wfile.write(body.encode())

    def log_message(self, *args):
        pass


@pytest.fixture()
def feed_server():
    server = HTTPServer(("127.0.0.1", 0), _FeedHandler)
    thread = threading.Thread(target=server.serve_forever, daemon=True)
    thread.start()
    yield server
    server.shutdown()
    _FeedHandler.feeds = {}


def _write_sources(path: Path, server, paths):
    lines = ["s%d\tSource %d\thttp://127.0.0.1:%d%s" % (i, i, server.server_port, p)
             for i, p in enumerate(paths)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def test_load_config_defaults():
    cfg = load_config(None, None)
    assert cfg.data_dir == Path("data")
    assert cfg.dedup_window_days == 2
    assert cfg.retention_days == 90


def test_load_config_toml(tmp_path):
    (tmp_path / "cfg.toml").write_text(
        'data_dir = "store"\nlisten_addr = "0.0.0.0:9999"\n'
        "dedup_window_days = 3\nretention_days = 30\n", encoding="utf-8")
    cfg = load_config(str(tmp_path / "cfg.toml"), None)
    assert cfg.data_dir == tmp_path / "store"
    assert cfg.listen_addr == "0.0.0.0:9999"
    assert cfg.dedup_window_days == 3
    assert cfg.retention_days == 30


def test_load_config_data_dir_override(tmp_path):
    (tmp_path / "cfg.toml").write_text('data_dir = "store"\n', encoding="utf-8")
    cfg = load_config(str(tmp_path / "cfg.toml"), str(tmp_path / "other"))
    assert cfg.data_dir == tmp_path / "other"


def test_bad_config_exits_2(runner, tmp_path):
    bad = tmp_path / "cfg.toml"
    bad.write_text("data_dir = [unclosed", encoding="utf-8")
    result = runner.invoke(main, ["purge", "--config", str(bad),
                                  "--data-dir", str(tmp_path / "d")])
    assert result.exit_code == 2


def test_bad_lexicon_dir_exits_2(runner, tmp_path):
    result = runner.invoke(main, ["process", "--data-dir", str(tmp_path / "d"),
                                  "--config", _cfg(tmp_path, lexicon_dir="empty")])
    assert result.exit_code == 2


def _cfg(tmp_path, **extra):
    lines = []
    for key, value in extra.items():
        if key == "lexicon_dir":
            (tmp_path / value).mkdir(exist_ok=True)
            lines.append('lexicon_dir = "%s"' % value)
        else:
            lines.append("%s = %r" % (key, value))
    p = tmp_path / "cfg.toml"
    p.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return str(p)


def test_fetch_without_sources_fails(runner, tmp_path):
    result = runner.invoke(main, ["fetch", "--data-dir", str(tmp_path / "d")])
    assert result.exit_code == 1
    assert "no sources" in result.output


def test_fetch_all_sources_down_exits_1(runner, tmp_path, feed_server):
    _write_sources(tmp_path / "sources.tsv", feed_server, ["/missing"])
    cfg = tmp_path / "cfg.toml"
    cfg.write_text('sources_file = "sources.tsv"\n', encoding="utf-8")
    result = runner.invoke(main, ["fetch", "--config", str(cfg),
                                  "--data-dir", str(tmp_path / "d")])
    assert result.exit_code == 1
    assert "FAILED" in result.output


def test_fetch_process_purge_dump_flow(runner, tmp_path, feed_server, e2e_feeds):
    _FeedHandler.feeds = {"/a": e2e_feeds["A"], "/b": e2e_feeds["B"],
                          "/c": e2e_feeds["C"]}
    _write_sources(tmp_path / "sources.tsv", feed_server, ["/a", "/b", "/c"])
    cfg = tmp_path / "cfg.toml"
    cfg.write_text('sources_file = "sources.tsv"\ndata_dir = "d"\n', encoding="utf-8")

    result = runner.invoke(main, ["fetch", "--config", str(cfg)])
    assert result.exit_code == 0, result.output
    # 6 + 4 + 1: the syndicated guid from channel C is already known
    assert "s0: 6 new items" in result.output
    assert "s1: 4 new items" in result.output
    assert "s2: 1 new items" in result.output

    # a second fetch ingests nothing and leaves the item store byte-identical
    before = (tmp_path / "d" / "items.db").read_bytes()
    result = runner.invoke(main, ["fetch", "--config", str(cfg)])
    assert result.exit_code == 0
    assert "0 new items" in result.output
    assert (tmp_path / "d" / "items.db").read_bytes() == before

    result = runner.invoke(main, ["process", "--config", str(cfg)])
    assert result.exit_code == 0, result.output
    assert "items processed: 11" in result.output
    assert "events stored: 5" in result.output
    assert "events merged: 1" in result.output
    assert "disease-without-location: 2" in result.output

    # processing again is a no-op: every item already flagged PROCESSED
    result = runner.invoke(main, ["process", "--config", str(cfg)])
    assert "items processed: 0" in result.output
    assert "events stored: 0" in result.output

    result = runner.invoke(main, ["dump", "--config", str(cfg)])
    assert result.exit_code == 0
    events = [json.loads(line) for line in result.output.strip().splitlines()]
    assert len(events) == 5
    merged = [e for e in events if len(e["links"]) == 2]
    assert len(merged) == 1
    assert merged[0]["disease_id"] == "dengue"
    assert merged[0]["city_id"] == "lahore"

    result = runner.invoke(main, ["purge", "--config", str(cfg)])
    assert result.exit_code == 0
    assert "0 removed" in result.output


def test_purge_retain_days_override(runner, tmp_path, feed_server):
    xml = make_feed("t", [{"title": "لاہور میں ڈینگی", "guid": "g1",
                           "link": "https://a.test/1", "pubDate": rss_date(5)}])
    _FeedHandler.feeds = {"/a": xml}
    _write_sources(tmp_path / "sources.tsv", feed_server, ["/a"])
    cfg = tmp_path / "cfg.toml"
    cfg.write_text('sources_file = "sources.tsv"\ndata_dir = "d"\n', encoding="utf-8")
    runner.invoke(main, ["fetch", "--config", str(cfg)])
    runner.invoke(main, ["process", "--config", str(cfg)])
    result = runner.invoke(main, ["purge", "--config", str(cfg), "--retain-days", "3"])
    assert result.exit_code == 0
    assert "1 removed" in result.output


def test_eval_command(runner, tmp_path):
    eval_dir = default_lexicon_dir().parent / "eval"
    out_csv = tmp_path / "report.csv"
    out_png = tmp_path / "report.png"
    result = runner.invoke(main, [
        "eval", "--gold", str(eval_dir / "gold.tsv"),
        "--items", str(eval_dir / "items.xml"),
        "--csv", str(out_csv), "--figure", str(out_png)])
    assert result.exit_code == 0, result.output
    assert "Overall" in result.output
    assert "F-Score" in result.output
    assert out_csv.exists()
    assert out_png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_eval_stage_subset(runner, tmp_path):
    eval_dir = default_lexicon_dir().parent / "eval"
    result = runner.invoke(main, [
        "eval", "--gold", str(eval_dir / "gold.tsv"),
        "--items", str(eval_dir / "items.xml"),
        "--stages", "disease,city"])
    assert result.exit_code == 0, result.output
    assert "Epidemic Outbreak Detection" in result.output
    assert "City Detection" in result.output
    assert "Tokenization" not in result.output


def test_dump_empty_store(runner, tmp_path):
    result = runner.invoke(main, ["dump", "--data-dir", str(tmp_path / "d")])
    assert result.exit_code == 0
    assert result.output.strip() == ""
