"""Per-stage confusion-matrix evaluation against expert-labeled gold files.

Gold file format: UTF-8 TSV `access_no<TAB>stage<TAB>expected` where expected
is a `|`-separated list of units. A unit of the form U+XXXX denotes a single
code point (used for invisible diacritics). A unit prefixed `!` is an explicit
negative: the system must NOT produce/remove it (counts TN if absent from the
system output, FP if present).

Gold unit per stage:
  DIACRITICS  diacritic occurrences the expert expects removed from the title
  PUNCT       punctuation occurrences expected removed (after diacritics pass)
  TOKENIZE    word tokens expected from the cleaned title
  STOPWORDS   stop-word tokens expected removed
  DISEASE     disease_ids expected matched (title only)
  CITY        city_ids expected matched (title, else description fallback)
  GEO         "lat,lon" pairs (4 decimals) for the matched cities
"""
from __future__ import annotations

import csv
import re
import unicodedata
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from .feed_ingest import FeedItem
from .lexicons import LexiconSet, geo_of, match_city, match_disease
from .normalize import (DIACRITICS, PUNCTUATION, normalize_text,
                        remove_diacritics, remove_punctuation)
from .tokenize_filter import match_key, prepare, tokenize


class Stage(Enum):
    DIACRITICS = "diacritics"
    PUNCT = "punct"
    TOKENIZE = "tokenize"
    STOPWORDS = "stopwords"
    DISEASE = "disease"
    CITY = "city"
    GEO = "geo"


STAGE_LABELS = {
    Stage.DIACRITICS: "Removal of Diacritics",
    Stage.PUNCT: "Removal of Punctuation",
    Stage.TOKENIZE: "Tokenization Correctness",
    Stage.STOPWORDS: "Stop Word Removal",
    Stage.DISEASE: "Epidemic Outbreak Detection",
    Stage.CITY: "City Detection",
    Stage.GEO: "City Lat-Long Detection",
}


class EmptyMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tp: int = 0
    fn: int = 0
    fp: int = 0
    tn: int = 0

    @property
    def total(self) -> int:
        return self.tp + self.fn + self.fp + self.tn

    def __add__(self, other: "ConfusionMatrix") -> "ConfusionMatrix":
        return ConfusionMatrix(self.tp + other.tp, self.fn + other.fn,
                               self.fp + other.fp, self.tn + other.tn)


@dataclass(frozen=True)
class Metrics:
    accuracy: float
    precision: float | None
    recall: float | None
    f_score: float | None


@dataclass(frozen=True)
class StageReport:
    stage: Stage
    matrix: ConfusionMatrix
    metrics: Metrics


@dataclass(frozen=True)
class GoldRecord:
    access_no: str
    stage: Stage
    expected: tuple[str, ...]


def metrics(m: ConfusionMatrix) -> Metrics:
    """Accuracy, precision, recall, F-score; undefined ratios come back None."""
    if m.total == 0:
        raise EmptyMatrixError("confusion matrix has no counts")
    accuracy = (m.tp + m.tn) / m.total
    precision = m.tp / (m.tp + m.fp) if (m.tp + m.fp) > 0 else None
    recall = m.tp / (m.tp + m.fn) if (m.tp + m.fn) > 0 else None
    f_score = None
    if precision is not None and recall is not None and (precision + recall) > 0:
        f_score = 2 * precision * recall / (precision + recall)
    return Metrics(accuracy, precision, recall, f_score)


_UNIT_CP_RE = re.compile(r"^U\+([0-9A-Fa-f]{4,6})$")


def _decode_unit(unit: str) -> str:
    m = _UNIT_CP_RE.match(unit)
    return chr(int(m.group(1), 16)) if m else unit


def load_gold(path: str | Path) -> list[GoldRecord]:
    records: list[GoldRecord] = []
    seen: set[tuple[str, str]] = set()
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        if len(fields) != 3:
            raise ValueError("%s:%d: expected access_no<TAB>stage<TAB>expected"
                             % (path, lineno))
        access_no, stage_raw, expected_raw = fields
        try:
            stage = Stage(stage_raw.lower())
        except ValueError:
            raise ValueError("%s:%d: unknown stage %r" % (path, lineno, stage_raw))
        key = (access_no, stage.value)
        if key in seen:
            raise ValueError("%s:%d: duplicate (access_no, stage) %r" % (path, lineno, key))
        seen.add(key)
        units = tuple(u for u in expected_raw.split("|") if u)
        records.append(GoldRecord(access_no, stage, units))
    return records


def _system_units(stage: Stage, item: FeedItem, lex: LexiconSet) -> list[str]:
    """Run the pipeline up to `stage` on one item, return the produced units."""
    nfc_title = unicodedata.normalize("NFC", item.title)
    if stage is Stage.DIACRITICS:
        return [c for c in nfc_title if c in DIACRITICS]
    if stage is Stage.PUNCT:
        after_diac = remove_diacritics(nfc_title)
        return [c for c in after_diac if c in PUNCTUATION]
    if stage is Stage.TOKENIZE:
        return list(tokenize(normalize_text(item.title)).tokens)
    if stage is Stage.STOPWORDS:
        toks = tokenize(normalize_text(item.title)).tokens
        return [t for t in toks if match_key(t) in lex.stops]
    title_tokens = prepare(item.title, lex, item.access_no)
    if stage is Stage.DISEASE:
        return [d.disease_id for d, _ in match_disease(title_tokens, lex)]
    cities = match_city(title_tokens, lex)
    if not cities and item.description:
        cities = match_city(prepare(item.description, lex, item.access_no), lex)
    if stage is Stage.CITY:
        return [c.city_id for c, _ in cities]
    if stage is Stage.GEO:
        return ["%.4f,%.4f" % geo_of(c) for c, _ in cities]
    raise ValueError("unknown stage %r" % stage)


def _score_record(expected: tuple[str, ...], actual: list[str]) -> ConfusionMatrix:
    positives = Counter(_decode_unit(u) for u in expected if not u.startswith("!"))
    negatives = Counter(_decode_unit(u[1:]) for u in expected if u.startswith("!"))
    produced = Counter(actual)

    tp = sum((positives & produced).values())
    fn = sum((positives - produced).values())
    leftover = produced - positives
    tn = sum((negatives - leftover).values())
    # negatives that were produced are counted once, inside `leftover`
    fp = sum(leftover.values())
    return ConfusionMatrix(tp=tp, fn=fn, fp=fp, tn=tn)


def score_stage(stage: Stage, items: list[FeedItem], gold: list[GoldRecord],
                lex: LexiconSet) -> StageReport:
    by_access = {it.access_no: it for it in items}
    relevant = [g for g in gold if g.stage is stage]
    matrix = ConfusionMatrix()
    for record in relevant:
        item = by_access.get(record.access_no)
        if item is None:
            raise ValueError("gold references unknown access_no %r" % record.access_no)
        matrix = matrix + _score_record(record.expected, _system_units(stage, item, lex))
    if matrix.total == 0:
        raise EmptyMatrixError("no gold units for stage %s" % stage.value)
    return StageReport(stage, matrix, metrics(matrix))


def score_all(items: list[FeedItem], gold: list[GoldRecord], lex: LexiconSet,
              stages: list[Stage] | None = None) -> list[StageReport]:
    stages = stages or [s for s in Stage if any(g.stage is s for g in gold)]
    return [score_stage(s, items, gold, lex) for s in stages]


def overall(reports: list[StageReport]) -> StageReport:
    """Micro-average: elementwise sum of stage matrices, metrics recomputed."""
    if not reports:
        raise EmptyMatrixError("no stage reports")
    total = ConfusionMatrix()
    for r in reports:
        total = total + r.matrix
    return StageReport(reports[0].stage, total, metrics(total))


def _fmt(value: float | None) -> str:
    return "-" if value is None else "%.1f%%" % (100.0 * value)


def _rows(reports: list[StageReport]) -> list[list[str]]:
    rows = []
    for r in reports:
        m = r.metrics
        rows.append([STAGE_LABELS[r.stage], str(r.matrix.tp), str(r.matrix.fn),
                     str(r.matrix.fp), str(r.matrix.tn),
                     _fmt(m.accuracy), _fmt(m.precision), _fmt(m.recall), _fmt(m.f_score)])
    ov = overall(reports)
    m = ov.metrics
    rows.append(["Overall", str(ov.matrix.tp), str(ov.matrix.fn), str(ov.matrix.fp),
                 str(ov.matrix.tn),
                 _fmt(m.accuracy), _fmt(m.precision), _fmt(m.recall), _fmt(m.f_score)])
    return rows


HEADER = ["Stage", "TP", "FN", "FP", "TN", "Accuracy", "Precision", "Recall", "F-Score"]


def render_text(reports: list[StageReport]) -> str:
    rows = [HEADER] + _rows(reports)
    widths = [max(len(r[i]) for r in rows) for i in range(len(HEADER))]
    lines = []
    for idx, row in enumerate(rows):
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())
        if idx == 0:
            lines.append("  ".join("-" * w for w in widths))
    return "\n".join(lines)


def write_csv(reports: list[StageReport], path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(HEADER)
        writer.writerows(_rows(reports))


def render_figure(reports: list[StageReport], path: str | Path) -> None:
    """Grouped bar chart of the four metrics per stage, saved to `path`."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [STAGE_LABELS[r.stage] for r in reports] + ["Overall"]
    all_reports = reports + [overall(reports)]
    series = {
        "Accuracy": [r.metrics.accuracy for r in all_reports],
        "Precision": [r.metrics.precision for r in all_reports],
        "Recall": [r.metrics.recall for r in all_reports],
        "F-Score": [r.metrics.f_score for r in all_reports],
    }
    x = range(len(labels))
    width = 0.2
    fig, ax = plt.subplots(figsize=(max(8, 1.6 * len(labels)), 4.5))
    for i, (name, values) in enumerate(series.items()):
        vals = [v if v is not None else 0.0 for v in values]
        ax.bar([xi + (i - 1.5) * width for xi in x], vals, width, label=name)
    ax.set_xticks(list(x))
    ax.set_xticklabels(labels, rotation=30, ha="right")
    ax.set_ylim(0, 1.05)
    ax.set_ylabel("fraction")
    ax.legend(ncol=4, fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
