"""Reference dictionaries: stop words, stem/variant rules, disease ontology,
and the Pakistan city gazetteer with coordinates."""
from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from .tokenize_filter import StemRule, TokenList, canonicalize_token, match_key

PAKISTAN_BBOX = (23.5, 37.5, 60.5, 77.5)  # lat_min, lat_max, lon_min, lon_max

# Longest seed names fit in 3 tokens.
MAX_NAME_TOKENS = 3

STOPWORDS_FILE = "stopwords.txt"
STEMS_FILE = "stems.tsv"
VARIANTS_FILE = "variants.tsv"
DISEASES_FILE = "diseases.tsv"
CITIES_FILE = "cities.tsv"


class LexiconError(ValueError):
    """Raised when a lexicon file is missing, malformed, or violates an invariant."""

    def __init__(self, message: str, file: str = "", line: int = 0):
        loc = ""
        if file:
            loc = " [%s%s]" % (file, ":%d" % line if line else "")
        super().__init__(message + loc)
        self.file = file
        self.line = line


@dataclass(frozen=True)
class DiseaseEntry:
    disease_id: str
    urdu_canonical: str
    english_name: str
    aliases: tuple[str, ...] = ()


@dataclass(frozen=True)
class CityEntry:
    city_id: str
    urdu_canonical: str
    english_name: str
    aliases: tuple[str, ...]
    lat: float
    lon: float


@dataclass(frozen=True)
class LexiconSet:
    stops: frozenset[str]
    stems: tuple[StemRule, ...]
    variants: dict[str, str]
    diseases: tuple[DiseaseEntry, ...]
    cities: tuple[CityEntry, ...]
    disease_index: dict[tuple[str, ...], DiseaseEntry] = field(default_factory=dict)
    city_index: dict[tuple[str, ...], CityEntry] = field(default_factory=dict)


def default_lexicon_dir() -> Path:
    return Path(str(resources.files("epi_flasher").joinpath("data/lexicons")))


def _read_lines(dirpath: Path, name: str) -> list[tuple[int, str]]:
    path = dirpath / name
    if not path.is_file():
        raise LexiconError("missing lexicon file", file=name)
    out = []
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        out.append((lineno, line.rstrip("\r\n")))
    return out


def _name_key(name: str, stops, stems, variants) -> tuple[str, ...]:
    """Index key for a canonical name or alias: canonicalized token keys.

    Names pass through the same transformations as feed text (stop-word drop,
    variant rewrite, stemming) so both sides of a lookup stay consistent;
    e.g. "مرید کے" indexes without its particle because the particle never
    survives the pipeline either.
    """
    parts: list[str] = []
    for tok in name.split():
        canon = canonicalize_token(tok, stems, variants)
        parts.extend(canon.split())
    return tuple(match_key(p) for p in parts if p and match_key(p) not in stops)


def _index_entry(index, entry, names, stops, stems, variants, file: str, line: int) -> None:
    for name in names:
        key = _name_key(name, stops, stems, variants)
        if not key:
            raise LexiconError("name reduces to empty key: %r" % name, file, line)
        if len(key) > MAX_NAME_TOKENS:
            raise LexiconError("name longer than %d tokens: %r" % (MAX_NAME_TOKENS, name),
                               file, line)
        prev = index.get(key)
        if prev is not None and prev is not entry:
            raise LexiconError("alias %r collides with entry %r" % (name, prev), file, line)
        index[key] = entry


def load_lexicons(dirpath: str | Path | None = None) -> LexiconSet:
    """Parse the five lexicon files, validate invariants, build match indexes."""
    dirpath = Path(dirpath) if dirpath is not None else default_lexicon_dir()

    stops = frozenset(match_key(w) for _, w in _read_lines(dirpath, STOPWORDS_FILE))

    stems = []
    for lineno, line in _read_lines(dirpath, STEMS_FILE):
        fields = line.split("\t")
        if len(fields) != 2:
            raise LexiconError("expected suffix<TAB>min_stem_len", STEMS_FILE, lineno)
        try:
            stems.append(StemRule(fields[0], int(fields[1])))
        except ValueError as exc:
            raise LexiconError(str(exc), STEMS_FILE, lineno)
    stems = tuple(stems)

    variants: dict[str, str] = {}
    for lineno, line in _read_lines(dirpath, VARIANTS_FILE):
        fields = line.split("\t")
        if len(fields) != 2 or not fields[0] or not fields[1]:
            raise LexiconError("expected variant<TAB>canonical", VARIANTS_FILE, lineno)
        key = match_key(fields[0])
        if key == match_key(fields[1]):
            raise LexiconError("variant equals canonical: %r" % fields[0],
                               VARIANTS_FILE, lineno)
        if key in variants:
            raise LexiconError("duplicate variant %r" % fields[0], VARIANTS_FILE, lineno)
        variants[key] = fields[1]

    diseases: list[DiseaseEntry] = []
    disease_index: dict[tuple[str, ...], DiseaseEntry] = {}
    seen_ids: set[str] = set()
    for lineno, line in _read_lines(dirpath, DISEASES_FILE):
        fields = line.split("\t")
        if len(fields) != 4:
            raise LexiconError("expected 4 tab-separated fields", DISEASES_FILE, lineno)
        disease_id, urdu, english, aliases_raw = fields
        if not urdu:
            raise LexiconError("empty urdu_canonical", DISEASES_FILE, lineno)
        if disease_id in seen_ids:
            raise LexiconError("duplicate disease_id %r" % disease_id, DISEASES_FILE, lineno)
        seen_ids.add(disease_id)
        aliases = tuple(a for a in aliases_raw.split("|") if a)
        entry = DiseaseEntry(disease_id, urdu, english, aliases)
        diseases.append(entry)
        _index_entry(disease_index, entry, (urdu, english) + aliases,
                     stops, stems, variants, DISEASES_FILE, lineno)

    cities: list[CityEntry] = []
    city_index: dict[tuple[str, ...], CityEntry] = {}
    seen_ids = set()
    for lineno, line in _read_lines(dirpath, CITIES_FILE):
        fields = line.split("\t")
        if len(fields) != 6:
            raise LexiconError("expected 6 tab-separated fields", CITIES_FILE, lineno)
        city_id, urdu, english, aliases_raw, lat_s, lon_s = fields
        if not urdu:
            raise LexiconError("empty urdu_canonical", CITIES_FILE, lineno)
        if city_id in seen_ids:
            raise LexiconError("duplicate city_id %r" % city_id, CITIES_FILE, lineno)
        seen_ids.add(city_id)
        try:
            lat, lon = float(lat_s), float(lon_s)
        except ValueError:
            raise LexiconError("bad coordinates", CITIES_FILE, lineno)
        lat_min, lat_max, lon_min, lon_max = PAKISTAN_BBOX
        if not (lat_min <= lat <= lat_max and lon_min <= lon <= lon_max):
            raise LexiconError("coordinates outside Pakistan bounding box: %s,%s"
                               % (lat_s, lon_s), CITIES_FILE, lineno)
        aliases = tuple(a for a in aliases_raw.split("|") if a)
        entry = CityEntry(city_id, urdu, english, aliases, lat, lon)
        cities.append(entry)
        _index_entry(city_index, entry, (urdu, english) + aliases,
                     stops, stems, variants, CITIES_FILE, lineno)

    return LexiconSet(stops, stems, variants, tuple(diseases), tuple(cities),
                      disease_index, city_index)


def _match(tokens: tuple[str, ...], index) -> list[tuple[object, tuple[int, int]]]:
    """Greedy longest-match scan over token n-grams, non-overlapping, left to right."""
    keys = [match_key(t) for t in tokens]
    hits = []
    i = 0
    n = len(keys)
    while i < n:
        found = None
        for width in range(min(MAX_NAME_TOKENS, n - i), 0, -1):
            entry = index.get(tuple(keys[i:i + width]))
            if entry is not None:
                found = (entry, (i, i + width))
                break
        if found is not None:
            hits.append(found)
            i = found[1][1]
        else:
            i += 1
    return hits


def match_disease(tokens: TokenList, lex: LexiconSet) -> list[tuple[DiseaseEntry, tuple[int, int]]]:
    return _match(tokens.tokens, lex.disease_index)


def match_city(tokens: TokenList, lex: LexiconSet) -> list[tuple[CityEntry, tuple[int, int]]]:
    return _match(tokens.tokens, lex.city_index)


def geo_of(city: CityEntry) -> tuple[float, float]:
    return (city.lat, city.lon)
