"""Tokenization, stop-word removal, and token canonicalization for Urdu text."""
from __future__ import annotations

import unicodedata
from dataclasses import dataclass

from .normalize import NormalizedText, normalize_text, remove_diacritics

ZWNJ = "\u200c"


@dataclass(frozen=True)
class TokenList:
    tokens: tuple[str, ...]
    origin: str = ""


@dataclass(frozen=True)
class StemRule:
    suffix: str
    min_stem_len: int

    def __post_init__(self):
        if not self.suffix:
            raise ValueError("stem rule suffix must be non-empty")
        if self.min_stem_len < 1:
            raise ValueError("min_stem_len must be >= 1")


@dataclass(frozen=True)
class VariantRule:
    variant: str
    canonical: str

    def __post_init__(self):
        if self.variant == self.canonical:
            raise ValueError("variant must differ from canonical: %r" % self.variant)


def match_key(word: str) -> str:
    """Lookup key for lexicon matching: NFC, diacritic-free, ZWNJ-stripped, casefolded.

    ZWNJ is kept inside tokens for display but ignored when comparing against
    lexicon entries so both writings of a compound hit the same entry.
    """
    word = unicodedata.normalize("NFC", word)
    return remove_diacritics(word).replace(ZWNJ, "").casefold()


def tokenize(nt: NormalizedText) -> TokenList:
    """Split on Unicode whitespace. ZWNJ survives inside a token (it binds
    compound-word segments); a ZWNJ touching whitespace is dropped."""
    tokens = []
    for seg in nt.text.split():
        seg = seg.strip(ZWNJ)
        if seg:
            tokens.append(seg)
    return TokenList(tuple(tokens))


def remove_stop_words(tl: TokenList, stops: frozenset[str]) -> TokenList:
    kept = tuple(t for t in tl.tokens if match_key(t) not in stops)
    return TokenList(kept, tl.origin)


def canonicalize_token(token: str, stems: tuple[StemRule, ...],
                       variants: dict[str, str]) -> str:
    """Reduce one token to canonical surface form.

    Variant lookup wins over stemming and both apply at most once: variants
    encode irregular spellings, stemming strips the longest suffix whose
    removal leaves at least min_stem_len code points.
    """
    hit = variants.get(match_key(token))
    if hit is not None:
        return hit
    best = None
    for rule in stems:
        if token.endswith(rule.suffix) and len(token) - len(rule.suffix) >= rule.min_stem_len:
            if best is None or len(rule.suffix) > len(best.suffix):
                best = rule
    if best is not None:
        return token[: len(token) - len(best.suffix)]
    return token


def prepare(raw: str, lex, origin: str = "") -> TokenList:
    """Layer-2 composition: normalize, tokenize, drop stop words, canonicalize.

    A variant canonical may be multi-word ("بورے والا"); it is re-split so the
    no-whitespace token invariant holds. Stop words are filtered again after
    canonicalization so no rewrite can smuggle one back in.
    """
    tl = tokenize(normalize_text(raw))
    tl = remove_stop_words(tl, lex.stops)
    out: list[str] = []
    for tok in tl.tokens:
        canon = canonicalize_token(tok, lex.stems, lex.variants)
        for part in canon.split():
            if match_key(part) not in lex.stops:
                out.append(part)
    return TokenList(tuple(out), origin)
