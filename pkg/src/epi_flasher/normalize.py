"""Character-level cleaning of Urdu text: NFC, diacritic removal, punctuation removal."""
from __future__ import annotations

import re
import unicodedata
from dataclasses import dataclass, field

# Urdu/Arabic combining diacritics: tanween, zabar (U+064E), zer (U+0650),
# pesh (U+064F), shad (U+0651), jazm/sukun (U+0652) and companions, plus
# the superscript alef. Removing them never changes word identity for matching.
DIACRITICS = frozenset(chr(cp) for cp in range(0x064B, 0x0660)) | {"ٰ"}

# ASCII punctuation plus the marks Urdu publishers actually use:
# full stop U+06D4, comma U+060C, question U+061F, semicolon U+061B,
# curly quotes and en/em dashes. Each is replaced by a space, not deleted,
# so adjacent words never fuse.
PUNCTUATION = frozenset(
    [
        '"', "'", "!", "?", "(", ")", "[", "]", ",", ".", ";", ":",
        "‘", "’", "“", "”",  # curly quotes
        "–", "—",                      # en/em dash
        "۔",  # Urdu full stop
        "،",  # Urdu comma
        "؟",  # Urdu question mark
        "؛",  # Urdu semicolon
    ]
)

STAGE_NFC = "NFC"
STAGE_DIACRITICS = "DIACRITICS"
STAGE_PUNCT = "PUNCT"

_DIACRITIC_RE = re.compile("[%s]" % "".join(re.escape(c) for c in sorted(DIACRITICS)))
_PUNCT_RE = re.compile("[%s]" % "".join(re.escape(c) for c in sorted(PUNCTUATION)))
_SPACE_RE = re.compile(r"\s+")


@dataclass(frozen=True)
class NormalizedText:
    """A cleaned string plus the ordered list of stages that produced it."""

    text: str
    applied: tuple[str, ...] = field(default=())


def remove_diacritics(text: str) -> str:
    """Delete every diacritic code point; all other code points keep their order."""
    return _DIACRITIC_RE.sub("", text)


def remove_punctuation(text: str) -> str:
    """Replace punctuation with spaces, collapse space runs, trim the ends."""
    text = _PUNCT_RE.sub(" ", text)
    return _SPACE_RE.sub(" ", text).strip()


def normalize_text(text: str) -> NormalizedText:
    """Full cleaning pass: NFC composition, then diacritic and punctuation removal.

    NFC runs first so a decomposed zabar is still caught by the diacritic set
    (combining marks that compose into a base letter, e.g. alef + madda, are
    absorbed rather than deleted).
    """
    composed = unicodedata.normalize("NFC", text)
    cleaned = remove_punctuation(remove_diacritics(composed))
    return NormalizedText(cleaned, (STAGE_NFC, STAGE_DIACRITICS, STAGE_PUNCT))


def charset_lines(charset: frozenset[str]) -> list[str]:
    """Render a code-point set as `U+XXXX<TAB>name` lines for the published lists."""
    lines = []
    for ch in sorted(charset):
        name = unicodedata.name(ch, "UNKNOWN")
        lines.append("U+%04X\t%s" % (ord(ch), name))
    return lines
