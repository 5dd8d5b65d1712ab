"""Pronunciation dictionary, grapheme segmentation and candidate lattices.

The dictionary is a plain TSV export (``surface<TAB>pronunciation``) rather
than a full morphological analyzer; graphemes are tiled by a minimal-span
dynamic program over the dictionary surfaces, and every combination of the
per-word candidate pronunciations becomes a path of the phrase lattice.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from itertools import product
from pathlib import Path
from typing import Iterable, Iterator, Optional, Union

from .errors import LabelError, LexiconError
from .label_core import segment_moras

Pronunciation = tuple[str, ...]  # one candidate as a mora sequence


@dataclass(frozen=True, slots=True)
class LexiconEntry:
    """All candidate pronunciations of one surface form, in dictionary order."""

    surface: str
    pronunciations: tuple[Pronunciation, ...]

    def __post_init__(self):
        if not self.surface:
            raise ValueError("surface must be non-empty")
        if not self.pronunciations:
            raise ValueError(f"surface {self.surface!r} has no pronunciations")


class Lexicon:
    """Immutable surface → candidate-pronunciations dictionary."""

    def __init__(self, entries: Iterable[LexiconEntry]):
        self._entries = {e.surface: e for e in entries}
        self._max_surface_len = max((len(s) for s in self._entries), default=0)

    def __len__(self) -> int:
        return len(self._entries)

    def __contains__(self, surface: str) -> bool:
        return surface in self._entries

    @property
    def max_surface_len(self) -> int:
        return self._max_surface_len

    def lookup(self, surface: str) -> Optional[LexiconEntry]:
        return self._entries.get(surface)

    def entries(self) -> Iterator[LexiconEntry]:
        return iter(self._entries.values())


def load_lexicon(source: Union[str, Path, io.IOBase, bytes]) -> Lexicon:
    """Load a lexicon from TSV: ``surface<TAB>pronunciation[<TAB>accent_type]``.

    Lines starting with ``#`` are comments, blank lines are skipped, and the
    optional accent-type column is accepted but ignored.  Duplicate
    (surface, pronunciation) rows keep the first occurrence; within one
    surface, file order fixes the candidate priority.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    else:
        raw = source.read()
        text = raw.decode("utf-8") if isinstance(raw, bytes) else raw

    pronunciations: dict[str, list[Pronunciation]] = {}
    seen: set[tuple[str, Pronunciation]] = set()
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        columns = line.rstrip("\n").split("\t")
        if len(columns) < 2 or len(columns) > 3:
            raise LexiconError(f"line {lineno}: expected 2-3 columns, got {len(columns)}")
        surface, pron_text = columns[0], columns[1]
        if not surface:
            raise LexiconError(f"line {lineno}: empty surface")
        try:
            moras = tuple(segment_moras(pron_text))
        except LabelError as exc:
            raise LexiconError(f"line {lineno}: bad pronunciation {pron_text!r}: {exc}") from None
        if not moras:
            raise LexiconError(f"line {lineno}: empty pronunciation")
        key = (surface, moras)
        if key in seen:
            continue
        seen.add(key)
        pronunciations.setdefault(surface, []).append(moras)

    return Lexicon(
        LexiconEntry(surface, tuple(prons)) for surface, prons in pronunciations.items()
    )


@dataclass(frozen=True, slots=True)
class Span:
    """One tile of a segmentation: a dictionary word or a single unknown char."""

    surface: str
    entry: Optional[LexiconEntry] = None

    @property
    def is_unknown(self) -> bool:
        return self.entry is None


@dataclass(frozen=True, slots=True)
class Segmentation:
    """Spans tiling the phrase graphemes exactly, in order."""

    spans: tuple[Span, ...]

    def surfaces(self) -> tuple[str, ...]:
        return tuple(s.surface for s in self.spans)


def segment(graphemes: str, lexicon: Lexicon) -> Segmentation:
    """Tile ``graphemes`` with dictionary surfaces and single-char unknowns.

    Minimizes the span count by dynamic programming; ties prefer the longest
    first span, recursively, and a known surface over an unknown character
    of the same length.  Always succeeds: unknown single characters permit a
    tiling of any input.
    """
    if not graphemes:
        raise ValueError("graphemes must be non-empty")
    length = len(graphemes)
    max_len = max(lexicon.max_surface_len, 1)

    # best[i] = minimal span count for graphemes[i:]; a single-char known
    # surface costs the same as a single-char unknown, so only longer
    # surfaces can improve on the unknown fallback.
    best = [0] * (length + 1)
    for i in range(length - 1, -1, -1):
        cost = 1 + best[i + 1]  # unknown single char always works
        for span_len in range(2, min(max_len, length - i) + 1):
            if graphemes[i : i + span_len] in lexicon:
                cost = min(cost, 1 + best[i + span_len])
        best[i] = cost

    spans: list[Span] = []
    i = 0
    while i < length:
        chosen = None
        for span_len in range(min(max_len, length - i), 0, -1):
            surface = graphemes[i : i + span_len]
            entry = lexicon.lookup(surface)
            if entry is not None and 1 + best[i + span_len] == best[i]:
                chosen = Span(surface, entry)
                break
        if chosen is None:
            chosen = Span(graphemes[i])
        spans.append(chosen)
        i += len(chosen.surface)
    return Segmentation(tuple(spans))


_HIRAGANA_FIRST, _HIRAGANA_LAST = 0x3041, 0x3096
_KATA_SHIFT = 0x60


def hiragana_to_katakana(text: str) -> str:
    """Map Hiragana code points onto their Katakana counterparts."""
    return "".join(
        chr(ord(ch) + _KATA_SHIFT) if _HIRAGANA_FIRST <= ord(ch) <= _HIRAGANA_LAST else ch
        for ch in text
    )


@dataclass(frozen=True, slots=True)
class PronLattice:
    """Candidate phrase pronunciations as one arc group per span.

    Source-to-sink paths are the concatenations of one candidate per group;
    a group with no candidates makes the whole lattice uncorrectable.
    """

    groups: tuple[tuple[Pronunciation, ...], ...]

    @property
    def uncorrectable(self) -> bool:
        return any(not group for group in self.groups) or not self.groups

    @property
    def path_count(self) -> int:
        if not self.groups:
            return 0
        return math.prod(len(group) for group in self.groups)

    def paths(self) -> Iterator[Pronunciation]:
        """All paths in lexicographic arc order (dictionary priority)."""
        for combo in product(*self.groups):
            yield tuple(mora for candidate in combo for mora in candidate)


def build_lattice(segmentation: Segmentation) -> PronLattice:
    """Expand a segmentation into its pronunciation lattice.

    Known spans contribute their dictionary candidates in priority order.
    An unknown span reads as itself when it is kana (Hiragana converted to
    Katakana); any other unknown span has no candidates and flags the
    lattice uncorrectable.
    """
    groups: list[tuple[Pronunciation, ...]] = []
    for span in segmentation.spans:
        if span.entry is not None:
            groups.append(span.entry.pronunciations)
            continue
        converted = hiragana_to_katakana(span.surface)
        try:
            moras = tuple(segment_moras(converted))
        except LabelError:
            moras = ()
        groups.append((moras,) if moras else ())
    return PronLattice(tuple(groups))
