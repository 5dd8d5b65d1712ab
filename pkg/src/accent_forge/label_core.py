"""Core label notation: moras, accent phrases, pitch patterns, utterances.

A label string spells out the pronunciation of one accent phrase in
Katakana, with ``[`` marking the pitch rise after the first mora and
``]`` marking the pitch fall after the accent nucleus.  Utterance-level
streams chain phrases with ``#`` and may interleave ``_`` pause markers;
each phrase can carry its source graphemes in front of a ``|`` delimiter.

Everything in this module is a pure function over immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .errors import CodecError, LabelError

RISE = "["
FALL = "]"
PHRASE_BOUNDARY = "#"
PAUSE_MARK = "_"
GRAPHEME_DELIMITER = "|"

DISPLAY_SYMBOLS = RISE + FALL + PHRASE_BOUNDARY + PAUSE_MARK + GRAPHEME_DELIMITER
INTERCHANGE_SYMBOLS = "↑↓①③∣"

# Small kana that merge into the preceding base kana to form one mora.
COMBINING_KANA = frozenset("ァィゥェォャュョヮ")
# Single-mora characters that never take a combining kana.
STANDALONE_KANA = frozenset("ーッン")

# Katakana letters that can head a mora.  ヵ/ヶ and the archaic ヷ-ヺ do
# not occur in this notation's pronunciation strings and are rejected.
_BASE_KANA = (
    frozenset(chr(cp) for cp in range(0x30A1, 0x30FB))
    - COMBINING_KANA
    - frozenset("ヵヶヷヸヹヺ")
) - frozenset("ッン")


def segment_moras(text: str) -> list[str]:
    """Split a Katakana string into moras.

    A mora is a base kana optionally followed by one combining small kana;
    ー, ッ and ン always stand alone.  Joining the result reproduces the
    input exactly.

    >>> segment_moras("ギョギョート")
    ['ギョ', 'ギョ', 'ー', 'ト']
    """
    moras: list[str] = []
    can_combine = False
    for pos, ch in enumerate(text):
        if ch in _BASE_KANA:
            moras.append(ch)
            can_combine = True
        elif ch in STANDALONE_KANA:
            moras.append(ch)
            can_combine = False
        elif ch in COMBINING_KANA:
            if not can_combine:
                raise LabelError(
                    f"combining kana {ch!r} at position {pos} does not follow a base kana"
                )
            moras[-1] += ch
            can_combine = False
        else:
            raise LabelError(f"character {ch!r} at position {pos} is not Katakana")
    return moras


@dataclass(frozen=True, slots=True)
class AccentPhrase:
    """Pronunciation of one accent phrase: a mora sequence plus an accent type.

    Accent type 0 is flat (no pitch fall); accent k means the fall occurs
    after the k-th mora, so 1 is head-high and ``len(moras)`` is tail-high.
    """

    moras: tuple[str, ...]
    accent: int

    def __post_init__(self):
        n = len(self.moras)
        if n < 1:
            raise ValueError("accent phrase needs at least one mora")
        if not 0 <= self.accent <= n:
            raise ValueError(f"accent {self.accent} out of range for {n} moras")

    @classmethod
    def from_pronunciation(cls, katakana: str, accent: int) -> "AccentPhrase":
        return cls(tuple(segment_moras(katakana)), accent)

    @property
    def mora_count(self) -> int:
        return len(self.moras)

    def pronunciation(self) -> str:
        return "".join(self.moras)


def parse_phrase(text: str, *, strict: bool = True, issues: list[str] | None = None) -> AccentPhrase:
    """Parse one phrase label like ``セ[ーコーシテ]モ`` into an :class:`AccentPhrase`.

    In strict mode any grammar violation raises :class:`LabelError`.  With
    ``strict=False`` recoverable violations are appended to ``issues`` and
    the phrase is parsed best-effort; only a phrase with no usable moras
    still raises.
    """

    def violation(msg: str):
        if strict:
            raise LabelError(msg)
        if issues is not None:
            issues.append(msg)

    moras: list[str] = []
    rise_at: int | None = None
    fall_at: int | None = None
    fall_before_rise = False
    can_combine = False

    for pos, ch in enumerate(text):
        if ch == RISE:
            if rise_at is not None:
                violation("duplicate rise marker")
                continue
            if fall_at is not None:
                fall_before_rise = True
            rise_at = len(moras)
            can_combine = False
        elif ch == FALL:
            if fall_at is not None:
                violation("duplicate fall marker")
                continue
            fall_at = len(moras)
            can_combine = False
        elif ch in _BASE_KANA:
            moras.append(ch)
            can_combine = True
        elif ch in STANDALONE_KANA:
            moras.append(ch)
            can_combine = False
        elif ch in COMBINING_KANA:
            if can_combine:
                moras[-1] += ch
                can_combine = False
            elif not strict and moras and len(moras[-1]) == 1 and moras[-1] not in STANDALONE_KANA:
                # marker split a mora, e.g. "ギ[ョ"; reattach
                violation(f"combining kana {ch!r} split from its base kana at position {pos}")
                moras[-1] += ch
            else:
                violation(f"combining kana {ch!r} at position {pos} does not follow a base kana")
        else:
            violation(f"character {ch!r} at position {pos} is not Katakana")

    n = len(moras)
    if n == 0:
        raise LabelError("empty pronunciation")

    if fall_before_rise:
        violation("fall marker precedes rise marker")
    if rise_at is not None:
        if rise_at != 1:
            violation("rise marker must sit immediately after the first mora")
        if n < 2:
            violation("rise marker requires at least two moras")
    if fall_at is not None:
        if fall_at < 1:
            violation("fall marker before the first mora")
            fall_at = None
        elif fall_at == 1:
            if rise_at is not None and not fall_before_rise:
                violation("head-high phrase must not carry a rise marker")
        elif rise_at is None:
            violation("fall marker after mora 2 or later requires a rise marker")
    elif n >= 2 and rise_at is None:
        violation("multi-mora flat phrase must carry a rise marker")

    accent = fall_at if fall_at is not None else 0
    return AccentPhrase(tuple(moras), accent)


def serialize_phrase(phrase: AccentPhrase) -> str:
    """Render an :class:`AccentPhrase` back into label notation.

    Inverse of :func:`parse_phrase`: flat multi-mora phrases carry ``[``
    after the first mora, head-high phrases carry only ``]`` after it, and
    a single flat mora is rendered bare.
    """
    moras, accent = phrase.moras, phrase.accent
    if len(moras) == 1:
        return moras[0] + (FALL if accent == 1 else "")
    head = moras[0]
    rest = "".join(moras[1:])
    if accent == 0:
        return head + RISE + rest
    if accent == 1:
        return head + FALL + rest
    return head + RISE + "".join(moras[1:accent]) + FALL + "".join(moras[accent:])


@lru_cache(maxsize=4096)
def _pitch_pattern(n: int, accent: int) -> tuple[str, ...]:
    if n == 1:
        return ("H",) if accent == 1 else ("L",)
    if accent == 0:
        return ("L",) + ("H",) * (n - 1)
    if accent == 1:
        return ("H",) + ("L",) * (n - 1)
    return ("L",) + ("H",) * (accent - 1) + ("L",) * (n - accent)


def accent_to_pitch(phrase: AccentPhrase) -> tuple[str, ...]:
    """Mora-level H/L pitch levels of a phrase under Tokyo-dialect rules.

    Flat phrases run L H...H; head-high phrases H L...L; accent k drops
    after the k-th mora: L H^(k-1) L^(n-k).  Note that tail-high (accent n)
    and flat phrases share the same phrase-internal pattern.
    """
    return _pitch_pattern(len(phrase.moras), phrase.accent)


@lru_cache(maxsize=4096)
def _accent_from_pattern(pitch: tuple[str, ...]) -> int:
    n = len(pitch)
    for level in pitch:
        if level != "H" and level != "L":
            raise LabelError(f"pitch level must be 'H' or 'L', got {level!r}")
    if n == 1:
        return 1 if pitch[0] == "H" else 0
    if pitch[0] == "H":
        if "H" in pitch[1:]:
            raise LabelError("pitch may not rise again after a head-high start")
        return 1
    if pitch[1] != "H":
        raise LabelError("no legal Tokyo pattern stays low past the first mora")
    try:
        drop = pitch.index("L", 1)
    except ValueError:
        # L H...H: flat and tail-high coincide phrase-internally; report flat.
        return 0
    if "H" in pitch[drop:]:
        raise LabelError("pitch may not rise again after the fall")
    return drop


def pitch_to_accent(moras, pitch) -> AccentPhrase:
    """Recover the accent phrase whose Tokyo pattern equals ``pitch``.

    Raises :class:`LabelError` when the levels match no legal pattern.  The
    ambiguous all-high tail (L H...H) is reported as accent 0; tail-high
    phrases are indistinguishable from flat ones inside the phrase.
    """
    moras = tuple(moras)
    pitch = tuple(pitch)
    if len(moras) != len(pitch):
        raise LabelError(
            f"pitch length {len(pitch)} does not match mora count {len(moras)}"
        )
    return AccentPhrase(moras, _accent_from_pattern(pitch))


@dataclass(frozen=True, slots=True)
class Pause:
    """Pause marker (``_``) between phrases."""


@dataclass(frozen=True, slots=True)
class PhraseEntry:
    """One phrase within an utterance, optionally with its source graphemes."""

    phrase: AccentPhrase
    graphemes: str | None = None


@dataclass(frozen=True, slots=True)
class UtteranceAnnotation:
    """Ordered phrases and pauses of one utterance."""

    items: tuple[PhraseEntry | Pause, ...] = ()

    def phrase_entries(self) -> tuple[PhraseEntry, ...]:
        return tuple(it for it in self.items if isinstance(it, PhraseEntry))

    def phonemes(self) -> str:
        """Utterance-level phonemic labels: concatenated Katakana."""
        return "".join(e.phrase.pronunciation() for e in self.phrase_entries())

    def pitch(self) -> tuple[str, ...]:
        """Utterance-level mora pitch levels, phrases concatenated."""
        levels: list[str] = []
        for e in self.phrase_entries():
            levels.extend(accent_to_pitch(e.phrase))
        return tuple(levels)

    def graphemes(self) -> str | None:
        """Concatenated phrase graphemes, or None if any phrase lacks them."""
        parts = []
        for e in self.phrase_entries():
            if e.graphemes is None:
                return None
            parts.append(e.graphemes)
        return "".join(parts)

    def mora_spans(self) -> list[tuple[int, int]]:
        """Per-phrase (start, end) mora offsets in the concatenated phonemes."""
        spans = []
        offset = 0
        for e in self.phrase_entries():
            n = e.phrase.mora_count
            spans.append((offset, offset + n))
            offset += n
        return spans


def parse_utterance(
    text: str,
    with_graphemes: bool = False,
    *,
    strict: bool = True,
    issues: list[str] | None = None,
) -> UtteranceAnnotation:
    """Parse an utterance stream of ``#``-terminated phrases and ``_`` pauses.

    With ``with_graphemes`` every phrase must look like ``graphemes|labels#``.
    Errors name the zero-based index of the offending phrase.  In lenient
    mode violations are collected into ``issues`` and parsing continues;
    phrases that cannot be salvaged at all are dropped.
    """

    def violation(msg: str, index: int):
        if strict:
            raise LabelError(msg, phrase_index=index)
        if issues is not None:
            issues.append(f"phrase {index}: {msg}")

    items: list[PhraseEntry | Pause] = []
    i = 0
    index = 0
    length = len(text)
    while i < length:
        if text[i] == PAUSE_MARK:
            items.append(Pause())
            i += 1
            continue
        end = text.find(PHRASE_BOUNDARY, i)
        if end < 0:
            violation("unterminated phrase (missing '#')", index)
            end = length
        chunk = text[i:end]
        i = end + 1

        if PAUSE_MARK in chunk:
            violation("pause marker inside a phrase", index)
            chunk = chunk.replace(PAUSE_MARK, "")

        graphemes: str | None = None
        labels = chunk
        delims = chunk.count(GRAPHEME_DELIMITER)
        if with_graphemes:
            if delims != 1:
                violation(f"expected one grapheme delimiter, found {delims}", index)
            if delims >= 1:
                graphemes, labels = chunk.split(GRAPHEME_DELIMITER, 1)
                labels = labels.replace(GRAPHEME_DELIMITER, "")
                if not graphemes:
                    violation("empty graphemes", index)
                    graphemes = None
        elif delims:
            violation("unexpected grapheme delimiter", index)
            graphemes, labels = chunk.split(GRAPHEME_DELIMITER, 1)
            labels = labels.replace(GRAPHEME_DELIMITER, "")
            graphemes = graphemes or None

        phrase_issues: list[str] | None = None if strict else []
        try:
            phrase = parse_phrase(labels, strict=strict, issues=phrase_issues)
        except LabelError as exc:
            if strict:
                raise LabelError(str(exc), phrase_index=index) from None
            violation(f"dropped unparseable phrase: {exc}", index)
            index += 1
            continue
        if phrase_issues and issues is not None:
            issues.extend(f"phrase {index}: {msg}" for msg in phrase_issues)
        items.append(PhraseEntry(phrase, graphemes))
        index += 1

    return UtteranceAnnotation(tuple(items))


def serialize_utterance(annotation: UtteranceAnnotation) -> str:
    """Render an utterance back to label notation, bit-exact round trip."""
    parts = []
    for item in annotation.items:
        if isinstance(item, Pause):
            parts.append(PAUSE_MARK)
        else:
            if item.graphemes is not None:
                parts.append(item.graphemes)
                parts.append(GRAPHEME_DELIMITER)
            parts.append(serialize_phrase(item.phrase))
            parts.append(PHRASE_BOUNDARY)
    return "".join(parts)


# Display symbols map to code points absent from common ASR tokenizers so
# that label streams survive model vocabularies unharmed.
_ENCODE_TABLE = str.maketrans(DISPLAY_SYMBOLS, INTERCHANGE_SYMBOLS)
_DECODE_TABLE = str.maketrans(INTERCHANGE_SYMBOLS, DISPLAY_SYMBOLS)


def encode_symbols(text: str) -> str:
    """Replace display symbols ``[ ] # _ |`` with their interchange code points."""
    if any(ch in text for ch in INTERCHANGE_SYMBOLS):
        raise CodecError("input already contains interchange symbols")
    return text.translate(_ENCODE_TABLE)


def decode_symbols(text: str) -> str:
    """Replace interchange code points with display symbols ``[ ] # _ |``."""
    has_interchange = any(ch in text for ch in INTERCHANGE_SYMBOLS)
    if has_interchange and any(ch in text for ch in DISPLAY_SYMBOLS):
        raise CodecError("display and interchange symbols are mixed")
    return text.translate(_DECODE_TABLE) if has_interchange else text


def detect_symbols(text: str) -> str:
    """Guess the symbol mode of a label stream: ``display`` or ``interchange``.

    The first code point belonging to either symbol set decides; symbol-free
    text defaults to display.
    """
    for ch in text:
        if ch in DISPLAY_SYMBOLS:
            return "display"
        if ch in INTERCHANGE_SYMBOLS:
            return "interchange"
    return "display"
