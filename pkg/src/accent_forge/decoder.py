"""Dictionary-constrained correction of predicted phrase labels.

For each phrase the candidate pronunciation closest to the prediction (in
mora-level edit distance) replaces it, and the accent type is restored:
unchanged when the mora count is unchanged or the accent is flat, head-high
or tail-high, otherwise shifted by the mora-count difference so the nucleus
keeps its distance from the phrase end.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .label_core import AccentPhrase, Pause, PhraseEntry, UtteranceAnnotation
from .lexicon import Lexicon, PronLattice, Pronunciation, build_lattice, segment

STATUS_UNCHANGED = "unchanged"
STATUS_CORRECTED = "corrected"
STATUS_UNCORRECTABLE = "uncorrectable"
STATUS_ACCENT_CLAMPED = "accent_clamped"


@dataclass(frozen=True, slots=True)
class PhraseHypothesis:
    """A predicted phrase: its graphemes and the predicted accent phrase."""

    graphemes: str
    predicted: AccentPhrase

    def __post_init__(self):
        if not self.graphemes:
            raise ValueError("hypothesis graphemes must be non-empty")


@dataclass(frozen=True, slots=True)
class CorrectionConfig:
    """Knobs for the correction pipeline.

    ``max_enumerated_paths`` caps only the exhaustive-enumeration oracle;
    the production search is a lattice DP whose cost does not depend on the
    path count.  The policy fields are fixed single-option contracts kept
    explicit for auditability.
    """

    max_enumerated_paths: int = 4096
    clamp_policy: str = "clamp-and-flag"
    uncorrectable_policy: str = "pass-through-and-flag"

    def __post_init__(self):
        if self.max_enumerated_paths < 1:
            raise ValueError("max_enumerated_paths must be >= 1")
        if self.clamp_policy != "clamp-and-flag":
            raise ValueError(f"unsupported clamp_policy {self.clamp_policy!r}")
        if self.uncorrectable_policy != "pass-through-and-flag":
            raise ValueError(
                f"unsupported uncorrectable_policy {self.uncorrectable_policy!r}"
            )


DEFAULT_CONFIG = CorrectionConfig()


@dataclass(frozen=True, slots=True)
class CorrectionResult:
    """Outcome of correcting one phrase."""

    phrase: AccentPhrase
    status: str
    edit_cost: int


def mora_edit_distance(a: Sequence[str], b: Sequence[str]) -> int:
    """Levenshtein distance with unit costs over mora tokens.

    Operating on moras rather than code points keeps digraphs like ギョ
    atomic under alignment.
    """
    la, lb = len(a), len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    prev = list(range(lb + 1))
    for i in range(1, la + 1):
        am = a[i - 1]
        cur = [i] + [0] * lb
        for j in range(1, lb + 1):
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (am != b[j - 1]))
        prev = cur
    return prev[lb]


def _extend_prefix(row: list[int], candidate: Pronunciation, pred: Pronunciation) -> list[int]:
    """Advance a prefix-cost row across one candidate's moras."""
    width = len(pred)
    cur = list(row)
    for mora in candidate:
        nxt = [cur[0] + 1]
        for j in range(1, width + 1):
            nxt.append(min(cur[j] + 1, nxt[j - 1] + 1, cur[j - 1] + (mora != pred[j - 1])))
        cur = nxt
    return cur


def _extend_suffix(row: list[int], candidate: Pronunciation, pred: Pronunciation) -> list[int]:
    """Mirror of :func:`_extend_prefix` for suffix costs (right-to-left)."""
    width = len(pred)
    cur = list(row)
    for mora in reversed(candidate):
        nxt = [0] * (width + 1)
        nxt[width] = cur[width] + 1
        for j in range(width - 1, -1, -1):
            nxt[j] = min(cur[j] + 1, nxt[j + 1] + 1, cur[j + 1] + (mora != pred[j]))
        cur = nxt
    return cur


def best_path(
    lattice: PronLattice,
    predicted: Sequence[str],
    cfg: CorrectionConfig = DEFAULT_CONFIG,
) -> tuple[Pronunciation, int]:
    """Lattice path with minimum mora edit distance to ``predicted``.

    Runs a DP over (lattice node, predicted prefix) so the cost is linear in
    the arcs rather than the path count.  Ties resolve to the earliest path
    in lexicographic arc order, i.e. dictionary priority left to right.
    """
    if lattice.uncorrectable:
        raise ValueError("lattice is uncorrectable; route the prediction through unchanged")
    pred = tuple(predicted)
    width = len(pred)

    # suffix[g][j] = minimal cost of aligning groups g.. against pred[j:]
    suffix: list[list[int]] = [[]] * (len(lattice.groups) + 1)
    suffix[len(lattice.groups)] = [width - j for j in range(width + 1)]
    for g in range(len(lattice.groups) - 1, -1, -1):
        rows = [_extend_suffix(suffix[g + 1], cand, pred) for cand in lattice.groups[g]]
        suffix[g] = [min(values) for values in zip(*rows)]

    total = suffix[0][0]
    row = list(range(width + 1))
    chosen: list[Pronunciation] = []
    for g, group in enumerate(lattice.groups):
        nxt = suffix[g + 1]
        for candidate in group:
            extended = _extend_prefix(row, candidate, pred)
            if min(a + b for a, b in zip(extended, nxt)) == total:
                row = extended
                chosen.append(candidate)
                break
        else:  # pragma: no cover - the suffix DP guarantees feasibility
            raise RuntimeError(f"no feasible candidate in arc group {g}")
    pronunciation = tuple(mora for candidate in chosen for mora in candidate)
    return pronunciation, total


def best_path_by_enumeration(
    lattice: PronLattice,
    predicted: Sequence[str],
    cfg: CorrectionConfig = DEFAULT_CONFIG,
) -> tuple[Pronunciation, int]:
    """Exhaustive-enumeration twin of :func:`best_path`, capped by config.

    Kept as an independently simple oracle; production code should call
    :func:`best_path`.
    """
    if lattice.uncorrectable:
        raise ValueError("lattice is uncorrectable; route the prediction through unchanged")
    if lattice.path_count > cfg.max_enumerated_paths:
        raise ValueError(
            f"lattice has {lattice.path_count} paths, above the enumeration cap "
            f"{cfg.max_enumerated_paths}"
        )
    pred = tuple(predicted)
    best: tuple[Pronunciation, int] | None = None
    for path in lattice.paths():
        cost = mora_edit_distance(path, pred)
        if best is None or cost < best[1]:
            best = (path, cost)
    assert best is not None
    return best


def restore_accent(a_orig: int, m_orig: int, m_mod: int) -> tuple[int, bool]:
    """Restore the accent type after a pronunciation correction.

    The accent is kept when the mora count is unchanged or the original
    accent is flat (0), head-high (1) or tail-high (m_orig); otherwise the
    mora-count difference is added, preserving the nucleus distance from
    the phrase end.  A result outside [0, m_mod] is clamped and flagged.
    """
    if m_orig < 1 or m_mod < 1:
        raise ValueError("mora counts must be >= 1")
    if not 0 <= a_orig <= m_orig:
        raise ValueError(f"accent {a_orig} out of range for {m_orig} moras")

    if m_mod == m_orig or a_orig in (0, 1, m_orig):
        restored = a_orig
    else:
        restored = a_orig + (m_mod - m_orig)

    if restored < 0:
        return 0, True
    if restored > m_mod:
        return m_mod, True
    return restored, False


def correct_phrase(
    hypothesis: PhraseHypothesis,
    lexicon: Lexicon,
    cfg: CorrectionConfig = DEFAULT_CONFIG,
) -> CorrectionResult:
    """Correct one phrase with dictionary knowledge.

    Pipeline: segment the graphemes, build a candidate lattice, pick the
    closest path, restore the accent, reserialize.  Graphemes are never
    modified; dictionary gaps yield ``uncorrectable`` pass-through rather
    than errors.
    """
    segmentation = segment(hypothesis.graphemes, lexicon)
    lattice = build_lattice(segmentation)
    predicted = hypothesis.predicted
    if lattice.uncorrectable:
        return CorrectionResult(predicted, STATUS_UNCORRECTABLE, 0)

    pronunciation, cost = best_path(lattice, predicted.moras, cfg)
    if cost == 0:
        return CorrectionResult(predicted, STATUS_UNCHANGED, 0)

    accent, clamped = restore_accent(
        predicted.accent, predicted.mora_count, len(pronunciation)
    )
    phrase = AccentPhrase(pronunciation, accent)
    status = STATUS_ACCENT_CLAMPED if clamped else STATUS_CORRECTED
    return CorrectionResult(phrase, status, cost)


def correct_utterance(
    annotation: UtteranceAnnotation,
    lexicon: Lexicon,
    cfg: CorrectionConfig = DEFAULT_CONFIG,
) -> tuple[UtteranceAnnotation, tuple[CorrectionResult, ...]]:
    """Correct every phrase of an utterance independently.

    Phrase order, graphemes and pause positions are preserved bit-exactly.
    Raises ``ValueError`` if any phrase lacks graphemes.
    """
    items: list[PhraseEntry | Pause] = []
    results: list[CorrectionResult] = []
    for item in annotation.items:
        if isinstance(item, Pause):
            items.append(item)
            continue
        if item.graphemes is None:
            raise ValueError(f"phrase {len(results)} lacks graphemes; cannot correct")
        result = correct_phrase(PhraseHypothesis(item.graphemes, item.phrase), lexicon, cfg)
        items.append(PhraseEntry(result.phrase, item.graphemes))
        results.append(result)
    return UtteranceAnnotation(tuple(items)), tuple(results)
