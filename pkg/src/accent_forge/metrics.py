"""Corpus scoring: CER, accent-phrase boundary accuracy and pitch F1.

CER is micro-averaged (pooled edit distance over pooled reference length).
Prosodic metrics are computed only on utterances whose phonemic labels are
predicted exactly, because pitch sequences of mismatched phoneme strings
cannot be aligned; the filter can take the intersection over all systems or
apply per system.  H is scored as the positive pitch class.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from .decoder import mora_edit_distance
from .label_core import UtteranceAnnotation

FILTER_INTERSECTION = "intersection"
FILTER_PER_SYSTEM = "per-system"
POSITIVE_PITCH_CLASS = "H"


@dataclass(frozen=True, slots=True)
class EvalPair:
    """Reference and hypothesis annotations of one utterance."""

    id: str
    reference: UtteranceAnnotation
    hypothesis: UtteranceAnnotation


@dataclass(slots=True)
class ScoreReport:
    """Corpus-level scores for one system.

    Prosodic fields are ``None`` (reported as n/a) when the phoneme-correct
    filter leaves no utterances; they are never silently zero.
    """

    system: str
    cer_graphemes: Optional[float]
    cer_phonemes: float
    boundary_accuracy: Optional[float]
    pitch_f1: Optional[float]
    utterances_scored: int
    utterances_filtered_out: int
    reference_phrases: int
    reference_moras: int
    filter_mode: str = FILTER_INTERSECTION
    positive_class: str = POSITIVE_PITCH_CLASS
    parse_warnings: int = 0

    def to_dict(self) -> dict:
        return {
            "system": self.system,
            "cer_graphemes": self.cer_graphemes,
            "cer_phonemes": self.cer_phonemes,
            "boundary_accuracy": self.boundary_accuracy,
            "pitch_f1": self.pitch_f1,
            "counts": {
                "utterances_scored": self.utterances_scored,
                "utterances_filtered_out": self.utterances_filtered_out,
                "reference_phrases": self.reference_phrases,
                "reference_moras": self.reference_moras,
                "parse_warnings": self.parse_warnings,
            },
            "filter_mode": self.filter_mode,
            "positive_class": self.positive_class,
        }


def cer(reference: Sequence, hypothesis: Sequence) -> float:
    """Edit distance between token sequences divided by the reference length."""
    if len(reference) == 0:
        raise ValueError("reference must be non-empty")
    return mora_edit_distance(reference, hypothesis) / len(reference)


def boundary_accuracy(pair: EvalPair) -> tuple[int, int]:
    """Count reference phrases reproduced with identical mora spans.

    A reference phrase is correct iff the hypothesis contains a phrase with
    the same (start, end) offsets in the concatenated phoneme sequence.
    Returns (correct, total) for corpus aggregation.
    """
    ref_spans = pair.reference.mora_spans()
    hyp_spans = set(pair.hypothesis.mora_spans())
    correct = sum(1 for span in ref_spans if span in hyp_spans)
    return correct, len(ref_spans)


def _pitch_confusion(pair: EvalPair) -> tuple[int, int, int]:
    ref = pair.reference.pitch()
    hyp = pair.hypothesis.pitch()
    if len(ref) != len(hyp):
        raise ValueError(
            f"utterance {pair.id}: mora count mismatch {len(ref)} != {len(hyp)} "
            "(pairs must pass the phoneme-correct filter)"
        )
    tp = fp = fn = 0
    for r, h in zip(ref, hyp):
        if h == POSITIVE_PITCH_CLASS:
            if r == POSITIVE_PITCH_CLASS:
                tp += 1
            else:
                fp += 1
        elif r == POSITIVE_PITCH_CLASS:
            fn += 1
    return tp, fp, fn


def pitch_f1(pairs: Iterable[EvalPair]) -> float:
    """Micro-averaged F1 on mora pitch levels with H as the positive class.

    Counts are pooled over all moras of all pairs before computing the
    score; all-low corpora with no disagreements score 1.
    """
    tp = fp = fn = 0
    for pair in pairs:
        dtp, dfp, dfn = _pitch_confusion(pair)
        tp += dtp
        fp += dfp
        fn += dfn
    if tp + fp + fn == 0:
        return 1.0
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def filter_phoneme_correct(
    reference: Mapping[str, UtteranceAnnotation],
    systems: Mapping[str, Mapping[str, UtteranceAnnotation]],
    mode: str = FILTER_INTERSECTION,
) -> dict[str, frozenset]:
    """Utterance ids eligible for prosodic scoring, per system.

    ``intersection`` keeps ids where every system reproduces the reference
    phonemes exactly (all systems share one set); ``per-system`` keeps ids
    where that one system is correct.
    """
    if mode not in (FILTER_INTERSECTION, FILTER_PER_SYSTEM):
        raise ValueError(f"unknown filter mode {mode!r}")
    ref_ids = set(reference)
    for name, corpus in systems.items():
        if set(corpus) != ref_ids:
            raise ValueError(f"system {name!r} does not cover the reference id set")

    correct: dict[str, frozenset] = {}
    for name, corpus in systems.items():
        correct[name] = frozenset(
            uid for uid in ref_ids if corpus[uid].phonemes() == reference[uid].phonemes()
        )
    if mode == FILTER_PER_SYSTEM:
        return correct
    shared = frozenset(ref_ids)
    for ids in correct.values():
        shared &= ids
    return {name: shared for name in systems}


def score_corpus(
    reference: Mapping[str, UtteranceAnnotation],
    systems: Mapping[str, Mapping[str, UtteranceAnnotation]],
    mode: str = FILTER_INTERSECTION,
    parse_warnings: Mapping[str, int] | None = None,
) -> dict[str, ScoreReport]:
    """Score every system against the reference corpus.

    CER is computed on all aligned utterances; boundary accuracy and pitch
    F1 only on the phoneme-correct filter set for the requested mode.
    """
    eligible = filter_phoneme_correct(reference, systems, mode)
    ids = sorted(reference)
    reports: dict[str, ScoreReport] = {}
    for name, corpus in systems.items():
        grapheme_edits = grapheme_len = 0
        phoneme_edits = phoneme_len = 0
        graphemes_seen = False
        for uid in ids:
            ref_ann, hyp_ann = reference[uid], corpus[uid]
            ref_ph, hyp_ph = ref_ann.phonemes(), hyp_ann.phonemes()
            phoneme_edits += mora_edit_distance(ref_ph, hyp_ph)
            phoneme_len += len(ref_ph)
            ref_g, hyp_g = ref_ann.graphemes(), hyp_ann.graphemes()
            if ref_g is not None and hyp_g is not None:
                graphemes_seen = True
                grapheme_edits += mora_edit_distance(ref_g, hyp_g)
                grapheme_len += len(ref_g)
        if phoneme_len == 0:
            raise ValueError("reference corpus has no phonemes to score")

        filtered = sorted(eligible[name])
        pairs = [EvalPair(uid, reference[uid], corpus[uid]) for uid in filtered]
        boundary_correct = boundary_total = 0
        for pair in pairs:
            c, t = boundary_accuracy(pair)
            boundary_correct += c
            boundary_total += t
        reports[name] = ScoreReport(
            system=name,
            cer_graphemes=(grapheme_edits / grapheme_len) if graphemes_seen and grapheme_len else None,
            cer_phonemes=phoneme_edits / phoneme_len,
            boundary_accuracy=(boundary_correct / boundary_total) if boundary_total else None,
            pitch_f1=pitch_f1(pairs) if pairs else None,
            utterances_scored=len(ids),
            utterances_filtered_out=len(ids) - len(filtered),
            reference_phrases=boundary_total,
            reference_moras=sum(len(reference[uid].pitch()) for uid in filtered),
            filter_mode=mode,
            parse_warnings=(parse_warnings or {}).get(name, 0),
        )
    return reports


def _fmt(value: Optional[float]) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def format_report_table(reports: Mapping[str, ScoreReport]) -> str:
    """Plain-text table of per-system scores (CER down, Acc./F1 up)."""
    lines = []
    if reports:
        sample = next(iter(reports.values()))
        lines.append(
            f"# filter={sample.filter_mode} positive_class={sample.positive_class}"
        )
    header = (
        f"{'System':<20} {'CER-graph':>10} {'CER-phon':>10} {'Acc.':>8} "
        f"{'F1':>8} {'Scored':>7} {'Filtered':>9}"
    )
    lines += [header, "-" * len(header)]
    for name in sorted(reports):
        r = reports[name]
        lines.append(
            f"{name:<20} {_fmt(r.cer_graphemes):>10} {_fmt(r.cer_phonemes):>10} "
            f"{_fmt(r.boundary_accuracy):>8} {_fmt(r.pitch_f1):>8} "
            f"{r.utterances_scored:>7} {r.utterances_filtered_out:>9}"
        )
    return "\n".join(lines)
