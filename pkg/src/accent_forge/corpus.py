"""Hypothesis/reference JSONL corpora and per-line label decoding.

One object per line: ``{"id": ..., "transcript": ..., "labels": ...}`` where
``labels`` is a raw phrase stream in display or interchange symbols (mode
auto-detected per line unless forced).  Corrected output keeps the input
shape and adds ``corrected`` plus per-phrase ``status``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Union

from .errors import AccentForgeError
from .label_core import (
    GRAPHEME_DELIMITER,
    UtteranceAnnotation,
    decode_symbols,
    detect_symbols,
    encode_symbols,
    parse_utterance,
)

SYMBOL_MODES = ("display", "interchange", "auto")


@dataclass(frozen=True, slots=True)
class Utterance:
    """One parsed corpus line."""

    id: str
    labels: str
    annotation: UtteranceAnnotation
    symbol_mode: str
    transcript: Optional[str] = None


def parse_labels(
    labels: str,
    symbols: str = "auto",
    *,
    strict: bool = True,
    issues: list[str] | None = None,
) -> tuple[UtteranceAnnotation, str]:
    """Decode a label stream (display or interchange) into an annotation.

    Returns the annotation and the symbol mode that was applied.  Phrases
    are parsed with graphemes whenever the stream carries the ``|``
    delimiter.
    """
    if symbols not in SYMBOL_MODES:
        raise ValueError(f"unknown symbol mode {symbols!r}")
    mode = detect_symbols(labels) if symbols == "auto" else symbols
    text = decode_symbols(labels) if mode == "interchange" else labels
    annotation = parse_utterance(
        text,
        with_graphemes=GRAPHEME_DELIMITER in text,
        strict=strict,
        issues=issues,
    )
    return annotation, mode


def render_labels(text: str, symbol_mode: str) -> str:
    """Re-encode display-symbol label text for the requested mode."""
    return encode_symbols(text) if symbol_mode == "interchange" else text


def load_jsonl(
    path: Union[str, Path],
    symbols: str = "auto",
    *,
    strict: bool = True,
) -> tuple[dict[str, Utterance], list[str]]:
    """Read a hypothesis/reference JSONL file.

    Lines written by the correction pipeline carry a ``corrected`` field,
    which takes precedence over ``labels`` so corrected corpora can be
    scored directly.  Malformed lines do not abort the load; they are
    reported as warnings ("line N [id]: reason") and skipped, so callers
    can keep scoring the valid remainder.
    """
    utterances: dict[str, Utterance] = {}
    warnings: list[str] = []
    with open(path, encoding="utf-8") as stream:
        for lineno, line in enumerate(stream, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                warnings.append(f"line {lineno}: invalid JSON: {exc.msg}")
                continue
            uid = obj.get("id")
            labels = obj.get("corrected", obj.get("labels"))
            if not isinstance(uid, str) or not uid:
                warnings.append(f"line {lineno}: missing or empty 'id'")
                continue
            if not isinstance(labels, str):
                warnings.append(f"line {lineno} [{uid}]: missing 'labels'")
                continue
            if uid in utterances:
                warnings.append(f"line {lineno} [{uid}]: duplicate id, keeping first")
                continue
            try:
                annotation, mode = parse_labels(labels, symbols, strict=strict)
            except (AccentForgeError, ValueError) as exc:
                warnings.append(f"line {lineno} [{uid}]: {exc}")
                continue
            utterances[uid] = Utterance(
                id=uid,
                labels=labels,
                annotation=annotation,
                symbol_mode=mode,
                transcript=obj.get("transcript"),
            )
    return utterances, warnings


def write_jsonl(path: Union[str, Path], objects: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as stream:
        for obj in objects:
            stream.write(json.dumps(obj, ensure_ascii=False) + "\n")
