"""HTTP service wrapping the toolkit for long-running, multi-client use.

The lexicon is loaded once at startup and shared by all requests; every
operation underneath is a pure function, so the endpoints are safe under
concurrency.
"""

from __future__ import annotations

import os
from typing import Literal, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import corpus as corpus_io
from .cli import LEXICON_ENV_VAR
from .decoder import CorrectionConfig, correct_utterance
from .errors import AccentForgeError
from .label_core import accent_to_pitch, decode_symbols, encode_symbols, serialize_utterance
from .lexicon import load_lexicon
from .metrics import FILTER_INTERSECTION, format_report_table, score_corpus

SymbolMode = Literal["display", "interchange", "auto"]


class HealthResponse(BaseModel):
    status: str
    lexicon_entries: Optional[int] = None


class ValidateRequest(BaseModel):
    lines: list[str]
    strict: bool = True
    symbols: SymbolMode = "auto"


class LineDiagnostic(BaseModel):
    line: int
    valid: bool
    messages: list[str] = Field(default_factory=list)


class ValidateResponse(BaseModel):
    valid: bool
    lines: list[LineDiagnostic]


class ConvertRequest(BaseModel):
    lines: list[str]
    target: Literal["pitch", "accent", "phonemes", "encode", "decode"]
    symbols: SymbolMode = "auto"


class ConvertResponse(BaseModel):
    lines: list[str]


class UtterancePayload(BaseModel):
    id: str
    labels: str
    transcript: Optional[str] = None


class CorrectRequest(BaseModel):
    utterances: list[UtterancePayload]
    symbols: SymbolMode = "auto"
    strict: bool = True


class CorrectedUtterance(BaseModel):
    id: str
    labels: str
    corrected: str
    status: list[str]
    transcript: Optional[str] = None


class CorrectResponse(BaseModel):
    utterances: list[CorrectedUtterance]
    summary: dict[str, int]


class ScoreRequest(BaseModel):
    reference: list[UtterancePayload]
    systems: dict[str, list[UtterancePayload]]
    filter_mode: Literal["intersection", "per-system"] = FILTER_INTERSECTION
    symbols: SymbolMode = "auto"


class ScoreResponse(BaseModel):
    reports: dict[str, dict]
    table: str


def _parse_corpus(payloads: list[UtterancePayload], symbols: str) -> dict:
    annotations = {}
    for item in payloads:
        try:
            annotation, _ = corpus_io.parse_labels(item.labels, symbols)
        except (AccentForgeError, ValueError) as exc:
            raise HTTPException(status_code=422, detail=f"utterance {item.id!r}: {exc}")
        annotations[item.id] = annotation
    return annotations


def create_app(lexicon_path: Optional[str] = None) -> FastAPI:
    """Build the service; the lexicon path falls back to $ACCENT_FORGE_LEXICON."""
    app = FastAPI(title="accent-forge", version="0.1.0")
    path = lexicon_path or os.environ.get(LEXICON_ENV_VAR)
    app.state.lexicon = load_lexicon(path) if path else None

    @app.get("/health", response_model=HealthResponse)
    def health():
        lexicon = app.state.lexicon
        return HealthResponse(
            status="ok", lexicon_entries=len(lexicon) if lexicon is not None else None
        )

    @app.post("/validate", response_model=ValidateResponse)
    def validate(request: ValidateRequest):
        diagnostics = []
        for lineno, line in enumerate(request.lines, 1):
            issues: list[str] = []
            try:
                corpus_io.parse_labels(line, request.symbols, strict=request.strict, issues=issues)
            except (AccentForgeError, ValueError) as exc:
                diagnostics.append(LineDiagnostic(line=lineno, valid=False, messages=[str(exc)]))
                continue
            diagnostics.append(LineDiagnostic(line=lineno, valid=True, messages=issues))
        return ValidateResponse(valid=all(d.valid for d in diagnostics), lines=diagnostics)

    @app.post("/convert", response_model=ConvertResponse)
    def convert(request: ConvertRequest):
        out = []
        for lineno, line in enumerate(request.lines, 1):
            try:
                if request.target == "encode":
                    out.append(encode_symbols(line))
                elif request.target == "decode":
                    out.append(decode_symbols(line))
                else:
                    annotation, _ = corpus_io.parse_labels(line, request.symbols)
                    if request.target == "phonemes":
                        out.append(annotation.phonemes())
                    elif request.target == "pitch":
                        tokens = []
                        for entry in annotation.phrase_entries():
                            levels = accent_to_pitch(entry.phrase)
                            tokens.extend(
                                f"{m}:{lv}" for m, lv in zip(entry.phrase.moras, levels)
                            )
                        out.append(" ".join(tokens))
                    else:
                        out.append(
                            " ".join(
                                f"{e.phrase.pronunciation()}:{e.phrase.accent}"
                                for e in annotation.phrase_entries()
                            )
                        )
            except (AccentForgeError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=f"line {lineno}: {exc}")
        return ConvertResponse(lines=out)

    @app.post("/correct", response_model=CorrectResponse)
    def correct(request: CorrectRequest):
        lexicon = app.state.lexicon
        if lexicon is None:
            raise HTTPException(status_code=503, detail="no lexicon configured")
        corrected_list = []
        summary: dict[str, int] = {}
        for item in request.utterances:
            try:
                annotation, mode = corpus_io.parse_labels(
                    item.labels, request.symbols, strict=request.strict
                )
                corrected, results = correct_utterance(annotation, lexicon, CorrectionConfig())
            except (AccentForgeError, ValueError) as exc:
                raise HTTPException(status_code=422, detail=f"utterance {item.id!r}: {exc}")
            statuses = [r.status for r in results]
            for status in statuses:
                summary[status] = summary.get(status, 0) + 1
            corrected_list.append(
                CorrectedUtterance(
                    id=item.id,
                    labels=item.labels,
                    corrected=corpus_io.render_labels(serialize_utterance(corrected), mode),
                    status=statuses,
                    transcript=item.transcript,
                )
            )
        return CorrectResponse(utterances=corrected_list, summary=summary)

    @app.post("/score", response_model=ScoreResponse)
    def score(request: ScoreRequest):
        reference = _parse_corpus(request.reference, request.symbols)
        systems = {
            name: _parse_corpus(payloads, request.symbols)
            for name, payloads in request.systems.items()
        }
        try:
            reports = score_corpus(reference, systems, request.filter_mode)
        except ValueError as exc:
            raise HTTPException(status_code=422, detail=str(exc))
        return ScoreResponse(
            reports={name: report.to_dict() for name, report in reports.items()},
            table=format_report_table(reports),
        )

    return app
