"""Manifest parsing: one ``id<TAB>audio_path<TAB>transcript`` row per utterance."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path


class ManifestError(Exception):
    pass


@dataclass(frozen=True, slots=True)
class ManifestRow:
    id: str
    audio_path: Path
    transcript: str


@dataclass(frozen=True, slots=True)
class AdapterJob:
    manifest_path: Path
    output_path: Path
    model: str = ""
    batch_size: int = 8

    def __post_init__(self):
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


def read_manifest(path) -> list[ManifestRow]:
    """Read and validate a manifest; audio files must exist."""
    rows: list[ManifestRow] = []
    seen: set[str] = set()
    text = Path(path).read_text(encoding="utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip() or line.startswith("#"):
            continue
        columns = line.split("\t")
        if len(columns) != 3:
            raise ManifestError(f"line {lineno}: expected 3 columns, got {len(columns)}")
        uid, audio, transcript = columns
        if not uid:
            raise ManifestError(f"line {lineno}: empty id")
        if uid in seen:
            raise ManifestError(f"line {lineno}: duplicate id {uid!r}")
        if not transcript:
            raise ManifestError(f"line {lineno}: empty transcript")
        audio_path = Path(audio)
        if not audio_path.is_file():
            raise ManifestError(f"line {lineno}: audio file not found: {audio}")
        seen.add(uid)
        rows.append(ManifestRow(uid, audio_path, transcript))
    return rows
