"""Batch inference over a manifest, emitting hypothesis JSONL."""

from __future__ import annotations

import json
from dataclasses import dataclass

from .engines import LabelEngine, create_engine
from .manifest import AdapterJob, ManifestRow, read_manifest


@dataclass(slots=True)
class RunStats:
    emitted: int = 0
    failed: int = 0


def _batches(rows: list[ManifestRow], size: int):
    for start in range(0, len(rows), size):
        yield rows[start : start + size]


def run_inference(job: AdapterJob, engine: LabelEngine | None = None) -> RunStats:
    """Run the engine over every manifest row, in order.

    Each utterance becomes one JSONL line ``{"id", "transcript", "labels"}``
    with the raw interchange-symbol label stream and the transcript embedded
    verbatim.  A failing utterance is recorded as a line with an ``error``
    field and the job continues.
    """
    rows = read_manifest(job.manifest_path)
    if engine is None:
        engine = create_engine("whisper" if job.model else "rule", job.model)

    stats = RunStats()
    with open(job.output_path, "w", encoding="utf-8") as out:
        for batch in _batches(rows, job.batch_size):
            try:
                labels = engine.transcribe(batch)
                results = list(zip(batch, labels, [None] * len(batch)))
            except Exception:
                # isolate the failing utterances by retrying one at a time
                results = []
                for row in batch:
                    try:
                        labels = engine.transcribe([row])
                        results.append((row, labels[0], None))
                    except Exception as exc:
                        results.append((row, None, str(exc) or type(exc).__name__))
            for row, labels_text, error in results:
                obj = {"id": row.id, "transcript": row.transcript}
                if error is None:
                    obj["labels"] = labels_text
                    stats.emitted += 1
                else:
                    obj["error"] = error
                    stats.failed += 1
                out.write(json.dumps(obj, ensure_ascii=False) + "\n")
    return stats
