"""CLI: run batch label inference over an audio+transcript manifest."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .engines import create_engine
from .manifest import AdapterJob, ManifestError
from .runner import run_inference


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="asr-adapter",
        description="Emit TTS-label hypothesis JSONL from audio+transcript pairs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run inference over a manifest")
    p.add_argument("--manifest", type=Path, required=True, help="TSV: id, audio path, transcript")
    p.add_argument("--output", type=Path, required=True, help="hypothesis JSONL to write")
    p.add_argument("--model", default="", help="model id or checkpoint path")
    p.add_argument(
        "--engine",
        choices=("whisper", "rule"),
        default=None,
        help="inference engine (default: whisper when --model is set, else rule)",
    )
    p.add_argument("--batch-size", type=int, default=8)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    engine_name = args.engine or ("whisper" if args.model else "rule")
    try:
        job = AdapterJob(
            manifest_path=args.manifest,
            output_path=args.output,
            model=args.model,
            batch_size=args.batch_size,
        )
        engine = create_engine(engine_name, args.model)
        stats = run_inference(job, engine)
    except (ManifestError, ValueError, FileNotFoundError) as exc:
        print(f"asr-adapter: {exc}", file=sys.stderr)
        return 1
    print(f"emitted {stats.emitted} utterances, {stats.failed} failed", file=sys.stderr)
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
