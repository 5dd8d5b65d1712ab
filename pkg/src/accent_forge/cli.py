"""Command-line surface: validate, convert, correct and score label corpora.

All subcommands are deterministic and randomness-free; ``correct`` can fan
utterances out to worker processes while keeping the output order equal to
the input order.
"""

from __future__ import annotations

import argparse
import json
import multiprocessing
import os
import sys
from collections import Counter
from pathlib import Path

from . import corpus as corpus_io
from .decoder import CorrectionConfig, correct_utterance
from .errors import AccentForgeError
from .label_core import (
    accent_to_pitch,
    decode_symbols,
    encode_symbols,
    serialize_utterance,
)
from .lexicon import Lexicon, load_lexicon
from .metrics import FILTER_INTERSECTION, FILTER_PER_SYSTEM, format_report_table, score_corpus

LEXICON_ENV_VAR = "ACCENT_FORGE_LEXICON"
EXIT_OK = 0
EXIT_ERRORS = 1
EXIT_USAGE = 2


def _add_symbols_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--symbols",
        choices=("display", "interchange", "auto"),
        default="auto",
        help="symbol mode of input label streams (default: auto-detect)",
    )


def _add_strict_flag(parser: argparse.ArgumentParser) -> None:
    parser.add_argument(
        "--strict",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="strict grammar checks; --no-strict records violations and parses best-effort",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="accent-forge",
        description="Japanese TTS-label toolkit: validate, convert, correct and score.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check label streams line by line")
    p.add_argument("input", type=Path, help="label file (raw streams or JSONL)")
    _add_symbols_flag(p)
    _add_strict_flag(p)

    p = sub.add_parser("convert", help="project label streams to another form")
    p.add_argument("input", type=Path)
    p.add_argument(
        "--target",
        required=True,
        choices=("pitch", "accent", "phonemes", "encode", "decode"),
    )
    p.add_argument("-o", "--output", type=Path, help="output file (default: stdout)")
    _add_symbols_flag(p)
    _add_strict_flag(p)

    p = sub.add_parser("correct", help="dictionary-correct a hypothesis JSONL corpus")
    p.add_argument("input", type=Path, help="hypothesis JSONL")
    p.add_argument(
        "--lexicon",
        type=Path,
        default=os.environ.get(LEXICON_ENV_VAR),
        help=f"lexicon TSV (default: ${LEXICON_ENV_VAR})",
    )
    p.add_argument("-o", "--output", type=Path, help="corrected JSONL (default: stdout)")
    p.add_argument("--jobs", type=int, default=1, help="worker processes (default: 1)")
    _add_symbols_flag(p)
    _add_strict_flag(p)

    p = sub.add_parser("score", help="score hypothesis corpora against a reference")
    p.add_argument("reference", type=Path, help="reference JSONL")
    p.add_argument(
        "hypotheses",
        nargs="+",
        metavar="[NAME=]PATH",
        help="hypothesis JSONL per system; NAME defaults to the file stem",
    )
    p.add_argument(
        "--filter",
        choices=(FILTER_INTERSECTION, FILTER_PER_SYSTEM),
        default=FILTER_INTERSECTION,
        help="phoneme-correct filter for prosodic metrics",
    )
    p.add_argument("--report", type=Path, help="write the machine-readable JSON report here")
    _add_symbols_flag(p)
    _add_strict_flag(p)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument(
        "--lexicon",
        type=Path,
        default=os.environ.get(LEXICON_ENV_VAR),
        help=f"lexicon TSV for /correct (default: ${LEXICON_ENV_VAR})",
    )
    return parser


def _extract_labels(line: str) -> tuple[str, str | None]:
    """Pull (labels, id) out of a JSONL line; raw lines pass through.

    Corrected corpora are validated on their ``corrected`` stream.
    """
    if line.lstrip().startswith("{"):
        obj = json.loads(line)
        labels = obj.get("corrected", obj.get("labels"))
        if not isinstance(labels, str):
            raise ValueError("JSON line has no 'labels' string")
        return labels, obj.get("id")
    return line, None


def cmd_validate(args) -> int:
    failures = 0
    lines = 0
    with open(args.input, encoding="utf-8") as stream:
        for lineno, raw in enumerate(stream, 1):
            lines += 1
            raw = raw.rstrip("\n")
            issues: list[str] = []
            where = f"line {lineno}"
            try:
                labels, uid = _extract_labels(raw)
                if uid:
                    where = f"line {lineno} [{uid}]"
                corpus_io.parse_labels(labels, args.symbols, strict=args.strict, issues=issues)
            except (AccentForgeError, ValueError, json.JSONDecodeError) as exc:
                failures += 1
                print(f"{where}: INVALID: {exc}")
                continue
            if issues:
                print(f"{where}: OK with warnings: " + "; ".join(issues))
            else:
                print(f"{where}: OK")
    print(f"{lines} lines, {failures} invalid", file=sys.stderr)
    return EXIT_OK if failures == 0 else EXIT_ERRORS


def _convert_line(labels: str, target: str, symbols: str, strict: bool) -> str:
    if target == "encode":
        return encode_symbols(labels)
    if target == "decode":
        return decode_symbols(labels)
    annotation, _ = corpus_io.parse_labels(labels, symbols, strict=strict)
    if target == "phonemes":
        return annotation.phonemes()
    if target == "pitch":
        tokens = []
        for entry in annotation.phrase_entries():
            levels = accent_to_pitch(entry.phrase)
            tokens.extend(f"{mora}:{level}" for mora, level in zip(entry.phrase.moras, levels))
        return " ".join(tokens)
    # accent: per-phrase pronunciation with its accent type
    return " ".join(
        f"{entry.phrase.pronunciation()}:{entry.phrase.accent}"
        for entry in annotation.phrase_entries()
    )


def cmd_convert(args) -> int:
    failures = 0
    out_lines: list[str] = []
    with open(args.input, encoding="utf-8") as stream:
        for lineno, raw in enumerate(stream, 1):
            raw = raw.rstrip("\n")
            try:
                out_lines.append(_convert_line(raw, args.target, args.symbols, args.strict))
            except (AccentForgeError, ValueError) as exc:
                failures += 1
                print(f"line {lineno}: {exc}", file=sys.stderr)
                out_lines.append("")
    text = "\n".join(out_lines) + ("\n" if out_lines else "")
    if args.output:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK if failures == 0 else EXIT_ERRORS


# Worker state for parallel correction; each worker loads the (immutable)
# lexicon once so forked and spawned pools behave identically.
_worker_lexicon: Lexicon | None = None
_worker_symbols = "auto"
_worker_strict = True


def _init_correct_worker(lexicon_path: str, symbols: str, strict: bool) -> None:
    global _worker_lexicon, _worker_symbols, _worker_strict
    _worker_lexicon = load_lexicon(lexicon_path)
    _worker_symbols = symbols
    _worker_strict = strict


def _correct_line(task: tuple[int, str]) -> tuple[int, str, str, tuple[str, ...]]:
    """Correct one JSONL line; returns (lineno, kind, payload, statuses).

    kind is "ok" with the output JSON line, "skip" with a diagnostic, or
    "empty" for blank input lines.
    """
    lineno, raw = task
    line = raw.strip()
    if not line:
        return lineno, "empty", "", ()
    try:
        obj = json.loads(line)
        uid = obj.get("id")
        labels = obj.get("labels")
        if not isinstance(uid, str) or not uid:
            raise ValueError("missing or empty 'id'")
        if not isinstance(labels, str):
            raise ValueError("missing 'labels'")
        annotation, mode = corpus_io.parse_labels(
            labels, _worker_symbols, strict=_worker_strict
        )
        corrected, results = correct_utterance(annotation, _worker_lexicon, CorrectionConfig())
    except (AccentForgeError, ValueError) as exc:
        return lineno, "skip", str(exc), ()
    except json.JSONDecodeError as exc:
        return lineno, "skip", f"invalid JSON: {exc.msg}", ()

    out = dict(obj)
    out["corrected"] = corpus_io.render_labels(serialize_utterance(corrected), mode)
    statuses = tuple(r.status for r in results)
    out["status"] = list(statuses)
    return lineno, "ok", json.dumps(out, ensure_ascii=False), statuses


def cmd_correct(args) -> int:
    if not args.lexicon:
        print(f"correct: no lexicon given (flag --lexicon or ${LEXICON_ENV_VAR})", file=sys.stderr)
        return EXIT_USAGE
    with open(args.input, encoding="utf-8") as stream:
        tasks = list(enumerate(stream, 1))

    if args.jobs > 1:
        with multiprocessing.Pool(
            args.jobs,
            initializer=_init_correct_worker,
            initargs=(str(args.lexicon), args.symbols, args.strict),
        ) as pool:
            results = list(pool.imap(_correct_line, tasks, chunksize=8))
    else:
        _init_correct_worker(str(args.lexicon), args.symbols, args.strict)
        results = [_correct_line(task) for task in tasks]

    skipped = 0
    status_counts: Counter = Counter()
    out_lines: list[str] = []
    for lineno, kind, payload, statuses in results:
        if kind == "skip":
            skipped += 1
            print(f"line {lineno}: skipped: {payload}", file=sys.stderr)
        elif kind == "ok":
            out_lines.append(payload)
            status_counts.update(statuses)

    text = "".join(line + "\n" for line in out_lines)
    if args.output:
        args.output.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)

    summary = " ".join(f"{status}={count}" for status, count in sorted(status_counts.items()))
    total_phrases = sum(status_counts.values())
    print(
        f"corrected {len(out_lines)} utterances ({total_phrases} phrases): "
        f"{summary or 'no phrases'}; skipped {skipped} lines",
        file=sys.stderr,
    )
    return EXIT_OK if skipped == 0 else EXIT_ERRORS


def _system_spec(spec: str) -> tuple[str, Path]:
    if "=" in spec:
        name, _, path = spec.partition("=")
    else:
        path = spec
        name = Path(spec).stem
    return name, Path(path)


def cmd_score(args) -> int:
    errors = 0
    ref_corpus, ref_warnings = corpus_io.load_jsonl(args.reference, args.symbols, strict=args.strict)
    for warning in ref_warnings:
        print(f"reference: {warning}", file=sys.stderr)
    errors += len(ref_warnings)

    systems: dict[str, dict] = {}
    for spec in args.hypotheses:
        name, path = _system_spec(spec)
        if name in systems:
            print(f"score: duplicate system name {name!r}", file=sys.stderr)
            return EXIT_USAGE
        loaded, warnings = corpus_io.load_jsonl(path, args.symbols, strict=args.strict)
        for warning in warnings:
            print(f"{name}: {warning}", file=sys.stderr)
        errors += len(warnings)
        systems[name] = loaded

    # align ids: drop utterances missing from any file, with a diagnostic
    common = set(ref_corpus)
    for loaded in systems.values():
        common &= set(loaded)
    dropped = set(ref_corpus) - common
    for loaded in systems.values():
        dropped |= set(loaded) - common
    if dropped:
        errors += len(dropped)
        for uid in sorted(dropped):
            print(f"score: id {uid!r} not present in every file, dropped", file=sys.stderr)
    if not common:
        print("score: no utterances shared by all files", file=sys.stderr)
        return EXIT_ERRORS

    reference = {uid: u.annotation for uid, u in ref_corpus.items() if uid in common}
    warning_counts = {name: 0 for name in systems}
    corpora = {
        name: {uid: u.annotation for uid, u in loaded.items() if uid in common}
        for name, loaded in systems.items()
    }
    reports = score_corpus(reference, corpora, args.filter, warning_counts)

    print(format_report_table(reports))
    if args.report:
        document = {
            "filter_mode": args.filter,
            "systems": {name: report.to_dict() for name, report in reports.items()},
        }
        args.report.write_text(
            json.dumps(document, ensure_ascii=False, indent=2) + "\n", encoding="utf-8"
        )
    return EXIT_OK if errors == 0 else EXIT_ERRORS


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(str(args.lexicon) if args.lexicon else None)
    uvicorn.run(app, host=args.host, port=args.port)
    return EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "validate": cmd_validate,
        "convert": cmd_convert,
        "correct": cmd_correct,
        "score": cmd_score,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except FileNotFoundError as exc:
        print(f"{args.command}: {exc}", file=sys.stderr)
        return EXIT_ERRORS


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
