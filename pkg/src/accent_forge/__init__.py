"""accent-forge: Japanese TTS-label processing toolkit.

Parse and validate phonemic+prosodic label strings, convert between label
notation, accent types and mora-level pitch sequences, correct predicted
labels with dictionary prior knowledge, and score annotations.
"""

from .decoder import (
    CorrectionConfig,
    CorrectionResult,
    PhraseHypothesis,
    best_path,
    best_path_by_enumeration,
    correct_phrase,
    correct_utterance,
    mora_edit_distance,
    restore_accent,
)
from .errors import AccentForgeError, CodecError, LabelError, LexiconError
from .label_core import (
    AccentPhrase,
    Pause,
    PhraseEntry,
    UtteranceAnnotation,
    accent_to_pitch,
    decode_symbols,
    detect_symbols,
    encode_symbols,
    parse_phrase,
    parse_utterance,
    pitch_to_accent,
    segment_moras,
    serialize_phrase,
    serialize_utterance,
)
from .lexicon import (
    Lexicon,
    LexiconEntry,
    PronLattice,
    Segmentation,
    Span,
    build_lattice,
    hiragana_to_katakana,
    load_lexicon,
    segment,
)
from .metrics import (
    EvalPair,
    ScoreReport,
    boundary_accuracy,
    cer,
    filter_phoneme_correct,
    format_report_table,
    pitch_f1,
    score_corpus,
)

__version__ = "0.1.0"

__all__ = [
    "AccentForgeError",
    "AccentPhrase",
    "CodecError",
    "CorrectionConfig",
    "CorrectionResult",
    "EvalPair",
    "LabelError",
    "Lexicon",
    "LexiconEntry",
    "LexiconError",
    "Pause",
    "PhraseEntry",
    "PhraseHypothesis",
    "PronLattice",
    "ScoreReport",
    "Segmentation",
    "Span",
    "UtteranceAnnotation",
    "accent_to_pitch",
    "best_path",
    "best_path_by_enumeration",
    "boundary_accuracy",
    "build_lattice",
    "cer",
    "correct_phrase",
    "correct_utterance",
    "decode_symbols",
    "detect_symbols",
    "encode_symbols",
    "filter_phoneme_correct",
    "format_report_table",
    "hiragana_to_katakana",
    "load_lexicon",
    "mora_edit_distance",
    "parse_phrase",
    "parse_utterance",
    "pitch_f1",
    "pitch_to_accent",
    "restore_accent",
    "score_corpus",
    "segment",
    "segment_moras",
    "serialize_phrase",
    "serialize_utterance",
]
