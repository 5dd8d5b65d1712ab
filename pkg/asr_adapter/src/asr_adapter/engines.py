"""Label engines: turn (audio, transcript) pairs into raw label streams.

Streams use the interchange code points U+2191 (rise), U+2193 (fall),
U+2460 (phrase boundary), U+2462 (pause) and U+2223 (grapheme delimiter),
matching the downstream toolkit's wire format.  The real engine is a
fine-tuned Whisper checkpoint prompted with the transcript; the rule engine
is a deterministic stand-in for pipelines and tests without a model.
"""

from __future__ import annotations

from typing import Protocol

from .manifest import ManifestRow

RISE = "↑"
FALL = "↓"
BOUNDARY = "①"
PAUSE = "③"
DELIMITER = "∣"

_SMALL_KANA = set("ァィゥェォャュョヮ")
_HIRA_FIRST, _HIRA_LAST = 0x3041, 0x3096
_KATA_FIRST, _KATA_LAST = 0x30A1, 0x30F4
_LONG_VOWEL = "ー"


class LabelEngine(Protocol):
    def transcribe(self, rows: list[ManifestRow]) -> list[str]:
        """Return one raw label stream per row, aligned with the input."""
        ...


def _transcript_to_katakana(transcript: str) -> str:
    """Keep the kana of a transcript, folded to Katakana; drop the rest."""
    out = []
    for ch in transcript:
        cp = ord(ch)
        if _HIRA_FIRST <= cp <= _HIRA_LAST:
            out.append(chr(cp + 0x60))
        elif _KATA_FIRST <= cp <= _KATA_LAST or ch == _LONG_VOWEL:
            out.append(ch)
    return "".join(out)


class RuleEngine:
    """Deterministic transcript-echo engine.

    Reads the transcript's kana as the pronunciation of one flat accent
    phrase per utterance.  It makes no use of the audio; it exists so the
    pipeline can run end to end without a fine-tuned checkpoint.
    """

    def __init__(self, model: str = ""):
        self.model = model

    def _labels(self, row: ManifestRow) -> str:
        pronunciation = _transcript_to_katakana(row.transcript) or "ア"
        # flat phrases carry the rise marker after the first mora; skip the
        # small kana glued to the first base kana
        cut = 1
        while cut < len(pronunciation) and pronunciation[cut] in _SMALL_KANA:
            cut += 1
        if cut < len(pronunciation):
            labeled = pronunciation[:cut] + RISE + pronunciation[cut:]
        else:
            labeled = pronunciation
        graphemes = row.transcript.replace("\t", " ").replace("\n", " ")
        return f"{graphemes}{DELIMITER}{labeled}{BOUNDARY}"

    def transcribe(self, rows: list[ManifestRow]) -> list[str]:
        return [self._labels(row) for row in rows]


class WhisperEngine:
    """Fine-tuned Whisper checkpoint, prompted with the ground-truth transcript.

    The transcript is tokenized into the prompt slot (between the
    previous-context and transcription start tokens) so the decoder can
    attend to both the audio and the text while emitting label streams.
    Expects 16 kHz mono PCM WAV input.
    """

    def __init__(self, model: str, device: str = "cpu"):
        if not model:
            raise ValueError("whisper engine needs a model id or checkpoint path")
        import torch
        from transformers import WhisperForConditionalGeneration, WhisperProcessor

        self._torch = torch
        self.processor = WhisperProcessor.from_pretrained(model)
        self.model = WhisperForConditionalGeneration.from_pretrained(model).to(device).eval()
        self.device = device

    @staticmethod
    def _read_wav(path):
        import wave

        import numpy as np

        with wave.open(str(path), "rb") as wav:
            if wav.getframerate() != 16000 or wav.getnchannels() != 1 or wav.getsampwidth() != 2:
                raise ValueError(f"{path}: expected 16 kHz mono 16-bit PCM WAV")
            frames = wav.readframes(wav.getnframes())
        return np.frombuffer(frames, dtype=np.int16).astype("float32") / 32768.0

    def transcribe(self, rows: list[ManifestRow]) -> list[str]:
        audio = [self._read_wav(row.audio_path) for row in rows]
        features = self.processor(
            audio, sampling_rate=16000, return_tensors="pt"
        ).input_features.to(self.device)
        outputs: list[str] = []
        with self._torch.no_grad():
            for index, row in enumerate(rows):
                prompt_ids = self.processor.get_prompt_ids(
                    row.transcript, return_tensors="pt"
                ).to(self.device)
                generated = self.model.generate(
                    features[index : index + 1], prompt_ids=prompt_ids, max_new_tokens=440
                )
                text = self.processor.batch_decode(generated, skip_special_tokens=True)[0]
                # generation echoes the prompt; keep only what follows it
                _, _, labels = text.rpartition(row.transcript)
                outputs.append(labels.strip() if labels else text.strip())
        return outputs


def create_engine(name: str, model: str = "") -> LabelEngine:
    if name == "rule":
        return RuleEngine(model)
    if name == "whisper":
        return WhisperEngine(model)
    raise ValueError(f"unknown engine {name!r}")
