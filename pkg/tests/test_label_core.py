import random

import pytest

from accent_forge import (
    AccentPhrase,
    CodecError,
    LabelError,
    Pause,
    PhraseEntry,
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

MORA_ALPHABET = ["ア", "カ", "ギョ", "シ", "ッ", "ン", "ー", "タ", "ミャ", "ロ", "ヴ", "エ"]


class TestSegmentMoras:
    def test_long_vowel_stays_standalone(self):
        assert segment_moras("アタラシー") == ["ア", "タ", "ラ", "シ", "ー"]

    def test_digraph_is_one_mora(self):
        assert segment_moras("ギョギョート") == ["ギョ", "ギョ", "ー", "ト"]

    def test_empty_input(self):
        assert segment_moras("") == []

    def test_leading_combining_kana_rejected(self):
        with pytest.raises(LabelError):
            segment_moras("ャメ")

    @pytest.mark.parametrize("text", ["ッャ", "ンョ", "ーァ", "キャャ"])
    def test_combining_kana_needs_free_base(self, text):
        with pytest.raises(LabelError):
            segment_moras(text)

    @pytest.mark.parametrize("text", ["かな", "abc", "イ[", "ヵキ", "ヶ"])
    def test_non_katakana_rejected(self, text):
        with pytest.raises(LabelError):
            segment_moras(text)

    def test_rare_base_kana_accepted(self):
        assert segment_moras("ヰヱヲヴ") == ["ヰ", "ヱ", "ヲ", "ヴ"]

    def test_concatenation_round_trip(self):
        rng = random.Random(20240901)
        for _ in range(500):
            moras = [rng.choice(MORA_ALPHABET) for _ in range(rng.randint(0, 10))]
            text = "".join(moras)
            assert "".join(segment_moras(text)) == text
            assert segment_moras(text) == moras


class TestParsePhrase:
    def test_middle_high(self):
        phrase = parse_phrase("セ[ーコーシテ]モ")
        assert phrase.moras == ("セ", "ー", "コ", "ー", "シ", "テ", "モ")
        assert phrase.accent == 6

    def test_head_high(self):
        phrase = parse_phrase("ギョ]ギョート")
        assert phrase.moras == ("ギョ", "ギョ", "ー", "ト")
        assert phrase.accent == 1

    def test_fall_before_rise_rejected(self):
        with pytest.raises(LabelError, match="precedes"):
            parse_phrase("セ]ーコ[ー")

    def test_flat_phrase(self):
        assert parse_phrase("ア[タラシー").accent == 0

    @pytest.mark.parametrize(
        "text",
        [
            "",            # empty pronunciation
            "アタ",         # multi-mora flat without rise marker
            "ア[[タ",       # duplicate rise
            "ア[タ]]",      # duplicate fall
            "[アタ",        # rise before first mora
            "アタ[ラ",      # rise not after mora 1
            "ア[",          # rise with nothing after
            "]ア",          # fall before first mora
            "アタ]",        # fall at mora 2 without rise
            "ア[]タ",       # fall immediately after rise
            "ア]タ[ラ",     # fall precedes rise
            "ギ[ョタ",      # marker splits a mora
        ],
    )
    def test_grammar_violations(self, text):
        with pytest.raises(LabelError):
            parse_phrase(text)

    def test_single_mora_forms(self):
        assert parse_phrase("ア").accent == 0
        assert parse_phrase("ア]").accent == 1

    def test_lenient_mode_recovers(self):
        issues: list[str] = []
        phrase = parse_phrase("アタ", strict=False, issues=issues)
        assert phrase.accent == 0 and phrase.moras == ("ア", "タ")
        assert issues

    def test_lenient_reattaches_split_mora(self):
        issues: list[str] = []
        phrase = parse_phrase("ギ[ョタ", strict=False, issues=issues)
        assert phrase.moras == ("ギョ", "タ")
        assert issues

    def test_lenient_still_rejects_empty(self):
        with pytest.raises(LabelError):
            parse_phrase("", strict=False, issues=[])


class TestSerializePhrase:
    @pytest.mark.parametrize(
        "moras,accent,expected",
        [
            (("イ", "エ", "オ"), 2, "イ[エ]オ"),
            (("ア",), 0, "ア"),
            (("ア",), 1, "ア]"),
            (("シ", "ナ", "ク", "テ", "モ"), 2, "シ[ナ]クテモ"),
            (("ア", "タ"), 0, "ア[タ"),
            (("ア", "タ"), 1, "ア]タ"),
            (("ア", "タ"), 2, "ア[タ]"),
        ],
    )
    def test_forms(self, moras, accent, expected):
        assert serialize_phrase(AccentPhrase(moras, accent)) == expected

    def test_invalid_accent_rejected(self):
        with pytest.raises(ValueError):
            AccentPhrase(("ア",), 2)
        with pytest.raises(ValueError):
            AccentPhrase(("ア",), -1)
        with pytest.raises(ValueError):
            AccentPhrase((), 0)

    def test_round_trip_exhaustive_small(self):
        alphabet = MORA_ALPHABET[:5]
        from itertools import product

        for n in range(1, 4):
            for moras in product(alphabet, repeat=n):
                for accent in range(n + 1):
                    phrase = AccentPhrase(moras, accent)
                    assert parse_phrase(serialize_phrase(phrase)) == phrase


class TestPitch:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("セ[ーコーシテ]モ", "LHHHHHL"),
            ("ギョ]ギョート", "HLLL"),
            ("ア[タラシー", "LHHHH"),
            ("ア", "L"),
            ("ア]", "H"),
        ],
    )
    def test_patterns(self, text, expected):
        assert "".join(accent_to_pitch(parse_phrase(text))) == expected

    def test_accent_two(self):
        assert accent_to_pitch(AccentPhrase(("イ", "エ", "オ"), 2)) == ("L", "H", "L")

    def test_inverse_examples(self):
        assert pitch_to_accent(("イ", "エ", "オ"), ("L", "H", "L")).accent == 2
        assert pitch_to_accent(("ア",), ("L",)).accent == 0
        assert pitch_to_accent(("ア",), ("H",)).accent == 1

    @pytest.mark.parametrize(
        "pitch",
        [("H", "H", "L"), ("L", "L", "H"), ("L", "H", "L", "H"), ("H", "L", "H")],
    )
    def test_illegal_patterns(self, pitch):
        moras = tuple("カキクケ"[: len(pitch)])
        with pytest.raises(LabelError):
            pitch_to_accent(moras, pitch)

    def test_length_mismatch(self):
        with pytest.raises(LabelError):
            pitch_to_accent(("ア", "カ"), ("L",))

    def test_flat_and_tail_high_merge_phrase_internally(self):
        # the all-high tail pattern is reported as flat; re-rendering the
        # recovered accent reproduces the pattern exactly
        for n in range(2, 8):
            moras = tuple(MORA_ALPHABET[:n])
            tail_high = accent_to_pitch(AccentPhrase(moras, n))
            assert tail_high == accent_to_pitch(AccentPhrase(moras, 0))
            recovered = pitch_to_accent(moras, tail_high)
            assert recovered.accent == 0
            assert accent_to_pitch(recovered) == tail_high

    def test_injective_below_tail_high(self):
        for n in range(2, 9):
            moras = tuple(MORA_ALPHABET[:1]) * n
            patterns = {}
            for accent in range(n):
                pattern = accent_to_pitch(AccentPhrase(moras, accent))
                assert pattern not in patterns
                patterns[pattern] = accent
                assert pitch_to_accent(moras, pattern).accent == accent


class TestParseUtterance:
    def test_two_phrases(self):
        ann = parse_utterance("セ[ーコーシテ]モ#シ[ナ]クテモ#")
        accents = [e.phrase.accent for e in ann.phrase_entries()]
        assert accents == [6, 2]
        assert ann.phonemes() == "セーコーシテモシナクテモ"

    def test_graphemes(self):
        ann = parse_utterance("漁業と|ギョ]ギョート#商業で|ショ]ーギョーデ#", with_graphemes=True)
        assert [e.graphemes for e in ann.phrase_entries()] == ["漁業と", "商業で"]
        assert ann.graphemes() == "漁業と商業で"

    def test_empty(self):
        assert parse_utterance("").items == ()
        assert parse_utterance("").phonemes() == ""

    def test_pauses_preserved(self):
        ann = parse_utterance("_ア[タ#_イ[エ#_")
        kinds = [type(item).__name__ for item in ann.items]
        assert kinds == ["Pause", "PhraseEntry", "Pause", "PhraseEntry", "Pause"]
        assert serialize_utterance(ann) == "_ア[タ#_イ[エ#_"

    def test_round_trip_bit_exact(self):
        for text in [
            "セ[ーコーシテ]モ#シ[ナ]クテモ#",
            "漁業と|ギョ]ギョート#商業で|ショ]ーギョーデ#",
            "_ア[タ#_",
            "",
            "ア#",
        ]:
            with_g = "|" in text
            assert serialize_utterance(parse_utterance(text, with_graphemes=with_g)) == text

    def test_unterminated_phrase(self):
        with pytest.raises(LabelError, match="unterminated"):
            parse_utterance("ア[タ")

    def test_empty_graphemes(self):
        with pytest.raises(LabelError, match="graphemes"):
            parse_utterance("|ア[タ#", with_graphemes=True)

    def test_delimiter_count_mismatch(self):
        with pytest.raises(LabelError, match="delimiter"):
            parse_utterance("ア[タ#", with_graphemes=True)
        with pytest.raises(LabelError, match="delimiter"):
            parse_utterance("あ|い|ア[タ#", with_graphemes=True)

    def test_error_names_phrase_index(self):
        with pytest.raises(LabelError, match="phrase 1"):
            parse_utterance("ア[タ#セ]ーコ[ー#")

    def test_pause_inside_phrase_rejected(self):
        with pytest.raises(LabelError, match="pause"):
            parse_utterance("ア[_タ#")

    def test_lenient_collects_issues(self):
        issues: list[str] = []
        ann = parse_utterance(
            "アタ#かな#イ[エ#", strict=False, issues=issues
        )
        # middle phrase is unsalvageable (no katakana), others recovered
        assert [e.phrase.pronunciation() for e in ann.phrase_entries()] == ["アタ", "イエ"]
        assert any("phrase 0" in i for i in issues)
        assert any("phrase 1" in i for i in issues)

    def test_lenient_recovers_unterminated_tail(self):
        issues: list[str] = []
        ann = parse_utterance("ア[タ#イ[エ", strict=False, issues=issues)
        assert [e.phrase.pronunciation() for e in ann.phrase_entries()] == ["アタ", "イエ"]
        assert any("unterminated" in i for i in issues)

    def test_mora_spans(self):
        ann = parse_utterance("セ[ーコーシテ]モ#シ[ナ]クテモ#")
        assert ann.mora_spans() == [(0, 7), (7, 12)]


class TestSymbolCodec:
    def test_encode_example(self):
        assert encode_symbols("イ[エ]オ#") == "イ↑エ↓オ①"

    def test_empty(self):
        assert encode_symbols("") == ""
        assert decode_symbols("") == ""

    def test_round_trip(self):
        for text in ["ア[タラシ]ー#_", "漁業と|ギョ]ギョート#", "イ[エ]オ#"]:
            assert decode_symbols(encode_symbols(text)) == text

    def test_all_five_symbols(self):
        assert encode_symbols("[]#_|") == "↑↓①③∣"
        assert decode_symbols("↑↓①③∣") == "[]#_|"

    def test_decode_rejects_mixed(self):
        with pytest.raises(CodecError):
            decode_symbols("イ[エ↓オ①")

    def test_encode_rejects_interchange_input(self):
        with pytest.raises(CodecError):
            encode_symbols("イ↑エ]オ#")

    def test_decode_passes_display_through(self):
        assert decode_symbols("イ[エ]オ#") == "イ[エ]オ#"

    def test_detect(self):
        assert detect_symbols("イ[エ]オ#") == "display"
        assert detect_symbols("イ↑エ↓オ①") == "interchange"
        assert detect_symbols("アイウ") == "display"
