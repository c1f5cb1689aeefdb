"""Training smoke test, checkpoint round-trip, and data-layer checks."""

import numpy as np
import pytest

from readapter.data import DataError, Example, load_examples
from readapter.model import AdapterConfig, RelationClassifier, build_tokenizer
from readapter.train import TrainSettings


class TestDefaults:
    def test_standard_recipe(self):
        settings = TrainSettings()
        assert settings.lr == 2e-5
        assert settings.batch_size == 32
        assert settings.epochs == 5


class TestData:
    def test_marked_layout(self):
        ex = Example(("Ann", "met", "Bo"), (0, 1), (2, 3), "r")
        assert ex.marked() == ["[CLS]", "[E1]", "Ann", "[/E1]", "met",
                               "[E2]", "Bo", "[/E2]", "[SEP]"]

    def test_marked_textual_order_with_head_second(self):
        ex = Example(("Oslo", "hosts", "Ann"), (2, 3), (0, 1), "r")
        assert ex.marked() == ["[CLS]", "[E2]", "Oslo", "[/E2]", "hosts",
                               "[E1]", "Ann", "[/E1]", "[SEP]"]

    def test_marked_length(self, dev_set):
        for inst in dev_set:
            ex = Example(inst.tokens, inst.head.span, inst.tail.span, inst.label)
            assert len(ex.marked()) == len(inst.tokens) + 6

    def test_missing_field(self, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"token": ["a"], "relation": "r"}\n', encoding="utf-8")
        with pytest.raises(DataError, match="line 1"):
            load_examples(bad)

    def test_empty_file(self, tmp_path):
        empty = tmp_path / "empty.jsonl"
        empty.write_text("", encoding="utf-8")
        with pytest.raises(DataError):
            load_examples(empty)


class TestSmokeFineTune:
    def test_checkpoint_files(self, checkpoint):
        for name in ("labels.json", "adapter_config.json", "model.safetensors",
                     "tokenizer.json"):
            assert (checkpoint / name).exists(), name

    def test_round_trip_reproduces_predictions_exactly(self, checkpoint,
                                                       classifier, corpus_dir):
        dev = load_examples(corpus_dir / "dev.jsonl")
        batch = [e.marked() for e in dev]
        before = classifier.predict(batch)
        reloaded = RelationClassifier.load(checkpoint)
        after = reloaded.predict(batch)
        assert np.array_equal(before, after)

    def test_marker_ids_recorded(self, classifier):
        ids = classifier.config.marker_token_ids
        assert set(ids) == {"[CLS]", "[SEP]", "[E1]", "[/E1]", "[E2]", "[/E2]"}
        assert len(set(ids.values())) == 6

    def test_bad_checkpoint_rejected(self, tmp_path):
        from readapter.model import AdapterError
        with pytest.raises(AdapterError):
            RelationClassifier.load(tmp_path)


class TestTokenizer:
    def test_markers_stay_whole(self):
        config = AdapterConfig(vocab_size=200)
        tok = build_tokenizer(["the cat sat on the mat", "a cat ran"], config)
        enc = tok(["[CLS]", "the", "cat", "[E1]", "unseenword", "[/E1]", "[SEP]"],
                  is_split_into_words=True, add_special_tokens=False)
        word_ids = enc.word_ids()
        # each marker word maps to exactly one subword
        for marker_word in (0, 3, 5, 6):
            assert word_ids.count(marker_word) == 1

    def test_unseen_words_still_encode(self):
        config = AdapterConfig(vocab_size=200)
        tok = build_tokenizer(["alpha beta gamma"], config)
        enc = tok(["zzz-not-in-training"], is_split_into_words=True,
                  add_special_tokens=False)
        assert len(enc["input_ids"]) >= 1
