"""Oracle contract: reference model math, gradients, capability negotiation,
and the wire protocol served over a subprocess."""

import sys

import numpy as np
import pytest

from rediag.corpus import insert_entity_markers
from rediag.oracle import (
    CapabilityMissing,
    CapabilitySet,
    Oracle,
    OracleError,
    PAD_ID,
    Prediction,
    ReferenceModel,
    ReferenceOracle,
    TrainConfig,
    WireOracle,
    _softmax,
    open_oracle,
    train_reference,
)


class TestPrediction:
    def test_argmax_and_prob(self):
        p = Prediction(np.array([0.2, 0.8]), ("a", "b"))
        assert p.argmax == "b"
        assert p.prob("a") == pytest.approx(0.2)

    def test_invalid_sum_rejected(self):
        with pytest.raises(OracleError):
            Prediction(np.array([0.5, 0.6]), ("a", "b"))

    def test_negative_rejected(self):
        with pytest.raises(OracleError):
            Prediction(np.array([-0.1, 1.1]), ("a", "b"))


class TestCapabilitySet:
    def test_char_gradient_needs_alphabet(self):
        with pytest.raises(OracleError):
            CapabilitySet(char_gradient=True)
        CapabilitySet(char_gradient=True, alphabet=("a", "b"))


class TestReferenceModel:
    def test_zero_mask_closed_form(self, model):
        """All-zeros mask reduces the model to softmax over its bias."""
        ids = model.encode(["lived", "in"])
        probs = model.forward(ids, np.zeros(2))
        assert np.allclose(probs, _softmax(model.bias), atol=1e-12)

    def test_unknown_token_maps_to_pad(self, model):
        assert model.encode(["zzz-not-in-vocab"])[0] == PAD_ID

    def test_pad_embedding_zero(self, model):
        assert np.all(model.emb[PAD_ID] == 0.0)

    def test_masking_renormalizes(self, model):
        """Masking one of two identical tokens leaves the pooled mean intact."""
        tok = next(t for t in model.vocab if model.vocab[t] != PAD_ID)
        ids = model.encode([tok, tok])
        full = model.forward(ids)
        half = model.forward(ids, np.array([1.0, 0.0]))
        assert np.allclose(full, half, atol=1e-12)

    def test_oov_excluded_from_divisor(self, model):
        tok = next(t for t in model.vocab if model.vocab[t] != PAD_ID)
        with_pad = model.forward(model.encode([tok, "zzz-not-in-vocab"]))
        without = model.forward(model.encode([tok]))
        assert np.allclose(with_pad, without, atol=1e-12)

    def test_save_load_round_trip(self, model, tmp_path):
        path = tmp_path / "m.npz"
        model.save(path)
        back = ReferenceModel.load(path)
        assert back.vocab == model.vocab
        assert back.labels == model.labels
        assert np.array_equal(back.emb, model.emb)
        assert np.array_equal(back.weights, model.weights)
        assert np.array_equal(back.bias, model.bias)
        assert back.frozen


class TestTraining:
    def test_deterministic(self, train_set):
        cfg = TrainConfig(epochs=2)
        a = train_reference(train_set, cfg)
        b = train_reference(train_set, cfg)
        assert np.array_equal(a.emb, b.emb)
        assert np.array_equal(a.weights, b.weights)

    def test_seed_changes_weights(self, train_set):
        a = train_reference(train_set, TrainConfig(epochs=2, seed=1))
        b = train_reference(train_set, TrainConfig(epochs=2, seed=2))
        assert not np.array_equal(a.emb, b.emb)

    def test_empty_dataset_rejected(self, train_set):
        empty = train_set.derived((), {"op": "empty"})
        with pytest.raises(OracleError):
            train_reference(empty, TrainConfig())

    def test_fits_train_split(self, oracle, train_set):
        correct = 0
        preds = oracle.predict_batch(
            [insert_entity_markers(i) for i in train_set.instances[:200]])
        for pred, inst in zip(preds, train_set.instances[:200]):
            correct += pred.argmax == inst.label
        assert correct >= 160


class TestReferenceOracle:
    def test_query_counting(self, fresh_oracle, test_set):
        inst = test_set.instances[0]
        marked = insert_entity_markers(inst)
        fresh_oracle.predict(marked)
        fresh_oracle.predict_batch([marked, marked])
        fresh_oracle.masked_forward(marked, np.ones(len(marked)))
        assert fresh_oracle.query_count == 4

    def test_na_label_detected(self, oracle):
        assert oracle.label_space.na_label == "NA"

    def test_input_gradient_matches_finite_differences(self, oracle, test_set):
        inst = test_set.instances[0]
        marked = insert_entity_markers(inst)
        grads = oracle.input_gradient(marked, inst.label)
        model = oracle.model
        ids = model.encode(marked)
        h = 1e-6
        y = model.labels.index(inst.label)
        rng = np.random.default_rng(0)
        for pos in rng.choice(len(marked), size=4, replace=False):
            if ids[pos] == PAD_ID:
                assert np.all(grads[pos] == 0.0)
                continue
            for dim in (0, 3):
                bumped = model.emb.copy()
                bumped[ids[pos], dim] += h
                # loss with a bumped embedding entry, all occurrences bumped
                probs = ReferenceModel(model.vocab, bumped, model.weights,
                                       model.bias, model.labels).forward(ids)
                loss_hi = -np.log(probs[y])
                bumped[ids[pos], dim] -= 2 * h
                probs = ReferenceModel(model.vocab, bumped, model.weights,
                                       model.bias, model.labels).forward(ids)
                loss_lo = -np.log(probs[y])
                occurrences = int(np.sum(ids == ids[pos]))
                expected = (loss_hi - loss_lo) / (2 * h) / occurrences
                assert grads[pos, dim] == pytest.approx(expected, abs=1e-5)

    def test_mask_gradient_matches_central_differences(self, oracle, test_set):
        """The analytic override must agree with the generic fallback."""
        inst = test_set.instances[1]
        marked = insert_entity_markers(inst)
        mask = np.ones(len(marked))
        analytic = oracle.mask_gradient(marked, mask, inst.label)
        generic = Oracle.mask_gradient(oracle, marked, mask, inst.label)
        assert np.allclose(analytic, generic, atol=1e-5)

    def test_mask_length_checked(self, oracle):
        with pytest.raises(OracleError):
            oracle.masked_forward(["a", "b"], [1.0])

    def test_vocabulary_excludes_pad(self, oracle):
        assert "<pad>" not in oracle.vocabulary()

    def test_capabilities(self, oracle):
        caps = oracle.capabilities()
        assert caps.masked_forward and caps.word_gradient
        assert not caps.char_gradient and not caps.fill_mask


class MinimalOracle(Oracle):
    """Predict-only oracle used to check capability gating."""

    def __init__(self):
        super().__init__()

    def capabilities(self):
        return CapabilitySet()

    def predict_batch(self, batch):
        return [Prediction(np.array([1.0]), ("only",)) for _ in batch]


class TestCapabilityGating:
    def test_masked_forward_missing(self):
        with pytest.raises(CapabilityMissing):
            MinimalOracle().masked_forward(["a"], [1.0])

    def test_mask_gradient_requires_masked_forward(self):
        with pytest.raises(CapabilityMissing):
            MinimalOracle().mask_gradient(["a"], np.ones(1), "only")

    def test_fill_mask_missing(self):
        with pytest.raises(CapabilityMissing):
            MinimalOracle().fill_mask(["a"], 0, 3)


@pytest.fixture(scope="module")
def wire_oracle(model, tmp_path_factory):
    path = tmp_path_factory.mktemp("wire") / "m.npz"
    model.save(path)
    spec = f"exec:{sys.executable} -m rediag.wireserve {path}"
    oracle = WireOracle.from_spec(spec)
    yield oracle
    oracle.close()


class TestWireProtocol:
    def test_handshake(self, wire_oracle, oracle):
        caps = wire_oracle.capabilities()
        assert caps.masked_forward and caps.word_gradient
        assert wire_oracle.label_space.labels == oracle.label_space.labels

    def test_predict_matches_local(self, wire_oracle, oracle, test_set):
        marked = [insert_entity_markers(i) for i in test_set.instances[:5]]
        remote = wire_oracle.predict_batch(marked)
        local = oracle.predict_batch(marked)
        for r, l in zip(remote, local):
            assert np.allclose(r.probs, l.probs, atol=1e-9)

    def test_masked_predict_matches_local(self, wire_oracle, oracle, test_set):
        marked = insert_entity_markers(test_set.instances[0])
        mask = np.zeros(len(marked))
        mask[::2] = 1.0
        remote = wire_oracle.masked_forward(marked, mask)
        local = oracle.masked_forward(marked, mask)
        assert np.allclose(remote.probs, local.probs, atol=1e-9)

    def test_grad_matches_local(self, wire_oracle, oracle, test_set):
        inst = test_set.instances[0]
        marked = insert_entity_markers(inst)
        assert np.allclose(wire_oracle.input_gradient(marked, inst.label),
                           oracle.input_gradient(marked, inst.label), atol=1e-9)

    def test_vocab_and_embed(self, wire_oracle, oracle):
        assert wire_oracle.vocabulary() == oracle.vocabulary()
        toks = oracle.vocabulary()[:3]
        assert np.allclose(wire_oracle.embed_tokens(toks),
                           oracle.embed_tokens(toks), atol=1e-9)

    def test_unknown_op_is_error_but_connection_survives(self, wire_oracle):
        with pytest.raises(OracleError):
            wire_oracle._call({"op": "no-such-op"})
        assert wire_oracle.predict_batch([["[CLS]", "lived", "[SEP]"]])

    def test_fill_mask_not_declared(self, wire_oracle):
        with pytest.raises(CapabilityMissing):
            wire_oracle.fill_mask(["a"], 0, 2)


class TestOpenOracle:
    def test_reference_spec(self, model, tmp_path):
        path = tmp_path / "m.npz"
        model.save(path)
        oracle = open_oracle(f"reference:{path}")
        assert isinstance(oracle, ReferenceOracle)

    def test_bad_spec(self):
        with pytest.raises(ValueError):
            open_oracle("carrier-pigeon:coop")
