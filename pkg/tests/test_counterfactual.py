"""Attribution: exactness on a mask-linear model, completeness on the
reference model, selection and masking semantics, CDA set construction."""

import numpy as np
import pytest

from rediag.corpus import (
    Dataset,
    EntityMention,
    Instance,
    LabelSpace,
    UNUSED_TOKEN,
    insert_entity_markers,
)
from rediag.oracle import CapabilitySet, Oracle, Prediction
from rediag.counterfactual import (
    AttributionError,
    AttributionMap,
    build_contrast_set,
    cda_augment,
    completeness_gap,
    contrastive_mask,
    integrated_gradients,
    select_top_k,
)


class MaskLinearOracle(Oracle):
    """Two-class oracle whose class-0 probability is linear in the mask.

    P0(m) = base + sum_i coef(token_i) * m_i, kept inside (0,1) by
    construction. IG over the mask path is exact for any step count.
    """

    def __init__(self, coefs, base=0.4):
        super().__init__()
        self.coefs = coefs
        self.base = base

    def capabilities(self):
        return CapabilitySet(masked_forward=True)

    def _p0(self, tokens, mask):
        return self.base + sum(self.coefs.get(t, 0.0) * m
                               for t, m in zip(tokens, mask))

    def predict_batch(self, batch):
        self._count(len(batch))
        return [self._pred(toks, np.ones(len(toks))) for toks in batch]

    def _pred(self, tokens, mask):
        p0 = self._p0(tokens, mask)
        return Prediction(np.array([p0, 1 - p0]), ("rel", "NA"))

    def masked_forward(self, tokens, mask):
        self._count(1)
        return self._pred(tokens, mask)


def linear_case():
    inst = Instance(("Ann", "truly", "loves", "Oslo"),
                    EntityMention("Ann", (0, 1), "PERSON"),
                    EntityMention("Oslo", (3, 4), "LOCATION"), "rel")
    oracle = MaskLinearOracle({"truly": 0.05, "loves": 0.2, "Ann": 0.1,
                               "Oslo": -0.03})
    return oracle, inst


class TestIntegratedGradients:
    @pytest.mark.parametrize("steps", [1, 3, 20, 77])
    def test_exact_on_mask_linear_model(self, steps):
        oracle, inst = linear_case()
        attr = integrated_gradients(oracle, inst, "rel", steps=steps)
        expected = {"Ann": 0.1, "truly": 0.05, "loves": 0.2, "Oslo": -0.03}
        for tok, score in zip(inst.tokens, attr.scores):
            assert score == pytest.approx(expected[tok], abs=1e-9)

    @pytest.mark.parametrize("steps", [1, 5, 40])
    def test_completeness_exact_on_linear_model(self, steps):
        oracle, inst = linear_case()
        attr = integrated_gradients(oracle, inst, "rel", steps=steps)
        assert completeness_gap(oracle, inst, "rel", attr) <= 1e-9

    def test_scores_cover_instance_positions_only(self, oracle, test_set):
        inst = test_set.instances[0]
        attr = integrated_gradients(oracle, inst, inst.label, steps=5)
        assert len(attr.scores) == len(inst.tokens)

    def test_reference_model_completeness_small(self, oracle, test_set):
        inst = test_set.instances[0]
        marked = insert_entity_markers(inst)
        target = oracle.predict(marked).argmax
        attr = integrated_gradients(oracle, inst, target, steps=100)
        gap = completeness_gap(oracle, inst, target, attr)
        fx = oracle.masked_forward(marked, np.ones(len(marked))).prob(target)
        f0 = oracle.masked_forward(marked, np.zeros(len(marked))).prob(target)
        assert gap < 0.01 * abs(fx - f0) + 1e-6

    def test_invalid_steps(self, oracle, test_set):
        with pytest.raises(ValueError):
            integrated_gradients(oracle, test_set.instances[0], "NA", steps=0)

    def test_capability_gated(self):
        class NoMask(Oracle):
            def capabilities(self):
                return CapabilitySet()

            def predict_batch(self, batch):
                return [Prediction(np.array([1.0]), ("a",)) for _ in batch]

        from rediag.oracle import CapabilityMissing
        inst = Instance(("Ann", "x", "Bo"), EntityMention("Ann", (0, 1)),
                        EntityMention("Bo", (2, 3)), "a")
        with pytest.raises(CapabilityMissing):
            integrated_gradients(NoMask(), inst, "a")

    def test_non_finite_scores_rejected(self):
        with pytest.raises(AttributionError):
            AttributionMap((float("nan"),), 5, "zero-mask", "x")


class TestSelectTopK:
    def _attr(self, scores):
        return AttributionMap(tuple(scores), 5, "zero-mask", "x")

    def test_sorted_by_score(self):
        assert select_top_k(self._attr([0.1, 0.9, 0.5]), 2) == [1, 2]

    def test_ties_prefer_lower_index(self):
        assert select_top_k(self._attr([0.5, 0.5, 0.5]), 2) == [0, 1]

    def test_exclusions_respected(self):
        assert select_top_k(self._attr([0.9, 0.8, 0.1]), 1, exclusions={0}) == [1]

    def test_k_too_large_reports_counts(self):
        with pytest.raises(ValueError, match="2 selectable"):
            select_top_k(self._attr([0.1, 0.2, 0.3]), 3, exclusions={1})

    def test_brute_force_agreement(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            scores = rng.integers(0, 4, size=8).astype(float) / 4
            attr = self._attr(scores)
            got = select_top_k(attr, 3)
            expected = sorted(range(8), key=lambda i: (-scores[i], i))[:3]
            assert got == expected


class TestContrastiveMask:
    def _inst(self):
        return Instance(("Ann", "truly", "loves", "Oslo"),
                        EntityMention("Ann", (0, 1), "PERSON"),
                        EntityMention("Oslo", (3, 4), "LOCATION"), "rel")

    def test_masks_and_relabels(self):
        out = contrastive_mask(self._inst(), [2], "NA")
        assert out.tokens == ("Ann", "truly", UNUSED_TOKEN, "Oslo")
        assert out.label == "NA"

    def test_refuses_entity_positions(self):
        with pytest.raises(ValueError):
            contrastive_mask(self._inst(), [0], "NA")


class TestCda:
    def test_augment_doubles_cardinality(self, train_set, oracle, resources):
        sub = train_set.derived(train_set.instances[:40], {"op": "sub"})
        build = cda_augment(sub, oracle, k=1, steps=5,
                            stopwords=resources.stopwords, workers=4)
        assert len(build.dataset) == 80 - len(build.errors)
        assert build.dataset.instances[:40] == sub.instances
        assert all(i.label == "NA" for i in build.masked)

    def test_k2_masks_two_positions(self, train_set, oracle, resources):
        sub = train_set.derived(train_set.instances[:20], {"op": "sub"})
        build = cda_augment(sub, oracle, k=2, steps=5,
                            stopwords=resources.stopwords)
        for orig, masked in zip(sub.instances, build.masked):
            assert sum(t == UNUSED_TOKEN for t in masked.tokens) == 2

    def test_contrast_set_masked_only(self, test_set, oracle, resources):
        sub = test_set.derived(test_set.instances[:20], {"op": "sub"})
        build = build_contrast_set(sub, oracle, k=1, steps=5,
                                   stopwords=resources.stopwords)
        assert len(build.dataset) == 20 - len(build.errors)
        assert all(i.label == "NA" for i in build.dataset)
        assert build.manifest["contrast"] is True

    def test_na_added_when_missing(self, oracle, resources):
        inst = Instance(("Ann", "truly", "loves", "visiting", "Oslo"),
                        EntityMention("Ann", (0, 1), "PERSON"),
                        EntityMention("Oslo", (4, 5), "LOCATION"), "rel")
        ds = Dataset((inst,), LabelSpace(("rel",)))
        lin = MaskLinearOracle({"loves": 0.2})
        build = cda_augment(ds, lin, k=1, steps=3)
        assert build.manifest["na_added"] is True
        assert "NA" in build.dataset.label_space.labels

    def test_per_instance_errors_collected(self, resources):
        # an instance with no maskable position (all context is stopwords)
        inst = Instance(("Ann", "of", "Oslo"),
                        EntityMention("Ann", (0, 1), "PERSON"),
                        EntityMention("Oslo", (2, 3), "LOCATION"), "rel")
        ds = Dataset((inst,), LabelSpace(("rel", "NA"), "NA"))
        lin = MaskLinearOracle({})
        build = cda_augment(ds, lin, k=1, steps=3,
                            stopwords=frozenset({"of"}))
        assert len(build.errors) == 1
        assert build.errors[0]["index"] == 0
        assert len(build.dataset) == 1  # original kept, no masked copy
