"""Metrics: hand-computed F1 cases, brute-force confusion agreement, table
emission layouts and round trips."""

import csv
import json

import numpy as np
import pytest

from rediag.corpus import insert_entity_markers
from rediag.report import (
    EvalReport,
    LAYOUTS,
    MetricError,
    emit_tables,
    evaluate,
    micro_f1,
)


class TestMicroF1:
    def test_perfect(self):
        score, defined = micro_f1(["a", "b"], ["a", "b"], include_na=False,
                                  na_label="NA")
        assert score == 1.0 and defined

    def test_hand_case_excluding_na(self):
        # preds: a a NA b ; golds: a b b NA
        # tp=1, pred_pos=3, gold_pos=3 -> P=R=1/3 -> F1=1/3
        score, defined = micro_f1(["a", "a", "NA", "b"], ["a", "b", "b", "NA"],
                                  include_na=False, na_label="NA")
        assert defined and score == pytest.approx(1 / 3)

    def test_include_na_is_accuracy(self):
        score, defined = micro_f1(["a", "NA", "b"], ["a", "NA", "a"],
                                  include_na=True)
        assert defined and score == pytest.approx(2 / 3)

    def test_undefined_when_no_positives(self):
        score, defined = micro_f1(["NA", "NA"], ["NA", "NA"], include_na=False,
                                  na_label="NA")
        assert score == 0.0 and not defined

    def test_defined_zero_when_no_overlap(self):
        score, defined = micro_f1(["a"], ["b"], include_na=False, na_label="NA")
        assert score == 0.0 and defined

    def test_empty_include_na_undefined(self):
        score, defined = micro_f1([], [], include_na=True)
        assert score == 0.0 and not defined

    def test_length_mismatch(self):
        with pytest.raises(MetricError):
            micro_f1(["a"], [], include_na=True)

    def test_brute_force_confusion_agreement(self):
        """1,000 random prediction/gold pairs; micro-F1 must match a from-
        scratch confusion-matrix computation to 1e-12."""
        rng = np.random.default_rng(42)
        labels = ["r1", "r2", "r3", "NA"]
        preds = [labels[i] for i in rng.integers(0, 4, size=1000)]
        golds = [labels[i] for i in rng.integers(0, 4, size=1000)]

        conf = {}
        for p, g in zip(preds, golds):
            conf[(g, p)] = conf.get((g, p), 0) + 1
        tp = sum(n for (g, p), n in conf.items() if g == p and g != "NA")
        pred_pos = sum(n for (g, p), n in conf.items() if p != "NA")
        gold_pos = sum(n for (g, p), n in conf.items() if g != "NA")
        precision, recall = tp / pred_pos, tp / gold_pos
        expected = 2 * precision * recall / (precision + recall)

        score, defined = micro_f1(preds, golds, include_na=False, na_label="NA")
        assert defined
        assert abs(score - expected) <= 1e-12

        acc = sum(n for (g, p), n in conf.items() if g == p) / 1000
        score_na, _ = micro_f1(preds, golds, include_na=True)
        assert abs(score_na - acc) <= 1e-12


class TestEvaluate:
    def test_confusion_row_sums(self, oracle, test_set):
        report = evaluate(oracle, test_set, "test")
        total = sum(n for row in report.confusion.values() for n in row.values())
        assert total == len(test_set)

    def test_per_label_support(self, oracle, test_set):
        report = evaluate(oracle, test_set)
        for lab, entry in report.per_label.items():
            assert entry["support"] == sum(1 for i in test_set if i.label == lab)

    def test_query_count_recorded(self, fresh_oracle, test_set):
        report = evaluate(fresh_oracle, test_set)
        assert report.query_count == len(test_set)

    def test_matches_manual_prediction_loop(self, oracle, test_set):
        report = evaluate(oracle, test_set)
        preds = [oracle.predict(insert_entity_markers(i)).argmax for i in test_set]
        golds = [i.label for i in test_set]
        score, _ = micro_f1(preds, golds, include_na=False, na_label="NA")
        assert report.micro_f1_no_na == pytest.approx(score, abs=1e-12)

    def test_label_space_mismatch_rejected(self, oracle, test_set):
        other = test_set.derived(
            (), {"op": "x"},
            label_space=test_set.label_space.__class__(("alien",),))
        with pytest.raises(MetricError):
            evaluate(oracle, other)

    def test_to_json_timing_flag(self, oracle, test_set):
        report = evaluate(oracle, test_set)
        assert "wall_time" in report.to_json()
        assert "wall_time" not in report.to_json(timing=False)


def fake_report(f1, f1_na=None, dataset_id="d"):
    return EvalReport(
        dataset_id=dataset_id, manifest_digest="0" * 16, per_label={},
        micro_f1_no_na=f1, micro_f1_no_na_defined=True,
        micro_f1_with_na=f1_na if f1_na is not None else f1,
        confusion={}, query_count=0, wall_time=0.0,
    )


class TestEmitTables:
    def _reports(self):
        return {
            "ref:origin": fake_report(0.862), "ref:entity": fake_report(0.784),
            "ref:context": fake_report(0.80), "ref:all": fake_report(0.77),
            "da:origin": fake_report(0.87), "da:entity": fake_report(0.85),
            "da:context": fake_report(0.84), "da:all": fake_report(0.83),
        }

    def test_randomization_layout_files(self, tmp_path):
        paths = emit_tables(self._reports(), "randomization", tmp_path)
        text = paths["txt"].read_text()
        assert "86.2" in text and "78.4" in text
        assert text.splitlines()[0].startswith("Model")

    def test_pair_rendering(self, tmp_path):
        reports = {"ref:origin": fake_report(0.9), "ref:pwws": fake_report(0.5),
                   "ref:hotflip": fake_report(0.6)}
        paths = emit_tables(reports, "adversarial", tmp_path)
        assert "50.0/90.0" in paths["txt"].read_text()

    def test_csv_round_trip_full_precision(self, tmp_path):
        paths = emit_tables(self._reports(), "randomization", tmp_path)
        with paths["csv"].open() as fh:
            rows = list(csv.DictReader(fh))
        by_key = {(r["model"], r["setting"]): r for r in rows}
        assert float(by_key[("ref", "origin")]["micro_f1_no_na"]) == 0.862

    def test_json_payload(self, tmp_path):
        paths = emit_tables(self._reports(), "randomization", tmp_path, timing=False)
        payload = json.loads(paths["json"].read_text())
        assert payload["ref:origin"]["micro_f1_no_na"] == 0.862
        assert "wall_time" not in payload["ref:origin"]

    def test_plot_rows(self, tmp_path):
        paths = emit_tables(self._reports(), "randomization", tmp_path)
        with paths["plot"].open() as fh:
            rows = list(csv.DictReader(fh))
        assert [r["axis-name"] for r in rows] == [
            "randomization:entity", "randomization:context", "randomization:all"]
        entity = rows[0]
        assert float(entity["origin"]) == pytest.approx(86.2)
        assert float(entity["evaluation"]) == pytest.approx(78.4)
        assert float(entity["improved"]) == pytest.approx(85.0)

    def test_counterfactual_uses_include_na_metric(self, tmp_path):
        reports = {"ref:origin": fake_report(0.1, f1_na=0.9),
                   "ref:contrast": fake_report(0.2, f1_na=0.3)}
        paths = emit_tables(reports, "counterfactual", tmp_path)
        assert "30.0/90.0" in paths["txt"].read_text()

    def test_missing_column_rejected(self, tmp_path):
        with pytest.raises(MetricError, match="lacks reports"):
            emit_tables({"ref:origin": fake_report(0.9)}, "adversarial", tmp_path)

    def test_unknown_layout(self, tmp_path):
        with pytest.raises(MetricError):
            emit_tables({}, "mystery", tmp_path)

    def test_bad_key_shape(self, tmp_path):
        with pytest.raises(MetricError, match="model:setting"):
            emit_tables({"justonename": fake_report(0.5)}, "randomization", tmp_path)

    def test_all_layouts_have_origin(self):
        for name, spec in LAYOUTS.items():
            assert "origin" in spec["columns"]
