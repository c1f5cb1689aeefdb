"""Command-line pipeline: every subcommand end to end on a small corpus,
plus byte-level determinism across reruns and worker counts."""

import json
from pathlib import Path

import pytest

from rediag.cli import main
from rediag.corpus import load_dataset, write_dataset
from rediag.synth import SynthConfig, make_corpus


def run(*args):
    return main([str(a) for a in args])


@pytest.fixture(scope="module")
def work(tmp_path_factory, resources):
    """Small corpus + trained model shared by the CLI tests."""
    root = tmp_path_factory.mktemp("cli")
    train, test = make_corpus(SynthConfig(n_train=300, n_test=80), resources)
    write_dataset(train, root / "train.jsonl")
    write_dataset(test, root / "test.jsonl")
    assert run("train-reference", "--in", root / "train.jsonl",
               "--out", root / "model", "--epochs", 30) == 0
    return root


def data_files(out_dir):
    """Everything except the run manifest, which embeds the out path."""
    return sorted(p for p in Path(out_dir).rglob("*")
                  if p.is_file() and p.name != "manifest.json")


def assert_identical(dir_a, dir_b):
    files_a, files_b = data_files(dir_a), data_files(dir_b)
    assert [p.name for p in files_a] == [p.name for p in files_b]
    for a, b in zip(files_a, files_b):
        assert a.read_bytes() == b.read_bytes(), a.name


class TestSynth:
    def test_writes_splits_and_manifest(self, tmp_path):
        assert run("synth", "--out", tmp_path, "--n-train", 50, "--n-test", 20) == 0
        train = load_dataset(tmp_path / "train.jsonl")
        assert len(train) == 50
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["subcommand"] == "synth"
        assert manifest["seed"] == 42
        assert "tool_version" in manifest


class TestTrainReference:
    def test_model_usable(self, work, tmp_path):
        assert run("eval", "--in", work / "test.jsonl",
                   "--oracle", f"reference:{work / 'model' / 'model.npz'}",
                   "--out", tmp_path) == 0
        report = json.loads((tmp_path / "report.json").read_text())
        assert report["micro_f1_no_na"] > 0.5


class TestPerturb:
    def test_entity_mode(self, work, tmp_path):
        assert run("perturb", "--in", work / "test.jsonl", "--mode", "entity",
                   "--out", tmp_path) == 0
        robust = load_dataset(tmp_path / "robust.jsonl")
        assert len(robust) > 0
        assert (tmp_path / "audit.jsonl").exists()
        assert (tmp_path / "skips.json").exists()

    def test_augment_train_flag(self, work, tmp_path):
        assert run("perturb", "--in", work / "train.jsonl", "--mode", "entity",
                   "--augment-train", "--out", tmp_path) == 0
        augmented = load_dataset(tmp_path / "augmented.jsonl")
        original = load_dataset(work / "train.jsonl")
        assert len(augmented) > len(original)
        assert augmented.instances[:len(original)] == original.instances

    def test_context_heavy_skips_exit_code(self, work, tmp_path):
        # most instances have no eligible inter-entity word at this rate, so
        # the failure threshold trips
        code = run("perturb", "--in", work / "test.jsonl", "--mode", "context",
                   "--rate", "0.05", "--fail-threshold", "0.1", "--out", tmp_path)
        assert code == 1


class TestAttack:
    def test_pwws_outputs(self, work, tmp_path):
        assert run("attack", "--in", work / "test.jsonl",
                   "--oracle", f"reference:{work / 'model' / 'model.npz'}",
                   "--method", "pwws", "--limit", 30, "--out", tmp_path) == 0
        traces = [json.loads(l) for l in (tmp_path / "traces.jsonl").read_text().splitlines()]
        assert len(traces) == 30
        adv = load_dataset(tmp_path / "adversarial.jsonl")
        assert len(adv) == sum(t["success"] for t in traces)
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        assert manifest["attacked"] == 30

    def test_emit_train(self, work, tmp_path):
        assert run("attack", "--in", work / "train.jsonl",
                   "--oracle", f"reference:{work / 'model' / 'model.npz'}",
                   "--method", "pwws", "--limit", 20, "--emit-train",
                   "--out", tmp_path) == 0
        assert (tmp_path / "train_adv.jsonl").exists()

    def test_hotflip(self, work, tmp_path):
        assert run("attack", "--in", work / "test.jsonl",
                   "--oracle", f"reference:{work / 'model' / 'model.npz'}",
                   "--method", "hotflip", "--limit", 10, "--epsilon", "0.5",
                   "--out", tmp_path) == 0


class TestCda:
    def test_augment_and_retrain(self, work, tmp_path):
        assert run("cda", "--in", work / "train.jsonl",
                   "--oracle", f"reference:{work / 'model' / 'model.npz'}",
                   "--k", 1, "--steps", 5, "--retrain", "--out", tmp_path) == 0
        augmented = load_dataset(tmp_path / "augmented.jsonl")
        original = load_dataset(work / "train.jsonl")
        errors = json.loads((tmp_path / "errors.json").read_text())
        assert len(augmented) == 2 * len(original) - len(errors)
        assert (tmp_path / "model.npz").exists()

    def test_contrast_only(self, work, tmp_path):
        assert run("cda", "--in", work / "test.jsonl",
                   "--oracle", f"reference:{work / 'model' / 'model.npz'}",
                   "--contrast-only", "--steps", 5, "--out", tmp_path) == 0
        contrast = load_dataset(tmp_path / "contrast.jsonl")
        assert all(i.label == "NA" for i in contrast)


class TestBias:
    def test_selection(self, work, tmp_path):
        assert run("bias", "--kind", "selection", "--in", work / "test.jsonl",
                   "--train", work / "train.jsonl", "--out", tmp_path) == 0
        assert (tmp_path / "debiased.jsonl").exists()

    def test_selection_mask_train(self, work, tmp_path):
        assert run("bias", "--kind", "selection", "--in", work / "train.jsonl",
                   "--train", work / "train.jsonl", "--mask-train",
                   "--out", tmp_path) == 0
        assert (tmp_path / "masked_train.jsonl").exists()

    def test_semantic_me_oe(self, work, tmp_path):
        assert run("bias", "--kind", "semantic", "--in", work / "test.jsonl",
                   "--me", "--out", tmp_path / "me") == 0
        assert run("bias", "--kind", "semantic", "--in", work / "test.jsonl",
                   "--oe", "--out", tmp_path / "oe") == 0
        me = load_dataset(tmp_path / "me" / "me.jsonl")
        assert all("[ENT]" in i.tokens for i in me)

    def test_semantic_oe_errors(self, work, tmp_path):
        assert run("bias", "--kind", "semantic", "--in", work / "test.jsonl",
                   "--oe-errors",
                   "--oracle", f"reference:{work / 'model' / 'model.npz'}",
                   "--out", tmp_path) == 0
        assert (tmp_path / "oe_debiased.jsonl").exists()

    def test_semantic_mask_pct(self, work, tmp_path):
        assert run("bias", "--kind", "semantic", "--in", work / "train.jsonl",
                   "--mask-pct", 50, "--out", tmp_path) == 0
        assert (tmp_path / "entity_masked.jsonl").exists()

    def test_semantic_requires_a_transform(self, work, tmp_path):
        assert run("bias", "--kind", "semantic", "--in", work / "test.jsonl",
                   "--out", tmp_path) == 2


class TestEvalAndReport:
    def test_report_layout(self, work, tmp_path):
        oracle = f"reference:{work / 'model' / 'model.npz'}"
        run("eval", "--in", work / "test.jsonl", "--oracle", oracle,
            "--id", "origin", "--out", tmp_path / "origin")
        run("perturb", "--in", work / "test.jsonl", "--mode", "entity",
            "--out", tmp_path / "perm")
        run("eval", "--in", tmp_path / "perm" / "robust.jsonl", "--oracle", oracle,
            "--out", tmp_path / "perm-eval")
        reports = [f"ref:origin={tmp_path / 'origin' / 'report.json'}",
                   f"ref:debiased={tmp_path / 'perm-eval' / 'report.json'}"]
        assert run("report", "--layout", "selection", "--reports", *reports,
                   "--out", tmp_path / "tables") == 0
        text = (tmp_path / "tables" / "report.txt").read_text()
        assert "ref" in text and "/" in text

    def test_fatal_errors_exit_2(self, tmp_path):
        assert run("eval", "--in", tmp_path / "missing.jsonl",
                   "--oracle", "reference:nope.npz", "--out", tmp_path) == 2


class TestDeterminism:
    """Same seed, two runs, worker counts 1 and 8: byte-identical outputs."""

    CASES = {
        "synth": lambda w, out, workers: [
            "synth", "--out", out, "--n-train", 40, "--n-test", 10,
            "--workers", workers],
        "perturb": lambda w, out, workers: [
            "perturb", "--in", w / "test.jsonl", "--mode", "all",
            "--out", out, "--workers", workers],
        "attack": lambda w, out, workers: [
            "attack", "--in", w / "test.jsonl",
            "--oracle", f"reference:{w / 'model' / 'model.npz'}",
            "--method", "pwws", "--limit", 15, "--out", out,
            "--workers", workers],
        "cda": lambda w, out, workers: [
            "cda", "--in", w / "test.jsonl",
            "--oracle", f"reference:{w / 'model' / 'model.npz'}",
            "--steps", 5, "--out", out, "--workers", workers],
        "bias": lambda w, out, workers: [
            "bias", "--kind", "selection", "--in", w / "test.jsonl",
            "--train", w / "train.jsonl", "--out", out, "--workers", workers],
        "eval": lambda w, out, workers: [
            "eval", "--in", w / "test.jsonl",
            "--oracle", f"reference:{w / 'model' / 'model.npz'}",
            "--out", out, "--workers", workers],
        "train-reference": lambda w, out, workers: [
            "train-reference", "--in", w / "train.jsonl", "--epochs", 5,
            "--out", out, "--workers", workers],
    }

    @pytest.mark.parametrize("name", sorted(CASES))
    def test_byte_identical(self, work, tmp_path, name):
        case = self.CASES[name]
        for out, workers in ((tmp_path / "a", 1), (tmp_path / "b", 8)):
            code = run(*case(work, out, workers))
            assert code in (0, 1)
        assert_identical(tmp_path / "a", tmp_path / "b")

    def test_report_determinism(self, work, tmp_path):
        oracle = f"reference:{work / 'model' / 'model.npz'}"
        run("eval", "--in", work / "test.jsonl", "--oracle", oracle,
            "--out", tmp_path / "e")
        reports = [f"ref:origin={tmp_path / 'e' / 'report.json'}",
                   f"ref:debiased={tmp_path / 'e' / 'report.json'}"]
        for out in (tmp_path / "a", tmp_path / "b"):
            assert run("report", "--layout", "selection", "--reports", *reports,
                       "--out", out) == 0
        assert_identical(tmp_path / "a", tmp_path / "b")
