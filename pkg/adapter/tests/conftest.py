"""Shared fixtures: a 100-instance corpus, one trained checkpoint, and a
served wire connection. The diagnostics engine (rediag) appears only as the
protocol counterparty and corpus source; the adapter itself never imports it."""

import sys

import pytest

from rediag.corpus import write_dataset
from rediag.lexicon import Resources
from rediag.oracle import WireOracle
from rediag.synth import SynthConfig, make_corpus

from readapter.model import RelationClassifier
from readapter.train import TrainSettings, train


@pytest.fixture(scope="session")
def corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("corpus")
    train_set, dev_set = make_corpus(SynthConfig(n_train=100, n_test=20),
                                     Resources.load())
    write_dataset(train_set, root / "train.jsonl")
    write_dataset(dev_set, root / "dev.jsonl")
    return root


@pytest.fixture(scope="session")
def dev_set(corpus_dir):
    from rediag.corpus import load_dataset
    return load_dataset(corpus_dir / "dev.jsonl")


@pytest.fixture(scope="session")
def checkpoint(corpus_dir, tmp_path_factory):
    out = tmp_path_factory.mktemp("ckpt") / "model"
    train(corpus_dir / "train.jsonl", out, TrainSettings(),
          dev_path=corpus_dir / "dev.jsonl")
    return out


@pytest.fixture(scope="session")
def classifier(checkpoint):
    return RelationClassifier.load(checkpoint)


@pytest.fixture(scope="session")
def wire(checkpoint):
    oracle = WireOracle.from_spec(
        f"exec:{sys.executable} -m readapter.serve --model {checkpoint}")
    yield oracle
    oracle.close()
