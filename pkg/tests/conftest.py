"""Shared fixtures: one synthetic corpus and one trained reference model per
session, so the expensive pieces are built exactly once."""

import pytest

from rediag.lexicon import Resources
from rediag.oracle import ReferenceOracle, TrainConfig, train_reference
from rediag.synth import SynthConfig, make_corpus


@pytest.fixture(scope="session")
def resources():
    return Resources.load()


@pytest.fixture(scope="session")
def corpus(resources):
    return make_corpus(SynthConfig(), resources)


@pytest.fixture(scope="session")
def train_set(corpus):
    return corpus[0]


@pytest.fixture(scope="session")
def test_set(corpus):
    return corpus[1]


@pytest.fixture(scope="session")
def model(train_set):
    return train_reference(train_set, TrainConfig())


@pytest.fixture(scope="session")
def oracle(model):
    return ReferenceOracle(model)


@pytest.fixture()
def fresh_oracle(model):
    """Oracle with its own query counter."""
    return ReferenceOracle(model)
