"""Robustness and bias diagnostics for relation-extraction classifiers.

The toolkit builds evaluation sets (randomized, adversarial, counterfactual,
selection-bias, semantic-bias) for sequence classifiers that predict the
relation between two marked entities, emits the matching augmented training
sets, and scores any classifier reachable through the oracle protocol.
"""

__version__ = "0.1.0"

from rediag.corpus import (
    Dataset,
    EntityMention,
    Instance,
    LabelSpace,
    insert_entity_markers,
    load_dataset,
    strip_entity_markers,
    write_dataset,
)
from rediag.oracle import (
    CapabilitySet,
    Prediction,
    ReferenceModel,
    ReferenceOracle,
    TrainConfig,
    WireOracle,
    train_reference,
)

__all__ = [
    "Dataset",
    "EntityMention",
    "Instance",
    "LabelSpace",
    "insert_entity_markers",
    "strip_entity_markers",
    "load_dataset",
    "write_dataset",
    "CapabilitySet",
    "Prediction",
    "ReferenceModel",
    "ReferenceOracle",
    "TrainConfig",
    "WireOracle",
    "train_reference",
]
