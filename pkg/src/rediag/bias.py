"""Selection-bias and semantic-bias set construction and mitigation emitters.

"High-frequency" is label-conditional: a token counts as a biased cue when
its count under the instance's gold label exceeds the quantile threshold of
that label's token counts. No transform here ever changes a label.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from rediag.corpus import (
    Dataset,
    EntityMention,
    ENTITY_TOKEN,
    Instance,
    UNUSED_TOKEN,
    insert_entity_markers,
)
from rediag.lexicon import FrequencyTable, Resources, match_case
from rediag.oracle import Oracle
from rediag.util import item_rng, parallel_map


@dataclass(frozen=True)
class BiasConfig:
    freq_quantile: float = 0.9  # threshold quantile for "high-frequency"
    mask_prob: float = 0.5  # p for de-biased training masks
    entity_mask_pct: float = 50.0  # K, percent of entity mentions to mask
    pair_freq_quantile: float = 0.9  # tau for frequency-mode entity masking
    seed: int = 42
    workers: int = 1

    def __post_init__(self):
        if not 0.0 < self.freq_quantile < 1.0 or not 0.0 < self.pair_freq_quantile < 1.0:
            raise ValueError("quantiles must lie in (0,1)")
        if not 0.0 <= self.entity_mask_pct <= 100.0:
            raise ValueError("entity mask percentage must lie in [0,100]")


def label_freq_threshold(stats: FrequencyTable, label: str, quantile: float) -> float:
    """Quantile threshold over the label's distinct-token counts (0 when the
    label has no counted tokens)."""
    counts = [n for (lab, _), n in stats.label_token_count.items() if lab == label]
    if not counts:
        return 0.0
    return float(np.quantile(np.array(counts, dtype=np.float64), quantile))


def selection_bias_set(test: Dataset, stats: FrequencyTable, resources: Resources,
                       config: BiasConfig | None = None) -> tuple[Dataset, dict]:
    """Replace label-frequent cue tokens with their rarest synonym.

    ``stats`` must come from the train split. Tokens above the label's
    frequency threshold are swapped for the synonym with the lowest
    label-conditional train frequency, provided that frequency stays at or
    below the threshold; tokens without a qualifying synonym stay (counted).
    """
    config = config or BiasConfig()
    thresholds = {lab: label_freq_threshold(stats, lab, config.freq_quantile)
                  for lab in test.label_space.labels}
    replaced = 0
    skipped = 0
    untouched = 0
    out = []
    for inst in test:
        blocked = inst.span_positions()
        threshold = thresholds[inst.label]
        tokens = list(inst.tokens)
        changed = False
        for i, tok in enumerate(tokens):
            low = tok.lower()
            if i in blocked or low in resources.stopwords:
                continue
            if stats.label_token_count.get((inst.label, low), 0) <= threshold:
                continue
            cands = resources.synonyms.synonyms(low)
            cands = sorted(
                (c for c in cands
                 if stats.label_token_count.get((inst.label, c), 0) <= threshold),
                key=lambda c: (stats.label_token_count.get((inst.label, c), 0), c),
            )
            if not cands:
                skipped += 1
                continue
            tokens[i] = match_case(tok, cands[0])
            replaced += 1
            changed = True
        if not changed:
            untouched += 1
        out.append(Instance(tuple(tokens), inst.head, inst.tail, inst.label))
    report = {"op": "selection-bias-set", "quantile": config.freq_quantile,
              "replaced": replaced, "no_synonym": skipped, "untouched": untouched}
    return test.derived(out, report), report


def frequency_mask_train(train: Dataset, stats: FrequencyTable,
                         config: BiasConfig | None = None) -> Dataset:
    """De-biased training set: label-frequent non-entity tokens masked with
    probability mask_prob (reserved unused token). Deterministic under seed."""
    config = config or BiasConfig()
    thresholds = {lab: label_freq_threshold(stats, lab, config.freq_quantile)
                  for lab in train.label_space.labels}

    def run(index, inst):
        rng = item_rng(config.seed, index)
        blocked = inst.span_positions()
        threshold = thresholds[inst.label]
        tokens = list(inst.tokens)
        for i, tok in enumerate(tokens):
            if i in blocked:
                continue
            if stats.label_token_count.get((inst.label, tok.lower()), 0) <= threshold:
                continue
            if rng.random() < config.mask_prob:
                tokens[i] = UNUSED_TOKEN
        return Instance(tuple(tokens), inst.head, inst.tail, inst.label)

    out = parallel_map(run, train.instances, config.workers)
    return train.derived(out, {"op": "frequency-mask-train", "p": config.mask_prob,
                               "quantile": config.freq_quantile, "seed": config.seed})


def to_masked_entity(instance: Instance) -> Instance:
    """ME setting: both entity names replaced by the reserved entity token."""
    return _mask_instance(instance, mask_head=True, mask_tail=True)


def to_only_entity(instance: Instance) -> Instance:
    """OE setting: [E1] head [/E1] [E2] tail [/E2], all context dropped."""
    h = list(instance.tokens[instance.head.span[0]: instance.head.span[1]])
    t = list(instance.tokens[instance.tail.span[0]: instance.tail.span[1]])
    tokens = ["[E1]"] + h + ["[/E1]", "[E2]"] + t + ["[/E2]"]
    head = EntityMention(instance.head.name, (1, 1 + len(h)), instance.head.etype)
    tail = EntityMention(instance.tail.name, (3 + len(h), 3 + len(h) + len(t)),
                         instance.tail.etype)
    return Instance(tuple(tokens), head, tail, instance.label)


def oe_debiased_set(test: Dataset, oracle: Oracle, batch_size: int = 64) -> Dataset:
    """Subset of the test split whose only-entity form the oracle gets wrong."""
    oe = [to_only_entity(inst) for inst in test]
    wrong = []
    for start in range(0, len(oe), batch_size):
        chunk = oe[start: start + batch_size]
        preds = oracle.predict_batch([insert_entity_markers(i) for i in chunk])
        for offset, pred in enumerate(preds):
            idx = start + offset
            if pred.argmax != test.instances[idx].label:
                wrong.append(test.instances[idx])
    return test.derived(wrong, {"op": "oe-debiased-set", "kept": len(wrong),
                                "of": len(test)})


def selective_entity_mask(train: Dataset, mode: str, stats: FrequencyTable | None = None,
                          config: BiasConfig | None = None) -> Dataset:
    """Mask entity mentions during training to force context use.

    percent mode: a uniformly random K% of all mentions (head and tail count
    separately). frequency mode: exactly the mentions of instances whose
    entity-pair train frequency exceeds the tau quantile.
    """
    config = config or BiasConfig()
    if mode not in ("percent", "frequency"):
        raise ValueError(f"unknown mode {mode!r}; expected percent or frequency")

    n = len(train)
    to_mask: set[tuple[int, str]] = set()
    if mode == "percent":
        mentions = [(i, role) for i in range(n) for role in ("head", "tail")]
        rng = np.random.default_rng(np.random.SeedSequence([config.seed, 3]))
        count = int(round(len(mentions) * config.entity_mask_pct / 100.0))
        chosen = rng.choice(len(mentions), size=count, replace=False)
        to_mask = {mentions[int(j)] for j in chosen}
    else:
        if stats is None or not stats.pair_count:
            raise ValueError("frequency mode requires train entity-pair statistics")
        counts = np.array(list(stats.pair_count.values()), dtype=np.float64)
        tau = float(np.quantile(counts, config.pair_freq_quantile))
        for i, inst in enumerate(train):
            if stats.pair_count.get((inst.head.name, inst.tail.name), 0) > tau:
                to_mask.add((i, "head"))
                to_mask.add((i, "tail"))

    out = []
    for i, inst in enumerate(train):
        mask_head = (i, "head") in to_mask
        mask_tail = (i, "tail") in to_mask
        if mask_head or mask_tail:
            out.append(_mask_instance(inst, mask_head, mask_tail))
        else:
            out.append(inst)
    return train.derived(out, {"op": "selective-entity-mask", "mode": mode,
                               "K": config.entity_mask_pct,
                               "tau": config.pair_freq_quantile, "seed": config.seed})


def _mask_instance(inst: Instance, mask_head: bool, mask_tail: bool) -> Instance:
    """Rebuild an instance with the requested mentions collapsed to [ENT]."""
    pieces = []
    mentions = sorted(
        [("head", inst.head, mask_head), ("tail", inst.tail, mask_tail)],
        key=lambda m: m[1].span[0],
    )
    cursor = 0
    spans = {}
    tokens: list[str] = []
    for role, mention, wanted in mentions:
        tokens += inst.tokens[cursor: mention.span[0]]
        start = len(tokens)
        if wanted:
            tokens.append(ENTITY_TOKEN)
            spans[role] = EntityMention(ENTITY_TOKEN, (start, start + 1), mention.etype)
        else:
            body = list(inst.tokens[mention.span[0]: mention.span[1]])
            tokens += body
            spans[role] = EntityMention(mention.name, (start, start + len(body)),
                                        mention.etype)
        cursor = mention.span[1]
    tokens += inst.tokens[cursor:]
    return Instance(tuple(tokens), spans["head"], spans["tail"], inst.label)
