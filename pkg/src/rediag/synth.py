"""Deterministic synthetic relation-extraction corpus with planted cues.

Each relation label has a lexical cue phrase and a preferred slice of the
entity pools, so a trained classifier picks up both context and entity-name
signal: randomization tests then measure the entity reliance, attacks exploit
the cue reliance, and contrastive masking removes the cue entirely.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from rediag.corpus import Dataset, EntityMention, Instance, LabelSpace
from rediag.lexicon import Resources

NA = "NA"

#: label -> (head type, tail type, cue tokens, reversed-order template)
#: Labels come in pairs whose cue words are synonyms of each other and whose
#: entity slices coincide, so only the cue separates the pair.
RELATIONS = {
    "lives_in": ("PERSON", "LOCATION", ("lived", "in"),
                 ("{t}", "is", "the", "town", "where", "{h}", "lived")),
    "settled_in": ("PERSON", "LOCATION", ("settled", "in"),
                   ("{t}", "is", "the", "town", "where", "{h}", "settled")),
    "founded_by": ("ORGANIZATION", "PERSON", ("was", "founded", "by"),
                   ("{t}", "famously", "founded", "{h}")),
    "launched_by": ("ORGANIZATION", "PERSON", ("was", "launched", "by"),
                    ("{t}", "famously", "launched", "{h}")),
    "based_in": ("ORGANIZATION", "LOCATION", ("is", "based", "in"),
                 ("{t}", "is", "where", "{h}", "is", "based")),
    "located_in": ("ORGANIZATION", "LOCATION", ("is", "located", "in"),
                   ("{t}", "is", "where", "{h}", "is", "located")),
}

# neutral filler; a mix of stopwords and content words, several with synonyms
FILLER = (
    "yesterday today reportedly apparently once again still now quietly suddenly "
    "famous old young local small big early late happy busy "
    "according to sources the a that this and but while when after before"
).split()

# verbs for no-relation sentences; deliberately cue-free
NA_VERBS = ("met", "saw", "called", "mentioned", "visited", "praised", "ignored",
            "thanked", "greeted", "photographed")


@dataclass
class SynthConfig:
    n_train: int = 1600
    n_test: int = 400
    seed: int = 7
    cue_prob: float = 0.8  # chance the cue phrase is present (else neutral filler)
    entity_affinity: float = 1.0  # chance entities come from the label's own slice
    na_fraction: float = 0.15
    reversed_prob: float = 0.15
    cue_noise: float = 0.2  # chance a present cue is the sibling label's cue


#: sibling label with the synonymous cue (cue noise swaps within a pair)
SIBLING = {
    "lives_in": "settled_in", "settled_in": "lives_in",
    "founded_by": "launched_by", "launched_by": "founded_by",
    "based_in": "located_in", "located_in": "based_in",
}

#: every label draws from its own entity slice
SLICE_GROUP = {label: label for label in RELATIONS}


def _pool_slices(resources: Resources) -> dict[str, dict[str, list[str]]]:
    """Per type: per slice group that uses it, a disjoint slice of the pool."""
    users: dict[str, list[str]] = {}
    for label, (ht, tt, _, _) in RELATIONS.items():
        group = SLICE_GROUP[label]
        for etype in (ht, tt):
            if group not in users.setdefault(etype, []):
                users[etype].append(group)
    slices: dict[str, dict[str, list[str]]] = {}
    for etype, groups in users.items():
        names = list(resources.pools.names(etype))
        per = max(len(names) // len(groups), 1)
        slices[etype] = {
            group: names[i * per: (i + 1) * per] or names
            for i, group in enumerate(groups)
        }
    return slices


def _draw_name(etype: str, label: str, slices, resources: Resources,
               rng: np.random.Generator, affinity: float) -> str:
    pool = resources.pools.names(etype)
    own = slices[etype].get(SLICE_GROUP.get(label, label))
    if own and rng.random() < affinity:
        return own[int(rng.integers(len(own)))]
    return pool[int(rng.integers(len(pool)))]


def _filler(rng: np.random.Generator, lo: int, hi: int) -> list[str]:
    n = int(rng.integers(lo, hi + 1))
    return [FILLER[int(rng.integers(len(FILLER)))] for _ in range(n)]


def _relation_instance(label: str, slices, resources: Resources,
                       rng: np.random.Generator, cfg: SynthConfig) -> Instance:
    head_type, tail_type, cue, reversed_tpl = RELATIONS[label]
    head_name = _draw_name(head_type, label, slices, resources, rng, cfg.entity_affinity)
    tail_name = _draw_name(tail_type, label, slices, resources, rng, cfg.entity_affinity)
    head_toks = head_name.split()
    tail_toks = tail_name.split()
    with_cue = rng.random() < cfg.cue_prob
    if with_cue and rng.random() < cfg.cue_noise:
        _, _, cue, reversed_tpl = RELATIONS[SIBLING[label]]

    if with_cue and rng.random() < cfg.reversed_prob:
        tokens: list[str] = []
        head_span = tail_span = None
        for piece in reversed_tpl:
            if piece == "{h}":
                head_span = (len(tokens), len(tokens) + len(head_toks))
                tokens += head_toks
            elif piece == "{t}":
                tail_span = (len(tokens), len(tokens) + len(tail_toks))
                tokens += tail_toks
            else:
                tokens.append(piece)
        tokens += _filler(rng, 0, 2)
    else:
        middle = list(cue) if with_cue else _filler(rng, len(cue), len(cue))
        prefix = _filler(rng, 0, 3)
        suffix = _filler(rng, 1, 4)
        tokens = prefix + head_toks + middle + tail_toks + suffix
        head_span = (len(prefix), len(prefix) + len(head_toks))
        t0 = head_span[1] + len(middle)
        tail_span = (t0, t0 + len(tail_toks))

    head = EntityMention(head_name, head_span, head_type)
    tail = EntityMention(tail_name, tail_span, tail_type)
    return Instance(tuple(tokens), head, tail, label)


def _na_instance(slices, resources: Resources, rng: np.random.Generator,
                 cfg: SynthConfig) -> Instance:
    labels = list(RELATIONS)
    label = labels[int(rng.integers(len(labels)))]
    head_type, tail_type, _, _ = RELATIONS[label]
    head_name = _draw_name(head_type, label, slices, resources, rng, 0.0)
    tail_name = _draw_name(tail_type, label, slices, resources, rng, 0.0)
    head_toks, tail_toks = head_name.split(), tail_name.split()
    verb = NA_VERBS[int(rng.integers(len(NA_VERBS)))]
    prefix = _filler(rng, 0, 3)
    suffix = _filler(rng, 1, 4)
    tokens = prefix + head_toks + [verb] + tail_toks + suffix
    head = EntityMention(head_name, (len(prefix), len(prefix) + len(head_toks)), head_type)
    t0 = head.span[1] + 1
    tail = EntityMention(tail_name, (t0, t0 + len(tail_toks)), tail_type)
    return Instance(tuple(tokens), head, tail, NA)


def _make_split(n: int, slices, resources: Resources, rng: np.random.Generator,
                cfg: SynthConfig, split: str) -> Dataset:
    labels = list(RELATIONS)
    instances = []
    for _ in range(n):
        if rng.random() < cfg.na_fraction:
            instances.append(_na_instance(slices, resources, rng, cfg))
        else:
            label = labels[int(rng.integers(len(labels)))]
            instances.append(_relation_instance(label, slices, resources, rng, cfg))
    space = LabelSpace(tuple(sorted(labels)) + (NA,), NA)
    return Dataset(tuple(instances), space,
                   ({"op": "synth", "split": split, "n": n, "seed": cfg.seed},))


def make_corpus(config: SynthConfig | None = None,
                resources: Resources | None = None) -> tuple[Dataset, Dataset]:
    """(train, test) splits, fully determined by the config seed."""
    cfg = config or SynthConfig()
    resources = resources or Resources.load()
    slices = _pool_slices(resources)
    rng = np.random.default_rng(cfg.seed)
    train = _make_split(cfg.n_train, slices, resources, rng, cfg, "train")
    test = _make_split(cfg.n_test, slices, resources, rng, cfg, "test")
    return train, test
