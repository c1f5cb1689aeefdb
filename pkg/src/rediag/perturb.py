"""Randomization-test generators: entity permutation, context permutation,
mask-fill candidates, robust-set construction, and audit sampling.

Every generator is label-preserving (INV): the perturbed instance keeps the
source label, and its edit list replays exactly onto the source tokens.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from rediag.corpus import Dataset, EntityMention, Instance
from rediag.lexicon import EmptyPoolError, Resources, match_case
from rediag.oracle import Oracle
from rediag.util import parallel_map


@dataclass(frozen=True)
class Edit:
    """Replace ``old`` tokens starting at ``position`` (source indices) with ``new``."""

    position: int
    old: tuple[str, ...]
    new: tuple[str, ...]
    tag: str  # entity | synonym | fill-in | lm-mask


@dataclass(frozen=True)
class PerturbedInstance:
    instance: Instance
    source_index: int
    edits: tuple[Edit, ...]


class PermutationSkip(Exception):
    """Instance could not be perturbed; carries the reason."""


def replay_edits(source_tokens: Sequence[str], edits: Sequence[Edit]) -> list[str]:
    """Apply edits to the source tokens (descending position, so indices hold)."""
    tokens = list(source_tokens)
    for edit in sorted(edits, key=lambda e: -e.position):
        assert tuple(tokens[edit.position: edit.position + len(edit.old)]) == edit.old
        tokens[edit.position: edit.position + len(edit.old)] = list(edit.new)
    return tokens


def _shift_before(edits: Sequence[Edit], index: int) -> int:
    """Total length change from edits strictly before source index ``index``."""
    return sum(len(e.new) - len(e.old) for e in edits if e.position < index)


def _find_occurrences(tokens: Sequence[str], needle: Sequence[str],
                      blocked: set[int]) -> list[int]:
    """Start indices of ``needle`` in ``tokens`` avoiding blocked positions."""
    hits = []
    n = len(needle)
    i = 0
    while i + n <= len(tokens):
        window = range(i, i + n)
        if all(tokens[i + j] == needle[j] for j in range(n)) and not any(
            p in blocked for p in window
        ):
            hits.append(i)
            i += n
        else:
            i += 1
    return hits


def entity_permute(instance: Instance, pools, rng: np.random.Generator) -> PerturbedInstance:
    """Replace one entity mention with a same-type name from the pools.

    All occurrences of the replaced mention elsewhere in the sentence change
    consistently, except when head and tail share a surface form (then only
    the span-designated occurrence is touched). Raises PermutationSkip when
    no pool offers an alternative name.
    """
    mentions = {"head": instance.head, "tail": instance.tail}
    eligible = []
    for role, mention in mentions.items():
        names = [n for n in pools.names(mention.etype) if n.lower() != mention.name.lower()]
        if names:
            eligible.append(role)
    if not eligible:
        raise PermutationSkip(
            f"no same-type replacement for head ({instance.head.etype}) "
            f"or tail ({instance.tail.etype})"
        )

    role = eligible[int(rng.integers(len(eligible)))]
    target = mentions[role]
    other = mentions["tail" if role == "head" else "head"]
    new_name = pools.sample(target.etype, rng, exclude=target.name)
    old_toks = tuple(instance.tokens[target.span[0]: target.span[1]])
    new_toks = tuple(new_name.split())

    edits = [Edit(target.span[0], old_toks, new_toks, "entity")]
    if target.name.lower() != other.name.lower():
        blocked = instance.span_positions()
        for start in _find_occurrences(instance.tokens, old_toks, blocked):
            edits.append(Edit(start, old_toks, new_toks, "entity"))
    edits.sort(key=lambda e: e.position)

    tokens = replay_edits(instance.tokens, edits)
    new_lo = target.span[0] + _shift_before(edits, target.span[0])
    new_target = EntityMention(new_name, (new_lo, new_lo + len(new_toks)), target.etype)
    other_lo = other.span[0] + _shift_before(edits, other.span[0])
    other_len = other.span[1] - other.span[0]
    new_other = EntityMention(other.name, (other_lo, other_lo + other_len), other.etype)

    head, tail = (new_target, new_other) if role == "head" else (new_other, new_target)
    perturbed = Instance(tuple(tokens), head, tail, instance.label)
    return PerturbedInstance(perturbed, -1, tuple(edits))


def mask_fill_candidates(oracle: Oracle, tokens: Sequence[str], position: int,
                         top_n: int = 2) -> list[str]:
    """Top fill candidates for masking ``position``, via the oracle's mask LM.

    Punctuation-only candidates and the original token are excluded.
    """
    if top_n <= 0:
        return []
    raw = oracle.fill_mask(tokens, position, top_n + 4)
    original = tokens[position].lower()
    out = []
    for cand in raw:
        if cand.lower() == original or not any(ch.isalnum() for ch in cand):
            continue
        out.append(cand)
        if len(out) == top_n:
            break
    return out


def context_permute(instance: Instance, resources: Resources, rng: np.random.Generator,
                    rate: float = 0.15, oracle: Oracle | None = None) -> PerturbedInstance:
    """Replace inter-entity, non-stopword words with semantically similar ones.

    Candidate sources, in fixed priority order: synonym table, same-type
    entity fill-in pools, then mask-LM candidates when the oracle offers a
    fill-mask capability. Entity spans are never edited.
    """
    first, second = instance.spans_in_order()
    region = range(first.span[1], second.span[0])
    if len(region) == 0:
        raise PermutationSkip("empty inter-entity region")

    lm_ok = oracle is not None and oracle.capabilities().fill_mask
    edits = []
    for pos in region:
        token = instance.tokens[pos]
        if token.lower() in resources.stopwords:
            continue
        if rng.random() >= rate:
            continue
        candidates = resources.synonyms.synonyms(token)
        tag = "synonym"
        if not candidates:
            etype = resources.pools.type_of(token)
            if etype is not None:
                candidates = tuple(
                    n for n in resources.pools.names(etype)
                    if " " not in n and n.lower() != token.lower()
                )
                tag = "fill-in"
        if not candidates and lm_ok:
            candidates = tuple(mask_fill_candidates(oracle, instance.tokens, pos))
            tag = "lm-mask"
        if not candidates:
            continue
        choice = candidates[int(rng.integers(len(candidates)))]
        edits.append(Edit(pos, (token,), (match_case(token, choice),), tag))

    if not edits:
        raise PermutationSkip("no eligible position produced a candidate")
    tokens = replay_edits(instance.tokens, edits)
    perturbed = Instance(tuple(tokens), instance.head, instance.tail, instance.label)
    return PerturbedInstance(perturbed, -1, tuple(edits))


@dataclass
class PerturbConfig:
    seed: int = 42
    rate: float = 0.15
    audit_size: int = 200
    workers: int = 1


@dataclass
class RobustBuild:
    robust: Dataset
    audit: Dataset
    perturbed: list[PerturbedInstance]
    skips: dict[str, list[dict]]

    @property
    def skip_report(self) -> dict:
        return {
            "counts": {gen: len(items) for gen, items in self.skips.items()},
            "skips": self.skips,
        }


MODES = ("entity", "context", "all")
_GENERATOR_IDS = {"entity": 0, "context": 1}


def build_robust_set(dataset: Dataset, mode: str, resources: Resources,
                     config: PerturbConfig | None = None, oracle: Oracle | None = None,
                     augment: bool = False) -> RobustBuild:
    """One perturbed instance per source instance per applicable generator.

    ``augment=True`` prepends the originals (the DA training-set emitters).
    The audit dataset holds original/perturbed pairs, interleaved, for human
    review.
    """
    config = config or PerturbConfig()
    generators = ["entity", "context"] if mode == "all" else [mode]
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}; expected one of {MODES}")

    perturbed: list[PerturbedInstance] = []
    skips: dict[str, list[dict]] = {g: [] for g in generators}
    for gen in generators:
        def run(index, inst, gen=gen):
            rng = np.random.default_rng(
                np.random.SeedSequence([config.seed, _GENERATOR_IDS[gen], index])
            )
            try:
                if gen == "entity":
                    out = entity_permute(inst, resources.pools, rng)
                else:
                    out = context_permute(inst, resources, rng, config.rate, oracle)
                return PerturbedInstance(out.instance, index, out.edits)
            except (PermutationSkip, EmptyPoolError) as exc:
                return (index, str(exc))

        for result in parallel_map(run, dataset.instances, config.workers):
            if isinstance(result, PerturbedInstance):
                perturbed.append(result)
            else:
                index, reason = result
                skips[gen].append({"index": index, "reason": reason})

    step = {"op": "perturb", "mode": mode, "seed": config.seed, "rate": config.rate,
            "augment": augment,
            "skipped": {g: len(s) for g, s in skips.items()}}
    robust_instances = [p.instance for p in perturbed]
    if augment:
        robust_instances = list(dataset.instances) + robust_instances
    robust = dataset.derived(robust_instances, step)

    audit_rng = np.random.default_rng(np.random.SeedSequence([config.seed, 2]))
    n_audit = min(config.audit_size, len(perturbed))
    chosen = sorted(audit_rng.choice(len(perturbed), size=n_audit, replace=False).tolist()) \
        if n_audit else []
    audit_pairs = []
    for idx in chosen:
        p = perturbed[idx]
        audit_pairs.append(dataset.instances[p.source_index])
        audit_pairs.append(p.instance)
    audit = dataset.derived(audit_pairs, {"op": "audit-sample", "pairs": n_audit,
                                          "layout": "original,perturbed interleaved"})
    return RobustBuild(robust, audit, perturbed, skips)
