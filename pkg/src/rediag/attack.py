"""Adversarial example generation: PWWS and HotFlip under a similarity
constraint, plus adversarial-training set emission.

A success must satisfy all of: the adversarial prediction's argmax differs
from the original prediction's, and similarity(original, adversarial) >= the
configured epsilon. verify_attack re-checks both from scratch.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Sequence

import numpy as np

from rediag.corpus import (
    Dataset,
    Instance,
    MARKER_TOKENS,
    insert_entity_markers,
    marked_position,
)
from rediag.lexicon import Resources, match_case
from rediag.oracle import CapabilityMissing, Oracle, Prediction
from rediag.perturb import Edit, replay_edits
from rediag.util import parallel_map


@dataclass(frozen=True)
class AttackConfig:
    epsilon: float = 0.8
    max_replacements: int | None = None  # PWWS; None = every eligible word
    beam_width: int = 10
    max_flips: int = 10
    protect_entities: bool = True
    candidate_pool: int = 20  # gradient-ranked substitutes per position (HotFlip)

    def __post_init__(self):
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must be in [0,1], got {self.epsilon}")
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")


@dataclass(frozen=True)
class AttackResult:
    success: bool
    adversarial: Instance | None
    edits: tuple[Edit, ...]
    similarity: float
    queries: int
    original_pred: Prediction
    adversarial_pred: Prediction
    method: str
    #: PWWS: per applied edit, the replacement-order score it was chosen at.
    order_scores: tuple[float, ...] = ()

    def __post_init__(self):
        ok = self.adversarial is not None \
            and self.adversarial_pred.argmax != self.original_pred.argmax
        if self.success != ok:
            raise ValueError("AttackResult success flag inconsistent with its fields")


def levenshtein(a: Sequence, b: Sequence) -> int:
    if len(a) < len(b):
        a, b = b, a
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a, start=1):
        cur = [i]
        for j, y in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (x != y)))
        prev = cur
    return prev[-1]


def similarity(x: Sequence[str], x_adv: Sequence[str]) -> float:
    """1 - token-level edit distance / max length; 1.0 for identical inputs."""
    if len(x) == 0 and len(x_adv) == 0:
        return 1.0
    return 1.0 - levenshtein(list(x), list(x_adv)) / max(len(x), len(x_adv))


def char_similarity(x: Sequence[str], x_adv: Sequence[str]) -> float:
    return similarity(" ".join(x), " ".join(x_adv))


def eligible_positions(instance: Instance, protect_entities: bool = True) -> list[int]:
    blocked = instance.span_positions() if protect_entities else set()
    return [i for i in range(len(instance.tokens)) if i not in blocked]


class _Counter:
    """Tracks the oracle queries issued by a single attack."""

    def __init__(self, oracle: Oracle):
        self.oracle = oracle
        self.n = 0

    def predict_batch(self, batch):
        self.n += len(batch)
        return self.oracle.predict_batch(batch)

    def input_gradient(self, tokens, target):
        self.n += 1
        return self.oracle.input_gradient(tokens, target)


def word_saliency(oracle: Oracle, instance: Instance,
                  config: AttackConfig | None = None,
                  _counter: _Counter | None = None) -> tuple[list[int], np.ndarray]:
    """Saliency of each eligible position: P(y|x) - P(y|x with the word deleted).

    One batched oracle call covers the base sentence and every deletion.
    """
    config = config or AttackConfig()
    counter = _counter or _Counter(oracle)
    positions = eligible_positions(instance, config.protect_entities)
    marked = insert_entity_markers(instance)
    batch = [marked]
    for pos in positions:
        variant = list(marked)
        del variant[marked_position(instance, pos)]
        batch.append(variant)
    preds = counter.predict_batch(batch)
    p_true = preds[0].prob(instance.label)
    scores = np.array([p_true - preds[k + 1].prob(instance.label)
                       for k in range(len(positions))])
    return positions, scores


def _substitute_candidates(token: str, resources: Resources) -> list[str]:
    """Synonym-table candidates plus same-type single-token entity names."""
    out = [match_case(token, c) for c in resources.synonyms.synonyms(token)]
    etype = resources.pools.type_of(token)
    if etype is not None:
        out += [n for n in resources.pools.names(etype)
                if " " not in n and n.lower() != token.lower()]
    seen = set()
    uniq = []
    for c in out:
        if c.lower() != token.lower() and c.lower() not in seen:
            seen.add(c.lower())
            uniq.append(c)
    return uniq


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max()
    e = np.exp(z)
    return e / e.sum()


def pwws_attack(oracle: Oracle, instance: Instance, resources: Resources,
                config: AttackConfig | None = None) -> AttackResult:
    """Probability-weighted word-saliency attack.

    Per eligible word, the substitute maximizing the true-label probability
    drop is selected; words are then replaced greedily in descending order of
    softmax(saliency) * drop, until the predicted label flips or the
    similarity / replacement budget is exhausted.
    """
    config = config or AttackConfig()
    counter = _Counter(oracle)
    marked = insert_entity_markers(instance)
    original_pred = counter.predict_batch([marked])[0]
    p_true = original_pred.prob(instance.label)

    positions, sal = word_saliency(oracle, instance, config, _counter=counter)
    candidates = {pos: _substitute_candidates(instance.tokens[pos], resources)
                  for pos in positions}

    variants = []
    keys = []
    for pos in positions:
        for cand in candidates[pos]:
            variant = list(marked)
            variant[marked_position(instance, pos)] = cand
            variants.append(variant)
            keys.append((pos, cand))
    best: dict[int, tuple[str, float]] = {}
    if variants:
        preds = counter.predict_batch(variants)
        for (pos, cand), pred in zip(keys, preds):
            drop = p_true - pred.prob(instance.label)
            incumbent = best.get(pos)
            # ties broken by lexicographic candidate order
            if incumbent is None or drop > incumbent[1] or (
                drop == incumbent[1] and cand < incumbent[0]
            ):
                best[pos] = (cand, drop)

    phi = _softmax(sal)
    order = []
    for k, pos in enumerate(positions):
        if pos in best:
            cand, drop = best[pos]
            order.append((phi[k] * drop, pos, cand))
    # descending score; ties by lower position
    order.sort(key=lambda item: (-item[0], item[1]))

    current = list(instance.tokens)
    cur_marked = list(marked)
    edits: list[Edit] = []
    scores: list[float] = []
    success = False
    adversarial_pred = original_pred
    budget = config.max_replacements if config.max_replacements is not None else len(order)
    sim = 1.0
    for score, pos, cand in order[:max(budget, 0)]:
        trial = list(current)
        trial[pos] = cand
        trial_sim = similarity(instance.tokens, trial)
        if trial_sim < config.epsilon:
            break
        current = trial
        sim = trial_sim
        cur_marked[marked_position(instance, pos)] = cand
        edits.append(Edit(pos, (instance.tokens[pos],), (cand,), "pwws"))
        scores.append(float(score))
        adversarial_pred = counter.predict_batch([cur_marked])[0]
        if adversarial_pred.argmax != original_pred.argmax:
            success = True
            break

    adversarial = None
    if success:
        adversarial = Instance(tuple(current), instance.head, instance.tail, instance.label)
    return AttackResult(
        success=success,
        adversarial=adversarial,
        edits=tuple(edits),
        similarity=sim,
        queries=counter.n,
        original_pred=original_pred,
        adversarial_pred=adversarial_pred,
        method="pwws",
        order_scores=tuple(scores),
    )


_EXCLUDED_SUBSTITUTES = set(MARKER_TOKENS)


def _flip_pool(grad: np.ndarray, current_vec: np.ndarray, vocab_vecs: np.ndarray,
               pool: int) -> list[tuple[int, float]]:
    """Top candidate indices by first-order loss increase, positive scores only."""
    scores = vocab_vecs @ grad - float(current_vec @ grad)
    order = np.argsort(-scores, kind="stable")[:pool]
    return [(int(i), float(scores[i])) for i in order if scores[i] > 0]


def hotflip_attack(oracle: Oracle, instance: Instance,
                   config: AttackConfig | None = None) -> AttackResult:
    """Gradient-guided substitution attack with beam search.

    Word mode (capability word_gradient): candidate substitutes at each
    position are ranked by the first-order loss change grad . (e_v - e_u);
    the top candidates are re-scored by querying the oracle, and the beam
    keeps the states with the lowest true-label probability. Char mode
    (capability char_gradient) works the same over character edits, with
    insertion and deletion expressed as substitution-like single-char edits.
    """
    config = config or AttackConfig()
    caps = oracle.capabilities()
    if caps.word_gradient:
        return _hotflip_words(oracle, instance, config)
    if caps.char_gradient:
        return _hotflip_chars(oracle, instance, config)
    raise CapabilityMissing("word_gradient")


def _hotflip_words(oracle: Oracle, instance: Instance, config: AttackConfig) -> AttackResult:
    counter = _Counter(oracle)
    marked = insert_entity_markers(instance)
    original_pred = counter.predict_batch([marked])[0]
    positions = eligible_positions(instance, config.protect_entities)

    vocab = tuple(t for t in oracle.vocabulary() if t not in _EXCLUDED_SUBSTITUTES)
    vocab_vecs = oracle.embed_tokens(vocab)

    # beam states: (tokens, flipped position set, edits, realized p_true)
    p0 = original_pred.prob(instance.label)
    beam = [(list(instance.tokens), frozenset(), (), p0)]
    best_state = beam[0]

    for _ in range(config.max_flips):
        expansions = []
        for tokens, flipped, edits, _ in beam:
            state_inst = Instance(tuple(tokens), instance.head, instance.tail, instance.label)
            grads = counter.input_gradient(insert_entity_markers(state_inst), instance.label)
            cur_vecs = oracle.embed_tokens(tokens)
            for pos in positions:
                if pos in flipped:
                    continue
                mpos = marked_position(instance, pos)
                for cand_idx, _score in _flip_pool(
                    grads[mpos], cur_vecs[pos], vocab_vecs, config.candidate_pool
                ):
                    cand = vocab[cand_idx]
                    if cand == tokens[pos]:
                        continue
                    trial = list(tokens)
                    trial[pos] = cand
                    if similarity(instance.tokens, trial) < config.epsilon:
                        continue
                    expansions.append((trial, flipped | {pos},
                                       edits + (Edit(pos, (tokens[pos],), (cand,), "hotflip"),)))
        if not expansions:
            break

        batch = []
        for trial, _, _ in expansions:
            inst = Instance(tuple(trial), instance.head, instance.tail, instance.label)
            batch.append(insert_entity_markers(inst))
        preds = counter.predict_batch(batch)
        scored = [
            (trial, flipped, edits, preds[k].prob(instance.label), preds[k])
            for k, (trial, flipped, edits) in enumerate(expansions)
        ]
        scored.sort(key=lambda s: (s[3], min(e.position for e in s[2]),
                                   tuple(e.new[0] for e in s[2])))
        for trial, flipped, edits, p_true, pred in scored[:config.beam_width]:
            if pred.argmax != original_pred.argmax:
                adversarial = Instance(tuple(trial), instance.head, instance.tail,
                                       instance.label)
                return AttackResult(
                    success=True, adversarial=adversarial, edits=edits,
                    similarity=similarity(instance.tokens, trial), queries=counter.n,
                    original_pred=original_pred, adversarial_pred=pred, method="hotflip",
                )
        beam = [(t, f, e, p) for t, f, e, p, _ in scored[:config.beam_width]]
        if beam[0][3] < best_state[3]:
            best_state = beam[0]

    tokens, _, edits, _ = best_state
    final_pred = counter.predict_batch([insert_entity_markers(
        Instance(tuple(tokens), instance.head, instance.tail, instance.label))])[0]
    return AttackResult(
        success=False, adversarial=None, edits=edits,
        similarity=similarity(instance.tokens, tokens), queries=counter.n,
        original_pred=original_pred, adversarial_pred=final_pred, method="hotflip",
    )


def _hotflip_chars(oracle: Oracle, instance: Instance, config: AttackConfig) -> AttackResult:
    """Character-level flips; insertion/deletion are single-char edit moves."""
    counter = _Counter(oracle)
    caps = oracle.capabilities()
    alphabet = list(caps.alphabet)
    alpha_idx = {c: i for i, c in enumerate(alphabet)}
    marked = insert_entity_markers(instance)
    original_pred = counter.predict_batch([marked])[0]
    positions = eligible_positions(instance, config.protect_entities)

    def char_moves(tokens, grads):
        """(new_tokens, edit, first-order score) for every single-char move."""
        moves = []
        for pos in positions:
            word = tokens[pos]
            g = grads[marked_position(instance, pos)]  # (chars, alphabet)
            for ci, ch in enumerate(word):
                base = g[ci][alpha_idx[ch]] if ch in alpha_idx else 0.0
                for v, cand in enumerate(alphabet):
                    if cand == ch:
                        continue
                    new_word = word[:ci] + cand + word[ci + 1:]
                    moves.append((pos, new_word, g[ci][v] - base))
                # deletion: drop this character
                if len(word) > 1:
                    moves.append((pos, word[:ci] + word[ci + 1:], -base))
                # insertion before this character
                for v, cand in enumerate(alphabet):
                    moves.append((pos, word[:ci] + cand + word[ci:], g[ci][v]))
        return moves

    beam = [(list(instance.tokens), (), original_pred.prob(instance.label))]
    for _ in range(config.max_flips):
        expansions = []
        for tokens, edits, _ in beam:
            state_inst = Instance(tuple(tokens), *_respan(instance, tokens))
            grads = counter.input_gradient(insert_entity_markers(state_inst), instance.label)
            moves = char_moves(tokens, grads)
            moves.sort(key=lambda m: -m[2])
            for pos, new_word, score in moves[:config.candidate_pool]:
                if score <= 0:
                    continue
                trial = list(tokens)
                trial[pos] = new_word
                if char_similarity(instance.tokens, trial) < config.epsilon:
                    continue
                expansions.append(
                    (trial, edits + (Edit(pos, (tokens[pos],), (new_word,), "hotflip-char"),))
                )
        if not expansions:
            break
        batch = []
        for trial, _ in expansions:
            inst = Instance(tuple(trial), *_respan(instance, trial))
            batch.append(insert_entity_markers(inst))
        preds = counter.predict_batch(batch)
        scored = sorted(
            ((trial, edits, preds[k].prob(instance.label), preds[k])
             for k, (trial, edits) in enumerate(expansions)),
            key=lambda s: s[2],
        )
        for trial, edits, _, pred in scored[:config.beam_width]:
            if pred.argmax != original_pred.argmax:
                adversarial = Instance(tuple(trial), *_respan(instance, trial))
                return AttackResult(
                    success=True, adversarial=adversarial, edits=edits,
                    similarity=char_similarity(instance.tokens, trial), queries=counter.n,
                    original_pred=original_pred, adversarial_pred=pred, method="hotflip-char",
                )
        beam = [(t, e, p) for t, e, p, _ in scored[:config.beam_width]]

    tokens, edits, _ = beam[0]
    final = counter.predict_batch([insert_entity_markers(
        Instance(tuple(tokens), *_respan(instance, tokens)))])[0]
    return AttackResult(
        success=False, adversarial=None, edits=edits,
        similarity=char_similarity(instance.tokens, tokens), queries=counter.n,
        original_pred=original_pred, adversarial_pred=final, method="hotflip-char",
    )


def _respan(instance: Instance, tokens) -> tuple:
    """Entity mentions with names refreshed from possibly edited span tokens."""
    head = replace(instance.head,
                   name=" ".join(tokens[instance.head.span[0]: instance.head.span[1]]))
    tail = replace(instance.tail,
                   name=" ".join(tokens[instance.tail.span[0]: instance.tail.span[1]]))
    return head, tail, instance.label


def verify_attack(oracle: Oracle, instance: Instance, result: AttackResult,
                  config: AttackConfig) -> bool:
    """Independent post-hoc check of the validity constraint on a success.

    Recomputes both predictions from scratch, replays the edit list, and
    re-measures similarity.
    """
    if not result.success:
        return True
    replayed = replay_edits(instance.tokens, result.edits)
    if tuple(replayed) != result.adversarial.tokens:
        return False
    char_mode = result.method.endswith("char")
    sim_fn = char_similarity if char_mode else similarity
    sim = sim_fn(instance.tokens, result.adversarial.tokens)
    if sim < config.epsilon or abs(sim - result.similarity) > 1e-9:
        return False
    orig = oracle.predict(insert_entity_markers(instance))
    adv = oracle.predict(insert_entity_markers(result.adversarial))
    return adv.argmax != orig.argmax


def audit_pwws_order(oracle: Oracle, instance: Instance, result: AttackResult,
                     resources: Resources, config: AttackConfig) -> bool:
    """Recompute the replacement-order scores and check they are non-increasing
    along the applied trace."""
    if result.method != "pwws" or not result.edits:
        return True
    positions, sal = word_saliency(oracle, instance, config)
    phi = _softmax(sal)
    marked = insert_entity_markers(instance)
    p_true = oracle.predict(marked).prob(instance.label)
    recomputed = []
    for edit in result.edits:
        k = positions.index(edit.position)
        variant = list(marked)
        variant[marked_position(instance, edit.position)] = edit.new[0]
        drop = p_true - oracle.predict(variant).prob(instance.label)
        recomputed.append(phi[k] * drop)
    if any(abs(a - b) > 1e-9 for a, b in zip(recomputed, result.order_scores)):
        return False
    return all(a >= b - 1e-12 for a, b in zip(recomputed, recomputed[1:]))


def emit_adversarial_train(train: Dataset, oracle: Oracle, method: str,
                           resources: Resources, config: AttackConfig | None = None,
                           workers: int = 1) -> tuple[Dataset, dict]:
    """Training set enriched with successful adversarial examples (gold labels).

    Returns the augmented dataset and a stats record (success rate, mean
    queries) destined for the manifest.
    """
    config = config or AttackConfig()

    def run(index, inst):
        if method == "pwws":
            return pwws_attack(oracle, inst, resources, config)
        if method == "hotflip":
            return hotflip_attack(oracle, inst, config)
        raise ValueError(f"unknown attack method {method!r}")

    results = parallel_map(run, train.instances, workers)
    successes = [r.adversarial for r in results if r.success]
    stats = {
        "op": "adversarial-train",
        "method": method,
        "epsilon": config.epsilon,
        "attacked": len(results),
        "successes": len(successes),
        "success_rate": len(successes) / len(results) if results else 0.0,
        "mean_queries": float(np.mean([r.queries for r in results])) if results else 0.0,
    }
    augmented = train.derived(list(train.instances) + successes, stats)
    return augmented, stats
