"""Static linguistic resources: synonyms, entity fill-in pools, stop words,
and corpus frequency statistics.

Resources live as plain UTF-8 files under a data directory (a bundled
miniature set ships with the package) and are immutable after load.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from rediag.corpus import Dataset, UNKNOWN_TYPE

DEFAULT_DATA_DIR = Path(__file__).parent / "data"


class LexiconError(ValueError):
    pass


class EmptyPoolError(LexiconError):
    def __init__(self, etype: str):
        self.etype = etype
        super().__init__(f"no entity candidates available for type {etype!r}")


def match_case(template: str, word: str) -> str:
    """Copy the capitalization pattern of ``template`` onto ``word``."""
    if template.isupper() and len(template) > 1:
        return word.upper()
    if template[:1].isupper():
        return word[:1].upper() + word[1:]
    return word


class SynonymTable:
    """word -> ordered candidate synonyms, case-folded."""

    def __init__(self, mapping: dict[str, tuple[str, ...]]):
        self._table: dict[str, tuple[str, ...]] = {}
        for word, cands in mapping.items():
            w = word.lower()
            seen, out = set(), []
            for c in cands:
                c = c.lower()
                if c != w and c not in seen:
                    seen.add(c)
                    out.append(c)
            if out:
                self._table[w] = tuple(out)

    @classmethod
    def load(cls, path) -> "SynonymTable":
        mapping = {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            word, _, rest = line.partition("\t")
            mapping[word] = tuple(c.strip() for c in rest.split(",") if c.strip())
        return cls(mapping)

    def synonyms(self, word: str) -> tuple[str, ...]:
        """Candidates in table order; empty when the word is unknown."""
        return self._table.get(word.lower(), ())

    def words(self) -> tuple[str, ...]:
        return tuple(self._table)

    def __len__(self) -> int:
        return len(self._table)


class EntityPool:
    """entity-type -> ordered list of names; UNKNOWN falls back to the union."""

    def __init__(self, pools: dict[str, tuple[str, ...]]):
        self._pools = {k: tuple(v) for k, v in pools.items() if v}
        if UNKNOWN_TYPE not in self._pools:
            union = []
            for names in self._pools.values():
                union.extend(names)
            if union:
                self._pools[UNKNOWN_TYPE] = tuple(dict.fromkeys(union))
        self._members = {
            name.lower(): etype
            for etype, names in sorted(self._pools.items())
            if etype != UNKNOWN_TYPE
            for name in names
        }

    @classmethod
    def load(cls, directory) -> "EntityPool":
        pools = {}
        directory = Path(directory)
        for path in sorted(directory.glob("*.txt")):
            names = [
                ln.strip() for ln in path.read_text(encoding="utf-8").splitlines()
                if ln.strip() and not ln.startswith("#")
            ]
            pools[path.stem.upper()] = tuple(names)
        return cls(pools)

    def types(self) -> tuple[str, ...]:
        return tuple(sorted(self._pools))

    def names(self, etype: str) -> tuple[str, ...]:
        return self._pools.get(etype, self._pools.get(UNKNOWN_TYPE, ()))

    def type_of(self, name: str) -> str | None:
        """Pool type containing ``name``, if any (case-insensitive)."""
        return self._members.get(name.lower())

    def sample(self, etype: str, rng: np.random.Generator,
               exclude: str | None = None) -> str:
        """Uniform draw from the type pool, never returning ``exclude``."""
        names = self.names(etype)
        if exclude is not None:
            excl = exclude.lower()
            names = tuple(n for n in names if n.lower() != excl)
        if not names:
            raise EmptyPoolError(etype)
        return names[int(rng.integers(len(names)))]


def load_stopwords(path) -> frozenset[str]:
    return frozenset(
        ln.strip().lower() for ln in Path(path).read_text(encoding="utf-8").splitlines()
        if ln.strip() and not ln.startswith("#")
    )


@dataclass
class Resources:
    synonyms: SynonymTable
    pools: EntityPool
    stopwords: frozenset[str]

    @classmethod
    def load(cls, directory=None) -> "Resources":
        directory = Path(directory) if directory else DEFAULT_DATA_DIR
        return cls(
            synonyms=SynonymTable.load(directory / "synonyms.tsv"),
            pools=EntityPool.load(directory / "entities"),
            stopwords=load_stopwords(directory / "stopwords.txt"),
        )


@dataclass
class FrequencyTable:
    token_count: Counter = field(default_factory=Counter)
    label_token_count: Counter = field(default_factory=Counter)  # (label, token) keys
    pair_count: Counter = field(default_factory=Counter)  # (head name, tail name) keys
    total: int = 0

    def label_counts(self, label: str) -> Counter:
        out = Counter()
        for (lab, tok), n in self.label_token_count.items():
            if lab == label:
                out[tok] = n
        return out


def token_stats(dataset: Dataset, stopwords: frozenset[str]) -> FrequencyTable:
    """Case-folded token counts over non-stopword tokens, plus entity-pair counts."""
    table = FrequencyTable()
    for inst in dataset:
        for tok in inst.tokens:
            t = tok.lower()
            if t in stopwords:
                continue
            table.token_count[t] += 1
            table.label_token_count[(inst.label, t)] += 1
            table.total += 1
        table.pair_count[(inst.head.name, inst.tail.name)] += 1
    return table
