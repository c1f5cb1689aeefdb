"""Data model for relation-extraction instances, dataset I/O, entity markers.

Token-level half-open spans are canonical everywhere; loaders for formats
with inclusive indices convert on the way in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

CLS = "[CLS]"
SEP = "[SEP]"
E1_OPEN = "[E1]"
E1_CLOSE = "[/E1]"
E2_OPEN = "[E2]"
E2_CLOSE = "[/E2]"
MARKER_TOKENS = (CLS, SEP, E1_OPEN, E1_CLOSE, E2_OPEN, E2_CLOSE)

#: Reserved token used for contrastive / frequency / entity masking.  External
#: oracles see it literally; the reference model maps it to its unused id.
UNUSED_TOKEN = "[unused5]"
#: Reserved token standing in for a masked entity mention.
ENTITY_TOKEN = "[ENT]"

UNKNOWN_TYPE = "UNKNOWN"


class CorpusError(ValueError):
    """Invalid instance data or dataset file."""


class ParseError(CorpusError):
    """A dataset file failed to parse; carries a line-numbered report."""

    def __init__(self, path, problems):
        self.path = str(path)
        self.problems = list(problems)
        lines = "\n".join(f"  line {n}: {msg}" for n, msg in self.problems)
        super().__init__(f"{path}: {len(self.problems)} bad record(s)\n{lines}")


def _norm_ws(text: str) -> str:
    return " ".join(text.split())


@dataclass(frozen=True)
class EntityMention:
    name: str
    span: tuple[int, int]
    etype: str = UNKNOWN_TYPE

    def check(self, tokens: Sequence[str]) -> None:
        lo, hi = self.span
        if not (0 <= lo < hi <= len(tokens)):
            raise CorpusError(f"span {self.span} out of bounds for {len(tokens)} tokens")
        if _norm_ws(self.name) != _norm_ws(" ".join(tokens[lo:hi])):
            raise CorpusError(
                f"mention name {self.name!r} does not match tokens {tokens[lo:hi]!r}"
            )


@dataclass(frozen=True)
class Instance:
    tokens: tuple[str, ...]
    head: EntityMention
    tail: EntityMention
    label: str

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise CorpusError("empty token sequence")
        self.head.check(self.tokens)
        self.tail.check(self.tokens)
        h, t = self.head.span, self.tail.span
        if max(h[0], t[0]) < min(h[1], t[1]):
            raise CorpusError(f"head span {h} overlaps tail span {t}")

    def spans_in_order(self) -> tuple[EntityMention, EntityMention]:
        """Head and tail sorted by textual position."""
        return tuple(sorted((self.head, self.tail), key=lambda m: m.span[0]))

    def span_positions(self) -> set[int]:
        out = set(range(*self.head.span))
        out.update(range(*self.tail.span))
        return out


@dataclass(frozen=True)
class LabelSpace:
    labels: tuple[str, ...]
    na_label: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if len(set(self.labels)) != len(self.labels):
            raise CorpusError("duplicate labels")
        if self.na_label is not None and self.na_label not in self.labels:
            raise CorpusError(f"na_label {self.na_label!r} not in labels")

    def __contains__(self, label: str) -> bool:
        return label in self.labels

    def with_na(self, na_label: str = "NA") -> "LabelSpace":
        """This space if it has an NA label, else a copy with one appended."""
        if self.na_label is not None:
            return self
        labels = self.labels if na_label in self.labels else self.labels + (na_label,)
        return LabelSpace(labels, na_label)


# Labels that mark the no-relation class in common dataset releases.
_NA_NAMES = ("NA", "no_relation", "Other", "NOT_such_relation")


@dataclass(frozen=True)
class Dataset:
    instances: tuple[Instance, ...]
    label_space: LabelSpace
    provenance: tuple[dict, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(self, "provenance", tuple(self.provenance))
        for i, inst in enumerate(self.instances):
            if inst.label not in self.label_space:
                raise CorpusError(f"instance {i}: label {inst.label!r} not in label space")

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self):
        return iter(self.instances)

    def derived(self, instances: Iterable[Instance], step: dict,
                label_space: LabelSpace | None = None) -> "Dataset":
        """New dataset with one more provenance step."""
        return Dataset(
            tuple(instances),
            label_space or self.label_space,
            self.provenance + (dict(step),),
        )


def infer_label_space(labels: Iterable[str]) -> LabelSpace:
    ordered = tuple(sorted(set(labels)))
    na = next((n for n in _NA_NAMES if n in ordered), None)
    return LabelSpace(ordered, na)


def _instance_from_opennre(obj: dict) -> Instance:
    toks = tuple(obj["token"])
    mentions = {}
    for key in ("h", "t"):
        ent = obj[key]
        lo, hi = ent["pos"]
        mentions[key] = EntityMention(ent["name"], (lo, hi), ent.get("type", UNKNOWN_TYPE))
    return Instance(toks, mentions["h"], mentions["t"], obj["relation"])


def _instance_from_tacred(obj: dict) -> Instance:
    toks = tuple(obj["token"])
    head = EntityMention(
        " ".join(toks[obj["subj_start"]: obj["subj_end"] + 1]),
        (obj["subj_start"], obj["subj_end"] + 1),
        obj.get("subj_type", UNKNOWN_TYPE),
    )
    tail = EntityMention(
        " ".join(toks[obj["obj_start"]: obj["obj_end"] + 1]),
        (obj["obj_start"], obj["obj_end"] + 1),
        obj.get("obj_type", UNKNOWN_TYPE),
    )
    return Instance(toks, head, tail, obj["relation"])


FORMATS = ("opennre-jsonl", "tacred-json")


def load_dataset(path, format: str = "opennre-jsonl",
                 labels: Sequence[str] | None = None) -> Dataset:
    """Load a dataset file, validating every record.

    Malformed records are collected into a single line-numbered ParseError.
    ``labels`` overrides label-space inference (order preserved).
    """
    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    text = path.read_text(encoding="utf-8")
    instances: list[Instance] = []
    problems: list[tuple[int, str]] = []

    if format == "opennre-jsonl":
        for lineno, line in enumerate(text.splitlines(), start=1):
            if not line.strip():
                continue
            try:
                instances.append(_instance_from_opennre(json.loads(line)))
            except (json.JSONDecodeError, KeyError, TypeError, CorpusError) as exc:
                problems.append((lineno, f"{type(exc).__name__}: {exc}"))
    else:
        if not text.strip():
            records = []
        else:
            try:
                records = json.loads(text)
            except json.JSONDecodeError as exc:
                raise ParseError(path, [(exc.lineno, str(exc))])
            if not isinstance(records, list):
                raise ParseError(path, [(1, "top-level JSON value is not an array")])
        for idx, obj in enumerate(records):
            try:
                instances.append(_instance_from_tacred(obj))
            except (KeyError, TypeError, CorpusError) as exc:
                problems.append((idx + 1, f"{type(exc).__name__}: {exc}"))

    if problems:
        raise ParseError(path, problems)

    if labels is not None:
        space = LabelSpace(tuple(labels),
                           next((n for n in _NA_NAMES if n in labels), None))
    else:
        space = infer_label_space(i.label for i in instances)
    return Dataset(tuple(instances), space, ({"op": "load", "path": str(path), "format": format},))


def _opennre_record(inst: Instance) -> dict:
    return {
        "token": list(inst.tokens),
        "h": {"name": inst.head.name, "pos": list(inst.head.span), "type": inst.head.etype},
        "t": {"name": inst.tail.name, "pos": list(inst.tail.span), "type": inst.tail.etype},
        "relation": inst.label,
    }


def _tacred_record(inst: Instance) -> dict:
    return {
        "token": list(inst.tokens),
        "subj_start": inst.head.span[0],
        "subj_end": inst.head.span[1] - 1,
        "subj_type": inst.head.etype,
        "obj_start": inst.tail.span[0],
        "obj_end": inst.tail.span[1] - 1,
        "obj_type": inst.tail.etype,
        "relation": inst.label,
    }


def manifest_path(path) -> Path:
    return Path(str(path) + ".manifest.json")


def write_dataset(dataset: Dataset, path, format: str = "opennre-jsonl") -> int:
    """Write a dataset plus its provenance manifest sidecar. Byte-stable."""
    from rediag import __version__

    path = Path(path)
    if format not in FORMATS:
        raise ValueError(f"unknown format {format!r}; expected one of {FORMATS}")
    if format == "opennre-jsonl":
        body = "".join(
            json.dumps(_opennre_record(i), ensure_ascii=False) + "\n" for i in dataset
        )
    else:
        body = json.dumps([_tacred_record(i) for i in dataset], ensure_ascii=False, indent=1)
    path.write_text(body, encoding="utf-8")
    manifest = {
        "count": len(dataset),
        "format": format,
        "labels": list(dataset.label_space.labels),
        "na_label": dataset.label_space.na_label,
        "provenance": [dict(p) for p in dataset.provenance],
        "tool_version": __version__,
    }
    manifest_path(path).write_text(
        json.dumps(manifest, ensure_ascii=False, indent=1, sort_keys=True) + "\n",
        encoding="utf-8",
    )
    return len(dataset)


def insert_entity_markers(instance: Instance) -> list[str]:
    """[CLS] ... [E1] head [/E1] ... [E2] tail [/E2] ... [SEP].

    Markers follow textual order of the spans (head is not assumed first);
    output length is always len(tokens) + 6.
    """
    first, second = instance.spans_in_order()
    first_is_head = first is instance.head
    open1, close1 = (E1_OPEN, E1_CLOSE) if first_is_head else (E2_OPEN, E2_CLOSE)
    open2, close2 = (E2_OPEN, E2_CLOSE) if first_is_head else (E1_OPEN, E1_CLOSE)
    toks = list(instance.tokens)
    out = [CLS]
    out += toks[: first.span[0]]
    out += [open1] + toks[first.span[0]: first.span[1]] + [close1]
    out += toks[first.span[1]: second.span[0]]
    out += [open2] + toks[second.span[0]: second.span[1]] + [close2]
    out += toks[second.span[1]:]
    out.append(SEP)
    return out


def strip_entity_markers(tokens: Sequence[str]) -> list[str]:
    """Inverse of insert_entity_markers: drop the six sentinel tokens."""
    return [t for t in tokens if t not in MARKER_TOKENS]


def marked_position(instance: Instance, position: int) -> int:
    """Index of instance token ``position`` inside the marker-inserted sequence."""
    first, second = instance.spans_in_order()
    offset = 1  # [CLS]
    if position >= first.span[0]:
        offset += 1
    if position >= first.span[1]:
        offset += 1
    if position >= second.span[0]:
        offset += 1
    if position >= second.span[1]:
        offset += 1
    return position + offset


def with_label(instance: Instance, label: str) -> Instance:
    return replace(instance, label=label)
