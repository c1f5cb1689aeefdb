"""Minimal reader for openNRE-style JSONL relation data.

The adapter deliberately does not import the diagnostics engine; it speaks to
it only over the wire protocol. This module re-derives the little it needs:
instance parsing and entity-marker insertion.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

CLS, SEP = "[CLS]", "[SEP]"
E1_OPEN, E1_CLOSE, E2_OPEN, E2_CLOSE = "[E1]", "[/E1]", "[E2]", "[/E2]"
MARKER_TOKENS = (CLS, SEP, E1_OPEN, E1_CLOSE, E2_OPEN, E2_CLOSE)


class DataError(ValueError):
    """Invalid training data."""


@dataclass(frozen=True)
class Example:
    tokens: tuple[str, ...]
    head_span: tuple[int, int]  # half-open token span
    tail_span: tuple[int, int]
    label: str

    def marked(self) -> list[str]:
        """[CLS] ... [E1] head [/E1] ... [E2] tail [/E2] ... [SEP].

        Markers follow the textual order of the spans; length is always
        len(tokens) + 6. Matches the engine's preprocessing.
        """
        head_first = self.head_span[0] <= self.tail_span[0]
        first, second = sorted((self.head_span, self.tail_span))
        open1, close1 = (E1_OPEN, E1_CLOSE) if head_first else (E2_OPEN, E2_CLOSE)
        open2, close2 = (E2_OPEN, E2_CLOSE) if head_first else (E1_OPEN, E1_CLOSE)
        toks = list(self.tokens)
        out = [CLS]
        out += toks[: first[0]]
        out += [open1] + toks[first[0]: first[1]] + [close1]
        out += toks[first[1]: second[0]]
        out += [open2] + toks[second[0]: second[1]] + [close2]
        out += toks[second[1]:]
        out.append(SEP)
        return out


def _span(entity: dict, line_no: int) -> tuple[int, int]:
    try:
        pos = entity["pos"]
        return int(pos[0]), int(pos[1])
    except (KeyError, IndexError, TypeError) as exc:
        raise DataError(f"line {line_no}: bad entity position: {exc}") from exc


def load_examples(path: str | Path) -> list[Example]:
    examples = []
    with Path(path).open(encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError(f"line {line_no}: bad json: {exc}") from exc
            try:
                examples.append(Example(
                    tokens=tuple(obj["token"]),
                    head_span=_span(obj["h"], line_no),
                    tail_span=_span(obj["t"], line_no),
                    label=str(obj["relation"]),
                ))
            except KeyError as exc:
                raise DataError(f"line {line_no}: missing field {exc}") from exc
    if not examples:
        raise DataError(f"{path}: no instances")
    return examples
