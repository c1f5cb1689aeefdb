"""Micro-F1 metrics (with and without the no-relation class), oracle
evaluation, and comparison-table emission.

Report names follow "model:setting" (e.g. "bert:origin"); a layout groups
settings into a grid with one row per model.
"""

from __future__ import annotations

import csv
import hashlib
import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from rediag.corpus import Dataset, insert_entity_markers
from rediag.oracle import Oracle


class MetricError(ValueError):
    pass


def micro_f1(preds: Sequence[str], golds: Sequence[str], include_na: bool,
             na_label: str | None = None) -> tuple[float, bool]:
    """Globally pooled micro F1. Returns (score, defined).

    include_na=False: the standard relation-extraction variant; NA drops out
    of both the predicted-positive and gold-positive pools. With zero
    positives on both sides the score is reported as 0 with defined=False.
    include_na=True: every label counts, which for single-label data reduces
    to accuracy.
    """
    if len(preds) != len(golds):
        raise MetricError(f"length mismatch: {len(preds)} predictions, {len(golds)} golds")
    if include_na:
        if not golds:
            return 0.0, False
        correct = sum(p == g for p, g in zip(preds, golds))
        return correct / len(golds), True
    pred_pos = sum(p != na_label for p in preds)
    gold_pos = sum(g != na_label for g in golds)
    tp = sum(p == g and g != na_label for p, g in zip(preds, golds))
    if pred_pos == 0 and gold_pos == 0:
        return 0.0, False
    precision = tp / pred_pos if pred_pos else 0.0
    recall = tp / gold_pos if gold_pos else 0.0
    if precision + recall == 0.0:
        return 0.0, True
    return 2 * precision * recall / (precision + recall), True


@dataclass
class EvalReport:
    dataset_id: str
    manifest_digest: str
    per_label: dict[str, dict[str, float]]
    micro_f1_no_na: float
    micro_f1_no_na_defined: bool
    micro_f1_with_na: float
    confusion: dict[str, dict[str, int]]  # gold -> predicted -> count
    query_count: int
    wall_time: float

    def to_json(self, timing: bool = True) -> dict:
        """``timing=False`` drops wall time, keeping emitted files byte-stable."""
        out = {
            "dataset_id": self.dataset_id,
            "manifest_digest": self.manifest_digest,
            "per_label": self.per_label,
            "micro_f1_no_na": self.micro_f1_no_na,
            "micro_f1_no_na_defined": self.micro_f1_no_na_defined,
            "micro_f1_with_na": self.micro_f1_with_na,
            "confusion": self.confusion,
            "query_count": self.query_count,
        }
        if timing:
            out["wall_time"] = self.wall_time
        return out


def evaluate(oracle: Oracle, dataset: Dataset, dataset_id: str = "",
             batch_size: int = 64) -> EvalReport:
    """Batched prediction over marker-inserted tokens; both F1 variants."""
    missing = [lab for lab in dataset.label_space.labels
               if lab not in oracle.label_space.labels]
    if missing:
        raise MetricError(f"oracle label space lacks dataset labels: {missing}")
    start = time.perf_counter()
    q0 = oracle.query_count
    preds: list[str] = []
    instances = dataset.instances
    for lo in range(0, len(instances), batch_size):
        chunk = instances[lo: lo + batch_size]
        for pred in oracle.predict_batch([insert_entity_markers(i) for i in chunk]):
            preds.append(pred.argmax)
    golds = [i.label for i in instances]
    na = dataset.label_space.na_label

    f1_no_na, defined = micro_f1(preds, golds, include_na=False, na_label=na)
    f1_with_na, _ = micro_f1(preds, golds, include_na=True, na_label=na)

    confusion: dict[str, dict[str, int]] = {}
    for p, g in zip(preds, golds):
        confusion.setdefault(g, {}).setdefault(p, 0)
        confusion[g][p] += 1

    per_label = {}
    for lab in dataset.label_space.labels:
        tp = confusion.get(lab, {}).get(lab, 0)
        fn = sum(confusion.get(lab, {}).values()) - tp
        fp = sum(row.get(lab, 0) for g, row in confusion.items() if g != lab)
        prec = tp / (tp + fp) if tp + fp else 0.0
        rec = tp / (tp + fn) if tp + fn else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        per_label[lab] = {"precision": prec, "recall": rec, "f1": f1,
                          "support": tp + fn}

    digest = hashlib.sha256(
        json.dumps([dict(p) for p in dataset.provenance], sort_keys=True).encode("utf-8")
    ).hexdigest()[:16]
    return EvalReport(
        dataset_id=dataset_id,
        manifest_digest=digest,
        per_label=per_label,
        micro_f1_no_na=f1_no_na,
        micro_f1_no_na_defined=defined,
        micro_f1_with_na=f1_with_na,
        confusion=confusion,
        query_count=oracle.query_count - q0,
        wall_time=time.perf_counter() - start,
    )


#: setting columns per layout; pairs render as "evaluation/origin".
LAYOUTS: dict[str, dict] = {
    "randomization": {"columns": ["origin", "entity", "context", "all"], "pairs": False},
    "adversarial": {"columns": ["origin", "pwws", "hotflip"], "pairs": True},
    "counterfactual": {"columns": ["origin", "contrast"], "pairs": True,
                       "metric": "micro_f1_with_na"},
    "selection": {"columns": ["origin", "debiased"], "pairs": True},
    "semantic": {"columns": ["origin", "oe", "me", "debiased"], "pairs": False},
}


def _score(report: EvalReport, metric: str) -> float:
    return getattr(report, metric)


def emit_tables(reports: dict[str, EvalReport], layout: str, out_dir,
                timing: bool = True) -> dict[str, Path]:
    """Write report.txt (paper-style grid, 1 decimal), report.csv, report.json,
    and plot.csv for origin-vs-evaluation-vs-improved comparisons.

    Report keys are "model:setting"; every layout column must be present for
    every model mentioned.
    """
    if layout not in LAYOUTS:
        raise MetricError(f"unknown layout {layout!r}; expected one of {sorted(LAYOUTS)}")
    spec = LAYOUTS[layout]
    metric = spec.get("metric", "micro_f1_no_na")
    columns = spec["columns"]

    models: list[str] = []
    table: dict[str, dict[str, EvalReport]] = {}
    for key, report in reports.items():
        model, _, setting = key.rpartition(":")
        if not model:
            raise MetricError(f"report key {key!r} is not of the form model:setting")
        if model not in table:
            models.append(model)
            table[model] = {}
        table[model][setting] = report
    for model in models:
        missing = [c for c in columns if c not in table[model]]
        if missing:
            raise MetricError(f"model {model!r} lacks reports for {missing}")

    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    def cell(model: str, col: str) -> str:
        score = 100.0 * _score(table[model][col], metric)
        if spec["pairs"] and col != "origin":
            origin = 100.0 * _score(table[model]["origin"], metric)
            return f"{score:.1f}/{origin:.1f}"
        return f"{score:.1f}"

    width = max([len(m) for m in models] + [5])
    lines = [" | ".join(["Model".ljust(width)] + [c.capitalize().ljust(11) for c in columns])]
    lines.append("-+-".join(["-" * width] + ["-" * 11 for _ in columns]))
    for model in models:
        lines.append(" | ".join([model.ljust(width)] +
                                [cell(model, c).ljust(11) for c in columns]))
    txt_path = out_dir / "report.txt"
    txt_path.write_text("\n".join(lines) + "\n", encoding="utf-8")

    csv_path = out_dir / "report.csv"
    with csv_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["model", "setting", "micro_f1_no_na", "micro_f1_with_na",
                         "query_count"])
        for model in models:
            for col in columns:
                r = table[model][col]
                writer.writerow([model, col, repr(r.micro_f1_no_na),
                                 repr(r.micro_f1_with_na), r.query_count])

    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps({key: r.to_json(timing=timing) for key, r in reports.items()},
                   indent=1, sort_keys=True) + "\n",
        encoding="utf-8",
    )

    # plot rows: baseline model = first, improved = last (when distinct)
    plot_path = out_dir / "plot.csv"
    with plot_path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["axis-name", "origin", "evaluation", "improved"])
        base = models[0]
        improved = models[-1]
        for col in columns:
            if col == "origin":
                continue
            writer.writerow([
                f"{layout}:{col}",
                repr(100.0 * _score(table[base]["origin"], metric)),
                repr(100.0 * _score(table[base][col], metric)),
                repr(100.0 * _score(table[improved][col], metric)),
            ])
    return {"txt": txt_path, "csv": csv_path, "json": json_path, "plot": plot_path}
