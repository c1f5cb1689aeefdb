"""Fine-tuning with the standard recipe: lr 2e-5, batch 32, 5 epochs."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import torch
import torch.nn.functional as F

from readapter.data import load_examples
from readapter.model import AdapterConfig, RelationClassifier, new_classifier


@dataclass
class TrainSettings:
    lr: float = 2e-5
    batch_size: int = 32
    epochs: int = 5
    seed: int = 13


def train(data_path: str | Path, out_dir: str | Path,
          settings: TrainSettings | None = None,
          adapter: AdapterConfig | None = None,
          dev_path: str | Path | None = None) -> RelationClassifier:
    """Fine-tune (here: train from a fresh initialization) and checkpoint.

    Returns the trained classifier; the checkpoint directory round-trips via
    RelationClassifier.load.
    """
    settings = settings or TrainSettings()
    adapter = adapter or AdapterConfig(seed=settings.seed)
    examples = load_examples(data_path)
    labels = tuple(sorted({e.label for e in examples}))
    texts = [" ".join(e.marked()) for e in examples]
    clf = new_classifier(texts, labels, adapter)

    device = adapter.device
    encoded = clf.tokenizer([e.marked() for e in examples],
                            is_split_into_words=True, add_special_tokens=False,
                            padding=True, truncation=True,
                            max_length=adapter.max_length, return_tensors="pt")
    ids = encoded["input_ids"].to(device)
    attn = encoded["attention_mask"].to(device)
    targets = torch.tensor([labels.index(e.label) for e in examples],
                           dtype=torch.long, device=device)

    model = clf.model
    model.train()
    optimizer = torch.optim.AdamW(model.parameters(), lr=settings.lr)
    generator = torch.Generator().manual_seed(settings.seed)
    for _ in range(settings.epochs):
        order = torch.randperm(len(examples), generator=generator)
        for start in range(0, len(examples), settings.batch_size):
            batch = order[start: start + settings.batch_size]
            optimizer.zero_grad()
            logits = model(input_ids=ids[batch], attention_mask=attn[batch]).logits
            loss = F.cross_entropy(logits, targets[batch])
            loss.backward()
            optimizer.step()
    model.eval()

    clf.save(out_dir)
    if dev_path is not None:
        dev = load_examples(dev_path)
        probs = clf.predict([e.marked() for e in dev])
        correct = sum(labels[int(p.argmax())] == e.label
                      for p, e in zip(probs, dev))
        print(f"dev accuracy: {correct}/{len(dev)}")
    return clf
