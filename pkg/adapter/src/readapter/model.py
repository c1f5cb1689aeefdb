"""Transformer relation classifier with word-level oracle semantics.

The serving side speaks in whitespace words (the engine's unit of edit); this
module owns the subword <-> word alignment:

- a word's mask weight multiplies the input embeddings of all its subwords;
- a word's gradient is the sum of its subword embedding gradients;
- a word's embedding vector is the sum of its subword input embeddings, so
  first-order substitution scores (grad . (e_v - e_u)) stay consistent with
  the gradients above.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch
import torch.nn.functional as F
from tokenizers import Tokenizer, models, pre_tokenizers, trainers
from transformers import (
    BertConfig,
    BertForSequenceClassification,
    PreTrainedTokenizerFast,
)

from readapter.data import MARKER_TOKENS

PAD, UNK = "[PAD]", "[UNK]"
RESERVED = (PAD, UNK) + MARKER_TOKENS + ("[unused5]", "[ENT]")


class AdapterError(RuntimeError):
    """Model or checkpoint problem."""


def _normalize(probs: np.ndarray) -> np.ndarray:
    """Exact float64 distributions; float32 softmax only sums to ~1e-7."""
    probs = probs.astype(np.float64)
    return probs / probs.sum(axis=-1, keepdims=True)


@dataclass
class AdapterConfig:
    """Checkpoint-level settings; saved alongside the weights."""

    checkpoint: str | None = None
    device: str = "cpu"
    batch_size: int = 32
    max_length: int = 256
    # architecture for from-scratch training (ignored when loading)
    vocab_size: int = 600
    hidden_size: int = 64
    num_layers: int = 2
    num_heads: int = 2
    intermediate_size: int = 128
    seed: int = 13
    marker_token_ids: dict[str, int] = field(default_factory=dict)


def build_tokenizer(texts, config: AdapterConfig) -> PreTrainedTokenizerFast:
    """WordPiece tokenizer trained on the corpus; markers stay whole tokens."""
    tok = Tokenizer(models.WordPiece(unk_token=UNK))
    tok.pre_tokenizer = pre_tokenizers.WhitespaceSplit()
    trainer = trainers.WordPieceTrainer(
        vocab_size=config.vocab_size, special_tokens=list(RESERVED))
    tok.train_from_iterator(texts, trainer)
    return PreTrainedTokenizerFast(
        tokenizer_object=tok, unk_token=UNK, pad_token=PAD,
        cls_token="[CLS]", sep_token="[SEP]",
        additional_special_tokens=["[E1]", "[/E1]", "[E2]", "[/E2]",
                                   "[unused5]", "[ENT]"],
    )


class RelationClassifier:
    """A BERT-style classifier plus the word-aligned oracle operations."""

    def __init__(self, model: BertForSequenceClassification,
                 tokenizer: PreTrainedTokenizerFast, labels: tuple[str, ...],
                 config: AdapterConfig):
        self.model = model.to(config.device)
        self.model.eval()
        self.tokenizer = tokenizer
        self.labels = labels
        self.config = config
        config.marker_token_ids = {
            t: tokenizer.convert_tokens_to_ids(t) for t in MARKER_TOKENS}
        unk_id = tokenizer.convert_tokens_to_ids(UNK)
        missing = [t for t, i in config.marker_token_ids.items()
                   if i is None or i == unk_id]
        if missing:
            raise AdapterError(f"marker tokens missing from vocabulary: {missing}")

    # -- alignment ---------------------------------------------------------

    def _encode(self, words):
        """(input_ids tensor, word_ids list) for one word sequence."""
        enc = self.tokenizer(list(words), is_split_into_words=True,
                             add_special_tokens=False, truncation=True,
                             max_length=self.config.max_length)
        ids = torch.tensor([enc["input_ids"]], dtype=torch.long,
                           device=self.config.device)
        return ids, enc.word_ids()

    # -- forward passes ----------------------------------------------------

    @torch.no_grad()
    def predict(self, batch) -> np.ndarray:
        """(n, n_labels) probabilities for a batch of word sequences."""
        out = []
        size = max(1, self.config.batch_size)
        for start in range(0, len(batch), size):
            chunk = batch[start: start + size]
            try:
                out.append(self._forward_chunk(chunk))
            except torch.cuda.OutOfMemoryError:
                if len(chunk) == 1:
                    raise
                half = len(chunk) // 2
                out.append(self._forward_chunk(chunk[:half]))
                out.append(self._forward_chunk(chunk[half:]))
        return np.concatenate(out, axis=0)

    def _forward_chunk(self, chunk) -> np.ndarray:
        enc = self.tokenizer([list(w) for w in chunk], is_split_into_words=True,
                             add_special_tokens=False, padding=True,
                             truncation=True, max_length=self.config.max_length,
                             return_tensors="pt").to(self.config.device)
        logits = self.model(input_ids=enc["input_ids"],
                            attention_mask=enc["attention_mask"]).logits
        return _normalize(torch.softmax(logits, dim=-1).cpu().numpy())

    @torch.no_grad()
    def masked_predict(self, words, mask) -> np.ndarray:
        """Probabilities with each word's mask weight scaling its subwords."""
        if len(mask) != len(words):
            raise AdapterError(f"mask length {len(mask)} != word count {len(words)}")
        ids, word_ids = self._encode(words)
        weights = torch.tensor(
            [float(mask[w]) if w is not None else 1.0 for w in word_ids],
            dtype=torch.float32, device=self.config.device)
        embeds = self.model.get_input_embeddings()(ids) * weights[None, :, None]
        logits = self.model(inputs_embeds=embeds).logits
        return _normalize(torch.softmax(logits, dim=-1).cpu().numpy())[0]

    def grad(self, words, target: str) -> np.ndarray:
        """d(cross-entropy of target)/d(word embedding), one row per word.

        The per-word row is the sum over that word's subword gradients.
        """
        if target not in self.labels:
            raise AdapterError(f"unknown target label {target!r}")
        ids, word_ids = self._encode(words)
        embeds = self.model.get_input_embeddings()(ids).detach()
        embeds.requires_grad_(True)
        logits = self.model(inputs_embeds=embeds).logits
        y = torch.tensor([self.labels.index(target)], device=self.config.device)
        loss = F.cross_entropy(logits, y)
        loss.backward()
        sub = embeds.grad[0].detach().cpu().numpy()
        out = np.zeros((len(words), sub.shape[1]))
        for pos, w in enumerate(word_ids):
            if w is not None:
                out[w] += sub[pos]
        if not np.all(np.isfinite(out)):
            raise AdapterError("non-finite gradient")
        return out

    @torch.no_grad()
    def attention(self, words) -> dict:
        """Per-layer, per-head attention pooled to words.

        Attention mass received by a word is summed over its subword columns
        and averaged over source rows; all heads are exposed so the caller
        chooses the aggregation.
        """
        ids, word_ids = self._encode(words)
        out = self.model(input_ids=ids, output_attentions=True)
        n = len(words)
        layers = []
        for att in out.attentions:  # (1, heads, sub, sub)
            heads = []
            for h in range(att.shape[1]):
                m = att[0, h].cpu().numpy()
                pooled = np.zeros((n, n))
                counts = np.zeros(n)
                for i, wi in enumerate(word_ids):
                    if wi is None:
                        continue
                    counts[wi] += 1
                    for j, wj in enumerate(word_ids):
                        if wj is not None:
                            pooled[wi, wj] += m[i, j]
                pooled /= np.maximum(counts, 1)[:, None]
                heads.append(pooled.tolist())
            layers.append(heads)
        return {"layers": layers, "words": list(words)}

    # -- substitution support ---------------------------------------------

    def word_vocabulary(self) -> tuple[str, ...]:
        """Whole-word vocabulary entries usable as substitutes."""
        items = sorted(self.tokenizer.get_vocab().items(), key=lambda kv: kv[1])
        return tuple(t for t, _ in items
                     if not t.startswith("##") and t not in RESERVED)

    @torch.no_grad()
    def embed_words(self, words) -> np.ndarray:
        """One vector per word: the sum of its subword input embeddings."""
        table = self.model.get_input_embeddings()
        out = np.zeros((len(words), self.model.config.hidden_size))
        for i, word in enumerate(words):
            ids, word_ids = self._encode([word])
            vecs = table(ids)[0].cpu().numpy()
            out[i] = vecs[[k for k, w in enumerate(word_ids) if w == 0]].sum(axis=0)
        return out

    # -- persistence -------------------------------------------------------

    def save(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        self.model.save_pretrained(out)
        self.tokenizer.save_pretrained(out)
        (out / "labels.json").write_text(
            json.dumps(list(self.labels), indent=1) + "\n", encoding="utf-8")
        cfg = {"batch_size": self.config.batch_size,
               "max_length": self.config.max_length,
               "marker_token_ids": self.config.marker_token_ids}
        (out / "adapter_config.json").write_text(
            json.dumps(cfg, indent=1, sort_keys=True) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, checkpoint: str | Path, device: str = "cpu") -> "RelationClassifier":
        path = Path(checkpoint)
        if not (path / "labels.json").exists():
            raise AdapterError(f"{path}: not an adapter checkpoint (labels.json missing)")
        labels = tuple(json.loads((path / "labels.json").read_text(encoding="utf-8")))
        saved = json.loads((path / "adapter_config.json").read_text(encoding="utf-8"))
        config = AdapterConfig(checkpoint=str(path), device=device,
                               batch_size=saved["batch_size"],
                               max_length=saved["max_length"])
        model = BertForSequenceClassification.from_pretrained(
            path, attn_implementation="eager")
        tokenizer = PreTrainedTokenizerFast.from_pretrained(path)
        return cls(model, tokenizer, labels, config)


def new_classifier(texts, labels, config: AdapterConfig) -> RelationClassifier:
    """Freshly initialized classifier with a corpus-trained tokenizer."""
    torch.manual_seed(config.seed)
    tokenizer = build_tokenizer(texts, config)
    bert = BertConfig(
        vocab_size=len(tokenizer.get_vocab()), hidden_size=config.hidden_size,
        num_hidden_layers=config.num_layers,
        num_attention_heads=config.num_heads,
        intermediate_size=config.intermediate_size,
        max_position_embeddings=config.max_length,
        num_labels=len(labels),
        pad_token_id=tokenizer.convert_tokens_to_ids(PAD),
        attn_implementation="eager",  # keeps output_attentions available
    )
    model = BertForSequenceClassification(bert)
    return RelationClassifier(model, tokenizer, tuple(labels), config)
