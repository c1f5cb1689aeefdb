"""Classifier-oracle contract: capability negotiation, a trainable reference
model, and a wire-protocol client for external classifiers.

The reference model is a bag-of-embeddings softmax classifier:

    p = softmax(W . mean_i(m_i * E[tok_i]) + b)

Mean pooling divides by the number of unmasked (non-padding) tokens, so
masking k tokens renormalizes the pooled representation. Unknown tokens map
to the padding id and contribute nothing.

The wire protocol is newline-delimited JSON over standard streams or a TCP
socket; see WireOracle for the request shapes.
"""

from __future__ import annotations

import json
import shlex
import socket
import subprocess
import threading
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from rediag.corpus import Dataset, LabelSpace, insert_entity_markers

PAD_TOKEN = "<pad>"
PAD_ID = 0


class OracleError(RuntimeError):
    pass


class CapabilityMissing(OracleError):
    def __init__(self, name: str):
        super().__init__(f"oracle does not declare capability {name!r}")
        self.name = name


@dataclass(frozen=True)
class CapabilitySet:
    """Declared abilities beyond plain prediction."""

    masked_forward: bool = False
    word_gradient: bool = False
    char_gradient: bool = False
    attention_attribution: bool = False
    fill_mask: bool = False
    alphabet: tuple[str, ...] | None = None

    def __post_init__(self):
        if self.char_gradient and not self.alphabet:
            raise OracleError("char_gradient requires a declared character alphabet")


class Prediction:
    """A distribution over the oracle's label space."""

    __slots__ = ("probs", "labels")

    def __init__(self, probs: np.ndarray, labels: Sequence[str]):
        self.probs = np.asarray(probs, dtype=np.float64)
        self.labels = tuple(labels)
        total = float(self.probs.sum())
        if self.probs.min() < 0 or abs(total - 1.0) > 1e-9:
            raise OracleError(f"invalid distribution (sum={total!r})")

    @property
    def argmax(self) -> str:
        return self.labels[int(np.argmax(self.probs))]

    def prob(self, label: str) -> float:
        return float(self.probs[self.labels.index(label)])


class Oracle:
    """Base contract. Subclasses fill in the transport."""

    label_space: LabelSpace

    def __init__(self):
        self._queries = 0
        self._lock = threading.Lock()

    @property
    def query_count(self) -> int:
        return self._queries

    def _count(self, n: int) -> None:
        with self._lock:
            self._queries += n

    def capabilities(self) -> CapabilitySet:
        raise NotImplementedError

    def predict_batch(self, batch: Sequence[Sequence[str]]) -> list[Prediction]:
        raise NotImplementedError

    def predict(self, tokens: Sequence[str]) -> Prediction:
        return self.predict_batch([tokens])[0]

    def masked_forward(self, tokens: Sequence[str], mask: Sequence[float]) -> Prediction:
        raise CapabilityMissing("masked_forward")

    def input_gradient(self, tokens: Sequence[str], target_label: str) -> np.ndarray:
        """d(cross-entropy loss of target_label)/d(embedding), one row per position."""
        raise CapabilityMissing("word_gradient")

    def mask_gradient(self, tokens: Sequence[str], mask: np.ndarray,
                      target_label: str) -> np.ndarray:
        """dP(target_label)/d(mask entry), one value per position.

        Default: central differences through masked_forward. Oracles with an
        analytic path override this.
        """
        caps = self.capabilities()
        if not caps.masked_forward:
            raise CapabilityMissing("masked_forward")
        h = 1e-3
        mask = np.asarray(mask, dtype=np.float64)
        grads = np.empty(len(mask))
        for i in range(len(mask)):
            hi, lo = mask.copy(), mask.copy()
            hi[i] += h
            lo[i] -= h
            up = self.masked_forward(tokens, hi).prob(target_label)
            dn = self.masked_forward(tokens, lo).prob(target_label)
            grads[i] = (up - dn) / (2 * h)
        if not np.all(np.isfinite(grads)):
            raise OracleError("non-finite mask gradient")
        return grads

    def fill_mask(self, tokens: Sequence[str], position: int, top_n: int) -> list[str]:
        raise CapabilityMissing("fill_mask")

    # Word-substitution HotFlip needs candidate embeddings; oracles that
    # declare word_gradient must provide both hooks below.
    def vocabulary(self) -> tuple[str, ...]:
        raise CapabilityMissing("word_gradient")

    def embed_tokens(self, tokens: Sequence[str]) -> np.ndarray:
        raise CapabilityMissing("word_gradient")


def _softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


@dataclass
class ReferenceModel:
    vocab: dict[str, int]
    emb: np.ndarray  # (V, d)
    weights: np.ndarray  # (C, d)
    bias: np.ndarray  # (C,)
    labels: tuple[str, ...]
    frozen: bool = False

    def encode(self, tokens: Sequence[str]) -> np.ndarray:
        return np.array([self.vocab.get(t, PAD_ID) for t in tokens], dtype=np.int64)

    def forward(self, ids: np.ndarray, mask: np.ndarray | None = None) -> np.ndarray:
        eff = (ids != PAD_ID).astype(np.float64)
        if mask is not None:
            eff = eff * np.asarray(mask, dtype=np.float64)
        denom = int(np.count_nonzero(eff))
        if denom == 0:
            z = self.bias
        else:
            pooled = (eff[:, None] * self.emb[ids]).sum(axis=0) / denom
            z = self.weights @ pooled + self.bias
        return _softmax(z)

    def save(self, path) -> None:
        np.savez(
            Path(path),
            emb=self.emb,
            weights=self.weights,
            bias=self.bias,
            vocab=json.dumps(self.vocab),
            labels=json.dumps(list(self.labels)),
        )

    @classmethod
    def load(cls, path) -> "ReferenceModel":
        with np.load(Path(path), allow_pickle=False) as data:
            return cls(
                vocab=json.loads(str(data["vocab"])),
                emb=data["emb"],
                weights=data["weights"],
                bias=data["bias"],
                labels=tuple(json.loads(str(data["labels"]))),
                frozen=True,
            )


@dataclass
class TrainConfig:
    dim: int = 24
    epochs: int = 35
    lr: float = 0.5
    batch_size: int = 32
    seed: int = 42


def train_reference(dataset: Dataset, config: TrainConfig) -> ReferenceModel:
    """Mini-batch SGD on cross-entropy; deterministic under the config seed.

    Trains on marker-inserted token sequences (the form every oracle consumes).
    Returns a frozen model.
    """
    if len(dataset) == 0:
        raise OracleError("cannot train on an empty dataset")
    rng = np.random.default_rng(config.seed)
    labels = dataset.label_space.labels
    label_ids = {lab: i for i, lab in enumerate(labels)}

    vocab = {PAD_TOKEN: PAD_ID}
    sequences = []
    targets = []
    for inst in dataset:
        toks = insert_entity_markers(inst)
        for t in toks:
            vocab.setdefault(t, len(vocab))
        sequences.append(toks)
        targets.append(label_ids[inst.label])

    d, C, V = config.dim, len(labels), len(vocab)
    emb = rng.normal(0.0, 0.1, size=(V, d))
    emb[PAD_ID] = 0.0
    weights = rng.normal(0.0, 0.1, size=(C, d))
    bias = np.zeros(C)

    ids_list = [np.array([vocab[t] for t in toks], dtype=np.int64) for toks in sequences]
    y = np.array(targets, dtype=np.int64)
    n = len(ids_list)

    for _ in range(config.epochs):
        order = rng.permutation(n)
        for start in range(0, n, config.batch_size):
            batch = order[start: start + config.batch_size]
            d_w = np.zeros_like(weights)
            d_b = np.zeros_like(bias)
            d_e = np.zeros_like(emb)
            loss = 0.0
            for j in batch:
                ids = ids_list[j]
                live = ids != PAD_ID
                denom = int(np.count_nonzero(live))
                pooled = emb[ids[live]].sum(axis=0) / denom
                p = _softmax(weights @ pooled + bias)
                loss -= np.log(max(p[y[j]], 1e-300))
                dz = p.copy()
                dz[y[j]] -= 1.0
                d_w += np.outer(dz, pooled)
                d_b += dz
                d_pooled = weights.T @ dz / denom
                np.add.at(d_e, ids[live], d_pooled)
            if not np.isfinite(loss):
                raise OracleError(f"training diverged (loss={loss!r})")
            scale = config.lr / len(batch)
            weights -= scale * d_w
            bias -= scale * d_b
            emb -= scale * d_e
            emb[PAD_ID] = 0.0

    return ReferenceModel(vocab, emb, weights, bias, tuple(labels), frozen=True)


class ReferenceOracle(Oracle):
    """In-process oracle over a frozen ReferenceModel; analytic gradients."""

    def __init__(self, model: ReferenceModel, na_label: str | None = None):
        super().__init__()
        self.model = model
        if na_label is None:
            na_label = next(
                (n for n in ("NA", "no_relation", "NOT_such_relation") if n in model.labels),
                None,
            )
        self.label_space = LabelSpace(model.labels, na_label)

    def capabilities(self) -> CapabilitySet:
        return CapabilitySet(masked_forward=True, word_gradient=True)

    def predict_batch(self, batch):
        self._count(len(batch))
        out = []
        for tokens in batch:
            probs = self.model.forward(self.model.encode(tokens))
            out.append(Prediction(probs, self.model.labels))
        return out

    def masked_forward(self, tokens, mask):
        if len(mask) != len(tokens):
            raise OracleError(f"mask length {len(mask)} != token count {len(tokens)}")
        self._count(1)
        probs = self.model.forward(self.model.encode(tokens), np.asarray(mask, dtype=np.float64))
        return Prediction(probs, self.model.labels)

    def input_gradient(self, tokens, target_label):
        """Analytic d(-log p_y)/d(e_i); zero rows at padding/unknown positions."""
        self._count(1)
        m = self.model
        ids = m.encode(tokens)
        live = ids != PAD_ID
        denom = int(np.count_nonzero(live))
        y = m.labels.index(target_label)
        grads = np.zeros((len(ids), m.emb.shape[1]))
        if denom == 0:
            return grads
        pooled = m.emb[ids[live]].sum(axis=0) / denom
        p = _softmax(m.weights @ pooled + m.bias)
        dz = p.copy()
        dz[y] -= 1.0
        d_pooled = m.weights.T @ dz / denom
        grads[live] = d_pooled
        if not np.all(np.isfinite(grads)):
            raise OracleError("non-finite input gradient")
        return grads

    def mask_gradient(self, tokens, mask, target_label):
        """Analytic dP(y)/dm_i with the pooling divisor held at its value on
        the supplied mask."""
        self._count(1)
        m = self.model
        ids = m.encode(tokens)
        mask = np.asarray(mask, dtype=np.float64)
        eff = (ids != PAD_ID).astype(np.float64) * mask
        denom = int(np.count_nonzero(eff))
        y = m.labels.index(target_label)
        grads = np.zeros(len(ids))
        if denom == 0:
            return grads
        pooled = (eff[:, None] * m.emb[ids]).sum(axis=0) / denom
        p = _softmax(m.weights @ pooled + m.bias)
        # dP_y/dz_c = p_y (delta_yc - p_c); dz_c/dm_i = W_c . e_i / denom
        dp_dz = p[y] * (np.eye(len(p))[y] - p)
        per_token = (m.weights @ m.emb[ids].T) / denom  # (C, L)
        grads = (dp_dz @ per_token) * (ids != PAD_ID)
        if not np.all(np.isfinite(grads)):
            raise OracleError("non-finite mask gradient")
        return grads

    def vocabulary(self):
        return tuple(t for t in self.model.vocab if t != PAD_TOKEN)

    def embed_tokens(self, tokens):
        return self.model.emb[self.model.encode(tokens)]


class WireOracle(Oracle):
    """Client for the newline-delimited JSON oracle protocol.

    Specs:
      exec:<command>   subprocess speaking the protocol on stdio
      wire:host:port   TCP connection
    """

    def __init__(self, reader, writer, close=None):
        super().__init__()
        self._reader = reader
        self._writer = writer
        self._close = close
        self._next_id = 0
        self._io_lock = threading.Lock()
        self._caps: CapabilitySet | None = None
        hello = self._call({"op": "capabilities"})
        if hello.get("protocol") != 1:
            raise OracleError(f"protocol version mismatch: {hello.get('protocol')!r}")
        self._labels = tuple(hello["labels"])
        na = next((n for n in ("NA", "no_relation", "NOT_such_relation") if n in self._labels), None)
        self.label_space = LabelSpace(self._labels, na)
        alphabet = tuple(hello["alphabet"]) if hello.get("alphabet") else None
        self._caps = CapabilitySet(
            masked_forward=bool(hello.get("masked_forward", False)),
            word_gradient=bool(hello.get("word_gradient", False)),
            char_gradient=bool(hello.get("char_gradient", False)),
            attention_attribution=bool(hello.get("attention_attribution", False)),
            fill_mask=bool(hello.get("fill_mask", False)),
            alphabet=alphabet,
        )

    @classmethod
    def from_spec(cls, spec: str) -> "WireOracle":
        if spec.startswith("exec:"):
            cmd = shlex.split(spec[len("exec:"):])
            proc = subprocess.Popen(
                cmd, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, bufsize=1
            )
            def close():
                proc.stdin.close()
                proc.wait(timeout=10)
            return cls(proc.stdout, proc.stdin, close)
        if spec.startswith("wire:"):
            host, _, port = spec[len("wire:"):].rpartition(":")
            sock = socket.create_connection((host or "127.0.0.1", int(port)), timeout=30)
            f = sock.makefile("rw", encoding="utf-8", newline="\n")
            return cls(f, f, sock.close)
        raise ValueError(f"unknown wire oracle spec {spec!r}")

    def close(self):
        if self._close:
            self._close()
            self._close = None

    def _call(self, request: dict) -> dict:
        with self._io_lock:
            request = dict(request)
            request["id"] = self._next_id
            self._next_id += 1
            self._writer.write(json.dumps(request) + "\n")
            self._writer.flush()
            line = self._reader.readline()
            if not line:
                raise OracleError("oracle connection closed")
            reply = json.loads(line)
        if "error" in reply:
            raise OracleError(f"oracle error: {reply['error']}")
        if reply.get("id") != request["id"]:
            raise OracleError(f"reply id {reply.get('id')} does not echo request id {request['id']}")
        return reply

    def capabilities(self) -> CapabilitySet:
        return self._caps

    def predict_batch(self, batch):
        batch = [list(toks) for toks in batch]
        reply = self._call({"op": "predict", "batch": batch})
        self._count(len(batch))
        return [Prediction(np.array(p), self._labels) for p in reply["probs"]]

    def masked_forward(self, tokens, mask):
        if not self._caps.masked_forward:
            raise CapabilityMissing("masked_forward")
        if len(mask) != len(tokens):
            raise OracleError(f"mask length {len(mask)} != token count {len(tokens)}")
        reply = self._call(
            {"op": "masked_predict", "tokens": list(tokens), "mask": [float(m) for m in mask]}
        )
        self._count(1)
        return Prediction(np.array(reply["probs"]), self._labels)

    def input_gradient(self, tokens, target_label):
        if not (self._caps.word_gradient or self._caps.char_gradient):
            raise CapabilityMissing("word_gradient")
        reply = self._call({"op": "grad", "tokens": list(tokens), "target": target_label})
        self._count(1)
        grads = np.array(reply["grads"], dtype=np.float64)
        if not np.all(np.isfinite(grads)):
            raise OracleError("non-finite gradient from wire oracle")
        return grads

    def fill_mask(self, tokens, position, top_n):
        if not self._caps.fill_mask:
            raise CapabilityMissing("fill_mask")
        reply = self._call(
            {"op": "fill_mask", "tokens": list(tokens), "position": int(position),
             "top_n": int(top_n)}
        )
        self._count(1)
        return list(reply["candidates"])

    def vocabulary(self):
        reply = self._call({"op": "vocab"})
        return tuple(reply["tokens"])

    def embed_tokens(self, tokens):
        reply = self._call({"op": "embed", "tokens": list(tokens)})
        return np.array(reply["vecs"], dtype=np.float64)


def open_oracle(spec: str) -> Oracle:
    """reference:<model.npz> | wire:<host:port> | exec:<command>"""
    if spec.startswith("reference:"):
        return ReferenceOracle(ReferenceModel.load(spec[len("reference:"):]))
    return WireOracle.from_spec(spec)
