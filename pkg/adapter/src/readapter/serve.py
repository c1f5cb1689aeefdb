"""Serve a checkpoint over the newline-delimited JSON oracle protocol.

Usage:
    python -m readapter.serve --model CHECKPOINT_DIR            # stdio
    python -m readapter.serve --model CHECKPOINT_DIR --port N   # TCP

One request in flight per connection; multiple connections share the model,
with forward passes serialized by a lock. Unknown ops and bad arguments get
{"error": ...} replies and the process stays alive.
"""

from __future__ import annotations

import argparse
import json
import socketserver
import sys
import threading

from readapter.model import AdapterError, RelationClassifier


class ProtocolHandler:
    def __init__(self, classifier: RelationClassifier):
        self.clf = classifier
        self._lock = threading.Lock()

    def handle(self, request: dict) -> dict:
        op = request.get("op")
        rid = request.get("id")
        try:
            with self._lock:
                return self._dispatch(op, rid, request)
        except (AdapterError, KeyError, ValueError, IndexError, TypeError) as exc:
            return {"id": rid, "error": f"{type(exc).__name__}: {exc}"}

    def _dispatch(self, op, rid, request) -> dict:
        if op == "capabilities":
            return {
                "id": rid,
                "protocol": 1,
                "labels": list(self.clf.labels),
                "masked_forward": True,
                "word_gradient": True,
                "char_gradient": False,
                "attention_attribution": True,
                "fill_mask": False,
            }
        if op == "predict":
            probs = self.clf.predict(request["batch"])
            return {"id": rid, "probs": probs.tolist()}
        if op == "masked_predict":
            probs = self.clf.masked_predict(request["tokens"], request["mask"])
            return {"id": rid, "probs": probs.tolist()}
        if op == "grad":
            grads = self.clf.grad(request["tokens"], request["target"])
            return {"id": rid, "grads": grads.tolist()}
        if op == "attention":
            return {"id": rid, **self.clf.attention(request["tokens"])}
        if op == "vocab":
            return {"id": rid, "tokens": list(self.clf.word_vocabulary())}
        if op == "embed":
            vecs = self.clf.embed_words(request["tokens"])
            return {"id": rid, "vecs": vecs.tolist()}
        return {"id": rid, "error": f"unknown op {op!r}"}


def serve_stream(handler: ProtocolHandler, reader, writer) -> None:
    for line in reader:
        if not line.strip():
            continue
        try:
            request = json.loads(line)
        except json.JSONDecodeError as exc:
            reply = {"error": f"bad json: {exc}"}
        else:
            reply = handler.handle(request)
        writer.write(json.dumps(reply) + "\n")
        writer.flush()


def run(args) -> int:
    handler = ProtocolHandler(RelationClassifier.load(args.model, args.device))
    if args.port is None:
        serve_stream(handler, sys.stdin, sys.stdout)
        return 0

    class _ByteWriter:
        def __init__(self, raw):
            self.raw = raw

        def write(self, text):
            self.raw.write(text.encode("utf-8"))

        def flush(self):
            self.raw.flush()

    class Connection(socketserver.StreamRequestHandler):
        def handle(self):
            serve_stream(
                handler,
                (ln.decode("utf-8") for ln in self.rfile),
                _ByteWriter(self.wfile),
            )

    with socketserver.ThreadingTCPServer(("127.0.0.1", args.port), Connection) as server:
        server.serve_forever()
    return 0


def add_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--model", required=True, help="checkpoint directory")
    parser.add_argument("--port", type=int, default=None,
                        help="serve on TCP instead of stdio")
    parser.add_argument("--device", default="cpu")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    add_arguments(parser)
    return run(parser.parse_args(argv))


if __name__ == "__main__":
    raise SystemExit(main())
