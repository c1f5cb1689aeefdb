"""Serve a reference model over the oracle wire protocol.

Usage:
    python -m rediag.wireserve MODEL.npz            # stdio
    python -m rediag.wireserve MODEL.npz --port N   # TCP, one client at a time

Every request carries an id that is echoed back; unknown ops get
{"error": ...} and the process stays alive.
"""

from __future__ import annotations

import argparse
import json
import socketserver
import sys

import numpy as np

from rediag.oracle import OracleError, ReferenceModel, ReferenceOracle


class ProtocolHandler:
    def __init__(self, model: ReferenceModel):
        self.oracle = ReferenceOracle(model)

    def handle(self, request: dict) -> dict:
        op = request.get("op")
        rid = request.get("id")
        try:
            if op == "capabilities":
                caps = self.oracle.capabilities()
                return {
                    "id": rid,
                    "protocol": 1,
                    "labels": list(self.oracle.label_space.labels),
                    "masked_forward": caps.masked_forward,
                    "word_gradient": caps.word_gradient,
                    "char_gradient": caps.char_gradient,
                    "attention_attribution": caps.attention_attribution,
                    "fill_mask": caps.fill_mask,
                }
            if op == "predict":
                preds = self.oracle.predict_batch(request["batch"])
                return {"id": rid, "probs": [p.probs.tolist() for p in preds]}
            if op == "masked_predict":
                pred = self.oracle.masked_forward(request["tokens"], request["mask"])
                return {"id": rid, "probs": pred.probs.tolist()}
            if op == "grad":
                grads = self.oracle.input_gradient(request["tokens"], request["target"])
                return {"id": rid, "grads": grads.tolist()}
            if op == "vocab":
                return {"id": rid, "tokens": list(self.oracle.vocabulary())}
            if op == "embed":
                vecs = self.oracle.embed_tokens(request["tokens"])
                return {"id": rid, "vecs": np.asarray(vecs).tolist()}
            return {"id": rid, "error": f"unknown op {op!r}"}
        except (OracleError, KeyError, ValueError, IndexError) as exc:
            return {"id": rid, "error": f"{type(exc).__name__}: {exc}"}


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


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("model", help="reference model .npz file")
    parser.add_argument("--port", type=int, help="serve on TCP instead of stdio")
    args = parser.parse_args(argv)

    handler = ProtocolHandler(ReferenceModel.load(args.model))
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


if __name__ == "__main__":
    raise SystemExit(main())
