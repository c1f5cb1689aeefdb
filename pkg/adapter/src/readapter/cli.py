"""Command-line entry point.

    readapter train --data train.jsonl --out CKPT [--dev dev.jsonl]
    readapter serve --model CKPT [--port N]
"""

from __future__ import annotations

import argparse

from readapter import __version__, serve
from readapter.model import AdapterConfig
from readapter.train import TrainSettings, train


def cmd_train(args) -> int:
    settings = TrainSettings(lr=args.lr, batch_size=args.batch_size,
                             epochs=args.epochs, seed=args.seed)
    adapter = AdapterConfig(device=args.device, seed=args.seed,
                            hidden_size=args.hidden_size,
                            num_layers=args.layers, vocab_size=args.vocab_size)
    train(args.data, args.out, settings, adapter, dev_path=args.dev)
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="readapter", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("train", help="fine-tune and write a checkpoint")
    p.add_argument("--data", required=True, help="openNRE-style JSONL")
    p.add_argument("--out", required=True, help="checkpoint directory")
    p.add_argument("--dev", default=None, help="optional dev split to score")
    p.add_argument("--lr", type=float, default=2e-5)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--epochs", type=int, default=5)
    p.add_argument("--seed", type=int, default=13)
    p.add_argument("--device", default="cpu")
    p.add_argument("--hidden-size", type=int, default=64)
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--vocab-size", type=int, default=600)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("serve", help="serve a checkpoint over the wire protocol")
    serve.add_arguments(p)
    p.set_defaults(func=serve.run)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
