"""Command-line entry point.

    rediag synth --out DIR
    rediag train-reference --in train.jsonl --out DIR
    rediag perturb --in test.jsonl --mode all --out DIR [--augment-train]
    rediag attack --in test.jsonl --oracle reference:m.npz --method pwws --out DIR
    rediag cda --in train.jsonl --oracle reference:m.npz --k 1 --out DIR [--retrain]
    rediag bias --kind semantic --in test.jsonl --me --out DIR
    rediag eval --in test.jsonl --oracle reference:m.npz --out DIR [--include-na]
    rediag report --layout randomization --reports name=path.json ... --out DIR

Exit status: 0 success, 1 when per-instance failures exceed the threshold,
2 on fatal errors. Every run writes a manifest with seed, config, and tool
version; outputs are byte-identical across reruns with the same seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from rediag import __version__
from rediag import attack as attack_mod
from rediag import bias as bias_mod
from rediag import counterfactual as cf_mod
from rediag import perturb as perturb_mod
from rediag import report as report_mod
from rediag import synth as synth_mod
from rediag.corpus import CorpusError, load_dataset, write_dataset
from rediag.lexicon import Resources, token_stats
from rediag.oracle import (
    OracleError,
    ReferenceOracle,
    TrainConfig,
    open_oracle,
    train_reference,
)

RESOURCE_ENV = "DIAGNOSE_RE_RESOURCES"


def _dump_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=1, sort_keys=True) + "\n", encoding="utf-8")


def _write_manifest(args, extra: dict | None = None) -> None:
    config = {k: v for k, v in vars(args).items()
              if k not in ("func",) and not callable(v)}
    manifest = {"subcommand": args.subcommand, "seed": args.seed,
                "config": {k: str(v) if isinstance(v, Path) else v
                           for k, v in config.items()},
                "tool_version": __version__}
    if extra:
        manifest.update(extra)
    _dump_json(Path(args.out) / "manifest.json", manifest)


def _resources(args) -> Resources:
    directory = args.resources or os.environ.get(RESOURCE_ENV)
    return Resources.load(directory)


def _load(args, path=None):
    return load_dataset(path or args.input, args.format)


def _failure_exit(failed: int, total: int, threshold: float) -> int:
    if total and failed / total > threshold:
        return 1
    return 0


def cmd_synth(args) -> int:
    cfg = synth_mod.SynthConfig(n_train=args.n_train, n_test=args.n_test, seed=args.seed)
    train, test = synth_mod.make_corpus(cfg, _resources(args))
    out = Path(args.out)
    write_dataset(train, out / "train.jsonl", args.format)
    write_dataset(test, out / "test.jsonl", args.format)
    _write_manifest(args, {"train": len(train), "test": len(test)})
    return 0


def cmd_train_reference(args) -> int:
    dataset = _load(args)
    config = TrainConfig(dim=args.dim, epochs=args.epochs, lr=args.lr,
                         batch_size=args.batch_size, seed=args.seed)
    model = train_reference(dataset, config)
    out = Path(args.out)
    model.save(out / "model.npz")
    _write_manifest(args, {"instances": len(dataset),
                           "labels": list(dataset.label_space.labels)})
    return 0


def cmd_perturb(args) -> int:
    dataset = _load(args)
    resources = _resources(args)
    config = perturb_mod.PerturbConfig(seed=args.seed, rate=args.rate,
                                       audit_size=args.audit_size, workers=args.workers)
    oracle = open_oracle(args.oracle) if args.oracle else None
    build = perturb_mod.build_robust_set(dataset, args.mode, resources, config,
                                         oracle=oracle, augment=args.augment_train)
    out = Path(args.out)
    name = "augmented.jsonl" if args.augment_train else "robust.jsonl"
    write_dataset(build.robust, out / name, args.format)
    write_dataset(build.audit, out / "audit.jsonl", args.format)
    _dump_json(out / "skips.json", build.skip_report)
    skipped = sum(len(s) for s in build.skips.values())
    _write_manifest(args, {"emitted": len(build.perturbed), "skipped": skipped})
    return _failure_exit(skipped, len(dataset) * (2 if args.mode == "all" else 1),
                         args.fail_threshold)


def cmd_attack(args) -> int:
    dataset = _load(args)
    resources = _resources(args)
    oracle = open_oracle(args.oracle)
    config = attack_mod.AttackConfig(
        epsilon=args.epsilon, beam_width=args.beam, max_flips=args.max_flips,
        max_replacements=args.max_replacements,
    )
    instances = dataset.instances[: args.limit] if args.limit else dataset.instances

    def run(index, inst):
        if args.method == "pwws":
            return attack_mod.pwws_attack(oracle, inst, resources, config)
        return attack_mod.hotflip_attack(oracle, inst, config)

    from rediag.util import parallel_map
    results = parallel_map(run, instances, args.workers)

    out = Path(args.out)
    successes = [r.adversarial for r in results if r.success]
    adv = dataset.derived(successes, {"op": "attack", "method": args.method,
                                      "epsilon": args.epsilon,
                                      "attacked": len(results),
                                      "successes": len(successes)})
    write_dataset(adv, out / "adversarial.jsonl", args.format)
    with (out / "traces.jsonl").open("w", encoding="utf-8") as fh:
        for index, r in enumerate(results):
            fh.write(json.dumps({
                "index": index,
                "method": r.method,
                "success": r.success,
                "similarity": r.similarity,
                "queries": r.queries,
                "original_argmax": r.original_pred.argmax,
                "adversarial_argmax": r.adversarial_pred.argmax,
                "edits": [[e.position, list(e.old), list(e.new), e.tag]
                          for e in r.edits],
                "order_scores": list(r.order_scores),
            }, sort_keys=True) + "\n")
    stats = {"attacked": len(results), "successes": len(successes),
             "success_rate": len(successes) / len(results) if results else 0.0}
    if args.emit_train:
        augmented = dataset.derived(list(dataset.instances) + successes,
                                    {"op": "adversarial-train", **stats})
        write_dataset(augmented, out / "train_adv.jsonl", args.format)
    _write_manifest(args, stats)
    return 0


def cmd_cda(args) -> int:
    dataset = _load(args)
    resources = _resources(args)
    oracle = open_oracle(args.oracle)
    builder = cf_mod.build_contrast_set if args.contrast_only else cf_mod.cda_augment
    build = builder(dataset, oracle, k=args.k, steps=args.steps,
                    stopwords=resources.stopwords, workers=args.workers)
    out = Path(args.out)
    name = "contrast.jsonl" if args.contrast_only else "augmented.jsonl"
    write_dataset(build.dataset, out / name, args.format)
    if args.retrain and not args.contrast_only:
        config = TrainConfig(seed=args.seed)
        model = train_reference(build.dataset, config)
        model.save(out / "model.npz")
    _dump_json(out / "errors.json", build.errors)
    _write_manifest(args, build.manifest)
    return _failure_exit(len(build.errors), len(dataset), args.fail_threshold)


def cmd_bias(args) -> int:
    dataset = _load(args)
    resources = _resources(args)
    config = bias_mod.BiasConfig(
        freq_quantile=args.freq_quantile, mask_prob=args.mask_prob,
        entity_mask_pct=args.mask_pct if args.mask_pct is not None else 50.0,
        pair_freq_quantile=args.pair_quantile, seed=args.seed, workers=args.workers,
    )
    out = Path(args.out)
    extra: dict = {}
    if args.kind == "selection":
        train = load_dataset(args.train, args.format)
        stats = token_stats(train, resources.stopwords)
        if args.mask_train:
            masked = bias_mod.frequency_mask_train(train, stats, config)
            write_dataset(masked, out / "masked_train.jsonl", args.format)
        else:
            debiased, report = bias_mod.selection_bias_set(dataset, stats, resources, config)
            write_dataset(debiased, out / "debiased.jsonl", args.format)
            extra = report
    else:
        if args.me:
            emitted = dataset.derived([bias_mod.to_masked_entity(i) for i in dataset],
                                      {"op": "masked-entity"})
            write_dataset(emitted, out / "me.jsonl", args.format)
        elif args.oe:
            emitted = dataset.derived([bias_mod.to_only_entity(i) for i in dataset],
                                      {"op": "only-entity"})
            write_dataset(emitted, out / "oe.jsonl", args.format)
        elif args.oe_errors:
            oracle = open_oracle(args.oracle)
            emitted = bias_mod.oe_debiased_set(dataset, oracle)
            write_dataset(emitted, out / "oe_debiased.jsonl", args.format)
            extra = {"kept": len(emitted)}
        elif args.mask_pct is not None or args.mask_freq:
            mode = "frequency" if args.mask_freq else "percent"
            stats = None
            if args.mask_freq:
                train = load_dataset(args.train, args.format)
                stats = token_stats(train, resources.stopwords)
            emitted = bias_mod.selective_entity_mask(dataset, mode, stats, config)
            write_dataset(emitted, out / "entity_masked.jsonl", args.format)
        else:
            print("bias --kind semantic needs one of --me/--oe/--oe-errors/"
                  "--mask-pct/--mask-freq", file=sys.stderr)
            return 2
    _write_manifest(args, extra)
    return 0


def cmd_eval(args) -> int:
    dataset = _load(args)
    oracle = open_oracle(args.oracle)
    result = report_mod.evaluate(oracle, dataset, dataset_id=args.id or str(args.input))
    out = Path(args.out)
    _dump_json(out / "report.json", result.to_json(timing=False))
    headline = result.micro_f1_with_na if args.include_na else result.micro_f1_no_na
    print(f"micro-F1 ({'incl' if args.include_na else 'excl'} NA): {100 * headline:.1f}")
    _write_manifest(args, {"micro_f1_no_na": result.micro_f1_no_na,
                           "micro_f1_with_na": result.micro_f1_with_na})
    return 0


def _report_from_json(obj: dict) -> report_mod.EvalReport:
    return report_mod.EvalReport(
        dataset_id=obj["dataset_id"], manifest_digest=obj["manifest_digest"],
        per_label=obj["per_label"], micro_f1_no_na=obj["micro_f1_no_na"],
        micro_f1_no_na_defined=obj["micro_f1_no_na_defined"],
        micro_f1_with_na=obj["micro_f1_with_na"], confusion=obj["confusion"],
        query_count=obj["query_count"], wall_time=obj.get("wall_time", 0.0),
    )


def cmd_report(args) -> int:
    reports = {}
    for pair in args.reports:
        name, _, path = pair.partition("=")
        if not path:
            print(f"bad --reports entry {pair!r}; expected name=path", file=sys.stderr)
            return 2
        reports[name] = _report_from_json(json.loads(Path(path).read_text(encoding="utf-8")))
    report_mod.emit_tables(reports, args.layout, args.out, timing=False)
    _write_manifest(args, {"layout": args.layout, "reports": sorted(reports)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rediag", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=42)
    common.add_argument("--out", required=True, help="output directory")
    common.add_argument("--resources", default=None,
                        help=f"resource dir (default: bundled; env {RESOURCE_ENV})")
    common.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    common.add_argument("--format", choices=("opennre-jsonl", "tacred-json"),
                        default="opennre-jsonl")
    common.add_argument("--fail-threshold", type=float, default=0.5,
                        help="exit 1 when the per-instance failure fraction exceeds this")

    withdata = argparse.ArgumentParser(add_help=False, parents=[common])
    withdata.add_argument("--in", dest="input", required=True, help="input dataset")

    p = sub.add_parser("synth", parents=[common], help="generate the synthetic corpus")
    p.add_argument("--n-train", type=int, default=1600)
    p.add_argument("--n-test", type=int, default=400)
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("train-reference", parents=[withdata],
                       help="train the built-in reference classifier")
    p.add_argument("--dim", type=int, default=24)
    p.add_argument("--epochs", type=int, default=30)
    p.add_argument("--lr", type=float, default=0.5)
    p.add_argument("--batch-size", type=int, default=32)
    p.set_defaults(func=cmd_train_reference)

    p = sub.add_parser("perturb", parents=[withdata], help="randomization test sets")
    p.add_argument("--mode", choices=perturb_mod.MODES, required=True)
    p.add_argument("--rate", type=float, default=0.15)
    p.add_argument("--audit-size", type=int, default=200)
    p.add_argument("--augment-train", action="store_true",
                   help="emit original + perturbed (DA training set)")
    p.add_argument("--oracle", default=None,
                   help="optional oracle for mask-LM candidates")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("attack", parents=[withdata], help="adversarial test sets")
    p.add_argument("--oracle", required=True)
    p.add_argument("--method", choices=("pwws", "hotflip"), required=True)
    p.add_argument("--epsilon", type=float, default=0.8)
    p.add_argument("--beam", type=int, default=10)
    p.add_argument("--max-flips", type=int, default=10)
    p.add_argument("--max-replacements", type=int, default=None)
    p.add_argument("--limit", type=int, default=None, help="attack only the first N")
    p.add_argument("--emit-train", action="store_true",
                   help="also emit train + successful adversarials")
    p.set_defaults(func=cmd_attack)

    p = sub.add_parser("cda", parents=[withdata], help="counterfactual augmentation")
    p.add_argument("--oracle", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--steps", type=int, default=20)
    p.add_argument("--contrast-only", action="store_true",
                   help="emit only the masked NA instances (contrast set)")
    p.add_argument("--retrain", action="store_true",
                   help="retrain the reference model on the augmented set")
    p.set_defaults(func=cmd_cda)

    p = sub.add_parser("bias", parents=[withdata], help="bias test sets and emitters")
    p.add_argument("--kind", choices=("selection", "semantic"), required=True)
    p.add_argument("--train", default=None, help="train split for frequency statistics")
    p.add_argument("--mask-train", action="store_true",
                   help="selection: emit the frequency-masked training set")
    p.add_argument("--me", action="store_true", help="semantic: masked-entity transform")
    p.add_argument("--oe", action="store_true", help="semantic: only-entity transform")
    p.add_argument("--oe-errors", action="store_true",
                   help="semantic: keep instances the oracle gets wrong in the OE setting")
    p.add_argument("--mask-pct", type=float, default=None,
                   help="semantic: mask K%% of entity mentions in training data")
    p.add_argument("--mask-freq", action="store_true",
                   help="semantic: mask high-frequency entity pairs (needs --train)")
    p.add_argument("--oracle", default=None)
    p.add_argument("--freq-quantile", type=float, default=0.9)
    p.add_argument("--mask-prob", type=float, default=0.5)
    p.add_argument("--pair-quantile", type=float, default=0.9)
    p.set_defaults(func=cmd_bias)

    p = sub.add_parser("eval", parents=[withdata], help="score an oracle on a dataset")
    p.add_argument("--oracle", required=True)
    p.add_argument("--include-na", action="store_true")
    p.add_argument("--id", default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("report", parents=[common], help="side-by-side comparison tables")
    p.add_argument("--layout", choices=sorted(report_mod.LAYOUTS), required=True)
    p.add_argument("--reports", nargs="+", required=True, metavar="NAME=PATH")
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    Path(args.out).mkdir(parents=True, exist_ok=True)
    try:
        return args.func(args)
    except (CorpusError, OracleError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
