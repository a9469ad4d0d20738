"""Command-line entry point.

Subcommands:

    ingest   parse the corpus and write the manifest
    train    split / vectorize / train / evaluate one task
    analyze  emit the corpus-scope or film-scope report bundle and CSVs
    export   re-derive the CSV tables from an existing bundle JSON

All commands take ``--config`` pointing at a flat key=value file; see
:mod:`cinesent.config` for the keys.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys

from . import linear, pipeline, report
from .config import load_config
from .errors import CinesentError

logger = logging.getLogger(__name__)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cinesent")
    parser.add_argument("-v", "--verbose", action="store_true")
    commands = parser.add_subparsers(dest="command", required=True)

    ingest = commands.add_parser("ingest", help="parse the corpus and write a manifest")
    ingest.add_argument("--config", required=True)

    train = commands.add_parser("train", help="train and evaluate one classifier")
    train.add_argument("--config", required=True)
    train.add_argument("--task", choices=("sentiment", "abuse"), required=True)
    train.add_argument("--data", required=True, help="labeled CSV dataset")
    train.add_argument("--loss", choices=linear.LOSSES, default=linear.LOSS_LOGISTIC)
    train.add_argument("--epochs", type=int, default=None)
    train.add_argument("--learning-rate", type=float, default=None)
    train.add_argument("--batch-size", type=int, default=None)
    train.add_argument("--l2", type=float, default=None)

    analyze = commands.add_parser("analyze", help="emit report bundle and CSV tables")
    analyze.add_argument("--config", required=True)
    analyze.add_argument("--scope", choices=("corpus", "film"), default="corpus")
    analyze.add_argument("--id", default=None, help="film id (film scope)")

    export = commands.add_parser("export", help="re-derive CSVs from a bundle JSON")
    export.add_argument("--config", required=True)
    export.add_argument("--bundle", default=None, help="bundle path (default: analysis/bundle.json)")
    return parser


def _train_config(config, args) -> linear.TrainConfig:
    defaults = linear.TrainConfig(seed=config.seed)
    return linear.TrainConfig(
        learning_rate=args.learning_rate if args.learning_rate is not None else defaults.learning_rate,
        epochs=args.epochs if args.epochs is not None else defaults.epochs,
        l2=args.l2 if args.l2 is not None else defaults.l2,
        seed=config.seed,
        shuffle=defaults.shuffle,
        batch_size=args.batch_size if args.batch_size is not None else defaults.batch_size,
    )


def cmd_ingest(args) -> int:
    config = load_config(args.config)
    resources = pipeline.load_resources(config)
    manifest = pipeline.ingest(config, resources)
    path = report.write_json(config.output_dir / "manifest.json", manifest)
    print(f"wrote {path} ({manifest['film_count']} films)")
    return 0


def cmd_train(args) -> int:
    config = load_config(args.config)
    resources = pipeline.load_resources(config)
    result = pipeline.train_task(
        config, resources, args.task, args.data,
        loss=args.loss, train_config=_train_config(config, args),
    )
    print(f"wrote {result.model_path}")
    print(f"wrote {result.report_json}")
    for name, value in result.metrics.to_dict().items():
        print(f"  {name}: {value:.4f}")
    return 0


def cmd_analyze(args) -> int:
    config = load_config(args.config)
    resources = pipeline.load_resources(config)
    client = pipeline.build_client(config, resources)
    if args.scope == "film":
        if not args.id:
            raise CinesentError("--id is required with --scope film")
        bundle = pipeline.analyze_film(config, resources, client, args.id)
        bundle_path = config.analysis_dir / f"film_{args.id}.json"
    else:
        bundle = pipeline.analyze_corpus(config, resources, client)
        bundle_path = config.analysis_dir / "bundle.json"
    report.write_json(bundle_path, bundle)
    written = report.export_bundle(bundle, config.analysis_dir)
    print(f"wrote {bundle_path}")
    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_export(args) -> int:
    config = load_config(args.config)
    bundle_path = args.bundle or (config.analysis_dir / "bundle.json")
    with open(bundle_path, encoding="utf-8") as handle:
        bundle = json.load(handle)
    written = report.export_bundle(bundle, config.analysis_dir)
    for path in written:
        print(f"wrote {path}")
    return 0


_COMMANDS = {
    "ingest": cmd_ingest,
    "train": cmd_train,
    "analyze": cmd_analyze,
    "export": cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return _COMMANDS[args.command](args)
    except CinesentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
