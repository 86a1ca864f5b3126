"""Command-line interface.

Subcommands: extract, train, evaluate, report, run-all, make-fixture.
Config precedence: defaults < --config JSON < FAKERY_* env vars < flags.
Exits 0 on success; on failure prints one machine-readable line
"error: <Type>: <message>" to stderr and exits nonzero.
"""

from __future__ import annotations

import argparse
import sys

from .errors import FakeryError
from .fixture import make_fixture
from .pipeline import (
    RunConfig,
    cmd_evaluate,
    cmd_extract,
    cmd_report,
    cmd_run_all,
    cmd_train,
)


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="JSON config file")
    parser.add_argument("--data-root", dest="data_root")
    parser.add_argument("--features", dest="feature_spec", help="spec tag, e.g. mixed or raw+dct")
    parser.add_argument("--models", help="comma-separated model names")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--train-limit", dest="train_limit", type=int)
    parser.add_argument("--test-limit", dest="test_limit", type=int)
    parser.add_argument("--out", dest="out_dir")
    parser.add_argument("--gbdt-rounds", dest="gbdt_rounds", type=int)
    parser.add_argument("--forest-trees", dest="forest_trees", type=int)


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    overrides = {
        "data_root": args.data_root,
        "feature_spec": args.feature_spec,
        "models": args.models.split(",") if args.models else None,
        "seed": args.seed,
        "train_limit": args.train_limit,
        "test_limit": args.test_limit,
        "out_dir": args.out_dir,
        "gbdt_rounds": args.gbdt_rounds,
        "forest_trees": args.forest_trees,
    }
    return RunConfig.load(config_path=args.config, overrides=overrides)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fakery")
    sub = parser.add_subparsers(dest="command", required=True)

    for name in ("extract", "train", "evaluate", "report", "run-all"):
        p = sub.add_parser(name)
        _add_config_flags(p)

    p = sub.add_parser("make-fixture")
    p.add_argument("--out", dest="out_dir", required=True)
    p.add_argument("--n-per-class", type=int, default=50)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--null", action="store_true", help="labels carry no signal")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "make-fixture":
            make_fixture(args.out_dir, args.n_per_class, args.seed, null_signal=args.null)
            print(f"fixture written to {args.out_dir}")
            return 0
        cfg = _config_from_args(args)
        if args.command == "extract":
            for split, path in cmd_extract(cfg).items():
                print(f"{split}: {path}")
        elif args.command == "train":
            for name, paths in cmd_train(cfg).items():
                print(f"{name}: {paths['model']}")
        elif args.command == "evaluate":
            for name, doc in cmd_evaluate(cfg).items():
                print(
                    f"{name}: roc_auc={doc['roc_auc']:.4f} f1={doc['f1']:.4f} "
                    f"brier={doc['brier']:.4f}"
                )
        elif args.command == "report":
            for key, path in cmd_report(cfg).items():
                print(f"{key}: {path}")
        elif args.command == "run-all":
            for name, doc in cmd_run_all(cfg).items():
                print(
                    f"{name}: roc_auc={doc['roc_auc']:.4f} f1={doc['f1']:.4f} "
                    f"brier={doc['brier']:.4f}"
                )
    except (FakeryError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
