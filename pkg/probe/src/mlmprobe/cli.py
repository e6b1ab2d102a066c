"""Probe CLI: run fine-tuning restarts, build tiny smoke checkpoints, plot."""

from __future__ import annotations

import argparse
import json
import sys

from mlmprobe.config import ProbeConfig


def _cmd_run(args) -> int:
    from mlmprobe.finetune import finetune_and_eval

    config = ProbeConfig(
        model=args.model,
        learning_rate=args.learning_rate,
        dropout=args.dropout,
        batch_size=args.batch_size,
        max_epochs=args.max_epochs,
        eval_every_batches=args.eval_every,
        patience=args.patience,
        restarts=args.restarts,
        seed=args.seed,
        device=args.device,
        deterministic=args.deterministic,
    )
    results, summary = finetune_and_eval(config, args.data, args.paradigm, args.out)
    print(json.dumps(summary, indent=2))
    interpretable = summary["interpretable_restarts"] == summary["n_restarts"]
    if not interpretable:
        print("warning: some restarts fell below 90% held-out pair accuracy; "
              "their test-template numbers are not interpretable", file=sys.stderr)
    return 0


def _cmd_make_tiny(args) -> int:
    from mlmprobe.dataio import load_dataset
    from mlmprobe.tiny import make_tiny_checkpoint

    splits = load_dataset(args.data, args.paradigm)
    texts = [record.text for records in splits.values() for record in records]
    path = make_tiny_checkpoint(args.out, texts, seed=args.seed)
    print(f"wrote tiny checkpoint to {path}")
    return 0


def _cmd_plot(args) -> int:
    from mlmprobe.plotting import plot_restarts

    results = []
    for path in args.results:
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if line:
                    results.append(json.loads(line))
    plot_restarts(results, args.out)
    print(f"plotted {len(results)} runs to {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mlmprobe", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="fine-tune restarts on a dataset directory")
    run.add_argument("--data", required=True)
    run.add_argument("--paradigm", required=True)
    run.add_argument("--model", default=ProbeConfig.model)
    run.add_argument("--learning-rate", type=float, default=ProbeConfig.learning_rate)
    run.add_argument("--dropout", type=float, default=ProbeConfig.dropout)
    run.add_argument("--batch-size", type=int, default=ProbeConfig.batch_size)
    run.add_argument("--max-epochs", type=int, default=ProbeConfig.max_epochs)
    run.add_argument("--eval-every", type=int, default=ProbeConfig.eval_every_batches)
    run.add_argument("--patience", type=int, default=ProbeConfig.patience)
    run.add_argument("--restarts", type=int, default=ProbeConfig.restarts)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--device", default="cpu")
    run.add_argument("--deterministic", action="store_true")
    run.add_argument("--out", required=True)
    run.set_defaults(func=_cmd_run)

    tiny = sub.add_parser("make-tiny", help="build a local random checkpoint for smoke runs")
    tiny.add_argument("--data", required=True)
    tiny.add_argument("--paradigm", required=True)
    tiny.add_argument("--seed", type=int, default=0)
    tiny.add_argument("--out", required=True)
    tiny.set_defaults(func=_cmd_make_tiny)

    plot = sub.add_parser("plot", help="scatter per-restart accuracies from results files")
    plot.add_argument("--results", nargs="+", required=True)
    plot.add_argument("--out", required=True)
    plot.set_defaults(func=_cmd_plot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
