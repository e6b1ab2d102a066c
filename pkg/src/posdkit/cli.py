"""Command-line interface: generate, verify, train, eval, report, prob."""

from __future__ import annotations

import argparse
import contextlib
import os
import sys

from posdkit import __version__, datasets, learners, reporting
from posdkit.datasets import DatasetSpec
from posdkit.paradigms import PARADIGM_IDS


class CliError(Exception):
    pass


@contextlib.contextmanager
def output_lock(outdir):
    """One writer per output directory; a stale lock names its holder."""
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, ".posdkit.lock")
    try:
        fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
    except FileExistsError:
        raise CliError(
            f"{outdir} is locked by another run ({path}); remove the file if stale"
        ) from None
    try:
        os.write(fd, f"pid {os.getpid()}\n".encode())
        os.close(fd)
        yield
    finally:
        with contextlib.suppress(FileNotFoundError):
            os.unlink(path)


def _cmd_generate(args) -> int:
    spec = DatasetSpec(
        paradigm=args.paradigm,
        n_per_split=args.n,
        master_seed=args.seed,
        augment_controls=args.augment_controls,
    )
    spec.validate()
    with output_lock(args.out):
        result = datasets.build_splits(spec, jobs=args.jobs)
        manifest = datasets.write_dataset(result, args.out)
    print(result.report.to_text())
    print(
        f"wrote {len(manifest['files'])} split files to {args.out} "
        f"({result.accepted} quads accepted, {result.rejected} duplicates skipped, "
        f"{result.controls} controls)"
    )
    return 0 if result.report.passed else 1


def _cmd_verify(args) -> int:
    from posdkit.verify import check_dataset

    paradigms = [args.paradigm] if args.paradigm else datasets.detect_paradigms(args.indir)
    if not paradigms:
        raise CliError(f"no dataset manifests under {args.indir}")
    ok = True
    for paradigm in paradigms:
        report = check_dataset(args.indir, paradigm, deep=args.deep, jobs=args.jobs)
        print(report.to_text())
        ok = ok and report.passed
    return 0 if ok else 1


def _train_threshold_violations(featurizer: str, summary) -> list:
    """CI gates: the relation featurizer must solve the task everywhere,
    the surface featurizer must at least fit the training pairs."""
    problems = []
    for result in summary.results:
        if featurizer == "structural":
            for name, metrics in result.splits.items():
                if metrics.pair_accuracy < 1.0:
                    problems.append(
                        f"seed {result.seed}: {name} pair accuracy "
                        f"{metrics.pair_accuracy:.4f} < 1.0"
                    )
        elif featurizer == "surface":
            train_metrics = result.splits["train"]
            if train_metrics.train_pair_accuracy < 0.99:
                problems.append(
                    f"seed {result.seed}: train-split pair accuracy "
                    f"{train_metrics.train_pair_accuracy:.4f} < 0.99"
                )
    return problems


def _cmd_train(args) -> int:
    from posdkit.pipeline import regenerate_eval_sets

    eval_sets, _, _ = regenerate_eval_sets(
        args.indir, args.paradigm, args.featurizer, jobs=args.jobs
    )
    config = learners.TrainConfig(seed=args.seed)
    summary = learners.run_restarts(
        config, eval_sets, args.paradigm, args.featurizer, args.restarts
    )
    print(reporting.format_eval_table(summary.results))
    with output_lock(args.out):
        paths = reporting.write_results(
            args.out, summary.results, summary.to_dict(),
            prefix=f"{args.paradigm}.{args.featurizer}",
        )
        if args.save_models:
            model = learners.train(
                config,
                eval_sets["train"].matrix,
                eval_sets["train"].labels,
                X_dev=eval_sets["dev"].matrix,
                y_dev=eval_sets["dev"].labels,
            )
            model_path = os.path.join(args.out, f"{args.paradigm}.{args.featurizer}.model.json")
            model.save(model_path)
            paths["model"] = model_path
    print(f"wrote {', '.join(sorted(paths.values()))}")
    problems = _train_threshold_violations(args.featurizer, summary)
    for problem in problems:
        print(f"threshold violation: {problem}", file=sys.stderr)
    return 1 if problems else 0


def _cmd_eval(args) -> int:
    from posdkit.pipeline import eval_sets_from_files, regenerate_eval_sets

    if args.featurizer in ("oracle-structural", "oracle-linear", "random"):
        eval_sets = eval_sets_from_files(args.indir, args.paradigm)
        predictions = {}
        for name, eval_set in eval_sets.items():
            if args.featurizer == "random":
                predictions[name] = learners.random_predictions(eval_set.records, args.seed)
            else:
                which = args.featurizer.split("-", 1)[1]
                predictions[name] = learners.oracle_predictions(eval_set.records, which)
        result = learners.evaluate_predictions(
            predictions, eval_sets, args.paradigm, args.featurizer, seed=args.seed
        )
    else:
        if not args.model:
            raise CliError(f"--featurizer {args.featurizer} needs --model")
        model = learners.LinearModel.load(args.model)
        eval_sets, _, _ = regenerate_eval_sets(
            args.indir, args.paradigm, args.featurizer, jobs=args.jobs
        )
        result = learners.evaluate(
            model, eval_sets, args.paradigm, f"model:{args.featurizer}", seed=args.seed
        )

    print(reporting.format_eval_table([result]))
    if args.out:
        with output_lock(args.out):
            reporting.write_results(
                args.out, [result], prefix=f"{args.paradigm}.{args.featurizer}"
            )

    if args.featurizer == "oracle-structural":
        bad = [
            name for name, m in result.splits.items()
            if m.item_accuracy < 1.0 or m.pair_accuracy < 1.0
        ]
        if bad:
            print(f"oracle-structural imperfect on: {', '.join(bad)}", file=sys.stderr)
            return 1
    if args.featurizer == "oracle-linear":
        for name, metrics in result.splits.items():
            if metrics.train_pair_accuracy < 1.0:
                print(f"oracle-linear below 100% on {name} held-out pairs", file=sys.stderr)
                return 1
            if metrics.n_test_pairs and metrics.test_pair_accuracy > 0.0:
                print(f"oracle-linear above 0% on {name} test pairs", file=sys.stderr)
                return 1
    return 0


def _cmd_report(args) -> int:
    results = []
    for indir in args.indirs:
        results.extend(reporting.collect_results(indir))
    if not results:
        raise CliError("no results.jsonl files found under the given directories")
    with output_lock(args.out):
        paths = reporting.write_aggregate_report(results, args.out)
    print(f"aggregated {len(results)} runs")
    for row in paths["rows"]:
        print(
            f"  {row['paradigm']:<10} {row['predictor']:<12} "
            f"median test-pair {row['test_pair_median']:.4f} "
            f"[{row['test_pair_min']:.4f}, {row['test_pair_max']:.4f}] "
            f"over {row['runs']} run(s)"
        )
    print(f"wrote {paths['table']}, {paths['tsv']}, {paths['figure']}")
    return 0


def _cmd_prob(args) -> int:
    value = learners.chance_alignment_probability(args.domains, args.atleast, args.p)
    print(value)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="posdkit",
        description=__doc__,
    )
    parser.add_argument("--version", action="version", version=f"posdkit {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    generate = sub.add_parser("generate", help="build and emit one paradigm's splits")
    generate.add_argument("--paradigm", required=True, choices=PARADIGM_IDS)
    generate.add_argument("--n", type=int, default=10000, help="records per split")
    generate.add_argument("--seed", type=int, required=True)
    generate.add_argument("--out", required=True)
    generate.add_argument("--augment-controls", action="store_true")
    generate.add_argument("--jobs", type=int, default=1)
    generate.set_defaults(func=_cmd_generate)

    verify = sub.add_parser("verify", help="check emitted dataset files")
    verify.add_argument("--in", dest="indir", required=True)
    verify.add_argument("--paradigm", choices=PARADIGM_IDS)
    verify.add_argument("--deep", action="store_true",
                        help="regenerate from the manifest and re-verify trees")
    verify.add_argument("--jobs", type=int, default=1)
    verify.set_defaults(func=_cmd_verify)

    train = sub.add_parser("train", help="train restart classifiers on a dataset")
    train.add_argument("--in", dest="indir", required=True)
    train.add_argument("--paradigm", required=True, choices=PARADIGM_IDS)
    train.add_argument("--featurizer", required=True,
                       choices=("surface", "structural", "linear"))
    train.add_argument("--seed", type=int, default=0)
    train.add_argument("--restarts", type=int, default=1)
    train.add_argument("--out", required=True)
    train.add_argument("--save-models", action="store_true")
    train.add_argument("--jobs", type=int, default=1)
    train.set_defaults(func=_cmd_train)

    evaluate = sub.add_parser("eval", help="evaluate oracle predictors or a saved model")
    evaluate.add_argument("--in", dest="indir", required=True)
    evaluate.add_argument("--paradigm", required=True, choices=PARADIGM_IDS)
    evaluate.add_argument(
        "--featurizer", required=True,
        choices=("oracle-structural", "oracle-linear", "random",
                 "surface", "structural", "linear"),
    )
    evaluate.add_argument("--model", help="saved model for non-oracle featurizers")
    evaluate.add_argument("--seed", type=int, default=0)
    evaluate.add_argument("--out")
    evaluate.add_argument("--jobs", type=int, default=1)
    evaluate.set_defaults(func=_cmd_eval)

    report = sub.add_parser("report", help="aggregate run results into table + figure")
    report.add_argument("--in", dest="indirs", nargs="+", required=True)
    report.add_argument("--out", required=True)
    report.set_defaults(func=_cmd_report)

    prob = sub.add_parser("prob", help="chance-alignment tail probability")
    prob.add_argument("--domains", type=int, required=True)
    prob.add_argument("--atleast", type=int, required=True)
    prob.add_argument("--p", type=float, required=True)
    prob.set_defaults(func=_cmd_prob)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - CLI boundary
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
