"""Report rendering: text tables, delimited summaries, and the restart
scatter figure."""

from __future__ import annotations

import json
import os
import random
from typing import Optional, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

from posdkit.learners import EvalResult

CHANCE_PAIR_ACCURACY = 0.25


def format_eval_table(results: Sequence[EvalResult]) -> str:
    """Fixed-width table: one row per (result, split)."""
    header = (
        f"{'paradigm':<10} {'predictor':<12} {'seed':>4} {'split':<6} "
        f"{'items':>6} {'item%':>7} {'pair%':>7} {'train-pair%':>11} "
        f"{'test-pair%':>10} {'diag S/L/other':>18}"
    )
    lines = [header, "-" * len(header)]
    for result in results:
        for name in ("train", "dev", "test"):
            metrics = result.splits.get(name)
            if metrics is None:
                continue
            diag = metrics.diagnosis
            diag_text = f"{diag.structural:.2f}/{diag.linear:.2f}/{diag.other:.2f}"
            lines.append(
                f"{result.paradigm:<10} {result.predictor:<12} {result.seed:>4} "
                f"{name:<6} {metrics.n_items:>6} {metrics.item_accuracy:>7.4f} "
                f"{metrics.pair_accuracy:>7.4f} {metrics.train_pair_accuracy:>11.4f} "
                f"{metrics.test_pair_accuracy:>10.4f} {diag_text:>18}"
            )
    return "\n".join(lines)


def write_results(outdir, results: Sequence[EvalResult], summary: Optional[dict] = None,
                  prefix: str = "results") -> dict:
    """Emit machine-readable results plus the text table; returns paths."""
    os.makedirs(outdir, exist_ok=True)
    paths = {}

    jsonl_path = os.path.join(outdir, f"{prefix}.results.jsonl")
    with open(jsonl_path, "w", encoding="utf-8") as handle:
        for result in results:
            handle.write(json.dumps(result.to_dict(), ensure_ascii=False) + "\n")
    paths["results"] = jsonl_path

    table_path = os.path.join(outdir, f"{prefix}.txt")
    with open(table_path, "w", encoding="utf-8") as handle:
        handle.write(format_eval_table(results) + "\n")
    paths["table"] = table_path

    if summary is not None:
        summary_path = os.path.join(outdir, f"{prefix}.summary.json")
        with open(summary_path, "w", encoding="utf-8") as handle:
            json.dump(summary, handle, indent=2)
            handle.write("\n")
        paths["summary"] = summary_path
    return paths


def load_results(path) -> list:
    results = []
    with open(path, "r", encoding="utf-8") as handle:
        for line in handle:
            line = line.strip()
            if line:
                results.append(EvalResult.from_dict(json.loads(line)))
    return results


def collect_results(root) -> list:
    """All results.jsonl files under a directory tree."""
    found = []
    for dirpath, _, filenames in os.walk(root):
        for name in sorted(filenames):
            if name.endswith("results.jsonl"):
                found.extend(load_results(os.path.join(dirpath, name)))
    return found


def plot_restarts(results: Sequence[EvalResult], path, jitter_seed: int = 0) -> None:
    """Scatter of per-restart test-template pair accuracy by paradigm.

    Each run is one 'x' with horizontal jitter; the dashed line marks the
    25% chance level for minimal pairs.
    """
    if not results:
        raise ValueError("no results to plot")
    for result in results:
        accuracy = result.split("test").test_pair_accuracy
        if not 0.0 <= accuracy <= 1.0:
            raise ValueError(f"accuracy out of range: {accuracy}")

    groups: dict = {}
    for result in results:
        groups.setdefault((result.paradigm, result.predictor), []).append(result)
    keys = sorted(groups)
    rng = random.Random(jitter_seed)

    fig, ax = plt.subplots(figsize=(1.6 + 1.3 * len(keys), 4.0))
    for x, key in enumerate(keys):
        ys = [r.split("test").test_pair_accuracy for r in groups[key]]
        xs = [x + rng.uniform(-0.18, 0.18) for _ in ys]
        ax.plot(xs, ys, "x", color="tab:blue", alpha=0.8)
    ax.axhline(CHANCE_PAIR_ACCURACY, linestyle="--", color="gray", linewidth=1,
               label="chance (25%)")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels([f"{p}\n{f}" for p, f in keys], fontsize=8)
    ax.set_ylim(-0.03, 1.03)
    ax.set_ylabel("% test pairs correct")
    ax.set_title("Test minimal-pair accuracy by restart")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_aggregate_report(results: Sequence[EvalResult], outdir) -> dict:
    """Aggregate many runs into a summary table (text + TSV) and the figure."""
    os.makedirs(outdir, exist_ok=True)
    groups: dict = {}
    for result in results:
        groups.setdefault((result.paradigm, result.predictor), []).append(result)

    rows = []
    for (paradigm, predictor), bucket in sorted(groups.items()):
        scores = sorted(r.split("test").test_pair_accuracy for r in bucket)
        held = sorted(r.split("test").train_pair_accuracy for r in bucket)
        mid = scores[len(scores) // 2] if len(scores) % 2 else (
            (scores[len(scores) // 2 - 1] + scores[len(scores) // 2]) / 2
        )
        rows.append({
            "paradigm": paradigm,
            "predictor": predictor,
            "runs": len(bucket),
            "test_pair_median": mid,
            "test_pair_min": scores[0],
            "test_pair_max": scores[-1],
            "heldout_pair_min": held[0],
        })

    tsv_path = os.path.join(outdir, "report.tsv")
    columns = ["paradigm", "predictor", "runs", "test_pair_median",
               "test_pair_min", "test_pair_max", "heldout_pair_min"]
    with open(tsv_path, "w", encoding="utf-8") as handle:
        handle.write("\t".join(columns) + "\n")
        for row in rows:
            handle.write("\t".join(_fmt(row[c]) for c in columns) + "\n")

    text_path = os.path.join(outdir, "report.txt")
    with open(text_path, "w", encoding="utf-8") as handle:
        handle.write(format_eval_table(results) + "\n")

    figure_path = os.path.join(outdir, "report.png")
    plot_restarts(results, figure_path)
    return {"tsv": tsv_path, "table": text_path, "figure": figure_path, "rows": rows}


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.4f}"
    return str(value)
