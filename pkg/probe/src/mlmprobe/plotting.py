"""Restart scatter figure: one x per run with horizontal jitter, chance
line at the 25% minimal-pair level."""

from __future__ import annotations

import random
from typing import Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

CHANCE_PAIR_ACCURACY = 0.25


class EmptyReportError(Exception):
    pass


def _test_accuracy(result: dict) -> float:
    try:
        value = result["splits"]["test"]["test_pair_accuracy"]
    except KeyError as exc:
        raise ValueError(f"report lacks test-split pair accuracy: {exc}") from None
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"pair accuracy out of range: {value}")
    return value


def plot_restarts(results: Sequence[dict], path, jitter_seed: int = 0) -> None:
    if not results:
        raise EmptyReportError("no reports to plot")
    groups: dict = {}
    for result in results:
        groups.setdefault(result.get("paradigm", "?"), []).append(_test_accuracy(result))

    keys = sorted(groups)
    rng = random.Random(jitter_seed)
    fig, ax = plt.subplots(figsize=(1.8 + 1.2 * len(keys), 4.0))
    for x, key in enumerate(keys):
        ys = groups[key]
        xs = [x + rng.uniform(-0.18, 0.18) for _ in ys]
        ax.plot(xs, ys, "x", color="tab:red", alpha=0.85)
    ax.axhline(CHANCE_PAIR_ACCURACY, linestyle="--", color="gray", linewidth=1,
               label="chance (25%)")
    ax.set_xticks(range(len(keys)))
    ax.set_xticklabels(keys)
    ax.set_ylim(-0.03, 1.03)
    ax.set_ylabel("% test pairs correct")
    ax.set_title("Fine-tuned classifier restarts")
    ax.legend(loc="lower right", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)
