"""Minimal-pair metrics in the shared eval-result report schema.

The emitted dicts are field-for-field compatible with the generator's
report files (one JSON object per run, kind="eval-result"); the contract
test pins this against a fixture produced by the generator.
"""

from __future__ import annotations

from typing import Mapping, Sequence

from mlmprobe.dataio import Record


class PairingError(Exception):
    pass


def _ratio(hit: int, total: int) -> float:
    return hit / total if total else 0.0


def split_metrics(records: Sequence[Record], predictions: Sequence[bool],
                  split: str) -> dict:
    """Item/pair accuracy plus the structural/linear/other diagnosis."""
    if len(records) != len(predictions):
        raise PairingError("records and predictions differ in length")

    correct_items = 0
    groups: dict = {}
    for record, prediction in zip(records, predictions):
        prediction = bool(prediction)
        if prediction == record.label:
            correct_items += 1
        if record.cell == "control":
            continue
        groups.setdefault((record.quad_id, record.template_kind), []).append(
            (record, prediction)
        )

    hits = {"train": 0, "test": 0}
    totals = {"train": 0, "test": 0}
    diag_structural = 0
    diag_linear = 0
    for (quad_id, kind), members in groups.items():
        if len(members) != 2:
            raise PairingError(
                f"quad {quad_id} has {len(members)} {kind}-template record(s); "
                "pair metrics need exactly 2"
            )
        totals[kind] += 1
        both = all(pred == rec.label for rec, pred in members)
        if both:
            hits[kind] += 1
        if kind == "test":
            if both:
                diag_structural += 1
            elif all(pred == rec.label_linear for rec, pred in members):
                diag_linear += 1

    n_items = len(records)
    n_pairs = totals["train"] + totals["test"]
    n_test_pairs = totals["test"]
    return {
        "split": split,
        "n_items": n_items,
        "item_accuracy": _ratio(correct_items, n_items),
        "n_pairs": n_pairs,
        "pair_accuracy": _ratio(hits["train"] + hits["test"], n_pairs),
        "n_train_pairs": totals["train"],
        "train_pair_accuracy": _ratio(hits["train"], totals["train"]),
        "n_test_pairs": n_test_pairs,
        "test_pair_accuracy": _ratio(hits["test"], n_test_pairs),
        "diagnosis": {
            "structural": _ratio(diag_structural, n_test_pairs),
            "linear": _ratio(diag_linear, n_test_pairs),
            "other": _ratio(n_test_pairs - diag_structural - diag_linear, n_test_pairs),
            "n_pairs": n_test_pairs,
        },
    }


def make_result(paradigm: str, predictor: str, seed: int,
                splits: Mapping[str, dict]) -> dict:
    return {
        "kind": "eval-result",
        "paradigm": paradigm,
        "predictor": predictor,
        "seed": seed,
        "splits": dict(splits),
    }
