"""End-to-end smoke: one restart on 8 training records with a locally
constructed tiny checkpoint produces one schema-complete report row."""

import json
import os

import pytest

from mlmprobe.config import ProbeConfig
from mlmprobe.dataio import load_dataset
from mlmprobe.finetune import (
    CheckpointUnavailableError,
    finetune_and_eval,
    finetune_once,
    summarize,
)


def smoke_config(checkpoint, restarts=1):
    return ProbeConfig(
        model=str(checkpoint),
        batch_size=4,
        max_epochs=1,
        eval_every_batches=1,
        patience=2,
        restarts=restarts,
        max_length=24,
    )


def test_single_restart_produces_report_row(tiny_checkpoint, fixture_data_dir):
    splits = load_dataset(fixture_data_dir, "saux_inv")
    assert len(splits["train"]) == 8
    result = finetune_once(smoke_config(tiny_checkpoint), splits, seed=0)
    assert result["kind"] == "eval-result"
    assert result["paradigm"] == "saux_inv"
    assert set(result["splits"]) == {"train", "dev", "test"}
    for metrics in result["splits"].values():
        assert 0.0 <= metrics["item_accuracy"] <= 1.0
        assert 0.0 <= metrics["pair_accuracy"] <= metrics["item_accuracy"] + 1e-12
    assert isinstance(result["heldout_interpretable"], bool)


def test_finetune_and_eval_writes_outputs(tiny_checkpoint, fixture_data_dir, tmp_path):
    out = tmp_path / "probe-out"
    results, summary = finetune_and_eval(
        smoke_config(tiny_checkpoint, restarts=2), fixture_data_dir, "saux_inv", out
    )
    assert len(results) == 2
    assert {r["seed"] for r in results} == {0, 1}
    assert summary["n_restarts"] == 2
    assert 0.0 <= summary["median_test_pair_accuracy"] <= 1.0
    assert (out / "saux_inv.probe.results.jsonl").exists()
    assert (out / "saux_inv.probe.summary.json").exists()
    assert (out / "saux_inv.probe.png").exists()
    with open(out / "saux_inv.probe.results.jsonl") as handle:
        rows = [json.loads(line) for line in handle if line.strip()]
    assert len(rows) == 2 and all(r["kind"] == "eval-result" for r in rows)


def test_restart_seeds_vary_only_initialization(tiny_checkpoint, fixture_data_dir):
    splits = load_dataset(fixture_data_dir, "saux_inv")
    config = smoke_config(tiny_checkpoint)
    a = finetune_once(config, splits, seed=0)
    b = finetune_once(config, splits, seed=0)
    assert a == b  # same seed, same everything


def test_checkpoint_unavailable_error(fixture_data_dir, tmp_path):
    config = ProbeConfig(model=str(tmp_path / "no-such-checkpoint"), restarts=1)
    with pytest.raises(CheckpointUnavailableError):
        finetune_and_eval(config, fixture_data_dir, "saux_inv")


def test_summary_statistics():
    def fake(score, heldout=1.0):
        return {
            "splits": {"test": {"test_pair_accuracy": score,
                                "train_pair_accuracy": heldout}},
            "heldout_interpretable": heldout > 0.9,
        }

    summary = summarize([fake(0.2), fake(0.5), fake(0.9)])
    assert summary["median_test_pair_accuracy"] == 0.5
    assert summary["min_test_pair_accuracy"] == 0.2
    assert summary["max_test_pair_accuracy"] == 0.9
    assert summary["interpretable_restarts"] == 3
