"""Acceptance suite: one test per exit criterion; each prints a PASS/FAIL
line in the terminal summary (see conftest)."""

import random
import time

import numpy as np
import pytest

from posdkit.datasets import DatasetSpec, build_splits, write_dataset
from posdkit.learners import (
    TrainConfig,
    chance_alignment_probability,
    logistic_loss_and_gradient,
    oracle_predictions,
    random_predictions,
    split_metrics,
    train_and_evaluate,
)
from posdkit.paradigms import PARADIGM_IDS, REFERENCE_SEEDS, build_quad
from posdkit.pipeline import build_eval_sets_multi
from posdkit.reporting import format_eval_table, write_results

FULL_N = 10000
LEARNER_N = 2000


@pytest.fixture(scope="module")
def full_datasets():
    """n=10000 per split for every paradigm, with generation+verify timing."""
    out = {}
    for pid in PARADIGM_IDS:
        spec = DatasetSpec(paradigm=pid, n_per_split=FULL_N, master_seed=2026)
        started = time.monotonic()
        result = build_splits(spec)
        out[pid] = (result, time.monotonic() - started)
    return out


@pytest.fixture(scope="module")
def learner_runs():
    """Structural- and surface-featurizer training runs per paradigm."""
    runs = {}
    for pid in PARADIGM_IDS:
        spec = DatasetSpec(paradigm=pid, n_per_split=LEARNER_N, master_seed=404)
        by_featurizer, _ = build_eval_sets_multi(spec, ["structural", "surface"])
        for name, eval_sets in by_featurizer.items():
            runs[(pid, name)] = train_and_evaluate(
                TrainConfig(seed=0), eval_sets, pid, name
            )
    return runs


def test_design_ambiguity_and_disambiguation(full_datasets, acceptance_report):
    worst = 0.0
    for pid, (result, elapsed) in full_datasets.items():
        report = result.report
        assert report.n_train_members == result.accepted * 2
        assert report.passed, report.to_text()
        assert report.ambiguity_violations == 0
        assert report.divergence_violations == 0
        assert report.alternative_violations == 0
        assert elapsed < 60.0, f"{pid} took {elapsed:.1f}s"
        worst = max(worst, elapsed)
    acceptance_report(
        "design ambiguity/disambiguation at n=10000",
        True,
        f"4 paradigms PASS, slowest {worst:.1f}s",
    )


TABLE1 = {
    "saux_inv": [
        ("Has the man who is going seen the cat ?", True, True),
        ("Is the man who going has seen the cat ?", False, False),
        ("Has the man seen the cat who is going ?", True, False),
        ("Is the man has seen the cat who going ?", False, True),
    ],
    "reflexive": [
        ("The boy that loves himself talks to ladies .", True, True),
        ("The boy that loves themselves talks to ladies .", False, False),
        ("The boy that loves ladies talks to himself .", True, True),
        ("The boy that loves ladies talks to themselves .", False, True),
    ],
    "npi": [
        ("Kids who saw the cats won't get any dogs .", True, True),
        ("Kids who saw any cats won't get the dogs .", False, False),
        ("Kids who won't see any cats get the dogs .", True, True),
        ("Kids who won't see the cats get any dogs .", False, True),
    ],
    "tense": [
        ("The critic who sang arias praised a lady .", True, True),
        ("The critic who sings arias praised a lady .", False, False),
        ("The critic praised a lady who sang arias .", True, True),
        ("The critic praised a lady who sings arias .", False, True),
    ],
}


def test_published_quad_fidelity(lexicon, templates, acceptance_report):
    checked = 0
    for pid, expected in TABLE1.items():
        quad = build_quad(pid, lexicon, templates[pid], random.Random(REFERENCE_SEEDS[pid]))
        got = [(m.text, m.label_structural, m.label_linear) for m in quad.members]
        assert got == expected, f"{pid}:\n{got}\nvs\n{expected}"
        checked += len(expected)
    acceptance_report(
        "published example quads reproduced from documented seeds",
        checked == 16,
        "16/16 sentences, labels match the shading rule",
    )


def test_oracle_exactness(full_datasets, acceptance_report):
    started = time.monotonic()
    for pid, (result, _) in full_datasets.items():
        for split, records in result.splits.items():
            structural = split_metrics(
                records, oracle_predictions(records, "structural"), split
            )
            assert structural.item_accuracy == 1.0
            assert structural.pair_accuracy == 1.0
            linear = split_metrics(records, oracle_predictions(records, "linear"), split)
            assert linear.train_pair_accuracy == 1.0
            if linear.n_test_pairs:
                assert linear.test_pair_accuracy == 0.0
    elapsed = time.monotonic() - started
    assert elapsed < 10.0, f"oracle sweep took {elapsed:.1f}s"
    acceptance_report(
        "oracle exactness (structural 100%, linear 100%/0%)",
        True,
        f"all paradigms and splits in {elapsed:.1f}s",
    )


def test_chance_level(full_datasets, acceptance_report):
    result, _ = full_datasets["saux_inv"]
    records = result.splits["test"]
    metrics = split_metrics(records, random_predictions(records, seed=17), "test")
    assert metrics.n_pairs >= 5000
    assert 0.23 <= metrics.pair_accuracy <= 0.27, metrics.pair_accuracy
    acceptance_report(
        "random predictor pair accuracy at chance",
        True,
        f"{metrics.pair_accuracy:.4f} over {metrics.n_pairs} pairs (target 0.25 +/- 0.02)",
    )


def test_chance_alignment_probability(acceptance_report):
    value = chance_alignment_probability(4, 3, 0.25)
    assert value == 13 / 256
    assert value == 0.05078125
    acceptance_report(
        "chance-alignment probability exact",
        True,
        "P(>=3 of 4 at p=0.25) = 13/256 = 0.05078125",
    )


def test_baseline_learnability(learner_runs, tmp_path, acceptance_report):
    diagnoses = []
    for pid in PARADIGM_IDS:
        structural = learner_runs[(pid, "structural")]
        for name, metrics in structural.splits.items():
            assert metrics.pair_accuracy == 1.0, (
                f"{pid} structural featurizer {name} pair accuracy "
                f"{metrics.pair_accuracy}"
            )
        surface = learner_runs[(pid, "surface")]
        fit = surface.split("train").train_pair_accuracy
        assert fit >= 0.99, f"{pid} surface train-pair accuracy {fit}"
        diag = surface.split("test").diagnosis
        diagnoses.append(f"{pid} S/L/O={diag.structural:.2f}/{diag.linear:.2f}/{diag.other:.2f}")

    results = [learner_runs[key] for key in sorted(learner_runs)]
    paths = write_results(tmp_path, results)
    table = open(paths["table"]).read()
    assert "diag" in table.splitlines()[0]
    acceptance_report(
        "baseline learnability and surface diagnosis",
        True,
        "structural 100% everywhere; surface fits training; " + "; ".join(diagnoses),
    )


def test_generation_determinism(tmp_path, acceptance_report):
    spec = DatasetSpec(paradigm="reflexive", n_per_split=400, master_seed=77)
    sequential = write_dataset(build_splits(spec, jobs=1), tmp_path / "a")
    again = write_dataset(build_splits(spec, jobs=1), tmp_path / "b")
    parallel = write_dataset(build_splits(spec, jobs=2), tmp_path / "c")
    for name in sequential["files"]:
        assert sequential["files"][name]["sha256"] == again["files"][name]["sha256"]
        assert sequential["files"][name]["sha256"] == parallel["files"][name]["sha256"]
    acceptance_report(
        "byte-identical regeneration, independent of parallelism",
        True,
        "repeat run and jobs=2 digests equal",
    )


def test_gradient_correctness(acceptance_report):
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(100):
        n, dim = rng.integers(2, 10), rng.integers(2, 8)
        X = rng.normal(size=(n, dim))
        y = (rng.random(n) > 0.5).astype(float)
        w = rng.normal(size=dim)
        b = float(rng.normal())
        _, grad_w, grad_b = logistic_loss_and_gradient(w, b, X, y)
        eps = 1e-6
        for j in range(dim):
            unit = np.zeros(dim)
            unit[j] = eps
            hi, _, _ = logistic_loss_and_gradient(w + unit, b, X, y)
            lo, _, _ = logistic_loss_and_gradient(w - unit, b, X, y)
            numeric = (hi - lo) / (2 * eps)
            rel = abs(numeric - grad_w[j]) / max(abs(numeric), abs(grad_w[j]), 1e-8)
            worst = max(worst, rel)
            assert rel < 1e-6
        hi, _, _ = logistic_loss_and_gradient(w, b + eps, X, y)
        lo, _, _ = logistic_loss_and_gradient(w, b - eps, X, y)
        numeric = (hi - lo) / (2 * eps)
        rel = abs(numeric - grad_b) / max(abs(numeric), abs(grad_b), 1e-8)
        worst = max(worst, rel)
        assert rel < 1e-6
    acceptance_report(
        "analytic gradients match finite differences",
        True,
        f"100 instances, worst relative error {worst:.2e} < 1e-6",
    )
