import math
import random

import numpy as np
import pytest

from posdkit.datasets import DatasetSpec, SplitRecord
from posdkit.learners import (
    EmptyTrainingSetError,
    EvalSet,
    HASH_DIM,
    LearnerError,
    LinearModel,
    TrainConfig,
    UnpairedRecordError,
    chance_alignment_probability,
    evaluate_predictions,
    featurize_surface,
    hash_bucket,
    logistic_loss_and_gradient,
    make_featurizer,
    oracle_predictions,
    random_predictions,
    run_restarts,
    split_metrics,
    surface_feature_names,
    train,
    train_and_evaluate,
    vectorize,
)
from posdkit.pipeline import build_eval_sets


@pytest.fixture(scope="module")
def npi_sets():
    spec = DatasetSpec(paradigm="npi", n_per_split=160, master_seed=21)
    eval_sets, _ = build_eval_sets(spec, "surface")
    return eval_sets


def test_surface_features_enumerable():
    names = surface_feature_names(["go", "."])
    assert sorted(names) == sorted(
        ["uni:go", "uni:.", "bi:go_.", "pos:go@0", "pos:.@1", "first:go", "last:."]
    )
    vec = featurize_surface(["go", "."])
    assert vec == {}.fromkeys(vec) or all(v >= 1.0 for v in vec.values())
    assert sum(vec.values()) == len(names)


def test_identical_sentences_identical_vectors():
    tokens = "The boy that loves himself talks to ladies .".split()
    assert featurize_surface(tokens) == featurize_surface(list(tokens))


def test_surface_diff_touches_only_edited_positions(reference_quads):
    a, b = reference_quads["saux_inv"].pair("train")
    names_a = set(surface_feature_names(list(a.tokens)))
    names_b = set(surface_feature_names(list(b.tokens)))
    changed_tokens = {"Has", "Is", "is", "has", "going", "seen", "who"}
    changed_positions = {"0", "4", "5", "6"}
    for name in names_a ^ names_b:
        kind, _, rest = name.partition(":")
        if kind == "pos":
            token, _, position = rest.rpartition("@")
            assert position in changed_positions and token in changed_tokens, name
        elif kind in ("uni", "first"):
            assert rest in changed_tokens, name
        elif kind == "bi":
            assert set(rest.split("_")) & changed_tokens, name
        else:
            raise AssertionError(f"unexpected differing feature {name}")


def test_hashing_is_stable():
    # Frozen expectations guard against accidental hash-seed changes, which
    # would silently re-bucket every stored model's features.
    assert hash_bucket("uni:go") == hash_bucket("uni:go")
    vec = featurize_surface(["go"])
    assert set(vec) == {hash_bucket("uni:go"), hash_bucket("pos:go@0"),
                        hash_bucket("first:go"), hash_bucket("last:go")}


def test_structural_featurizer_single_indicator(reference_quads):
    featurize = make_featurizer("structural", paradigm="reflexive")
    quad = reference_quads["reflexive"]
    pos = featurize(None, quad.member("test-A"))
    neg = featurize(None, quad.member("test-B"))
    assert len(pos) == 1 and list(pos.values()) == [1.0]
    assert neg == {}


def test_linear_featurizer_mirrors_linear_label(reference_quads):
    featurize = make_featurizer("linear", paradigm="saux_inv")
    quad = reference_quads["saux_inv"]
    assert featurize(None, quad.member("test-B"))  # linear-positive cell
    assert featurize(None, quad.member("test-A")) == {}


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(0)
    for _ in range(100):
        n, dim = rng.integers(2, 12), rng.integers(2, 9)
        X = rng.normal(size=(n, dim))
        y = (rng.random(n) > 0.5).astype(float)
        w = rng.normal(size=dim)
        b = float(rng.normal())
        l2 = float(rng.choice([0.0, 0.01]))
        _, grad_w, grad_b = logistic_loss_and_gradient(w, b, X, y, l2=l2)
        eps = 1e-6
        for j in range(dim):
            unit = np.zeros(dim)
            unit[j] = eps
            hi, _, _ = logistic_loss_and_gradient(w + unit, b, X, y, l2=l2)
            lo, _, _ = logistic_loss_and_gradient(w - unit, b, X, y, l2=l2)
            numeric = (hi - lo) / (2 * eps)
            denom = max(abs(numeric), abs(grad_w[j]), 1e-8)
            assert abs(numeric - grad_w[j]) / denom < 1e-6
        hi, _, _ = logistic_loss_and_gradient(w, b + eps, X, y, l2=l2)
        lo, _, _ = logistic_loss_and_gradient(w, b - eps, X, y, l2=l2)
        numeric = (hi - lo) / (2 * eps)
        assert abs(numeric - grad_b) / max(abs(numeric), abs(grad_b), 1e-8) < 1e-6


def test_training_deterministic(npi_sets):
    config = TrainConfig(seed=5, epochs=3)
    m1 = train(config, npi_sets["train"].matrix, npi_sets["train"].labels)
    m2 = train(config, npi_sets["train"].matrix, npi_sets["train"].labels)
    assert np.array_equal(m1.weights, m2.weights) and m1.bias == m2.bias


def test_empty_training_set():
    empty = vectorize([])
    with pytest.raises(EmptyTrainingSetError):
        train(TrainConfig(), empty, np.zeros(0))


def test_model_save_load_round_trip(npi_sets, tmp_path):
    config = TrainConfig(seed=2, epochs=2)
    model = train(config, npi_sets["train"].matrix, npi_sets["train"].labels)
    path = tmp_path / "model.json"
    model.save(path)
    loaded = LinearModel.load(path)
    X = npi_sets["test"].matrix
    assert np.array_equal(model.predict(X), loaded.predict(X))


def test_pair_accuracy_bounded_by_item_accuracy(npi_sets):
    for seed in range(5):
        for name, eval_set in npi_sets.items():
            predictions = random_predictions(eval_set.records, seed)
            metrics = split_metrics(eval_set.records, predictions, name)
            assert metrics.pair_accuracy <= metrics.item_accuracy + 1e-12
            diag = metrics.diagnosis
            if diag.n_pairs:
                assert math.isclose(diag.structural + diag.linear + diag.other, 1.0)


def test_oracle_structural_is_perfect(npi_sets):
    for name, eval_set in npi_sets.items():
        predictions = oracle_predictions(eval_set.records, "structural")
        metrics = split_metrics(eval_set.records, predictions, name)
        assert metrics.item_accuracy == 1.0 and metrics.pair_accuracy == 1.0


def test_oracle_linear_pattern(npi_sets):
    for name, eval_set in npi_sets.items():
        predictions = oracle_predictions(eval_set.records, "linear")
        metrics = split_metrics(eval_set.records, predictions, name)
        assert metrics.train_pair_accuracy == 1.0
        if metrics.n_test_pairs:
            assert metrics.test_pair_accuracy == 0.0
            assert metrics.diagnosis.linear == 1.0


def test_unpaired_record_error(npi_sets):
    records = npi_sets["dev"].records[:3]  # breaks one pair
    with pytest.raises(UnpairedRecordError):
        split_metrics(records, [True, True, True], "dev")


def test_controls_join_item_metrics_only():
    record = SplitRecord(text="Has the man who went seen the cat ?", label=True,
                         label_linear=True, paradigm="saux_inv", split="train",
                         template_kind="train", quad_id=-1, cell="control")
    metrics = split_metrics([record], [True], "train")
    assert metrics.n_items == 1 and metrics.n_pairs == 0


def test_run_restarts_reproducible(npi_sets):
    config = TrainConfig(seed=7, epochs=2)
    s1 = run_restarts(config, npi_sets, "npi", "surface", 3)
    s2 = run_restarts(config, npi_sets, "npi", "surface", 3)
    assert [r.to_dict() for r in s1.results] == [r.to_dict() for r in s2.results]
    assert len({r.seed for r in s1.results}) == 3
    single = train_and_evaluate(TrainConfig(seed=7, epochs=2), npi_sets, "npi", "surface")
    assert s1.results[0].to_dict() == single.to_dict()


def test_restart_summary_stats(npi_sets):
    config = TrainConfig(seed=0, epochs=1)
    summary = run_restarts(config, npi_sets, "npi", "surface", 3)
    scores = sorted(r.split("test").test_pair_accuracy for r in summary.results)
    assert summary.min_test_pair_accuracy == scores[0]
    assert summary.max_test_pair_accuracy == scores[-1]
    assert summary.median_test_pair_accuracy == scores[1]


def test_eval_result_round_trip(npi_sets):
    result = train_and_evaluate(TrainConfig(seed=1, epochs=1), npi_sets, "npi", "surface")
    from posdkit.learners import EvalResult

    clone = EvalResult.from_dict(result.to_dict())
    assert clone.to_dict() == result.to_dict()


def test_chance_alignment_probability_exact():
    assert chance_alignment_probability(4, 3, 0.25) == 13 / 256 == 0.05078125
    assert chance_alignment_probability(6, 0, 0.37) == 1.0
    assert chance_alignment_probability(4, 5, 0.25) == 0.0


def test_chance_alignment_probability_domain_errors():
    with pytest.raises(ValueError):
        chance_alignment_probability(-1, 0, 0.5)
    with pytest.raises(ValueError):
        chance_alignment_probability(4, -1, 0.5)
    with pytest.raises(ValueError):
        chance_alignment_probability(4, 2, 1.5)
    with pytest.raises(ValueError):
        chance_alignment_probability(4.0, 2, 0.5)


def test_vectorize_shapes():
    X = vectorize([{3: 1.0, 7: 2.0}, {}, {HASH_DIM - 1: 1.0}])
    assert X.shape == (3, HASH_DIM)
    assert X[0, 3] == 1.0 and X[0, 7] == 2.0 and X[1].nnz == 0
